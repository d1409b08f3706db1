#include "skan/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace skan {

namespace {

void put_le64(std::ostream& out, double v) {
    const uint64_t u = std::bit_cast<uint64_t>(v);
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = char((u >> (8 * i)) & 0xff);
    out.write(b, 8);
}

double get_le64(std::istream& in) {
    char b[8];
    in.read(b, 8);
    if (!in) throw std::runtime_error("checkpoint: truncated K payload");
    uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= uint64_t(uint8_t(b[i])) << (8 * i);
    return std::bit_cast<double>(u);
}

std::string read_header_line(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("checkpoint: missing header line");
    return line;
}

}  // namespace

void save_layer(std::ostream& out, const Layer<double>& layer) {
    out << "skan-layer v1 " << basis_name(layer.basis) << ' ' << layer.n_in << ' ' << layer.n_out
        << '\n';
    for (const double v : layer.k.data) put_le64(out, v);
}

Layer<double> load_layer(std::istream& in) {
    std::istringstream hdr(read_header_line(in));
    std::string tag, version, basis;
    int n_in = 0, n_out = 0;
    if (!(hdr >> tag >> version >> basis >> n_in >> n_out) || tag != "skan-layer" ||
        version != "v1")
        throw std::runtime_error("checkpoint: bad layer header");
    Layer<double> layer(n_in, n_out, parse_basis(basis));
    for (auto& v : layer.k.data) v = get_le64(in);
    return layer;
}

void save_network(std::ostream& out, const Network<double>& net) {
    out << "skan-net v1 " << basis_name(net.basis);
    for (const int d : net.dims) out << ' ' << d;
    out << '\n';
    for (const auto& l : net.layers) save_layer(out, l);
}

Network<double> load_network(std::istream& in) {
    std::istringstream hdr(read_header_line(in));
    std::string tag, version, basis;
    if (!(hdr >> tag >> version >> basis) || tag != "skan-net" || version != "v1")
        throw std::runtime_error("checkpoint: bad network header");
    std::vector<int> dims;
    for (int d = 0; hdr >> d;) dims.push_back(d);
    Network<double> net = make_network<double>(dims, parse_basis(basis));
    for (size_t l = 0; l < net.layers.size(); ++l) {
        Layer<double> loaded = load_layer(in);
        if (loaded.n_in != net.layers[l].n_in || loaded.n_out != net.layers[l].n_out ||
            loaded.basis != net.basis)
            throw std::runtime_error("checkpoint: layer " + std::to_string(l) +
                                     " does not match the network header");
        net.layers[l] = std::move(loaded);
    }
    return net;
}

void save_network_file(const std::string& path, const Network<double>& net) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("checkpoint: cannot open " + path + " for writing");
    save_network(out, net);
    if (!out) throw std::runtime_error("checkpoint: write failed for " + path);
}

Network<double> load_network_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint: cannot open " + path);
    return load_network(in);
}

}  // namespace skan

#pragma once

#include <iosfwd>
#include <string>

#include "skan/network.hpp"

namespace skan {

// Checkpoint wire format, bit-exact and host-endianness independent:
//
//   layer block:    "skan-layer v1 <basis> <n_in> <n_out>\n"
//                   followed by n_out*n_in little-endian IEEE-754 doubles,
//                   row-major K
//   network file:   "skan-net v1 <basis> <d0> <d1> ... <dL>\n"
//                   followed by one layer block per layer, in order
//
// Float networks are widened to double for saving.

void save_layer(std::ostream& out, const Layer<double>& layer);
Layer<double> load_layer(std::istream& in);

void save_network(std::ostream& out, const Network<double>& net);
Network<double> load_network(std::istream& in);

void save_network_file(const std::string& path, const Network<double>& net);
Network<double> load_network_file(const std::string& path);

template <class T>
Network<double> widen(const Network<T>& net) {
    Network<double> out = make_network<double>(net.dims, net.basis);
    for (size_t l = 0; l < net.layers.size(); ++l)
        for (size_t i = 0; i < net.layers[l].k.data.size(); ++i)
            out.layers[l].k.data[i] = double(net.layers[l].k.data[i]);
    return out;
}

}  // namespace skan

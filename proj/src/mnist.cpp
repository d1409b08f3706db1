#include "skan/mnist.hpp"

#include <zlib.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace skan {

namespace {

std::string hex32(uint32_t v) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%08x", v);
    return buf;
}

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path);
    std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
    return data;
}

std::vector<uint8_t> gunzip(const std::vector<uint8_t>& in, const std::string& path) {
    z_stream strm{};
    // 15 + 32: accept both zlib and gzip wrappers
    if (inflateInit2(&strm, 15 + 32) != Z_OK)
        throw FormatError("gzip: inflateInit failed for " + path);
    std::vector<uint8_t> out;
    out.reserve(in.size() * 4);
    std::vector<uint8_t> buf(1 << 16);
    strm.next_in = const_cast<Bytef*>(in.data());
    strm.avail_in = uInt(in.size());
    int rc = Z_OK;
    while (rc != Z_STREAM_END) {
        strm.next_out = buf.data();
        strm.avail_out = uInt(buf.size());
        rc = inflate(&strm, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&strm);
            throw FormatError("gzip: corrupt stream in " + path + " (zlib rc " +
                              std::to_string(rc) + ")");
        }
        out.insert(out.end(), buf.data(), buf.data() + (buf.size() - strm.avail_out));
    }
    inflateEnd(&strm);
    return out;
}

std::vector<uint8_t> read_maybe_gzip(const std::string& path) {
    std::vector<uint8_t> data = read_file(path);
    if (data.size() >= 2 && data[0] == 0x1f && data[1] == 0x8b) return gunzip(data, path);
    return data;
}

uint32_t be32(const std::vector<uint8_t>& d, size_t off) {
    return (uint32_t(d[off]) << 24) | (uint32_t(d[off + 1]) << 16) | (uint32_t(d[off + 2]) << 8) |
           uint32_t(d[off + 3]);
}

void require_bytes(const std::vector<uint8_t>& d, size_t need, const std::string& what,
                   const std::string& path) {
    if (d.size() < need)
        throw FormatError(what + ": file truncated (need " + std::to_string(need) +
                          " bytes, have " + std::to_string(d.size()) + ") in " + path);
}

}  // namespace

RawImages load_idx_images(const std::string& path) {
    const std::vector<uint8_t> d = read_maybe_gzip(path);
    require_bytes(d, 16, "images header", path);
    const uint32_t magic = be32(d, 0);
    if (magic != kIdxImagesMagic) {
        std::string msg = "images magic: got " + hex32(magic) + ", expected " +
                          hex32(kIdxImagesMagic);
        if (magic == kIdxLabelsMagic) msg += " (this is the labels magic)";
        throw FormatError(msg + " in " + path);
    }
    const uint32_t count = be32(d, 4);
    const uint32_t rows = be32(d, 8);
    const uint32_t cols = be32(d, 12);
    if (rows != kImageSide)
        throw FormatError("rows: got " + std::to_string(rows) + ", expected 28 in " + path);
    if (cols != kImageSide)
        throw FormatError("cols: got " + std::to_string(cols) + ", expected 28 in " + path);
    const size_t expected = size_t(count) * kImagePixels;
    if (d.size() - 16 != expected)
        throw FormatError("payload: count " + std::to_string(count) + " implies " +
                          std::to_string(expected) + " pixel bytes, file has " +
                          std::to_string(d.size() - 16) + " in " + path);
    RawImages out;
    out.count = int(count);
    out.pixels.assign(d.begin() + 16, d.end());
    return out;
}

std::vector<uint8_t> load_idx_labels(const std::string& path) {
    const std::vector<uint8_t> d = read_maybe_gzip(path);
    require_bytes(d, 8, "labels header", path);
    const uint32_t magic = be32(d, 0);
    if (magic != kIdxLabelsMagic) {
        std::string msg = "labels magic: got " + hex32(magic) + ", expected " +
                          hex32(kIdxLabelsMagic);
        if (magic == kIdxImagesMagic) msg += " (this is the images magic)";
        throw FormatError(msg + " in " + path);
    }
    const uint32_t count = be32(d, 4);
    if (d.size() - 8 != count)
        throw FormatError("payload: count " + std::to_string(count) + " implies " +
                          std::to_string(count) + " label bytes, file has " +
                          std::to_string(d.size() - 8) + " in " + path);
    std::vector<uint8_t> labels(d.begin() + 8, d.end());
    for (size_t i = 0; i < labels.size(); ++i)
        if (labels[i] > 9)
            throw FormatError("label value " + std::to_string(int(labels[i])) + " at index " +
                              std::to_string(i) + " (valid range 0..9) in " + path);
    return labels;
}

std::string find_mnist_file(const std::string& dir, const std::string& base) {
    namespace fs = std::filesystem;
    const std::string plain = dir + "/" + base;
    if (fs::exists(plain)) return plain;
    const std::string gz = plain + ".gz";
    if (fs::exists(gz)) return gz;
    throw FormatError("cannot find " + base + "[.gz] under " + dir);
}

}  // namespace skan

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>
#include <zlib.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>

#include "skan/mnist.hpp"

using namespace skan;

namespace {

void put_be32(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(uint8_t(v >> 24));
    out.push_back(uint8_t(v >> 16));
    out.push_back(uint8_t(v >> 8));
    out.push_back(uint8_t(v));
}

std::vector<uint8_t> images_bytes(int n, uint32_t magic = kIdxImagesMagic, int rows = 28,
                                  int cols = 28) {
    std::vector<uint8_t> f;
    put_be32(f, magic);
    put_be32(f, uint32_t(n));
    put_be32(f, uint32_t(rows));
    put_be32(f, uint32_t(cols));
    for (int i = 0; i < n * rows * cols; ++i) f.push_back(uint8_t(i * 37 % 256));
    return f;
}

std::vector<uint8_t> labels_bytes(const std::vector<uint8_t>& labels,
                                  uint32_t magic = kIdxLabelsMagic) {
    std::vector<uint8_t> f;
    put_be32(f, magic);
    put_be32(f, uint32_t(labels.size()));
    f.insert(f.end(), labels.begin(), labels.end());
    return f;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("skan-mnist-test-" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string write(const std::string& name, const std::vector<uint8_t>& bytes) const {
        const std::string full = (path / name).string();
        std::ofstream out(full, std::ios::binary);
        out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
        return full;
    }
    std::string write_gz(const std::string& name, const std::vector<uint8_t>& bytes) const {
        const std::string full = (path / name).string();
        gzFile gz = gzopen(full.c_str(), "wb");
        REQUIRE(gz != nullptr);
        REQUIRE(gzwrite(gz, bytes.data(), unsigned(bytes.size())) == int(bytes.size()));
        gzclose(gz);
        return full;
    }
};

}  // namespace

TEST_CASE("images: valid file round-trips, gz transparently decompresses") {
    TempDir tmp;
    const auto bytes = images_bytes(3);
    const RawImages plain = load_idx_images(tmp.write("imgs", bytes));
    CHECK(plain.count == 3);
    CHECK(plain.pixels.size() == size_t(3 * kImagePixels));
    CHECK(plain.pixels[0] == 0);
    CHECK(plain.pixels[1] == 37);

    const RawImages gz = load_idx_images(tmp.write_gz("imgs.gz", bytes));
    CHECK(gz.count == 3);
    CHECK(gz.pixels == plain.pixels);
}

TEST_CASE("images: field-specific rejections") {
    TempDir tmp;
    // labels magic in an images slot
    CHECK_THROWS_WITH_AS(load_idx_images(tmp.write("m", images_bytes(2, kIdxLabelsMagic))),
                         doctest::Contains("images magic"), FormatError);
    // wrong spatial dims
    CHECK_THROWS_WITH_AS(load_idx_images(tmp.write("r", images_bytes(2, kIdxImagesMagic, 27, 28))),
                         doctest::Contains("rows"), FormatError);
    CHECK_THROWS_WITH_AS(load_idx_images(tmp.write("c", images_bytes(2, kIdxImagesMagic, 28, 29))),
                         doctest::Contains("cols"), FormatError);
    // truncated payload and truncated header
    auto short_payload = images_bytes(2);
    short_payload.resize(short_payload.size() - 5);
    CHECK_THROWS_WITH_AS(load_idx_images(tmp.write("t", short_payload)),
                         doctest::Contains("payload"), FormatError);
    CHECK_THROWS_WITH_AS(load_idx_images(tmp.write("h", {0x00, 0x00, 0x08})),
                         doctest::Contains("truncated"), FormatError);
    // missing file
    CHECK_THROWS_WITH_AS(load_idx_images((tmp.path / "absent").string()),
                         doctest::Contains("cannot open"), FormatError);
}

TEST_CASE("labels: valid, gz, and rejections with index") {
    TempDir tmp;
    const std::vector<uint8_t> values{3, 1, 4, 1, 5, 9, 2, 6};
    CHECK(load_idx_labels(tmp.write("l", labels_bytes(values))) == values);
    CHECK(load_idx_labels(tmp.write_gz("l.gz", labels_bytes(values))) == values);

    CHECK_THROWS_WITH_AS(load_idx_labels(tmp.write("m", labels_bytes(values, kIdxImagesMagic))),
                         doctest::Contains("labels magic"), FormatError);
    CHECK_THROWS_WITH_AS(load_idx_labels(tmp.write("e", std::vector<uint8_t>{})),
                         doctest::Contains("truncated"), FormatError);
    // out-of-range label byte, named by index
    CHECK_THROWS_WITH_AS(load_idx_labels(tmp.write("v", labels_bytes({1, 2, 10, 3}))),
                         doctest::Contains("label value 10 at index 2"), FormatError);
    auto wrong_count = labels_bytes(values);
    wrong_count.pop_back();
    CHECK_THROWS_WITH_AS(load_idx_labels(tmp.write("n", wrong_count)),
                         doctest::Contains("payload"), FormatError);
}

TEST_CASE("dataset: normalization bounds and count matching") {
    TempDir tmp;
    const std::string imgs = tmp.write("i", images_bytes(4));
    const std::string labels = tmp.write("l", labels_bytes({0, 9, 3, 7}));
    const Dataset<double> ds = load_dataset<double>(imgs, labels);
    CHECK(ds.size() == 4);
    CHECK(ds.images.cols == 784);
    double lo = 1.0, hi = 0.0;
    for (const double v : ds.images.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(lo >= 0.0);
    CHECK(hi <= 1.0);
    CHECK(ds.images(0, 1) == doctest::Approx(37.0 / 255.0));
    CHECK(ds.labels == std::vector<int>{0, 9, 3, 7});

    const std::string fewer = tmp.write("f", labels_bytes({0, 1}));
    CHECK_THROWS_WITH_AS((load_dataset<double>(imgs, fewer)), doctest::Contains("count mismatch"),
                         FormatError);
}

TEST_CASE("find_mnist_file prefers plain over .gz and reports misses") {
    TempDir tmp;
    tmp.write("train-images-idx3-ubyte.gz", images_bytes(1));
    CHECK(find_mnist_file(tmp.path.string(), "train-images-idx3-ubyte") ==
          (tmp.path / "train-images-idx3-ubyte.gz").string());
    tmp.write("train-images-idx3-ubyte", images_bytes(1));
    CHECK(find_mnist_file(tmp.path.string(), "train-images-idx3-ubyte") ==
          (tmp.path / "train-images-idx3-ubyte").string());
    CHECK_THROWS_AS(find_mnist_file(tmp.path.string(), "t10k-images-idx3-ubyte"), FormatError);
}

TEST_CASE("batching: counts, determinism, exact cover") {
    Dataset<double> ds;
    ds.images = MatD(333, 5);
    ds.labels.assign(333, 0);
    for (int i = 0; i < 333; ++i) {
        ds.images(i, 0) = i;  // identity tag per sample
        ds.labels[size_t(i)] = i % 10;
    }

    Rng rng(1);
    const auto batches = make_batches(ds, 64, rng);
    CHECK(batches.size() == (333 + 63) / 64);
    CHECK(batches.back().x.rows == 333 % 64);

    // same seed, identical order
    Rng rng_a(5), rng_b(5);
    const auto a = make_batches(ds, 50, rng_a);
    const auto b = make_batches(ds, 50, rng_b);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].x.data == b[i].x.data);

    // every sample appears exactly once per epoch
    std::multiset<int> seen;
    for (const auto& mb : a)
        for (int r = 0; r < mb.x.rows; ++r) seen.insert(int(mb.x(r, 0)));
    CHECK(seen.size() == 333);
    for (int i = 0; i < 333; ++i) CHECK(seen.count(i) == 1);

    // batch = n: one batch containing the shuffled dataset
    Rng rng_c(5);
    const auto whole = make_batches(ds, 333, rng_c);
    CHECK(whole.size() == 1);
    CHECK(whole[0].x.rows == 333);

    Rng rng_d(5);
    CHECK_THROWS_AS(make_batches(ds, 0, rng_d), std::invalid_argument);
}

TEST_CASE("batching at MNIST scale: 60000 / 64 -> 937 full batches + one of 32") {
    Dataset<double> ds;
    ds.images = MatD(60000, 1);
    ds.labels.assign(60000, 0);
    Rng rng(2);
    const auto batches = make_batches(ds, 64, rng);
    CHECK(batches.size() == 938);
    for (size_t i = 0; i + 1 < batches.size(); ++i) CHECK(batches[i].x.rows == 64);
    CHECK(batches.back().x.rows == 32);
}

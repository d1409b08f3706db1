#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "skan/matrix.hpp"
#include "skan/rng.hpp"

namespace skan {

// Malformed or mismatched IDX input. The message always names the offending
// field (magic, count, rows, cols, payload, label value ...).
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr uint32_t kIdxLabelsMagic = 0x00000801;
inline constexpr int kImageSide = 28;
inline constexpr int kImagePixels = kImageSide * kImageSide;  // 784

struct RawImages {
    int count = 0;
    std::vector<uint8_t> pixels;  // count * 784, row-major per image
};

// IDX readers. Headers are big-endian on disk and decoded byte-wise, so the
// result is independent of host endianness. Files whose first two bytes are
// the gzip magic are transparently decompressed.
RawImages load_idx_images(const std::string& path);
std::vector<uint8_t> load_idx_labels(const std::string& path);

// Resolves "<dir>/<base>" or "<dir>/<base>.gz", in that order.
std::string find_mnist_file(const std::string& dir, const std::string& base);

inline constexpr const char* kTrainImagesBase = "train-images-idx3-ubyte";
inline constexpr const char* kTrainLabelsBase = "train-labels-idx1-ubyte";
inline constexpr const char* kTestImagesBase = "t10k-images-idx3-ubyte";
inline constexpr const char* kTestLabelsBase = "t10k-labels-idx1-ubyte";

// Flattened images scaled to [0,1] by 1/255 (no mean/std standardization),
// plus integer labels. Immutable once built.
template <class T>
struct Dataset {
    Mat<T> images;            // n x 784
    std::vector<int> labels;  // n, each in [0,9]
    int size() const { return images.rows; }
};

template <class T>
Dataset<T> make_dataset(const RawImages& imgs, std::span<const uint8_t> labels) {
    if (int(labels.size()) != imgs.count)
        throw FormatError("count mismatch: " + std::to_string(imgs.count) + " images vs " +
                          std::to_string(labels.size()) + " labels");
    Dataset<T> ds;
    ds.images = Mat<T>(imgs.count, kImagePixels);
    for (size_t i = 0; i < imgs.pixels.size(); ++i)
        ds.images.data[i] = T(imgs.pixels[i] / 255.0);
    ds.labels.assign(labels.begin(), labels.end());
    return ds;
}

template <class T>
Dataset<T> load_dataset(const std::string& images_path, const std::string& labels_path) {
    const RawImages imgs = load_idx_images(images_path);
    const std::vector<uint8_t> labels = load_idx_labels(labels_path);
    return make_dataset<T>(imgs, labels);
}

template <class T>
struct MnistData {
    Dataset<T> train;
    Dataset<T> test;
};

template <class T>
MnistData<T> load_mnist(const std::string& dir) {
    return MnistData<T>{
        load_dataset<T>(find_mnist_file(dir, kTrainImagesBase), find_mnist_file(dir, kTrainLabelsBase)),
        load_dataset<T>(find_mnist_file(dir, kTestImagesBase), find_mnist_file(dir, kTestLabelsBase)),
    };
}

// One shuffled pass over [0, n).
inline std::vector<int32_t> shuffled_indices(int n, Rng& rng) {
    std::vector<int32_t> idx(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) idx[size_t(i)] = i;
    rng.shuffle(idx);
    return idx;
}

template <class T>
struct MiniBatch {
    Mat<T> x;
    std::vector<int> y;
};

template <class T>
MiniBatch<T> gather_batch(const Dataset<T>& ds, std::span<const int32_t> idx) {
    MiniBatch<T> b;
    b.x = Mat<T>(int(idx.size()), ds.images.cols);
    b.y.resize(idx.size());
    for (size_t r = 0; r < idx.size(); ++r) {
        const int src = idx[r];
        const T* from = ds.images.row(src);
        T* to = b.x.row(int(r));
        for (int c = 0; c < ds.images.cols; ++c) to[c] = from[c];
        b.y[r] = ds.labels[size_t(src)];
    }
    return b;
}

// One epoch worth of batches: a full shuffled pass, final short batch kept.
template <class T>
std::vector<MiniBatch<T>> make_batches(const Dataset<T>& ds, int batch, Rng& rng) {
    if (batch < 1) throw std::invalid_argument("make_batches: batch must be >= 1");
    const std::vector<int32_t> idx = shuffled_indices(ds.size(), rng);
    std::vector<MiniBatch<T>> out;
    for (int start = 0; start < ds.size(); start += batch) {
        const int count = std::min(batch, ds.size() - start);
        out.push_back(gather_batch(ds, std::span(idx).subspan(size_t(start), size_t(count))));
    }
    return out;
}

}  // namespace skan

#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace skan {

// Dense row-major matrix over float or double: the numeric substrate for
// parameter grids, batches and gradients. No broadcasting, no views, no
// sparse storage. Double is the default precision; float is the training
// speed option.
template <class T>
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<T> data;  // rows * cols, row-major

    Mat() = default;

    Mat(int r, int c) : rows(r), cols(c), data(checked_len(r, c), T(0)) {}

    Mat(int r, int c, std::vector<T> d) : rows(r), cols(c), data(std::move(d)) {
        if (data.size() != checked_len(r, c))
            throw std::invalid_argument("Mat: data length " + std::to_string(data.size()) +
                                        " != " + std::to_string(r) + "x" + std::to_string(c));
    }

    static Mat from_rows(std::initializer_list<std::initializer_list<T>> lists) {
        Mat m(int(lists.size()), lists.size() ? int(lists.begin()->size()) : 0);
        int r = 0;
        for (const auto& row : lists) {
            if (int(row.size()) != m.cols)
                throw std::invalid_argument("Mat::from_rows: ragged rows");
            int c = 0;
            for (const T v : row) m(r, c++) = v;
            ++r;
        }
        return m;
    }

    T& operator()(int r, int c) { return data[size_t(r) * size_t(cols) + size_t(c)]; }
    const T& operator()(int r, int c) const { return data[size_t(r) * size_t(cols) + size_t(c)]; }

    T* row(int r) { return data.data() + size_t(r) * size_t(cols); }
    const T* row(int r) const { return data.data() + size_t(r) * size_t(cols); }

    size_t size() const { return data.size(); }
    bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }

private:
    static size_t checked_len(int r, int c) {
        if (r < 0 || c < 0) throw std::invalid_argument("Mat: negative dimension");
        return size_t(r) * size_t(c);
    }
};

using MatD = Mat<double>;
using MatF = Mat<float>;

template <class T, class F>
Mat<T> elementwise_map(const Mat<T>& m, F&& f) {
    Mat<T> out(m.rows, m.cols);
    for (size_t i = 0; i < m.data.size(); ++i) out.data[i] = f(m.data[i]);
    return out;
}

// Per-row sum over ascending column index. The fixed order is what makes
// repeated runs bitwise identical.
template <class T>
std::vector<T> row_reduce_sum(const Mat<T>& m) {
    std::vector<T> out(size_t(m.rows), T(0));
    for (int r = 0; r < m.rows; ++r) {
        const T* p = m.row(r);
        T acc = 0;
        for (int c = 0; c < m.cols; ++c) acc += p[c];
        out[size_t(r)] = acc;
    }
    return out;
}

template <class T>
bool all_finite(const Mat<T>& m) {
    for (const T v : m.data)
        if (!std::isfinite(double(v))) return false;
    return true;
}

}  // namespace skan

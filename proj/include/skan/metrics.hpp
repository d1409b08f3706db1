#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "skan/matrix.hpp"

namespace skan {

template <class T>
struct XentResult {
    double loss;        // mean cross-entropy over the batch
    Mat<T> d_logits;    // (softmax - onehot) / batch
};

// Numerically stable (max-subtracted) softmax cross-entropy. Row math runs
// in double regardless of T. Non-finite logits surface as a non-finite loss
// rather than an exception; the training loop treats that as divergence.
template <class T>
XentResult<T> softmax_xent(const Mat<T>& logits, std::span<const int> labels) {
    if (logits.rows == 0) throw std::invalid_argument("softmax_xent: empty batch");
    if (int(labels.size()) != logits.rows)
        throw std::invalid_argument("softmax_xent: " + std::to_string(labels.size()) +
                                    " labels for " + std::to_string(logits.rows) + " rows");
    XentResult<T> r{0.0, Mat<T>(logits.rows, logits.cols)};
    const double inv_b = 1.0 / logits.rows;
    double loss_sum = 0.0;
    for (int b = 0; b < logits.rows; ++b) {
        const int label = labels[size_t(b)];
        if (label < 0 || label >= logits.cols)
            throw std::invalid_argument("softmax_xent: label " + std::to_string(label) +
                                        " out of range [0, " + std::to_string(logits.cols) + ")");
        const T* row = logits.row(b);
        double mx = double(row[0]);
        for (int c = 1; c < logits.cols; ++c)
            if (double(row[c]) > mx) mx = double(row[c]);
        double sum = 0.0;
        for (int c = 0; c < logits.cols; ++c) sum += std::exp(double(row[c]) - mx);
        const double log_z = mx + std::log(sum);
        loss_sum += log_z - double(row[label]);
        T* drow = r.d_logits.row(b);
        for (int c = 0; c < logits.cols; ++c) {
            const double p = std::exp(double(row[c]) - mx) / sum;
            drow[c] = T((p - (c == label ? 1.0 : 0.0)) * inv_b);
        }
    }
    r.loss = loss_sum * inv_b;
    return r;
}

// Argmax per row; ties go to the lowest class index so metrics are
// deterministic.
template <class T>
std::vector<int> argmax_rows(const Mat<T>& logits) {
    std::vector<int> out(size_t(logits.rows), 0);
    for (int b = 0; b < logits.rows; ++b) {
        const T* row = logits.row(b);
        int best = 0;
        for (int c = 1; c < logits.cols; ++c)
            if (row[c] > row[best]) best = c;
        out[size_t(b)] = best;
    }
    return out;
}

inline double accuracy(std::span<const int> preds, std::span<const int> labels) {
    if (preds.empty()) throw std::invalid_argument("accuracy: empty input");
    if (preds.size() != labels.size())
        throw std::invalid_argument("accuracy: length mismatch");
    size_t correct = 0;
    for (size_t i = 0; i < preds.size(); ++i) correct += preds[i] == labels[i];
    return double(correct) / double(preds.size());
}

// Unweighted mean over all classes of 2PR/(P+R); a class with P + R = 0
// contributes 0. P (or R) with an empty denominator counts as 0.
inline double macro_f1(std::span<const int> preds, std::span<const int> labels, int n_classes) {
    if (preds.empty()) throw std::invalid_argument("macro_f1: empty input");
    if (preds.size() != labels.size()) throw std::invalid_argument("macro_f1: length mismatch");
    if (n_classes < 1) throw std::invalid_argument("macro_f1: n_classes must be >= 1");
    std::vector<long long> tp(size_t(n_classes), 0), fp(size_t(n_classes), 0),
        fn(size_t(n_classes), 0);
    for (size_t i = 0; i < preds.size(); ++i) {
        const int p = preds[i], l = labels[i];
        if (p < 0 || p >= n_classes || l < 0 || l >= n_classes)
            throw std::invalid_argument("macro_f1: class id out of range");
        if (p == l) {
            ++tp[size_t(p)];
        } else {
            ++fp[size_t(p)];
            ++fn[size_t(l)];
        }
    }
    double total = 0.0;
    for (int c = 0; c < n_classes; ++c) {
        const long long tpc = tp[size_t(c)];
        const double prec = (tpc + fp[size_t(c)]) > 0 ? double(tpc) / double(tpc + fp[size_t(c)]) : 0.0;
        const double rec = (tpc + fn[size_t(c)]) > 0 ? double(tpc) / double(tpc + fn[size_t(c)]) : 0.0;
        total += (prec + rec) > 0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
    }
    return total / double(n_classes);
}

}  // namespace skan

#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "skan/metrics.hpp"
#include "skan/mnist.hpp"
#include "skan/network.hpp"
#include "skan/optim.hpp"

namespace skan {

// ---------------------------------------------------------------------------
// Run bookkeeping
// ---------------------------------------------------------------------------

struct TrainConfig {
    BasisId basis = BasisId::LShiftedSoftplus;
    std::vector<int> dims = {784, 100, 10};
    double lr = 4e-3;
    int epochs = 10;
    int batch = 64;
    uint64_t seed = 0;
};

enum class RunStatus { Ok, Diverged };

// One CSV row: per-epoch metrics for one split of one run. Diverged rows
// carry no metric values (NaN here, empty fields on disk) and terminate
// their run.
struct RunRecord {
    BasisId basis = BasisId::LShiftedSoftplus;
    std::vector<int> dims;
    double lr = 0.0;
    uint64_t seed = 0;
    int epoch = 0;  // 1-based
    std::string split;
    double loss = 0.0;
    double accuracy = 0.0;
    double f1 = 0.0;
    double epoch_time_s = 0.0;
    RunStatus status = RunStatus::Ok;
};

struct SweepPlan {
    std::vector<double> lr_grid;
    int repeats = 1;
    int epochs = 10;
    int batch = 64;
    BasisId basis = BasisId::LShiftedSoftplus;
    std::vector<int> dims = {784, 100, 10};
    uint64_t seed_base = 0;
};

// A run is declared divergent on the first non-finite loss or parameter, or
// when train accuracy is still under 0.2 from epoch 2 on (the plotting
// cutoff used for the figures). Divergent runs stop early.
inline constexpr double kDivergenceAccuracyFloor = 0.2;
inline constexpr int kDivergenceFloorEpoch = 2;

// ---------------------------------------------------------------------------
// Learning-rate grids
// ---------------------------------------------------------------------------

// 27 values: {1..9}x1e-4, {1..9}x1e-3, {1..9}x1e-2 (the 10-epoch protocol).
std::vector<double> lr_grid_paper();
// 19 values: {1..9}x1e-4, {1..10}x1e-3 (the 30-epoch protocol).
std::vector<double> lr_grid_paper30();
// n equidistant points from lo to hi inclusive.
std::vector<double> lr_grid_linear(double lo, double hi, int n);
// "paper" | "paper30" | "LO:HI:N"
std::vector<double> parse_lr_grid(const std::string& spec);
// strictly increasing, all positive and finite
void validate_lr_grid(std::span<const double> grid);

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

std::string dims_to_string(std::span<const int> dims);     // "784x100x10"
std::vector<int> parse_dims(const std::string& spec);      // "784,100,10"

std::string csv_header();  // basis,dims,lr,seed,epoch,split,loss,accuracy,f1,epoch_time_s,status
std::string csv_row(const RunRecord& r);
void write_csv(std::ostream& out, std::span<const RunRecord> records);
void write_csv_file(const std::string& path, std::span<const RunRecord> records);

// Per lr, the repeat with the highest final test accuracy (ties: lower
// seed); diverged repeats are excluded. Returns the winner's final-epoch
// train+test rows verbatim, or the lowest-seed diverged row when every
// repeat diverged.
std::vector<RunRecord> summarize_best_per_lr(std::span<const RunRecord> runs);

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

struct EpochEval {
    double loss = 0.0;
    double accuracy = 0.0;
    double f1 = 0.0;
};

// Full forward pass over a dataset in natural order; consumes no RNG state.
template <class T>
EpochEval evaluate(const Network<T>& net, const Dataset<T>& ds, int batch) {
    EpochEval ev;
    std::vector<int32_t> iota(size_t(ds.size()));
    for (int i = 0; i < ds.size(); ++i) iota[size_t(i)] = i;
    std::vector<int> preds(size_t(ds.size()));
    double loss_sum = 0.0;
    for (int start = 0; start < ds.size(); start += batch) {
        const int count = std::min(batch, ds.size() - start);
        const MiniBatch<T> mb =
            gather_batch(ds, std::span(iota).subspan(size_t(start), size_t(count)));
        const Mat<T> logits = net_forward(net, mb.x);
        loss_sum += softmax_xent(logits, mb.y).loss * count;
        const std::vector<int> batch_preds = argmax_rows(logits);
        for (int r = 0; r < count; ++r) preds[size_t(start + r)] = batch_preds[size_t(r)];
    }
    ev.loss = loss_sum / ds.size();
    ev.accuracy = accuracy(preds, ds.labels);
    ev.f1 = macro_f1(preds, ds.labels, net.dims.back());
    return ev;
}

template <class T>
bool params_finite(const Network<T>& net) {
    for (const auto& l : net.layers)
        if (!all_finite(l.k)) return false;
    return true;
}

template <class T>
struct TrainResult {
    std::vector<RunRecord> records;
    Network<T> net;  // parameters after the last completed step
    bool diverged = false;
};

namespace detail {
inline RunRecord make_row(const TrainConfig& cfg, int epoch, std::string split,
                          const EpochEval& ev, double epoch_time_s) {
    return RunRecord{cfg.basis, cfg.dims,  cfg.lr, cfg.seed, epoch, std::move(split),
                     ev.loss,   ev.accuracy, ev.f1,  epoch_time_s, RunStatus::Ok};
}
inline RunRecord make_diverged_row(const TrainConfig& cfg, int epoch) {
    const double nan = std::nan("");
    return RunRecord{cfg.basis, cfg.dims, cfg.lr, cfg.seed, epoch, "train",
                     nan,       nan,      nan,    nan,      RunStatus::Diverged};
}
}  // namespace detail

void epoch_progress_line(std::ostream& out, const RunRecord& train_row,
                         const RunRecord& test_row);
void diverged_progress_line(std::ostream& out, const RunRecord& row);
void sweep_progress_line(std::ostream& out, const TrainConfig& cfg,
                         std::span<const RunRecord> records, bool diverged);

// One training run: `epochs` shuffled minibatch-Adam passes, train and test
// splits evaluated after each epoch. epoch_time_s accumulates only the
// forward/backward/update segments, not shuffling or evaluation. The seed
// drives weight init and every epoch shuffle through one Rng stream, so a
// k-epoch run is a prefix of a longer run with the same config.
template <class T>
TrainResult<T> train_once(const TrainConfig& cfg, const Dataset<T>& train,
                          const Dataset<T>& test, std::ostream* progress = nullptr) {
    using clock = std::chrono::steady_clock;
    if (cfg.epochs < 1) throw std::invalid_argument("train_once: epochs must be >= 1");
    if (cfg.batch < 1) throw std::invalid_argument("train_once: batch must be >= 1");
    if (!(cfg.lr > 0.0) || !std::isfinite(cfg.lr))
        throw std::invalid_argument("train_once: lr must be positive and finite");
    if (train.images.cols != cfg.dims.front() || test.images.cols != cfg.dims.front())
        throw std::invalid_argument("train_once: dataset width does not match dims.front()");
    if (train.size() == 0 || test.size() == 0)
        throw std::invalid_argument("train_once: empty dataset");

    Rng rng(cfg.seed);
    TrainResult<T> result;
    result.net = make_network<T>(cfg.dims, cfg.basis, rng);
    Adam<T> adam = Adam<T>::for_network(result.net, cfg.lr);

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        const std::vector<int32_t> idx = shuffled_indices(train.size(), rng);
        double train_seconds = 0.0;
        bool bad_loss = false;
        for (int start = 0; start < train.size(); start += cfg.batch) {
            const int count = std::min(cfg.batch, train.size() - start);
            const MiniBatch<T> mb =
                gather_batch(train, std::span(idx).subspan(size_t(start), size_t(count)));
            const auto t0 = clock::now();
            const ForwardCache<T> cache = net_forward_cached(result.net, mb.x);
            const XentResult<T> xent = softmax_xent(cache.logits(), mb.y);
            if (!std::isfinite(xent.loss)) {
                bad_loss = true;
                break;
            }
            const std::vector<LayerGrads<T>> grads =
                net_backward(result.net, cache, xent.d_logits, /*want_input_grad=*/false);
            adam.step(result.net, grads);
            train_seconds += std::chrono::duration<double>(clock::now() - t0).count();
        }
        if (bad_loss || !params_finite(result.net)) {
            result.records.push_back(detail::make_diverged_row(cfg, epoch));
            result.diverged = true;
            if (progress) diverged_progress_line(*progress, result.records.back());
            break;
        }
        const EpochEval train_ev = evaluate(result.net, train, cfg.batch);
        if (epoch >= kDivergenceFloorEpoch && train_ev.accuracy < kDivergenceAccuracyFloor) {
            result.records.push_back(detail::make_diverged_row(cfg, epoch));
            result.diverged = true;
            if (progress) diverged_progress_line(*progress, result.records.back());
            break;
        }
        const EpochEval test_ev = evaluate(result.net, test, cfg.batch);
        result.records.push_back(detail::make_row(cfg, epoch, "train", train_ev, train_seconds));
        result.records.push_back(detail::make_row(cfg, epoch, "test", test_ev, train_seconds));
        if (progress)
            epoch_progress_line(*progress, result.records[result.records.size() - 2],
                                result.records.back());
    }
    return result;
}

struct SweepResult {
    std::vector<RunRecord> runs;
    std::vector<RunRecord> summary;
};

// The sweep protocol: for each lr and repeat r, one run with seed
// seed_base + r; the summary keeps the best repeat per lr.
template <class T>
SweepResult sweep(const SweepPlan& plan, const Dataset<T>& train, const Dataset<T>& test,
                  std::ostream* progress = nullptr) {
    validate_lr_grid(plan.lr_grid);
    if (plan.repeats < 1) throw std::invalid_argument("sweep: repeats must be >= 1");
    SweepResult result;
    for (const double lr : plan.lr_grid) {
        for (int r = 0; r < plan.repeats; ++r) {
            TrainConfig cfg;
            cfg.basis = plan.basis;
            cfg.dims = plan.dims;
            cfg.lr = lr;
            cfg.epochs = plan.epochs;
            cfg.batch = plan.batch;
            cfg.seed = plan.seed_base + uint64_t(r);
            TrainResult<T> tr = train_once<T>(cfg, train, test);
            result.runs.insert(result.runs.end(), tr.records.begin(), tr.records.end());
            if (progress) sweep_progress_line(*progress, cfg, tr.records, tr.diverged);
        }
    }
    result.summary = summarize_best_per_lr(result.runs);
    return result;
}

}  // namespace skan

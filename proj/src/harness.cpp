#include "skan/harness.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace skan {

std::vector<double> lr_grid_paper() {
    std::vector<double> grid;
    for (const double base : {1e-4, 1e-3, 1e-2})
        for (int i = 1; i <= 9; ++i) grid.push_back(base * i);
    return grid;
}

std::vector<double> lr_grid_paper30() {
    std::vector<double> grid;
    for (int i = 1; i <= 9; ++i) grid.push_back(1e-4 * i);
    for (int i = 1; i <= 10; ++i) grid.push_back(1e-3 * i);
    return grid;
}

std::vector<double> lr_grid_linear(double lo, double hi, int n) {
    if (n < 1) throw std::invalid_argument("lr_grid_linear: n must be >= 1");
    std::vector<double> grid;
    if (n == 1) {
        grid.push_back(lo);
        return grid;
    }
    const double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) grid.push_back(lo + step * i);
    grid.back() = hi;
    return grid;
}

std::vector<double> parse_lr_grid(const std::string& spec) {
    if (spec == "paper") return lr_grid_paper();
    if (spec == "paper30") return lr_grid_paper30();
    double lo = 0, hi = 0;
    int n = 0;
    char colon1 = 0, colon2 = 0;
    std::istringstream in(spec);
    if (in >> lo >> colon1 >> hi >> colon2 >> n && colon1 == ':' && colon2 == ':' && in.eof()) {
        std::vector<double> grid = lr_grid_linear(lo, hi, n);
        validate_lr_grid(grid);
        return grid;
    }
    throw std::invalid_argument("bad grid spec '" + spec + "' (expected paper, paper30 or LO:HI:N)");
}

void validate_lr_grid(std::span<const double> grid) {
    if (grid.empty()) throw std::invalid_argument("lr grid: empty");
    double prev = 0.0;
    for (const double lr : grid) {
        if (!(lr > 0.0) || !std::isfinite(lr))
            throw std::invalid_argument("lr grid: entries must be positive and finite");
        if (lr <= prev) throw std::invalid_argument("lr grid: entries must be strictly increasing");
        prev = lr;
    }
}

std::string dims_to_string(std::span<const int> dims) {
    std::string s;
    for (size_t i = 0; i < dims.size(); ++i) {
        if (i) s += 'x';
        s += std::to_string(dims[i]);
    }
    return s;
}

std::vector<int> parse_dims(const std::string& spec) {
    std::vector<int> dims;
    std::istringstream in(spec);
    std::string part;
    while (std::getline(in, part, ',')) {
        int v = 0;
        const auto [p, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc() || p != part.data() + part.size() || v < 1)
            throw std::invalid_argument("bad dims '" + spec + "' (expected e.g. 784,100,10)");
        dims.push_back(v);
    }
    if (dims.empty()) throw std::invalid_argument("bad dims '" + spec + "': empty");
    return dims;
}

namespace {

// Shortest round-trip decimal; NaN renders as an empty field.
std::string fmt_double(double v) {
    if (!std::isfinite(v)) return "";
    char buf[32];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

}  // namespace

std::string csv_header() {
    return "basis,dims,lr,seed,epoch,split,loss,accuracy,f1,epoch_time_s,status";
}

std::string csv_row(const RunRecord& r) {
    std::string s;
    s += basis_name(r.basis);
    s += ',';
    s += dims_to_string(r.dims);
    s += ',';
    s += fmt_double(r.lr);
    s += ',';
    s += std::to_string(r.seed);
    s += ',';
    s += std::to_string(r.epoch);
    s += ',';
    s += r.split;
    s += ',';
    s += fmt_double(r.loss);
    s += ',';
    s += fmt_double(r.accuracy);
    s += ',';
    s += fmt_double(r.f1);
    s += ',';
    s += fmt_double(r.epoch_time_s);
    s += ',';
    s += r.status == RunStatus::Ok ? "ok" : "diverged";
    return s;
}

void write_csv(std::ostream& out, std::span<const RunRecord> records) {
    out << csv_header() << '\n';
    for (const auto& r : records) out << csv_row(r) << '\n';
}

void write_csv_file(const std::string& path, std::span<const RunRecord> records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_csv(out, records);
    if (!out) throw std::runtime_error("write failed for " + path);
}

std::vector<RunRecord> summarize_best_per_lr(std::span<const RunRecord> runs) {
    // Group on the lr value; doubles compare exactly here because every
    // record of one lr carries the identical grid entry.
    struct RepeatOutcome {
        bool diverged = false;
        int final_epoch = 0;
        double final_test_acc = 0.0;
    };
    std::vector<double> lr_order;
    std::map<double, std::map<uint64_t, RepeatOutcome>> by_lr;
    for (const auto& r : runs) {
        if (by_lr.find(r.lr) == by_lr.end()) lr_order.push_back(r.lr);
        RepeatOutcome& o = by_lr[r.lr][r.seed];
        if (r.status == RunStatus::Diverged) o.diverged = true;
        if (r.split == "test" && r.epoch >= o.final_epoch) {
            o.final_epoch = r.epoch;
            o.final_test_acc = r.accuracy;
        }
    }
    std::vector<RunRecord> summary;
    for (const double lr : lr_order) {
        const auto& repeats = by_lr[lr];
        bool found = false;
        uint64_t best_seed = 0;
        double best_acc = 0.0;
        for (const auto& [seed, o] : repeats) {  // ascending seed: ties keep the lower one
            if (o.diverged) continue;
            if (!found || o.final_test_acc > best_acc) {
                found = true;
                best_seed = seed;
                best_acc = o.final_test_acc;
            }
        }
        if (!found) {
            // Every repeat diverged: carry the lowest seed's diverged row.
            const uint64_t seed = repeats.begin()->first;
            for (const auto& r : runs)
                if (r.lr == lr && r.seed == seed && r.status == RunStatus::Diverged) {
                    summary.push_back(r);
                    break;
                }
            continue;
        }
        const int final_epoch = repeats.at(best_seed).final_epoch;
        for (const auto& r : runs)
            if (r.lr == lr && r.seed == best_seed && r.epoch == final_epoch &&
                r.status == RunStatus::Ok)
                summary.push_back(r);
    }
    return summary;
}

void epoch_progress_line(std::ostream& out, const RunRecord& train_row,
                         const RunRecord& test_row) {
    out << "epoch " << train_row.epoch << ": train loss " << fmt_double(train_row.loss)
        << " acc " << fmt_double(train_row.accuracy) << " | test loss "
        << fmt_double(test_row.loss) << " acc " << fmt_double(test_row.accuracy) << " f1 "
        << fmt_double(test_row.f1) << " | " << fmt_double(train_row.epoch_time_s) << " s"
        << std::endl;
}

void diverged_progress_line(std::ostream& out, const RunRecord& row) {
    out << "epoch " << row.epoch << ": diverged" << std::endl;
}

void sweep_progress_line(std::ostream& out, const TrainConfig& cfg,
                         std::span<const RunRecord> records, bool diverged) {
    out << "lr " << fmt_double(cfg.lr) << " seed " << cfg.seed;
    if (diverged) {
        out << ": diverged at epoch " << (records.empty() ? 0 : records.back().epoch) << '\n';
        return;
    }
    for (auto it = records.rbegin(); it != records.rend(); ++it) {
        if (it->split == "test") {
            out << ": final test acc " << fmt_double(it->accuracy) << " (loss "
                << fmt_double(it->loss) << ", f1 " << fmt_double(it->f1) << ")\n";
            return;
        }
    }
    out << ": no records\n";
}

}  // namespace skan

// Command-line front end: train / sweep / gradcheck / budget / eval.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "skan/budget.hpp"
#include "skan/checkpoint.hpp"
#include "skan/gradcheck.hpp"
#include "skan/harness.hpp"

namespace {

using namespace skan;

struct CommonTrainOpts {
    std::string basis = "lss";
    std::string dims = "784,100,10";
    int epochs = 10;
    int batch = 64;
    std::string data_dir = "data";
    bool f32 = false;
    bool deterministic = false;  // accepted for interface parity; runs are
                                 // always deterministic in this build
};

void add_common_train_opts(CLI::App* cmd, CommonTrainOpts& o) {
    cmd->add_option("--basis", o.basis,
                    "basis function: lrelu lleakyrelu lswish lmish lsoftplus lhardsigmoid "
                    "lelu lss lgelu")
        ->capture_default_str();
    cmd->add_option("--dims", o.dims, "layer sizes, comma separated")->capture_default_str();
    cmd->add_option("--epochs", o.epochs)->capture_default_str();
    cmd->add_option("--batch", o.batch)->capture_default_str();
    cmd->add_option("--data-dir", o.data_dir, "directory with the four MNIST IDX files ([.gz])")
        ->capture_default_str();
    cmd->add_flag("--f32", o.f32, "train in 32-bit (speed mode; 64-bit is the default)");
    cmd->add_flag("--deterministic", o.deterministic,
                  "no-op: every run of this build is deterministic for a given seed");
}

std::string default_summary_path(const std::string& out) {
    const size_t dot = out.rfind('.');
    if (dot == std::string::npos || out.find('/', dot) != std::string::npos)
        return out + ".summary.csv";
    return out.substr(0, dot) + ".summary" + out.substr(dot);
}

template <class T>
int run_train(const CommonTrainOpts& o, double lr, uint64_t seed, const std::string& out,
              const std::string& save) {
    TrainConfig cfg;
    cfg.basis = parse_basis(o.basis);
    cfg.dims = parse_dims(o.dims);
    cfg.lr = lr;
    cfg.epochs = o.epochs;
    cfg.batch = o.batch;
    cfg.seed = seed;
    std::cout << "loading MNIST from " << o.data_dir << " ..." << std::endl;
    const MnistData<T> data = load_mnist<T>(o.data_dir);
    std::cout << "train " << data.train.size() << ", test " << data.test.size() << "; "
              << basis_name(cfg.basis) << " " << dims_to_string(cfg.dims) << " ("
              << total_param_count(cfg.dims) << " params), lr " << lr << ", batch " << cfg.batch
              << ", seed " << seed << (o.f32 ? ", f32" : ", f64") << std::endl;
    const TrainResult<T> res = train_once<T>(cfg, data.train, data.test, &std::cout);
    write_csv_file(out, res.records);
    std::cout << "wrote " << res.records.size() << " rows to " << out << std::endl;
    if (!save.empty()) {
        save_network_file(save, widen(res.net));
        std::cout << "saved checkpoint to " << save << std::endl;
    }
    return res.diverged ? 1 : 0;
}

template <class T>
int run_sweep(const CommonTrainOpts& o, const std::vector<double>& grid, int repeats,
              uint64_t seed_base, const std::string& out, const std::string& summary_out) {
    SweepPlan plan;
    plan.basis = parse_basis(o.basis);
    plan.dims = parse_dims(o.dims);
    plan.lr_grid = grid;
    plan.repeats = repeats;
    plan.epochs = o.epochs;
    plan.batch = o.batch;
    plan.seed_base = seed_base;
    std::cout << "loading MNIST from " << o.data_dir << " ..." << std::endl;
    const MnistData<T> data = load_mnist<T>(o.data_dir);
    std::cout << grid.size() << " learning rates x " << repeats << " repeats x " << o.epochs
              << " epochs, " << basis_name(plan.basis) << " " << dims_to_string(plan.dims)
              << (o.f32 ? ", f32" : ", f64") << std::endl;
    const SweepResult res = sweep<T>(plan, data.train, data.test, &std::cout);
    write_csv_file(out, res.runs);
    write_csv_file(summary_out, res.summary);
    std::cout << "wrote " << res.runs.size() << " rows to " << out << " and "
              << res.summary.size() << " best-per-lr rows to " << summary_out << std::endl;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SKAN training and benchmarking engine"};
    app.require_subcommand(1);

    // --- train ---
    CommonTrainOpts train_opts;
    double train_lr = 4e-3;
    uint64_t train_seed = 0;
    std::string train_out = "runs.csv";
    std::string train_save;
    CLI::App* train_cmd = app.add_subcommand("train", "one training run, per-epoch CSV");
    add_common_train_opts(train_cmd, train_opts);
    train_cmd->add_option("--lr", train_lr)->capture_default_str();
    train_cmd->add_option("--seed", train_seed)->capture_default_str();
    train_cmd->add_option("--out", train_out, "CSV output path")->capture_default_str();
    train_cmd->add_option("--save", train_save, "write a checkpoint after training");

    // --- sweep ---
    CommonTrainOpts sweep_opts;
    std::string sweep_grid = "paper";
    int sweep_repeats = -1;  // default depends on the grid
    uint64_t sweep_seed_base = 0;
    std::string sweep_out = "sweep.csv";
    std::string sweep_summary_out;
    bool sweep_print_grid = false;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "learning-rate sweep with repeats");
    add_common_train_opts(sweep_cmd, sweep_opts);
    sweep_cmd->add_option("--grid", sweep_grid, "paper (27 lrs), paper30 (19 lrs), or LO:HI:N")
        ->capture_default_str();
    sweep_cmd->add_option("--repeats", sweep_repeats,
                          "runs per lr (default 10 for paper grids, 1 otherwise)");
    sweep_cmd->add_option("--seed-base", sweep_seed_base, "seed of repeat r is seed-base + r")
        ->capture_default_str();
    sweep_cmd->add_option("--out", sweep_out, "CSV of every run")->capture_default_str();
    sweep_cmd->add_option("--summary-out", sweep_summary_out,
                          "best-per-lr CSV (default: <out>.summary.csv)");
    sweep_cmd->add_flag("--print-grid", sweep_print_grid, "print the grid and exit");

    // --- gradcheck ---
    std::string gc_basis = "lss";
    std::string gc_dims = "4,3,2";
    uint64_t gc_seed = 0;
    int gc_batch = 4;
    CLI::App* gc_cmd =
        app.add_subcommand("gradcheck", "analytic vs finite-difference gradients");
    gc_cmd->add_option("--basis", gc_basis)->capture_default_str();
    gc_cmd->add_option("--dims", gc_dims, "small layer sizes (each <= 32)")->capture_default_str();
    gc_cmd->add_option("--seed", gc_seed)->capture_default_str();
    gc_cmd->add_option("--batch", gc_batch)->capture_default_str();

    // --- budget ---
    long long budget_total = 80000;
    int budget_n_in = 784;
    int budget_n_out = 10;
    int budget_order = 3;
    CLI::App* budget_cmd =
        app.add_subcommand("budget", "Spl-KAN vs SKAN hidden sizes under a parameter budget");
    budget_cmd->add_option("--budget", budget_total)->capture_default_str();
    budget_cmd->add_option("--n-in", budget_n_in)->capture_default_str();
    budget_cmd->add_option("--n-out", budget_n_out)->capture_default_str();
    budget_cmd->add_option("--spline-order", budget_order)->capture_default_str();

    // --- eval ---
    std::string eval_ckpt;
    std::string eval_data_dir = "data";
    std::string eval_split = "test";
    int eval_batch = 64;
    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint on MNIST");
    eval_cmd->add_option("--ckpt", eval_ckpt, "checkpoint path")->required();
    eval_cmd->add_option("--data-dir", eval_data_dir)->capture_default_str();
    eval_cmd->add_option("--split", eval_split)->check(CLI::IsMember({"train", "test"}))
        ->capture_default_str();
    eval_cmd->add_option("--batch", eval_batch)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*train_cmd)
            return train_opts.f32
                       ? run_train<float>(train_opts, train_lr, train_seed, train_out, train_save)
                       : run_train<double>(train_opts, train_lr, train_seed, train_out,
                                           train_save);

        if (*sweep_cmd) {
            const std::vector<double> grid = parse_lr_grid(sweep_grid);
            if (sweep_print_grid) {
                for (const double lr : grid) std::cout << lr << '\n';
                std::cout << grid.size() << " learning rates" << std::endl;
                return 0;
            }
            const bool paper_grid = sweep_grid == "paper" || sweep_grid == "paper30";
            const int repeats = sweep_repeats > 0 ? sweep_repeats : (paper_grid ? 10 : 1);
            const std::string summary_out = sweep_summary_out.empty()
                                                ? default_summary_path(sweep_out)
                                                : sweep_summary_out;
            return sweep_opts.f32 ? run_sweep<float>(sweep_opts, grid, repeats, sweep_seed_base,
                                                     sweep_out, summary_out)
                                  : run_sweep<double>(sweep_opts, grid, repeats, sweep_seed_base,
                                                      sweep_out, summary_out);
        }

        if (*gc_cmd) {
            const GradcheckReport report =
                gradcheck_network(parse_basis(gc_basis), parse_dims(gc_dims), gc_seed, gc_batch);
            std::printf("gradcheck %s %s: max rel err %.3e over %lld params (%lld kink-adjacent "
                        "skipped) -> %s\n",
                        gc_basis.c_str(), gc_dims.c_str(), report.max_rel_err, report.checked,
                        report.skipped, report.pass() ? "PASS" : "FAIL");
            return report.pass() ? 0 : 1;
        }

        if (*budget_cmd) {
            std::printf("budget %lld, n_in %d, n_out %d, spline order %d\n", budget_total,
                        budget_n_in, budget_n_out, budget_order);
            std::printf("%6s %8s %16s\n", "grid", "hidden", "spl-kan params");
            for (int g = 1; g <= 5; ++g) {
                const long long h =
                    spl_hidden_size(budget_total, budget_n_in, budget_n_out, g, budget_order);
                const long long params = spl_param_count(
                    {budget_n_in, int(h), budget_n_out}, g, budget_order);
                std::printf("%6d %8lld %16lld\n", g, h, params);
            }
            const long long h = skan_hidden_size(budget_total, budget_n_in, budget_n_out);
            std::printf("skan hidden %lld (%lld params, 1 per edge)\n", h,
                        total_param_count({budget_n_in, int(h), budget_n_out}));
            return 0;
        }

        if (*eval_cmd) {
            const Network<double> net = load_network_file(eval_ckpt);
            const Dataset<double> ds =
                eval_split == "train"
                    ? load_dataset<double>(find_mnist_file(eval_data_dir, kTrainImagesBase),
                                           find_mnist_file(eval_data_dir, kTrainLabelsBase))
                    : load_dataset<double>(find_mnist_file(eval_data_dir, kTestImagesBase),
                                           find_mnist_file(eval_data_dir, kTestLabelsBase));
            const EpochEval ev = evaluate(net, ds, eval_batch);
            std::printf("%s %s on %s (%d samples): loss %.6f, accuracy %.4f, macro-f1 %.4f\n",
                        basis_name(net.basis), dims_to_string(net.dims).c_str(),
                        eval_split.c_str(), ds.size(), ev.loss, ev.accuracy, ev.f1);
            return 0;
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << std::endl;
        return 1;
    }
    return 0;
}

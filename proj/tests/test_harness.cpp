#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "skan/gradcheck.hpp"
#include "skan/harness.hpp"
#include "test_util.hpp"

using namespace skan;
using testutil::make_blobs;

namespace {

struct BlobsFixture {
    Dataset<double> train = make_blobs<double>(400, 16, 4, 90, 90);
    Dataset<double> test = make_blobs<double>(120, 16, 4, 90, 91);
    TrainConfig cfg;
    BlobsFixture() {
        cfg.basis = BasisId::LShiftedSoftplus;
        cfg.dims = {16, 12, 4};
        cfg.lr = 0.02;
        cfg.epochs = 4;
        cfg.batch = 32;
        cfg.seed = 0;
    }
};

}  // namespace

TEST_CASE("lr grids: named protocols and linear specs") {
    const auto paper = lr_grid_paper();
    CHECK(paper.size() == 27);
    CHECK(std::count(paper.begin(), paper.end(), 0.004) == 1);
    CHECK(paper.front() == 1e-4);
    CHECK(paper.back() == doctest::Approx(0.09));
    validate_lr_grid(paper);

    const auto paper30 = lr_grid_paper30();
    CHECK(paper30.size() == 19);
    CHECK(std::count(paper30.begin(), paper30.end(), 0.004) == 1);
    CHECK(paper30.back() == doctest::Approx(0.01));
    validate_lr_grid(paper30);

    CHECK(parse_lr_grid("paper").size() == 27);
    CHECK(parse_lr_grid("paper30").size() == 19);
    const auto linear = parse_lr_grid("0.0001:0.0009:9");
    CHECK(linear.size() == 9);
    CHECK(linear.front() == 0.0001);
    CHECK(linear.back() == 0.0009);
    CHECK(lr_grid_linear(0.5, 0.9, 1) == std::vector<double>{0.5});

    CHECK_THROWS_AS(parse_lr_grid("nonsense"), std::invalid_argument);
    CHECK_THROWS_AS(validate_lr_grid(std::vector<double>{0.2, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(validate_lr_grid(std::vector<double>{-0.1, 0.2}), std::invalid_argument);
    CHECK_THROWS_AS(validate_lr_grid(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("dims and CSV formatting") {
    CHECK(dims_to_string(std::vector<int>{784, 100, 10}) == "784x100x10");
    CHECK(parse_dims("784,100,10") == std::vector<int>{784, 100, 10});
    CHECK_THROWS_AS(parse_dims("784,,10"), std::invalid_argument);
    CHECK_THROWS_AS(parse_dims("784,0"), std::invalid_argument);

    CHECK(csv_header() == "basis,dims,lr,seed,epoch,split,loss,accuracy,f1,epoch_time_s,status");

    RunRecord r;
    r.basis = BasisId::LShiftedSoftplus;
    r.dims = {784, 100, 10};
    r.lr = 0.004;
    r.seed = 3;
    r.epoch = 7;
    r.split = "test";
    r.loss = 0.125;
    r.accuracy = 0.9625;
    r.f1 = 0.5;
    r.epoch_time_s = 1.5;
    CHECK(csv_row(r) == "lss,784x100x10,0.004,3,7,test,0.125,0.9625,0.5,1.5,ok");

    r.status = RunStatus::Diverged;
    r.loss = r.accuracy = r.f1 = r.epoch_time_s = std::nan("");
    CHECK(csv_row(r) == "lss,784x100x10,0.004,3,7,test,,,,,diverged");
}

TEST_CASE("train_once: record shape, learnability, timing") {
    BlobsFixture fx;
    const TrainResult<double> res = train_once(fx.cfg, fx.train, fx.test);
    CHECK_FALSE(res.diverged);
    REQUIRE(res.records.size() == size_t(2 * fx.cfg.epochs));
    for (int e = 0; e < fx.cfg.epochs; ++e) {
        const RunRecord& train_row = res.records[size_t(2 * e)];
        const RunRecord& test_row = res.records[size_t(2 * e + 1)];
        CHECK(train_row.epoch == e + 1);
        CHECK(train_row.split == "train");
        CHECK(test_row.split == "test");
        CHECK(train_row.status == RunStatus::Ok);
        CHECK(train_row.epoch_time_s > 0.0);
        CHECK(train_row.epoch_time_s == test_row.epoch_time_s);
        CHECK(train_row.accuracy >= 0.0);
        CHECK(train_row.accuracy <= 1.0);
        CHECK(test_row.f1 >= 0.0);
        CHECK(test_row.f1 <= 1.0);
    }
    // separable blobs should be essentially solved
    CHECK(res.records.back().accuracy >= 0.9);
}

TEST_CASE("train_once: a shorter run is a bitwise prefix of a longer one") {
    BlobsFixture fx;
    TrainConfig short_cfg = fx.cfg;
    short_cfg.epochs = 2;
    const TrainResult<double> short_run = train_once(short_cfg, fx.train, fx.test);
    const TrainResult<double> long_run = train_once(fx.cfg, fx.train, fx.test);
    REQUIRE(short_run.records.size() == 4);
    for (size_t i = 0; i < short_run.records.size(); ++i) {
        const RunRecord& a = short_run.records[i];
        const RunRecord& b = long_run.records[i];
        CHECK(a.loss == b.loss);
        CHECK(a.accuracy == b.accuracy);
        CHECK(a.f1 == b.f1);
        CHECK(a.epoch == b.epoch);
    }
}

TEST_CASE("train_once: float mode runs and roughly tracks double mode") {
    BlobsFixture fx;
    Dataset<float> train_f;
    train_f.images = Mat<float>(fx.train.images.rows, fx.train.images.cols);
    for (size_t i = 0; i < fx.train.images.data.size(); ++i)
        train_f.images.data[i] = float(fx.train.images.data[i]);
    train_f.labels = fx.train.labels;
    Dataset<float> test_f;
    test_f.images = Mat<float>(fx.test.images.rows, fx.test.images.cols);
    for (size_t i = 0; i < fx.test.images.data.size(); ++i)
        test_f.images.data[i] = float(fx.test.images.data[i]);
    test_f.labels = fx.test.labels;

    const TrainResult<float> res = train_once<float>(fx.cfg, train_f, test_f);
    CHECK_FALSE(res.diverged);
    CHECK(res.records.back().accuracy >= 0.9);
}

TEST_CASE("train_once: validation errors") {
    BlobsFixture fx;
    TrainConfig bad = fx.cfg;
    bad.epochs = 0;
    CHECK_THROWS_AS(train_once(bad, fx.train, fx.test), std::invalid_argument);
    bad = fx.cfg;
    bad.batch = 0;
    CHECK_THROWS_AS(train_once(bad, fx.train, fx.test), std::invalid_argument);
    bad = fx.cfg;
    bad.lr = -1.0;
    CHECK_THROWS_AS(train_once(bad, fx.train, fx.test), std::invalid_argument);
    bad = fx.cfg;
    bad.dims = {15, 12, 4};  // dataset width is 16
    CHECK_THROWS_AS(train_once(bad, fx.train, fx.test), std::invalid_argument);
}

TEST_CASE("divergence: non-finite parameters end the run with a metric-free row") {
    BlobsFixture fx;
    fx.cfg.lr = 1e300;  // one Adam step throws the parameters to ~1e300
    const TrainResult<double> res = train_once(fx.cfg, fx.train, fx.test);
    CHECK(res.diverged);
    REQUIRE_FALSE(res.records.empty());
    const RunRecord& last = res.records.back();
    CHECK(last.status == RunStatus::Diverged);
    CHECK(last.epoch == 1);
    CHECK_FALSE(std::isfinite(last.loss));
    CHECK_FALSE(std::isfinite(last.accuracy));
    CHECK_FALSE(std::isfinite(last.f1));
}

TEST_CASE("divergence: the accuracy floor fires from epoch 2 on") {
    // unlearnable: random 10-class labels on random pixels, frozen-ish lr
    Rng noise(92);
    Dataset<double> train;
    train.images = MatD(300, 8);
    for (auto& v : train.images.data) v = noise.uniform01();
    train.labels.resize(300);
    for (auto& l : train.labels) l = int(noise.below(10));
    Dataset<double> test = train;

    TrainConfig cfg;
    cfg.basis = BasisId::LShiftedSoftplus;
    cfg.dims = {8, 8, 10};
    cfg.lr = 1e-9;  // no meaningful progress
    cfg.epochs = 5;
    cfg.batch = 32;
    const TrainResult<double> res = train_once(cfg, train, test);
    CHECK(res.diverged);
    const RunRecord& last = res.records.back();
    CHECK(last.status == RunStatus::Diverged);
    CHECK(last.epoch == kDivergenceFloorEpoch);
    // epoch 1 completed normally: floor does not apply there
    CHECK(res.records.front().status == RunStatus::Ok);
    CHECK(res.records.front().epoch == 1);
}

TEST_CASE("sweep: row counts, summary, determinism modulo timing") {
    BlobsFixture fx;
    SweepPlan plan;
    plan.basis = fx.cfg.basis;
    plan.dims = fx.cfg.dims;
    plan.lr_grid = {0.01, 0.02};
    plan.repeats = 2;
    plan.epochs = 3;
    plan.batch = 32;
    plan.seed_base = 5;

    const SweepResult a = sweep(plan, fx.train, fx.test);
    // convergent sweep: |grid| x repeats x epochs x 2 splits
    CHECK(a.runs.size() == size_t(2 * 2 * 3 * 2));
    // summary: final-epoch train+test rows per lr, from a non-diverged repeat
    REQUIRE(a.summary.size() == 4);
    for (const auto& row : a.summary) {
        CHECK(row.epoch == plan.epochs);
        CHECK(row.status == RunStatus::Ok);
        CHECK(row.seed >= plan.seed_base);
        CHECK(row.seed < plan.seed_base + 2);
    }
    CHECK(a.summary[0].split == "train");
    CHECK(a.summary[1].split == "test");

    const SweepResult b = sweep(plan, fx.train, fx.test);
    std::ostringstream csv_a, csv_b;
    write_csv(csv_a, a.runs);
    write_csv(csv_b, b.runs);
    CHECK(testutil::strip_timing_column(csv_a.str()) ==
          testutil::strip_timing_column(csv_b.str()));  // only wall times may differ

    CHECK_THROWS_AS(sweep(SweepPlan{}, fx.train, fx.test), std::invalid_argument);
}

TEST_CASE("sweep: best-of-one summary is the final rows verbatim") {
    BlobsFixture fx;
    SweepPlan plan;
    plan.basis = fx.cfg.basis;
    plan.dims = fx.cfg.dims;
    plan.lr_grid = {0.02};
    plan.repeats = 1;
    plan.epochs = 2;
    plan.batch = 32;
    const SweepResult res = sweep(plan, fx.train, fx.test);
    REQUIRE(res.summary.size() == 2);
    const size_t n = res.runs.size();
    CHECK(csv_row(res.summary[0]) == csv_row(res.runs[n - 2]));
    CHECK(csv_row(res.summary[1]) == csv_row(res.runs[n - 1]));
}

TEST_CASE("sweep: equal-accuracy repeats keep the lower seed") {
    std::vector<RunRecord> runs;
    for (uint64_t seed : {7ull, 3ull}) {  // deliberately out of order
        RunRecord train_row;
        train_row.basis = BasisId::LShiftedSoftplus;
        train_row.dims = {4, 2};
        train_row.lr = 0.01;
        train_row.seed = seed;
        train_row.epoch = 2;
        train_row.split = "train";
        train_row.accuracy = 1.0;
        RunRecord test_row = train_row;
        test_row.split = "test";
        test_row.accuracy = 1.0;  // exact tie
        runs.push_back(train_row);
        runs.push_back(test_row);
    }
    const auto summary = summarize_best_per_lr(runs);
    REQUIRE(summary.size() == 2);
    CHECK(summary[0].seed == 3);
    CHECK(summary[1].seed == 3);
}

TEST_CASE("sweep: an lr whose repeats all diverge yields one diverged summary row") {
    BlobsFixture fx;
    SweepPlan plan;
    plan.basis = fx.cfg.basis;
    plan.dims = fx.cfg.dims;
    plan.lr_grid = {0.02, 1e300};
    plan.repeats = 2;
    plan.epochs = 2;
    plan.batch = 32;
    const SweepResult res = sweep(plan, fx.train, fx.test);
    // 0.02 contributes train+test, 1e300 contributes one diverged row
    REQUIRE(res.summary.size() == 3);
    CHECK(res.summary[2].status == RunStatus::Diverged);
    CHECK(res.summary[2].lr == 1e300);
    CHECK(res.summary[2].seed == 0);
    // diverged repeats never win a best-of
    for (const auto& row : res.summary)
        if (row.status == RunStatus::Ok) CHECK(row.lr == 0.02);
}

TEST_CASE("gradcheck_network: passes on smooth and kinked bases, enforces the size cap") {
    const GradcheckReport lss = gradcheck_network(BasisId::LShiftedSoftplus, {4, 3, 2}, 0);
    CHECK(lss.pass());
    CHECK(lss.checked == 18);
    CHECK(lss.max_rel_err <= 1e-6);

    const GradcheckReport relu = gradcheck_network(BasisId::LRelu, {4, 3, 2}, 0);
    CHECK(relu.pass());

    const GradcheckReport bigger = gradcheck_network(BasisId::LMish, {8, 16, 4}, 1, 8);
    CHECK(bigger.pass());
    CHECK(bigger.checked == 8 * 16 + 16 * 4);

    // a huge kink band skips everything; an empty check cannot pass
    const GradcheckReport all_skipped =
        gradcheck_network(BasisId::LRelu, {4, 3, 2}, 0, 4, 1e-5, 1e-6, /*kink_band=*/100.0);
    CHECK(all_skipped.checked == 0);
    CHECK(all_skipped.skipped == 18);
    CHECK_FALSE(all_skipped.pass());

    CHECK_THROWS_AS(gradcheck_network(BasisId::LShiftedSoftplus, {784, 100, 10}, 0),
                    std::invalid_argument);
}

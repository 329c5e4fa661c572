#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include <doctest.h>

#include "vlclab/mlp.hpp"

using namespace vlc;
using namespace vlc::mlp;

namespace {

MlpParams random_params(std::size_t hidden, std::mt19937_64& rng) {
    MlpParams p = init(hidden, rng());
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    for (double& b : p.b1) b = u(rng);
    for (double& b : p.b2) b = u(rng);
    return p;
}

Dataset random_batch(std::size_t count, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Dataset d(count);
    for (Sample& s : d) {
        for (double& v : s.x) v = u(rng);
        for (double& v : s.t) v = u(rng);
    }
    return d;
}

// L = sum_i mean_r (y_i - t_i)^2, the quantity gradient() differentiates
double scalar_loss(const MlpParams& p, const Dataset& d) {
    LossValue lv = loss(p, d);
    return lv.per_output[0] + lv.per_output[1];
}

rvec numeric_gradient(MlpParams p, const Dataset& d) {
    const double h = 1e-6;
    auto probe = [&](rvec& v) {
        rvec g(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            double keep = v[i];
            v[i] = keep + h;
            double up = scalar_loss(p, d);
            v[i] = keep - h;
            double dn = scalar_loss(p, d);
            v[i] = keep;
            g[i] = (up - dn) / (2.0 * h);
        }
        return g;
    };
    rvec all;
    for (const rvec& g : {probe(p.w1), probe(p.b1), probe(p.w2), probe(p.b2)})
        all.insert(all.end(), g.begin(), g.end());
    return all;
}

rvec flatten_grad(const Gradients& g) {
    rvec all;
    all.insert(all.end(), g.w1.begin(), g.w1.end());
    all.insert(all.end(), g.b1.begin(), g.b1.end());
    all.insert(all.end(), g.w2.begin(), g.w2.end());
    all.insert(all.end(), g.b2.begin(), g.b2.end());
    return all;
}

Dataset xor_dataset() {
    // XOR on the first two features, padded to six inputs, duplicated to
    // give the splitter something to work with
    Dataset d;
    for (int rep = 0; rep < 10; ++rep)
        for (int a : {0, 1})
            for (int b : {0, 1}) {
                Sample s{};
                s.x = {double(a), double(b), 0, 0, 0, 0};
                double y = (a ^ b) ? 1.0 : -1.0;
                s.t = {y, y};
                d.push_back(s);
            }
    return d;
}

}  // namespace

TEST_CASE("init determinism, shape and range") {
    MlpParams a = init(10, 77);
    MlpParams b = init(10, 77);
    CHECK(a.w1 == b.w1);
    CHECK(a.w2 == b.w2);
    CHECK(a.w1.size() == 60);
    CHECK(a.b1 == rvec(10, 0.0));
    CHECK(a.b2 == rvec(2, 0.0));
    const double bound1 = 1.0 / std::sqrt(6.0);
    for (double w : a.w1) CHECK(std::abs(w) <= bound1);
    const double bound2 = 1.0 / std::sqrt(10.0);
    for (double w : a.w2) CHECK(std::abs(w) <= bound2);
    CHECK(init(5, 1).w1 != init(5, 2).w1);
    CHECK_THROWS(init(0, 1));
}

TEST_CASE("forward passes the biases through zero weights") {
    MlpParams p;
    p.hidden = 3;
    p.w1.assign(18, 0.0);
    p.b1.assign(3, 0.0);
    p.w2.assign(6, 0.0);
    p.b2 = {0.3, -0.1};
    auto y = forward(p, {1, 2, 3, 4, 5, 6});
    CHECK(y[0] == 0.3);
    CHECK(y[1] == -0.1);

    p.w2 = {1.0, 2.0, 3.0, -1.0, -2.0, -3.0};  // tanh(0) = 0 either way
    y = forward(p, {1, 1, 1, 1, 1, 1});
    CHECK(y[0] == 0.3);
    CHECK(y[1] == -0.1);
}

TEST_CASE("forward linearizes for small weights") {
    const double eps = 1e-3;
    MlpParams p;
    p.hidden = 1;
    p.w1 = {eps, 0, 0, 0, 0, 0};
    p.b1 = {0.0};
    p.w2 = {1.0, 0.0};
    p.b2 = {0.0, 0.0};
    auto y = forward(p, {0.5, 9, 9, 9, 9, 9});
    CHECK(std::abs(y[0] - eps * 0.5) < eps * eps * eps);
}

TEST_CASE("loss definition") {
    MlpParams p;
    p.hidden = 1;
    p.w1.assign(6, 0.0);
    p.b1 = {0.0};
    p.w2 = {0.0, 0.0};
    p.b2 = {0.1, 0.0};

    Dataset one = {{{0, 0, 0, 0, 0, 0}, {0.0, 0.0}}};
    LossValue lv = loss(p, one);
    CHECK(lv.per_output[0] == doctest::Approx(0.01));
    CHECK(lv.per_output[1] == 0.0);

    Dataset perfect = {{{0, 0, 0, 0, 0, 0}, {0.1, 0.0}}};
    CHECK(loss(p, perfect).total == 0.0);

    Dataset two = {{{0, 0, 0, 0, 0, 0}, {0.0, 0.0}},
                   {{0, 0, 0, 0, 0, 0}, {0.2, 0.0}}};
    CHECK(loss(p, two).per_output[0] == doctest::Approx(0.01));

    CHECK_THROWS(loss(p, {}));
}

TEST_CASE("gradient matches central finite differences") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t hidden = 1 + (rng() % 8);
        MlpParams p = random_params(hidden, rng);
        Dataset batch = random_batch(3 + (rng() % 5), rng);
        rvec analytic = flatten_grad(gradient(p, batch));
        rvec numeric = numeric_gradient(p, batch);
        REQUIRE(analytic.size() == numeric.size());
        // vector-norm relative error; elementwise ratios drown in
        // finite-difference roundoff for near-zero components
        double diff2 = 0.0, a2 = 0.0, n2 = 0.0;
        for (std::size_t i = 0; i < analytic.size(); ++i) {
            double d = analytic[i] - numeric[i];
            diff2 += d * d;
            a2 += analytic[i] * analytic[i];
            n2 += numeric[i] * numeric[i];
        }
        CHECK(std::sqrt(diff2) / std::sqrt(std::max(a2, n2)) < 1e-6);
    }
}

TEST_CASE("gradient of the output bias is the mean residual doubled") {
    std::mt19937_64 rng(5);
    MlpParams p = random_params(4, rng);
    Dataset batch = random_batch(7, rng);
    Gradients g = gradient(p, batch);
    for (std::size_t i = 0; i < kOutputs; ++i) {
        double want = 0.0;
        for (const Sample& s : batch) want += 2.0 * (forward(p, s.x)[i] - s.t[i]);
        want /= static_cast<double>(batch.size());
        CHECK(g.b2[i] == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("zero-error batch gives zero gradient") {
    std::mt19937_64 rng(9);
    MlpParams p = random_params(3, rng);
    Dataset batch = random_batch(4, rng);
    for (Sample& s : batch) s.t = forward(p, s.x);
    for (double v : flatten_grad(gradient(p, batch)))
        CHECK(std::abs(v) < 1e-15);
}

TEST_CASE("training learns XOR") {
    TrainConfig cfg;
    cfg.max_epochs = 5000;
    TrainReport rep = train(xor_dataset(), 4, 3, cfg);
    CHECK(rep.train_mse_curve.back() < 1e-2);
}

TEST_CASE("training loss curve is non-increasing") {
    TrainConfig cfg;
    cfg.max_epochs = 2000;
    TrainReport rep = train(xor_dataset(), 4, 3, cfg);
    for (std::size_t i = 1; i < rep.train_mse_curve.size(); ++i)
        CHECK(rep.train_mse_curve[i] <= rep.train_mse_curve[i - 1] + 1e-15);
}

TEST_CASE("best epoch bookkeeping") {
    TrainConfig cfg;
    cfg.max_epochs = 500;
    TrainReport rep = train(xor_dataset(), 4, 3, cfg);
    REQUIRE(!rep.val_mse_curve.empty());
    double minval = *std::min_element(rep.val_mse_curve.begin(),
                                      rep.val_mse_curve.end());
    CHECK(rep.val_mse_curve[rep.best_epoch] == minval);
    CHECK(rep.val_mse_curve.back() <= rep.val_mse_curve.front());
}

TEST_CASE("training is deterministic per seed") {
    TrainConfig cfg;
    cfg.max_epochs = 300;
    TrainReport a = train(xor_dataset(), 4, 11, cfg);
    TrainReport b = train(xor_dataset(), 4, 11, cfg);
    CHECK(a.params.w1 == b.params.w1);
    CHECK(a.params.b2 == b.params.b2);
    CHECK(a.train_mse_curve == b.train_mse_curve);
    CHECK(a.val_mse_curve == b.val_mse_curve);
    CHECK(a.best_epoch == b.best_epoch);
}

TEST_CASE("training is invariant to record order") {
    Dataset data = xor_dataset();
    TrainConfig cfg;
    cfg.max_epochs = 200;
    TrainReport a = train(data, 4, 11, cfg);
    std::reverse(data.begin(), data.end());
    TrainReport b = train(data, 4, 11, cfg);
    CHECK(a.params.w1 == b.params.w1);
    CHECK(a.train_mse_curve == b.train_mse_curve);
}

TEST_CASE("returned parameters reproduce the best validation MSE") {
    Dataset data = xor_dataset();
    TrainConfig cfg;
    cfg.max_epochs = 400;
    TrainReport rep = train(data, 4, 21, cfg);
    Dataset val;
    for (std::size_t i : rep.val_idx) {
        Sample s;
        s.x = rep.normalizer.apply_x(data[i].x);
        s.t = rep.normalizer.apply_t(data[i].t);
        val.push_back(s);
    }
    CHECK(loss(rep.params, val).total == rep.val_mse_curve[rep.best_epoch]);
}

TEST_CASE("train rejects tiny datasets") {
    std::mt19937_64 rng(1);
    Dataset tiny = random_batch(5, rng);
    CHECK_THROWS(train(tiny, 4, 1, {}));
}

TEST_CASE("sweep_hidden") {
    Dataset data = xor_dataset();
    TrainConfig cfg;
    cfg.max_epochs = 200;

    SweepResult single = sweep_hidden(data, {5}, 1, cfg);
    CHECK(single.best_hidden == 5);
    REQUIRE(single.entries.size() == 1);

    SweepResult two = sweep_hidden(data, {2, 10}, 1, cfg);
    REQUIRE(two.entries.size() == 2);
    double best = std::min(two.entries[0].best_val_mse,
                           two.entries[1].best_val_mse);
    for (const SweepEntry& e : two.entries)
        if (e.hidden == two.best_hidden) CHECK(e.best_val_mse == best);

    SweepResult again = sweep_hidden(data, {2, 10}, 1, cfg);
    CHECK(again.best_hidden == two.best_hidden);
    CHECK(again.entries[0].best_val_mse == two.entries[0].best_val_mse);

    CHECK_THROWS(sweep_hidden(data, {}, 1, cfg));
}

TEST_CASE("normalizer endpoints, midpoint and round trip") {
    Dataset d = {{{0, 0, 0, 0, 0, 0}, {0, -5}}, {{10, 1, 2, 3, 4, 5}, {10, 5}}};
    Normalizer n = fit_normalizer(d);
    auto lo = n.apply_x({0, 0, 0, 0, 0, 0});
    auto hi = n.apply_x({10, 1, 2, 3, 4, 5});
    CHECK(lo[0] == -1.0);
    CHECK(hi[0] == 1.0);
    auto mid = n.apply_t({5, 0});
    CHECK(mid[0] == 0.0);
    CHECK(mid[1] == 0.0);

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::array<double, kOutputs> t = {u(rng), u(rng)};
        auto back = n.invert_t(n.apply_t(t));
        CHECK(back[0] == doctest::Approx(t[0]).epsilon(1e-12));
        CHECK(back[1] == doctest::Approx(t[1]).epsilon(1e-12));
    }
}

TEST_CASE("constant dimension maps to zero") {
    Dataset d = {{{1, 0, 0, 0, 0, 0}, {0, 0}}, {{1, 1, 1, 1, 1, 1}, {1, 1}}};
    Normalizer n = fit_normalizer(d);
    CHECK(n.apply_x({1, 0.5, 0.5, 0.5, 0.5, 0.5})[0] == 0.0);
}

TEST_CASE("model JSON round trip reproduces forward bit-exactly") {
    std::mt19937_64 rng(33);
    Model m;
    m.params = random_params(7, rng);
    Dataset d = random_batch(12, rng);
    m.normalizer = fit_normalizer(d);
    m.seed = 99;
    const char* path = "mlp_model_test.json";
    save_model_json(m, path);
    Model back = load_model_json(path);
    std::remove(path);
    CHECK(back.params.w1 == m.params.w1);
    CHECK(back.seed == 99);
    for (const Sample& s : d) {
        auto a = predict(m.params, m.normalizer, s.x);
        auto b = predict(back.params, back.normalizer, s.x);
        CHECK(a[0] == b[0]);
        CHECK(a[1] == b[1]);
    }
}

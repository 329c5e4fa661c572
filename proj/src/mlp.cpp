#include "vlclab/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace vlc::mlp {

namespace {

void check_dims(const MlpParams& p) {
    if (p.hidden == 0 || p.w1.size() != p.hidden * kInputs ||
        p.b1.size() != p.hidden || p.w2.size() != kOutputs * p.hidden ||
        p.b2.size() != kOutputs)
        throw std::invalid_argument("mlp: inconsistent dimensions");
}

rvec flatten(const MlpParams& p) {
    rvec v;
    v.reserve(p.w1.size() + p.b1.size() + p.w2.size() + p.b2.size());
    v.insert(v.end(), p.w1.begin(), p.w1.end());
    v.insert(v.end(), p.b1.begin(), p.b1.end());
    v.insert(v.end(), p.w2.begin(), p.w2.end());
    v.insert(v.end(), p.b2.begin(), p.b2.end());
    return v;
}

void unflatten(const rvec& v, MlpParams& p) {
    std::size_t o = 0;
    for (double& w : p.w1) w = v[o++];
    for (double& w : p.b1) w = v[o++];
    for (double& w : p.w2) w = v[o++];
    for (double& w : p.b2) w = v[o++];
}

}  // namespace

std::array<double, kInputs> Normalizer::apply_x(
    const std::array<double, kInputs>& x) const {
    std::array<double, kInputs> out{};
    for (std::size_t i = 0; i < kInputs; ++i) {
        double span = x_max[i] - x_min[i];
        out[i] = span > 0.0 ? 2.0 * (x[i] - x_min[i]) / span - 1.0 : 0.0;
    }
    return out;
}

std::array<double, kOutputs> Normalizer::apply_t(
    const std::array<double, kOutputs>& t) const {
    std::array<double, kOutputs> out{};
    for (std::size_t i = 0; i < kOutputs; ++i) {
        double span = t_max[i] - t_min[i];
        out[i] = span > 0.0 ? 2.0 * (t[i] - t_min[i]) / span - 1.0 : 0.0;
    }
    return out;
}

std::array<double, kOutputs> Normalizer::invert_t(
    const std::array<double, kOutputs>& y) const {
    std::array<double, kOutputs> out{};
    for (std::size_t i = 0; i < kOutputs; ++i)
        out[i] = (y[i] + 1.0) * 0.5 * (t_max[i] - t_min[i]) + t_min[i];
    return out;
}

MlpParams init(std::size_t hidden, std::uint64_t seed) {
    if (hidden == 0) throw std::invalid_argument("hidden must be >= 1");
    MlpParams p;
    p.hidden = hidden;
    p.w1.resize(hidden * kInputs);
    p.b1.assign(hidden, 0.0);
    p.w2.resize(kOutputs * hidden);
    p.b2.assign(kOutputs, 0.0);
    std::mt19937_64 rng(seed);
    const double bound1 = 1.0 / std::sqrt(static_cast<double>(kInputs));
    const double bound2 = 1.0 / std::sqrt(static_cast<double>(hidden));
    std::uniform_real_distribution<double> u1(-bound1, bound1);
    std::uniform_real_distribution<double> u2(-bound2, bound2);
    for (double& w : p.w1) w = u1(rng);
    for (double& w : p.w2) w = u2(rng);
    return p;
}

std::array<double, kOutputs> forward(const MlpParams& p,
                                     const std::array<double, kInputs>& x) {
    check_dims(p);
    std::array<double, kOutputs> y{};
    rvec a(p.hidden);
    for (std::size_t j = 0; j < p.hidden; ++j) {
        double z = p.b1[j];
        for (std::size_t k = 0; k < kInputs; ++k)
            z += p.w1[j * kInputs + k] * x[k];
        a[j] = std::tanh(z);
    }
    for (std::size_t i = 0; i < kOutputs; ++i) {
        double z = p.b2[i];
        for (std::size_t j = 0; j < p.hidden; ++j)
            z += p.w2[i * p.hidden + j] * a[j];
        y[i] = z;
    }
    return y;
}

LossValue loss(const MlpParams& p, const Dataset& data) {
    if (data.empty()) throw std::invalid_argument("empty dataset");
    LossValue lv;
    for (const Sample& s : data) {
        auto y = forward(p, s.x);
        for (std::size_t i = 0; i < kOutputs; ++i) {
            double e = y[i] - s.t[i];
            lv.per_output[i] += e * e;
        }
    }
    for (std::size_t i = 0; i < kOutputs; ++i) {
        lv.per_output[i] /= static_cast<double>(data.size());
        lv.total += lv.per_output[i];
    }
    lv.total /= static_cast<double>(kOutputs);
    return lv;
}

Gradients gradient(const MlpParams& p, const Dataset& batch) {
    check_dims(p);
    Gradients g;
    g.w1.assign(p.w1.size(), 0.0);
    g.b1.assign(p.b1.size(), 0.0);
    g.w2.assign(p.w2.size(), 0.0);
    g.b2.assign(p.b2.size(), 0.0);
    if (batch.empty()) return g;

    rvec a(p.hidden);
    for (const Sample& s : batch) {
        for (std::size_t j = 0; j < p.hidden; ++j) {
            double z = p.b1[j];
            for (std::size_t k = 0; k < kInputs; ++k)
                z += p.w1[j * kInputs + k] * s.x[k];
            a[j] = std::tanh(z);
        }
        std::array<double, kOutputs> dy{};
        for (std::size_t i = 0; i < kOutputs; ++i) {
            double y = p.b2[i];
            for (std::size_t j = 0; j < p.hidden; ++j)
                y += p.w2[i * p.hidden + j] * a[j];
            dy[i] = 2.0 * (y - s.t[i]);
        }
        for (std::size_t i = 0; i < kOutputs; ++i) {
            g.b2[i] += dy[i];
            for (std::size_t j = 0; j < p.hidden; ++j)
                g.w2[i * p.hidden + j] += dy[i] * a[j];
        }
        for (std::size_t j = 0; j < p.hidden; ++j) {
            double da = 0.0;
            for (std::size_t i = 0; i < kOutputs; ++i)
                da += dy[i] * p.w2[i * p.hidden + j];
            double dz = da * (1.0 - a[j] * a[j]);
            g.b1[j] += dz;
            for (std::size_t k = 0; k < kInputs; ++k)
                g.w1[j * kInputs + k] += dz * s.x[k];
        }
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    for (double& v : g.w1) v *= inv;
    for (double& v : g.b1) v *= inv;
    for (double& v : g.w2) v *= inv;
    for (double& v : g.b2) v *= inv;
    return g;
}

Normalizer fit_normalizer(const Dataset& data) {
    if (data.empty()) throw std::invalid_argument("empty dataset");
    Normalizer n;
    n.x_min.fill(std::numeric_limits<double>::infinity());
    n.x_max.fill(-std::numeric_limits<double>::infinity());
    n.t_min.fill(std::numeric_limits<double>::infinity());
    n.t_max.fill(-std::numeric_limits<double>::infinity());
    for (const Sample& s : data) {
        for (std::size_t i = 0; i < kInputs; ++i) {
            n.x_min[i] = std::min(n.x_min[i], s.x[i]);
            n.x_max[i] = std::max(n.x_max[i], s.x[i]);
        }
        for (std::size_t i = 0; i < kOutputs; ++i) {
            n.t_min[i] = std::min(n.t_min[i], s.t[i]);
            n.t_max[i] = std::max(n.t_max[i], s.t[i]);
        }
    }
    for (std::size_t i = 0; i < kInputs; ++i)
        if (!(n.x_max[i] > n.x_min[i]))
            std::cerr << "warning: constant input dimension " << i
                      << " maps to 0\n";
    return n;
}

std::array<double, kOutputs> predict(const MlpParams& p, const Normalizer& n,
                                     const std::array<double, kInputs>& x) {
    return n.invert_t(forward(p, n.apply_x(x)));
}

TrainReport train(const Dataset& data, std::size_t hidden, std::uint64_t seed,
                  const TrainConfig& cfg) {
    if (data.size() < 10)
        throw std::invalid_argument("training needs at least 10 records");

    TrainReport rep;
    rep.normalizer = fit_normalizer(data);

    Dataset norm(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        norm[i].x = rep.normalizer.apply_x(data[i].x);
        norm[i].t = rep.normalizer.apply_t(data[i].t);
    }

    // Canonical order first, then a seeded shuffle: the split depends on the
    // seed and the record contents but not on the input record order.
    std::vector<std::size_t> idx(norm.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (norm[a].x != norm[b].x) return norm[a].x < norm[b].x;
        return norm[a].t < norm[b].t;
    });
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);

    const std::size_t n_train = norm.size() * 70 / 100;
    const std::size_t n_val = norm.size() * 15 / 100;
    Dataset train_set, val_set, test_set;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i < n_train) {
            train_set.push_back(norm[idx[i]]);
            rep.train_idx.push_back(idx[i]);
        } else if (i < n_train + n_val) {
            val_set.push_back(norm[idx[i]]);
            rep.val_idx.push_back(idx[i]);
        } else {
            test_set.push_back(norm[idx[i]]);
            rep.test_idx.push_back(idx[i]);
        }
    }
    if (val_set.empty()) val_set = train_set;
    if (test_set.empty()) test_set = val_set;

    MlpParams params = init(hidden, seed);
    rvec velocity(flatten(params).size(), 0.0);
    double lr = cfg.lr;

    double cur = loss(params, train_set).total;
    if (!std::isfinite(cur))
        throw std::runtime_error("diverged (try a lower learning rate)");

    MlpParams best = params;
    double best_val = loss(params, val_set).total;
    rep.best_epoch = 0;
    int since_best = 0;

    for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        Gradients g = gradient(params, train_set);
        rvec gflat;
        gflat.reserve(velocity.size());
        gflat.insert(gflat.end(), g.w1.begin(), g.w1.end());
        gflat.insert(gflat.end(), g.b1.begin(), g.b1.end());
        gflat.insert(gflat.end(), g.w2.begin(), g.w2.end());
        gflat.insert(gflat.end(), g.b2.begin(), g.b2.end());

        rvec pflat = flatten(params);
        MlpParams trial = params;
        bool stalled = false;
        double trial_loss = cur;
        for (;;) {
            rvec vel_try(velocity.size());
            rvec p_try(velocity.size());
            for (std::size_t i = 0; i < velocity.size(); ++i) {
                vel_try[i] = cfg.momentum * velocity[i] - lr * gflat[i];
                p_try[i] = pflat[i] + vel_try[i];
            }
            unflatten(p_try, trial);
            trial_loss = loss(trial, train_set).total;
            if (std::isfinite(trial_loss) && trial_loss <= cur) {
                velocity = vel_try;
                // adaptive recovery; the pre-acceptance check above keeps
                // the training curve non-increasing regardless
                lr *= 1.01;
                break;
            }
            // step would raise the training loss: shrink and drop momentum
            lr *= 0.5;
            std::fill(velocity.begin(), velocity.end(), 0.0);
            if (lr < 1e-15) {
                stalled = true;
                break;
            }
        }
        if (stalled) break;

        params = trial;
        cur = trial_loss;
        rep.train_mse_curve.push_back(cur);
        double val = loss(params, val_set).total;
        rep.val_mse_curve.push_back(val);
        rep.epochs_run = epoch + 1;

        if (val < best_val) {
            best_val = val;
            best = params;
            rep.best_epoch = epoch;
            since_best = 0;
        } else if (++since_best >= cfg.patience) {
            break;
        }
    }

    rep.params = best;
    rep.best_val_mse = best_val;
    rep.test_mse = loss(best, test_set).total;
    return rep;
}

SweepResult sweep_hidden(const Dataset& data,
                         const std::vector<std::size_t>& candidates,
                         std::uint64_t seed, const TrainConfig& cfg) {
    if (candidates.empty()) throw std::invalid_argument("no sweep candidates");
    SweepResult res;
    for (std::size_t h : candidates) {
        TrainReport rep = train(data, h, seed, cfg);
        res.entries.push_back({h, rep.best_val_mse});
    }
    res.best_hidden = res.entries.front().hidden;
    double best = res.entries.front().best_val_mse;
    for (const SweepEntry& e : res.entries) {
        if (e.best_val_mse < best ||
            (e.best_val_mse == best && e.hidden < res.best_hidden)) {
            best = e.best_val_mse;
            res.best_hidden = e.hidden;
        }
    }
    return res;
}

void save_model_json(const Model& m, const std::string& path,
                     const std::string& config_hash) {
    nlohmann::json j;
    j["inputs"] = kInputs;
    j["outputs"] = kOutputs;
    j["hidden"] = m.params.hidden;
    j["w1"] = m.params.w1;
    j["b1"] = m.params.b1;
    j["w2"] = m.params.w2;
    j["b2"] = m.params.b2;
    j["normalizer"] = {{"x_min", m.normalizer.x_min},
                       {"x_max", m.normalizer.x_max},
                       {"t_min", m.normalizer.t_min},
                       {"t_max", m.normalizer.t_max}};
    j["seed"] = m.seed;
    if (!config_hash.empty()) j["config_hash"] = config_hash;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

Model load_model_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    Model m;
    m.params.hidden = j.at("hidden").get<std::size_t>();
    m.params.w1 = j.at("w1").get<rvec>();
    m.params.b1 = j.at("b1").get<rvec>();
    m.params.w2 = j.at("w2").get<rvec>();
    m.params.b2 = j.at("b2").get<rvec>();
    const auto& n = j.at("normalizer");
    m.normalizer.x_min = n.at("x_min").get<std::array<double, kInputs>>();
    m.normalizer.x_max = n.at("x_max").get<std::array<double, kInputs>>();
    m.normalizer.t_min = n.at("t_min").get<std::array<double, kOutputs>>();
    m.normalizer.t_max = n.at("t_max").get<std::array<double, kOutputs>>();
    m.seed = j.value("seed", 0ull);
    check_dims(m.params);
    return m;
}

}  // namespace vlc::mlp

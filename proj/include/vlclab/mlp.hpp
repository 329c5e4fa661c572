#ifndef VLCLAB_MLP_HPP
#define VLCLAB_MLP_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "vlclab/types.hpp"

namespace vlc::mlp {

inline constexpr std::size_t kInputs = 6;
inline constexpr std::size_t kOutputs = 2;

struct Sample {
    std::array<double, kInputs> x;
    std::array<double, kOutputs> t;
};
using Dataset = std::vector<Sample>;

// 6 -> H tanh -> 2 linear. Weights row-major: w1 is H x 6, w2 is 2 x H.
struct MlpParams {
    std::size_t hidden = 0;
    rvec w1, b1, w2, b2;
};

// Per-dimension affine map onto [-1, 1] for the 6 inputs and 2 targets.
struct Normalizer {
    std::array<double, kInputs> x_min{}, x_max{};
    std::array<double, kOutputs> t_min{}, t_max{};

    std::array<double, kInputs> apply_x(const std::array<double, kInputs>& x) const;
    std::array<double, kOutputs> apply_t(const std::array<double, kOutputs>& t) const;
    std::array<double, kOutputs> invert_t(const std::array<double, kOutputs>& y) const;
};

struct TrainConfig {
    double lr = 0.01;
    double momentum = 0.9;
    int max_epochs = 800000;
    int patience = 20000;
};

struct TrainReport {
    int epochs_run = 0;
    rvec train_mse_curve;
    rvec val_mse_curve;
    int best_epoch = 0;
    MlpParams params;      // snapshot from the best-validation epoch
    Normalizer normalizer;
    double best_val_mse = 0.0;
    double test_mse = 0.0;
    // 70/15/15 split as indices into the caller's dataset
    std::vector<std::size_t> train_idx, val_idx, test_idx;
};

struct LossValue {
    std::array<double, kOutputs> per_output{};
    double total = 0.0;  // mean of the per-output MSEs
};

MlpParams init(std::size_t hidden, std::uint64_t seed);

std::array<double, kOutputs> forward(const MlpParams& p,
                                     const std::array<double, kInputs>& x);

LossValue loss(const MlpParams& p, const Dataset& data);

// Gradient of sum_i mean_r (y_i - t_i)^2 with respect to every parameter,
// laid out like MlpParams.
struct Gradients {
    rvec w1, b1, w2, b2;
};
Gradients gradient(const MlpParams& p, const Dataset& batch);

// Full-batch gradient descent with momentum, 70/15/15 seeded split, halving
// the learning rate whenever a step would increase the training loss, early
// stop on validation patience.
TrainReport train(const Dataset& data, std::size_t hidden, std::uint64_t seed,
                  const TrainConfig& cfg = {});

struct SweepEntry {
    std::size_t hidden;
    double best_val_mse;
};
struct SweepResult {
    std::vector<SweepEntry> entries;
    std::size_t best_hidden;
};
SweepResult sweep_hidden(const Dataset& data,
                         const std::vector<std::size_t>& candidates,
                         std::uint64_t seed, const TrainConfig& cfg = {});

Normalizer fit_normalizer(const Dataset& data);

// Feature-space prediction: normalize, forward, denormalize.
std::array<double, kOutputs> predict(const MlpParams& p, const Normalizer& n,
                                     const std::array<double, kInputs>& x);

struct Model {
    MlpParams params;
    Normalizer normalizer;
    std::uint64_t seed = 0;
};
void save_model_json(const Model& m, const std::string& path,
                     const std::string& config_hash = "");
Model load_model_json(const std::string& path);

}  // namespace vlc::mlp

#endif

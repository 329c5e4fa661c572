#ifndef VLCLAB_CAMPAIGN_HPP
#define VLCLAB_CAMPAIGN_HPP

#include <array>
#include <string>
#include <vector>

#include "vlclab/channel.hpp"
#include "vlclab/mlp.hpp"
#include "vlclab/spectra.hpp"
#include "vlclab/types.hpp"

namespace vlc {

// The six MLP input features.
struct FeatureVector {
    double reflectivity = 0.0;  // fraction
    double tx_power_w = 63.02;  // LED average spectral power
    int los = 0;                // 0 = NLOS, 1 = NLOS+LOS
    int noise_level = 1;        // 1..3 external light sources
    double distance_cm = 20.0;  // 20..200
    double rx_gain_db = 10.0;   // 10/20/30 per the distance schedule

    void validate() const;
    std::array<double, mlp::kInputs> as_array() const;
};

// Synthetic stand-in for the physical channel; the lab's measured taps are
// not recoverable, so the ground truth is this documented parametric model.
struct GroundTruthConstants {
    double c1 = 5e-3;     // direct-path scale
    double beta = 1.0;    // LOS boost on h1
    double c2 = 2e-3;     // reflected-path scale
    double sigma0 = 5e-4; // AWGN std per noise level
    double dc0 = 0.01;    // ambient DC per noise level
};

struct MeasurementRecord {
    FeatureVector features;
    std::array<double, 2> h_true{};
    std::array<double, 2> h_est{};
    int repeats = 1;
    double residual_imag = 0.0;  // largest imaginary residue seen estimating
};

struct CampaignDataset {
    std::vector<MeasurementRecord> records;
    GroundTruthConstants constants;
    OfdmConfig cfg;
    std::uint64_t seed = 0;
};

// Receiver gain schedule over distance; saturation control at short range.
double gain_for_distance(double d_cm);

std::array<double, 2> ground_truth_taps(const FeatureVector& f,
                                        const GroundTruthConstants& c);

NoiseSpec noise_for_level(int level, const GroundTruthConstants& c);

// One synthetic measurement: pilot frame through the clipped optical chain,
// taps re-estimated `repeats` times under fresh noise and averaged.
MeasurementRecord run_measurement(const FeatureVector& f,
                                  const GroundTruthConstants& c,
                                  const OfdmConfig& cfg, int repeats,
                                  std::uint64_t seed);

// Full factorial 3 materials x 2 LEDs x 2 LOS x 3 noise x 10 distances.
CampaignDataset generate_training_campaign(
    std::uint64_t seed, const GroundTruthConstants& c = {},
    const OfdmConfig& cfg = {}, int repeats = 10);

enum class HybridSurface { PlasterPine, BlackPine };

// Hybrid-surface test grid; default distances are 8 seeded uniform draws
// from the 5 cm test grid, or pass an explicit distance list.
CampaignDataset generate_hybrid_test(
    HybridSurface surface, std::uint64_t seed,
    const std::vector<double>& distances_cm = {},
    const GroundTruthConstants& c = {}, const OfdmConfig& cfg = {},
    int repeats = 10);

struct Histogram {
    rvec bin_lo, bin_hi;
    std::vector<std::size_t> counts;
};

struct EvalReport {
    std::array<double, 2> mse{};           // prediction vs estimated taps
    std::array<double, 2> mean_pct_err{};  // mean 100*|pred-target|/|target|
    std::array<Histogram, 2> histograms;   // of the per-record % errors
    std::size_t excluded = 0;              // zero-target records skipped
    std::size_t evaluated = 0;
};

EvalReport evaluate(const mlp::MlpParams& params, const mlp::Normalizer& norm,
                    const CampaignDataset& data, std::size_t hist_bins = 20);

// MLP training view: features in, 10-repeat averaged estimates as targets.
mlp::Dataset to_training_dataset(const CampaignDataset& data);

void save_dataset_csv(const CampaignDataset& data, const std::string& csv_path,
                      const std::string& meta_json_path = "",
                      const std::string& config_hash = "");
CampaignDataset load_dataset_csv(const std::string& csv_path,
                                 const std::string& meta_json_path = "");

void save_eval_report(const EvalReport& rep, const std::string& json_path,
                      const std::string& hist_csv_h1,
                      const std::string& hist_csv_h2,
                      const std::string& config_hash = "");

}  // namespace vlc

#endif

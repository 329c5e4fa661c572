#include "vlclab/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "vlclab/estimator.hpp"

namespace vlc {

void FeatureVector::validate() const {
    if (reflectivity < 0.0 || reflectivity > 1.0)
        throw std::invalid_argument("reflectivity out of [0,1]");
    if (tx_power_w <= 0.0)
        throw std::invalid_argument("tx_power must be positive");
    if (los != 0 && los != 1) throw std::invalid_argument("los must be 0 or 1");
    if (noise_level < 1 || noise_level > 3)
        throw std::invalid_argument("noise level must be 1, 2 or 3");
    if (distance_cm < 20.0 || distance_cm > 200.0)
        throw std::invalid_argument("distance outside [20, 200] cm");
}

std::array<double, mlp::kInputs> FeatureVector::as_array() const {
    return {reflectivity,
            tx_power_w,
            static_cast<double>(los),
            static_cast<double>(noise_level),
            distance_cm,
            rx_gain_db};
}

double gain_for_distance(double d_cm) {
    if (d_cm < 20.0 || d_cm > 200.0)
        throw std::invalid_argument("distance outside [20, 200] cm");
    if (d_cm < 40.0) return 10.0;
    if (d_cm < 80.0) return 20.0;
    return 30.0;  // 200 cm maps with the last interval
}

std::array<double, 2> ground_truth_taps(const FeatureVector& f,
                                        const GroundTruthConstants& c) {
    f.validate();
    const double g = std::pow(10.0, f.rx_gain_db / 20.0);
    const double a = f.tx_power_w / 63.02;
    const double d = f.distance_cm / 100.0;  // meters
    const double inv_d2 = 1.0 / (d * d);
    return {g * a * c.c1 * (1.0 + c.beta * f.los) * inv_d2,
            g * a * c.c2 * f.reflectivity * inv_d2};
}

NoiseSpec noise_for_level(int level, const GroundTruthConstants& c) {
    if (level < 1 || level > 3)
        throw std::invalid_argument("noise level must be 1, 2 or 3");
    NoiseSpec n;
    n.sigma_n = level * c.sigma0;
    n.dc_ambient = level * c.dc0;
    return n;
}

MeasurementRecord run_measurement(const FeatureVector& f,
                                  const GroundTruthConstants& c,
                                  const OfdmConfig& cfg, int repeats,
                                  std::uint64_t seed) {
    f.validate();
    if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");

    const auto taps = ground_truth_taps(f, c);
    Cir cir;
    cir.taps = {taps[0], taps[1]};
    const NoiseSpec noise = noise_for_level(f.noise_level, c);

    const PilotFrame pilots = make_pilot_frame(cfg, derive_seed(seed, 0));
    const TimeSignal tx = add_cp(clip(modulate(pilots.frame, cfg)), cfg);

    std::vector<TapEstimate> estimates;
    estimates.reserve(static_cast<std::size_t>(repeats));
    for (int r = 0; r < repeats; ++r) {
        TimeSignal rx = apply_channel(
            tx, cir, noise, derive_seed(seed, static_cast<std::uint64_t>(r) + 1));
        estimates.push_back(estimate_taps(rx, pilots, cfg, 2));
    }
    TapEstimate avg = average_estimates(estimates);

    MeasurementRecord rec;
    rec.features = f;
    rec.h_true = taps;
    rec.h_est = {avg.h_hat[0], avg.h_hat[1]};
    rec.repeats = repeats;
    rec.residual_imag = avg.residual_imag;
    return rec;
}

namespace {

const Material kTrainingMaterials[] = {Material::BlackFlatPaint,
                                       Material::PineWood, Material::Plaster};
const Led kLeds[] = {Led::White, Led::Blue};

}  // namespace

CampaignDataset generate_training_campaign(std::uint64_t seed,
                                           const GroundTruthConstants& c,
                                           const OfdmConfig& cfg,
                                           int repeats) {
    CampaignDataset ds;
    ds.constants = c;
    ds.cfg = cfg;
    ds.seed = seed;
    std::uint64_t index = 0;
    for (Material m : kTrainingMaterials) {
        for (Led led : kLeds) {
            for (int los : {0, 1}) {
                for (int level : {1, 2, 3}) {
                    for (int d = 20; d <= 200; d += 20) {
                        FeatureVector f;
                        f.reflectivity = builtin_reflectance(m, led);
                        f.tx_power_w = led_avg_power(led);
                        f.los = los;
                        f.noise_level = level;
                        f.distance_cm = d;
                        f.rx_gain_db = gain_for_distance(d);
                        ds.records.push_back(run_measurement(
                            f, c, cfg, repeats, derive_seed(seed, index)));
                        ++index;
                    }
                }
            }
        }
    }
    return ds;
}

CampaignDataset generate_hybrid_test(HybridSurface surface, std::uint64_t seed,
                                     const std::vector<double>& distances_cm,
                                     const GroundTruthConstants& c,
                                     const OfdmConfig& cfg, int repeats) {
    const Material mat = surface == HybridSurface::PlasterPine
                             ? Material::PlasterPineHybrid
                             : Material::BlackPineHybrid;

    std::vector<double> distances = distances_cm;
    if (distances.empty()) {
        // 8 random picks from the 5 cm test grid 20..200
        std::mt19937_64 rng(derive_seed(seed, 0xD157));
        std::uniform_int_distribution<int> pick(0, 36);
        for (int i = 0; i < 8; ++i)
            distances.push_back(20.0 + 5.0 * pick(rng));
    }
    for (double d : distances)
        if (d < 20.0 || d > 200.0)
            throw std::invalid_argument("distance outside [20, 200] cm");

    CampaignDataset ds;
    ds.constants = c;
    ds.cfg = cfg;
    ds.seed = seed;
    std::uint64_t index = 0;
    for (Led led : kLeds) {
        for (int los : {0, 1}) {
            for (int level : {1, 2, 3}) {
                for (double d : distances) {
                    FeatureVector f;
                    f.reflectivity = builtin_reflectance(mat, led);
                    f.tx_power_w = led_avg_power(led);
                    f.los = los;
                    f.noise_level = level;
                    f.distance_cm = d;
                    f.rx_gain_db = gain_for_distance(d);
                    ds.records.push_back(run_measurement(
                        f, c, cfg, repeats, derive_seed(seed, index)));
                    ++index;
                }
            }
        }
    }
    return ds;
}

mlp::Dataset to_training_dataset(const CampaignDataset& data) {
    mlp::Dataset out;
    out.reserve(data.records.size());
    for (const MeasurementRecord& r : data.records)
        out.push_back({r.features.as_array(), r.h_est});
    return out;
}

EvalReport evaluate(const mlp::MlpParams& params, const mlp::Normalizer& norm,
                    const CampaignDataset& data, std::size_t hist_bins) {
    if (data.records.empty()) throw std::invalid_argument("empty dataset");
    if (hist_bins == 0) throw std::invalid_argument("need at least one bin");

    EvalReport rep;
    std::array<rvec, 2> pct_errs;
    for (const MeasurementRecord& r : data.records) {
        auto pred = mlp::predict(params, norm, r.features.as_array());
        bool usable = true;
        for (std::size_t i = 0; i < 2; ++i)
            if (r.h_est[i] == 0.0) usable = false;
        for (std::size_t i = 0; i < 2; ++i) {
            double e = pred[i] - r.h_est[i];
            rep.mse[i] += e * e;
            if (usable)
                pct_errs[i].push_back(100.0 * std::abs(e) / std::abs(r.h_est[i]));
        }
        if (usable)
            ++rep.evaluated;
        else
            ++rep.excluded;
    }
    for (std::size_t i = 0; i < 2; ++i)
        rep.mse[i] /= static_cast<double>(data.records.size());

    for (std::size_t i = 0; i < 2; ++i) {
        const rvec& errs = pct_errs[i];
        if (errs.empty()) continue;
        double sum = 0.0, hi = 0.0;
        for (double e : errs) {
            sum += e;
            hi = std::max(hi, e);
        }
        rep.mean_pct_err[i] = sum / static_cast<double>(errs.size());
        if (hi == 0.0) hi = 1.0;
        Histogram& h = rep.histograms[i];
        const double width = hi / static_cast<double>(hist_bins);
        h.counts.assign(hist_bins, 0);
        for (std::size_t b = 0; b < hist_bins; ++b) {
            h.bin_lo.push_back(b * width);
            h.bin_hi.push_back((b + 1) * width);
        }
        for (double e : errs) {
            std::size_t b = std::min(
                hist_bins - 1, static_cast<std::size_t>(e / width));
            ++h.counts[b];
        }
    }
    return rep;
}

void save_dataset_csv(const CampaignDataset& data, const std::string& csv_path,
                      const std::string& meta_json_path,
                      const std::string& config_hash) {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot write " + csv_path);
    out.precision(17);
    out << "reflectivity,tx_power_w,los,noise_level,distance_cm,rx_gain_db,"
           "h1_true,h2_true,h1_est,h2_est\n";
    for (const MeasurementRecord& r : data.records) {
        out << r.features.reflectivity << ',' << r.features.tx_power_w << ','
            << r.features.los << ',' << r.features.noise_level << ','
            << r.features.distance_cm << ',' << r.features.rx_gain_db << ','
            << r.h_true[0] << ',' << r.h_true[1] << ',' << r.h_est[0] << ','
            << r.h_est[1] << '\n';
    }
    if (meta_json_path.empty()) return;
    nlohmann::json meta;
    meta["seed"] = data.seed;
    meta["records"] = data.records.size();
    meta["repeats"] = data.records.empty() ? 0 : data.records.front().repeats;
    meta["ofdm"] = {{"n", data.cfg.n}, {"cp_len", data.cfg.cp_len}};
    meta["ground_truth_constants"] = {{"c1", data.constants.c1},
                                      {"beta", data.constants.beta},
                                      {"c2", data.constants.c2},
                                      {"sigma0", data.constants.sigma0},
                                      {"dc0", data.constants.dc0}};
    if (!config_hash.empty()) meta["config_hash"] = config_hash;
    std::ofstream mout(meta_json_path);
    if (!mout) throw std::runtime_error("cannot write " + meta_json_path);
    mout << meta.dump(2) << '\n';
}

CampaignDataset load_dataset_csv(const std::string& csv_path,
                                 const std::string& meta_json_path) {
    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("cannot open " + csv_path);
    CampaignDataset ds;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first && line.find("reflectivity") != std::string::npos) {
            first = false;
            continue;
        }
        first = false;
        std::istringstream row(line);
        std::string cell;
        rvec vals;
        while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
        if (vals.size() != 10)
            throw std::runtime_error("bad dataset row: " + line);
        MeasurementRecord r;
        r.features.reflectivity = vals[0];
        r.features.tx_power_w = vals[1];
        r.features.los = static_cast<int>(vals[2]);
        r.features.noise_level = static_cast<int>(vals[3]);
        r.features.distance_cm = vals[4];
        r.features.rx_gain_db = vals[5];
        r.h_true = {vals[6], vals[7]};
        r.h_est = {vals[8], vals[9]};
        ds.records.push_back(r);
    }
    if (!meta_json_path.empty()) {
        std::ifstream min(meta_json_path);
        if (min) {
            nlohmann::json meta = nlohmann::json::parse(min);
            ds.seed = meta.value("seed", 0ull);
            if (meta.contains("ground_truth_constants")) {
                const auto& g = meta["ground_truth_constants"];
                ds.constants.c1 = g.value("c1", ds.constants.c1);
                ds.constants.beta = g.value("beta", ds.constants.beta);
                ds.constants.c2 = g.value("c2", ds.constants.c2);
                ds.constants.sigma0 = g.value("sigma0", ds.constants.sigma0);
                ds.constants.dc0 = g.value("dc0", ds.constants.dc0);
            }
        }
    }
    return ds;
}

namespace {

void write_hist_csv(const Histogram& h, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(17);
    out << "bin_lo,bin_hi,count\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b)
        out << h.bin_lo[b] << ',' << h.bin_hi[b] << ',' << h.counts[b] << '\n';
}

}  // namespace

void save_eval_report(const EvalReport& rep, const std::string& json_path,
                      const std::string& hist_csv_h1,
                      const std::string& hist_csv_h2,
                      const std::string& config_hash) {
    nlohmann::json j;
    j["mse"] = {{"h1", rep.mse[0]}, {"h2", rep.mse[1]}};
    j["mean_pct_abs_error"] = {{"h1", rep.mean_pct_err[0]},
                               {"h2", rep.mean_pct_err[1]}};
    j["evaluated"] = rep.evaluated;
    j["excluded_zero_target"] = rep.excluded;
    if (!config_hash.empty()) j["config_hash"] = config_hash;
    std::ofstream out(json_path);
    if (!out) throw std::runtime_error("cannot write " + json_path);
    out << j.dump(2) << '\n';
    if (!hist_csv_h1.empty()) write_hist_csv(rep.histograms[0], hist_csv_h1);
    if (!hist_csv_h2.empty()) write_hist_csv(rep.histograms[1], hist_csv_h2);
}

}  // namespace vlc

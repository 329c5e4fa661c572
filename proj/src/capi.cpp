#include "vlclab.h"

#include <exception>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>

#include "vlclab/campaign.hpp"
#include "vlclab/channel.hpp"
#include "vlclab/estimator.hpp"
#include "vlclab/mlp.hpp"
#include "vlclab/spectra.hpp"

struct vlc_dataset {
    vlc::CampaignDataset data;
};

struct vlc_model {
    vlc::mlp::Model model;
    bool has_curves = false;
    vlc::rvec train_curve, val_curve;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
vlc_status guarded(Fn&& fn) {
    try {
        fn();
        return VLC_OK;
    } catch (const std::invalid_argument& e) {
        g_last_error = e.what();
        return VLC_ERR_INVALID;
    } catch (const std::runtime_error& e) {
        g_last_error = e.what();
        const std::string msg = e.what();
        return msg.find("cannot") != std::string::npos ? VLC_ERR_IO
                                                       : VLC_ERR_RUNTIME;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return VLC_ERR_RUNTIME;
    }
}

vlc::Material to_material(vlc_material m) {
    switch (m) {
        case VLC_MAT_BLACK_FLAT_PAINT: return vlc::Material::BlackFlatPaint;
        case VLC_MAT_PINE_WOOD: return vlc::Material::PineWood;
        case VLC_MAT_PLASTER: return vlc::Material::Plaster;
        case VLC_MAT_PLASTER_PINE_HYBRID:
            return vlc::Material::PlasterPineHybrid;
        case VLC_MAT_BLACK_PINE_HYBRID: return vlc::Material::BlackPineHybrid;
    }
    throw std::invalid_argument("unknown material");
}

vlc::Led to_led(vlc_led l) {
    if (l == VLC_LED_WHITE) return vlc::Led::White;
    if (l == VLC_LED_BLUE) return vlc::Led::Blue;
    throw std::invalid_argument("unknown LED");
}

vlc::FeatureVector to_features(const vlc_features& f) {
    vlc::FeatureVector out;
    out.reflectivity = f.reflectivity;
    out.tx_power_w = f.tx_power_w;
    out.los = f.los;
    out.noise_level = f.noise_level;
    out.distance_cm = f.distance_cm;
    out.rx_gain_db = f.rx_gain_db;
    return out;
}

vlc::GroundTruthConstants to_constants(const vlc_channel_constants* c) {
    vlc::GroundTruthConstants out;
    if (c) {
        out.c1 = c->c1;
        out.beta = c->beta;
        out.c2 = c->c2;
        out.sigma0 = c->sigma0;
        out.dc0 = c->dc0;
    }
    return out;
}

vlc::mlp::TrainConfig to_train_config(const vlc_train_config* c) {
    vlc::mlp::TrainConfig out;
    if (c) {
        out.lr = c->lr;
        out.momentum = c->momentum;
        out.max_epochs = c->max_epochs;
        out.patience = c->patience;
    }
    return out;
}

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

extern "C" {

const char* vlc_last_error(void) { return g_last_error.c_str(); }

vlc_status vlc_builtin_reflectance(vlc_material m, vlc_led led, double* out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = vlc::builtin_reflectance(to_material(m), to_led(led));
    });
}

vlc_status vlc_led_avg_power(vlc_led led, double* out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        *out = vlc::led_avg_power(to_led(led));
    });
}

vlc_status vlc_reflectance_from_csv(const char* refl_csv, const char* spd_csv,
                                    double* out) {
    return guarded([&] {
        require(refl_csv && spd_csv && out, "null argument");
        vlc::Spectrum refl = vlc::load_spectrum_csv(refl_csv);
        vlc::Spectrum spd = vlc::load_spectrum_csv(spd_csv);
        *out = vlc::average_reflectance(refl, spd);
    });
}

vlc_status vlc_cir_metrics(const double* taps, size_t n_taps, double dt,
                           double out_metrics[4]) {
    return guarded([&] {
        require(taps && out_metrics, "null argument");
        vlc::Cir cir;
        cir.taps.assign(taps, taps + n_taps);
        cir.dt = dt;
        vlc::ChannelMetrics m = vlc::metrics(cir);
        out_metrics[0] = m.h0;
        out_metrics[1] = m.tau0;
        out_metrics[2] = m.tau_rms;
        out_metrics[3] = m.t_r;
    });
}

void vlc_default_constants(vlc_channel_constants* c) {
    if (!c) return;
    vlc::GroundTruthConstants d;
    c->c1 = d.c1;
    c->beta = d.beta;
    c->c2 = d.c2;
    c->sigma0 = d.sigma0;
    c->dc0 = d.dc0;
}

vlc_status vlc_simulate(const vlc_features* f, const vlc_channel_constants* c,
                        int repeats, unsigned long long seed, int noiseless,
                        vlc_measurement* out) {
    return guarded([&] {
        require(f && out, "null argument");
        vlc::GroundTruthConstants gc = to_constants(c);
        if (noiseless) {
            gc.sigma0 = 0.0;
            gc.dc0 = 0.0;
        }
        vlc::MeasurementRecord rec = vlc::run_measurement(
            to_features(*f), gc, vlc::OfdmConfig{}, repeats, seed);
        out->h1_true = rec.h_true[0];
        out->h2_true = rec.h_true[1];
        out->h1_est = rec.h_est[0];
        out->h2_est = rec.h_est[1];
        out->residual_imag = rec.residual_imag;
        out->repeats = rec.repeats;
    });
}

vlc_status vlc_campaign_generate(unsigned long long seed,
                                 const vlc_channel_constants* c,
                                 vlc_dataset** out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        auto ds = std::make_unique<vlc_dataset>();
        ds->data = vlc::generate_training_campaign(seed, to_constants(c));
        *out = ds.release();
    });
}

vlc_status vlc_hybrid_generate(vlc_surface surface, unsigned long long seed,
                               const vlc_channel_constants* c,
                               const double* distances_cm, size_t n_distances,
                               vlc_dataset** out) {
    return guarded([&] {
        require(out != nullptr, "out is null");
        require(surface == VLC_SURFACE_PLASTER_PINE ||
                    surface == VLC_SURFACE_BLACK_PINE,
                "unknown hybrid surface");
        std::vector<double> dists;
        if (distances_cm && n_distances)
            dists.assign(distances_cm, distances_cm + n_distances);
        auto ds = std::make_unique<vlc_dataset>();
        ds->data = vlc::generate_hybrid_test(
            surface == VLC_SURFACE_PLASTER_PINE
                ? vlc::HybridSurface::PlasterPine
                : vlc::HybridSurface::BlackPine,
            seed, dists, to_constants(c));
        *out = ds.release();
    });
}

size_t vlc_dataset_size(const vlc_dataset* ds) {
    return ds ? ds->data.records.size() : 0;
}

vlc_status vlc_dataset_save(const vlc_dataset* ds, const char* csv_path,
                            const char* meta_json_path,
                            const char* config_hash) {
    return guarded([&] {
        require(ds && csv_path, "null argument");
        vlc::save_dataset_csv(ds->data, csv_path,
                              meta_json_path ? meta_json_path : "",
                              config_hash ? config_hash : "");
    });
}

vlc_status vlc_dataset_load(const char* csv_path, const char* meta_json_path,
                            vlc_dataset** out) {
    return guarded([&] {
        require(csv_path && out, "null argument");
        auto ds = std::make_unique<vlc_dataset>();
        ds->data = vlc::load_dataset_csv(csv_path,
                                         meta_json_path ? meta_json_path : "");
        *out = ds.release();
    });
}

void vlc_dataset_free(vlc_dataset* ds) { delete ds; }

void vlc_default_train_config(vlc_train_config* c) {
    if (!c) return;
    vlc::mlp::TrainConfig d;
    c->lr = d.lr;
    c->momentum = d.momentum;
    c->max_epochs = d.max_epochs;
    c->patience = d.patience;
}

vlc_status vlc_train(const vlc_dataset* ds, int hidden,
                     unsigned long long seed, const vlc_train_config* cfg,
                     vlc_model** out) {
    return guarded([&] {
        require(ds && out, "null argument");
        require(hidden >= 1, "hidden must be >= 1");
        vlc::mlp::TrainReport rep =
            vlc::mlp::train(vlc::to_training_dataset(ds->data),
                            static_cast<std::size_t>(hidden), seed,
                            to_train_config(cfg));
        auto m = std::make_unique<vlc_model>();
        m->model.params = rep.params;
        m->model.normalizer = rep.normalizer;
        m->model.seed = seed;
        m->has_curves = true;
        m->train_curve = rep.train_mse_curve;
        m->val_curve = rep.val_mse_curve;
        *out = m.release();
    });
}

vlc_status vlc_model_save(const vlc_model* m, const char* json_path,
                          const char* config_hash) {
    return guarded([&] {
        require(m && json_path, "null argument");
        vlc::mlp::save_model_json(m->model, json_path,
                                  config_hash ? config_hash : "");
    });
}

vlc_status vlc_model_load(const char* json_path, vlc_model** out) {
    return guarded([&] {
        require(json_path && out, "null argument");
        auto m = std::make_unique<vlc_model>();
        m->model = vlc::mlp::load_model_json(json_path);
        *out = m.release();
    });
}

vlc_status vlc_model_curves_save(const vlc_model* m, const char* csv_path) {
    return guarded([&] {
        require(m && csv_path, "null argument");
        require(m->has_curves, "model has no training curves");
        std::ofstream out(csv_path);
        if (!out) throw std::runtime_error(std::string("cannot write ") +
                                           csv_path);
        out.precision(17);
        out << "epoch,train_mse,val_mse\n";
        for (std::size_t i = 0; i < m->train_curve.size(); ++i)
            out << i << ',' << m->train_curve[i] << ',' << m->val_curve[i]
                << '\n';
    });
}

vlc_status vlc_model_predict(const vlc_model* m, const vlc_features* f,
                             double out_taps[2]) {
    return guarded([&] {
        require(m && f && out_taps, "null argument");
        auto y = vlc::mlp::predict(m->model.params, m->model.normalizer,
                                   to_features(*f).as_array());
        out_taps[0] = y[0];
        out_taps[1] = y[1];
    });
}

void vlc_model_free(vlc_model* m) { delete m; }

vlc_status vlc_sweep(const vlc_dataset* ds, const int* candidates,
                     size_t n_candidates, unsigned long long seed,
                     const vlc_train_config* cfg, const char* out_csv,
                     int* best_hidden, double* best_val_mse) {
    return guarded([&] {
        require(ds && candidates && n_candidates, "null or empty candidates");
        std::vector<std::size_t> cand;
        for (size_t i = 0; i < n_candidates; ++i) {
            require(candidates[i] >= 1, "hidden sizes must be >= 1");
            cand.push_back(static_cast<std::size_t>(candidates[i]));
        }
        vlc::mlp::SweepResult res =
            vlc::mlp::sweep_hidden(vlc::to_training_dataset(ds->data), cand,
                                   seed, to_train_config(cfg));
        if (out_csv) {
            std::ofstream out(out_csv);
            if (!out) throw std::runtime_error(std::string("cannot write ") +
                                               out_csv);
            out.precision(17);
            out << "hidden,best_val_mse\n";
            for (const auto& e : res.entries)
                out << e.hidden << ',' << e.best_val_mse << '\n';
        }
        if (best_hidden) *best_hidden = static_cast<int>(res.best_hidden);
        if (best_val_mse) {
            for (const auto& e : res.entries)
                if (e.hidden == res.best_hidden) *best_val_mse = e.best_val_mse;
        }
    });
}

vlc_status vlc_evaluate(const vlc_model* m, const vlc_dataset* ds,
                        int hist_bins, const char* report_json,
                        const char* hist_csv_h1, const char* hist_csv_h2,
                        const char* config_hash, vlc_eval_summary* out) {
    return guarded([&] {
        require(m && ds, "null argument");
        require(hist_bins >= 1, "hist_bins must be >= 1");
        vlc::EvalReport rep =
            vlc::evaluate(m->model.params, m->model.normalizer, ds->data,
                          static_cast<std::size_t>(hist_bins));
        if (report_json)
            vlc::save_eval_report(rep, report_json,
                                  hist_csv_h1 ? hist_csv_h1 : "",
                                  hist_csv_h2 ? hist_csv_h2 : "",
                                  config_hash ? config_hash : "");
        if (out) {
            out->mse[0] = rep.mse[0];
            out->mse[1] = rep.mse[1];
            out->mean_pct_err[0] = rep.mean_pct_err[0];
            out->mean_pct_err[1] = rep.mean_pct_err[1];
            out->evaluated = rep.evaluated;
            out->excluded = rep.excluded;
        }
    });
}

}  // extern "C"

// Command-line front end for the vlclab link laboratory. Talks to the core
// exclusively through the C API in vlclab.h.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vlclab.h"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

// FNV-1a over the resolved option values of the active subcommand; stored in
// output metadata so runs can be matched to their configuration.
std::string config_hash(const CLI::App& cmd) {
    std::uint64_t h = 1469598103934665603ull;
    auto absorb = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    };
    absorb(cmd.get_name());
    for (const CLI::Option* opt : cmd.get_options()) {
        absorb(opt->get_name());
        for (const std::string& v : opt->results()) absorb(v);
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

int fail(vlc_status st) {
    std::fprintf(stderr, "error: %s\n", vlc_last_error());
    return (st == VLC_ERR_INVALID || st == VLC_ERR_IO) ? kExitUsage
                                                       : kExitRuntime;
}

bool parse_material(const std::string& name, vlc_material* out) {
    static const std::vector<std::pair<std::string, vlc_material>> table = {
        {"black", VLC_MAT_BLACK_FLAT_PAINT},
        {"black-flat-paint", VLC_MAT_BLACK_FLAT_PAINT},
        {"pine", VLC_MAT_PINE_WOOD},
        {"pine-wood", VLC_MAT_PINE_WOOD},
        {"plaster", VLC_MAT_PLASTER},
        {"plaster-pine", VLC_MAT_PLASTER_PINE_HYBRID},
        {"black-pine", VLC_MAT_BLACK_PINE_HYBRID},
    };
    for (const auto& [key, m] : table)
        if (key == name) {
            *out = m;
            return true;
        }
    return false;
}

bool parse_led(const std::string& name, vlc_led* out) {
    if (name == "white") {
        *out = VLC_LED_WHITE;
        return true;
    }
    if (name == "blue") {
        *out = VLC_LED_BLUE;
        return true;
    }
    return false;
}

struct ConstantFlags {
    vlc_channel_constants c{};
    void attach(CLI::App* cmd) {
        vlc_default_constants(&c);
        cmd->add_option("--c1", c.c1, "direct-path scale");
        cmd->add_option("--beta", c.beta, "LOS boost on h1");
        cmd->add_option("--c2", c.c2, "reflected-path scale");
        cmd->add_option("--sigma0", c.sigma0, "AWGN std per noise level");
        cmd->add_option("--dc0", c.dc0, "ambient DC per noise level");
    }
};

struct TrainFlags {
    vlc_train_config cfg{};
    void attach(CLI::App* cmd) {
        vlc_default_train_config(&cfg);
        cmd->add_option("--lr", cfg.lr, "initial learning rate");
        cmd->add_option("--momentum", cfg.momentum, "momentum factor");
        cmd->add_option("--max-epochs", cfg.max_epochs, "epoch cap");
        cmd->add_option("--patience", cfg.patience,
                        "epochs without validation improvement before stop");
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vlclab: ACO-OFDM visible-light link laboratory"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML config file (flags take precedence)");
    app.allow_config_extras(true);

    // reflectance
    auto* refl = app.add_subcommand(
        "reflectance", "band-averaged reflectance from spectra or built-ins");
    std::string refl_csv, spd_csv, mat_name, led_name = "white";
    refl->add_option("--refl", refl_csv, "reflectance spectrum CSV");
    refl->add_option("--spd", spd_csv, "LED spectral power CSV");
    refl->add_option("--material", mat_name,
                     "built-in surface: black|pine|plaster|plaster-pine|black-pine");
    refl->add_option("--led", led_name, "white|blue");

    // simulate
    auto* sim = app.add_subcommand(
        "simulate", "one synthetic measurement through the full chain");
    vlc_features feat{0.5, 63.02, 0, 1, 100.0, -1.0};
    std::string sim_mat, sim_led = "white", sim_out;
    std::uint64_t sim_seed = 1;
    int sim_repeats = 10;
    bool noiseless = false;
    ConstantFlags sim_consts;
    sim->add_option("--reflectivity", feat.reflectivity, "surface reflectivity");
    sim->add_option("--material", sim_mat, "built-in surface (sets reflectivity)");
    sim->add_option("--led", sim_led, "white|blue (sets tx power)");
    sim->add_option("--los", feat.los, "0 = NLOS, 1 = NLOS+LOS");
    sim->add_option("--noise-level", feat.noise_level, "1..3");
    sim->add_option("--distance", feat.distance_cm, "Tx-Rx distance, cm");
    sim->add_option("--rx-gain", feat.rx_gain_db,
                    "receiver gain dB (default: distance schedule)");
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--repeats", sim_repeats, "measurements to average");
    sim->add_flag("--noiseless", noiseless, "disable AWGN and ambient DC");
    sim->add_option("--out", sim_out, "tap-estimate CSV (default stdout)");
    sim_consts.attach(sim);

    // campaign
    auto* camp = app.add_subcommand(
        "campaign", "generate the 360-record factorial training campaign");
    std::uint64_t camp_seed = 42;
    std::string camp_out = "campaign.csv", camp_meta;
    std::string camp_surface;  // set for a hybrid test campaign instead
    ConstantFlags camp_consts;
    camp->add_option("--seed", camp_seed, "campaign seed");
    camp->add_option("--out", camp_out, "dataset CSV path");
    camp->add_option("--meta", camp_meta,
                     "metadata JSON sidecar (default <out>.meta.json)");
    camp->add_option("--hybrid", camp_surface,
                     "plaster-pine|black-pine: hybrid test set instead of the "
                     "training grid");
    camp_consts.attach(camp);

    // train
    auto* tr = app.add_subcommand("train", "train the 6->H->2 tap predictor");
    std::string tr_data, tr_model = "model.json", tr_curves;
    int tr_hidden = 10;
    std::uint64_t tr_seed = 42;
    TrainFlags tr_flags;
    tr->add_option("--data", tr_data, "campaign dataset CSV")->required();
    tr->add_option("--hidden", tr_hidden, "hidden units");
    tr->add_option("--seed", tr_seed, "training seed");
    tr->add_option("--model", tr_model, "model JSON output");
    tr->add_option("--curves", tr_curves,
                   "MSE-curve CSV output (default <model>.curves.csv)");
    tr_flags.attach(tr);

    // sweep
    auto* sw = app.add_subcommand("sweep", "hidden-size sweep");
    std::string sw_data, sw_out = "sweep.csv";
    std::vector<int> sw_cands = {2, 4, 6, 8, 10, 12, 15, 20};
    std::uint64_t sw_seed = 42;
    TrainFlags sw_flags;
    sw->add_option("--data", sw_data, "campaign dataset CSV")->required();
    sw->add_option("--candidates", sw_cands, "hidden sizes to try")
        ->delimiter(',');
    sw->add_option("--seed", sw_seed, "training seed");
    sw->add_option("--out", sw_out, "per-size validation MSE CSV");
    sw_flags.attach(sw);

    // evaluate
    auto* ev = app.add_subcommand("evaluate", "score a model on a dataset");
    std::string ev_model, ev_data, ev_report = "eval.json", ev_h1, ev_h2;
    int ev_bins = 20;
    ev->add_option("--model", ev_model, "model JSON")->required();
    ev->add_option("--data", ev_data, "dataset CSV")->required();
    ev->add_option("--report", ev_report, "evaluation report JSON");
    ev->add_option("--hist-h1", ev_h1,
                   "histogram CSV for tap 1 (default <report>.h1.csv)");
    ev->add_option("--hist-h2", ev_h2,
                   "histogram CSV for tap 2 (default <report>.h2.csv)");
    ev->add_option("--bins", ev_bins, "histogram bin count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    vlc_status st = VLC_OK;

    if (refl->parsed()) {
        double value = 0.0;
        if (!mat_name.empty()) {
            vlc_material m;
            vlc_led l;
            if (!parse_material(mat_name, &m) || !parse_led(led_name, &l)) {
                std::fprintf(stderr, "error: unknown material or LED\n");
                return kExitUsage;
            }
            st = vlc_builtin_reflectance(m, l, &value);
        } else if (!refl_csv.empty() && !spd_csv.empty()) {
            st = vlc_reflectance_from_csv(refl_csv.c_str(), spd_csv.c_str(),
                                          &value);
        } else {
            std::fprintf(stderr,
                         "error: need --material or both --refl and --spd\n");
            return kExitUsage;
        }
        if (st != VLC_OK) return fail(st);
        std::printf("%.6g\n", value);
        return 0;
    }

    if (sim->parsed()) {
        vlc_led l;
        if (!parse_led(sim_led, &l)) {
            std::fprintf(stderr, "error: unknown LED\n");
            return kExitUsage;
        }
        if ((st = vlc_led_avg_power(l, &feat.tx_power_w)) != VLC_OK)
            return fail(st);
        if (!sim_mat.empty()) {
            vlc_material m;
            if (!parse_material(sim_mat, &m)) {
                std::fprintf(stderr, "error: unknown material\n");
                return kExitUsage;
            }
            if ((st = vlc_builtin_reflectance(m, l, &feat.reflectivity)) !=
                VLC_OK)
                return fail(st);
        }
        if (feat.rx_gain_db < 0.0) {
            // distance-based gain schedule
            if (feat.distance_cm < 20.0 || feat.distance_cm > 200.0) {
                std::fprintf(stderr, "error: distance outside [20, 200] cm\n");
                return kExitUsage;
            }
            feat.rx_gain_db = feat.distance_cm < 40.0   ? 10.0
                              : feat.distance_cm < 80.0 ? 20.0
                                                        : 30.0;
        }
        vlc_measurement meas{};
        st = vlc_simulate(&feat, &sim_consts.c, sim_repeats, sim_seed,
                          noiseless ? 1 : 0, &meas);
        if (st != VLC_OK) return fail(st);
        std::string row = "h1,h2,residual_imag\n";
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", meas.h1_est,
                      meas.h2_est, meas.residual_imag);
        row += buf;
        if (sim_out.empty()) {
            std::fputs(row.c_str(), stdout);
        } else {
            std::ofstream out(sim_out);
            if (!out) {
                std::fprintf(stderr, "error: cannot write %s\n",
                             sim_out.c_str());
                return kExitRuntime;
            }
            out << row;
        }
        std::fprintf(stderr, "h_true = [%.6g, %.6g] (config %s)\n",
                     meas.h1_true, meas.h2_true, config_hash(*sim).c_str());
        return 0;
    }

    if (camp->parsed()) {
        vlc_dataset* ds = nullptr;
        if (camp_surface.empty()) {
            st = vlc_campaign_generate(camp_seed, &camp_consts.c, &ds);
        } else if (camp_surface == "plaster-pine" ||
                   camp_surface == "black-pine") {
            st = vlc_hybrid_generate(camp_surface == "plaster-pine"
                                         ? VLC_SURFACE_PLASTER_PINE
                                         : VLC_SURFACE_BLACK_PINE,
                                     camp_seed, &camp_consts.c, nullptr, 0,
                                     &ds);
        } else {
            std::fprintf(stderr, "error: unknown hybrid surface\n");
            return kExitUsage;
        }
        if (st != VLC_OK) return fail(st);
        if (camp_meta.empty()) camp_meta = camp_out + ".meta.json";
        st = vlc_dataset_save(ds, camp_out.c_str(), camp_meta.c_str(),
                              config_hash(*camp).c_str());
        std::size_t n = vlc_dataset_size(ds);
        vlc_dataset_free(ds);
        if (st != VLC_OK) return fail(st);
        std::printf("wrote %zu records to %s\n", n, camp_out.c_str());
        return 0;
    }

    if (tr->parsed()) {
        vlc_dataset* ds = nullptr;
        if ((st = vlc_dataset_load(tr_data.c_str(), nullptr, &ds)) != VLC_OK)
            return fail(st);
        vlc_model* model = nullptr;
        st = vlc_train(ds, tr_hidden, tr_seed, &tr_flags.cfg, &model);
        vlc_dataset_free(ds);
        if (st != VLC_OK) return fail(st);
        if (tr_curves.empty()) tr_curves = tr_model + ".curves.csv";
        st = vlc_model_save(model, tr_model.c_str(),
                            config_hash(*tr).c_str());
        if (st == VLC_OK) st = vlc_model_curves_save(model, tr_curves.c_str());
        vlc_model_free(model);
        if (st != VLC_OK) return fail(st);
        std::printf("wrote %s and %s\n", tr_model.c_str(), tr_curves.c_str());
        return 0;
    }

    if (sw->parsed()) {
        vlc_dataset* ds = nullptr;
        if ((st = vlc_dataset_load(sw_data.c_str(), nullptr, &ds)) != VLC_OK)
            return fail(st);
        int best = 0;
        double best_mse = 0.0;
        st = vlc_sweep(ds, sw_cands.data(), sw_cands.size(), sw_seed,
                       &sw_flags.cfg, sw_out.c_str(), &best, &best_mse);
        vlc_dataset_free(ds);
        if (st != VLC_OK) return fail(st);
        std::printf("best hidden size: %d (val MSE %.6g); table in %s\n", best,
                    best_mse, sw_out.c_str());
        return 0;
    }

    if (ev->parsed()) {
        vlc_model* model = nullptr;
        if ((st = vlc_model_load(ev_model.c_str(), &model)) != VLC_OK)
            return fail(st);
        vlc_dataset* ds = nullptr;
        if ((st = vlc_dataset_load(ev_data.c_str(), nullptr, &ds)) != VLC_OK) {
            vlc_model_free(model);
            return fail(st);
        }
        if (ev_h1.empty()) ev_h1 = ev_report + ".h1.csv";
        if (ev_h2.empty()) ev_h2 = ev_report + ".h2.csv";
        vlc_eval_summary sum{};
        st = vlc_evaluate(model, ds, ev_bins, ev_report.c_str(),
                          ev_h1.c_str(), ev_h2.c_str(),
                          config_hash(*ev).c_str(), &sum);
        vlc_dataset_free(ds);
        vlc_model_free(model);
        if (st != VLC_OK) return fail(st);
        std::printf("mean %% abs error: h1 %.4g%%  h2 %.4g%%\n",
                    sum.mean_pct_err[0], sum.mean_pct_err[1]);
        std::printf("MSE: h1 %.6g  h2 %.6g  (%zu records, %zu excluded)\n",
                    sum.mse[0], sum.mse[1], sum.evaluated, sum.excluded);
        return 0;
    }

    return kExitUsage;
}

// Exercises the extern-C surface the CLI (and any other binding) builds on.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include <doctest.h>

#include "vlclab.h"

TEST_CASE("builtin reflectance and LED power through the C API") {
    double v = 0.0;
    REQUIRE(vlc_builtin_reflectance(VLC_MAT_PINE_WOOD, VLC_LED_WHITE, &v) ==
            VLC_OK);
    CHECK(v == 0.5059);
    REQUIRE(vlc_builtin_reflectance(VLC_MAT_PLASTER, VLC_LED_BLUE, &v) ==
            VLC_OK);
    CHECK(v == 0.7285);
    REQUIRE(vlc_led_avg_power(VLC_LED_BLUE, &v) == VLC_OK);
    CHECK(v == 41.56);
    CHECK(vlc_builtin_reflectance(VLC_MAT_PINE_WOOD, VLC_LED_WHITE, nullptr) ==
          VLC_ERR_INVALID);
    CHECK(std::string(vlc_last_error()).size() > 0);
}

TEST_CASE("reflectance from CSV files") {
    const char* refl = "capi_refl.csv";
    const char* spd = "capi_spd.csv";
    {
        std::ofstream r(refl);
        r << "450,0.2\n650,0.8\n";
        std::ofstream s(spd);
        s << "450,1.0\n650,3.0\n";
    }
    double v = 0.0;
    REQUIRE(vlc_reflectance_from_csv(refl, spd, &v) == VLC_OK);
    CHECK(v == doctest::Approx(0.65));
    CHECK(vlc_reflectance_from_csv("missing.csv", spd, &v) != VLC_OK);
    std::remove(refl);
    std::remove(spd);
}

TEST_CASE("CIR metrics through the C API") {
    const double taps[2] = {std::sqrt(0.8), std::sqrt(0.2)};
    double m[4] = {0, 0, 0, 0};
    REQUIRE(vlc_cir_metrics(taps, 2, 1.0, m) == VLC_OK);
    CHECK(m[0] == doctest::Approx(1.0));
    CHECK(m[1] == doctest::Approx(0.2));
    CHECK(m[2] == doctest::Approx(0.4));
    CHECK(m[3] == doctest::Approx(1.0));

    const double zero[2] = {0.0, 0.0};
    CHECK(vlc_cir_metrics(zero, 2, 1.0, m) == VLC_ERR_INVALID);
}

TEST_CASE("simulate round trip") {
    vlc_features f{0.5, 63.02, 1, 1, 60.0, 20.0};
    vlc_channel_constants c;
    vlc_default_constants(&c);
    vlc_measurement meas{};
    REQUIRE(vlc_simulate(&f, &c, 3, 42, /*noiseless=*/1, &meas) == VLC_OK);
    CHECK(std::abs(meas.h1_est - meas.h1_true) < 1e-3);
    CHECK(std::abs(meas.h2_est - meas.h2_true) < 1e-3);
    CHECK(meas.repeats == 3);

    vlc_measurement again{};
    REQUIRE(vlc_simulate(&f, &c, 3, 42, 0, &meas) == VLC_OK);
    REQUIRE(vlc_simulate(&f, &c, 3, 42, 0, &again) == VLC_OK);
    CHECK(meas.h1_est == again.h1_est);

    f.distance_cm = 5.0;
    CHECK(vlc_simulate(&f, &c, 3, 42, 1, &meas) == VLC_ERR_INVALID);
}

TEST_CASE("dataset, training, sweep and evaluation lifecycle") {
    vlc_channel_constants c;
    vlc_default_constants(&c);

    // small hybrid set keeps this test quick
    double dists[2] = {40.0, 120.0};
    vlc_dataset* ds = nullptr;
    REQUIRE(vlc_hybrid_generate(VLC_SURFACE_BLACK_PINE, 9, &c, dists, 2,
                                &ds) == VLC_OK);
    REQUIRE(ds != nullptr);
    CHECK(vlc_dataset_size(ds) == 24);

    const char* csv = "capi_ds.csv";
    const char* meta = "capi_ds.meta.json";
    REQUIRE(vlc_dataset_save(ds, csv, meta, "deadbeef") == VLC_OK);
    {
        std::ifstream m(meta);
        std::string all((std::istreambuf_iterator<char>(m)),
                        std::istreambuf_iterator<char>());
        CHECK(all.find("deadbeef") != std::string::npos);
    }

    vlc_dataset* loaded = nullptr;
    REQUIRE(vlc_dataset_load(csv, meta, &loaded) == VLC_OK);
    CHECK(vlc_dataset_size(loaded) == 24);

    vlc_train_config cfg;
    vlc_default_train_config(&cfg);
    cfg.max_epochs = 200;
    vlc_model* model = nullptr;
    REQUIRE(vlc_train(loaded, 4, 7, &cfg, &model) == VLC_OK);

    const char* model_path = "capi_model.json";
    const char* curves_path = "capi_curves.csv";
    REQUIRE(vlc_model_save(model, model_path, nullptr) == VLC_OK);
    REQUIRE(vlc_model_curves_save(model, curves_path) == VLC_OK);

    vlc_model* back = nullptr;
    REQUIRE(vlc_model_load(model_path, &back) == VLC_OK);
    vlc_features f{0.2445, 63.02, 1, 2, 120.0, 30.0};
    double a[2], b[2];
    REQUIRE(vlc_model_predict(model, &f, a) == VLC_OK);
    REQUIRE(vlc_model_predict(back, &f, b) == VLC_OK);
    CHECK(a[0] == b[0]);
    CHECK(a[1] == b[1]);
    CHECK(vlc_model_curves_save(back, curves_path) == VLC_ERR_INVALID);

    int cands[2] = {2, 4};
    int best = 0;
    double best_mse = 0.0;
    const char* sweep_csv = "capi_sweep.csv";
    REQUIRE(vlc_sweep(loaded, cands, 2, 7, &cfg, sweep_csv, &best,
                      &best_mse) == VLC_OK);
    CHECK((best == 2 || best == 4));
    CHECK(best_mse >= 0.0);

    vlc_eval_summary sum{};
    REQUIRE(vlc_evaluate(model, loaded, 10, "capi_eval.json", "capi_h1.csv",
                         "capi_h2.csv", "deadbeef", &sum) == VLC_OK);
    CHECK(std::isfinite(sum.mean_pct_err[0]));
    CHECK(sum.evaluated + sum.excluded == 24);

    vlc_model_free(model);
    vlc_model_free(back);
    vlc_dataset_free(loaded);
    vlc_dataset_free(ds);
    for (const char* p : {csv, meta, model_path, curves_path, sweep_csv,
                          "capi_eval.json", "capi_h1.csv", "capi_h2.csv"})
        std::remove(p);
}

TEST_CASE("error paths set the thread-local message") {
    vlc_dataset* ds = nullptr;
    CHECK(vlc_dataset_load("no_such_file.csv", nullptr, &ds) != VLC_OK);
    CHECK(std::string(vlc_last_error()).find("no_such_file") !=
          std::string::npos);
    vlc_model* m = nullptr;
    CHECK(vlc_model_load("no_such_model.json", &m) != VLC_OK);
}

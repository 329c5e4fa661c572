/* C interface to the vlclab ACO-OFDM link laboratory.
 *
 * All functions return VLC_OK on success; on failure the return code gives
 * the error class and vlc_last_error() a one-line diagnostic for the calling
 * thread. Opaque handles must be released with the matching *_free call.
 */
#ifndef VLCLAB_H
#define VLCLAB_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    VLC_OK = 0,
    VLC_ERR_INVALID = 1, /* bad argument or precondition */
    VLC_ERR_IO = 2,      /* file missing or unreadable/unwritable */
    VLC_ERR_RUNTIME = 3  /* internal failure */
} vlc_status;

/* Message for the most recent failure on this thread. */
const char* vlc_last_error(void);

/* ---- spectra ---- */

typedef enum {
    VLC_MAT_BLACK_FLAT_PAINT = 0,
    VLC_MAT_PINE_WOOD = 1,
    VLC_MAT_PLASTER = 2,
    VLC_MAT_PLASTER_PINE_HYBRID = 3,
    VLC_MAT_BLACK_PINE_HYBRID = 4
} vlc_material;

typedef enum { VLC_LED_WHITE = 0, VLC_LED_BLUE = 1 } vlc_led;

vlc_status vlc_builtin_reflectance(vlc_material m, vlc_led led, double* out);
vlc_status vlc_led_avg_power(vlc_led led, double* out);

/* Eq.-style band-weighted mean reflectance from two CSV spectra
 * (`wavelength_nm,value`, ascending, header optional). */
vlc_status vlc_reflectance_from_csv(const char* refl_csv, const char* spd_csv,
                                    double* out);

/* ---- channel metrics ---- */

/* out_metrics = { H0, tau0_s, tau_rms_s, t_r_s } over amplitude taps. */
vlc_status vlc_cir_metrics(const double* taps, size_t n_taps, double dt,
                           double out_metrics[4]);

/* ---- measurement pipeline ---- */

typedef struct {
    double reflectivity;
    double tx_power_w;
    int los;         /* 0 = NLOS, 1 = NLOS+LOS */
    int noise_level; /* 1..3 */
    double distance_cm;
    double rx_gain_db;
} vlc_features;

typedef struct {
    double c1, beta, c2, sigma0, dc0;
} vlc_channel_constants;

void vlc_default_constants(vlc_channel_constants* c);

typedef struct {
    double h1_true, h2_true;
    double h1_est, h2_est;
    double residual_imag;
    int repeats;
} vlc_measurement;

/* Runs the modulate/clip/channel/estimate chain `repeats` times and averages.
 * If noiseless is nonzero, sigma0 and dc0 are forced to zero. */
vlc_status vlc_simulate(const vlc_features* f, const vlc_channel_constants* c,
                        int repeats, unsigned long long seed, int noiseless,
                        vlc_measurement* out);

/* ---- datasets ---- */

typedef struct vlc_dataset vlc_dataset;

vlc_status vlc_campaign_generate(unsigned long long seed,
                                 const vlc_channel_constants* c,
                                 vlc_dataset** out);

typedef enum {
    VLC_SURFACE_PLASTER_PINE = 0,
    VLC_SURFACE_BLACK_PINE = 1
} vlc_surface;

/* distances_cm may be NULL with n_distances = 0 for the default 8 random
 * draws from the 5 cm test grid. */
vlc_status vlc_hybrid_generate(vlc_surface surface, unsigned long long seed,
                               const vlc_channel_constants* c,
                               const double* distances_cm, size_t n_distances,
                               vlc_dataset** out);

size_t vlc_dataset_size(const vlc_dataset* ds);
/* meta_json_path and config_hash may be NULL; the hash, when given, is
 * recorded in the metadata sidecar for reproducibility. */
vlc_status vlc_dataset_save(const vlc_dataset* ds, const char* csv_path,
                            const char* meta_json_path,
                            const char* config_hash);
vlc_status vlc_dataset_load(const char* csv_path, const char* meta_json_path,
                            vlc_dataset** out);
void vlc_dataset_free(vlc_dataset* ds);

/* ---- MLP ---- */

typedef struct vlc_model vlc_model;

typedef struct {
    double lr;
    double momentum;
    int max_epochs;
    int patience;
} vlc_train_config;

void vlc_default_train_config(vlc_train_config* c);

vlc_status vlc_train(const vlc_dataset* ds, int hidden,
                     unsigned long long seed, const vlc_train_config* cfg,
                     vlc_model** out);
vlc_status vlc_model_save(const vlc_model* m, const char* json_path,
                          const char* config_hash);
vlc_status vlc_model_load(const char* json_path, vlc_model** out);
/* MSE-over-epochs curves: CSV `epoch,train_mse,val_mse` (train handle only;
 * a loaded model has no curves). */
vlc_status vlc_model_curves_save(const vlc_model* m, const char* csv_path);
vlc_status vlc_model_predict(const vlc_model* m, const vlc_features* f,
                             double out_taps[2]);
void vlc_model_free(vlc_model* m);

/* Trains one model per candidate hidden size under identical seeds/splits,
 * writes CSV `hidden,best_val_mse` and reports the argmin (ties to the
 * smaller size). out_csv may be NULL. */
vlc_status vlc_sweep(const vlc_dataset* ds, const int* candidates,
                     size_t n_candidates, unsigned long long seed,
                     const vlc_train_config* cfg, const char* out_csv,
                     int* best_hidden, double* best_val_mse);

/* ---- evaluation ---- */

typedef struct {
    double mse[2];
    double mean_pct_err[2];
    size_t evaluated;
    size_t excluded;
} vlc_eval_summary;

/* Any of the three paths may be NULL to skip that file. */
vlc_status vlc_evaluate(const vlc_model* m, const vlc_dataset* ds,
                        int hist_bins, const char* report_json,
                        const char* hist_csv_h1, const char* hist_csv_h2,
                        const char* config_hash, vlc_eval_summary* out);

#ifdef __cplusplus
}
#endif

#endif /* VLCLAB_H */

#ifndef VLCLAB_CHANNEL_HPP
#define VLCLAB_CHANNEL_HPP

#include <string>

#include "vlclab/modem.hpp"
#include "vlclab/types.hpp"

namespace vlc {

// Discrete channel impulse response, amplitude taps at multiples of dt.
// At 512 kHz transmission bandwidth two taps are enough.
struct Cir {
    rvec taps;
    double dt = 1.0 / 512000.0;  // seconds per sample

    void validate() const;
};

struct NoiseSpec {
    double sigma_n = 0.0;     // electrical AWGN std, signal units
    double dc_ambient = 0.0;  // ambient light shows up as a DC offset
};

struct ChannelMetrics {
    double h0 = 0.0;       // DC gain, sum of the power profile
    double tau0 = 0.0;     // mean excess delay, s
    double tau_rms = 0.0;  // RMS delay spread, s
    double t_r = 0.0;      // 97%-power window, s
};

// y = circconv(x, h) + dc + N(0, sigma^2), deterministic per seed.
TimeSignal apply_channel(const TimeSignal& x, const Cir& cir,
                         const NoiseSpec& noise, std::uint64_t rng_seed);

// p[l] = h[l]^2
rvec power_profile(const Cir& cir);

// Delay-spread statistics over the power profile. Throws on an all-zero CIR.
ChannelMetrics metrics(const Cir& cir);

void save_cir_csv(const Cir& cir, const std::string& path);
std::string metrics_json(const ChannelMetrics& m);

}  // namespace vlc

#endif

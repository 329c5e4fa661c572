#include "vlclab/channel.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace vlc {

void Cir::validate() const {
    if (taps.empty()) throw std::invalid_argument("CIR needs at least one tap");
    if (!(dt > 0.0)) throw std::invalid_argument("CIR dt must be positive");
}

TimeSignal apply_channel(const TimeSignal& x, const Cir& cir,
                         const NoiseSpec& noise, std::uint64_t rng_seed) {
    cir.validate();
    if (noise.sigma_n < 0.0)
        throw std::invalid_argument("sigma_n must be nonnegative");
    const std::size_t len = x.samples.size();
    const std::size_t lh = cir.taps.size();
    if (lh > len)
        throw std::invalid_argument("channel longer than the signal");

    TimeSignal y;
    y.clipped = x.clipped;
    y.samples.assign(len, 0.0);
    for (std::size_t m = 0; m < len; ++m) {
        double acc = 0.0;
        for (std::size_t l = 0; l < lh; ++l)
            acc += cir.taps[l] * x.samples[(m + len - l) % len];
        y.samples[m] = acc + noise.dc_ambient;
    }
    if (noise.sigma_n > 0.0) {
        std::mt19937_64 rng(rng_seed);
        std::normal_distribution<double> gauss(0.0, noise.sigma_n);
        for (double& s : y.samples) s += gauss(rng);
    }
    return y;
}

rvec power_profile(const Cir& cir) {
    rvec p(cir.taps.size());
    for (std::size_t l = 0; l < p.size(); ++l) p[l] = cir.taps[l] * cir.taps[l];
    return p;
}

ChannelMetrics metrics(const Cir& cir) {
    cir.validate();
    const rvec p = power_profile(cir);
    double total = 0.0;
    for (double v : p) total += v;
    if (total == 0.0) throw std::invalid_argument("degenerate CIR");

    ChannelMetrics m;
    m.h0 = total;
    double first = 0.0;
    for (std::size_t l = 0; l < p.size(); ++l)
        first += static_cast<double>(l) * cir.dt * p[l];
    m.tau0 = first / total;
    double second = 0.0;
    for (std::size_t l = 0; l < p.size(); ++l) {
        double d = static_cast<double>(l) * cir.dt - m.tau0;
        second += d * d * p[l];
    }
    m.tau_rms = std::sqrt(second / total);

    // smallest delay containing 97% of the power; ties go to the earliest index
    double cum = 0.0;
    for (std::size_t l = 0; l < p.size(); ++l) {
        cum += p[l];
        if (cum >= 0.97 * total) {
            m.t_r = static_cast<double>(l) * cir.dt;
            break;
        }
    }
    return m;
}

void save_cir_csv(const Cir& cir, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "tap_index,amplitude\n";
    for (std::size_t l = 0; l < cir.taps.size(); ++l)
        out << l << ',' << cir.taps[l] << '\n';
}

std::string metrics_json(const ChannelMetrics& m) {
    std::ostringstream out;
    out.precision(17);
    out << "{\"h0\":" << m.h0 << ",\"tau0_s\":" << m.tau0
        << ",\"tau_rms_s\":" << m.tau_rms << ",\"t_r_s\":" << m.t_r << "}";
    return out.str();
}

}  // namespace vlc

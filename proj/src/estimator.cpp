#include "vlclab/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "vlclab/spline.hpp"

namespace vlc {

void PilotFrame::validate(const OfdmConfig& cfg) const {
    if (frame.bins.size() != cfg.n)
        throw std::invalid_argument("pilot frame size mismatch");
    for (std::size_t k = 1; k < cfg.n / 2; k += 2)
        if (frame.bins[k] == cplx(0.0, 0.0))
            throw std::invalid_argument("singular pilot");
}

PilotFrame make_pilot_frame(const OfdmConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    std::mt19937_64 rng(seed);
    std::vector<std::uint8_t> bits(cfg.payload_size() * 2);
    for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1u);
    PilotFrame p;
    p.frame = build_frame(qam_map(bits), cfg);
    return p;
}

cvec zf_estimate(const cvec& received_bins, const PilotFrame& pilots) {
    const std::size_t n = pilots.frame.bins.size();
    if (received_bins.size() != n)
        throw std::invalid_argument("received vector size mismatch");
    cvec h_odd;
    h_odd.reserve(n / 4);
    for (std::size_t k = 1; k < n / 2; k += 2) {
        const cplx x = pilots.frame.bins[k];
        if (x == cplx(0.0, 0.0)) throw std::invalid_argument("singular pilot");
        h_odd.push_back(received_bins[k] / x);
    }
    return h_odd;
}

cvec interpolate_full(const cvec& h_odd, std::size_t n) {
    if (h_odd.size() < 4)
        throw std::invalid_argument("need at least 4 odd-bin samples");
    if (h_odd.size() != n / 4)
        throw std::invalid_argument("odd-bin sample count must be n/4");
    rvec ks(h_odd.size()), re(h_odd.size()), im(h_odd.size());
    for (std::size_t i = 0; i < h_odd.size(); ++i) {
        ks[i] = static_cast<double>(2 * i + 1);
        re[i] = h_odd[i].real();
        im[i] = h_odd[i].imag();
    }
    CubicSpline sre(ks, re);
    CubicSpline sim(ks, im);

    cvec full(n);
    for (std::size_t k = 0; k <= n / 2; ++k) {
        double t = static_cast<double>(k);
        full[k] = cplx(sre(t), sim(t));
    }
    for (std::size_t k = n / 2 + 1; k < n; ++k)
        full[k] = std::conj(full[n - k]);
    return full;
}

TapEstimate to_time_taps(const cvec& h_full, std::size_t l_h) {
    const std::size_t n = h_full.size();
    if (l_h > n) throw std::invalid_argument("l_h exceeds transform size");
    cvec t = ifft_unitary(h_full);
    // extra 1/sqrt(n) so a forward response sum_l h[l] e^{-j2pi kl/n}
    // round-trips to the taps without scaling
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    TapEstimate est;
    est.h_hat.reserve(l_h);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] *= scale;
        est.residual_imag = std::max(est.residual_imag, std::abs(t[i].imag()));
    }
    for (std::size_t l = 0; l < l_h; ++l) est.h_hat.push_back(t[l].real());
    return est;
}

TapEstimate estimate_taps(const TimeSignal& received, const PilotFrame& pilots,
                          const OfdmConfig& cfg, std::size_t l_h) {
    pilots.validate(cfg);
    cvec bins = demodulate(remove_cp(received, cfg), cfg);
    cvec h_odd = zf_estimate(bins, pilots);
    for (cplx& h : h_odd) h *= 2.0;  // clipping halves the odd bins
    return to_time_taps(interpolate_full(h_odd, cfg.n), l_h);
}

TapEstimate average_estimates(const std::vector<TapEstimate>& estimates) {
    if (estimates.empty())
        throw std::invalid_argument("no estimates to average");
    const std::size_t lh = estimates.front().h_hat.size();
    TapEstimate avg;
    avg.h_hat.assign(lh, 0.0);
    for (const TapEstimate& e : estimates) {
        if (e.h_hat.size() != lh)
            throw std::invalid_argument("estimate length mismatch");
        for (std::size_t l = 0; l < lh; ++l) avg.h_hat[l] += e.h_hat[l];
        avg.residual_imag = std::max(avg.residual_imag, e.residual_imag);
    }
    for (double& v : avg.h_hat) v /= static_cast<double>(estimates.size());
    return avg;
}

}  // namespace vlc

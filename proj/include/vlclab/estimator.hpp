#ifndef VLCLAB_ESTIMATOR_HPP
#define VLCLAB_ESTIMATOR_HPP

#include "vlclab/modem.hpp"
#include "vlclab/types.hpp"

namespace vlc {

// Frame whose odd bins below n/2 all carry known nonzero pilot symbols.
struct PilotFrame {
    FrequencyFrame frame;

    void validate(const OfdmConfig& cfg) const;
};

struct TapEstimate {
    rvec h_hat;
    double residual_imag = 0.0;  // max |imag| discarded by the final transform
};

// Pilots are unit-magnitude 4-QAM symbols from a seeded pseudorandom
// sequence; the noiseless math is insensitive to the actual values.
PilotFrame make_pilot_frame(const OfdmConfig& cfg, std::uint64_t seed);

// Per-bin zero forcing H[k] = Y[k]/X[k] on odd bins k = 1, 3, ..., n/2-1.
// Returns n/4 values in ascending bin order.
cvec zf_estimate(const cvec& received_bins, const PilotFrame& pilots);

// Natural cubic spline over the odd-bin samples (real and imaginary parts
// separately), evaluated on bins 0..n/2 with endpoint extrapolation; the
// upper half is filled by Hermitian reflection.
cvec interpolate_full(const cvec& h_odd, std::size_t n);

// Inverse transform scaled so H[k] = sum_l h[l] e^{-j2pi kl/n} maps back to
// the taps exactly; real parts kept, max imaginary magnitude recorded.
TapEstimate to_time_taps(const cvec& h_full, std::size_t l_h);

// Full receive chain: remove CP, FFT, undo the ACO clipping factor (odd bins
// carry X[k]/2 after clipping, so ZF outputs are doubled), interpolate and
// transform back to l_h time-domain taps.
TapEstimate estimate_taps(const TimeSignal& received, const PilotFrame& pilots,
                          const OfdmConfig& cfg, std::size_t l_h);

// Element-wise mean, used for the 10-repeat measurement averaging.
TapEstimate average_estimates(const std::vector<TapEstimate>& estimates);

}  // namespace vlc

#endif

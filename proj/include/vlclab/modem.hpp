#ifndef VLCLAB_MODEM_HPP
#define VLCLAB_MODEM_HPP

#include <cstdint>
#include <string>

#include "vlclab/types.hpp"

namespace vlc {

struct OfdmConfig {
    std::size_t n = 512;     // IFFT size, power of two
    std::size_t cp_len = 4;  // must cover the channel length in the full chain
    std::size_t pilot_separation = 2;  // comb spacing over the odd grid
    // Active sub-carrier count from the source experiment; descriptive only,
    // the strict odd-bin layout fixes the real count at n/4 payload symbols.
    std::size_t active_subcarriers = 504;

    std::size_t payload_size() const { return n / 4; }
    void validate() const;  // throws std::invalid_argument
};

// Frequency-domain symbol. Valid frames have bins[0] = bins[n/2] = 0, zeros
// on all even bins and Hermitian symmetry bins[n-k] = conj(bins[k]).
struct FrequencyFrame {
    cvec bins;
};

struct TimeSignal {
    rvec samples;
    bool clipped = false;
};

// Gray-coded 4-QAM, unit average symbol energy.
cvec qam_map(const std::vector<std::uint8_t>& bits);
std::vector<std::uint8_t> qam_demap(const cvec& symbols);

// Places n/4 payload symbols on the odd bins below n/2 and mirrors the
// conjugates onto the upper half.
FrequencyFrame build_frame(const cvec& payload, const OfdmConfig& cfg);

// Unitary inverse transform to a real, bipolar, antisymmetric signal.
// Throws "frame not Hermitian" if the imaginary residue exceeds 1e-9.
TimeSignal modulate(const FrequencyFrame& frame, const OfdmConfig& cfg);

// Sample-wise max(x, 0); the distortion lands only on even bins.
TimeSignal clip(const TimeSignal& signal);

TimeSignal add_cp(const TimeSignal& signal, const OfdmConfig& cfg);
TimeSignal remove_cp(const TimeSignal& signal, const OfdmConfig& cfg);

// Unitary forward transform of a CP-free block.
cvec demodulate(const TimeSignal& signal, const OfdmConfig& cfg);

// Unitary (1/sqrt(n) both ways) radix-2 transforms; n must be a power of two.
cvec fft_unitary(cvec v);
cvec ifft_unitary(cvec v);

// Debug dump: rows of `bin,re,im`.
void save_frame_csv(const FrequencyFrame& frame, const std::string& path);

}  // namespace vlc

#endif

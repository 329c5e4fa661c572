#include "vlclab/modem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace vlc {

namespace {

constexpr double kHermitianTol = 1e-9;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 DIT transform, sign = -1 forward, +1 inverse.
void fft_core(cvec& a, int sign) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw std::invalid_argument("fft size must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    // direct-angle twiddle table; a multiplicative recurrence would smear
    // O(n*eps) error across the spectrum
    cvec roots(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
        const double ang = sign * 2.0 * std::numbers::pi *
                           static_cast<double>(j) / static_cast<double>(n);
        roots[j] = cplx(std::cos(ang), std::sin(ang));
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t j = 0; j < len / 2; ++j) {
                cplx u = a[i + j];
                cplx v = a[i + j + len / 2] * roots[j * stride];
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
            }
        }
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& x : a) x *= scale;
}

}  // namespace

void OfdmConfig::validate() const {
    if (n < 8 || !is_pow2(n))
        throw std::invalid_argument("n must be a power of two >= 8");
}

cvec fft_unitary(cvec v) {
    fft_core(v, -1);
    return v;
}

cvec ifft_unitary(cvec v) {
    fft_core(v, +1);
    return v;
}

cvec qam_map(const std::vector<std::uint8_t>& bits) {
    if (bits.size() % 2 != 0)
        throw std::invalid_argument("4-QAM needs an even bit count");
    const double s = 1.0 / std::sqrt(2.0);
    cvec out;
    out.reserve(bits.size() / 2);
    for (std::size_t i = 0; i < bits.size(); i += 2) {
        // 00 -> (+,+), 01 -> (-,+), 11 -> (-,-), 10 -> (+,-)
        double re = bits[i + 1] ? -s : s;
        double im = bits[i] ? -s : s;
        out.emplace_back(re, im);
    }
    return out;
}

std::vector<std::uint8_t> qam_demap(const cvec& symbols) {
    std::vector<std::uint8_t> bits;
    bits.reserve(symbols.size() * 2);
    for (const cplx& sym : symbols) {
        bits.push_back(sym.imag() < 0 ? 1 : 0);
        bits.push_back(sym.real() < 0 ? 1 : 0);
    }
    return bits;
}

FrequencyFrame build_frame(const cvec& payload, const OfdmConfig& cfg) {
    cfg.validate();
    const std::size_t n = cfg.n;
    if (payload.size() != cfg.payload_size())
        throw std::invalid_argument("payload must hold exactly n/4 symbols");
    FrequencyFrame f;
    f.bins.assign(n, cplx(0.0, 0.0));
    std::size_t idx = 0;
    for (std::size_t k = 1; k < n / 2; k += 2) {
        f.bins[k] = payload[idx++];
        f.bins[n - k] = std::conj(payload[idx - 1]);
    }
    return f;
}

TimeSignal modulate(const FrequencyFrame& frame, const OfdmConfig& cfg) {
    cfg.validate();
    if (frame.bins.size() != cfg.n)
        throw std::invalid_argument("frame size mismatch");
    cvec t = ifft_unitary(frame.bins);
    double residue = 0.0;
    for (const cplx& x : t) residue = std::max(residue, std::abs(x.imag()));
    if (residue > kHermitianTol)
        throw std::invalid_argument("frame not Hermitian");
    TimeSignal out;
    out.samples.reserve(t.size());
    for (const cplx& x : t) out.samples.push_back(x.real());
    return out;
}

TimeSignal clip(const TimeSignal& signal) {
    TimeSignal out = signal;
    for (double& x : out.samples) x = std::max(x, 0.0);
    out.clipped = true;
    return out;
}

TimeSignal add_cp(const TimeSignal& signal, const OfdmConfig& cfg) {
    if (signal.samples.size() != cfg.n)
        throw std::invalid_argument("add_cp expects a length-n signal");
    TimeSignal out;
    out.clipped = signal.clipped;
    out.samples.reserve(cfg.n + cfg.cp_len);
    out.samples.insert(out.samples.end(),
                       signal.samples.end() - static_cast<long>(cfg.cp_len),
                       signal.samples.end());
    out.samples.insert(out.samples.end(), signal.samples.begin(),
                       signal.samples.end());
    return out;
}

TimeSignal remove_cp(const TimeSignal& signal, const OfdmConfig& cfg) {
    if (signal.samples.size() != cfg.n + cfg.cp_len)
        throw std::invalid_argument("remove_cp expects n + cp_len samples");
    TimeSignal out;
    out.clipped = signal.clipped;
    out.samples.assign(signal.samples.begin() + static_cast<long>(cfg.cp_len),
                       signal.samples.end());
    return out;
}

cvec demodulate(const TimeSignal& signal, const OfdmConfig& cfg) {
    cfg.validate();
    if (signal.samples.size() != cfg.n)
        throw std::invalid_argument("demodulate expects a length-n signal");
    cvec v(cfg.n);
    for (std::size_t i = 0; i < cfg.n; ++i) v[i] = signal.samples[i];
    return fft_unitary(std::move(v));
}

void save_frame_csv(const FrequencyFrame& frame, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "bin,re,im\n";
    for (std::size_t k = 0; k < frame.bins.size(); ++k)
        out << k << ',' << frame.bins[k].real() << ',' << frame.bins[k].imag()
            << '\n';
}

}  // namespace vlc

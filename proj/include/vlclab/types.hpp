#ifndef VLCLAB_TYPES_HPP
#define VLCLAB_TYPES_HPP

#include <complex>
#include <cstdint>
#include <vector>

namespace vlc {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;
using rvec = std::vector<double>;

// splitmix64, used to derive independent per-record/per-repeat seeds
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return mix_seed(base ^ mix_seed(index + 1));
}

}  // namespace vlc

#endif

#ifndef VLCLAB_SPECTRA_HPP
#define VLCLAB_SPECTRA_HPP

#include <string>

#include "vlclab/types.hpp"

namespace vlc {

// Wavelength-indexed samples, strictly increasing in nm. Holds either a
// reflectance curve (values in [0,1]) or a spectral power distribution
// (values >= 0, watts per sample point).
struct Spectrum {
    rvec wavelength_nm;
    rvec value;

    std::size_t size() const { return wavelength_nm.size(); }
    void validate() const;  // throws std::invalid_argument on bad shape
    // Linear interpolation at an arbitrary wavelength; clamps outside the
    // sampled range.
    double interp(double nm) const;
};

enum class Material {
    BlackFlatPaint,
    PineWood,
    Plaster,
    PlasterPineHybrid,
    BlackPineHybrid,
};

enum class Led { White, Blue };

// Visible-light integration band, nm.
inline constexpr double kVlBandLoNm = 420.0;
inline constexpr double kVlBandHiNm = 700.0;

// Sum of spectral power over samples inside the VL band.
double total_power(const Spectrum& spd,
                   double lo_nm = kVlBandLoNm, double hi_nm = kVlBandHiNm);

// Power-weighted mean reflectance over the VL band. The reflectance curve is
// linearly resampled onto the SPD's wavelength grid.
double average_reflectance(const Spectrum& refl, const Spectrum& spd,
                           double lo_nm = kVlBandLoNm,
                           double hi_nm = kVlBandHiNm);

// Canonical measured constants for the five surfaces under each LED.
double builtin_reflectance(Material m, Led led);

// Average spectral power of each LED, watts.
double led_avg_power(Led led);

// Two-column CSV `wavelength_nm,value`, header optional.
Spectrum load_spectrum_csv(const std::string& path);

}  // namespace vlc

#endif

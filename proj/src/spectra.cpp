#include "vlclab/spectra.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vlc {

void Spectrum::validate() const {
    if (wavelength_nm.size() != value.size())
        throw std::invalid_argument("spectrum: column length mismatch");
    if (wavelength_nm.size() < 2)
        throw std::invalid_argument("spectrum: needs at least 2 samples");
    for (std::size_t i = 1; i < wavelength_nm.size(); ++i)
        if (!(wavelength_nm[i] > wavelength_nm[i - 1]))
            throw std::invalid_argument(
                "spectrum: wavelengths must be strictly increasing");
}

double Spectrum::interp(double nm) const {
    if (nm <= wavelength_nm.front()) return value.front();
    if (nm >= wavelength_nm.back()) return value.back();
    auto it = std::upper_bound(wavelength_nm.begin(), wavelength_nm.end(), nm);
    std::size_t hi = static_cast<std::size_t>(it - wavelength_nm.begin());
    std::size_t lo = hi - 1;
    double t = (nm - wavelength_nm[lo]) /
               (wavelength_nm[hi] - wavelength_nm[lo]);
    return value[lo] + t * (value[hi] - value[lo]);
}

double total_power(const Spectrum& spd, double lo_nm, double hi_nm) {
    spd.validate();
    double sum = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < spd.size(); ++i) {
        double nm = spd.wavelength_nm[i];
        if (nm < lo_nm || nm > hi_nm) continue;
        if (spd.value[i] < 0)
            throw std::invalid_argument("spectrum: negative spectral power");
        sum += spd.value[i];
        any = true;
    }
    if (!any) throw std::invalid_argument("no samples in VL band");
    return sum;
}

double average_reflectance(const Spectrum& refl, const Spectrum& spd,
                           double lo_nm, double hi_nm) {
    refl.validate();
    spd.validate();
    for (double v : refl.value)
        if (v < 0.0 || v > 1.0)
            throw std::invalid_argument("reflectance values must be in [0,1]");
    double p_total = 0.0;
    double weighted = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < spd.size(); ++i) {
        double nm = spd.wavelength_nm[i];
        if (nm < lo_nm || nm > hi_nm) continue;
        double p = spd.value[i];
        if (p < 0) throw std::invalid_argument("spectrum: negative spectral power");
        p_total += p;
        weighted += refl.interp(nm) * p;
        any = true;
    }
    if (!any) throw std::invalid_argument("no samples in VL band");
    if (p_total == 0.0) throw std::invalid_argument("zero total power");
    return weighted / p_total;
}

double builtin_reflectance(Material m, Led led) {
    switch (m) {
        case Material::BlackFlatPaint:
            return led == Led::White ? 0.0352 : 0.0350;
        case Material::PineWood:
            return led == Led::White ? 0.5059 : 0.4541;
        case Material::Plaster:
            return led == Led::White ? 0.7489 : 0.7285;
        // Hybrid (half/half covered) surface values as measured. Note the
        // Plaster-PineWood white value is lower than its blue value and lower
        // than pure pine wood; the constants are shipped verbatim anyway.
        case Material::PlasterPineHybrid:
            return led == Led::White ? 0.2705 : 0.6274;
        case Material::BlackPineHybrid:
            return led == Led::White ? 0.2445 : 0.5913;
    }
    throw std::invalid_argument("unknown material");
}

double led_avg_power(Led led) {
    return led == Led::White ? 63.02 : 41.56;
}

Spectrum load_spectrum_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spectrum file: " + path);
    Spectrum s;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string a, b;
        if (!std::getline(row, a, ',') || !std::getline(row, b)) continue;
        try {
            double nm = std::stod(a);
            double v = std::stod(b);
            s.wavelength_nm.push_back(nm);
            s.value.push_back(v);
        } catch (const std::exception&) {
            // header row
            if (!s.wavelength_nm.empty())
                throw std::runtime_error("bad row in spectrum file: " + line);
        }
    }
    s.validate();
    return s;
}

}  // namespace vlc

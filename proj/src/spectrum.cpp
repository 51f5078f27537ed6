#include "pdc/spectrum.hpp"

#include <cmath>
#include <string>

namespace pdc {

std::string_view axis_kind_name(AxisKind kind) {
    switch (kind) {
    case AxisKind::kWavelengthUm: return "wavelength_um";
    case AxisKind::kAngularFrequency: return "angular_frequency_rad_per_ps";
    case AxisKind::kDetuning: return "detuning_rad_per_ps";
    case AxisKind::kWavenumber: return "wavenumber_per_um";
    }
    return "unknown";
}

bool strictly_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) return false;
    }
    return true;
}

void Spectrum::validate(bool allow_negative) const {
    if (axis.size() != intensity.size()) {
        throw FormatError("spectrum: axis and intensity lengths differ");
    }
    for (std::size_t i = 0; i < axis.size(); ++i) {
        if (!std::isfinite(axis[i]) || !std::isfinite(intensity[i])) {
            throw FormatError("spectrum: non-finite value at sample " + std::to_string(i));
        }
        if (!allow_negative && intensity[i] < 0.0) {
            throw FormatError("spectrum: negative intensity at sample " + std::to_string(i));
        }
    }
    if (!strictly_increasing(axis)) {
        throw FormatError("spectrum: axis must be strictly increasing");
    }
}

} // namespace pdc

#ifndef PDC_SPECTRUM_HPP
#define PDC_SPECTRUM_HPP

#include <stdexcept>
#include <string_view>
#include <vector>

namespace pdc {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class AxisKind {
    kWavelengthUm,        // vacuum wavelength, um
    kAngularFrequency,    // absolute angular frequency, rad/ps
    kDetuning,            // angular-frequency detuning, rad/ps
    kWavenumber,          // vacuum wavenumber 1/lambda, 1/um
};

std::string_view axis_kind_name(AxisKind kind);

// Sampled 1D intensity. The axis is strictly increasing.
struct Spectrum {
    AxisKind kind = AxisKind::kWavelengthUm;
    std::vector<double> axis;
    std::vector<double> intensity;

    std::size_t size() const { return axis.size(); }
    bool empty() const { return axis.empty(); }

    /// Throws FormatError on length mismatch, non-finite values or a
    /// non-increasing axis. Negative intensities are allowed only when
    /// allow_negative is set (noisy or DC-removed data).
    void validate(bool allow_negative = true) const;
};

bool strictly_increasing(const std::vector<double>& v);

} // namespace pdc

#endif // PDC_SPECTRUM_HPP

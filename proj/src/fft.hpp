#ifndef PDC_SRC_FFT_HPP
#define PDC_SRC_FFT_HPP

#include <span>
#include <vector>

namespace pdc::detail {

// |X_k| for k = 0..n/2 of the real input zero-padded to n samples.
std::vector<double> real_fft_magnitude(std::span<const double> input, std::size_t n);

} // namespace pdc::detail

#endif // PDC_SRC_FFT_HPP

#ifndef PDC_TESTS_ORACLES_HPP
#define PDC_TESTS_ORACLES_HPP

// Reference computations that do not share code with the library. Used to
// check closed forms and to derive expected values in tests.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

inline constexpr double c_um_per_ps = 299.792458;

inline double omega_of_wavelength_um(double lambda_um) {
    return 2.0 * std::numbers::pi * c_um_per_ps / lambda_um;
}

// Phase mismatch written out term by term.
struct Coefficients {
    double ks, ki, Ks, Ki, Kp;
};

inline double phase_mismatch(const Coefficients& p, double nu_s, double nu_i) {
    const double nu_p = nu_s + nu_i;
    // k_s(nu_s) + k_i(nu_i) - k_p(nu_p) with each expanded to second order.
    const double signal = p.ks * nu_s + 0.5 * p.Ks * nu_s * nu_s;
    const double idler = p.ki * nu_i + 0.5 * p.Ki * nu_i * nu_i;
    const double pump = 0.5 * p.Kp * nu_p * nu_p;
    return signal + idler - pump;
}

// Roots nu_s of the mismatch along nu_s + nu_i = delta, from sign changes on
// a uniform grid refined by bisection. Near-tangent double roots (no sign
// change) are reported through `tangent_suspect`.
struct Bracketing {
    std::vector<double> roots;
    bool tangent_suspect = false;
};

inline Bracketing bracket_roots(const Coefficients& p, double delta, double lo, double hi, double step,
                                bool include_Kp = true) {
    Coefficients q = p;
    if (!include_Kp) q.Kp = 0.0;
    // Along the line the pump term is the constant -K_p delta^2 / 2, so
    // dropping it is the same as K_p = 0.
    const auto f = [&](double nu_s) { return phase_mismatch(q, nu_s, delta - nu_s); };
    Bracketing out;
    const auto n = static_cast<std::int64_t>(std::ceil((hi - lo) / step));
    double x0 = lo;
    double f0 = f(x0);
    double prev_abs = std::abs(f0);
    bool falling = false;
    for (std::int64_t k = 1; k <= n; ++k) {
        const double x1 = lo + step * static_cast<double>(k);
        const double f1 = f(x1);
        if (f0 == 0.0) {
            out.roots.push_back(x0);
        } else if ((f0 < 0.0) != (f1 < 0.0) && f1 != 0.0) {
            double a = x0, b = x1, fa = f0;
            for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
                const double m = 0.5 * (a + b);
                const double fm = f(m);
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            out.roots.push_back(0.5 * (a + b));
        }
        // A local minimum of |f| without a sign change hints at a tangent root.
        const double cur_abs = std::abs(f1);
        if (falling && cur_abs > prev_abs && prev_abs < 1e-9) out.tangent_suspect = true;
        falling = cur_abs < prev_abs;
        prev_abs = cur_abs;
        x0 = x1;
        f0 = f1;
    }
    return out;
}

// Symmetric 2x2 eigenvalues by one Jacobi rotation, in extended precision.
inline std::pair<long double, long double> jacobi_eigenvalues(long double a, long double b, long double d) {
    if (b == 0.0L) return a > d ? std::pair{a, d} : std::pair{d, a};
    const long double theta = 0.5L * std::atan2(2.0L * b, a - d);
    const long double c = std::cos(theta);
    const long double s = std::sin(theta);
    const long double l1 = c * c * a + 2.0L * s * c * b + s * s * d;
    const long double l2 = s * s * a - 2.0L * s * c * b + c * c * d;
    return l1 > l2 ? std::pair{l1, l2} : std::pair{l2, l1};
}

// sinc^2(x) = 1/2 on (0, pi) by Newton iteration from x = 1.4.
inline double sinc_squared_half_point() {
    double x = 1.4;
    for (int it = 0; it < 50; ++it) {
        const double s = std::sin(x), c = std::cos(x);
        const double g = s / x - std::sqrt(0.5);
        const double dg = (c * x - s) / (x * x);
        x -= g / dg;
    }
    return x;
}

// Direct discrete Fourier magnitude at fractional bin `k` of a length-n sequence.
inline double dft_magnitude(const std::vector<double>& x, double k, std::size_t n) {
    double re = 0.0, im = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double ph = -2.0 * std::numbers::pi * k * static_cast<double>(j) / static_cast<double>(n);
        re += x[j] * std::cos(ph);
        im += x[j] * std::sin(ph);
    }
    return std::hypot(re, im);
}

// Fringe count across a band for optical length n_g L: change of round-trip
// phase 4 pi n_g L / lambda divided by 2 pi.
inline double fringe_periods(double ng, double length_um, double lo_um, double hi_um) {
    return 2.0 * ng * length_um * (1.0 / lo_um - 1.0 / hi_um);
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxy += (x[k] - mx) * (y[k] - my);
        sxx += (x[k] - mx) * (x[k] - mx);
        syy += (y[k] - my) * (y[k] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

} // namespace oracle

#endif

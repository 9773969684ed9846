#pragma once

// Spherical Bessel j_n and Hankel h_n^(1) functions of complex argument,
// plus the Riccati derivatives d/dz [z f_n(z)].
//
// j_n: upward recurrence from the closed forms while n <= |z|, downward
// ratio (continued-fraction) recurrence above that, anchored at the larger
// of two neighbouring upward values. h_n^(1): upward recurrence, which is
// stable for the dominant solution. Hankel values are also available with
// the exp(iz) factor removed, which is what the cavity coefficients use.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "lhmdecay/errors.hpp"

namespace lhm {

using cplx = std::complex<double>;

inline constexpr int kMaxOrder = 512;

namespace detail {

// Largest |Im z| for which exp(|Im z|) is comfortably representable.
inline constexpr double kMaxImag = 700.0;

inline void check_order(int nmax, const char* who) {
    if (nmax < 0 || nmax > kMaxOrder) {
        throw std::out_of_range(std::string(who) + ": order must be in [0, " +
                                std::to_string(kMaxOrder) + "]");
    }
}

inline void check_bessel_range(cplx z, const char* who) {
    if (std::abs(z.imag()) > kMaxImag) {
        throw OverflowError(std::string(who) + ": |Im z| too large, exp(|Im z|) overflows");
    }
}

// j_0 and j_1; short power series for j_1 near the origin where the
// closed form cancels.
inline void bessel_j01(cplx z, cplx& j0, cplx& j1) {
    if (z == cplx{}) {
        j0 = 1.0;
        j1 = 0.0;
        return;
    }
    const cplx s = std::sin(z);
    j0 = s / z;
    if (std::abs(z) < 0.5) {
        const cplx mz2 = -0.5 * z * z;
        cplx term = z / 3.0;
        cplx sum = term;
        for (int k = 1; k < 30; ++k) {
            term *= mz2 / (k * (2.0 * k + 3.0));
            sum += term;
            if (std::abs(term) < 1e-18 * std::abs(sum)) {
                break;
            }
        }
        j1 = sum;
    } else {
        j1 = (s / z - std::cos(z)) / z;
    }
}

}  // namespace detail

/// j_0 .. j_nmax at z.
inline std::vector<cplx> sph_bessel_j_array(int nmax, cplx z) {
    detail::check_order(nmax, "sph_bessel_j");
    detail::check_bessel_range(z, "sph_bessel_j");
    std::vector<cplx> j(static_cast<std::size_t>(nmax) + 1);
    cplx j0, j1;
    detail::bessel_j01(z, j0, j1);
    j[0] = j0;
    if (nmax == 0) {
        return j;
    }
    j[1] = j1;
    if (z == cplx{}) {
        return j;
    }

    // Ratios r_k = j_k / j_{k-1} by the backward continued fraction, then
    // forward products from j_0 or j_1. j_n is the minimal solution off the
    // real axis, so upward recurrence is never used.
    const double az = std::abs(z);
    const double big = std::max(static_cast<double>(nmax), az);
    const int start = static_cast<int>(big + 40.0 + 8.0 * std::sqrt(big));
    std::vector<cplx> ratio(static_cast<std::size_t>(nmax) + 1);
    cplx r{0.0, 0.0};
    for (int k = start; k >= 1; --k) {
        cplx denom = (2.0 * k + 1.0) - z * r;
        if (denom == cplx{}) {
            denom = 1e-300;
        }
        r = z / denom;
        if (k <= nmax) {
            ratio[static_cast<std::size_t>(k)] = r;
        }
    }
    // Start from the larger of j_0, j_1 so that a zero of either is harmless.
    cplx carry = std::abs(j0) > std::abs(j1) ? j0 * ratio[1] : j1;
    for (std::size_t k = 2; k <= static_cast<std::size_t>(nmax); ++k) {
        carry *= ratio[k];
        j[k] = carry;
    }
    return j;
}

inline cplx sph_bessel_j(int n, cplx z) {
    detail::check_order(n, "sph_bessel_j");
    return sph_bessel_j_array(n, z)[static_cast<std::size_t>(n)];
}

/// h_0^(1) .. h_nmax^(1) at z, optionally with exp(iz) divided out.
/// Entry -1 is not included; see riccati_derivatives for n = 0.
inline std::vector<cplx> sph_hankel1_array(int nmax, cplx z, bool scaled = false) {
    detail::check_order(nmax, "sph_hankel1");
    if (z == cplx{}) {
        throw std::domain_error("sph_hankel1: singular at z = 0");
    }
    if (!scaled && -z.imag() > detail::kMaxImag) {
        throw OverflowError("sph_hankel1: exp(-Im z) overflows");
    }
    const cplx i{0.0, 1.0};
    const cplx phase = scaled ? cplx{1.0, 0.0} : std::exp(i * z);
    std::vector<cplx> h(static_cast<std::size_t>(nmax) + 1);
    h[0] = -i / z * phase;
    if (nmax >= 1) {
        h[1] = -(1.0 / z + i / (z * z)) * phase;
    }
    for (int n = 1; n < nmax; ++n) {
        h[n + 1] = (2.0 * n + 1.0) / z * h[n] - h[n - 1];
    }
    return h;
}

inline cplx sph_hankel1(int n, cplx z) {
    detail::check_order(n, "sph_hankel1");
    return sph_hankel1_array(n, z)[static_cast<std::size_t>(n)];
}

struct RiccatiDerivatives {
    cplx dj;   // d/dz [z j_n(z)]
    cplx dh1;  // d/dz [z h_n^(1)(z)]
};

/// d/dz [z f_n] = z f_{n-1} - n f_n, with j_{-1} = cos z / z and
/// h_{-1}^(1) = exp(iz) / z.
inline RiccatiDerivatives riccati_derivatives(int n, cplx z) {
    detail::check_order(n, "riccati_derivatives");
    if (z == cplx{}) {
        throw std::domain_error("riccati_derivatives: singular at z = 0");
    }
    detail::check_bessel_range(z, "riccati_derivatives");
    const cplx i{0.0, 1.0};
    if (n == 0) {
        return {std::cos(z), std::exp(i * z)};
    }
    const auto j = sph_bessel_j_array(n, z);
    const auto h = sph_hankel1_array(n, z);
    return {z * j[n - 1] - static_cast<double>(n) * j[n],
            z * h[n - 1] - static_cast<double>(n) * h[n]};
}

struct SphericalFunValue {
    int order = 0;
    cplx z;
    cplx j;
    cplx h1;
    cplx dj_riccati;
    cplx dh1_riccati;
};

inline SphericalFunValue spherical_fun_value(int n, cplx z) {
    const RiccatiDerivatives d = riccati_derivatives(n, z);
    return {n, z, sph_bessel_j(n, z), sph_hankel1(n, z), d.dj, d.dh1};
}

}  // namespace lhm

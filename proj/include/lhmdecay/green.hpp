#pragma once

// Bulk magnetodielectric Green tensor in reduced units: positions in
// units of the reference wavelength 2 pi c / omega_ref, frequencies in
// omega_ref, so the vacuum wavenumber is k = 2 pi omega.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "lhmdecay/materials.hpp"

namespace lhm {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<cplx, 3>, 3>;

/// Vacuum wavenumber for a reduced frequency.
inline double wavenumber(double omega) { return 2.0 * std::numbers::pi * omega; }

struct GreenTensorValue {
    Vec3 r{};
    Vec3 r_prime{};
    double omega = 0.0;
    Mat3 components{};
};

namespace detail {

// S(x) = [exp(ix)(ix - 1) + 1] / x^2, summed as a power series near 0.
inline cplx green_regular_part(cplx x) {
    const cplx i{0.0, 1.0};
    if (std::abs(x) >= 0.5) {
        return (std::exp(i * x) * (i * x - 1.0) + 1.0) / (x * x);
    }
    // sum_{m>=2} (m-1)/m! (ix)^m / x^2
    const cplx ix = i * x;
    cplx power = i * i;  // (ix)^m / x^2 at m = 2
    double fact = 2.0;
    cplx sum = 0.0;
    for (int m = 2; m < 40; ++m) {
        const cplx term = static_cast<double>(m - 1) / fact * power;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) {
            break;
        }
        power *= ix;
        fact *= m + 1;
    }
    return sum;
}

}  // namespace detail

/// mu [grad grad + q^2] exp(i q rho) / (4 pi q^2 rho) for rho = |r - r'| > 0,
/// q = n k with n from the branch rule. Evaluated from the closed form
///   mu / (4 pi rho) [P(q rho) I + Q(q rho) rr],
///   P = e^{ix} - 1/x^2 + S(x) = e^{ix} (1 + i/x - 1/x^2),
///   Q = 3/x^2 - 3 S(x) - e^{ix} = -e^{ix} (1 + 3i/x - 3/x^2).
inline GreenTensorValue bulk_green(cplx eps, cplx mu, double omega, const Vec3& r,
                                   const Vec3& r_prime) {
    const Vec3 d{r[0] - r_prime[0], r[1] - r_prime[1], r[2] - r_prime[2]};
    const double rho = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    if (rho == 0.0) {
        throw std::domain_error("bulk_green: coincident points are excluded");
    }
    const cplx q = refractive_index(eps, mu).n * wavenumber(omega);
    if (q == cplx{}) {
        throw std::domain_error("bulk_green: q = 0");
    }
    const cplx i{0.0, 1.0};
    const cplx x = q * rho;
    const cplx e = std::exp(i * x);
    cplx p;
    cplx qq;
    if (std::abs(x) < 0.5) {
        const cplx s = detail::green_regular_part(x);
        const cplx inv_x2 = 1.0 / (x * x);
        p = e - inv_x2 + s;
        qq = 3.0 * inv_x2 - 3.0 * s - e;
    } else {
        // factored so that a strongly damped e^{ix} is not swamped by 1/x^2 round-off
        const cplx u = 1.0 / x;
        p = e * (1.0 + i * u - u * u);
        qq = e * (-1.0 - 3.0 * i * u + 3.0 * u * u);
    }
    const cplx scale = mu / (4.0 * std::numbers::pi * rho);

    GreenTensorValue g;
    g.r = r;
    g.r_prime = r_prime;
    g.omega = omega;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            const double rr = d[a] * d[b] / (rho * rho);
            g.components[a][b] = scale * ((a == b ? p : cplx{}) + qq * rr);
        }
    }
    return g;
}

inline GreenTensorValue vacuum_green(double omega, const Vec3& r, const Vec3& r_prime) {
    return bulk_green(1.0, 1.0, omega, r, r_prime);
}

/// Scalar multiplying the identity in Im G(r, r, omega) for a lossless
/// bulk medium: (k / 6 pi) Re[mu n].
inline double im_green_equal_bulk(cplx eps, cplx mu, double omega) {
    const cplx n = refractive_index(eps, mu).n;
    return wavenumber(omega) / (6.0 * std::numbers::pi) * (mu * n).real();
}

inline double frobenius_norm(const Mat3& m) {
    double s = 0.0;
    for (const auto& row : m) {
        for (const cplx& v : row) {
            s += std::norm(v);
        }
    }
    return std::sqrt(s);
}

struct HighFrequencyReport {
    std::vector<double> omegas;
    /// k^2 |G - G_vac|; oscillatory, not expected to vanish pointwise.
    std::vector<double> scaled_difference;
    /// |G - G_vac| / |G_vac|; tends to zero as eps, mu -> 1.
    std::vector<double> relative_difference;
    bool relative_decreasing = true;
};

/// Compare the medium Green tensor with the vacuum one along a rising
/// frequency sequence.
inline HighFrequencyReport high_frequency_check(const MaterialParams& p, const Vec3& r,
                                                const Vec3& r_prime,
                                                std::span<const double> omegas) {
    HighFrequencyReport rep;
    for (double w : omegas) {
        const auto g = bulk_green(permittivity(p, w), permeability(p, w), w, r, r_prime);
        const auto gv = vacuum_green(w, r, r_prime);
        Mat3 diff{};
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                diff[a][b] = g.components[a][b] - gv.components[a][b];
            }
        }
        const double dn = frobenius_norm(diff);
        const double k = wavenumber(w);
        rep.omegas.push_back(w);
        rep.scaled_difference.push_back(k * k * dn);
        rep.relative_difference.push_back(dn / frobenius_norm(gv.components));
        const auto m = rep.relative_difference.size();
        if (m > 1 && !(rep.relative_difference[m - 1] < rep.relative_difference[m - 2]) &&
            rep.relative_difference[m - 2] != 0.0) {
            rep.relative_decreasing = false;
        }
    }
    return rep;
}

}  // namespace lhm

#pragma once

// Spontaneous-decay rate of an atom inside a spherical vacuum cavity
// carved out of a homogeneous magnetodielectric host.
//
// Lengths are in units of the reference wavelength, frequencies in units
// of the reference frequency, rates in units of the free-space rate at
// the (shifted) transition frequency.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "lhmdecay/errors.hpp"
#include "lhmdecay/green.hpp"
#include "lhmdecay/materials.hpp"
#include "lhmdecay/specfun.hpp"

namespace lhm {

enum class Orientation { radial, tangential };

/// Host response at one frequency.
struct HostOptics {
    cplx eps{1.0, 0.0};
    cplx mu{1.0, 0.0};

    static HostOptics of(const MaterialParams& p, double omega) {
        return {permittivity(p, omega), permeability(p, omega)};
    }
};

/// Cavity radius and radial atom position.
struct CavityGeometry {
    double radius = 0.0;
    double r_atom = 0.0;

    void validate() const {
        if (!(radius > 0.0) || !std::isfinite(radius)) {
            throw std::invalid_argument("cavity radius must be positive");
        }
        if (!(r_atom >= 0.0) || !(r_atom < radius)) {
            throw std::invalid_argument("atom position must satisfy 0 <= r_atom < radius");
        }
    }
};

struct CavityConfig {
    double radius = 0.0;
    double r_atom = 0.0;
    Orientation orientation = Orientation::radial;
    MaterialParams host;

    CavityGeometry geometry() const { return {radius, r_atom}; }
    void validate() const {
        geometry().validate();
        host.validate();
    }
};

enum class RateMethod { series, closed_form, expansion };

struct RateResult {
    double ratio = 1.0;
    int terms_used = 0;
    double truncation_estimate = 0.0;
    RateMethod method = RateMethod::series;
    bool converged = true;
};

/// Reflection coefficients of outgoing M (TE) and N (TM) waves at the
/// cavity wall: inside the cavity the field of order n is h_n + C j_n.
struct MieCoefficients {
    int order = 0;
    cplx cm;
    cplx cn;
};

namespace detail {

// Interface data for orders 1..nmax at one frequency. Hankel functions at
// both sides carry their exp(i w) factors divided out; the interior one is
// restored as a common phase, so a vacuum host gives exactly zero.
class MieTable {
public:
    MieTable(int nmax, double omega, double radius, const HostOptics& host) : nmax_(nmax) {
        if (nmax < 1 || nmax > kMaxOrder) {
            throw std::out_of_range("mie: order must be in [1, 512]");
        }
        if (!(omega > 0.0)) {
            throw std::domain_error("mie: omega must be positive");
        }
        const cplx n = refractive_index(host.eps, host.mu).n;
        const cplx mu = host.mu;
        const double x = wavenumber(omega) * radius;
        const cplx nx = n * x;
        const cplx i{0.0, 1.0};
        const cplx phase = std::exp(i * x);

        const auto j_in = sph_bessel_j_array(nmax, x);
        const auto h_in = sph_hankel1_array(nmax, x, true);
        const auto h_out = sph_hankel1_array(nmax, nx, true);

        cm_.resize(static_cast<std::size_t>(nmax) + 1);
        cn_.resize(static_cast<std::size_t>(nmax) + 1);
        for (int k = 1; k <= nmax; ++k) {
            const auto uk = static_cast<std::size_t>(k);
            const double kd = k;
            const cplx psi = x * j_in[uk];
            const cplx dpsi = x * j_in[uk - 1] - kd * j_in[uk];
            const cplx xi = x * h_in[uk];
            const cplx dxi = x * h_in[uk - 1] - kd * h_in[uk];
            const cplx xo = nx * h_out[uk];
            const cplx dxo = nx * h_out[uk - 1] - kd * h_out[uk];

            const cplx num_m = n * xi * dxo - mu * dxi * xo;
            const cplx den_m = mu * dpsi * xo - n * psi * dxo;
            const cplx num_n = mu * xi * dxo - n * dxi * xo;
            const cplx den_n = n * dpsi * xo - mu * psi * dxo;
            check_denominator(den_m, std::abs(mu * dpsi * xo) + std::abs(n * psi * dxo), k);
            check_denominator(den_n, std::abs(n * dpsi * xo) + std::abs(mu * psi * dxo), k);
            cm_[uk] = num_m == cplx{} ? cplx{} : phase * num_m / den_m;
            cn_[uk] = num_n == cplx{} ? cplx{} : phase * num_n / den_n;
        }
    }

    int nmax() const { return nmax_; }
    cplx cm(int k) const { return cm_[static_cast<std::size_t>(k)]; }
    cplx cn(int k) const { return cn_[static_cast<std::size_t>(k)]; }

private:
    static void check_denominator(cplx den, double scale, int order) {
        if (!std::isfinite(scale)) {
            return;  // overflowed large orders; the series stops before using them
        }
        if (std::abs(den) <= 1e-14 * scale) {
            throw SingularSystemError("mie: singular interface system at order " +
                                      std::to_string(order));
        }
    }

    int nmax_;
    std::vector<cplx> cm_;
    std::vector<cplx> cn_;
};

inline int initial_order(double kR) {
    return std::clamp(static_cast<int>(kR + 4.0 * std::cbrt(kR) + 24.0), 4, kMaxOrder);
}

}  // namespace detail

inline MieCoefficients mie_coefficients(int order, double omega, double radius,
                                        const HostOptics& host) {
    if (order < 1) {
        throw std::out_of_range("mie_coefficients: order must be >= 1");
    }
    if (!(radius > 0.0)) {
        throw std::invalid_argument("mie_coefficients: radius must be positive");
    }
    const detail::MieTable t(order, omega, radius, host);
    return {order, t.cm(order), t.cn(order)};
}

inline MieCoefficients mie_coefficients(int order, double omega, const CavityConfig& cfg) {
    cfg.validate();
    return mie_coefficients(order, omega, cfg.radius, HostOptics::of(cfg.host, omega));
}

namespace detail {

// Shared driver for both orientations. `term(k, table)` returns the k-th
// summand including its prefactor.
template <class Term>
RateResult sum_series(double omega, const CavityGeometry& g, const HostOptics& host, double tol,
                      Term term) {
    if (!(tol > 0.0)) {
        throw std::invalid_argument("rate: tol must be positive");
    }
    const double kR = wavenumber(omega) * g.radius;
    const double kr = wavenumber(omega) * g.r_atom;
    int nmax = initial_order(kR);
    for (;;) {
        const MieTable table(nmax, omega, g.radius, host);
        RateResult res;
        res.method = RateMethod::series;
        double sum = 1.0;
        int small_run = 0;
        std::array<double, 3> recent{0.0, 0.0, 0.0};
        for (int k = 1; k <= nmax; ++k) {
            const double t = term(k, table);
            if (!std::isfinite(t)) {
                res.ratio = sum;
                res.terms_used = k - 1;
                res.truncation_estimate = std::numeric_limits<double>::infinity();
                res.converged = false;
                return res;
            }
            sum += t;
            recent[static_cast<std::size_t>(k % 3)] = std::abs(t);
            const double scale = std::max(std::abs(sum), 1e-300);
            if (std::abs(t) < tol * scale && k > kr) {
                ++small_run;
            } else {
                small_run = 0;
            }
            if (small_run >= 3) {
                res.ratio = sum;
                res.terms_used = k;
                res.truncation_estimate = std::max({recent[0], recent[1], recent[2]}) / scale;
                res.converged = true;
                return res;
            }
        }
        if (nmax == kMaxOrder) {
            res.ratio = sum;
            res.terms_used = nmax;
            res.truncation_estimate =
                std::max({recent[0], recent[1], recent[2]}) / std::max(std::abs(sum), 1e-300);
            res.converged = false;
            return res;
        }
        nmax = std::min(kMaxOrder, 2 * nmax);
    }
}

inline RateResult center_series(double omega, double radius, const HostOptics& host) {
    const detail::MieTable table(1, omega, radius, host);
    RateResult res;
    res.method = RateMethod::series;
    res.ratio = 1.0 + table.cn(1).real();
    res.terms_used = 1;
    res.truncation_estimate = 0.0;
    return res;
}

}  // namespace detail

/// 1 + (3/2) sum n(n+1)(2n+1) [j_n(kr)/(kr)]^2 Re C^N_n.
/// At the centre only n = 1 contributes and the limit j_1(x)/x -> 1/3 is
/// taken analytically.
inline RateResult rate_radial(double omega_a, const CavityGeometry& g, const HostOptics& host,
                              double tol = 1e-10) {
    g.validate();
    if (!(omega_a > 0.0)) {
        throw std::domain_error("rate_radial: omega_a must be positive");
    }
    if (g.r_atom == 0.0) {
        return detail::center_series(omega_a, g.radius, host);
    }
    const double kr = wavenumber(omega_a) * g.r_atom;
    const auto j = sph_bessel_j_array(kMaxOrder, kr);
    return detail::sum_series(omega_a, g, host, tol, [&](int k, const detail::MieTable& t) {
        const double jr = (j[static_cast<std::size_t>(k)] / kr).real();
        const double kd = k;
        return 1.5 * kd * (kd + 1.0) * (2.0 * kd + 1.0) * jr * jr * t.cn(k).real();
    });
}

/// 1 + (3/4) sum (2n+1) [j_n^2 Re C^M_n + ([kr j_n]'/kr)^2 Re C^N_n].
inline RateResult rate_tangential(double omega_a, const CavityGeometry& g, const HostOptics& host,
                                  double tol = 1e-10) {
    g.validate();
    if (!(omega_a > 0.0)) {
        throw std::domain_error("rate_tangential: omega_a must be positive");
    }
    if (g.r_atom == 0.0) {
        return detail::center_series(omega_a, g.radius, host);
    }
    const double kr = wavenumber(omega_a) * g.r_atom;
    const auto j = sph_bessel_j_array(kMaxOrder, kr);
    return detail::sum_series(omega_a, g, host, tol, [&](int k, const detail::MieTable& t) {
        const auto uk = static_cast<std::size_t>(k);
        const double jn = j[uk].real();
        const double dpsi = (kr * j[uk - 1] - static_cast<double>(k) * j[uk]).real() / kr;
        return 0.75 * (2.0 * k + 1.0) * (jn * jn * t.cm(k).real() + dpsi * dpsi * t.cn(k).real());
    });
}

inline RateResult rate_radial(double omega_a, const CavityConfig& cfg, double tol = 1e-10) {
    cfg.validate();
    return rate_radial(omega_a, cfg.geometry(), HostOptics::of(cfg.host, omega_a), tol);
}

inline RateResult rate_tangential(double omega_a, const CavityConfig& cfg, double tol = 1e-10) {
    cfg.validate();
    return rate_tangential(omega_a, cfg.geometry(), HostOptics::of(cfg.host, omega_a), tol);
}

/// Dispatch on the configured dipole orientation.
inline RateResult rate_series(double omega_a, const CavityConfig& cfg, double tol = 1e-10) {
    return cfg.orientation == Orientation::radial ? rate_radial(omega_a, cfg, tol)
                                                  : rate_tangential(omega_a, cfg, tol);
}

/// Closed form for an atom at the cavity centre, z = k R:
///   1 + Re{[1 - i(n+1)z - n(n+1)A z^2 + i n^2 A z^3] e^{iz} / D},
///   A = (mu - n)/(mu - n^2).
/// Near mu = n^2 (equivalently eps -> 1) the expression is 0/0 and the
/// n = 1 Mie term is used instead.
inline RateResult rate_center(double omega_a, double radius, const HostOptics& host) {
    if (!(omega_a > 0.0) || !(radius > 0.0)) {
        throw std::domain_error("rate_center: omega_a and radius must be positive");
    }
    const cplx n = refractive_index(host.eps, host.mu).n;
    const cplx mu = host.mu;
    const cplx gap = mu - n * n;
    if (std::abs(gap) < 1e-10) {
        return detail::center_series(omega_a, radius, host);
    }
    const cplx i{0.0, 1.0};
    const double z = wavenumber(omega_a) * radius;
    const double s = std::sin(z);
    const double c = std::cos(z);
    const cplx a = (mu - n) / gap;
    const cplx b = (1.0 - mu) / gap;
    const cplx d3 = n * n / gap;
    const double z2 = z * z;
    const double z3 = z2 * z;

    const cplx num = (1.0 - i * (n + 1.0) * z - n * (n + 1.0) * a * z2 + i * n * n * a * z3) *
                     std::exp(i * z);
    const cplx den = -i * s - (n * s - i * c) * z + (c - i * b * n * s) * n * z2 -
                     (n * s + i * mu * c) * d3 * z3;
    if (den == cplx{}) {
        throw SingularSystemError("rate_center: vanishing denominator");
    }
    RateResult res;
    res.ratio = 1.0 + (num / den).real();
    res.terms_used = 1;
    res.truncation_estimate = 0.0;
    res.method = RateMethod::closed_form;
    return res;
}

inline RateResult rate_center(double omega_a, const CavityConfig& cfg) {
    cfg.validate();
    if (cfg.r_atom != 0.0) {
        throw std::invalid_argument("rate_center: atom must sit at the centre");
    }
    return rate_center(omega_a, cfg.radius, HostOptics::of(cfg.host, omega_a));
}

/// Small-cavity expansion of the centre rate in powers of z = kR (z < 1),
/// without the O(R) remainder.
struct CenterExpansion {
    double leading = 0.0;  ///< Re[(3 eps / (1 + 2 eps))^2 mu n]
    double term_r3 = 0.0;  ///< 9 Im eps / |1 + 2 eps|^2 z^-3
    double term_r1 = 0.0;  ///< (9/5) Im[eps (1 + 3 eps + 5 mu eps) / (1 + 2 eps)^2] z^-1
    double sum = 0.0;
};

inline CenterExpansion rate_center_expansion(double omega_a, double radius,
                                             const HostOptics& host) {
    const double z = wavenumber(omega_a) * radius;
    if (!(z > 0.0) || !(z < 1.0)) {
        throw std::domain_error("rate_center_expansion: requires 0 < kR < 1");
    }
    const cplx eps = host.eps;
    const cplx mu = host.mu;
    const cplx one_2eps = 1.0 + 2.0 * eps;
    if (std::abs(one_2eps) < 1e-10) {
        throw ExpansionPoleError("rate_center_expansion: |1 + 2 eps| vanishes");
    }
    const cplx n = refractive_index(eps, mu).n;
    const cplx lf = 3.0 * eps / one_2eps;
    CenterExpansion e;
    e.leading = (lf * lf * mu * n).real();
    e.term_r3 = 9.0 * eps.imag() / std::norm(one_2eps) / (z * z * z);
    e.term_r1 = 1.8 * (eps * (1.0 + 3.0 * eps + 5.0 * mu * eps) / (one_2eps * one_2eps)).imag() / z;
    e.sum = e.leading + e.term_r3 + e.term_r1;
    return e;
}

inline CenterExpansion rate_center_expansion(double omega_a, const CavityConfig& cfg) {
    cfg.validate();
    if (cfg.r_atom != 0.0) {
        throw std::invalid_argument("rate_center_expansion: atom must sit at the centre");
    }
    return rate_center_expansion(omega_a, cfg.radius, HostOptics::of(cfg.host, omega_a));
}

/// Lossless bulk rate Re[mu n]; exactly zero when eps and mu differ in sign.
inline double rate_bulk_lossless(double eps, double mu) {
    return (mu * refractive_index(eps, mu).n).real();
}

struct SmallCavityRate {
    double rate = 0.0;       ///< the R^-3 term alone
    double dominance = 0.0;  ///< |R^-3 term| / |three-term sum|
};

/// Purely dielectric, radiationless R^-3 contribution of the small-cavity
/// expansion together with how strongly it dominates the expansion.
inline SmallCavityRate rate_small_cavity_absorptive(double omega_a, double radius,
                                                    const HostOptics& host) {
    const CenterExpansion e = rate_center_expansion(omega_a, radius, host);
    const double denom = std::abs(e.sum);
    return {e.term_r3, denom > 0.0 ? std::abs(e.term_r3) / denom : 0.0};
}

inline SmallCavityRate rate_small_cavity_absorptive(double omega_a, const CavityConfig& cfg) {
    cfg.validate();
    return rate_small_cavity_absorptive(omega_a, cfg.radius, HostOptics::of(cfg.host, omega_a));
}

}  // namespace lhm

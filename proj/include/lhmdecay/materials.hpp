#pragma once

// Single-resonance magnetodielectric response and the branch-correct
// refractive index.
//
// Frequencies are reduced by a reference frequency (conventionally the
// magnetic transverse frequency), so every quantity here is dimensionless.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lhmdecay/errors.hpp"

namespace lhm {

using cplx = std::complex<double>;

/// Resonance parameters of the electric (e) and magnetic (m) oscillators.
struct MaterialParams {
    double omega_pe = 0.0;
    double omega_te = 1.0;
    double gamma_e = 0.0;
    double omega_pm = 0.0;
    double omega_tm = 1.0;
    double gamma_m = 0.0;

    /// Overlapping-gap parameter set with equal damping on both resonances.
    static MaterialParams paper(double gamma) {
        return {0.75, 1.03, gamma, 0.43, 1.0, gamma};
    }
    static MaterialParams paper_dielectric(double gamma) {
        return {0.75, 1.03, gamma, 0.0, 1.0, gamma};
    }
    static MaterialParams paper_magnetic(double gamma) {
        return {0.0, 1.03, gamma, 0.43, 1.0, gamma};
    }
    static MaterialParams vacuum() { return {}; }

    void validate() const {
        const double all[] = {omega_pe, omega_te, gamma_e, omega_pm, omega_tm, gamma_m};
        for (double v : all) {
            if (!std::isfinite(v) || v < 0.0) {
                throw std::invalid_argument("material parameters must be finite and nonnegative");
            }
        }
        if (omega_te <= 0.0 || omega_tm <= 0.0) {
            throw std::invalid_argument("transverse frequencies must be positive");
        }
    }
};

/// 1 + wp^2 / (wt^2 - w^2 - i w gamma). Defined for any real w, including
/// negative frequencies; throws PoleError if the denominator vanishes.
inline cplx lorentz_response(double omega_p, double omega_t, double gamma, double omega) {
    if (omega_p == 0.0) {
        return {1.0, 0.0};
    }
    const cplx denom{omega_t * omega_t - omega * omega, -omega * gamma};
    if (denom == cplx{0.0, 0.0}) {
        throw PoleError("lossless resonance evaluated at its transverse frequency");
    }
    return 1.0 + omega_p * omega_p / denom;
}

inline cplx permittivity(const MaterialParams& p, double omega) {
    if (!(omega > 0.0)) {
        throw std::domain_error("permittivity: omega must be positive");
    }
    return lorentz_response(p.omega_pe, p.omega_te, p.gamma_e, omega);
}

inline cplx permeability(const MaterialParams& p, double omega) {
    if (!(omega > 0.0)) {
        throw std::domain_error("permeability: omega must be positive");
    }
    return lorentz_response(p.omega_pm, p.omega_tm, p.gamma_m, omega);
}

/// Refractive index together with the phases it was assembled from.
struct IndexBranch {
    cplx n;
    double phi_eps = 0.0;
    double phi_mu = 0.0;
};

namespace detail {

// Phase in [0, pi] for a passive response; real negatives map to pi
// regardless of the sign of a zero imaginary part.
inline double passive_phase(cplx v) {
    if (v.imag() == 0.0) {
        return v.real() >= 0.0 ? 0.0 : std::numbers::pi;
    }
    return std::arg(v);
}

}  // namespace detail

/// n = sqrt(|eps||mu|) exp(i (phi_eps + phi_mu) / 2), phases in [0, pi].
///
/// This is deliberately not the principal root of eps*mu: when both phases
/// exceed pi/2 the index has a negative real part while Im n stays >= 0.
/// Lossless inputs give exactly real or exactly imaginary results.
inline IndexBranch refractive_index(cplx eps, cplx mu) {
    if (eps.imag() < 0.0 || mu.imag() < 0.0) {
        throw std::invalid_argument("refractive_index: gain media (Im < 0) are not supported");
    }
    if (eps == cplx{} || mu == cplx{}) {
        throw std::invalid_argument("refractive_index: eps and mu must be nonzero");
    }
    IndexBranch out;
    out.phi_eps = detail::passive_phase(eps);
    out.phi_mu = detail::passive_phase(mu);
    const double modulus = std::sqrt(std::abs(eps) * std::abs(mu));
    if (eps.imag() == 0.0 && mu.imag() == 0.0) {
        const int quarter_turns = (out.phi_eps > 0.0 ? 1 : 0) + (out.phi_mu > 0.0 ? 1 : 0);
        switch (quarter_turns) {
            case 0: out.n = {modulus, 0.0}; break;
            case 1: out.n = {0.0, modulus}; break;
            default: out.n = {-modulus, 0.0}; break;
        }
        return out;
    }
    out.n = std::polar(modulus, 0.5 * (out.phi_eps + out.phi_mu));
    return out;
}

/// Left-handed iff Re n < 0 (strict; a purely imaginary index is not).
inline bool is_left_handed(cplx n) { return n.real() < 0.0; }

struct OpticalResponse {
    double omega = 0.0;
    cplx eps;
    cplx mu;
    cplx n;
    double phi_eps = 0.0;
    double phi_mu = 0.0;
};

inline OpticalResponse optical_response(const MaterialParams& p, double omega) {
    OpticalResponse r;
    r.omega = omega;
    r.eps = permittivity(p, omega);
    r.mu = permeability(p, omega);
    const IndexBranch b = refractive_index(r.eps, r.mu);
    r.n = b.n;
    r.phi_eps = b.phi_eps;
    r.phi_mu = b.phi_mu;
    return r;
}

struct BandStructure {
    double omega_le = 0.0;
    double omega_lm = 0.0;
    /// First and last grid sample of the Re n < 0 run (no root polishing).
    std::optional<std::pair<double, double>> lh_window;
    /// Same for Re eps < 0 and Re mu < 0 together.
    std::optional<std::pair<double, double>> double_negative;
};

namespace detail {

// Contiguous runs of grid samples where `flag` holds. The run overlapping
// the common gap wins; failing that, the longest.
inline std::optional<std::pair<double, double>> pick_run(std::span<const double> grid,
                                                         const std::vector<bool>& flag,
                                                         double gap_lo, double gap_hi) {
    struct Run {
        std::size_t first, last;
    };
    std::vector<Run> runs;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (flag[i] && (i == 0 || !flag[i - 1])) {
            runs.push_back({i, i});
        } else if (flag[i]) {
            runs.back().last = i;
        }
    }
    if (runs.empty()) {
        return std::nullopt;
    }
    const Run* chosen = nullptr;
    for (const Run& r : runs) {
        if (gap_lo < gap_hi && grid[r.first] <= gap_hi && grid[r.last] >= gap_lo) {
            chosen = &r;
            break;
        }
    }
    if (chosen == nullptr) {
        chosen = &runs.front();
        for (const Run& r : runs) {
            if (r.last - r.first > chosen->last - chosen->first) {
                chosen = &r;
            }
        }
    }
    return std::make_pair(grid[chosen->first], grid[chosen->last]);
}

}  // namespace detail

/// Longitudinal frequencies plus sign scans over `grid`.
///
/// When several runs exist, the one overlapping the common band gap
/// (max(wTe, wTm), min(wLe, wLm)) is reported; failing that, the longest.
inline BandStructure band_structure(const MaterialParams& p, std::span<const double> grid) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
            throw std::invalid_argument("band_structure: grid must be positive and strictly increasing");
        }
    }
    BandStructure bs;
    bs.omega_le = std::hypot(p.omega_te, p.omega_pe);
    bs.omega_lm = std::hypot(p.omega_tm, p.omega_pm);

    std::vector<bool> lh(grid.size());
    std::vector<bool> dn(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const OpticalResponse r = optical_response(p, grid[i]);
        lh[i] = is_left_handed(r.n);
        dn[i] = r.eps.real() < 0.0 && r.mu.real() < 0.0;
    }
    const double gap_lo = std::max(p.omega_te, p.omega_tm);
    const double gap_hi = std::min(bs.omega_le, bs.omega_lm);
    bs.lh_window = detail::pick_run(grid, lh, gap_lo, gap_hi);
    bs.double_negative = detail::pick_run(grid, dn, gap_lo, gap_hi);
    return bs;
}

/// Uniform grid with steps + 1 points spanning [lo, hi].
inline std::vector<double> uniform_grid(double lo, double hi, int steps) {
    if (steps < 1) {
        throw std::invalid_argument("uniform_grid: steps must be >= 1");
    }
    std::vector<double> g(static_cast<std::size_t>(steps) + 1);
    const double h = (hi - lo) / steps;
    for (int i = 0; i <= steps; ++i) {
        g[static_cast<std::size_t>(i)] = lo + h * i;
    }
    g.back() = hi;
    return g;
}

}  // namespace lhm

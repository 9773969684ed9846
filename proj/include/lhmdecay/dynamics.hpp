#pragma once

// Spectral density of the atom-field coupling, Markovian rate and
// frequency shift, and the non-Markovian evolution of the upper-state
// amplitude.
//
// Units. Frequencies on the spectral grid are in omega_ref; gamma_tilde
// and every rate, shift and time are in units of Gamma0(omega_ref). The
// dimensionless `coupling` = Gamma0(omega_ref) / omega_ref converts between
// the two where a frequency difference meets a time (the memory kernel)
// or a shift meets a frequency (the self-consistent transition frequency).
// With coupling = 1 both unit systems coincide.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lhmdecay/cavity.hpp"
#include "lhmdecay/errors.hpp"

namespace lhm {

struct SpectralDensity {
    std::vector<double> omega;
    std::vector<double> gamma_tilde;

    double lo() const { return omega.front(); }
    double hi() const { return omega.back(); }

    void validate() const {
        if (omega.size() < 2 || omega.size() != gamma_tilde.size()) {
            throw std::invalid_argument("spectral density needs >= 2 matching samples");
        }
        for (std::size_t i = 1; i < omega.size(); ++i) {
            if (!(omega[i] > omega[i - 1])) {
                throw std::invalid_argument("spectral density grid must be strictly increasing");
            }
        }
    }

    /// Tabulate an arbitrary rate function on a uniform grid.
    static SpectralDensity tabulate(double lo, double hi, int steps,
                                    const std::function<double(double)>& f) {
        if (steps < 1 || !(hi > lo)) {
            throw std::invalid_argument("tabulate: need hi > lo and steps >= 1");
        }
        SpectralDensity sd;
        sd.omega = uniform_grid(lo, hi, steps);
        sd.gamma_tilde.reserve(sd.omega.size());
        for (double w : sd.omega) {
            sd.gamma_tilde.push_back(f(w));
        }
        return sd;
    }
};

/// gamma_tilde(w) = w^3 Gamma(w)/Gamma0(w) for the configured cavity,
/// sampled at steps + 1 uniform points of [lo, hi].
inline SpectralDensity spectral_density(const CavityConfig& cfg, double lo, double hi, int steps,
                                        double tol = 1e-10) {
    cfg.validate();
    if (!(lo > 0.0) || !(hi > lo) || steps < 1) {
        throw std::invalid_argument("spectral_density: need 0 < lo < hi and steps >= 1");
    }
    return SpectralDensity::tabulate(lo, hi, steps, [&](double w) {
        const double ratio = rate_series(w, cfg, tol).ratio;
        return w * w * w * std::max(ratio, 0.0);
    });
}

namespace detail {

inline std::size_t bracket(const std::vector<double>& x, double at) {
    auto it = std::upper_bound(x.begin(), x.end(), at);
    std::size_t i = static_cast<std::size_t>(it - x.begin());
    i = std::clamp<std::size_t>(i, 1, x.size() - 1);
    return i - 1;  // x[i] <= at < x[i + 1] (clamped)
}

// Quadratic interpolant through three neighbouring samples; returns value
// and derivative at `at`.
inline std::pair<double, double> quadratic_interp(const SpectralDensity& sd, double at) {
    const auto& x = sd.omega;
    const auto& y = sd.gamma_tilde;
    if (x.size() == 2) {
        const double slope = (y[1] - y[0]) / (x[1] - x[0]);
        return {y[0] + slope * (at - x[0]), slope};
    }
    std::size_t i = bracket(x, at);
    // Use the node nearest to `at` as the middle one.
    std::size_t mid = (at - x[i] < x[i + 1] - at) ? i : i + 1;
    mid = std::clamp<std::size_t>(mid, 1, x.size() - 2);
    const double x0 = x[mid - 1], x1 = x[mid], x2 = x[mid + 1];
    const double y0 = y[mid - 1], y1 = y[mid], y2 = y[mid + 1];
    const double l0 = (at - x1) * (at - x2) / ((x0 - x1) * (x0 - x2));
    const double l1 = (at - x0) * (at - x2) / ((x1 - x0) * (x1 - x2));
    const double l2 = (at - x0) * (at - x1) / ((x2 - x0) * (x2 - x1));
    const double d0 = ((at - x1) + (at - x2)) / ((x0 - x1) * (x0 - x2));
    const double d1 = ((at - x0) + (at - x2)) / ((x1 - x0) * (x1 - x2));
    const double d2 = ((at - x0) + (at - x1)) / ((x2 - x0) * (x2 - x1));
    return {y0 * l0 + y1 * l1 + y2 * l2, y0 * d0 + y1 * d1 + y2 * d2};
}

}  // namespace detail

/// gamma_tilde interpolated at `omega` (quadratic, exact for parabolas).
inline double interpolate(const SpectralDensity& sd, double omega) {
    return detail::quadratic_interp(sd, omega).first;
}

struct MarkovResult {
    double gamma = 0.0;
    double delta_omega = 0.0;
};

/// Rate gamma_tilde(w_a) and shift (1/2pi) PV int gamma_tilde(w)/(w - w_a) dw
/// over the tabulated band, by singularity subtraction:
///   int [g(w) - g(w_a)]/(w - w_a) dw + g(w_a) ln|(hi - w_a)/(w_a - lo)|.
/// Exact for quadratic gamma_tilde.
inline MarkovResult markov_rate_and_shift(const SpectralDensity& sd, double omega_a) {
    sd.validate();
    if (!(omega_a > sd.lo()) || !(omega_a < sd.hi())) {
        throw std::domain_error("markov_rate_and_shift: omega_a must lie strictly inside the band");
    }
    const auto [g_a, dg_a] = detail::quadratic_interp(sd, omega_a);
    const auto& x = sd.omega;
    const auto& y = sd.gamma_tilde;
    auto subtracted = [&](std::size_t k) {
        const double d = x[k] - omega_a;
        const double h = std::min(x[1] - x[0], x.back() - x[x.size() - 2]);
        if (std::abs(d) < 1e-9 * h) {
            return dg_a;
        }
        return (y[k] - g_a) / d;
    };
    double integral = 0.0;
    double prev = subtracted(0);
    for (std::size_t k = 1; k < x.size(); ++k) {
        const double cur = subtracted(k);
        integral += 0.5 * (x[k] - x[k - 1]) * (prev + cur);
        prev = cur;
    }
    integral += g_a * std::log((sd.hi() - omega_a) / (omega_a - sd.lo()));
    if (!std::isfinite(integral)) {
        throw NumericalError("markov_rate_and_shift: non-finite principal-value integral");
    }
    return {g_a, integral / (2.0 * std::numbers::pi)};
}

struct ShiftedFrequency {
    double omega_tilde = 0.0;
    double delta_omega = 0.0;  ///< in units of Gamma0(omega_ref)
    double gamma = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Damped fixed-point iteration for w~ = w_a - coupling * delta_omega(w~).
inline ShiftedFrequency self_consistent_frequency(const SpectralDensity& sd, double omega_a,
                                                  double coupling, double damping = 0.5,
                                                  double tol = 1e-12, int max_iter = 200) {
    if (!(damping > 0.0) || damping > 1.0) {
        throw std::invalid_argument("self_consistent_frequency: damping must be in (0, 1]");
    }
    ShiftedFrequency out;
    double w = omega_a;
    for (int it = 1; it <= max_iter; ++it) {
        const MarkovResult m = markov_rate_and_shift(sd, w);
        const double target = omega_a - coupling * m.delta_omega;
        const double next = (1.0 - damping) * w + damping * target;
        out.iterations = it;
        if (std::abs(next - w) <= tol * std::max(1.0, std::abs(w))) {
            w = next;
            out.converged = true;
            break;
        }
        w = next;
    }
    const MarkovResult m = markov_rate_and_shift(sd, w);
    out.omega_tilde = w;
    out.delta_omega = m.delta_omega;
    out.gamma = m.gamma;
    return out;
}

namespace detail {

// int_0^1 exp(-i theta t) dt and int_0^1 t exp(-i theta t) dt.
inline std::pair<cplx, cplx> filon_moments(double theta) {
    const cplx i{0.0, 1.0};
    if (std::abs(theta) < 0.5) {
        cplx e0 = 0.0, e1 = 0.0;
        cplx power = 1.0;  // (-i theta)^m / m!
        for (int m = 0; m < 30; ++m) {
            e0 += power / static_cast<double>(m + 1);
            e1 += power / static_cast<double>(m + 2);
            power *= -i * theta / static_cast<double>(m + 1);
        }
        return {e0, e1};
    }
    const cplx e = std::exp(-i * theta);
    const cplx e0 = (1.0 - e) / (i * theta);
    const cplx e1 = i * e / theta - (1.0 - e) / (theta * theta);
    return {e0, e1};
}

}  // namespace detail

/// K(tau) = -(1/(2 pi coupling)) int gamma_tilde(w) exp(-i (w - w~) tau / coupling) dw,
/// tau in units of 1/Gamma0(omega_ref). gamma_tilde is taken piecewise linear
/// between grid nodes and each panel is integrated exactly.
inline std::vector<cplx> memory_kernel(const SpectralDensity& sd, double omega_tilde,
                                       std::span<const double> tau, double coupling = 1.0) {
    sd.validate();
    if (!(coupling > 0.0)) {
        throw std::invalid_argument("memory_kernel: coupling must be positive");
    }
    for (std::size_t k = 0; k < tau.size(); ++k) {
        if (tau[k] < 0.0 || (k > 0 && tau[k] < tau[k - 1])) {
            throw std::invalid_argument("memory_kernel: tau grid must be nonnegative and increasing");
        }
    }
    const cplx i{0.0, 1.0};
    const auto& x = sd.omega;
    const auto& y = sd.gamma_tilde;
    const double h0 = x[1] - x[0];
    bool uniform = true;
    for (std::size_t p = 2; p < x.size() && uniform; ++p) {
        uniform = std::abs((x[p] - x[p - 1]) - h0) <= 1e-9 * h0;
    }
    std::vector<cplx> kernel(tau.size());
    for (std::size_t k = 0; k < tau.size(); ++k) {
        const double kappa = tau[k] / coupling;
        cplx acc = 0.0;
        if (uniform) {
            // Same moments on every panel; the panel phase advances by a fixed
            // rotation, re-anchored periodically against drift.
            const auto [e0, e1] = detail::filon_moments(kappa * h0);
            const cplx step = std::exp(-i * (kappa * h0));
            cplx phase;
            for (std::size_t p = 1; p < x.size(); ++p) {
                if ((p - 1) % 64 == 0) {
                    phase = std::exp(-i * (kappa * (x[p - 1] - omega_tilde)));
                }
                acc += phase * (y[p - 1] * e0 + (y[p] - y[p - 1]) * e1);
                phase *= step;
            }
            acc *= h0;
        } else {
            for (std::size_t p = 1; p < x.size(); ++p) {
                const double h = x[p] - x[p - 1];
                const auto [e0, e1] = detail::filon_moments(kappa * h);
                const cplx panel = y[p - 1] * e0 + (y[p] - y[p - 1]) * e1;
                acc += h * std::exp(-i * (kappa * (x[p - 1] - omega_tilde))) * panel;
            }
        }
        kernel[k] = -acc / (2.0 * std::numbers::pi * coupling);
    }
    return kernel;
}

struct DecayTrajectory {
    std::vector<double> times;
    std::vector<cplx> cu;
    double gamma_markov = 0.0;
    double delta_omega = 0.0;
};

/// Solve dC/dt = -i dw C + int_0^t K(t - t') C(t') dt', C(0) = 1, via the
/// equivalent second-kind Volterra equation
///   C(t) = 1 + int_0^t [L(t - s) - i dw] C(s) ds,  L(tau) = int_0^tau K,
/// with the trapezoidal product rule. `kernel[k]` is K(k dt) and must cover
/// k = 0 .. round(t_max / dt).
inline DecayTrajectory volterra_solve(std::span<const cplx> kernel, double delta_omega,
                                      double t_max, double dt) {
    if (!(dt > 0.0) || !(t_max > 0.0)) {
        throw std::invalid_argument("volterra_solve: dt and t_max must be positive");
    }
    const auto steps = static_cast<std::size_t>(std::llround(t_max / dt));
    if (kernel.size() < steps + 1) {
        throw std::invalid_argument("volterra_solve: kernel has fewer samples than time steps");
    }
    const cplx i{0.0, 1.0};

    std::vector<cplx> w(steps + 1);  // L(k dt) - i dw
    cplx cumulative = 0.0;
    w[0] = -i * delta_omega;
    for (std::size_t k = 1; k <= steps; ++k) {
        cumulative += 0.5 * dt * (kernel[k - 1] + kernel[k]);
        w[k] = cumulative - i * delta_omega;
    }

    DecayTrajectory traj;
    traj.delta_omega = delta_omega;
    traj.times.resize(steps + 1);
    traj.cu.resize(steps + 1);
    traj.times[0] = 0.0;
    traj.cu[0] = 1.0;
    const cplx diag = 1.0 - 0.5 * dt * w[0];
    for (std::size_t m = 1; m <= steps; ++m) {
        cplx rhs = 1.0 + 0.5 * dt * w[m] * traj.cu[0];
        for (std::size_t j = 1; j < m; ++j) {
            rhs += dt * w[m - j] * traj.cu[j];
        }
        const cplx c = rhs / diag;
        if (!(std::abs(c) <= 2.0)) {
            throw InstabilityError("volterra_solve: |C_u| exceeded 2 at t = " +
                                   std::to_string(static_cast<double>(m) * dt));
        }
        traj.times[m] = static_cast<double>(m) * dt;
        traj.cu[m] = c;
    }
    return traj;
}

/// Self-consistent frequency, kernel and amplitude in one pass.
inline DecayTrajectory simulate_decay(const SpectralDensity& sd, double omega_a, double coupling,
                                      double t_max, double dt) {
    const ShiftedFrequency shifted = self_consistent_frequency(sd, omega_a, coupling);
    if (!shifted.converged) {
        throw NumericalError("simulate_decay: self-consistent frequency did not converge");
    }
    const auto steps = static_cast<std::size_t>(std::llround(t_max / dt));
    std::vector<double> tau(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        tau[k] = static_cast<double>(k) * dt;
    }
    const auto kernel = memory_kernel(sd, shifted.omega_tilde, tau, coupling);
    DecayTrajectory traj = volterra_solve(kernel, shifted.delta_omega, t_max, dt);
    traj.gamma_markov = shifted.gamma;
    return traj;
}

}  // namespace lhm

#pragma once

// Sweep drivers behind the command-line tool. Each driver validates its
// inputs (ConfigError), computes the full table in memory and only then
// hands it to write_csv, so a failed run never leaves a partial file.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "lhmdecay/cavity.hpp"
#include "lhmdecay/dynamics.hpp"
#include "lhmdecay/errors.hpp"
#include "lhmdecay/materials.hpp"

namespace lhm {

using CsvCell = std::variant<double, std::int64_t>;

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<CsvCell>> rows;
};

/// Scientific notation, 17 significant digits; integers verbatim.
inline std::string format_cell(const CsvCell& cell) {
    if (const auto* i = std::get_if<std::int64_t>(&cell)) {
        return std::to_string(*i);
    }
    const double v = std::get<double>(cell);
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

inline void write_csv(std::ostream& os, const CsvTable& t) {
    for (std::size_t c = 0; c < t.header.size(); ++c) {
        os << (c ? "," : "") << t.header[c];
    }
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            os << (c ? "," : "") << format_cell(row[c]);
        }
        os << '\n';
    }
}

/// Write through a sibling temporary and rename into place.
inline void write_csv_file(const std::string& path, const CsvTable& t) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ConfigError("cannot write output file '" + path + "'");
        }
        write_csv(out, t);
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw ConfigError("failed while writing '" + path + "'");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw ConfigError("cannot move output into place at '" + path + "'");
    }
}

struct Sweep {
    double omega_min = 0.0;
    double omega_max = 0.0;
    int steps = 0;

    void validate() const {
        if (!(omega_min > 0.0) || !(omega_max > omega_min) || !std::isfinite(omega_max)) {
            throw ConfigError("frequency range must satisfy 0 < omega-min < omega-max");
        }
        if (steps < 1) {
            throw ConfigError("steps must be >= 1");
        }
    }
    std::vector<double> grid() const { return uniform_grid(omega_min, omega_max, steps); }
};

namespace detail {

inline void check_material(const MaterialParams& p) {
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

inline void check_geometry(double radius, double position) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw ConfigError("radius must be positive");
    }
    if (!(position >= 0.0) || !(position < radius)) {
        throw ConfigError("position must satisfy 0 <= position < radius");
    }
}

}  // namespace detail

/// omega, eps, mu, n and the left-handed flag on a uniform grid.
inline CsvTable run_index(const MaterialParams& p, const Sweep& sweep) {
    detail::check_material(p);
    sweep.validate();
    CsvTable t;
    t.header = {"omega", "re_eps", "im_eps", "re_mu", "im_mu", "re_n", "im_n", "left_handed"};
    for (double w : sweep.grid()) {
        const OpticalResponse r = optical_response(p, w);
        t.rows.push_back({w, r.eps.real(), r.eps.imag(), r.mu.real(), r.mu.imag(), r.n.real(),
                          r.n.imag(), std::int64_t{is_left_handed(r.n) ? 1 : 0}});
    }
    return t;
}

struct CavityRun {
    double radius = 0.0;
    double position = 0.0;
    Orientation orientation = Orientation::radial;
    double tol = 1e-10;
};

/// Series rate Gamma/Gamma0 across the sweep. Non-converged rows keep
/// their partial value and report truncation_estimate > tol.
inline CsvTable run_cavity(const MaterialParams& p, const CavityRun& run, const Sweep& sweep) {
    detail::check_material(p);
    detail::check_geometry(run.radius, run.position);
    sweep.validate();
    if (!(run.tol > 0.0)) {
        throw ConfigError("tol must be positive");
    }
    const CavityConfig cfg{run.radius, run.position, run.orientation, p};
    CsvTable t;
    t.header = {"omega", "gamma_ratio", "terms_used", "truncation_estimate"};
    for (double w : sweep.grid()) {
        const RateResult r = rate_series(w, cfg, run.tol);
        t.rows.push_back({w, r.ratio, std::int64_t{r.terms_used}, r.truncation_estimate});
    }
    return t;
}

/// Exact centre rate against the three-term small-cavity expansion. Rows
/// at the expansion pole carry nan in the expansion columns.
inline CsvTable run_expansion(const MaterialParams& p, double radius, const Sweep& sweep) {
    detail::check_material(p);
    detail::check_geometry(radius, 0.0);
    sweep.validate();
    if (!(wavenumber(sweep.omega_max) * radius < 1.0)) {
        throw ConfigError("expansion requires 2 pi * radius * omega-max < 1");
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CsvTable t;
    t.header = {"omega", "exact", "leading", "term_r3", "term_r1", "sum3", "abs_err"};
    for (double w : sweep.grid()) {
        const HostOptics host = HostOptics::of(p, w);
        const double exact = rate_center(w, radius, host).ratio;
        try {
            const CenterExpansion e = rate_center_expansion(w, radius, host);
            t.rows.push_back(
                {w, exact, e.leading, e.term_r3, e.term_r1, e.sum, std::abs(e.sum - exact)});
        } catch (const ExpansionPoleError&) {
            t.rows.push_back({w, exact, nan, nan, nan, nan, nan});
        }
    }
    return t;
}

struct DynamicsRun {
    double radius = 0.0;
    double position = 0.0;
    Orientation orientation = Orientation::radial;
    double omega_a = 0.0;  ///< bare transition frequency
    double band_lo = 0.05;
    double band_hi = 5.0;
    int band_steps = 2000;
    double coupling = 0.01;  ///< Gamma0(omega_ref) / omega_ref
    double t_max = 5.0;
    double dt = 1e-3;
    double tol = 1e-10;
};

/// Amplitude C_u(t) with the Markov rate and shift repeated on every row.
inline CsvTable run_dynamics(const MaterialParams& p, const DynamicsRun& run) {
    detail::check_material(p);
    detail::check_geometry(run.radius, run.position);
    if (!(run.band_lo > 0.0) || !(run.band_hi > run.band_lo)) {
        throw ConfigError("band must satisfy 0 < band-lo < band-hi");
    }
    if (!(run.omega_a > run.band_lo) || !(run.omega_a < run.band_hi)) {
        throw ConfigError("omega-a must lie strictly inside the band");
    }
    if (run.band_steps < 2) {
        throw ConfigError("steps must be >= 2 for the spectral grid");
    }
    if (!(run.t_max > 0.0) || !(run.dt > 0.0) || run.dt > run.t_max) {
        throw ConfigError("need 0 < dt <= tmax");
    }
    if (!(run.coupling > 0.0)) {
        throw ConfigError("coupling must be positive");
    }
    const CavityConfig cfg{run.radius, run.position, run.orientation, p};
    const SpectralDensity sd =
        spectral_density(cfg, run.band_lo, run.band_hi, run.band_steps, run.tol);
    const DecayTrajectory traj = simulate_decay(sd, run.omega_a, run.coupling, run.t_max, run.dt);
    CsvTable t;
    t.header = {"t", "re_cu", "im_cu", "prob", "gamma_markov", "delta_omega"};
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const cplx c = traj.cu[k];
        t.rows.push_back(
            {traj.times[k], c.real(), c.imag(), std::norm(c), traj.gamma_markov, traj.delta_omega});
    }
    return t;
}

}  // namespace lhm

#pragma once

/**
 * @file shooting.hpp
 * @brief Eigenvalue search for the loaded membrane by the shooting method.
 *
 * For each angular order m the boundary value R(a; k') is sampled on a grid
 * of trial k'. Every sign change brackets an eigenvalue, which is refined by
 * bisection. The i-th root (0-based) must have exactly i interior nodal
 * circles; if not, a root was missed or double-counted and the scan is
 * repeated with half the grid step.
 *
 * Lengths are measured in units of the membrane radius a: the scan range is
 * given in kappa = k' a and the integration step and start radius are
 * fractions of a.
 */

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <future>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "tabla/ode.hpp"
#include "tabla/profiles.hpp"
#include "tabla/specfun.hpp"

namespace tabla {

/// (nodal diameters, interior nodal circles); the rim is not counted.
struct ModeId {
    int diameters = 0;
    int circles = 0;
    friend auto operator<=>(const ModeId&, const ModeId&) = default;
};

inline std::string to_string(const ModeId& id) {
    return "(" + std::to_string(id.diameters) + "," + std::to_string(id.circles) + ")";
}

/// Parses "m,c" (optionally wrapped in parentheses). Returns nullopt on bad syntax.
inline std::optional<ModeId> parse_mode(std::string text) {
    if (text.size() >= 2 && text.front() == '(' && text.back() == ')') text = text.substr(1, text.size() - 2);
    const auto comma = text.find(',');
    if (comma == std::string::npos) return std::nullopt;
    auto parse_int = [](const std::string& s) -> std::optional<int> {
        if (s.empty() || s.size() > 3) return std::nullopt;
        int v = 0;
        for (char ch : s) {
            if (ch < '0' || ch > '9') return std::nullopt;
            v = v * 10 + (ch - '0');
        }
        return v;
    };
    const auto m = parse_int(text.substr(0, comma));
    const auto c = parse_int(text.substr(comma + 1));
    if (!m || !c) return std::nullopt;
    return ModeId{*m, *c};
}

struct EigenResult {
    ModeId mode;
    double kappa = 0.0;          ///< k' a
    int nodes_observed = 0;
    double boundary_residual = 0.0;
    double max_abs_R = 0.0;
};

struct SearchConfig {
    double kappa_min = 0.1;
    double kappa_max = 40.0;
    double kappa_step = 0.05;
    double h = 1e-4;              ///< integration step / a
    double r_start = 1e-4;        ///< start radius / a
    double tolerance = 1e-9;      ///< bisection width in k'
    int max_refinements = 3;      ///< grid halvings after a node-count mismatch
    RkScheme scheme = RkScheme::Midpoint;
    unsigned threads = 0;         ///< 0: hardware concurrency
};

class SolverError : public std::runtime_error {
public:
    enum class Kind { NotEnoughRoots, NodeCountMismatch, Integration };
    SolverError(Kind kind, ModeId mode, const std::string& what)
        : std::runtime_error(what), kind_(kind), mode_(mode) {}
    Kind kind() const { return kind_; }
    ModeId mode() const { return mode_; }

private:
    Kind kind_;
    ModeId mode_;
};

/// Bessel-series start values at r_start, using the central wavenumber k' sqrt(rho(0)).
template <DensityModel P>
RadialState initial_conditions(int m, double kprime, const P& profile, double r_start) {
    if (!(r_start > 0.0)) throw std::invalid_argument("initial_conditions: r_start must be positive");
    const double rho0 = profile.density(0.0);
    if (!(rho0 > 0.0)) throw std::invalid_argument("initial_conditions: rho(0) must be positive");
    const double k0 = kprime * std::sqrt(rho0);
    const double x = k0 * r_start;
    return {r_start, bessel_series(m, x, 4), k0 * bessel_series_prime(m, x, 4)};
}

template <DensityModel P>
ShotSummary shoot_mode(int m, double kprime, const P& profile, const SearchConfig& cfg) {
    const double a = profile.radius();
    const double r_start = cfg.r_start * a;
    return shoot(m, kprime, profile, r_start, cfg.h * a, initial_conditions(m, kprime, profile, r_start),
                 cfg.scheme);
}

/// R(a) for trial k'.
template <DensityModel P>
double boundary_value(int m, double kprime, const P& profile, const SearchConfig& cfg = {}) {
    if (!(kprime > 0.0)) throw std::invalid_argument("boundary_value: k' must be positive");
    return shoot_mode(m, kprime, profile, cfg).rim.R;
}

template <DensityModel P>
Trajectory mode_trajectory(int m, double kprime, const P& profile, const SearchConfig& cfg = {}) {
    const double a = profile.radius();
    const double r_start = cfg.r_start * a;
    return integrate(m, kprime, profile, r_start, cfg.h * a, initial_conditions(m, kprime, profile, r_start),
                     cfg.scheme);
}

namespace detail {

inline bool opposite(double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

template <DensityModel P>
EigenResult refine_root(int m, int index, double lo, double f_lo, double hi, const P& profile,
                        const SearchConfig& cfg) {
    while (hi - lo > cfg.tolerance) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = shoot_mode(m, mid, profile, cfg).rim.R;
        if (f_mid == 0.0) {
            lo = hi = mid;
            break;
        }
        if (opposite(f_mid, f_lo)) {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    const double k = 0.5 * (lo + hi);
    const ShotSummary shot = shoot_mode(m, k, profile, cfg);
    return {ModeId{m, index}, k * profile.radius(), shot.interior_nodes, shot.rim.R, shot.max_abs_R};
}

// One scan over the grid, stopping once `count` roots are bracketed.
template <DensityModel P>
std::vector<EigenResult> scan_order(int m, int count, const P& profile, const SearchConfig& cfg, double step) {
    const double a = profile.radius();
    std::vector<EigenResult> roots;
    double k_prev = cfg.kappa_min / a;
    double f_prev = shoot_mode(m, k_prev, profile, cfg).rim.R;
    const auto points = static_cast<long>(std::floor((cfg.kappa_max - cfg.kappa_min) / step + 1e-9));
    for (long i = 1; i <= points && static_cast<int>(roots.size()) < count; ++i) {
        const double k = (cfg.kappa_min + double(i) * step) / a;
        const double f = shoot_mode(m, k, profile, cfg).rim.R;
        if (f == 0.0) {
            const ShotSummary shot = shoot_mode(m, k, profile, cfg);
            roots.push_back({ModeId{m, int(roots.size())}, k * a, shot.interior_nodes, 0.0, shot.max_abs_R});
        } else if (opposite(f_prev, f)) {
            roots.push_back(refine_root(m, int(roots.size()), k_prev, f_prev, k, profile, cfg));
        }
        k_prev = k;
        f_prev = f;
    }
    return roots;
}

}  // namespace detail

/// The first `count` eigenvalues at angular order m, each verified by its node count.
template <DensityModel P>
std::vector<EigenResult> solve_order(int m, int count, const P& profile, const SearchConfig& cfg = {}) {
    if (m < 0 || m > 10) throw std::invalid_argument("solve_order: m must be in [0, 10]");
    if (count < 1) throw std::invalid_argument("solve_order: need at least one root");
    if (!(cfg.kappa_step > 0.0) || !(cfg.kappa_max > cfg.kappa_min) || !(cfg.kappa_min > 0.0))
        throw std::invalid_argument("solve_order: invalid scan range");
    double step = cfg.kappa_step;
    std::string last_problem;
    for (int attempt = 0; attempt <= cfg.max_refinements; ++attempt, step *= 0.5) {
        std::vector<EigenResult> roots;
        try {
            roots = detail::scan_order(m, count, profile, cfg, step);
        } catch (const IntegrationError& e) {
            throw SolverError(SolverError::Kind::Integration, ModeId{m, 0}, e.what());
        }
        if (static_cast<int>(roots.size()) < count) {
            const int c = static_cast<int>(roots.size());
            throw SolverError(SolverError::Kind::NotEnoughRoots, ModeId{m, c},
                              "mode " + to_string(ModeId{m, c}) + ": only " + std::to_string(c) +
                                  " roots below kappa = " + std::to_string(cfg.kappa_max));
        }
        const auto bad = std::find_if(roots.begin(), roots.end(),
                                      [](const EigenResult& r) { return r.nodes_observed != r.mode.circles; });
        if (bad == roots.end()) return roots;
        last_problem = "mode " + to_string(bad->mode) + ": root at kappa = " + std::to_string(bad->kappa) +
                       " has " + std::to_string(bad->nodes_observed) + " interior nodes";
    }
    const int c = count - 1;
    throw SolverError(SolverError::Kind::NodeCountMismatch, ModeId{m, c}, last_problem);
}

template <DensityModel P>
EigenResult find_eigenvalue(int m, int circles, const P& profile, const SearchConfig& cfg = {}) {
    if (circles < 0) throw std::invalid_argument("find_eigenvalue: circles must be >= 0");
    return solve_order(m, circles + 1, profile, cfg).back();
}

/// All modes with m <= m_max and c <= c_max, ascending in kappa.
template <DensityModel P>
std::vector<EigenResult> eigen_spectrum(const P& profile, int m_max, int c_max, const SearchConfig& cfg = {}) {
    if (m_max < 0 || m_max > 10) throw std::invalid_argument("eigen_spectrum: m_max must be in [0, 10]");
    if (c_max < 0 || c_max > 5) throw std::invalid_argument("eigen_spectrum: c_max must be in [0, 5]");
    std::vector<std::vector<EigenResult>> per_order(static_cast<std::size_t>(m_max + 1));
    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    if (threads > 1 && m_max > 0) {
        std::vector<std::future<std::vector<EigenResult>>> jobs;
        for (int m = 0; m <= m_max; ++m)
            jobs.push_back(std::async(std::launch::async, [&, m] { return solve_order(m, c_max + 1, profile, cfg); }));
        for (int m = 0; m <= m_max; ++m) per_order[std::size_t(m)] = jobs[std::size_t(m)].get();
    } else {
        for (int m = 0; m <= m_max; ++m) per_order[std::size_t(m)] = solve_order(m, c_max + 1, profile, cfg);
    }
    std::vector<EigenResult> all;
    for (auto& v : per_order) all.insert(all.end(), v.begin(), v.end());
    std::sort(all.begin(), all.end(), [](const EigenResult& x, const EigenResult& y) {
        if (x.kappa != y.kappa) return x.kappa < y.kappa;
        return x.mode < y.mode;
    });
    return all;
}

/// Eigenvalues for an explicit list of modes (one scan per distinct m).
template <DensityModel P>
std::vector<EigenResult> solve_modes(const P& profile, const std::vector<ModeId>& modes, const SearchConfig& cfg = {}) {
    int m_max = 0;
    for (const auto& id : modes) m_max = std::max(m_max, id.diameters);
    std::vector<int> need(static_cast<std::size_t>(m_max + 1), 0);
    for (const auto& id : modes) need[std::size_t(id.diameters)] = std::max(need[std::size_t(id.diameters)], id.circles + 1);
    std::vector<std::vector<EigenResult>> per_order(need.size());
    for (int m = 0; m <= m_max; ++m)
        if (need[std::size_t(m)] > 0) per_order[std::size_t(m)] = solve_order(m, need[std::size_t(m)], profile, cfg);
    std::vector<EigenResult> out;
    out.reserve(modes.size());
    for (const auto& id : modes) out.push_back(per_order[std::size_t(id.diameters)][std::size_t(id.circles)]);
    return out;
}

}  // namespace tabla

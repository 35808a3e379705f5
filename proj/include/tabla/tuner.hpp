#pragma once

/**
 * @file tuner.hpp
 * @brief Bounded Nelder-Mead search over density-profile parameters.
 *
 * The objective is the RMS distance between the loaded membrane's frequency
 * ratios (normalised so that the base mode takes the base value) and a set
 * of integer targets. Modes without a target, such as the fundamental, are
 * solved but left out of the sum.
 *
 * The simplex lives in the unit cube; each coordinate is mapped affinely
 * onto its parameter's box and clipped, so every evaluated candidate lies
 * inside the bounds. The templates are parameterised so that any point in
 * the box is a valid profile (ordered ring radii, r0 beyond the patch edge,
 * non-negative exponential amplitude).
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tabla/profiles.hpp"
#include "tabla/shooting.hpp"
#include "tabla/spectrum.hpp"

namespace tabla {

enum class ProfileTemplate { Continuous, Rings };

struct ParamSpec {
    std::string name;
    double lower = 0.0;
    double upper = 1.0;
    double start = 0.0;
};

struct ModeTarget {
    ModeId mode;
    std::optional<double> target;  ///< nullopt: solved but not scored
};

struct TuneProblem {
    ProfileTemplate kind = ProfileTemplate::Continuous;
    double radius = 1.0;
    std::vector<ParamSpec> params;
    std::vector<ModeTarget> targets;
    ModeId base_mode{1, 0};
    double base_value = 2.0;
    int budget = 500;
    double initial_step = 0.25;   ///< simplex edge, as a fraction of each box
    double tolerance = 1e-6;      ///< restart once the simplex spread falls below this
    SearchConfig search;
    std::function<void(const std::string&)> log = [](const std::string& msg) { std::clog << msg << '\n'; };
};

inline constexpr double kObjectivePenalty = 1e3;

/// Builds a profile from template parameters, in the order given by the problem.
inline DensityProfile build_profile(ProfileTemplate kind, const std::vector<ParamSpec>& specs,
                                    const std::vector<double>& values, double radius = 1.0) {
    if (specs.size() != values.size()) throw std::invalid_argument("build_profile: parameter count mismatch");
    auto get = [&](const std::string& name) -> double {
        for (std::size_t i = 0; i < specs.size(); ++i)
            if (specs[i].name == name) return values[i];
        throw std::invalid_argument("build_profile: missing parameter '" + name + "'");
    };
    if (kind == ProfileTemplate::Continuous) {
        ContinuousLogExp c;
        c.a_log = get("a_log");
        c.b_log = get("b_log");
        c.patch_radius = get("patch_radius") * radius;
        c.r0 = c.patch_radius + get("r0_gap") * radius;
        c.c_exp = get("c_exp");
        c.d_exp = get("d_exp") / radius;
        return DensityProfile::continuous(c, radius);
    }
    // Ring i spans a fraction frac_i of the radius still left beyond ring i-1.
    std::vector<Ring> rings;
    double inner = 0.0;
    for (int i = 1;; ++i) {
        const std::string suffix = std::to_string(i);
        const bool has = std::any_of(specs.begin(), specs.end(),
                                     [&](const ParamSpec& p) { return p.name == "frac" + suffix; });
        if (!has) break;
        const double frac = get("frac" + suffix);
        if (!(frac > 0.0 && frac < 1.0)) throw std::invalid_argument("build_profile: ring fraction must be in (0, 1)");
        inner += frac * (radius - inner);
        rings.push_back({inner, get("rho" + suffix)});
    }
    if (rings.empty()) throw std::invalid_argument("build_profile: ring template needs frac1/rho1");
    rings.push_back({radius, 1.0});
    return DensityProfile::step_rings(std::move(rings), radius);
}

inline DensityProfile build_profile(const TuneProblem& problem, const std::vector<double>& values) {
    return build_profile(problem.kind, problem.params, values, problem.radius);
}

/// Ratios of the problem's target modes under its base convention.
inline RatioTable tuned_ratios(const DensityProfile& profile, const TuneProblem& problem) {
    std::vector<ModeId> modes{problem.base_mode};
    for (const auto& t : problem.targets)
        if (t.mode != problem.base_mode) modes.push_back(t.mode);
    return ratio_table(solve_modes(profile, modes, problem.search), problem.base_mode, problem.base_value);
}

inline double objective(const std::vector<double>& values, const TuneProblem& problem) {
    for (std::size_t i = 0; i < values.size() && i < problem.params.size(); ++i)
        if (values[i] < problem.params[i].lower || values[i] > problem.params[i].upper)
            throw std::invalid_argument("objective: parameter '" + problem.params[i].name + "' out of bounds");
    try {
        const RatioTable table = tuned_ratios(build_profile(problem, values), problem);
        double sum_sq = 0.0;
        int n = 0;
        for (const auto& t : problem.targets) {
            if (!t.target) continue;
            const double d = table.ratio(t.mode) - *t.target;
            sum_sq += d * d;
            ++n;
        }
        return n ? std::sqrt(sum_sq / n) : 0.0;
    } catch (const std::exception& e) {
        if (problem.log) problem.log(std::string("objective: evaluation failed: ") + e.what());
        return kObjectivePenalty;
    }
}

struct TraceEntry {
    int evaluation = 0;
    std::vector<double> params;
    double value = 0.0;
};

struct TuneResult {
    std::vector<double> best;
    double best_value = 0.0;
    double initial_value = 0.0;
    std::vector<TraceEntry> trace;
    bool budget_exhausted = false;
    int restarts = 0;
};

namespace detail {

// Uniform double in [0, 1) from the raw engine output; std distributions are
// not reproducible across standard libraries.
inline double unit_uniform(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

}  // namespace detail

/// Bounded Nelder-Mead with restarts, deterministic for a fixed problem and seed.
inline TuneResult tune(const TuneProblem& problem, std::uint64_t seed) {
    const std::size_t n = problem.params.size();
    if (n == 0) throw std::invalid_argument("tune: no free parameters");
    if (problem.budget < 50) throw std::invalid_argument("tune: budget must be at least 50 evaluations");
    for (const auto& p : problem.params)
        if (!(p.upper > p.lower) || p.start < p.lower || p.start > p.upper)
            throw std::invalid_argument("tune: bad bounds or start for '" + p.name + "'");

    using Point = std::vector<double>;  // unit-cube coordinates
    auto to_params = [&](const Point& u) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& p = problem.params[i];
            x[i] = std::clamp(p.lower + std::clamp(u[i], 0.0, 1.0) * (p.upper - p.lower), p.lower, p.upper);
        }
        return x;
    };
    auto clip = [](Point u) {
        for (double& v : u) v = std::clamp(v, 0.0, 1.0);
        return u;
    };

    TuneResult result;
    std::mt19937_64 rng(seed);
    int evals = 0;
    auto f = [&](const Point& u) {
        const auto x = to_params(u);
        const double v = objective(x, problem);
        ++evals;
        result.trace.push_back({evals, x, v});
        if (evals == 1 || v < result.best_value) {
            result.best_value = v;
            result.best = x;
        }
        return v;
    };
    auto exhausted = [&] { return evals >= problem.budget; };

    Point start(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = problem.params[i];
        start[i] = (p.start - p.lower) / (p.upper - p.lower);
    }
    result.initial_value = f(start);
    Point best_u = start;
    double best_f = result.initial_value;

    double edge = problem.initial_step;
    while (!exhausted() && best_f > 0.0) {
        // Simplex around the incumbent: one vertex per axis, pointing into the
        // box, with a small seeded jitter on the other coordinates.
        std::vector<Point> xs{best_u};
        std::vector<double> fs{best_f};
        for (std::size_t i = 0; i < n && !exhausted(); ++i) {
            Point v = best_u;
            const double dir = (v[i] + edge <= 1.0) ? 1.0 : -1.0;
            v[i] += dir * edge;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) v[j] += 0.1 * edge * (2.0 * detail::unit_uniform(rng) - 1.0);
            v = clip(v);
            xs.push_back(v);
            fs.push_back(f(v));
        }
        if (xs.size() < n + 1) break;

        std::vector<std::size_t> order(n + 1);
        while (!exhausted()) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
            const std::size_t ib = order.front(), iw = order.back(), isw = order[n - 1];
            if (fs[ib] <= 0.0 || fs[iw] - fs[ib] <= problem.tolerance) break;

            Point centroid(n, 0.0);
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t i = 0; i < n; ++i) centroid[i] += xs[order[k]][i] / double(n);
            auto along = [&](double t) {
                Point p(n);
                for (std::size_t i = 0; i < n; ++i) p[i] = centroid[i] + t * (xs[iw][i] - centroid[i]);
                return clip(p);
            };

            const Point xr = along(-1.0);
            const double fr = f(xr);
            if (fr < fs[ib]) {
                if (exhausted()) { xs[iw] = xr; fs[iw] = fr; break; }
                const Point xe = along(-2.0);
                const double fe = f(xe);
                if (fe < fr) { xs[iw] = xe; fs[iw] = fe; }
                else { xs[iw] = xr; fs[iw] = fr; }
            } else if (fr < fs[isw]) {
                xs[iw] = xr;
                fs[iw] = fr;
            } else {
                if (exhausted()) break;
                const bool outside = fr < fs[iw];
                const Point xc = along(outside ? -0.5 : 0.5);
                const double fc = f(xc);
                if (fc < (outside ? fr : fs[iw])) {
                    xs[iw] = xc;
                    fs[iw] = fc;
                } else {
                    for (std::size_t k = 1; k <= n && !exhausted(); ++k) {
                        const std::size_t j = order[k];
                        for (std::size_t i = 0; i < n; ++i) xs[j][i] = xs[ib][i] + 0.5 * (xs[j][i] - xs[ib][i]);
                        fs[j] = f(xs[j]);
                    }
                }
            }
        }
        const auto ib = std::size_t(std::min_element(fs.begin(), fs.end()) - fs.begin());
        if (fs[ib] < best_f) {
            best_f = fs[ib];
            best_u = xs[ib];
        }
        if (!exhausted() && best_f > 0.0) {
            ++result.restarts;
            edge = std::max(0.02, 0.5 * edge);
        }
    }
    result.budget_exhausted = exhausted();
    return result;
}

/// Free parameters and bounds of the default continuous-loading search.
inline std::vector<ParamSpec> default_continuous_params() {
    return {
        {"a_log", 0.0, 10.0, 0.0},
        {"b_log", 1.0, 20.0, 1.0},
        {"r0_gap", 0.01, 2.0, 0.5},
        {"patch_radius", 0.05, 0.9, 0.5},
        {"c_exp", 0.0, 2.0, 0.0},
        {"d_exp", -5.0, 5.0, 0.0},
    };
}

/// `loaded_rings` loaded rings inside a bare outer annulus.
inline std::vector<ParamSpec> default_ring_params(int loaded_rings = 2) {
    std::vector<ParamSpec> out;
    for (int i = 1; i <= loaded_rings; ++i) {
        out.push_back({"frac" + std::to_string(i), 0.05, 0.95, 0.5});
        out.push_back({"rho" + std::to_string(i), 1.0, 20.0, 1.0});
    }
    return out;
}

/// Integer targets for modes (1,0) through (0,2); the fundamental is solved but unscored.
inline std::vector<ModeTarget> default_targets() {
    return {
        {{0, 0}, std::nullopt}, {{1, 0}, 2.0}, {{2, 0}, 3.0}, {{0, 1}, 3.0}, {{3, 0}, 4.0},
        {{1, 1}, 4.0},          {{4, 0}, 5.0}, {{2, 1}, 5.0}, {{0, 2}, 5.0},
    };
}

inline TuneProblem default_tune_problem(ProfileTemplate kind) {
    TuneProblem p;
    p.kind = kind;
    p.params = kind == ProfileTemplate::Continuous ? default_continuous_params() : default_ring_params();
    p.targets = default_targets();
    p.search.h = 1e-3;
    return p;
}

}  // namespace tabla

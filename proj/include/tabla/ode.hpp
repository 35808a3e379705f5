#pragma once

// Fixed-step explicit Runge-Kutta integration of the loaded-membrane radial
// equation
//
//     R'' + R'/r + (rho(r) k'^2 - m^2/r^2) R = 0
//
// as the first-order system (R, R') from a small start radius to the rim.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tabla/profiles.hpp"

namespace tabla {

struct RadialState {
    double r = 0.0;
    double R = 0.0;
    double dR = 0.0;
};

struct RadialDerivative {
    double dR = 0.0;
    double d2R = 0.0;
};

enum class RkScheme { Midpoint = 2, Classic4 = 4 };

struct Trajectory {
    std::vector<RadialState> states;
    double h = 0.0;
    int m = 0;
    double kprime = 0.0;
};

class IntegrationError : public std::runtime_error {
public:
    IntegrationError(std::size_t step, double kprime, const std::string& what)
        : std::runtime_error(what), step_(step), kprime_(kprime) {}
    std::size_t step() const { return step_; }
    double kprime() const { return kprime_; }

private:
    std::size_t step_;
    double kprime_;
};

template <DensityModel P>
RadialDerivative radial_rhs(int m, double kprime, const P& profile, const RadialState& s) {
    if (!(s.r > 0.0)) throw std::domain_error("radial_rhs: r must be positive (r = 0 is singular)");
    const double inv_r = 1.0 / s.r;
    const double potential = profile.density(s.r) * kprime * kprime - double(m * m) * inv_r * inv_r;
    return {s.dR, -s.dR * inv_r - potential * s.R};
}

namespace detail {

template <DensityModel P>
RadialState rk_step(int m, double kprime, const P& profile, const RadialState& s, double h, RkScheme scheme) {
    auto shifted = [&](double dr, const RadialDerivative& k, double w) {
        return RadialState{s.r + dr, s.R + w * k.dR, s.dR + w * k.d2R};
    };
    const RadialDerivative k1 = radial_rhs(m, kprime, profile, s);
    if (scheme == RkScheme::Midpoint) {
        const RadialDerivative k2 = radial_rhs(m, kprime, profile, shifted(0.5 * h, k1, 0.5 * h));
        return {s.r + h, s.R + h * k2.dR, s.dR + h * k2.d2R};
    }
    const RadialDerivative k2 = radial_rhs(m, kprime, profile, shifted(0.5 * h, k1, 0.5 * h));
    const RadialDerivative k3 = radial_rhs(m, kprime, profile, shifted(0.5 * h, k2, 0.5 * h));
    const RadialDerivative k4 = radial_rhs(m, kprime, profile, shifted(h, k3, h));
    return {s.r + h,
            s.R + h / 6.0 * (k1.dR + 2.0 * k2.dR + 2.0 * k3.dR + k4.dR),
            s.dR + h / 6.0 * (k1.d2R + 2.0 * k2.d2R + 2.0 * k3.d2R + k4.d2R)};
}

struct StepPlan {
    std::size_t steps;
    double h;
};

// The span is divided into a whole number of equal steps so the last state
// lands exactly on the rim; the effective step differs from the request by
// at most h/2 over the span.
inline StepPlan plan_steps(double r_start, double rim, double h) {
    const double span = rim - r_start;
    if (!(r_start > 0.0) || !(span > 0.0))
        throw std::invalid_argument("integrate: need 0 < r_start < a");
    if (!(h > 0.0) || h > span / 100.0 * (1.0 + 1e-12))
        throw std::invalid_argument("integrate: step must satisfy 0 < h <= (a - r_start)/100");
    const auto steps = static_cast<std::size_t>(std::llround(span / h));
    return {steps, span / double(steps)};
}

[[noreturn]] inline void throw_non_finite(std::size_t step, double kprime, const RadialState& s) {
    std::ostringstream msg;
    msg << "integrate: non-finite state at step " << step << " (r = " << s.r << ", k' = " << kprime << ")";
    throw IntegrationError(step, kprime, msg.str());
}

}  // namespace detail

/// Integrates from `init` (at r_start) to the rim, recording every step.
template <DensityModel P>
Trajectory integrate(int m, double kprime, const P& profile, double r_start, double h, const RadialState& init,
                     RkScheme scheme = RkScheme::Midpoint) {
    const double rim = profile.radius();
    const auto plan = detail::plan_steps(r_start, rim, h);
    Trajectory t;
    t.h = plan.h;
    t.m = m;
    t.kprime = kprime;
    t.states.reserve(plan.steps + 1);
    RadialState s{r_start, init.R, init.dR};
    t.states.push_back(s);
    for (std::size_t i = 1; i <= plan.steps; ++i) {
        s = detail::rk_step(m, kprime, profile, s, plan.h, scheme);
        s.r = (i == plan.steps) ? rim : r_start + double(i) * plan.h;
        if (!std::isfinite(s.R) || !std::isfinite(s.dR)) detail::throw_non_finite(i, kprime, s);
        t.states.push_back(s);
    }
    return t;
}

/// Summary of one shot: the rim state plus what node counting needs,
/// without storing the trajectory.
struct ShotSummary {
    RadialState rim;
    int interior_nodes = 0;
    double max_abs_R = 0.0;
    double h = 0.0;
};

namespace detail {

/// Strict sign changes of R, ignoring any that complete within 2h of the rim.
class NodeCounter {
public:
    NodeCounter(double rim, double h) : cutoff_(rim - 2.0 * h) {}
    void observe(double r, double R) {
        if (R == 0.0) return;
        const int sign = R > 0.0 ? 1 : -1;
        if (last_sign_ != 0 && sign != last_sign_ && r <= cutoff_) ++nodes_;
        last_sign_ = sign;
    }
    int nodes() const { return nodes_; }

private:
    double cutoff_;
    int last_sign_ = 0;
    int nodes_ = 0;
};

}  // namespace detail

template <DensityModel P>
ShotSummary shoot(int m, double kprime, const P& profile, double r_start, double h, const RadialState& init,
                  RkScheme scheme = RkScheme::Midpoint) {
    const double rim = profile.radius();
    const auto plan = detail::plan_steps(r_start, rim, h);
    detail::NodeCounter counter(rim, plan.h);
    RadialState s{r_start, init.R, init.dR};
    double max_abs = std::abs(s.R);
    counter.observe(s.r, s.R);
    for (std::size_t i = 1; i <= plan.steps; ++i) {
        s = detail::rk_step(m, kprime, profile, s, plan.h, scheme);
        s.r = (i == plan.steps) ? rim : r_start + double(i) * plan.h;
        if (!std::isfinite(s.R) || !std::isfinite(s.dR)) detail::throw_non_finite(i, kprime, s);
        counter.observe(s.r, s.R);
        max_abs = std::max(max_abs, std::abs(s.R));
    }
    return {s, counter.nodes(), max_abs, plan.h};
}

/// Interior nodal circles: strict sign changes of R over (r_start, a), where
/// a change completing within 2h of the rim is the boundary zero itself.
inline int count_nodes(const Trajectory& t) {
    if (t.states.empty()) return 0;
    detail::NodeCounter counter(t.states.back().r, t.h);
    for (const auto& s : t.states) counter.observe(s.r, s.R);
    return counter.nodes();
}

}  // namespace tabla

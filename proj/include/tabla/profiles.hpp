#pragma once

/**
 * @file profiles.hpp
 * @brief Radial areal-density models of a loaded circular membrane.
 *
 * Densities are dimensionless multiples of the bare membrane density, and the
 * tension is fixed at 1, so every eigenvalue computed from these profiles is a
 * pure number. Four variants are supported:
 *
 *  - Uniform:          rho(r) = 1
 *  - StepRings:        piecewise constant over concentric rings
 *  - ContinuousLogExp: a logarithmic central patch, max(1, A log(r0 - r) + B)
 *                      for r < r_p, and 1 + C exp(D r) outside it
 *  - Tabulated:        linear interpolation of (r, rho) samples
 *
 * A profile is immutable once built; construction samples rho on 10,000
 * points and rejects anything that is not strictly positive and finite.
 */

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace tabla {

/// Anything usable as rho(r) by the integrator.
template <typename P>
concept DensityModel = requires(const P& p, double r) {
    { p.density(r) } -> std::convertible_to<double>;
    { p.radius() } -> std::convertible_to<double>;
};

struct MembraneSpec {
    double radius = 1.0;
    static constexpr double baseline_density = 1.0;
    static constexpr double tension = 1.0;
};

struct UniformDensity {};

struct Ring {
    double outer_radius;
    double density;
};

/// Rings ordered from the centre outwards; the last outer radius is the rim.
struct StepRings {
    std::vector<Ring> rings;
};

struct ContinuousLogExp {
    double a_log = 0.0;
    double b_log = 1.0;
    double r0 = 1.0;
    double patch_radius = 0.5;
    double c_exp = 0.0;
    double d_exp = 0.0;
};

struct DensitySample {
    double r;
    double rho;
};

struct Tabulated {
    std::vector<DensitySample> samples;
};

enum class ProfileKind { Uniform, StepRings, ContinuousLogExp, Tabulated };

class DensityProfile {
public:
    using Variant = std::variant<UniformDensity, StepRings, ContinuousLogExp, Tabulated>;

    static DensityProfile uniform(double radius = 1.0) { return DensityProfile(UniformDensity{}, radius); }
    static DensityProfile step_rings(std::vector<Ring> rings, double radius = 1.0) {
        return DensityProfile(StepRings{std::move(rings)}, radius);
    }
    static DensityProfile continuous(const ContinuousLogExp& p, double radius = 1.0) {
        return DensityProfile(p, radius);
    }
    static DensityProfile tabulated(std::vector<DensitySample> samples, double radius = 1.0) {
        return DensityProfile(Tabulated{std::move(samples)}, radius);
    }

    DensityProfile(Variant shape, double radius) : shape_(std::move(shape)), radius_(radius) {
        validate();
    }

    double radius() const { return radius_; }
    double scale() const { return scale_; }
    const Variant& shape() const { return shape_; }

    ProfileKind kind() const { return static_cast<ProfileKind>(shape_.index()); }

    /// Same shape with every density multiplied by s.
    DensityProfile scaled(double s) const {
        if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("density scale must be positive");
        DensityProfile copy = *this;
        copy.scale_ *= s;
        return copy;
    }

    /// rho(r) for r in [0, a].
    double density(double r) const {
        if (!(r >= 0.0) || r > radius_ * (1.0 + 1e-12))
            throw std::out_of_range("density: r = " + std::to_string(r) + " outside [0, a]");
        return scale_ * shape_density(r);
    }

    /// Size of the step at the edge of the logarithmic patch, rho(r_p) - rho(r_p^-).
    /// Zero for every other variant.
    double patch_edge_jump() const { return patch_edge_jump_; }

private:
    double shape_density(double r) const {
        return std::visit(
            [&](const auto& s) -> double {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, UniformDensity>) {
                    return 1.0;
                } else if constexpr (std::is_same_v<T, StepRings>) {
                    // Right-open rings: the boundary point belongs to the inner ring.
                    for (const auto& ring : s.rings)
                        if (r <= ring.outer_radius) return ring.density;
                    return s.rings.back().density;
                } else if constexpr (std::is_same_v<T, ContinuousLogExp>) {
                    if (r < s.patch_radius) return std::max(1.0, s.a_log * std::log(s.r0 - r) + s.b_log);
                    return 1.0 + s.c_exp * std::exp(s.d_exp * r);
                } else {
                    const auto& v = s.samples;
                    auto it = std::upper_bound(v.begin(), v.end(), r,
                                               [](double x, const DensitySample& d) { return x < d.r; });
                    if (it == v.begin()) return v.front().rho;
                    if (it == v.end()) return v.back().rho;
                    const auto& hi = *it;
                    const auto& lo = *(it - 1);
                    const double t = (r - lo.r) / (hi.r - lo.r);
                    return lo.rho + t * (hi.rho - lo.rho);
                }
            },
            shape_);
    }

    void validate() {
        if (!(radius_ > 0.0) || !std::isfinite(radius_))
            throw std::invalid_argument("membrane radius must be positive");
        std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, StepRings>) {
                    if (s.rings.empty()) throw std::invalid_argument("step rings: need at least one ring");
                    double prev = 0.0;
                    for (const auto& ring : s.rings) {
                        if (!(ring.outer_radius > prev))
                            throw std::invalid_argument("step rings: radii must be strictly increasing");
                        prev = ring.outer_radius;
                    }
                    if (std::abs(prev - radius_) > 1e-12 * radius_)
                        throw std::invalid_argument("step rings: last outer radius must equal the rim");
                } else if constexpr (std::is_same_v<T, ContinuousLogExp>) {
                    if (!(s.r0 > s.patch_radius))
                        throw std::invalid_argument("continuous profile: r0 must exceed the patch radius");
                    if (s.patch_radius < 0.0)
                        throw std::invalid_argument("continuous profile: patch radius must be non-negative");
                    if (s.patch_radius > 0.0 && s.patch_radius <= radius_) {
                        const double inside = std::max(
                            1.0, s.a_log * std::log(s.r0 - s.patch_radius) + s.b_log);
                        const double outside = 1.0 + s.c_exp * std::exp(s.d_exp * s.patch_radius);
                        patch_edge_jump_ = outside - inside;
                    }
                } else if constexpr (std::is_same_v<T, Tabulated>) {
                    if (s.samples.size() < 2) throw std::invalid_argument("tabulated: need at least two samples");
                    for (std::size_t i = 1; i < s.samples.size(); ++i)
                        if (!(s.samples[i].r > s.samples[i - 1].r))
                            throw std::invalid_argument("tabulated: radii must be strictly increasing");
                    if (s.samples.front().r != 0.0 || std::abs(s.samples.back().r - radius_) > 1e-12 * radius_)
                        throw std::invalid_argument("tabulated: samples must span [0, a]");
                }
            },
            shape_);

        constexpr int kChecks = 10000;
        for (int i = 0; i < kChecks; ++i) {
            const double r = radius_ * double(i) / double(kChecks - 1);
            const double rho = shape_density(r);
            if (!(rho > 0.0) || !std::isfinite(rho))
                throw std::invalid_argument("density must be positive and finite on [0, a]; fails at r = " +
                                            std::to_string(r));
        }
    }

    Variant shape_;
    double radius_ = 1.0;
    double scale_ = 1.0;
    double patch_edge_jump_ = 0.0;
};

/// `count` equally spaced (r, rho) pairs over [0, a], endpoints included.
inline std::vector<DensitySample> profile_samples(const DensityProfile& profile, int count) {
    if (count < 2) throw std::invalid_argument("profile_samples: count must be >= 2");
    std::vector<DensitySample> out;
    out.reserve(static_cast<std::size_t>(count));
    const double a = profile.radius();
    for (int i = 0; i < count; ++i) {
        const double r = (i == count - 1) ? a : a * double(i) / double(count - 1);
        out.push_back({r, profile.density(r)});
    }
    return out;
}

inline std::string to_string(ProfileKind k) {
    switch (k) {
        case ProfileKind::Uniform: return "uniform";
        case ProfileKind::StepRings: return "rings";
        case ProfileKind::ContinuousLogExp: return "continuous";
        case ProfileKind::Tabulated: return "tabulated";
    }
    return "unknown";
}

}  // namespace tabla

#pragma once

// Named profiles available without a profile file. The loaded ones are the
// output of `tabla tune` on config/tune-continuous.tune and
// config/tune-rings.tune, frozen here so that no run depends on a tuning pass.

#include <optional>
#include <string>
#include <vector>

#include "tabla/profiles.hpp"

namespace tabla {

inline ContinuousLogExp default_continuous_parameters() {
    ContinuousLogExp c;
    c.a_log = 6.0408712952668715;
    c.b_log = 13.182358215839356;
    c.r0 = 0.82420513134692963;
    c.patch_radius = 0.53264304560493225;
    c.c_exp = 0.022408640754963703;
    c.d_exp = -0.14698097481183137;
    return c;
}

inline std::vector<Ring> default_ring_parameters() {
    return {
        {0.33381688238585916, 14.139918855206927},
        {0.53510972995323103, 9.7526868236883164},
        {1.0, 1.0},
    };
}

inline std::vector<std::string> builtin_profile_names() {
    return {"uniform", "default-rings", "default-continuous"};
}

inline std::optional<DensityProfile> builtin_profile(const std::string& name) {
    if (name == "uniform") return DensityProfile::uniform();
    if (name == "default-rings") return DensityProfile::step_rings(default_ring_parameters());
    if (name == "default-continuous") return DensityProfile::continuous(default_continuous_parameters());
    return std::nullopt;
}

}  // namespace tabla

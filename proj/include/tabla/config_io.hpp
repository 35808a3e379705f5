#pragma once

/**
 * @file config_io.hpp
 * @brief Plain-text key/value files for density profiles and tune problems.
 *
 * One `key = value` pair per line; `#` starts a comment; blank lines are
 * ignored. Keys that describe lists (`ring`, `sample`, `param`, `target`) may
 * repeat and keep their file order.
 *
 * Profile file:
 *
 *     variant = continuous          # uniform | rings | continuous | tabulated
 *     radius = 1
 *     a_log = 1.44                  # continuous: A log(r0 - r) + B on [0, r_p)
 *     b_log = 7.0
 *     r0 = 0.70
 *     patch_radius = 0.50
 *     c_exp = 0.01                  # continuous: 1 + C exp(D r) on [r_p, a]
 *     d_exp = 0.43
 *     ring = 0.40 5.0               # rings: outer radius, density (centre outwards)
 *     sample = 0.0 3.0              # tabulated: r, rho
 *
 * Tune file (the profile keys `radius` plus):
 *
 *     template = continuous         # continuous | rings
 *     param = a_log 0 10 0          # name lower upper start
 *     target = 1,0 2                # mode, target ratio or `free`
 *     base = 1,0
 *     base_value = 2
 *     budget = 500
 *     seed = 1
 *     step = 1e-3                   # integration step / a
 *     initial_step = 0.25
 */

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tabla/profiles.hpp"
#include "tabla/tuner.hpp"

namespace tabla {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct KeyValue {
    std::string key;
    std::string value;
    int line = 0;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double to_double(const KeyValue& kv, const std::string& text) {
    std::istringstream in(text);
    in.imbue(std::locale::classic());
    double v = 0.0;
    if (!(in >> v) || !(in >> std::ws).eof())
        throw ConfigError("line " + std::to_string(kv.line) + ": '" + kv.key + "' expects a number, got '" + text + "'");
    return v;
}

inline std::vector<std::string> words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

}  // namespace detail

inline std::vector<KeyValue> parse_key_values(std::istream& in) {
    std::vector<KeyValue> out;
    std::string line;
    for (int n = 1; std::getline(in, line); ++n) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(n) + ": expected 'key = value'");
        KeyValue kv{detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)), n};
        if (kv.key.empty()) throw ConfigError("line " + std::to_string(n) + ": empty key");
        out.push_back(std::move(kv));
    }
    return out;
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    return in;
}

inline DensityProfile parse_profile(std::istream& in) {
    const auto kvs = parse_key_values(in);
    std::string variant;
    double radius = 1.0;
    ContinuousLogExp cont;
    std::vector<Ring> rings;
    std::vector<DensitySample> samples;
    for (const auto& kv : kvs) {
        if (kv.key == "variant") {
            variant = kv.value;
        } else if (kv.key == "radius") {
            radius = detail::to_double(kv, kv.value);
        } else if (kv.key == "a_log") {
            cont.a_log = detail::to_double(kv, kv.value);
        } else if (kv.key == "b_log") {
            cont.b_log = detail::to_double(kv, kv.value);
        } else if (kv.key == "r0") {
            cont.r0 = detail::to_double(kv, kv.value);
        } else if (kv.key == "patch_radius") {
            cont.patch_radius = detail::to_double(kv, kv.value);
        } else if (kv.key == "c_exp") {
            cont.c_exp = detail::to_double(kv, kv.value);
        } else if (kv.key == "d_exp") {
            cont.d_exp = detail::to_double(kv, kv.value);
        } else if (kv.key == "ring" || kv.key == "sample") {
            const auto w = detail::words(kv.value);
            if (w.size() != 2) throw ConfigError("line " + std::to_string(kv.line) + ": '" + kv.key + "' expects two numbers");
            const double x = detail::to_double(kv, w[0]);
            const double y = detail::to_double(kv, w[1]);
            if (kv.key == "ring") rings.push_back({x, y});
            else samples.push_back({x, y});
        } else {
            throw ConfigError("line " + std::to_string(kv.line) + ": unknown key '" + kv.key + "'");
        }
    }
    try {
        if (variant == "uniform") return DensityProfile::uniform(radius);
        if (variant == "rings") return DensityProfile::step_rings(rings, radius);
        if (variant == "continuous") return DensityProfile::continuous(cont, radius);
        if (variant == "tabulated") return DensityProfile::tabulated(samples, radius);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid profile: ") + e.what());
    }
    throw ConfigError("profile: missing or unknown variant '" + variant + "'");
}

inline DensityProfile load_profile(const std::string& path) {
    auto in = open_input(path);
    return parse_profile(in);
}

inline void write_profile(std::ostream& out, const DensityProfile& profile) {
    const auto old_precision = out.precision(std::numeric_limits<double>::max_digits10);
    out.imbue(std::locale::classic());
    out << "variant = " << to_string(profile.kind()) << '\n';
    out << "radius = " << profile.radius() << '\n';
    const double s = profile.scale();
    std::visit(
        [&](const auto& shape) {
            using T = std::decay_t<decltype(shape)>;
            if constexpr (std::is_same_v<T, StepRings>) {
                for (const auto& ring : shape.rings) out << "ring = " << ring.outer_radius << ' ' << s * ring.density << '\n';
            } else if constexpr (std::is_same_v<T, ContinuousLogExp>) {
                if (s != 1.0) throw std::invalid_argument("write_profile: a rescaled continuous profile has no file form");
                out << "a_log = " << shape.a_log << '\n'
                    << "b_log = " << shape.b_log << '\n'
                    << "r0 = " << shape.r0 << '\n'
                    << "patch_radius = " << shape.patch_radius << '\n'
                    << "c_exp = " << shape.c_exp << '\n'
                    << "d_exp = " << shape.d_exp << '\n';
            } else if constexpr (std::is_same_v<T, Tabulated>) {
                for (const auto& p : shape.samples) out << "sample = " << p.r << ' ' << s * p.rho << '\n';
            } else {
                if (s != 1.0) throw std::invalid_argument("write_profile: a rescaled uniform profile has no file form");
            }
        },
        profile.shape());
    out.precision(old_precision);
}

struct TuneSpec {
    TuneProblem problem;
    std::uint64_t seed = 1;
};

inline TuneSpec parse_tune_spec(std::istream& in) {
    const auto kvs = parse_key_values(in);
    TuneSpec spec;
    auto& p = spec.problem;
    p.params.clear();
    p.targets.clear();
    bool have_template = false;
    for (const auto& kv : kvs) {
        const auto line = "line " + std::to_string(kv.line) + ": ";
        if (kv.key == "template") {
            if (kv.value == "continuous") p.kind = ProfileTemplate::Continuous;
            else if (kv.value == "rings") p.kind = ProfileTemplate::Rings;
            else throw ConfigError(line + "template must be 'continuous' or 'rings'");
            have_template = true;
        } else if (kv.key == "radius") {
            p.radius = detail::to_double(kv, kv.value);
        } else if (kv.key == "param") {
            const auto w = detail::words(kv.value);
            if (w.size() != 4) throw ConfigError(line + "param expects 'name lower upper start'");
            p.params.push_back({w[0], detail::to_double(kv, w[1]), detail::to_double(kv, w[2]), detail::to_double(kv, w[3])});
        } else if (kv.key == "target") {
            const auto w = detail::words(kv.value);
            if (w.size() != 2) throw ConfigError(line + "target expects 'm,c value|free'");
            const auto mode = parse_mode(w[0]);
            if (!mode) throw ConfigError(line + "bad mode '" + w[0] + "'");
            p.targets.push_back({*mode, w[1] == "free" ? std::nullopt : std::optional<double>(detail::to_double(kv, w[1]))});
        } else if (kv.key == "base") {
            const auto mode = parse_mode(kv.value);
            if (!mode) throw ConfigError(line + "bad mode '" + kv.value + "'");
            p.base_mode = *mode;
        } else if (kv.key == "base_value") {
            p.base_value = detail::to_double(kv, kv.value);
        } else if (kv.key == "budget") {
            p.budget = static_cast<int>(detail::to_double(kv, kv.value));
        } else if (kv.key == "seed") {
            spec.seed = static_cast<std::uint64_t>(detail::to_double(kv, kv.value));
        } else if (kv.key == "step") {
            p.search.h = detail::to_double(kv, kv.value);
        } else if (kv.key == "initial_step") {
            p.initial_step = detail::to_double(kv, kv.value);
        } else {
            throw ConfigError(line + "unknown key '" + kv.key + "'");
        }
    }
    if (!have_template) throw ConfigError("tune spec: missing 'template'");
    if (p.params.empty()) p.params = p.kind == ProfileTemplate::Continuous ? default_continuous_params() : default_ring_params();
    if (p.targets.empty()) p.targets = default_targets();
    return spec;
}

inline TuneSpec load_tune_spec(const std::string& path) {
    auto in = open_input(path);
    return parse_tune_spec(in);
}

}  // namespace tabla

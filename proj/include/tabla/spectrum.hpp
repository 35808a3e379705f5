#pragma once

// Ratio tables, nearest-integer harmonicity and the flat audibility threshold.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tabla/shooting.hpp"

namespace tabla {

struct RatioEntry {
    ModeId mode;
    double kappa = 0.0;
    double ratio = 0.0;
};

struct RatioTable {
    std::vector<RatioEntry> entries;
    ModeId base_mode;
    double base_value = 1.0;

    const RatioEntry* find(ModeId id) const {
        auto it = std::find_if(entries.begin(), entries.end(), [&](const RatioEntry& e) { return e.mode == id; });
        return it == entries.end() ? nullptr : &*it;
    }
    double ratio(ModeId id) const {
        const auto* e = find(id);
        if (!e) throw std::out_of_range("ratio table has no mode " + to_string(id));
        return e->ratio;
    }
};

/// ratio(mode) = base_value * kappa(mode) / kappa(base_mode), in spectrum order.
inline RatioTable ratio_table(const std::vector<EigenResult>& spectrum, ModeId base_mode, double base_value) {
    if (!(base_value > 0.0)) throw std::invalid_argument("ratio_table: base value must be positive");
    auto base = std::find_if(spectrum.begin(), spectrum.end(),
                             [&](const EigenResult& e) { return e.mode == base_mode; });
    if (base == spectrum.end()) throw std::invalid_argument("ratio_table: base mode " + to_string(base_mode) + " missing");
    RatioTable t;
    t.base_mode = base_mode;
    t.base_value = base_value;
    t.entries.reserve(spectrum.size());
    for (const auto& e : spectrum) {
        const double ratio = (e.mode == base_mode) ? base_value : base_value * (e.kappa / base->kappa);
        t.entries.push_back({e.mode, e.kappa, ratio});
    }
    return t;
}

struct ModeDeviation {
    ModeId mode;
    double ratio = 0.0;
    double deviation = 0.0;  ///< |ratio - nearest integer|, in [0, 0.5]
};

struct HarmonicityReport {
    std::vector<ModeDeviation> modes;
    double rms = 0.0;
    double max_deviation = 0.0;
};

inline double nearest_integer_deviation(double ratio) { return std::abs(ratio - std::round(ratio)); }

/// Deviations from the nearest integer over `modes` (all table entries when empty).
inline HarmonicityReport harmonicity(const RatioTable& table, const std::vector<ModeId>& modes = {},
                                     bool exclude_base = false) {
    HarmonicityReport rep;
    auto add = [&](const RatioEntry& e) {
        if (exclude_base && e.mode == table.base_mode) return;
        rep.modes.push_back({e.mode, e.ratio, nearest_integer_deviation(e.ratio)});
    };
    if (modes.empty()) {
        for (const auto& e : table.entries) add(e);
    } else {
        for (const auto& id : modes) {
            const auto* e = table.find(id);
            if (!e) throw std::invalid_argument("harmonicity: mode " + to_string(id) + " not in table");
            add(*e);
        }
    }
    if (rep.modes.empty()) throw std::invalid_argument("harmonicity: empty mode subset");
    double sum_sq = 0.0;
    for (const auto& d : rep.modes) {
        sum_sq += d.deviation * d.deviation;
        rep.max_deviation = std::max(rep.max_deviation, d.deviation);
    }
    rep.rms = std::sqrt(sum_sq / double(rep.modes.size()));
    return rep;
}

/// Harmonicity of raw ratio values (no mode labels needed).
inline double rms_integer_deviation(const std::vector<double>& ratios) {
    if (ratios.empty()) throw std::invalid_argument("rms_integer_deviation: empty input");
    double s = 0.0;
    for (double r : ratios) s += nearest_integer_deviation(r) * nearest_integer_deviation(r);
    return std::sqrt(s / double(ratios.size()));
}

enum class Audibility { Inaudible, Marginal, Audible };

inline std::string to_string(Audibility a) {
    switch (a) {
        case Audibility::Inaudible: return "inaudible";
        case Audibility::Marginal: return "marginal";
        case Audibility::Audible: return "audible";
    }
    return "?";
}

/// Just-noticeable frequency difference, as a band [lower, upper] in Hz.
struct AudibilityThreshold {
    double lower_hz = 6.0;
    double upper_hz = 7.0;
};

struct AudibilityVerdict {
    double deviation = 0.0;
    double offset_hz = 0.0;
    Audibility verdict = Audibility::Inaudible;
};

inline AudibilityVerdict classify_deviation(double deviation, double fundamental_hz,
                                            AudibilityThreshold threshold = {}) {
    if (!(fundamental_hz > 0.0)) throw std::invalid_argument("audibility: fundamental must be positive");
    if (threshold.lower_hz > threshold.upper_hz) throw std::invalid_argument("audibility: inverted threshold band");
    const double hz = deviation * fundamental_hz;
    Audibility v = Audibility::Inaudible;
    if (hz > threshold.upper_hz)
        v = Audibility::Audible;
    else if (hz >= threshold.lower_hz)
        v = Audibility::Marginal;
    return {deviation, hz, v};
}

struct ModeAudibility {
    ModeId mode;
    AudibilityVerdict verdict;
};

inline std::vector<ModeAudibility> audibility(const HarmonicityReport& report, double fundamental_hz,
                                              AudibilityThreshold threshold = {}) {
    std::vector<ModeAudibility> out;
    out.reserve(report.modes.size());
    for (const auto& d : report.modes) out.push_back({d.mode, classify_deviation(d.deviation, fundamental_hz, threshold)});
    return out;
}

// Reference values for the fourteen tabulated modes, in their published
// row order: bare membrane (normalised to its fundamental), the continuous
// and multi-ring loaded membranes (normalised to (1,0) = 2), and the
// measured tabla (absent for rows 10-14).
struct ReferenceRow {
    int row;
    ModeId mode;
    double unloaded;
    double continuous;
    double rings;
    std::optional<int> tabla;
};

inline const std::array<ReferenceRow, 14>& reference_table() {
    static const std::array<ReferenceRow, 14> rows{{
        {1, {0, 0}, 1.00, 1.07, 1.00, 1},
        {2, {1, 0}, 1.59, 2.00, 1.96, 2},
        {3, {2, 0}, 3.14, 2.98, 2.98, 3},
        {4, {0, 1}, 2.30, 2.99, 3.03, 3},
        {5, {3, 0}, 3.65, 4.00, 4.02, 4},
        {6, {1, 1}, 2.92, 4.00, 3.95, 4},
        {7, {4, 0}, 3.16, 5.01, 5.02, 5},
        {8, {2, 1}, 3.50, 5.01, 5.00, 5},
        {9, {0, 2}, 3.60, 5.02, 4.80, 5},
        {10, {1, 2}, 4.24, 6.02, 5.20, std::nullopt},
        {11, {1, 3}, 5.55, 7.80, 7.03, std::nullopt},
        {12, {2, 2}, 4.85, 7.00, 5.90, std::nullopt},
        {13, {3, 1}, 4.06, 6.04, 6.02, std::nullopt},
        {14, {4, 1}, 4.60, 7.09, 7.05, std::nullopt},
    }};
    return rows;
}

inline std::vector<ModeId> reference_modes() {
    std::vector<ModeId> out;
    for (const auto& row : reference_table()) out.push_back(row.mode);
    return out;
}

/// Rows whose published bare-membrane entry has the wrong leading digit.
inline bool suspected_misprint(int row) { return row == 3 || row == 5; }

}  // namespace tabla

#pragma once

/**
 * @file commands.hpp
 * @brief The work behind each `tabla` subcommand, independent of argument parsing.
 *
 * Every command takes a validated RunConfig plus output and diagnostic
 * streams and returns a process exit code: 0 on success, 1 for a bad
 * configuration (nothing is computed), 2 when the solver fails.
 * Output is locale independent and contains no timestamps, so repeated runs
 * with the same configuration are byte-identical.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tabla/builtin_profiles.hpp"
#include "tabla/config_io.hpp"
#include "tabla/profiles.hpp"
#include "tabla/shooting.hpp"
#include "tabla/specfun.hpp"
#include "tabla/spectrum.hpp"
#include "tabla/tuner.hpp"

namespace tabla {

enum class ExitCode : int { Ok = 0, ConfigError = 1, SolverFailure = 2 };

struct RunConfig {
    std::string command;
    std::string profile = "uniform";
    int m_max = 4;
    int c_max = 3;
    std::string base = "0,0";
    double base_value = 1.0;
    std::string format = "text";
    std::string output;            ///< empty: standard output
    int order = 2;
    double step = 1e-4;
    double r_start = 1e-4;
    double kappa_min = 0.1;
    double kappa_max = 40.0;
    double kappa_step = 0.05;
    std::uint64_t seed = 1;
    // trajectory
    int m = 0;
    double kprime = 0.0;
    // profile-dump
    int count = 101;
    // tune
    std::string tune_spec;
    std::string tune_template = "continuous";
    int budget = 500;
    std::string trace_output;
    // report
    double fundamental_hz = 240.0;
};

namespace cli_detail {

inline std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

inline std::string general(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string pad_left(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

inline std::string pad_right(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

// Writes to the configured file, or to `fallback` when no path is set.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw ConfigError("cannot open '" + path + "' for writing");
            out_ = file_.get();
        }
    }
    std::ostream& stream() { return *out_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* out_;
};

}  // namespace cli_detail

inline SearchConfig search_config(const RunConfig& cfg) {
    SearchConfig s;
    s.kappa_min = cfg.kappa_min;
    s.kappa_max = cfg.kappa_max;
    s.kappa_step = cfg.kappa_step;
    s.h = cfg.step;
    s.r_start = cfg.r_start;
    s.scheme = cfg.order == 4 ? RkScheme::Classic4 : RkScheme::Midpoint;
    return s;
}

inline DensityProfile resolve_profile(const std::string& name_or_path) {
    if (auto p = builtin_profile(name_or_path)) return *p;
    return load_profile(name_or_path);
}

/// Checks every option against the preconditions of the command it feeds.
inline void validate(const RunConfig& cfg) {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    static const std::set<std::string> commands{"spectrum", "trajectory", "report", "tune", "profile-dump"};
    if (!commands.count(cfg.command)) fail("unknown command '" + cfg.command + "'");
    if (cfg.order != 2 && cfg.order != 4) fail("--order must be 2 or 4");
    if (!(cfg.r_start > 0.0 && cfg.r_start < 0.5)) fail("--rstart must be in (0, 0.5)");
    if (!(cfg.step > 0.0) || cfg.step > (1.0 - cfg.r_start) / 100.0) fail("--step must be in (0, (1 - rstart)/100]");
    if (!(cfg.kappa_min > 0.0) || !(cfg.kappa_max > cfg.kappa_min)) fail("scan range needs 0 < kmin < kmax");
    if (!(cfg.kappa_step > 0.0)) fail("--dk must be positive");
    if (cfg.command == "spectrum") {
        if (cfg.m_max < 0 || cfg.m_max > 10) fail("--mmax must be in [0, 10]");
        if (cfg.c_max < 0 || cfg.c_max > 5) fail("--cmax must be in [0, 5]");
        const auto base = parse_mode(cfg.base);
        if (!base) fail("--base: invalid mode '" + cfg.base + "' (expected m,c)");
        if (base->diameters > cfg.m_max || base->circles > cfg.c_max) fail("--base mode lies outside --mmax/--cmax");
        if (!(cfg.base_value > 0.0)) fail("--base-value must be positive");
        if (cfg.format != "text" && cfg.format != "csv" && cfg.format != "json") fail("--format must be text, csv or json");
    }
    if (cfg.command == "trajectory") {
        if (cfg.m < 0 || cfg.m > 10) fail("--m must be in [0, 10]");
        if (!(cfg.kprime > 0.0)) fail("--kprime must be positive");
    }
    if (cfg.command == "profile-dump") {
        if (cfg.count < 2) fail("--count must be at least 2");
        if (cfg.format != "text" && cfg.format != "csv" && cfg.format != "json") fail("--format must be text, csv or json");
    }
    if (cfg.command == "tune") {
        if (cfg.tune_spec.empty() && cfg.tune_template != "continuous" && cfg.tune_template != "rings")
            fail("--template must be continuous or rings");
        if (cfg.budget < 50) fail("--budget must be at least 50");
    }
    if (cfg.command == "report" && !(cfg.fundamental_hz > 0.0)) fail("--fundamental must be positive");
}

/// Tabulated modes first in their published row order, then the rest by kappa.
inline std::vector<EigenResult> table_order(const std::vector<EigenResult>& spectrum) {
    std::vector<EigenResult> out;
    for (const auto& id : reference_modes()) {
        auto it = std::find_if(spectrum.begin(), spectrum.end(), [&](const EigenResult& e) { return e.mode == id; });
        if (it != spectrum.end()) out.push_back(*it);
    }
    for (const auto& e : spectrum) {
        const auto ref = reference_modes();
        if (std::find(ref.begin(), ref.end(), e.mode) == ref.end()) out.push_back(e);
    }
    return out;
}

inline void render_ratio_table(const RatioTable& table, const std::vector<EigenResult>& ordered,
                               const std::string& format, const std::string& profile_name, std::ostream& out) {
    using namespace cli_detail;
    if (format == "csv") {
        out << "m,c,kappa,ratio,deviation\n";
        for (const auto& e : ordered) {
            const double ratio = table.ratio(e.mode);
            out << e.mode.diameters << ',' << e.mode.circles << ',' << fixed(e.kappa, 9) << ',' << fixed(ratio, 9)
                << ',' << fixed(nearest_integer_deviation(ratio), 9) << '\n';
        }
        return;
    }
    if (format == "json") {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& e : ordered) {
            const double ratio = table.ratio(e.mode);
            rows.push_back({{"mode", to_string(e.mode)},
                            {"m", e.mode.diameters},
                            {"c", e.mode.circles},
                            {"kappa", e.kappa},
                            {"ratio", ratio},
                            {"deviation", nearest_integer_deviation(ratio)}});
        }
        out << rows.dump(2) << '\n';
        return;
    }
    out << "# profile: " << profile_name << "   base " << to_string(table.base_mode) << " = "
        << general(table.base_value) << '\n';
    out << pad_right("mode", 8) << pad_left("kappa", 12) << pad_left("ratio", 10) << pad_left("nearest", 9)
        << pad_left("deviation", 11) << '\n';
    for (const auto& e : ordered) {
        const double ratio = table.ratio(e.mode);
        out << pad_right(to_string(e.mode), 8) << pad_left(fixed(e.kappa, 6), 12) << pad_left(fixed(ratio, 4), 10)
            << pad_left(std::to_string(static_cast<long>(std::lround(ratio))), 9)
            << pad_left(fixed(nearest_integer_deviation(ratio), 4), 11) << '\n';
    }
}

namespace cli_detail {

// Runs `body`, mapping failures onto exit codes.
inline ExitCode guarded(std::ostream& err, const std::function<void()>& body) {
    try {
        body();
        return ExitCode::Ok;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return ExitCode::ConfigError;
    } catch (const SolverError& e) {
        err << "solver failure at mode " << to_string(e.mode()) << ": " << e.what() << '\n';
        return ExitCode::SolverFailure;
    } catch (const IntegrationError& e) {
        err << "solver failure: " << e.what() << '\n';
        return ExitCode::SolverFailure;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return ExitCode::ConfigError;
    } catch (const std::exception& e) {
        err << "solver failure: " << e.what() << '\n';
        return ExitCode::SolverFailure;
    }
}

inline ExitCode validated(const RunConfig& cfg, std::ostream& err, const std::function<void()>& body) {
    try {
        validate(cfg);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return ExitCode::ConfigError;
    }
    return guarded(err, body);
}

}  // namespace cli_detail

inline ExitCode cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return cli_detail::validated(cfg, err, [&] {
        const auto profile = resolve_profile(cfg.profile);
        const auto spectrum = eigen_spectrum(profile, cfg.m_max, cfg.c_max, search_config(cfg));
        const auto table = ratio_table(spectrum, *parse_mode(cfg.base), cfg.base_value);
        cli_detail::Sink sink(cfg.output, out);
        render_ratio_table(table, table_order(spectrum), cfg.format, cfg.profile, sink.stream());
    });
}

inline ExitCode cmd_trajectory(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return cli_detail::validated(cfg, err, [&] {
        const auto profile = resolve_profile(cfg.profile);
        const auto traj = mode_trajectory(cfg.m, cfg.kprime, profile, search_config(cfg));
        cli_detail::Sink sink(cfg.output, out);
        auto& o = sink.stream();
        o << "r,R,dR\n";
        for (const auto& s : traj.states)
            o << cli_detail::general(s.r) << ',' << cli_detail::general(s.R) << ',' << cli_detail::general(s.dR) << '\n';
    });
}

inline ExitCode cmd_profile_dump(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return cli_detail::validated(cfg, err, [&] {
        const auto profile = resolve_profile(cfg.profile);
        const auto samples = profile_samples(profile, cfg.count);
        cli_detail::Sink sink(cfg.output, out);
        auto& o = sink.stream();
        if (cfg.format == "json") {
            nlohmann::ordered_json rows = nlohmann::ordered_json::array();
            for (const auto& s : samples) rows.push_back({{"r", s.r}, {"rho", s.rho}});
            o << rows.dump(2) << '\n';
        } else if (cfg.format == "csv") {
            o << "r,rho\n";
            for (const auto& s : samples) o << cli_detail::general(s.r) << ',' << cli_detail::general(s.rho) << '\n';
        } else {
            o << "# profile: " << cfg.profile << " (" << to_string(profile.kind()) << ")\n";
            if (profile.patch_edge_jump() != 0.0)
                o << "# density step at patch edge: " << cli_detail::fixed(profile.patch_edge_jump(), 6) << '\n';
            for (const auto& s : samples)
                o << cli_detail::pad_left(cli_detail::fixed(s.r, 6), 10) << cli_detail::pad_left(cli_detail::fixed(s.rho, 6), 14)
                  << '\n';
        }
    });
}

inline ExitCode cmd_tune(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return cli_detail::validated(cfg, err, [&] {
        TuneProblem problem;
        std::uint64_t seed = cfg.seed;
        if (!cfg.tune_spec.empty()) {
            auto spec = load_tune_spec(cfg.tune_spec);
            problem = std::move(spec.problem);
            seed = spec.seed;
        } else {
            problem = default_tune_problem(cfg.tune_template == "rings" ? ProfileTemplate::Rings
                                                                         : ProfileTemplate::Continuous);
            problem.budget = cfg.budget;
        }
        problem.log = [&err](const std::string& msg) { err << msg << '\n'; };
        const TuneResult result = tune(problem, seed);
        const auto profile = build_profile(problem, result.best);
        const RatioTable table = tuned_ratios(profile, problem);

        if (!cfg.trace_output.empty()) {
            cli_detail::Sink trace(cfg.trace_output, out);
            auto& t = trace.stream();
            t << "evaluation";
            for (const auto& p : problem.params) t << ',' << p.name;
            t << ",objective\n";
            for (const auto& e : result.trace) {
                t << e.evaluation;
                for (double v : e.params) t << ',' << cli_detail::general(v);
                t << ',' << cli_detail::general(e.value) << '\n';
            }
        }

        cli_detail::Sink sink(cfg.output, out);
        auto& o = sink.stream();
        o << "# tuned " << (problem.kind == ProfileTemplate::Rings ? "rings" : "continuous") << " profile, seed "
          << seed << ", " << result.trace.size() << " evaluations"
          << (result.budget_exhausted ? " (budget exhausted)" : "") << '\n';
        o << "# objective: initial " << cli_detail::fixed(result.initial_value, 6) << ", final "
          << cli_detail::fixed(result.best_value, 6) << '\n';
        for (std::size_t i = 0; i < problem.params.size(); ++i)
            o << "# " << problem.params[i].name << " = " << cli_detail::general(result.best[i]) << '\n';
        for (const auto& e : table.entries)
            o << "# ratio " << to_string(e.mode) << " = " << cli_detail::fixed(e.ratio, 4) << '\n';
        write_profile(o, profile);
    });
}

/// Everything the published-table comparison needs, computed once.
struct ReportData {
    std::vector<double> exact;       ///< Bessel-zero ratios, base (0,0) = 1
    RatioTable uniform;              ///< base (0,0) = 1
    RatioTable continuous;           ///< base (1,0) = 2
    RatioTable rings;                ///< base (1,0) = 2
};

inline ReportData compute_report_data(const SearchConfig& search) {
    const auto modes = reference_modes();
    ReportData d;
    const double base = bessel_zero(0, 1);
    for (const auto& id : modes) d.exact.push_back(bessel_zero(id.diameters, id.circles + 1) / base);
    d.uniform = ratio_table(solve_modes(*builtin_profile("uniform"), modes, search), {0, 0}, 1.0);
    d.continuous = ratio_table(solve_modes(*builtin_profile("default-continuous"), modes, search), {1, 0}, 2.0);
    d.rings = ratio_table(solve_modes(*builtin_profile("default-rings"), modes, search), {1, 0}, 2.0);
    return d;
}

inline constexpr double kPublishedAgreement = 0.01;

inline void render_report(const ReportData& d, const RunConfig& cfg, std::ostream& o) {
    using namespace cli_detail;
    const auto& rows = reference_table();
    o << "Frequency-ratio comparison for the fourteen tabulated modes\n";
    o << "integration: RK" << cfg.order << ", step " << general(cfg.step) << ", start radius "
      << general(cfg.r_start) << "\n";
    o << "bare membrane normalised to (0,0) = 1; loaded membranes normalised to (1,0) = 2\n\n";

    o << pad_left("row", 4) << "  " << pad_right("mode", 6) << pad_left("exact", 8) << pad_left("bare", 8)
      << pad_left("pub", 7) << pad_left("|dev|", 7) << "  " << pad_left("cont", 7) << pad_left("pub", 7)
      << pad_left("|dev|", 7) << "  " << pad_left("rings", 7) << pad_left("pub", 7) << pad_left("|dev|", 7)
      << pad_left("tabla", 7) << '\n';
    std::vector<std::string> flags;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        const double bare = d.uniform.ratio(row.mode);
        const double cont = d.continuous.ratio(row.mode);
        const double ring = d.rings.ratio(row.mode);
        const double dev_bare = std::abs(bare - row.unloaded);
        o << pad_left(std::to_string(row.row), 4) << "  " << pad_right(to_string(row.mode), 6)
          << pad_left(fixed(d.exact[i], 3), 8) << pad_left(fixed(bare, 3), 8) << pad_left(fixed(row.unloaded, 2), 7)
          << pad_left(fixed(dev_bare, 3), 7) << "  " << pad_left(fixed(cont, 3), 7)
          << pad_left(fixed(row.continuous, 2), 7) << pad_left(fixed(std::abs(cont - row.continuous), 3), 7) << "  "
          << pad_left(fixed(ring, 3), 7) << pad_left(fixed(row.rings, 2), 7)
          << pad_left(fixed(std::abs(ring - row.rings), 3), 7)
          << pad_left(row.tabla ? std::to_string(*row.tabla) : std::string("-"), 7) << '\n';
        if (dev_bare > kPublishedAgreement) {
            std::string note = "row " + std::to_string(row.row) + " " + to_string(row.mode) + ": published bare ratio " +
                               fixed(row.unloaded, 2) + " vs exact " + fixed(d.exact[i], 3);
            note += suspected_misprint(row.row) ? " (suspected misprint, leading digit)"
                                                : " (differs by " + fixed(dev_bare, 3) + ", beyond " +
                                                      fixed(kPublishedAgreement, 2) + ")";
            flags.push_back(note);
        }
    }

    o << "\nBare-membrane rows disagreeing with the published column by more than "
      << fixed(kPublishedAgreement, 2) << ":\n";
    for (const auto& f : flags) o << "  " << f << '\n';

    const auto modes = reference_modes();
    const std::vector<ModeId> overtones(modes.begin() + 1, modes.begin() + 9);
    const auto h_bare = harmonicity(d.uniform, overtones);
    const auto h_cont = harmonicity(d.continuous, overtones);
    const auto h_ring = harmonicity(d.rings, overtones);
    o << "\nNearest-integer deviation over rows 2-9 (RMS / max):\n";
    o << "  bare        " << fixed(h_bare.rms, 4) << " / " << fixed(h_bare.max_deviation, 4) << '\n';
    o << "  continuous  " << fixed(h_cont.rms, 4) << " / " << fixed(h_cont.max_deviation, 4) << '\n';
    o << "  rings       " << fixed(h_ring.rms, 4) << " / " << fixed(h_ring.max_deviation, 4) << '\n';
    o << "  fundamental (0,0): continuous " << fixed(d.continuous.ratio({0, 0}), 3) << ", rings "
      << fixed(d.rings.ratio({0, 0}), 3) << " (published continuous " << fixed(rows[0].continuous, 2) << ")\n";

    const AudibilityThreshold band;
    o << "\nAudibility at " << general(cfg.fundamental_hz) << " Hz (just-noticeable difference "
      << general(band.lower_hz) << "-" << general(band.upper_hz) << " Hz):\n";
    for (double dev : {0.01, 0.02}) {
        const auto v = classify_deviation(dev, cfg.fundamental_hz, band);
        o << "  " << fixed(dev, 2) << " → " << fixed(v.offset_hz, 1) << " Hz (" << to_string(v.verdict) << ")\n";
    }
    for (const auto& [name, rep] : {std::pair{"continuous", &h_cont}, std::pair{"rings", &h_ring}}) {
        const auto v = classify_deviation(rep->max_deviation, cfg.fundamental_hz, band);
        o << "  " << name << " worst overtone: " << fixed(rep->max_deviation, 4) << " → " << fixed(v.offset_hz, 1)
          << " Hz (" << to_string(v.verdict) << ")\n";
    }

    o << "\nNote: the published prose summarises the continuous loading as 1.07:2:2:3, while its table lists\n"
         "1.07, 2.00, 2.98, 2.99, 4.00 for rows 1-5; the table is taken as authoritative.\n";
}

inline ExitCode cmd_report(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return cli_detail::validated(cfg, err, [&] {
        const ReportData data = compute_report_data(search_config(cfg));
        cli_detail::Sink sink(cfg.output, out);
        render_report(data, cfg, sink.stream());
    });
}

inline ExitCode run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.command == "spectrum") return cmd_spectrum(cfg, out, err);
    if (cfg.command == "trajectory") return cmd_trajectory(cfg, out, err);
    if (cfg.command == "report") return cmd_report(cfg, out, err);
    if (cfg.command == "tune") return cmd_tune(cfg, out, err);
    if (cfg.command == "profile-dump") return cmd_profile_dump(cfg, out, err);
    err << "error: unknown command '" << cfg.command << "'\n";
    return ExitCode::ConfigError;
}

}  // namespace tabla

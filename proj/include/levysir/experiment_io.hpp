/*
   Copyright 2026 The levysir Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

// Experiment configuration, built-in scenarios and file output.
//
// Config text is one "section.key = value" per line; '#' starts a comment;
// vectors and matrices are comma separated (matrices row-major). If
// analysis.preset is given, the preset is loaded first and the remaining keys
// override it, wherever the preset line appears.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "levysir/analytics.hpp"
#include "levysir/errors.hpp"
#include "levysir/levy_model.hpp"
#include "levysir/sde_engine.hpp"

namespace levysir {

struct AnalysisSettings {
    double p = 2.0;
    double regime_tol = default_regime_tolerance;
    VerdictThresholds thresholds;
};

struct ExperimentConfig {
    SimConfig sim;
    std::size_t paths = 1;
    AnalysisSettings analysis;
    std::string out_dir = "out";
    std::string preset;
};

/// Shortest text that reads back to the same double (17 significant digits).
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_real(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::optional<std::uint64_t> parse_unsigned(std::string_view s) {
    s = trim(s);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::optional<bool> parse_bool(std::string_view s) {
    s = trim(s);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    return std::nullopt;
}

inline std::optional<std::vector<double>> parse_list(std::string_view s, std::size_t expected) {
    std::vector<double> out;
    while (true) {
        auto comma = s.find(',');
        auto v = parse_real(s.substr(0, comma));
        if (!v) return std::nullopt;
        out.push_back(*v);
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    if (out.size() != expected) return std::nullopt;
    return out;
}

template <class Vec>
std::string format_list(const Vec& v, int n, const char* sep = ", ") {
    std::string out;
    for (int i = 0; i < n; ++i) {
        if (i) out += sep;
        out += format_number(v[i]);
    }
    return out;
}

}  // namespace detail

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"fig2_extinction", "fig4_persistence", "fig6_matched_a02",
                                                "fig6_matched_a09", "deterministic_ode"};
    return names;
}

inline std::string preset_description(const std::string& name) {
    if (name == "fig2_extinction") return "alpha = 0.7 jump noise drives R0_bar below 1: extinction";
    if (name == "fig4_persistence") return "alpha = 0.2, otherwise as fig2_extinction: persistence";
    if (name == "fig6_matched_a02") return "alpha = 0.2 member of the variance-matched pair: persistence";
    if (name == "fig6_matched_a09") return "alpha = 0.9 with variance-matched loadings: extinction";
    if (name == "deterministic_ode") return "all noise off; converges to the endemic equilibrium";
    return "";
}

inline ExperimentConfig preset(const std::string& name) {
    ExperimentConfig cfg;
    cfg.preset = name;
    cfg.paths = 200;
    cfg.sim.model = {8.0, 5.3, 4.8, 0.5, 1.0};
    Matrix3 rho;
    rho << 4.0, 3.2, 3.0, 3.2, 4.0, 3.84, 3.0, 3.84, 4.69;
    cfg.sim.noise.covariance = 1e-2 * rho;
    cfg.sim.noise.sigma = Vector3(0.2, 0.8, 0.5);
    cfg.sim.noise.jumps = {0.7, 2.8, 1.2, 0.0, 1.2, true};
    cfg.sim.initial = Vector3(1.6, 0.4, 0.04);
    cfg.sim.horizon = 500.0;
    cfg.sim.dt = 1e-3;
    cfg.sim.floor = 1e-12;
    cfg.sim.record_every = 100;
    cfg.analysis.p = 2.0;

    // The series cut is chosen per index so that a 500-unit path holds about
    // 1e5 to 1e6 jumps; the discarded jumps carry a variance far below the
    // Monte Carlo noise.
    if (name == "fig2_extinction") {
        cfg.sim.trunc_eps = 1e-4;
        cfg.sim.seed = 2002;
    } else if (name == "fig4_persistence") {
        cfg.sim.noise.jumps.alpha = 0.2;
        cfg.sim.trunc_eps = 1e-6;
        cfg.sim.seed = 4004;
    } else if (name == "fig6_matched_a02") {
        cfg.sim.noise.jumps.alpha = 0.2;
        cfg.sim.trunc_eps = 1e-6;
        cfg.sim.seed = 6002;
    } else if (name == "fig6_matched_a09") {
        auto source = cfg.sim.noise.jumps;
        source.alpha = 0.2;
        cfg.sim.noise.sigma = variance_matched_sigma(Vector3(0.2, 0.8, 0.5), source, 0.9);
        cfg.sim.noise.jumps.alpha = 0.9;
        cfg.sim.trunc_eps = 1e-3;
        cfg.sim.seed = 6009;
    } else if (name == "deterministic_ode") {
        cfg.sim.noise.covariance.setZero();
        cfg.sim.noise.sigma.setZero();
        cfg.sim.seed = 1;
        cfg.paths = 1;
    } else {
        throw ConfigError({"UnknownPreset: " + name});
    }
    return cfg;
}

namespace detail {

struct ConfigField {
    std::function<std::optional<std::string>(ExperimentConfig&, std::string_view)> set;  // returns type error
    std::function<std::string(const ExperimentConfig&)> get;
};

inline std::optional<std::string> expected(const char* what, std::string_view got) {
    return std::string("expected ") + what + ", got '" + std::string(got) + "'";
}

template <class Access>
ConfigField real(Access access) {
    return {[access](ExperimentConfig& c, std::string_view v) -> std::optional<std::string> {
                auto x = parse_real(v);
                if (!x) return expected("real", v);
                access(c) = *x;
                return std::nullopt;
            },
            [access](const ExperimentConfig& c) { return format_number(access(const_cast<ExperimentConfig&>(c))); }};
}

template <class Access>
ConfigField unsigned_integer(Access access) {
    return {[access](ExperimentConfig& c, std::string_view v) -> std::optional<std::string> {
                auto x = parse_unsigned(v);
                if (!x) return expected("unsigned integer", v);
                access(c) = static_cast<std::remove_reference_t<decltype(access(c))>>(*x);
                return std::nullopt;
            },
            [access](const ExperimentConfig& c) {
                return std::to_string(access(const_cast<ExperimentConfig&>(c)));
            }};
}

template <class Access>
ConfigField boolean(Access access) {
    return {[access](ExperimentConfig& c, std::string_view v) -> std::optional<std::string> {
                auto x = parse_bool(v);
                if (!x) return expected("true or false", v);
                access(c) = *x;
                return std::nullopt;
            },
            [access](const ExperimentConfig& c) {
                return std::string(access(const_cast<ExperimentConfig&>(c)) ? "true" : "false");
            }};
}

template <class Access>
ConfigField text(Access access) {
    return {[access](ExperimentConfig& c, std::string_view v) -> std::optional<std::string> {
                access(c) = std::string(trim(v));
                return std::nullopt;
            },
            [access](const ExperimentConfig& c) { return access(const_cast<ExperimentConfig&>(c)); }};
}

template <class Access>
ConfigField vector3(Access access) {
    return {[access](ExperimentConfig& c, std::string_view v) -> std::optional<std::string> {
                auto x = parse_list(v, 3);
                if (!x) return expected("3 comma-separated reals", v);
                access(c) = Vector3((*x)[0], (*x)[1], (*x)[2]);
                return std::nullopt;
            },
            [access](const ExperimentConfig& c) {
                return format_list(access(const_cast<ExperimentConfig&>(c)), 3);
            }};
}

inline ConfigField matrix3() {
    return {[](ExperimentConfig& c, std::string_view v) -> std::optional<std::string> {
                auto x = parse_list(v, 9);
                if (!x) return expected("9 comma-separated reals (row-major 3x3)", v);
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) c.sim.noise.covariance(i, j) = (*x)[3 * i + j];
                return std::nullopt;
            },
            [](const ExperimentConfig& c) {
                std::vector<double> flat;
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) flat.push_back(c.sim.noise.covariance(i, j));
                return format_list(flat, 9);
            }};
}

// Ordered key table; also the serialization order.
inline const std::vector<std::pair<std::string, ConfigField>>& config_fields() {
    using C = ExperimentConfig;
    static const std::vector<std::pair<std::string, ConfigField>> fields{
        {"analysis.preset", text([](C& c) -> std::string& { return c.preset; })},
        {"model.influx", real([](C& c) -> double& { return c.sim.model.influx; })},
        {"model.mortality", real([](C& c) -> double& { return c.sim.model.mortality; })},
        {"model.transmission", real([](C& c) -> double& { return c.sim.model.transmission; })},
        {"model.disease_death", real([](C& c) -> double& { return c.sim.model.disease_death; })},
        {"model.recovery", real([](C& c) -> double& { return c.sim.model.recovery; })},
        {"noise.rho", matrix3()},
        {"noise.sigma", vector3([](C& c) -> Vector3& { return c.sim.noise.sigma; })},
        {"jumps.alpha", real([](C& c) -> double& { return c.sim.noise.jumps.alpha; })},
        {"jumps.k_plus", real([](C& c) -> double& { return c.sim.noise.jumps.k_plus; })},
        {"jumps.lambda_plus", real([](C& c) -> double& { return c.sim.noise.jumps.lambda_plus; })},
        {"jumps.k_minus", real([](C& c) -> double& { return c.sim.noise.jumps.k_minus; })},
        {"jumps.lambda_minus", real([](C& c) -> double& { return c.sim.noise.jumps.lambda_minus; })},
        {"jumps.compensated", boolean([](C& c) -> bool& { return c.sim.noise.jumps.compensated; })},
        {"jumps.trunc_eps", real([](C& c) -> double& { return c.sim.trunc_eps; })},
        {"sim.initial", vector3([](C& c) -> Vector3& { return c.sim.initial; })},
        {"sim.t_end", real([](C& c) -> double& { return c.sim.horizon; })},
        {"sim.dt", real([](C& c) -> double& { return c.sim.dt; })},
        {"sim.floor", real([](C& c) -> double& { return c.sim.floor; })},
        {"sim.seed", unsigned_integer([](C& c) -> std::uint64_t& { return c.sim.seed; })},
        {"sim.paths", unsigned_integer([](C& c) -> std::size_t& { return c.paths; })},
        {"sim.record_every", unsigned_integer([](C& c) -> std::size_t& { return c.sim.record_every; })},
        {"sim.allow_two_sided", boolean([](C& c) -> bool& { return c.sim.allow_two_sided; })},
        {"analysis.p", real([](C& c) -> double& { return c.analysis.p; })},
        {"analysis.regime_tol", real([](C& c) -> double& { return c.analysis.regime_tol; })},
        {"analysis.extinction_level", real([](C& c) -> double& { return c.analysis.thresholds.extinction_level; })},
        {"analysis.window_fraction", real([](C& c) -> double& { return c.analysis.thresholds.window_fraction; })},
        {"analysis.persistence_level",
         real([](C& c) -> double& { return c.analysis.thresholds.persistence_level; })},
        {"analysis.quorum", real([](C& c) -> double& { return c.analysis.thresholds.quorum; })},
        {"analysis.trailing_fraction",
         real([](C& c) -> double& { return c.analysis.thresholds.trailing_fraction; })},
        {"analysis.out_dir", text([](C& c) -> std::string& { return c.out_dir; })},
    };
    return fields;
}

inline const ConfigField* find_field(std::string_view key) {
    for (const auto& [name, field] : config_fields())
        if (name == key) return &field;
    return nullptr;
}

}  // namespace detail

/// Invariant violations of a complete config, each prefixed by its key path.
inline std::vector<std::string> config_violations(const ExperimentConfig& c) {
    std::vector<std::string> out;
    auto bad = [&](const std::string& key, const std::string& msg) { out.push_back("InvariantViolation: " + key + ": " + msg); };
    const auto& m = c.sim.model;
    if (!(m.influx > 0.0)) bad("model.influx", "must be > 0");
    if (!(m.mortality > 0.0)) bad("model.mortality", "must be > 0");
    if (!(m.transmission > 0.0)) bad("model.transmission", "must be > 0");
    if (!(m.disease_death > 0.0)) bad("model.disease_death", "must be > 0");
    if (!(m.recovery > 0.0)) bad("model.recovery", "must be > 0");

    const auto& n = c.sim.noise;
    for (const auto& v : n.violations()) {
        if (v.rfind("jumps: ", 0) == 0) continue;
        bad(v.find("sigma") != std::string::npos ? "noise.sigma" : "noise.rho", v);
    }
    const auto& ts = n.jumps;
    if (!(ts.alpha > 0.0 && ts.alpha < 2.0)) bad("jumps.alpha", "must lie in (0, 2)");
    if (ts.alpha == 1.0) bad("jumps.alpha", "alpha = 1 is excluded");
    if (!(ts.k_plus >= 0.0)) bad("jumps.k_plus", "must be >= 0");
    if (!(ts.k_minus >= 0.0)) bad("jumps.k_minus", "must be >= 0");
    if (!(ts.k_plus + ts.k_minus > 0.0)) bad("jumps.k_plus", "k_plus + k_minus must be > 0");
    if (ts.k_plus > 0.0 && !(ts.lambda_plus > 0.0)) bad("jumps.lambda_plus", "must be > 0");
    if (ts.k_minus > 0.0 && !(ts.lambda_minus > 0.0)) bad("jumps.lambda_minus", "must be > 0");
    if (!(c.sim.trunc_eps > 0.0)) bad("jumps.trunc_eps", "must be > 0");
    if (n.has_jumps() && !ts.one_sided_positive() && !c.sim.allow_two_sided)
        bad("jumps.k_minus", "two-sided jumps with nonzero loadings violate sigma_i z > -1");

    if (!(c.sim.horizon > 0.0)) bad("sim.t_end", "must be > 0");
    if (!(c.sim.dt > 0.0)) bad("sim.dt", "must be > 0");
    if (c.sim.horizon > 0.0 && c.sim.dt > 0.0) {
        double steps = c.sim.horizon / c.sim.dt;
        if (std::abs(steps - std::round(steps)) > 1e-6 * std::max(1.0, steps) || std::round(steps) < 1.0)
            bad("sim.dt", "t_end / dt must be a positive integer");
    }
    if (!(c.sim.initial.minCoeff() > 0.0)) bad("sim.initial", "must be strictly positive");
    if (!(c.sim.floor >= 0.0 && c.sim.floor < 1.0)) bad("sim.floor", "must lie in [0, 1)");
    if (c.sim.record_every < 1) bad("sim.record_every", "must be >= 1");
    if (c.paths < 1) bad("sim.paths", "must be >= 1");
    if (!(c.analysis.p > 1.0)) bad("analysis.p", "must be > 1");
    if (!(c.analysis.regime_tol >= 0.0)) bad("analysis.regime_tol", "must be >= 0");
    const auto& th = c.analysis.thresholds;
    if (!(th.extinction_level > 0.0)) bad("analysis.extinction_level", "must be > 0");
    if (!(th.window_fraction >= 0.0 && th.window_fraction <= 1.0)) bad("analysis.window_fraction", "must lie in [0, 1]");
    if (!(th.persistence_level >= 0.0)) bad("analysis.persistence_level", "must be >= 0");
    if (!(th.quorum > 0.0 && th.quorum <= 1.0)) bad("analysis.quorum", "must lie in (0, 1]");
    if (!(th.trailing_fraction > 0.0 && th.trailing_fraction <= 1.0))
        bad("analysis.trailing_fraction", "must lie in (0, 1]");
    return out;
}

/// Parses and validates config text. All problems are reported together.
inline ExperimentConfig parse_config(std::string_view text) {
    struct Entry {
        int line;
        std::string key;
        std::string value;
    };
    std::vector<Entry> entries;
    std::vector<std::string> problems;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    for (std::string raw; std::getline(in, raw);) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            problems.push_back("SyntaxError: line " + std::to_string(line_no) + ": expected 'section.key = value'");
            continue;
        }
        entries.push_back({line_no, std::string(detail::trim(line.substr(0, eq))),
                           std::string(detail::trim(line.substr(eq + 1)))});
    }

    ExperimentConfig cfg;
    for (const auto& e : entries) {
        if (e.key != "analysis.preset") continue;
        try {
            cfg = preset(e.value);
        } catch (const ConfigError& err) {
            problems.push_back(err.problems().front());
        }
    }
    for (const auto& e : entries) {
        if (e.key == "analysis.preset") continue;
        const auto* field = detail::find_field(e.key);
        if (!field) {
            problems.push_back("UnknownKey: " + e.key + " (line " + std::to_string(e.line) + ")");
            continue;
        }
        if (auto err = field->set(cfg, e.value)) problems.push_back("TypeMismatch: " + e.key + ": " + *err);
    }
    auto v = config_violations(cfg);
    problems.insert(problems.end(), v.begin(), v.end());
    if (!problems.empty()) throw ConfigError(std::move(problems));
    return cfg;
}

/// Inverse of parse_config: every field, 17 significant digits.
inline std::string format_config(const ExperimentConfig& cfg) {
    std::string out;
    for (const auto& [key, field] : detail::config_fields()) {
        if (key == "analysis.preset" && cfg.preset.empty()) continue;
        out += key + " = " + field.get(cfg) + "\n";
    }
    return out;
}

inline bool same_config(const ExperimentConfig& a, const ExperimentConfig& b) {
    return format_config(a) == format_config(b);
}

// ---------------------------------------------------------------------------
// Output files

inline void write_path_csv(std::ostream& os, const SirPath& path) {
    os << "t,S,I,R,avgS,avgI,avgR\n";
    for (std::size_t k = 0; k < path.size(); ++k) {
        os << format_number(path.t[k]) << ',' << format_number(path.S[k]) << ',' << format_number(path.I[k]) << ','
           << format_number(path.R[k]) << ',' << format_number(path.avg_S[k]) << ','
           << format_number(path.avg_I[k]) << ',' << format_number(path.avg_R[k]) << '\n';
    }
}

inline SirPath read_path_csv(std::istream& is) {
    SirPath path;
    std::string line;
    if (!std::getline(is, line) || detail::trim(line) != "t,S,I,R,avgS,avgI,avgR")
        throw std::runtime_error("path CSV: unexpected header");
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (detail::trim(line).empty()) continue;
        auto values = detail::parse_list(line, 7);
        if (!values) throw std::runtime_error("path CSV: malformed row " + std::to_string(row));
        auto& v = *values;
        path.t.push_back(v[0]);
        path.S.push_back(v[1]);
        path.I.push_back(v[2]);
        path.R.push_back(v[3]);
        path.avg_S.push_back(v[4]);
        path.avg_I.push_back(v[5]);
        path.avg_R.push_back(v[6]);
    }
    if (path.t.size() >= 2) path.dt = path.t[1] - path.t[0];
    return path;
}

inline std::string format_report(const ThresholdReport& r) {
    std::ostringstream os;
    os << "r0: " << format_number(r.r0) << '\n'
       << "beta_1: " << format_number(r.beta_noise[0]) << '\n'
       << "beta_2: " << format_number(r.beta_noise[1]) << '\n'
       << "beta_3: " << format_number(r.beta_noise[2]) << '\n'
       << "r0_bar: " << format_number(r.r0_bar) << '\n'
       << "p: " << format_number(r.p) << '\n'
       << "lambda_p: " << (r.lambda_p ? format_number(*r.lambda_p) : std::string("undefined")) << '\n'
       << "rho_inf_norm: " << format_number(r.rho_inf_norm) << '\n';
    for (const auto& h : r.hypotheses.checks) os << "hypothesis." << h.name << ": " << to_string(h.status) << '\n';
    os << "regime: " << to_string(r.regime) << '\n'
       << "threshold_regime: " << to_string(r.threshold_regime) << '\n';
    if (!r.reason.empty()) os << "reason: " << r.reason << '\n';
    os << "disease_free_equilibrium: " << detail::format_list(r.equilibria.disease_free, 3) << '\n';
    if (r.equilibria.endemic) os << "endemic_equilibrium: " << detail::format_list(*r.equilibria.endemic, 3) << '\n';
    if (r.predicted_limits) os << "predicted_limits: " << detail::format_list(*r.predicted_limits, 3) << '\n';
    return os.str();
}

inline std::string format_verdict(const RegimeVerdict& v) {
    std::ostringstream os;
    os << "verdict: " << to_string(v.detected) << '\n'
       << "verdict_paths: " << v.paths << '\n'
       << "extinct_fraction: " << format_number(v.extinct_fraction) << '\n'
       << "extinction_time: " << (v.extinction_time ? format_number(*v.extinction_time) : std::string("none")) << '\n'
       << "empirical_limits: " << detail::format_list(v.empirical_limits, 3) << '\n'
       << "trailing_mean_I: " << format_number(v.trailing_mean_I) << '\n';
    if (v.predicted_limits) {
        os << "predicted_limits: " << detail::format_list(*v.predicted_limits, 3) << '\n'
           << "deviation: " << detail::format_list(v.deviation, 3) << '\n';
    }
    return os.str();
}

inline std::string format_summary(const EnsembleSummary& e, const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "preset: " << (cfg.preset.empty() ? "custom" : cfg.preset) << '\n'
       << "paths: " << e.size() << '\n'
       << "seed: " << e.seed << '\n'
       << "horizon: " << format_number(cfg.sim.horizon) << '\n'
       << "dt: " << format_number(cfg.sim.dt) << '\n'
       << "mean_terminal: " << detail::format_list(e.mean_terminal, 3) << '\n'
       << "mean_time_average: " << detail::format_list(e.mean_average, 3) << '\n'
       << "terminal_q05: " << detail::format_list(e.terminal_quantiles.q05, 3) << '\n'
       << "terminal_q50: " << detail::format_list(e.terminal_quantiles.q50, 3) << '\n'
       << "terminal_q95: " << detail::format_list(e.terminal_quantiles.q95, 3) << '\n'
       << "time_average_q05: " << detail::format_list(e.average_quantiles.q05, 3) << '\n'
       << "time_average_q50: " << detail::format_list(e.average_quantiles.q50, 3) << '\n'
       << "time_average_q95: " << detail::format_list(e.average_quantiles.q95, 3) << '\n'
       << "floor_fraction: " << format_number(e.floor_fraction) << '\n';
    for (const auto& c : e.moment_curves)
        os << "moment_" << format_number(c.order) << "_final: " << format_number(c.mean.back()) << '\n';
    return os.str();
}

struct EmittedFiles {
    std::vector<std::filesystem::path> path_csvs;
    std::filesystem::path summary;
    std::filesystem::path report;
    std::vector<std::filesystem::path> plot_data;
};

struct EmitOptions {
    std::size_t max_path_files = 20;
};

namespace detail {

inline std::ofstream open_output(const std::filesystem::path& file) {
    std::ofstream os(file);
    if (!os) throw std::runtime_error("cannot open " + file.string() + " for writing");
    return os;
}

inline void check_written(std::ofstream& os, const std::filesystem::path& file) {
    os.flush();
    if (!os) throw std::runtime_error("failed writing " + file.string());
}

}  // namespace detail

/// Writes path CSVs, the ensemble summary (with the verdict), the threshold
/// report and two plot-data files: a sample path and the ensemble-mean running
/// averages alongside the predicted long-run levels.
inline EmittedFiles emit_outputs(const std::filesystem::path& dir, const ExperimentConfig& cfg,
                                 const EnsembleSummary& ens, const RegimeVerdict& verdict,
                                 const ThresholdReport& report, const EmitOptions& opts = {}) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

    EmittedFiles files;
    for (std::size_t i = 0; i < ens.size() && i < opts.max_path_files; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "path_%03zu.csv", i);
        auto file = dir / name;
        auto os = detail::open_output(file);
        write_path_csv(os, ens.paths[i]);
        detail::check_written(os, file);
        files.path_csvs.push_back(file);
    }

    files.summary = dir / "summary.txt";
    {
        auto os = detail::open_output(files.summary);
        os << format_summary(ens, cfg) << format_verdict(verdict);
        detail::check_written(os, files.summary);
    }
    files.report = dir / "report.txt";
    {
        auto os = detail::open_output(files.report);
        os << format_report(report);
        detail::check_written(os, files.report);
    }

    const std::string stem = "plot_" + (cfg.preset.empty() ? std::string("custom") : cfg.preset);
    auto states = dir / (stem + "_states.csv");
    {
        auto os = detail::open_output(states);
        const auto& p = ens.paths.front();
        os << "t,S,I,R\n";
        for (std::size_t k = 0; k < p.size(); ++k)
            os << format_number(p.t[k]) << ',' << format_number(p.S[k]) << ',' << format_number(p.I[k]) << ','
               << format_number(p.R[k]) << '\n';
        detail::check_written(os, states);
    }
    auto averages = dir / (stem + "_averages.csv");
    {
        auto os = detail::open_output(averages);
        Vector3 ref = report.predicted_limits.value_or(
            Vector3::Constant(std::numeric_limits<double>::quiet_NaN()));
        os << "t,avgS,avgI,avgR,refS,refI,refR\n";
        for (std::size_t k = 0; k < ens.times.size(); ++k) {
            Vector3 mean = Vector3::Zero();
            for (const auto& p : ens.paths) mean += Vector3(p.avg_S[k], p.avg_I[k], p.avg_R[k]);
            mean /= static_cast<double>(ens.size());
            os << format_number(ens.times[k]) << ',' << detail::format_list(mean, 3, ",") << ','
               << detail::format_list(ref, 3, ",") << '\n';
        }
        detail::check_written(os, averages);
    }
    files.plot_data = {states, averages};
    return files;
}

}  // namespace levysir

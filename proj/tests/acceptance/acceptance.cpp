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


// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// The Monte Carlo criteria run the shipped presets at full scale (200 paths,
// T = 500, dt = 1e-3), which takes a few minutes on one core.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "levysir/levysir.hpp"

namespace {

using namespace levysir;
using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int number, const std::string& title, const std::function<Outcome()>& body, double budget_s = 0.0) {
    auto start = Clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (budget_s > 0.0 && seconds >= budget_s) {
        out.pass = false;
        out.detail += "; over time budget";
    }
    if (!out.pass) ++failures;
    std::printf("[%s] criterion %d: %s | %s | %.2fs\n", out.pass ? "PASS" : "FAIL", number, title.c_str(),
                out.detail.c_str(), seconds);
    std::fflush(stdout);
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

bool within_rel(double value, double target, double rel) { return std::abs(value - target) <= rel * std::abs(target); }

struct PresetRun {
    ExperimentConfig cfg;
    ThresholdReport report;
    EnsembleSummary ensemble;
    RegimeVerdict verdict;
    double seconds = 0.0;
};

std::map<std::string, PresetRun>& runs() {
    static std::map<std::string, PresetRun> cache;
    return cache;
}

const PresetRun& run_preset(const std::string& name) {
    auto& cache = runs();
    if (auto it = cache.find(name); it != cache.end()) return it->second;
    PresetRun r;
    auto start = Clock::now();
    r.cfg = preset(name);
    r.report = classify_regime(r.cfg.sim.model, r.cfg.sim.noise, r.cfg.analysis.p, r.cfg.analysis.regime_tol);
    r.ensemble = run_ensemble(r.cfg.sim, r.cfg.paths);
    r.verdict = verdict(r.ensemble, r.report, r.cfg.analysis.thresholds);
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return cache.emplace(name, std::move(r)).first->second;
}

Outcome thresholds() {
    auto m = preset("fig2_extinction").sim.model;
    double r0 = basic_reproduction_number(m);
    auto endemic = deterministic_equilibria(m).endemic.value_or(Vector3::Zero());
    auto r0_bar = [](const char* name) {
        auto cfg = preset(name);
        return modified_reproduction_number(cfg.sim.model, cfg.sim.noise);
    };
    double a07 = r0_bar("fig2_extinction");
    double a02 = r0_bar("fig4_persistence");
    double a09 = r0_bar("fig6_matched_a09");
    bool ok = std::abs(r0 - 1.0655) <= 1e-3 && std::abs(endemic[0] - 1.417) <= 1e-3 &&
              std::abs(endemic[1] - 0.0723) <= 1e-3 && std::abs(endemic[2] - 0.0136) <= 1e-3;
    bool ok_a07 = std::abs(a07 - 0.9976) <= 5e-3;
    bool ok_a02 = std::abs(a02 - 1.00767) <= 5e-3;
    bool ok_a09 = std::abs(a09 - 0.99) <= 5e-3;
    return {ok && ok_a07 && ok_a02 && ok_a09,
            fmt("R0=%.6f E*=(%.4f, %.5f, %.5f) R0_bar: a0.7=%.6f%s a0.2=%.6f%s a0.9=%.6f%s (target 0.99 +- 5e-3)", r0,
                endemic[0], endemic[1], endemic[2], a07, ok_a07 ? "" : "[x]", a02, ok_a02 ? "" : "[x]", a09,
                ok_a09 ? "" : "[x]")};
}

Outcome variance_matching() {
    TemperedStableParams source{0.2, 2.8, 1.2, 0.0, 1.2, true};
    auto s = variance_matched_sigma(Vector3(0.2, 0.8, 0.5), source, 0.9);
    bool ok = std::abs(s[0] - 0.1857) <= 1e-3 && std::abs(s[1] - 0.7426) <= 1e-3 && std::abs(s[2] - 0.4641) <= 1e-3;
    return {ok, fmt("sigma=(%.6f, %.6f, %.6f)", s[0], s[1], s[2])};
}

Outcome sampler_moments() {
    TemperedStableParams ts{0.7, 2.8, 1.2, 0.0, 1.2, true};
    const int trains = 100000;
    SeriesSampler sampler(ts, 1.0, 1e-3);
    std::vector<double> y(trains);
    for (int i = 0; i < trains; ++i) {
        RngStream rng(20260, static_cast<std::uint64_t>(i));
        y[i] = sampler.sample(rng).terminal_value();
    }
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= trains;
    double m2 = 0.0, m4 = 0.0;
    for (double v : y) {
        double d = v - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    double var = m2 / (trains - 1);
    m4 /= trains;
    double se_mean = std::sqrt(var / trains);
    double se_var = std::sqrt((m4 - var * var) / trains);
    bool ok_var = std::abs(var - 1.9826) <= 3.0 * se_var;
    bool ok_mean = std::abs(mean) <= 3.0 * se_mean;
    return {ok_var && ok_mean, fmt("var=%.5f (se %.5f, target 1.9826) mean=%.5f (se %.5f)", var, se_var, mean, se_mean)};
}

Outcome quadrature_vs_closed_form() {
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        double alpha = 0.05 + 1.9 * u01(gen);
        if (std::abs(alpha - 1.0) < 1e-3) alpha = 1.01;
        double k = 0.1 + 5.0 * u01(gen);
        double lambda = 0.2 + 4.0 * u01(gen);
        double p = i % 2 == 0 ? std::max(2.0, alpha + 0.1) : alpha + 0.1 + 3.0 * u01(gen);
        TemperedStableParams ts{alpha, k, lambda, 0.0, 1.0, true};
        double closed = k * gamma_fn(p - alpha) / std::pow(lambda, p - alpha);
        double quad = levy_integral([p](double z) { return std::pow(z, p); }, ts).value;
        worst = std::max(worst, std::abs(quad / closed - 1.0));
    }
    return {worst <= 1e-6, fmt("50 draws, worst relative gap %.3e", worst)};
}

int extinct_at_horizon(const EnsembleSummary& e, double level) {
    int n = 0;
    for (const auto& p : e.paths) n += p.I.back() < level ? 1 : 0;
    return n;
}

Outcome extinction_experiment() {
    const auto& r = run_preset("fig2_extinction");
    const auto& e = r.ensemble;
    double share = static_cast<double>(extinct_at_horizon(e, 1e-3)) / static_cast<double>(e.size());
    bool ok_share = share >= 0.95;
    bool ok_s = within_rel(e.mean_average[0], 1.5094, 0.05);
    bool ok_r = e.mean_average[2] < 5e-3;
    return {ok_share && ok_s && ok_r,
            fmt("%zu paths: share I_T<1e-3 = %.3f%s (need >= 0.95), <S>_T=%.5f%s, <R>_T=%.5f%s, ensemble took %.0fs",
                e.size(), share, ok_share ? "" : "[x]", e.mean_average[0], ok_s ? "" : "[x]", e.mean_average[2],
                ok_r ? "" : "[x]", r.seconds)};
}

Outcome persistence_experiment() {
    const auto& r = run_preset("fig4_persistence");
    const Vector3 target(1.49, 0.0085, 0.0016), rel(0.05, 0.30, 0.30);
    const auto& avg = r.ensemble.mean_average;
    std::string marks[3];
    bool ok = true;
    for (int c = 0; c < 3; ++c) {
        bool good = within_rel(avg[c], target[c], rel[c]);
        marks[c] = good ? "" : "[x]";
        ok = ok && good;
    }
    return {ok, fmt("%zu paths: <S>_T=%.5f%s <I>_T=%.5f%s <R>_T=%.5f%s vs (1.49, 0.0085, 0.0016) +- (5%%, 30%%, 30%%)",
                    r.ensemble.size(), avg[0], marks[0].c_str(), avg[1], marks[1].c_str(), avg[2], marks[2].c_str())};
}

Outcome regime_flip() {
    const auto& low = run_preset("fig6_matched_a02");
    const auto& high = run_preset("fig6_matched_a09");
    bool ok = low.report.regime == Regime::persistence && low.verdict.detected == Detected::persistent &&
              high.report.regime == Regime::extinction && high.verdict.detected == Detected::extinct;
    return {ok, fmt("alpha 0.2: R0_bar=%.5f %s, ensemble %s (extinct share %.3f); alpha 0.9: R0_bar=%.5f %s, ensemble "
                    "%s (extinct share %.3f)",
                    low.report.r0_bar, to_string(low.report.regime), to_string(low.verdict.detected),
                    low.verdict.extinct_fraction, high.report.r0_bar, to_string(high.report.regime),
                    to_string(high.verdict.detected), high.verdict.extinct_fraction)};
}

Outcome property_suites() {
    std::vector<std::string> failed;
    double worst_driver = 0.0, worst_floor = 0.0, worst_growth = 0.0;
    for (const auto& name : preset_names()) {
        const auto& r = run_preset(name);
        for (const auto& p : r.ensemble.paths) worst_driver = std::max(worst_driver, std::abs(p.driver_applied - p.driver_total));
        worst_floor = std::max(worst_floor, r.ensemble.floor_fraction);
        worst_growth = std::max(worst_growth, max_growth_ratio(r.ensemble));
    }
    if (!(worst_driver <= 1e-12)) failed.push_back("driver conservation");
    if (!(worst_floor < 0.01)) failed.push_back("floor activations");
    if (!(worst_growth < 0.01)) failed.push_back("sub-linear growth");

    const auto& ext = run_preset("fig2_extinction");
    auto again = simulate_path(ext.cfg.sim, 0);
    const auto& first = ext.ensemble.paths.front();
    bool reproducible = again.t == first.t && again.S == first.S && again.I == first.I && again.R == first.R &&
                        again.avg_S == first.avg_S && again.avg_I == first.avg_I && again.avg_R == first.avg_R;
    if (!reproducible) failed.push_back("reproducibility");

    auto trend = moment_trend(ext.ensemble, 2.5, 100.0, 500.0);
    if (!(trend.slope <= 3.0 * trend.standard_error)) failed.push_back("moment-bound trend");

    bool round_trip = true;
    for (const auto& name : preset_names()) {
        auto cfg = preset(name);
        round_trip = round_trip && same_config(parse_config(format_config(cfg)), cfg);
    }
    if (!round_trip) failed.push_back("config round trip");

    std::string failed_list;
    for (const auto& f : failed) failed_list += (failed_list.empty() ? "" : ", ") + f;
    return {failed.empty(),
            fmt("driver gap %.2e, floor fraction %.2e, max X_T/T %.5f, (1+U)^2.5 slope %.3e (se %.3e), "
                "reproducible %s, round trip %s%s%s",
                worst_driver, worst_floor, worst_growth, trend.slope, trend.standard_error,
                reproducible ? "yes" : "no", round_trip ? "yes" : "no", failed.empty() ? "" : "; failed: ",
                failed_list.c_str())};
}

}  // namespace

int main() {
    report(1, "threshold analytics", thresholds, 1.0);
    report(2, "variance matching", variance_matching, 1.0);
    report(3, "sampler moments", sampler_moments, 60.0);
    report(4, "quadrature vs closed form", quadrature_vs_closed_form, 10.0);
    report(5, "extinction experiment", extinction_experiment);
    report(6, "persistence experiment", persistence_experiment);
    report(7, "regime flip under variance matching", regime_flip);
    report(8, "property suites", property_suites);
    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}

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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "levysir/errors.hpp"
#include "levysir/params.hpp"
#include "levysir/rng.hpp"
#include "levysir/ts_sampler.hpp"

namespace levysir {

struct SirState {
    double t = 0.0;
    double S = 0.0;
    double I = 0.0;
    double R = 0.0;

    double total() const { return S + I + R; }
};

struct StepOutcome {
    SirState state;
    int floor_activations = 0;
};

/// One Euler-Maruyama step of the jump SIR system. Jumps act on the pre-step
/// (left-limit) state. Each component is then kept above floor times its
/// previous value.
inline StepOutcome euler_step(const SirState& x, const ModelParams& m, const Vector3& sigma, const Vector3& dB,
                              double dY, double dt, double floor) {
    const double infection = m.transmission * x.S * x.I;
    double S = x.S + (m.influx - m.mortality * x.S - infection) * dt + x.S * dB[0] + sigma[0] * x.S * dY;
    double I = x.I + (infection - m.infected_exit_rate() * x.I) * dt + x.I * dB[1] + sigma[1] * x.I * dY;
    double R = x.R + (m.recovery * x.I - m.mortality * x.R) * dt + x.R * dB[2] + sigma[2] * x.R * dY;

    if (!std::isfinite(S) || !std::isfinite(I) || !std::isfinite(R))
        throw StepDiverged("non-finite state after step from t = " + std::to_string(x.t), x.t, {x.S, x.I, x.R});

    StepOutcome out;
    auto project = [&](double value, double previous) {
        double lower = floor * previous;
        if (value < lower) {
            ++out.floor_activations;
            return lower;
        }
        return value;
    };
    out.state = {x.t + dt, project(S, x.S), project(I, x.I), project(R, x.R)};
    return out;
}

struct SimConfig {
    ModelParams model;
    NoiseSpec noise;
    Vector3 initial = Vector3(1.6, 0.4, 0.04);
    double horizon = 500.0;
    double dt = 1e-3;
    double trunc_eps = default_truncation;
    double floor = 1e-12;
    std::uint64_t seed = 1;
    std::size_t record_every = 1;
    bool allow_two_sided = false;

    std::size_t steps() const { return static_cast<std::size_t>(std::llround(horizon / dt)); }

    std::vector<std::string> violations() const {
        std::vector<std::string> out;
        for (double v : {model.influx, model.mortality, model.transmission, model.disease_death, model.recovery})
            if (!(v >= 0.0) || !std::isfinite(v)) out.push_back("model rates must be finite and >= 0");
        if (!(horizon > 0.0)) out.push_back("horizon must be > 0");
        if (!(dt > 0.0)) out.push_back("dt must be > 0");
        if (horizon > 0.0 && dt > 0.0) {
            double n = horizon / dt;
            if (std::abs(n - std::round(n)) > 1e-6 * std::max(1.0, n) || std::round(n) < 1.0)
                out.push_back("horizon / dt must be a positive integer");
        }
        if (!(initial.minCoeff() > 0.0)) out.push_back("initial state must be strictly positive");
        if (!(floor >= 0.0 && floor < 1.0)) out.push_back("floor must lie in [0, 1)");
        if (!(trunc_eps > 0.0)) out.push_back("trunc_eps must be > 0");
        if (record_every < 1) out.push_back("record_every must be >= 1");
        for (auto& v : noise.violations()) out.push_back("noise: " + v);
        if (noise.has_jumps() && !noise.jumps.one_sided_positive() && !allow_two_sided)
            out.push_back("noise: two-sided jumps with nonzero loadings violate sigma_i z > -1");
        return out;
    }

    void validate() const {
        auto v = violations();
        if (!v.empty()) throw DomainError("invalid simulation config: " + v.front());
    }
};

/// Recorded trajectory. Series are sampled every record_every steps plus the
/// final time; running averages use the full step grid.
struct SirPath {
    std::vector<double> t, S, I, R;
    std::vector<double> avg_S, avg_I, avg_R;
    double dt = 0.0;
    std::size_t record_every = 1;
    std::size_t steps = 0;
    std::size_t jump_count = 0;
    std::size_t floor_activations = 0;  // component-level
    std::size_t floor_steps = 0;        // steps with at least one activation
    double driver_applied = 0.0;        // sum of the per-step jump increments
    double driver_total = 0.0;          // Y(T) of the jump train

    std::size_t size() const { return t.size(); }
    double horizon() const { return t.empty() ? 0.0 : t.back(); }
    double floor_fraction() const { return steps ? static_cast<double>(floor_steps) / static_cast<double>(steps) : 0.0; }
    SirState terminal() const { return {t.back(), S.back(), I.back(), R.back()}; }
    Vector3 terminal_averages() const { return {avg_S.back(), avg_I.back(), avg_R.back()}; }
};

inline SirPath simulate_path(const SimConfig& cfg, std::uint64_t path_index = 0) {
    cfg.validate();
    const std::size_t steps = cfg.steps();
    const double dt = cfg.dt;
    const TimeGrid grid{static_cast<double>(steps) * dt, steps};

    RngStream jump_rng(cfg.seed, 2 * path_index);
    RngStream gauss_rng(cfg.seed, 2 * path_index + 1);

    SirPath path;
    path.dt = dt;
    path.record_every = cfg.record_every;
    path.steps = steps;

    std::vector<double> dY;
    if (cfg.noise.has_jumps()) {
        JumpTrain train = sample_jump_train(cfg.noise.jumps, grid.horizon, cfg.trunc_eps, jump_rng);
        dY = increments_on_grid(train, grid);
        path.jump_count = train.jumps.size();
        path.driver_total = train.terminal_value();
    }
    std::vector<Vector3> dB;
    if (cfg.noise.has_diffusion()) dB = correlated_gaussian_increments(cfg.noise.covariance, dt, steps, gauss_rng);

    const std::size_t n_records = steps / cfg.record_every + 2;
    for (auto* v : {&path.t, &path.S, &path.I, &path.R, &path.avg_S, &path.avg_I, &path.avg_R}) v->reserve(n_records);

    SirState x{0.0, cfg.initial[0], cfg.initial[1], cfg.initial[2]};
    long double sum_S = 0.0L, sum_I = 0.0L, sum_R = 0.0L, applied = 0.0L;
    auto record = [&](std::size_t k) {
        path.t.push_back(x.t);
        path.S.push_back(x.S);
        path.I.push_back(x.I);
        path.R.push_back(x.R);
        if (k == 0) {
            path.avg_S.push_back(x.S);
            path.avg_I.push_back(x.I);
            path.avg_R.push_back(x.R);
        } else {
            long double denom = static_cast<long double>(k);
            path.avg_S.push_back(static_cast<double>(sum_S / denom));
            path.avg_I.push_back(static_cast<double>(sum_I / denom));
            path.avg_R.push_back(static_cast<double>(sum_R / denom));
        }
    };

    const Vector3 zero = Vector3::Zero();
    for (std::size_t k = 0; k < steps; ++k) {
        if (k % cfg.record_every == 0) record(k);
        sum_S += x.S;
        sum_I += x.I;
        sum_R += x.R;
        double jump = dY.empty() ? 0.0 : dY[k];
        applied += jump;
        auto outcome = euler_step(x, cfg.model, cfg.noise.sigma, dB.empty() ? zero : dB[k], jump, dt, cfg.floor);
        x = outcome.state;
        x.t = grid.time(k + 1);
        if (outcome.floor_activations > 0) {
            path.floor_activations += static_cast<std::size_t>(outcome.floor_activations);
            ++path.floor_steps;
        }
    }
    record(steps);
    path.driver_applied = static_cast<double>(applied);
    return path;
}

struct EnsembleOptions {
    std::vector<double> moment_orders{2.5};
    unsigned threads = 0;  // 0: hardware concurrency
};

struct ComponentQuantiles {
    Vector3 q05 = Vector3::Zero();
    Vector3 q50 = Vector3::Zero();
    Vector3 q95 = Vector3::Zero();
};

struct MomentCurve {
    double order = 0.0;
    std::vector<double> mean;  // mean over paths of (1 + U_t)^order on the recorded grid
};

struct EnsembleSummary {
    std::vector<SirPath> paths;
    std::vector<double> times;
    Vector3 mean_terminal = Vector3::Zero();
    Vector3 mean_average = Vector3::Zero();
    ComponentQuantiles terminal_quantiles;
    ComponentQuantiles average_quantiles;
    std::vector<MomentCurve> moment_curves;
    double floor_fraction = 0.0;
    std::uint64_t seed = 0;

    std::size_t size() const { return paths.size(); }
};

namespace detail {

inline double quantile(std::vector<double> v, double q) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    double pos = q * static_cast<double>(v.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    auto hi = std::min(lo + 1, v.size() - 1);
    double w = pos - static_cast<double>(lo);
    return (1.0 - w) * v[lo] + w * v[hi];
}

inline ComponentQuantiles quantiles_of(const std::vector<Vector3>& values) {
    ComponentQuantiles q;
    for (int c = 0; c < 3; ++c) {
        std::vector<double> column;
        column.reserve(values.size());
        for (const auto& v : values) column.push_back(v[c]);
        q.q05[c] = quantile(column, 0.05);
        q.q50[c] = quantile(column, 0.50);
        q.q95[c] = quantile(column, 0.95);
    }
    return q;
}

}  // namespace detail

/// Runs n_paths independent paths (path i uses streams 2i and 2i+1 of cfg.seed)
/// and reduces them. The result does not depend on the thread count.
inline EnsembleSummary run_ensemble(const SimConfig& cfg, std::size_t n_paths, const EnsembleOptions& opts = {}) {
    if (n_paths < 1) throw DomainError("ensemble needs at least one path");
    cfg.validate();

    EnsembleSummary out;
    out.seed = cfg.seed;
    out.paths.resize(n_paths);

    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_paths));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < n_paths; i = next++) {
            try {
                out.paths[i] = simulate_path(cfg, i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = n_paths;
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    out.times = out.paths.front().t;
    std::vector<Vector3> terminals, averages;
    std::size_t floor_steps = 0, total_steps = 0;
    for (const auto& p : out.paths) {
        terminals.emplace_back(p.S.back(), p.I.back(), p.R.back());
        averages.push_back(p.terminal_averages());
        floor_steps += p.floor_steps;
        total_steps += p.steps;
    }
    for (std::size_t i = 0; i < n_paths; ++i) {
        out.mean_terminal += terminals[i];
        out.mean_average += averages[i];
    }
    out.mean_terminal /= static_cast<double>(n_paths);
    out.mean_average /= static_cast<double>(n_paths);
    out.terminal_quantiles = detail::quantiles_of(terminals);
    out.average_quantiles = detail::quantiles_of(averages);
    out.floor_fraction = static_cast<double>(floor_steps) / static_cast<double>(total_steps);

    for (double order : opts.moment_orders) {
        MomentCurve curve{order, std::vector<double>(out.times.size(), 0.0)};
        for (const auto& p : out.paths)
            for (std::size_t k = 0; k < curve.mean.size(); ++k)
                curve.mean[k] += std::pow(1.0 + p.S[k] + p.I[k] + p.R[k], order);
        for (auto& v : curve.mean) v /= static_cast<double>(n_paths);
        out.moment_curves.push_back(std::move(curve));
    }
    return out;
}

}  // namespace levysir

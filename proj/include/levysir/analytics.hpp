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
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "levysir/levy_model.hpp"
#include "levysir/sde_engine.hpp"

namespace levysir {

/// Left-endpoint running mean (1/t_k) sum_{j<k} f(t_j) dt on a uniform grid;
/// the value at t_0 is f(t_0).
inline std::vector<double> running_time_average(std::span<const double> values) {
    std::vector<double> out;
    out.reserve(values.size());
    long double sum = 0.0L;
    for (std::size_t k = 0; k < values.size(); ++k) {
        out.push_back(k == 0 ? values[0] : static_cast<double>(sum / static_cast<long double>(k)));
        sum += values[k];
    }
    return out;
}

/// Earliest recorded time after which the series stays below threshold up to the
/// horizon, provided that stretch is at least `window` long.
inline std::optional<double> detect_extinction(std::span<const double> times, std::span<const double> values,
                                               double threshold, double window) {
    if (times.empty()) return std::nullopt;
    std::size_t first_below = 0;
    for (std::size_t k = values.size(); k-- > 0;) {
        if (values[k] >= threshold) {
            first_below = k + 1;
            break;
        }
    }
    if (first_below >= times.size()) return std::nullopt;
    double t = times[first_below];
    if (times.back() - t < window) return std::nullopt;
    return t;
}

inline std::optional<double> detect_extinction(const SirPath& path, double threshold, double window) {
    return detect_extinction(path.t, path.I, threshold, window);
}

/// Time average of a component over [T - window, T], from the running averages.
inline double trailing_average(const SirPath& path, Compartment c, double window) {
    const auto& avg = c == Compartment::susceptible ? path.avg_S : c == Compartment::infected ? path.avg_I : path.avg_R;
    const double horizon = path.horizon();
    auto it = std::lower_bound(path.t.begin(), path.t.end(), horizon - window - 1e-9 * horizon);
    auto k = static_cast<std::size_t>(it - path.t.begin());
    if (k + 1 >= path.t.size()) return avg.back();
    double t0 = path.t[k];
    return (horizon * avg.back() - t0 * avg[k]) / (horizon - t0);
}

struct VerdictThresholds {
    double extinction_level = 1e-3;  // population units
    double window_fraction = 0.1;    // trailing window for extinction, fraction of horizon
    double persistence_level = 1e-3; // required ensemble-mean <I>_T
    double quorum = 0.5;             // share of extinct paths that makes an ensemble Extinct
    double trailing_fraction = 0.5;  // window of the reported trailing <I>
};

enum class Detected { extinct, persistent, undecided };

inline const char* to_string(Detected d) {
    switch (d) {
        case Detected::extinct: return "Extinct";
        case Detected::persistent: return "Persistent";
        case Detected::undecided: return "Undecided";
    }
    return "?";
}

struct RegimeVerdict {
    Detected detected = Detected::undecided;
    std::optional<double> extinction_time;  // single path; median over extinct paths for ensembles
    Vector3 empirical_limits = Vector3::Zero();
    std::optional<Vector3> predicted_limits;
    Vector3 deviation = Vector3::Zero();  // relative where the prediction is nonzero, absolute otherwise
    double extinct_fraction = 0.0;
    double trailing_mean_I = 0.0;
    std::size_t paths = 0;
    Regime predicted = Regime::indeterminate;
};

namespace detail {

inline void fill_deviation(RegimeVerdict& v) {
    if (!v.predicted_limits) return;
    for (int c = 0; c < 3; ++c) {
        double pred = (*v.predicted_limits)[c];
        double diff = v.empirical_limits[c] - pred;
        v.deviation[c] = pred != 0.0 ? std::abs(diff / pred) : std::abs(diff);
    }
}

}  // namespace detail

inline RegimeVerdict verdict(const SirPath& path, const ThresholdReport& report, const VerdictThresholds& th = {}) {
    RegimeVerdict v;
    v.paths = 1;
    v.predicted = report.regime;
    v.predicted_limits = report.predicted_limits;
    v.empirical_limits = path.terminal_averages();
    v.trailing_mean_I = trailing_average(path, Compartment::infected, th.trailing_fraction * path.horizon());
    v.extinction_time = detect_extinction(path, th.extinction_level, th.window_fraction * path.horizon());
    v.extinct_fraction = v.extinction_time ? 1.0 : 0.0;
    if (v.extinction_time)
        v.detected = Detected::extinct;
    else if (v.empirical_limits[1] > th.persistence_level)
        v.detected = Detected::persistent;
    detail::fill_deviation(v);
    return v;
}

/// Ensemble rule: Extinct when at least `quorum` of the paths are extinct,
/// otherwise Persistent when the ensemble-mean <I>_T exceeds persistence_level.
inline RegimeVerdict verdict(const EnsembleSummary& ens, const ThresholdReport& report,
                             const VerdictThresholds& th = {}) {
    RegimeVerdict v;
    v.paths = ens.size();
    v.predicted = report.regime;
    v.predicted_limits = report.predicted_limits;
    v.empirical_limits = ens.mean_average;
    std::vector<double> times;
    double trailing = 0.0;
    for (const auto& p : ens.paths) {
        if (auto t = detect_extinction(p, th.extinction_level, th.window_fraction * p.horizon())) times.push_back(*t);
        trailing += trailing_average(p, Compartment::infected, th.trailing_fraction * p.horizon());
    }
    v.trailing_mean_I = trailing / static_cast<double>(ens.size());
    v.extinct_fraction = static_cast<double>(times.size()) / static_cast<double>(ens.size());
    if (!times.empty()) v.extinction_time = detail::quantile(times, 0.5);
    if (v.extinct_fraction >= th.quorum)
        v.detected = Detected::extinct;
    else if (v.empirical_limits[1] > th.persistence_level)
        v.detected = Detected::persistent;
    detail::fill_deviation(v);
    return v;
}

struct TrendEstimate {
    double slope = 0.0;
    double standard_error = 0.0;
};

/// Least-squares slope of t -> mean over paths of (1 + U_t)^order on [t_from, t_to].
/// The slope of the mean curve is the mean of the per-path slopes, so the
/// standard error comes from their spread across independent paths.
inline TrendEstimate moment_trend(const EnsembleSummary& ens, double order, double t_from, double t_to) {
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < ens.times.size(); ++k)
        if (ens.times[k] >= t_from && ens.times[k] <= t_to) idx.push_back(k);
    if (idx.size() < 2) throw DomainError("trend window holds fewer than two recorded times");
    double tbar = 0.0;
    for (auto k : idx) tbar += ens.times[k];
    tbar /= static_cast<double>(idx.size());
    double sxx = 0.0;
    for (auto k : idx) sxx += (ens.times[k] - tbar) * (ens.times[k] - tbar);

    std::vector<double> slopes;
    for (const auto& p : ens.paths) {
        double sxy = 0.0;
        for (auto k : idx) sxy += (ens.times[k] - tbar) * std::pow(1.0 + p.S[k] + p.I[k] + p.R[k], order);
        slopes.push_back(sxy / sxx);
    }
    double mean = 0.0;
    for (double s : slopes) mean += s;
    mean /= static_cast<double>(slopes.size());
    double var = 0.0;
    for (double s : slopes) var += (s - mean) * (s - mean);
    double n = static_cast<double>(slopes.size());
    double se = slopes.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
    return {mean, se};
}

/// max over paths and compartments of X_T / T.
inline double max_growth_ratio(const EnsembleSummary& ens) {
    double out = 0.0;
    for (const auto& p : ens.paths) {
        double T = p.horizon();
        out = std::max({out, p.S.back() / T, p.I.back() / T, p.R.back() / T});
    }
    return out;
}

}  // namespace levysir

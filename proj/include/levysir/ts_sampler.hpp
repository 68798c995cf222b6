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

// Tempered-stable path generation by the shot-noise series representation.
//
// Points Gamma_1 < Gamma_2 < ... of a unit-rate Poisson process are mapped to
// stable jump envelopes r_j = (T (k_- + k_+) / (alpha Gamma_j))^{1/alpha}; each
// envelope is tempered by clamping it to eta_j xi_j^{1/alpha} / lambda_side and
// placed at a uniform time on (0, T]. The series is cut at the first j whose
// envelope falls below the truncation threshold.
//
// Centering:
//   alpha < 1, compensated: drift -(mean mass rate of the retained jumps), i.e.
//     the full compensator minus the exactly computed contribution of the
//     discarded small jumps, so Y(t) has mean zero for any threshold.
//   alpha > 1: each term j is centred by (t/T) m r(j) with m = (k_+ - k_-)/k and
//     the drift b_T restores the compensated mean of the full series; the cut
//     terms' clamp deficit is subtracted as well.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "levysir/errors.hpp"
#include "levysir/params.hpp"
#include "levysir/quadrature.hpp"
#include "levysir/rng.hpp"
#include "levysir/special_functions.hpp"

namespace levysir {

struct Jump {
    double time;
    double size;
};

struct JumpTrain {
    double horizon = 0.0;
    std::vector<Jump> jumps;
    double truncation = 0.0;
    double drift = 0.0;           // total deterministic drift per unit time
    double centering_drift = 0.0;  // alpha > 1 only: -(m / T) sum_j r(j)
    double compensator_drift = 0.0;

    double sum_of_sizes() const {
        long double s = 0.0L;
        for (const auto& j : jumps) s += j.size;
        return static_cast<double>(s);
    }

    /// Y(T).
    double terminal_value() const { return sum_of_sizes() + drift * horizon; }
};

/// Uniform grid 0 = t_0 < ... < t_steps = horizon.
struct TimeGrid {
    double horizon = 1.0;
    std::size_t steps = 1;

    double dt() const { return horizon / static_cast<double>(steps); }
    double time(std::size_t k) const { return horizon * static_cast<double>(k) / static_cast<double>(steps); }
};

/// Default series cut in state units.
inline constexpr double default_truncation = 1e-6;

/// Signed mean per unit time by which clamping lowers the discarded series
/// terms (envelope below eps) relative to their envelopes:
///   sum over sides of +-k E[ integral over (0, eps) of (z - min(z, W)) z^{-alpha-1} dz ],
/// W = eta xi^{1/alpha} / lambda. The expectation over eta is closed form, the
/// one over xi is done by quadrature. Finite for every alpha in (0, 2).
inline double clamp_deficit_rate(const TemperedStableParams& ts, double eps) {
    ts.validate();
    const double a = ts.alpha;
    auto side = [&](double k, double lambda) {
        auto inner = [&](double xi) {
            double c = std::pow(xi, 1.0 / a) / lambda;
            if (c == 0.0) return 0.0;
            double x = eps / c;
            // P(eta < x), and the integral of t e^{-t} over [0, x], both without cancellation.
            double below = -std::expm1(-x);
            double gamma2 = x < 1e-2 ? x * x * (0.5 - x / 3.0 + x * x / 8.0 - x * x * x / 30.0)
                                     : below - x * std::exp(-x);
            return std::pow(eps, 1.0 - a) / (1.0 - a) * below -
                   (1.0 / (1.0 - a) + 1.0 / a) * std::pow(c, 1.0 - a) * lower_incomplete_gamma(2.0 - a, x) +
                   std::pow(eps, -a) / a * c * gamma2;
        };
        return k * integrate(inner, 0.0, 1.0, 1e-15, 1e-10).value;
    };
    double out = 0.0;
    if (ts.k_plus > 0.0) out += side(ts.k_plus, ts.lambda_plus);
    if (ts.k_minus > 0.0) out -= side(ts.k_minus, ts.lambda_minus);
    return out;
}

/// Mean per unit time of the terms cut from the alpha < 1 series at envelope eps.
inline double discarded_mean_rate(const TemperedStableParams& ts, double eps) {
    if (ts.alpha >= 1.0) throw DomainError("discarded mean is finite only for alpha < 1");
    double stable_mass = (ts.k_plus - ts.k_minus) * std::pow(eps, 1.0 - ts.alpha) / (1.0 - ts.alpha);
    return stable_mass - clamp_deficit_rate(ts, eps);
}

/// b_T for alpha in (1, 2): restores E[Y(t)] = 0 after per-term centering of the full series.
inline double series_drift_b(const TemperedStableParams& ts, double horizon) {
    const double a = ts.alpha;
    const double k = ts.total_mass();
    const double m = (ts.k_plus - ts.k_minus) / k;
    double b = m / horizon * riemann_zeta(1.0 / a) * std::pow(horizon * k / a, 1.0 / a);
    double tempering_shift = 0.0;
    if (ts.k_plus > 0.0) tempering_shift += ts.k_plus * std::pow(ts.lambda_plus, a - 1.0);
    if (ts.k_minus > 0.0) tempering_shift -= ts.k_minus * std::pow(ts.lambda_minus, a - 1.0);
    return b - tempering_shift * gamma_fn(1.0 - a);
}

/// Draws jump trains for fixed (law, horizon, cut). Drift constants are computed once.
class SeriesSampler {
public:
    SeriesSampler(const TemperedStableParams& ts, double horizon, double trunc_eps)
        : ts_(ts), horizon_(horizon), eps_(trunc_eps) {
        ts.validate();
        if (!(horizon > 0.0)) throw DomainError("horizon must be > 0");
        if (!(trunc_eps > 0.0)) throw DomainError("truncation threshold must be > 0");
        if (ts.alpha > 1.0) {
            // The truncated centred series overshoots by the clamp deficit of the cut terms.
            compensator_drift_ = series_drift_b(ts, horizon) - clamp_deficit_rate(ts, trunc_eps);
        } else if (ts.compensated) {
            compensator_drift_ = -(compensator_rate(ts) - discarded_mean_rate(ts, trunc_eps));
        }
    }

    const TemperedStableParams& law() const noexcept { return ts_; }
    double horizon() const noexcept { return horizon_; }
    double truncation() const noexcept { return eps_; }

    JumpTrain sample(RngStream& rng) const {
        const double a = ts_.alpha;
        const double inv_a = 1.0 / a;
        const double k = ts_.total_mass();
        const double p_plus = ts_.k_plus / k;
        const double scale = horizon_ * k / a;
        const bool centred_terms = a > 1.0;

        JumpTrain train;
        train.horizon = horizon_;
        train.truncation = eps_;

        double arrival = 0.0;
        long double envelope_sum = 0.0L;
        for (std::uint64_t j = 1;; ++j) {
            arrival += rng.exponential();
            double envelope = std::pow(scale / arrival, inv_a);
            if (envelope < eps_) break;
            bool positive = rng.uniform() < p_plus;
            double lambda = positive ? ts_.lambda_plus : ts_.lambda_minus;
            double tempered = rng.exponential() * std::pow(rng.uniform_open(), inv_a) / lambda;
            double size = std::min(envelope, tempered);
            double time = horizon_ * rng.uniform_open();
            train.jumps.push_back({time, positive ? size : -size});
            if (centred_terms) envelope_sum += std::pow(scale / static_cast<double>(j), inv_a);
        }
        if (centred_terms) {
            const double m = (ts_.k_plus - ts_.k_minus) / k;
            train.centering_drift = -m / horizon_ * static_cast<double>(envelope_sum);
        }
        train.compensator_drift = compensator_drift_;
        train.drift = train.centering_drift + train.compensator_drift;
        return train;
    }

private:
    TemperedStableParams ts_;
    double horizon_;
    double eps_;
    double compensator_drift_ = 0.0;
};

inline JumpTrain sample_jump_train(const TemperedStableParams& ts, double horizon, double trunc_eps, RngStream& rng) {
    return SeriesSampler(ts, horizon, trunc_eps).sample(rng);
}

/// Per-step increments of Y on the grid: jumps with time in (t_k, t_{k+1}] land in step k.
inline std::vector<double> increments_on_grid(const JumpTrain& train, const TimeGrid& grid) {
    if (std::abs(grid.horizon - train.horizon) > 1e-12 * std::max(1.0, train.horizon))
        throw DomainError("grid does not span the train horizon");
    std::vector<double> dy(grid.steps, train.drift * grid.dt());
    const double dt = grid.dt();
    for (const auto& jump : train.jumps) {
        auto k = static_cast<std::ptrdiff_t>(std::ceil(jump.time / dt)) - 1;
        k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(grid.steps) - 1);
        dy[static_cast<std::size_t>(k)] += jump.size;
    }
    return dy;
}

/// Factor L with L L^T = rho, from the symmetric eigendecomposition so that
/// singular covariances are accepted.
inline Matrix3 covariance_factor(const Matrix3& rho) {
    if ((rho - rho.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + rho.cwiseAbs().maxCoeff()))
        throw DomainError("covariance is not symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix3> eig(rho);
    if (eig.info() != Eigen::Success) throw DomainError("covariance factorization failed");
    double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
    if (eig.eigenvalues().minCoeff() < -1e-12 * scale) throw DomainError("covariance is not positive semidefinite");
    Vector3 root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * root.asDiagonal();
}

/// Brownian increments with covariance rho * dt per step.
inline std::vector<Vector3> correlated_gaussian_increments(const Matrix3& rho, double dt, std::size_t n_steps,
                                                           RngStream& rng) {
    Matrix3 factor = covariance_factor(rho) * std::sqrt(dt);
    std::vector<Vector3> out(n_steps, Vector3::Zero());
    if (factor.cwiseAbs().maxCoeff() == 0.0) return out;
    for (auto& v : out) {
        Vector3 g(rng.normal(), rng.normal(), rng.normal());
        v = factor * g;
    }
    return out;
}

/// n-th cumulant of Y(1): integral of z^n nu(dz), zero mean when compensated.
inline double cumulant(const TemperedStableParams& ts, int n) {
    ts.validate();
    if (n < 1) throw DomainError("cumulant order must be >= 1");
    if (n == 1) {
        if (ts.compensated) return 0.0;
        if (ts.alpha > 1.0) throw DomainError("first cumulant of an uncompensated process needs alpha < 1");
        return compensator_rate(ts);
    }
    double g = gamma_fn(n - ts.alpha);
    double out = 0.0;
    if (ts.k_plus > 0.0) out += ts.k_plus * g / std::pow(ts.lambda_plus, n - ts.alpha);
    if (ts.k_minus > 0.0) out += (n % 2 == 0 ? 1.0 : -1.0) * ts.k_minus * g / std::pow(ts.lambda_minus, n - ts.alpha);
    return out;
}

/// Delimited dump: '#' metadata lines, then "time,size" rows.
inline void write_jump_train(std::ostream& os, const JumpTrain& train) {
    auto old_precision = os.precision(17);
    os << "# horizon = " << train.horizon << '\n'
       << "# truncation = " << train.truncation << '\n'
       << "# drift = " << train.drift << '\n'
       << "# jumps = " << train.jumps.size() << '\n'
       << "time,size\n";
    for (const auto& j : train.jumps) os << j.time << ',' << j.size << '\n';
    os.precision(old_precision);
}

}  // namespace levysir

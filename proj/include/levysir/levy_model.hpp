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
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "levysir/errors.hpp"
#include "levysir/params.hpp"
#include "levysir/quadrature.hpp"
#include "levysir/special_functions.hpp"

namespace levysir {

/// R0 = beta Lambda / (mu (mu + epsilon + eta)).
inline double basic_reproduction_number(const ModelParams& m) {
    return m.transmission * m.influx / (m.mortality * m.infected_exit_rate());
}

struct Equilibria {
    Vector3 disease_free;
    std::optional<Vector3> endemic;  // present iff R0 > 1
};

inline Equilibria deterministic_equilibria(const ModelParams& m) {
    Equilibria e;
    e.disease_free = Vector3(m.influx / m.mortality, 0.0, 0.0);
    double r0 = basic_reproduction_number(m);
    if (r0 > 1.0) {
        e.endemic = Vector3(m.infected_exit_rate() / m.transmission, m.mortality / m.transmission * (r0 - 1.0),
                            m.recovery / m.transmission * (r0 - 1.0));
    }
    return e;
}

/// Integral of |z|^p nu(dz) in closed form; finite iff p > alpha.
inline double jump_moment(const TemperedStableParams& ts, double p) {
    ts.validate();
    if (!(p > ts.alpha)) throw DomainError("divergent moment: p must exceed alpha");
    double g = gamma_fn(p - ts.alpha);
    double m = 0.0;
    if (ts.k_plus > 0.0) m += ts.k_plus * g / std::pow(ts.lambda_plus, p - ts.alpha);
    if (ts.k_minus > 0.0) m += ts.k_minus * g / std::pow(ts.lambda_minus, p - ts.alpha);
    return m;
}

namespace detail {

// x - log(1 + x) without cancellation for small x.
inline double x_minus_log1p(double x) {
    if (std::abs(x) < 1e-3) {
        double x2 = x * x;
        return x2 * (0.5 - x / 3.0 + x2 / 4.0 - x2 * x / 5.0 + x2 * x2 / 6.0);
    }
    return x - std::log1p(x);
}

}  // namespace detail

/// beta_i = rho_ii / 2 + integral of (sigma_i z - log(1 + sigma_i z)) nu(dz).
inline double beta_noise_intensity(const NoiseSpec& n, Compartment c, const QuadratureSettings& qs = {}) {
    const int i = index_of(c);
    double diffusion = 0.5 * n.covariance(i, i);
    double loading = n.sigma[i];
    if (loading == 0.0) return diffusion;
    if (!n.jumps.one_sided_positive())
        throw DomainError("sigma_i z > -1 fails on a two-sided jump measure");
    auto r = levy_integral([loading](double z) { return detail::x_minus_log1p(loading * z); }, n.jumps, qs);
    return diffusion + r.value;
}

inline Vector3 beta_noise_intensities(const NoiseSpec& n, const QuadratureSettings& qs = {}) {
    return {beta_noise_intensity(n, Compartment::susceptible, qs), beta_noise_intensity(n, Compartment::infected, qs),
            beta_noise_intensity(n, Compartment::recovered, qs)};
}

/// R0_bar = R0 - beta_2 / (mu + epsilon + eta).
inline double modified_reproduction_number(const ModelParams& m, const NoiseSpec& n,
                                           const QuadratureSettings& qs = {}) {
    return basic_reproduction_number(m) - beta_noise_intensity(n, Compartment::infected, qs) / m.infected_exit_rate();
}

inline double moment_constant(double p) { return p * (p - 1.0) * std::max(std::pow(2.0, p - 3.0), 1.0) / 2.0; }

/// lambda(p) = c_p sigma_max^2 M_2 + c_p sigma_max^p M_p, M_q the q-th absolute jump moment.
inline double lambda_p(const NoiseSpec& n, double p) {
    if (!(p > n.jumps.alpha)) throw DomainError("lambda(p) requires p > alpha");
    if (!(p > 1.0)) throw DomainError("lambda(p) requires p > 1");
    double s = n.max_sigma();
    if (s == 0.0) return 0.0;
    double c = moment_constant(p);
    return c * s * s * jump_moment(n.jumps, 2.0) + c * std::pow(s, p) * jump_moment(n.jumps, p);
}

/// Maximum absolute row sum.
inline double rho_inf_norm(const Matrix3& rho) { return rho.cwiseAbs().rowwise().sum().maxCoeff(); }

enum class HypothesisStatus { pass, fail, inapplicable };

inline const char* to_string(HypothesisStatus s) {
    switch (s) {
        case HypothesisStatus::pass: return "pass";
        case HypothesisStatus::fail: return "fail";
        case HypothesisStatus::inapplicable: return "inapplicable";
    }
    return "?";
}

struct HypothesisCheck {
    std::string name;
    HypothesisStatus status;
    std::string detail;
};

struct Hypotheses {
    std::vector<HypothesisCheck> checks;

    const HypothesisCheck& operator[](const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return c;
        throw std::out_of_range("no hypothesis named " + name);
    }
    bool all_pass() const {
        return std::all_of(checks.begin(), checks.end(),
                           [](const auto& c) { return c.status == HypothesisStatus::pass; });
    }
};

/// Conditions H1, H2, H3(p), H4(p), H5 for linear loadings gamma_i(z) = sigma_i z.
/// Everything except H3(p) follows from alpha and the sidedness of nu.
inline Hypotheses check_hypotheses(const ModelParams& m, const NoiseSpec& n, double p) {
    Hypotheses h;
    const bool jumps = n.has_jumps();
    const bool one_sided = n.jumps.one_sided_positive();
    const double alpha = n.jumps.alpha;
    const auto pass = HypothesisStatus::pass;
    const auto fail = HypothesisStatus::fail;

    h.checks.push_back({"H1", pass, jumps ? "int z^2 nu(dz) < inf since alpha < 2" : "no jump loading"});

    if (!jumps)
        h.checks.push_back({"H2", pass, "no jump loading"});
    else if (one_sided)
        h.checks.push_back({"H2", pass, "one-sided positive jumps give sigma_i z > -1"});
    else
        h.checks.push_back({"H2", fail, "negative jumps of unbounded size violate sigma_i z > -1"});

    char p_text[32];
    std::snprintf(p_text, sizeof p_text, "%g", p);
    std::string h3 = std::string("H3(") + p_text + ")";
    if (!(p > 1.0) || (jumps && !(p > alpha))) {
        h.checks.push_back({h3, HypothesisStatus::inapplicable, "lambda(p) needs p > max(1, alpha)"});
    } else {
        double lam = lambda_p(n, p);
        double bound = (p - 1.0) / 2.0 * rho_inf_norm(n.covariance) + lam / p;
        h.checks.push_back({h3, m.mortality > bound ? pass : fail,
                            "mu = " + std::to_string(m.mortality) + " vs " + std::to_string(bound)});
    }

    std::string h4 = std::string("H4(") + p_text + ")";
    if (!jumps)
        h.checks.push_back({h4, pass, "no jump loading"});
    else if (alpha < 1.0)
        h.checks.push_back({h4, pass, "alpha < 1 keeps int z nu(dz) finite"});
    else
        h.checks.push_back({h4, fail, "alpha >= 1: int z nu(dz) diverges at 0"});

    auto h2 = h.checks[1];
    h.checks.push_back({"H5", h2.status, h2.status == pass ? "log(1 + sigma_i z) square integrable" : h2.detail});
    return h;
}

enum class Regime { extinction, persistence, indeterminate };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::extinction: return "Extinction";
        case Regime::persistence: return "Persistence";
        case Regime::indeterminate: return "Indeterminate";
    }
    return "?";
}

struct ThresholdReport {
    double r0 = 0.0;
    Vector3 beta_noise = Vector3::Zero();
    double r0_bar = 0.0;
    double p = 2.0;
    std::optional<double> lambda_p;
    double rho_inf_norm = 0.0;
    Hypotheses hypotheses;
    Regime regime = Regime::indeterminate;
    Regime threshold_regime = Regime::indeterminate;  // from the sign of R0_bar - 1 alone
    std::string reason;
    Equilibria equilibria;
    std::optional<Vector3> predicted_limits;  // long-run time averages
};

/// Default relative width of the band around R0_bar = 1 where no regime is claimed.
inline constexpr double default_regime_tolerance = 1e-6;

inline ThresholdReport classify_regime(const ModelParams& m, const NoiseSpec& n, double p,
                                       double tol = default_regime_tolerance, const QuadratureSettings& qs = {}) {
    ThresholdReport rep;
    rep.r0 = basic_reproduction_number(m);
    rep.hypotheses = check_hypotheses(m, n, p);
    rep.p = p;
    rep.rho_inf_norm = rho_inf_norm(n.covariance);
    if (p > 1.0 && (p > n.jumps.alpha || !n.has_jumps())) rep.lambda_p = n.has_jumps() ? lambda_p(n, p) : 0.0;
    rep.equilibria = deterministic_equilibria(m);

    if (n.jumps.one_sided_positive() || !n.has_jumps()) {
        rep.beta_noise = beta_noise_intensities(n, qs);
    } else {
        rep.r0_bar = std::numeric_limits<double>::quiet_NaN();
        rep.beta_noise.setConstant(std::numeric_limits<double>::quiet_NaN());
        rep.reason = "noise intensities undefined for two-sided jumps";
        return rep;
    }
    rep.r0_bar = rep.r0 - rep.beta_noise[1] / m.infected_exit_rate();

    if (std::abs(rep.r0_bar - 1.0) <= tol)
        rep.threshold_regime = Regime::indeterminate;
    else
        rep.threshold_regime = rep.r0_bar < 1.0 ? Regime::extinction : Regime::persistence;

    rep.regime = rep.threshold_regime;
    if (rep.threshold_regime == Regime::indeterminate) {
        rep.reason = "R0_bar within tolerance of 1";
    } else if (!rep.hypotheses.all_pass()) {
        rep.regime = Regime::indeterminate;
        for (const auto& c : rep.hypotheses.checks)
            if (c.status != HypothesisStatus::pass) {
                rep.reason = c.name + " " + to_string(c.status) + ": " + c.detail;
                break;
            }
    }

    if (rep.regime == Regime::extinction) {
        rep.predicted_limits = rep.equilibria.disease_free;
    } else if (rep.regime == Regime::persistence) {
        double excess = rep.r0_bar - 1.0;
        rep.predicted_limits = Vector3(m.infected_exit_rate() / m.transmission + rep.beta_noise[1] / m.transmission,
                                       m.mortality / m.transmission * excess, m.recovery / m.transmission * excess);
    }
    return rep;
}

/// Rescale jump loadings so that sigma_i^2 * int z^2 nu(dz) is unchanged when alpha moves
/// from source.alpha to target_alpha (k_+ and lambda_+ held fixed).
inline Vector3 variance_matched_sigma(const Vector3& sigma, const TemperedStableParams& source, double target_alpha) {
    source.validate();
    if (!(target_alpha > 0.0 && target_alpha < 2.0)) throw DomainError("target alpha must lie in (0, 2)");
    const double lam = source.lambda_plus;
    auto second_moment_shape = [lam](double a) { return gamma_fn(2.0 - a) * std::pow(lam, a - 2.0); };
    return sigma * std::sqrt(second_moment_shape(source.alpha) / second_moment_shape(target_alpha));
}

}  // namespace levysir

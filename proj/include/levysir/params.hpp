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

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

#include "levysir/errors.hpp"

namespace levysir {

using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;

enum class Compartment { susceptible = 0, infected = 1, recovered = 2 };

constexpr int index_of(Compartment c) { return static_cast<int>(c); }

/// Rates of the deterministic SIR skeleton, per unit time.
struct ModelParams {
    double influx = 0.0;         // Lambda
    double mortality = 0.0;      // mu
    double transmission = 0.0;   // beta
    double disease_death = 0.0;  // epsilon
    double recovery = 0.0;       // eta

    /// Total exit rate of the infected class, mu + epsilon + eta.
    double infected_exit_rate() const { return mortality + disease_death + recovery; }

    std::vector<std::string> violations() const {
        std::vector<std::string> out;
        auto positive = [&](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v)) out.push_back(std::string(name) + " must be > 0");
        };
        positive(influx, "influx");
        positive(mortality, "mortality");
        positive(transmission, "transmission");
        positive(disease_death, "disease_death");
        positive(recovery, "recovery");
        return out;
    }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Tempered alpha-stable Levy measure
///   nu(dz) = k_- |z|^{-alpha-1} e^{-lambda_- |z|} dz (z < 0)
///          + k_+ z^{-alpha-1} e^{-lambda_+ z} dz    (z > 0).
struct TemperedStableParams {
    double alpha = 0.5;
    double k_plus = 1.0;
    double lambda_plus = 1.0;
    double k_minus = 0.0;
    double lambda_minus = 1.0;
    bool compensated = true;

    double total_mass() const { return k_plus + k_minus; }
    bool one_sided_positive() const { return k_minus == 0.0; }

    std::vector<std::string> violations() const {
        std::vector<std::string> out;
        if (!(alpha > 0.0 && alpha < 2.0)) out.push_back("alpha must lie in (0, 2)");
        if (alpha == 1.0) out.push_back("alpha = 1 is not supported");
        if (!(k_plus >= 0.0)) out.push_back("k_plus must be >= 0");
        if (!(k_minus >= 0.0)) out.push_back("k_minus must be >= 0");
        if (!(k_plus + k_minus > 0.0)) out.push_back("k_plus + k_minus must be > 0");
        if (k_plus > 0.0 && !(lambda_plus > 0.0)) out.push_back("lambda_plus must be > 0");
        if (k_minus > 0.0 && !(lambda_minus > 0.0)) out.push_back("lambda_minus must be > 0");
        return out;
    }

    void validate() const {
        auto v = violations();
        if (!v.empty()) throw DomainError("invalid tempered-stable parameters: " + v.front());
    }

    friend bool operator==(const TemperedStableParams&, const TemperedStableParams&) = default;
};

/// Gaussian covariance rho (per unit time), linear jump loadings sigma and the jump law.
/// Jump coefficient of compartment i is gamma_i(z) = sigma_i * z.
struct NoiseSpec {
    Matrix3 covariance = Matrix3::Zero();
    Vector3 sigma = Vector3::Zero();
    TemperedStableParams jumps{};

    double max_sigma() const { return sigma.maxCoeff(); }
    bool has_jumps() const { return max_sigma() > 0.0; }
    bool has_diffusion() const { return covariance.cwiseAbs().maxCoeff() > 0.0; }

    std::vector<std::string> violations() const {
        std::vector<std::string> out;
        if (!covariance.allFinite()) out.push_back("covariance has non-finite entries");
        if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() >
            1e-12 * (1.0 + covariance.cwiseAbs().maxCoeff())) {
            out.push_back("covariance must be symmetric");
        } else {
            Eigen::SelfAdjointEigenSolver<Matrix3> eig(covariance, Eigen::EigenvaluesOnly);
            double scale = std::max(1.0, covariance.cwiseAbs().maxCoeff());
            if (eig.eigenvalues().minCoeff() < -1e-12 * scale)
                out.push_back("covariance must be positive semidefinite");
        }
        for (int i = 0; i < 3; ++i)
            if (!(sigma[i] >= 0.0)) out.push_back("sigma components must be >= 0");
        for (auto& s : jumps.violations()) out.push_back("jumps: " + s);
        return out;
    }

    friend bool operator==(const NoiseSpec& a, const NoiseSpec& b) {
        return a.covariance == b.covariance && a.sigma == b.sigma && a.jumps == b.jumps;
    }
};

}  // namespace levysir

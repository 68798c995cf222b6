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

// Shared fixtures and brute-force oracles for the unit tests.

#include <cmath>
#include <functional>

#include "levysir/params.hpp"

namespace levysir::testing {

inline ModelParams scenario_model() { return {8.0, 5.3, 4.8, 0.5, 1.0}; }

inline Matrix3 scenario_covariance() {
    Matrix3 rho;
    rho << 4.0, 3.2, 3.0, 3.2, 4.0, 3.84, 3.0, 3.84, 4.69;
    return rho * 1e-2;
}

inline TemperedStableParams scenario_jumps(double alpha = 0.7) { return {alpha, 2.8, 1.2, 0.0, 1.2, true}; }

inline NoiseSpec scenario_noise(double alpha = 0.7) {
    return {scenario_covariance(), Vector3(0.2, 0.8, 0.5), scenario_jumps(alpha)};
}

// Midpoint rule in log z over [e^-80, e^6]; slow but independent of the library quadrature.
inline double log_midpoint_levy_integral(const std::function<double(double)>& g, double alpha, double k,
                                         double lambda, int points = 400000) {
    const double lo = -80.0, hi = 6.0;
    const double h = (hi - lo) / points;
    long double sum = 0.0L;
    for (int i = 0; i < points; ++i) {
        double x = lo + (i + 0.5) * h;
        double z = std::exp(x);
        sum += g(z) * std::exp(-alpha * x - lambda * z);
    }
    return k * h * static_cast<double>(sum);
}

}  // namespace levysir::testing

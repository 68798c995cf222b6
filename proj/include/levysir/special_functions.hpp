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

// Gamma-family and zeta functions. Boost.Math's tgamma is a Lanczos
// approximation accurate to a few ulp in double precision.

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

namespace levysir {

inline double gamma_fn(double x) { return boost::math::tgamma(x); }

inline double log_gamma_fn(double x) { return boost::math::lgamma(x); }

/// Non-normalised lower incomplete gamma, integral of t^{a-1} e^{-t} over [0, x].
inline double lower_incomplete_gamma(double a, double x) {
    return boost::math::tgamma_lower(a, x);
}

/// Riemann zeta, including the analytic continuation to s < 1 (s != 1).
inline double riemann_zeta(double s) { return boost::math::zeta(s); }

}  // namespace levysir

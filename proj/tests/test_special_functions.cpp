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


#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "levysir/special_functions.hpp"

namespace {

using namespace levysir;

TEST(Gamma, HalfIntegerValues) {
    EXPECT_NEAR(gamma_fn(0.5), std::sqrt(std::numbers::pi), 1e-15);
    EXPECT_NEAR(gamma_fn(1.5), 0.5 * std::sqrt(std::numbers::pi), 1e-15);
    EXPECT_NEAR(gamma_fn(2.5) / 1.329340388179137, 1.0, 1e-14);
}

TEST(Gamma, RecurrenceHoldsToTwelveDigits) {
    for (double x : {0.05, 0.3, 0.7, 1.3, 2.9, 7.25}) {
        EXPECT_NEAR(gamma_fn(x + 1.0) / (x * gamma_fn(x)), 1.0, 1e-12) << x;
    }
}

TEST(Gamma, NegativeNonIntegerArgument) {
    // Gamma(-0.5) = -2 sqrt(pi)
    EXPECT_NEAR(gamma_fn(-0.5), -2.0 * std::sqrt(std::numbers::pi), 1e-14);
    EXPECT_NEAR(gamma_fn(0.3), 2.991568987687591, 1e-13);
}

TEST(Gamma, LogGammaMatchesLogOfGamma) {
    for (double x : {0.2, 1.7, 12.5}) EXPECT_NEAR(log_gamma_fn(x), std::log(gamma_fn(x)), 1e-13);
}

TEST(IncompleteGamma, ClosedFormForIntegerShape) {
    // gamma(2, x) = 1 - (1 + x) e^{-x}
    for (double x : {0.01, 0.5, 3.0, 20.0})
        EXPECT_NEAR(lower_incomplete_gamma(2.0, x), 1.0 - (1.0 + x) * std::exp(-x), 1e-15);
    EXPECT_NEAR(lower_incomplete_gamma(0.5, 1e9), std::sqrt(std::numbers::pi), 1e-12);
}

TEST(Zeta, KnownValues) {
    EXPECT_NEAR(riemann_zeta(2.0), std::numbers::pi * std::numbers::pi / 6.0, 1e-15);
    EXPECT_NEAR(riemann_zeta(0.5), -1.4603545088095868, 1e-13);
    EXPECT_NEAR(riemann_zeta(2.0 / 3.0), -2.447580736233660, 1e-12);
}

}  // namespace

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
#include <random>

#include "fixtures.hpp"
#include "levysir/errors.hpp"
#include "levysir/levy_model.hpp"
#include "levysir/quadrature.hpp"

namespace {

using namespace levysir;
using levysir::testing::log_midpoint_levy_integral;
using levysir::testing::scenario_jumps;

constexpr double second_moment_a07 = 1.982634634787007;  // 2.8 Gamma(1.3) / 1.2^1.3
constexpr double first_moment_a07 = 7.930538539148;        // 2.8 Gamma(0.3) / 1.2^0.3

TEST(Integrate, PolynomialIsExact) {
    auto r = integrate([](double x) { return x * x * x; }, 0.0, 2.0, 1e-14, 1e-12);
    EXPECT_NEAR(r.value, 4.0, 1e-14);
}

TEST(Integrate, EndpointSingularityConverges) {
    auto r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-12, 1e-8);
    EXPECT_NEAR(r.value, 2.0, 2e-8);
    EXPECT_LE(r.error, 2e-8);
}

TEST(Integrate, ReportsNonConvergenceWithEstimate) {
    try {
        integrate([](double x) { return std::sin(1.0 / x); }, 1e-9, 1.0, 1e-15, 1e-15, 60, 64);
        FAIL() << "expected NonConvergence";
    } catch (const NonConvergence& e) {
        EXPECT_TRUE(std::isfinite(e.estimate()));
        EXPECT_GT(e.error(), 0.0);
    }
}

TEST(LevyIntegral, SecondMomentMatchesClosedForm) {
    auto r = levy_integral([](double z) { return z * z; }, scenario_jumps());
    EXPECT_NEAR(r.value, 1.9826, 1e-4);
    EXPECT_NEAR(r.value / second_moment_a07, 1.0, 1e-10);
}

TEST(LevyIntegral, ZeroIntegrandGivesZero) {
    auto r = levy_integral([](double) { return 0.0; }, scenario_jumps());
    EXPECT_EQ(r.value, 0.0);
}

TEST(LevyIntegral, ShiftedSquareSplitsIntoMoments) {
    // Written naively the integrand rounds to zero below z ~ 1e-16; that costs ~3e-4.
    auto naive = levy_integral([](double z) { return (1.0 + z) * (1.0 + z) - 1.0; }, scenario_jumps());
    EXPECT_NEAR(naive.value, 17.844, 1e-2);
    auto stable = levy_integral([](double z) { return z * (2.0 + z); }, scenario_jumps());
    EXPECT_NEAR(stable.value, 2.0 * first_moment_a07 + second_moment_a07, 1e-5);
    EXPECT_FALSE(stable.noise_limited);
}

TEST(LevyIntegral, AgreesWithLogSpaceOracle) {
    auto g = [](double z) { return detail::x_minus_log1p(0.8 * z); };
    for (double alpha : {0.2, 0.7, 0.9, 1.5}) {
        auto ts = scenario_jumps(alpha);
        double lib = levy_integral(g, ts).value;
        double oracle = log_midpoint_levy_integral(g, alpha, ts.k_plus, ts.lambda_plus);
        EXPECT_NEAR(lib / oracle, 1.0, 1e-8) << "alpha " << alpha;
    }
}

TEST(LevyIntegral, Linearity) {
    auto ts = scenario_jumps();
    auto g = [](double z) { return z * z; };
    auto h = [](double z) { return detail::x_minus_log1p(z); };
    const double a = 2.5, b = -0.75;
    auto rg = levy_integral(g, ts);
    auto rh = levy_integral(h, ts);
    auto rc = levy_integral([&](double z) { return a * g(z) + b * h(z); }, ts);
    double bound = 2.0 * (std::abs(a) * rg.error + std::abs(b) * rh.error + rc.error);
    EXPECT_LE(std::abs(rc.value - (a * rg.value + b * rh.value)), bound);
}

TEST(LevyIntegral, IndependentOfSplitPoint) {
    auto ts = scenario_jumps();
    auto square = [](double z) { return z * z; };
    auto log_gap = [](double z) { return detail::x_minus_log1p(z); };
    QuadratureSettings base;
    auto ref_sq = levy_integral(square, ts, base);
    auto ref_log = levy_integral(log_gap, ts, base);
    for (double split : {1e-4, 1e-3, 1e-1}) {
        QuadratureSettings s;
        s.split = split;
        auto sq = levy_integral(square, ts, s);
        auto lg = levy_integral(log_gap, ts, s);
        EXPECT_LE(std::abs(sq.value - ref_sq.value), sq.error + ref_sq.error) << split;
        EXPECT_LE(std::abs(lg.value - ref_log.value), lg.error + ref_log.error) << split;
    }
}

TEST(LevyIntegral, TighterToleranceNeverWorsensAgreement) {
    auto ts = scenario_jumps();
    double previous = INFINITY;
    for (double tol : {1e-4, 5e-5, 2.5e-5, 1.25e-5, 6.25e-6}) {
        QuadratureSettings s;
        s.rel_tol = tol;
        s.abs_tol = tol * 1e-4;
        double gap = std::abs(levy_integral([](double z) { return z * z; }, ts, s).value - second_moment_a07);
        EXPECT_LE(gap, previous + 1e-15) << tol;
        previous = gap;
    }
}

TEST(LevyIntegral, SeriesOriginModeCrossChecksSubstitution) {
    auto ts = scenario_jumps();
    QuadratureSettings series;
    series.origin = OriginMethod::series;
    series.origin_order = 10;
    for (double sigma : {0.2, 0.8}) {
        auto g = [sigma](double z) { return detail::x_minus_log1p(sigma * z); };
        double a = levy_integral(g, ts).value;
        double b = levy_integral(g, ts, series).value;
        EXPECT_NEAR(b / a, 1.0, 1e-9) << sigma;
    }
}

TEST(LevyIntegral, TwoSidedMeasureAddsBothSides) {
    TemperedStableParams ts{0.5, 1.0, 1.0, 2.0, 3.0, true};
    double expected = gamma_fn(2.5) * (1.0 + 2.0 / std::pow(3.0, 2.5));
    auto r = levy_integral([](double z) { return std::abs(z * z * z); }, ts);
    EXPECT_NEAR(r.value / expected, 1.0, 1e-10);
}

TEST(LevyIntegral, RoundoffNoiseIsFlagged) {
    auto r = levy_integral([](double z) { return (1.0 + z) * (1.0 + z) - 1.0; }, scenario_jumps());
    EXPECT_TRUE(r.noise_limited);
    EXPECT_GT(r.error, 0.0);
}

TEST(LevyIntegral, DetectsDivergenceAtOrigin) {
    auto ts = scenario_jumps(1.5);
    EXPECT_THROW(levy_integral([](double z) { return z; }, ts), DivergentIntegrand);
    EXPECT_THROW(levy_integral([](double) { return 1.0; }, scenario_jumps(0.7)), DivergentIntegrand);
}

TEST(LevyIntegral, RejectsBadSettings) {
    QuadratureSettings s;
    s.split = 0.0;
    EXPECT_THROW(levy_integral([](double z) { return z * z; }, scenario_jumps(), s), DomainError);
}

TEST(LevyIntegral, RandomMomentsMatchGammaClosedForm) {
    std::mt19937_64 gen(20260);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 25; ++i) {
        double alpha = 0.05 + 1.9 * u01(gen);
        if (std::abs(alpha - 1.0) < 1e-3) alpha += 0.01;
        double k = 0.1 + 5.0 * u01(gen);
        double lambda = 0.2 + 4.0 * u01(gen);
        double p = alpha + 0.1 + 3.0 * u01(gen);
        TemperedStableParams ts{alpha, k, lambda, 0.0, 1.0, true};
        double expected = k * gamma_fn(p - alpha) / std::pow(lambda, p - alpha);
        double got = levy_integral([p](double z) { return std::pow(z, p); }, ts).value;
        EXPECT_NEAR(got / expected, 1.0, 1e-8) << alpha << " " << p;
    }
}

TEST(CompensatorRate, ClosedForms) {
    EXPECT_NEAR(compensator_rate(scenario_jumps()), 7.9305, 1e-3);
    EXPECT_NEAR(compensator_rate({0.5, 1.0, 1.0, 0.0, 1.0, true}), 1.77245, 1e-4);
    auto by_quadrature = levy_integral([](double z) { return z; }, scenario_jumps()).value;
    EXPECT_NEAR(compensator_rate(scenario_jumps()) / by_quadrature, 1.0, 1e-10);
}

TEST(CompensatorRate, RejectsInfiniteVariationIndex) {
    EXPECT_THROW(compensator_rate(scenario_jumps(1.3)), DomainError);
}

}  // namespace

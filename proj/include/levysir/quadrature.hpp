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

// Integration against the tempered-stable Levy density.
//
// Each side of the measure is split at z = split. The inner piece carries the
// z^{-alpha-1} singularity; by default it is integrated after the exponential
// map z = split * e^{-s}, which turns any power-law behaviour g(z) ~ z^p at the
// origin into an exponential decay e^{-(p - alpha) s} on [0, inf). The outer
// piece is integrated panel by panel until the exponential tempering has
// killed the tail. The alternative "series" origin mode interpolates
// g(z) e^{-lambda z} / z^2 by a polynomial and integrates the monomials
// exactly; it needs g(z)/z^2 bounded and is kept as a cross-check.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "levysir/errors.hpp"
#include "levysir/params.hpp"
#include "levysir/special_functions.hpp"

namespace levysir {

enum class OriginMethod { substitution, series };

struct QuadratureSettings {
    double split = 1e-2;
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_depth = 60;
    int origin_order = 8;
    OriginMethod origin = OriginMethod::substitution;

    std::vector<std::string> violations() const {
        std::vector<std::string> out;
        if (!(split > 0.0)) out.push_back("split must be > 0");
        if (!(rel_tol > 0.0)) out.push_back("rel_tol must be > 0");
        if (!(abs_tol > 0.0)) out.push_back("abs_tol must be > 0");
        if (max_depth < 1) out.push_back("max_depth must be >= 1");
        if (origin_order < 2) out.push_back("origin_order must be >= 2");
        return out;
    }
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
    bool noise_limited = false;  // integrand roundoff kept the error above the request
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr std::array<double, 11> kronrod_nodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

inline constexpr std::array<double, 11> kronrod_weights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525424855, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Gauss weights for kronrod_nodes[1], [3], [5], [7], [9].
inline constexpr std::array<double, 5> gauss_weights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    int depth;
    int stalls = 0;  // consecutive bisections that did not lower the error

    friend bool operator<(const Panel& x, const Panel& y) { return x.error < y.error; }
};

template <class F>
double checked_eval(F& f, double x) {
    double v = f(x);
    if (!std::isfinite(v)) throw DivergentIntegrand("integrand is not finite at x = " + std::to_string(x));
    return v;
}

template <class F>
Panel kronrod21(F& f, double a, double b, int depth) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    constexpr double tiny = std::numeric_limits<double>::min();
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    std::array<double, 21> fv{};
    double fc = checked_eval(f, center);
    double kronrod = fc * kronrod_weights[10];
    double gauss = 0.0;
    double resabs = std::abs(kronrod);
    for (int j = 0; j < 10; ++j) {
        double dx = half * kronrod_nodes[j];
        double f1 = checked_eval(f, center - dx);
        double f2 = checked_eval(f, center + dx);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        kronrod += kronrod_weights[j] * (f1 + f2);
        resabs += kronrod_weights[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) gauss += gauss_weights[j / 2] * (f1 + f2);
    }
    double mean = 0.5 * kronrod;
    double resasc = kronrod_weights[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j)
        resasc += kronrod_weights[j] * (std::abs(fv[2 * j] - mean) + std::abs(fv[2 * j + 1] - mean));

    double value = kronrod * half;
    double error = std::abs((kronrod - gauss) * half);
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    if (resasc != 0.0 && error != 0.0) error = resasc * std::min(1.0, std::pow(200.0 * error / resasc, 1.5));
    if (resabs > tiny / (50.0 * eps)) error = std::max(50.0 * eps * resabs, error);
    return {a, b, value, error, depth, 0};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over [a, b].
/// Panels are bisected worst-first; a panel is never split beyond max_depth.
/// A panel whose error fails to drop over three successive bisections is
/// treated as roundoff-limited and frozen; if such panels alone keep the total
/// above tolerance the estimate is returned with noise_limited set.
template <class F>
QuadratureResult integrate(F&& f, double a, double b, double abs_tol, double rel_tol, int max_depth = 60,
                           std::size_t max_panels = 200000) {
    if (a == b) return {};
    std::priority_queue<detail::Panel> open;
    std::vector<detail::Panel> frozen;
    open.push(detail::kronrod21(f, a, b, 0));
    std::size_t panels = 1;
    bool noise = false;

    auto totals = [&] {
        double value = 0.0, error = 0.0;
        auto q = open;
        while (!q.empty()) {
            value += q.top().value;
            error += q.top().error;
            q.pop();
        }
        for (const auto& p : frozen) {
            value += p.value;
            error += p.error;
        }
        return QuadratureResult{value, error, noise};
    };

    double value = open.top().value;
    double error = open.top().error;
    double noise_error = 0.0;
    while (true) {
        double target = std::max(abs_tol, rel_tol * std::abs(value));
        if (error <= target) break;
        if (noise && error - noise_error <= 0.1 * target) break;
        if (open.empty() || panels >= max_panels) {
            auto t = totals();
            throw NonConvergence("adaptive quadrature did not reach tolerance", t.value, t.error);
        }
        detail::Panel worst = open.top();
        open.pop();
        if (worst.depth >= max_depth) {
            frozen.push_back(worst);
            continue;
        }
        double mid = 0.5 * (worst.a + worst.b);
        auto left = detail::kronrod21(f, worst.a, mid, worst.depth + 1);
        auto right = detail::kronrod21(f, mid, worst.b, worst.depth + 1);
        panels += 2;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        int stalls = left.error + right.error >= worst.error ? worst.stalls + 1 : 0;
        left.stalls = right.stalls = stalls;
        for (const auto& child : {left, right}) {
            if (stalls >= 3) {
                frozen.push_back(child);
                noise_error += child.error;
                noise = true;
            } else {
                open.push(child);
            }
        }
        // Keep the running sums honest against cancellation drift.
        if (panels % 512 == 0) {
            auto t = totals();
            value = t.value;
            error = t.error;
            noise_error = 0.0;
            for (const auto& p : frozen)
                if (p.stalls >= 3) noise_error += p.error;
        }
    }
    return totals();
}

namespace detail {

/// Integral over (0, split] of h(z) z^{-alpha-1} e^{-lambda z} via z = split * e^{-s}.
template <class H>
QuadratureResult origin_by_substitution(H& h, double alpha, double lambda, const QuadratureSettings& s) {
    const double split = s.split;
    auto f = [&](double t) {
        double z = split * std::exp(-t);
        if (z == 0.0) return 0.0;
        return h(z) * std::pow(z, -alpha) * std::exp(-lambda * z);
    };
    // Stop before z underflows.
    const double t_max = std::log(split) + 700.0;

    QuadratureResult out;
    double a = 0.0;
    double width = 1.0;
    double fa = std::abs(checked_eval(f, a));
    int growing = 0;
    while (true) {
        double b = std::min(a + width, t_max);
        auto panel = integrate(f, a, b, s.abs_tol, s.rel_tol, s.max_depth);
        out.value += panel.value;
        out.error += panel.error;
        out.noise_limited |= panel.noise_limited;
        double fb = std::abs(checked_eval(f, b));
        double tol = std::max(s.abs_tol, s.rel_tol * std::abs(out.value));

        if (fb == 0.0) return out;
        if (fb < fa && fa > 0.0) {
            growing = 0;
            double rate = std::log(fa / fb) / (b - a);
            double tail = fb / rate;
            if (tail < 0.1 * tol) {
                out.value += std::copysign(tail, f(b));
                out.error += tail;
                return out;
            }
            if (b >= t_max) {
                if (tail <= tol) {
                    out.value += std::copysign(tail, f(b));
                    out.error += tail;
                    return out;
                }
                throw NonConvergence("origin tail decays too slowly", out.value, out.error + tail);
            }
        } else if (b >= 4.0) {
            if (++growing >= 2) throw DivergentIntegrand("integrand is not integrable against the Levy density at 0");
        }
        if (b >= t_max) throw DivergentIntegrand("integrand does not decay at the origin");
        a = b;
        fa = fb;
        width *= 2.0;
    }
}

/// Integral over (0, split] using a polynomial model of h(z) e^{-lambda z} / z^2.
template <class H>
QuadratureResult origin_by_series(H& h, double alpha, double lambda, const QuadratureSettings& s) {
    const double split = s.split;
    auto integral_with_degree = [&](int degree) {
        const int n = degree + 1;
        Eigen::MatrixXd vandermonde(n, n);
        Eigen::VectorXd rhs(n);
        for (int i = 0; i < n; ++i) {
            // Chebyshev points of [0, 1], all strictly inside.
            double x = 0.5 * (1.0 - std::cos(M_PI * (2.0 * i + 1.0) / (2.0 * n)));
            double z = split * x;
            rhs[i] = h(z) * std::exp(-lambda * z) / (x * x);
            double power = 1.0;
            for (int j = 0; j < n; ++j) {
                vandermonde(i, j) = power;
                power *= x;
            }
        }
        Eigen::VectorXd coeffs = vandermonde.colPivHouseholderQr().solve(rhs);
        double sum = 0.0;
        for (int j = 0; j < n; ++j) sum += coeffs[j] / (j + 2.0 - alpha);
        // h(z) e^{-lambda z} = x^2 Q(x) with z = split x, dz = split dx.
        return std::pow(split, -alpha) * sum;
    };
    double fine = integral_with_degree(s.origin_order);
    double coarse = integral_with_degree(s.origin_order - 2);
    return {fine, std::abs(fine - coarse)};
}

/// Integral over [split, inf) of h(z) z^{-alpha-1} e^{-lambda z}.
template <class H>
QuadratureResult tail_part(H& h, double alpha, double lambda, const QuadratureSettings& s) {
    auto f = [&](double z) { return h(z) * std::pow(z, -alpha - 1.0) * std::exp(-lambda * z); };
    QuadratureResult out;
    double a = s.split;
    double width = 1.0 / lambda;
    double fa = std::abs(checked_eval(f, a));
    while (true) {
        double b = a + width;
        auto panel = integrate(f, a, b, s.abs_tol, s.rel_tol, s.max_depth);
        out.value += panel.value;
        out.error += panel.error;
        out.noise_limited |= panel.noise_limited;
        double fb = std::abs(checked_eval(f, b));
        double tol = std::max(s.abs_tol, s.rel_tol * std::abs(out.value));
        // For polynomially bounded h the remaining mass is at most ~ f(b) / lambda
        // once f has started to decrease.
        if (fb <= fa && 2.0 * fb / lambda < 0.1 * tol) {
            out.error += fb / lambda;
            return out;
        }
        if (lambda * b > 745.0) return out;
        a = b;
        fa = fb;
        width *= 2.0;
    }
}

template <class H>
QuadratureResult one_side(H&& h, double alpha, double lambda, const QuadratureSettings& s) {
    QuadratureResult inner = s.origin == OriginMethod::series ? origin_by_series(h, alpha, lambda, s)
                                                              : origin_by_substitution(h, alpha, lambda, s);
    QuadratureResult outer = tail_part(h, alpha, lambda, s);
    return {inner.value + outer.value, inner.error + outer.error, inner.noise_limited || outer.noise_limited};
}

}  // namespace detail

/// Integral of g against the tempered-stable Levy measure, over its active sides.
/// g must vanish at 0 fast enough for the integral to exist; otherwise
/// DivergentIntegrand is thrown.
template <class G>
QuadratureResult levy_integral(G&& g, const TemperedStableParams& ts, const QuadratureSettings& s = {}) {
    ts.validate();
    if (auto v = s.violations(); !v.empty()) throw DomainError("invalid quadrature settings: " + v.front());
    QuadratureResult out;
    if (ts.k_plus > 0.0) {
        auto r = detail::one_side([&](double z) { return g(z); }, ts.alpha, ts.lambda_plus, s);
        out.value += ts.k_plus * r.value;
        out.error += ts.k_plus * r.error;
        out.noise_limited |= r.noise_limited;
    }
    if (ts.k_minus > 0.0) {
        auto r = detail::one_side([&](double z) { return g(-z); }, ts.alpha, ts.lambda_minus, s);
        out.value += ts.k_minus * r.value;
        out.error += ts.k_minus * r.error;
        out.noise_limited |= r.noise_limited;
    }
    return out;
}

/// Mean jump mass per unit time, integral of z nu(dz). Finite only for alpha < 1.
inline double compensator_rate(const TemperedStableParams& ts) {
    ts.validate();
    if (ts.alpha >= 1.0) throw DomainError("compensator rate requires alpha < 1 (first moment diverges at 0)");
    double g = gamma_fn(1.0 - ts.alpha);
    double rate = 0.0;
    if (ts.k_plus > 0.0) rate += ts.k_plus * g / std::pow(ts.lambda_plus, 1.0 - ts.alpha);
    if (ts.k_minus > 0.0) rate -= ts.k_minus * g / std::pow(ts.lambda_minus, 1.0 - ts.alpha);
    return rate;
}

}  // namespace levysir

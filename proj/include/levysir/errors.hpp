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

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace levysir {

/// Argument outside the domain of an operation (e.g. a divergent moment).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Adaptive integration stopped before meeting its tolerance.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, double estimate, double error)
        : std::runtime_error(what), estimate_(estimate), error_(error) {}

    double estimate() const noexcept { return estimate_; }
    double error() const noexcept { return error_; }

private:
    double estimate_;
    double error_;
};

/// The integrand does not decay fast enough at the origin for the integral to exist.
class DivergentIntegrand : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A time step produced a non-finite state.
class StepDiverged : public std::runtime_error {
public:
    StepDiverged(const std::string& what, double t, std::array<double, 3> state)
        : std::runtime_error(what), time_(t), state_(state) {}

    double time() const noexcept { return time_; }
    const std::array<double, 3>& state() const noexcept { return state_; }

private:
    double time_;
    std::array<double, 3> state_;
};

/// Configuration problems, collected rather than reported one at a time.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems)
        : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& problems) {
        std::string out;
        for (const auto& p : problems) {
            if (!out.empty()) out += '\n';
            out += p;
        }
        return out;
    }

    std::vector<std::string> problems_;
};

}  // namespace levysir

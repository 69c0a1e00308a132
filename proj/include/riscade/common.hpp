// SPDX-License-Identifier: Apache-2.0
//
// riscade: correlated mixture-gamma channel synthesis and linear estimation
// for RIS-aided THz uplinks
// Copyright (C) 2026 the riscade authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace riscade
{

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double speed_of_light = 299792458.0; // m/s
inline constexpr double euler_gamma = 0.57721566490153286061;
inline constexpr double free_space_impedance = 376.730313668; // ohms

// Bad user input: malformed configs, out-of-range parameters. CLI exit code 1.
class validation_error : public std::runtime_error
{
  public:
    explicit validation_error(const std::string &msg) : std::runtime_error(msg) {}
};

// The math gave up: quadrature non-convergence, indefinite matrices,
// near-singular impedance. CLI exit code 2.
class numerical_error : public std::runtime_error
{
  public:
    explicit numerical_error(const std::string &msg) : std::runtime_error(msg) {}
};

// Maps any angle to [-pi, pi).
inline double wrap_angle(double a)
{
    a = std::fmod(a + pi, 2.0 * pi);
    if (a < 0.0)
        a += 2.0 * pi;
    return a - pi;
}

} // namespace riscade

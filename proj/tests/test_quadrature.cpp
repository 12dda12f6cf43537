// SPDX-License-Identifier: Apache-2.0
//
// hapsnoma: link-level simulator for HAPS MIMO-NOMA downlinks
// Copyright (C) 2026 The hapsnoma authors
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

#include "catch_amalgamated.hpp"
#include <hapsnoma/quadrature.hpp>

#include <cmath>
#include <numeric>

using hapsnoma::gauss_legendre;

TEST_CASE("Quadrature - Weights sum to interval length")
{
    for (std::size_t n : {1, 2, 5, 30, 61})
    {
        const auto r = gauss_legendre<double>(n, -0.3, 2.2);
        const double w = std::accumulate(r.weights.begin(), r.weights.end(), 0.0);
        CHECK(std::abs(w - 2.5) < 1e-13);
        for (double x : r.nodes)
            CHECK((x > -0.3 && x < 2.2));
    }
}

TEST_CASE("Quadrature - Exact for polynomials up to degree 2n-1")
{
    const std::size_t n = 6;
    const auto r = gauss_legendre<double>(n, 0.0, 1.0);
    for (int deg = 0; deg <= int(2 * n - 1); ++deg)
    {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += r.weights[i] * std::pow(r.nodes[i], deg);
        CHECK(std::abs(s - 1.0 / double(deg + 1)) < 1e-14);
    }
}

TEST_CASE("Quadrature - Known three-point rule")
{
    const auto r = gauss_legendre<double>(3);
    const double x = std::sqrt(0.6);
    CHECK(std::abs(r.nodes[0] + x) < 1e-15);
    CHECK(std::abs(r.nodes[1]) < 1e-15);
    CHECK(std::abs(r.nodes[2] - x) < 1e-15);
    CHECK(std::abs(r.weights[0] - 5.0 / 9.0) < 1e-14);
    CHECK(std::abs(r.weights[1] - 8.0 / 9.0) < 1e-14);
}

TEST_CASE("Quadrature - Oscillatory integrand")
{
    // int_{-1}^{1} exp(j a x) dx = 2 sin(a) / a
    const double a = 25.0;
    const auto r = gauss_legendre<double>(30);
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i)
    {
        re += r.weights[i] * std::cos(a * r.nodes[i]);
        im += r.weights[i] * std::sin(a * r.nodes[i]);
    }
    CHECK(std::abs(re - 2.0 * std::sin(a) / a) < 1e-12);
    CHECK(std::abs(im) < 1e-14);
}

TEST_CASE("Quadrature - Float instantiation")
{
    const auto r = gauss_legendre<float>(8, 0.0f, 2.0f);
    float s = 0.0f;
    for (std::size_t i = 0; i < r.size(); ++i)
        s += r.weights[i] * r.nodes[i] * r.nodes[i];
    CHECK(std::abs(s - 8.0f / 3.0f) < 1e-5f);
}

TEST_CASE("Quadrature - Zero nodes rejected")
{
    CHECK_THROWS_AS(gauss_legendre<double>(0), hapsnoma::domain_error);
}

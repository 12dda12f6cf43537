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

#ifndef HAPSNOMA_QUADRATURE_HPP
#define HAPSNOMA_QUADRATURE_HPP

#include "errors.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

namespace hapsnoma
{
    template <typename Real = double>
    struct QuadratureRule
    {
        std::vector<Real> nodes;
        std::vector<Real> weights;

        std::size_t size() const { return nodes.size(); }
    };

    // Gauss-Legendre nodes and weights on [lo, hi], Newton iteration on P_n started from
    // the Tricomi estimate. Exact for polynomials of degree <= 2n-1.
    template <typename Real = double>
    QuadratureRule<Real> gauss_legendre(std::size_t n, Real lo = Real(-1), Real hi = Real(1))
    {
        if (n == 0)
            throw domain_error("gauss_legendre: need at least one node");

        QuadratureRule<Real> rule;
        rule.nodes.resize(n);
        rule.weights.resize(n);

        const Real mid = Real(0.5) * (hi + lo);
        const Real half = Real(0.5) * (hi - lo);
        const Real eps = Real(4) * std::numeric_limits<Real>::epsilon();
        const std::size_t n_roots = (n + 1) / 2;

        for (std::size_t i = 0; i < n_roots; ++i)
        {
            Real z = std::cos(std::numbers::pi_v<Real> * (Real(i) + Real(0.75)) / (Real(n) + Real(0.5)));
            Real dp = Real(0);
            for (int iter = 0; iter < 100; ++iter)
            {
                // Three-term recurrence for P_n(z) and P_{n-1}(z)
                Real p0 = Real(1), p1 = Real(0);
                for (std::size_t j = 1; j <= n; ++j)
                {
                    const Real p2 = p1;
                    p1 = p0;
                    p0 = (Real(2 * j - 1) * z * p1 - Real(j - 1) * p2) / Real(j);
                }
                dp = Real(n) * (z * p0 - p1) / (z * z - Real(1));
                const Real step = p0 / dp;
                z -= step;
                if (std::abs(step) <= eps)
                    break;
            }
            const Real w = Real(2) / ((Real(1) - z * z) * dp * dp);
            rule.nodes[i] = mid - half * z;
            rule.nodes[n - 1 - i] = mid + half * z;
            rule.weights[i] = half * w;
            rule.weights[n - 1 - i] = half * w;
        }
        return rule;
    }
}

#endif

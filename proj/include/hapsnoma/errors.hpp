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

#ifndef HAPSNOMA_ERRORS_HPP
#define HAPSNOMA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hapsnoma
{
    // Argument outside the mathematical domain of an operation (index out of range, d <= r, ...)
    struct domain_error : std::domain_error
    {
        using std::domain_error::domain_error;
    };

    // Zero angular spread handed to the one-ring integral, or a detection column that
    // lies entirely in the span of the interfering columns
    struct degenerate_error : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // Covariance with an eigenvalue below the PSD clamp threshold
    struct numerical_error : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // Inconsistent scenario (unknown config key, n_rx < clusters, ...)
    struct config_error : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    // QoS + SIC minimum power exceeds the budget
    struct infeasible_error : std::runtime_error
    {
        double p_required; // [W]
        double p_budget;   // [W]

        infeasible_error(double required, double budget)
            : std::runtime_error("required power " + std::to_string(required) +
                                 " W exceeds budget " + std::to_string(budget) + " W"),
              p_required(required), p_budget(budget)
        {
        }
    };
}

#endif

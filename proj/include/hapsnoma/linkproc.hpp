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

#ifndef HAPSNOMA_LINKPROC_HPP
#define HAPSNOMA_LINKPROC_HPP

#include "errors.hpp"
#include "types.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace hapsnoma
{
    struct EffectiveLink
    {
        CVector detection;        // Unit-norm receive combiner v, length n_rx
        double eff_gain = 0.0;    // |v^H H p_m|^2
        int cluster = 0;          // Cluster index m (0-based), equal to the precoder column
        int rank_in_cluster = 0;  // 1 = strongest
        int user = 0;             // Original user index
    };

    struct Detection
    {
        CVector vector;
        double eff_gain = 0.0;
    };

    inline CMatrix precoder(int n_antennas)
    {
        if (n_antennas < 1)
            throw domain_error("precoder: antenna count must be positive");
        return CMatrix::Identity(n_antennas, n_antennas);
    }

    // Combiner for cluster m (0-based) that nulls every other precoder column of H (n_rx x M):
    // column m projected onto the orthogonal complement of the remaining columns, normalised.
    inline Detection detection_vector(const CMatrix &H, int m)
    {
        const Eigen::Index n_rx = H.rows(), n_tx = H.cols();
        if (m < 0 || m >= n_tx)
            throw domain_error("detection_vector: cluster index out of range");
        if (n_rx < n_tx)
            throw config_error("detection_vector: need n_rx >= M to null inter-cluster interference (n_rx = " +
                               std::to_string(n_rx) + ", M = " + std::to_string(n_tx) + ")");

        const CVector target = H.col(m);
        CVector residual = target;
        if (n_tx > 1)
        {
            CMatrix others(n_rx, n_tx - 1);
            for (Eigen::Index k = 0, c = 0; k < n_tx; ++k)
                if (k != m)
                    others.col(c++) = H.col(k);

            Eigen::ColPivHouseholderQR<CMatrix> qr(others);
            const Eigen::Index rank = qr.rank();
            if (rank > 0)
            {
                const CMatrix Q = CMatrix(qr.householderQ()).leftCols(rank);
                // Second pass recovers orthogonality lost to cancellation
                residual -= Q * (Q.adjoint() * residual);
                residual -= Q * (Q.adjoint() * residual);
            }
        }

        const double rnorm = residual.norm();
        if (!(rnorm > 1e-12 * target.norm()))
            throw degenerate_error("detection_vector: column lies in the span of the interfering columns");

        Detection out;
        out.vector = residual / rnorm;
        out.eff_gain = std::norm(out.vector.dot(target));
        return out;
    }

    // Sorts by descending effective gain (ties: lower user index) and assigns ranks 1..L
    inline std::vector<EffectiveLink> order_cluster(std::vector<EffectiveLink> links)
    {
        if (links.empty())
            throw domain_error("order_cluster: empty cluster");
        std::stable_sort(links.begin(), links.end(), [](const EffectiveLink &a, const EffectiveLink &b) {
            if (a.eff_gain != b.eff_gain)
                return a.eff_gain > b.eff_gain;
            return a.user < b.user;
        });
        for (std::size_t i = 0; i < links.size(); ++i)
            links[i].rank_in_cluster = int(i) + 1;
        return links;
    }

    // Rate [bps/Hz] of the user at 0-based position l of its cluster. omega holds the power
    // fractions of the cluster in decoding order; only positions before l interfere.
    inline double user_rate(std::span<const double> omega, double eff_gain, double rho, std::size_t l)
    {
        if (l >= omega.size())
            throw domain_error("user_rate: position outside cluster");
        double interference = 0.0;
        for (std::size_t k = 0; k < l; ++k)
            interference += omega[k];
        return std::log2(1.0 + rho * omega[l] * eff_gain / (1.0 + rho * eff_gain * interference));
    }
}

#endif

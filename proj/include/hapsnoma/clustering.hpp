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

#ifndef HAPSNOMA_CLUSTERING_HPP
#define HAPSNOMA_CLUSTERING_HPP

#include "errors.hpp"
#include "types.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

namespace hapsnoma
{
    struct ClusterAssignment
    {
        std::vector<std::vector<int>> clusters; // User indices; the first entry of each cluster is its head
        double corr_threshold = 0.7;
        int max_per_cluster = 2;

        std::size_t size() const { return clusters.size(); }
    };

    // |h_i^H h_j| / (|h_i| |h_j|)
    inline double correlation_coefficient(const CVector &h_i, const CVector &h_j)
    {
        if (h_i.size() != h_j.size())
            throw domain_error("correlation_coefficient: vectors differ in length");
        const double ni = h_i.norm(), nj = h_j.norm();
        if (!(ni > 0.0) || !(nj > 0.0))
            throw domain_error("correlation_coefficient: zero vector");
        return std::min(1.0, std::abs(h_i.dot(h_j)) / (ni * nj));
    }

    // Greedy head-based clustering on LoS vectors. Users are visited by descending norm (ties by
    // index); each joins the first non-full cluster whose head correlates >= threshold, otherwise
    // founds a new cluster. Once max_clusters exist, an unmatched user goes to the non-full
    // cluster with the highest head correlation. max_clusters <= 0 means unlimited.
    inline ClusterAssignment cluster_users(const std::vector<CVector> &los_channels, double corr_threshold,
                                           int max_per_cluster, int max_clusters = 0)
    {
        if (los_channels.empty())
            throw domain_error("cluster_users: no users");
        if (max_per_cluster < 1)
            throw domain_error("cluster_users: cluster cap must be positive");
        const std::size_t n = los_channels.size();
        if (max_clusters > 0 && n > std::size_t(max_clusters) * std::size_t(max_per_cluster))
            throw domain_error("cluster_users: more users than cluster capacity");

        std::vector<int> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::vector<double> norms(n);
        for (std::size_t i = 0; i < n; ++i)
            norms[i] = los_channels[i].norm();
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return norms[a] > norms[b]; });

        ClusterAssignment out;
        out.corr_threshold = corr_threshold;
        out.max_per_cluster = max_per_cluster;

        for (const int user : order)
        {
            int best = -1;
            double best_corr = -1.0;
            bool placed = false;
            for (std::size_t c = 0; c < out.clusters.size(); ++c)
            {
                auto &members = out.clusters[c];
                if (int(members.size()) >= max_per_cluster)
                    continue;
                const double corr = correlation_coefficient(los_channels[members.front()], los_channels[user]);
                if (corr >= corr_threshold)
                {
                    members.push_back(user);
                    placed = true;
                    break;
                }
                if (corr > best_corr)
                {
                    best_corr = corr;
                    best = int(c);
                }
            }
            if (placed)
                continue;
            if (max_clusters <= 0 || int(out.clusters.size()) < max_clusters)
                out.clusters.push_back({user});
            else
                out.clusters[std::size_t(best)].push_back(user);
        }
        return out;
    }
}

#endif

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

#ifndef HAPSNOMA_CHANNEL_IO_HPP
#define HAPSNOMA_CHANNEL_IO_HPP

#include "channel.hpp"
#include "errors.hpp"

#include <json.hpp>

#include <vector>

namespace hapsnoma
{
    // Debug dump of ChannelStats. Complex arrays are flattened row-major as interleaved
    // [re, im, re, im, ...] doubles; see docs/channel_stats_format.md.
    inline nlohmann::ordered_json to_json(const ChannelStats &s)
    {
        const Eigen::Index n = s.size();
        std::vector<double> mean, cov;
        mean.reserve(std::size_t(2 * n));
        cov.reserve(std::size_t(2 * n * n));
        for (Eigen::Index i = 0; i < n; ++i)
        {
            mean.push_back(s.los_mean[i].real());
            mean.push_back(s.los_mean[i].imag());
        }
        for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index b = 0; b < n; ++b)
            {
                cov.push_back(s.covariance(a, b).real());
                cov.push_back(s.covariance(a, b).imag());
            }
        return nlohmann::ordered_json{{"size", n},           {"beta_los", s.beta_los}, {"beta_nlos", s.beta_nlos},
                                      {"has_los", s.has_los}, {"p_los", s.p_los},       {"los_mean", mean},
                                      {"covariance", cov}};
    }

    inline ChannelStats channel_stats_from_json(const nlohmann::ordered_json &j)
    {
        ChannelStats s;
        const auto n = j.at("size").get<Eigen::Index>();
        const auto mean = j.at("los_mean").get<std::vector<double>>();
        const auto cov = j.at("covariance").get<std::vector<double>>();
        if (n < 0 || mean.size() != std::size_t(2 * n) || cov.size() != std::size_t(2 * n * n))
            throw domain_error("channel_stats_from_json: array sizes do not match 'size'");
        s.beta_los = j.at("beta_los").get<double>();
        s.beta_nlos = j.at("beta_nlos").get<double>();
        s.has_los = j.at("has_los").get<bool>();
        s.p_los = j.at("p_los").get<double>();
        s.los_mean.resize(n);
        for (Eigen::Index i = 0; i < n; ++i)
            s.los_mean[i] = cplx(mean[std::size_t(2 * i)], mean[std::size_t(2 * i + 1)]);
        s.covariance.resize(n, n);
        for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index b = 0; b < n; ++b)
            {
                const auto k = std::size_t(2 * (a * n + b));
                s.covariance(a, b) = cplx(cov[k], cov[k + 1]);
            }
        return s;
    }
}

#endif

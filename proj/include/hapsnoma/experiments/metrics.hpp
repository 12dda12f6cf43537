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

#ifndef HAPSNOMA_EXPERIMENTS_METRICS_HPP
#define HAPSNOMA_EXPERIMENTS_METRICS_HPP

#include "../errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace hapsnoma::experiments
{
    // Marker for sweep points where no trial admitted a feasible allocation
    inline constexpr double infeasible = std::numeric_limits<double>::quiet_NaN();

    struct MetricSeries
    {
        std::string x_label;
        std::vector<double> x_values;
        std::vector<std::pair<std::string, std::vector<double>>> series; // Column order is output order
        nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

        std::vector<double> &add(const std::string &name)
        {
            series.emplace_back(name, std::vector<double>(x_values.size(), infeasible));
            return series.back().second;
        }

        const std::vector<double> &at(const std::string &name) const
        {
            for (const auto &[n, v] : series)
                if (n == name)
                    return v;
            throw domain_error("MetricSeries: no column '" + name + "'");
        }

        bool has(const std::string &name) const
        {
            for (const auto &s : series)
                if (s.first == name)
                    return true;
            return false;
        }

        // Keeps x and the named columns only
        MetricSeries select(const std::vector<std::string> &names) const
        {
            MetricSeries out;
            out.x_label = x_label;
            out.x_values = x_values;
            out.metadata = metadata;
            for (const auto &n : names)
                out.series.emplace_back(n, at(n));
            return out;
        }
    };

    // Rate per consumed watt [bps/Hz/W]
    inline double energy_efficiency(double sum_rate, double p_transmit, double p_fixed = 0.0)
    {
        const double denom = p_transmit + p_fixed;
        if (!(denom > 0.0))
            throw domain_error("energy_efficiency: total power must be positive");
        return sum_rate / denom;
    }

    inline std::string format_value(double v)
    {
        if (std::isnan(v))
            return "infeasible";
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.15g", v);
        return buf;
    }

    inline void write_csv(std::ostream &os, const MetricSeries &s)
    {
        os << s.x_label;
        for (const auto &col : s.series)
            os << ',' << col.first;
        os << '\n';
        for (std::size_t i = 0; i < s.x_values.size(); ++i)
        {
            os << format_value(s.x_values[i]);
            for (const auto &col : s.series)
                os << ',' << format_value(col.second[i]);
            os << '\n';
        }
    }

    inline nlohmann::ordered_json to_json(const MetricSeries &s)
    {
        auto values = [](const std::vector<double> &v) {
            nlohmann::ordered_json arr = nlohmann::ordered_json::array();
            for (double x : v)
                arr.push_back(std::isnan(x) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(x));
            return arr;
        };
        nlohmann::ordered_json j;
        j["x_label"] = s.x_label;
        j["x_values"] = values(s.x_values);
        nlohmann::ordered_json cols = nlohmann::ordered_json::object();
        for (const auto &[name, v] : s.series)
            cols[name] = values(v);
        j["series"] = cols;
        j["metadata"] = s.metadata;
        return j;
    }

    inline void write_json(std::ostream &os, const MetricSeries &s) { os << to_json(s).dump(2) << '\n'; }
}

#endif

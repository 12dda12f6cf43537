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

#ifndef HAPSNOMA_EXPERIMENTS_CONFIG_HPP
#define HAPSNOMA_EXPERIMENTS_CONFIG_HPP

#include "../errors.hpp"
#include "../geometry.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace hapsnoma::experiments
{
    enum class Platform
    {
        haps,
        terrestrial
    };

    inline std::string to_string(Platform p) { return p == Platform::haps ? "haps" : "terrestrial"; }

    struct ScenarioConfig
    {
        Platform platform = Platform::haps;
        double cell_radius = 1000.0;          // [m]
        double carrier_freq = 2.5e9;          // [Hz]
        int n_clusters = 4;                   // Also the number of transmit antennas
        int users_per_cluster = 2;
        int n_rx = 4;                         // Receive antennas per user
        double corr_threshold = 0.7;
        double r_min = 2.0;                   // [bps/Hz]
        double p_tol_dbm = 1.0;
        double noise_density_dbm_hz = -174.0;
        double bandwidth_hz = 10e6;
        double kappa = 9.61;
        double omega = 0.16;
        double ring_radius = 50.0;            // [m]
        std::uint64_t seed = 1;
        int n_trials = 500;
        double fixed_circuit_power_w = 0.0;

        // Repo-level knobs
        double haps_height = 20000.0;         // [m]
        double terrestrial_height = 25.0;     // [m]
        double sigma_sf_los = 1.0;            // [dB]
        double sigma_sf_nlos = 20.0;          // [dB]
        double element_spacing = 0.5;         // [wavelengths]
        int quad_nodes = 30;
        double p_t_dbm = 40.0;                // Transmit power for the QoS sweep and 'run'
        std::vector<double> power_grid_dbm = {20, 25, 30, 35, 40, 45, 50};
        std::vector<double> r_min_grid = {0, 1, 2, 3, 4, 5, 6};
        int favprop_antennas = 64;
        int corr_antennas = 100;
        double sweep_distance = 500.0;        // Horizontal distance of the users in the favprop / corr sweeps [m]
        double azimuth_step_deg = 5.0;

        int n_users() const { return n_clusters * users_per_cluster; }
        double wavelength() const { return 299792458.0 / carrier_freq; }
        double platform_height(Platform p) const { return p == Platform::haps ? haps_height : terrestrial_height; }

        void validate() const
        {
            auto positive = [](double v, const char *name) {
                if (!(v > 0.0) || !std::isfinite(v))
                    throw config_error(std::string(name) + " must be positive and finite");
            };
            positive(cell_radius, "cell_radius");
            positive(carrier_freq, "carrier_freq");
            positive(bandwidth_hz, "bandwidth_hz");
            positive(kappa, "kappa");
            positive(omega, "omega");
            positive(ring_radius, "ring_radius");
            positive(haps_height, "haps_height");
            positive(terrestrial_height, "terrestrial_height");
            positive(element_spacing, "element_spacing");
            positive(sweep_distance, "sweep_distance");
            positive(azimuth_step_deg, "azimuth_step_deg");
            if (n_clusters < 1 || users_per_cluster < 1 || n_trials < 1 || favprop_antennas < 1 || corr_antennas < 1)
                throw config_error("counts (n_clusters, users_per_cluster, n_trials, antennas) must be positive");
            if (n_rx < n_clusters)
                throw config_error("n_rx must be at least n_clusters to null inter-cluster interference");
            if (!(corr_threshold >= 0.0 && corr_threshold <= 1.0))
                throw config_error("corr_threshold must lie in [0, 1]");
            if (!(r_min >= 0.0))
                throw config_error("r_min must be non-negative");
            if (!(fixed_circuit_power_w >= 0.0) || !(sigma_sf_los >= 0.0) || !(sigma_sf_nlos >= 0.0))
                throw config_error("fixed_circuit_power_w and shadowing deviations must be non-negative");
            if (quad_nodes < 2)
                throw config_error("quad_nodes must be at least 2");
            if (!(ring_radius < cell_radius) || !(ring_radius < sweep_distance))
                throw config_error("ring_radius must be smaller than cell_radius and sweep_distance");
            if (power_grid_dbm.empty() || r_min_grid.empty())
                throw config_error("sweep grids must be non-empty");
            for (std::size_t i = 1; i < power_grid_dbm.size(); ++i)
                if (!(power_grid_dbm[i] > power_grid_dbm[i - 1]))
                    throw config_error("power_grid_dbm must be strictly increasing");
            for (std::size_t i = 0; i < r_min_grid.size(); ++i)
                if (!(r_min_grid[i] >= 0.0) || (i > 0 && !(r_min_grid[i] > r_min_grid[i - 1])))
                    throw config_error("r_min_grid must be non-negative and strictly increasing");
        }
    };

    // Near-square M_H x M_V factorisation of the antenna count, M_H >= M_V
    inline ArrayGeometry array_for(int n_antennas, double spacing, Orientation orientation, double wavelength)
    {
        int m_v = int(std::sqrt(double(n_antennas)));
        while (m_v > 1 && n_antennas % m_v != 0)
            --m_v;
        ArrayGeometry g;
        g.m_v = std::max(m_v, 1);
        g.m_h = n_antennas / g.m_v;
        g.d_h = g.d_v = spacing;
        g.orientation = orientation;
        g.wavelength = wavelength;
        g.validate();
        return g;
    }

    inline Orientation orientation_of(Platform p)
    {
        return p == Platform::haps ? Orientation::horizontal_facing_down : Orientation::vertical_facing_out;
    }

    namespace detail
    {
        inline std::string_view trim(std::string_view s)
        {
            const auto first = s.find_first_not_of(" \t\r");
            if (first == std::string_view::npos)
                return {};
            const auto last = s.find_last_not_of(" \t\r");
            return s.substr(first, last - first + 1);
        }

        template <typename T>
        T parse_number(std::string_view key, std::string_view text)
        {
            T value{};
            const auto *end = text.data() + text.size();
            const auto [ptr, ec] = std::from_chars(text.data(), end, value);
            if (ec != std::errc() || ptr != end)
                throw config_error("invalid value '" + std::string(text) + "' for key '" + std::string(key) + "'");
            return value;
        }

        inline std::vector<double> parse_list(std::string_view key, std::string_view text)
        {
            std::vector<double> out;
            while (!text.empty())
            {
                const auto comma = text.find(',');
                out.push_back(parse_number<double>(key, trim(text.substr(0, comma))));
                if (comma == std::string_view::npos)
                    break;
                text.remove_prefix(comma + 1);
            }
            if (out.empty())
                throw config_error("empty list for key '" + std::string(key) + "'");
            return out;
        }

        using Setter = std::function<void(ScenarioConfig &, std::string_view key, std::string_view value)>;

        template <typename T>
        Setter number(T ScenarioConfig::*field)
        {
            return [field](ScenarioConfig &c, std::string_view k, std::string_view v) { c.*field = parse_number<T>(k, v); };
        }

        inline Setter list(std::vector<double> ScenarioConfig::*field)
        {
            return [field](ScenarioConfig &c, std::string_view k, std::string_view v) { c.*field = parse_list(k, v); };
        }

        inline const std::map<std::string, Setter, std::less<>> &setters()
        {
            static const std::map<std::string, Setter, std::less<>> table = {
                {"platform", [](ScenarioConfig &c, std::string_view, std::string_view v) {
                     if (v == "haps")
                         c.platform = Platform::haps;
                     else if (v == "terrestrial")
                         c.platform = Platform::terrestrial;
                     else
                         throw config_error("platform must be 'haps' or 'terrestrial', got '" + std::string(v) + "'");
                 }},
                {"cell_radius", number(&ScenarioConfig::cell_radius)},
                {"carrier_freq", number(&ScenarioConfig::carrier_freq)},
                {"n_clusters", number(&ScenarioConfig::n_clusters)},
                {"users_per_cluster", number(&ScenarioConfig::users_per_cluster)},
                {"n_rx", number(&ScenarioConfig::n_rx)},
                {"corr_threshold", number(&ScenarioConfig::corr_threshold)},
                {"r_min", number(&ScenarioConfig::r_min)},
                {"p_tol_dbm", number(&ScenarioConfig::p_tol_dbm)},
                {"noise_density_dbm_hz", number(&ScenarioConfig::noise_density_dbm_hz)},
                {"bandwidth_hz", number(&ScenarioConfig::bandwidth_hz)},
                {"kappa", number(&ScenarioConfig::kappa)},
                {"omega", number(&ScenarioConfig::omega)},
                {"ring_radius", number(&ScenarioConfig::ring_radius)},
                {"seed", number(&ScenarioConfig::seed)},
                {"n_trials", number(&ScenarioConfig::n_trials)},
                {"fixed_circuit_power_w", number(&ScenarioConfig::fixed_circuit_power_w)},
                {"haps_height", number(&ScenarioConfig::haps_height)},
                {"terrestrial_height", number(&ScenarioConfig::terrestrial_height)},
                {"sigma_sf_los", number(&ScenarioConfig::sigma_sf_los)},
                {"sigma_sf_nlos", number(&ScenarioConfig::sigma_sf_nlos)},
                {"element_spacing", number(&ScenarioConfig::element_spacing)},
                {"quad_nodes", number(&ScenarioConfig::quad_nodes)},
                {"p_t_dbm", number(&ScenarioConfig::p_t_dbm)},
                {"power_grid_dbm", list(&ScenarioConfig::power_grid_dbm)},
                {"r_min_grid", list(&ScenarioConfig::r_min_grid)},
                {"favprop_antennas", number(&ScenarioConfig::favprop_antennas)},
                {"corr_antennas", number(&ScenarioConfig::corr_antennas)},
                {"sweep_distance", number(&ScenarioConfig::sweep_distance)},
                {"azimuth_step_deg", number(&ScenarioConfig::azimuth_step_deg)},
            };
            return table;
        }
    }

    // Flat "key = value" text. '#' and ';' start comments; an optional [scenario] header is
    // accepted. Unknown or repeated keys are errors. The result is validated.
    inline ScenarioConfig parse_config(std::string_view text)
    {
        ScenarioConfig cfg;
        std::set<std::string, std::less<>> seen;
        int line_no = 0;
        while (!text.empty())
        {
            const auto nl = text.find('\n');
            std::string_view line = text.substr(0, nl);
            text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
            ++line_no;

            if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos)
                line = line.substr(0, hash);
            line = detail::trim(line);
            if (line.empty())
                continue;
            if (line.front() == '[')
            {
                if (line != "[scenario]")
                    throw config_error("line " + std::to_string(line_no) + ": unknown section " + std::string(line));
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string_view::npos)
                throw config_error("line " + std::to_string(line_no) + ": expected 'key = value'");
            const auto key = detail::trim(line.substr(0, eq));
            const auto value = detail::trim(line.substr(eq + 1));
            const auto it = detail::setters().find(key);
            if (it == detail::setters().end())
                throw config_error("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
            if (!seen.emplace(key).second)
                throw config_error("line " + std::to_string(line_no) + ": duplicate key '" + std::string(key) + "'");
            it->second(cfg, key, value);
        }
        cfg.validate();
        return cfg;
    }

    inline ScenarioConfig load_config(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw config_error("cannot open config file '" + path + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        return parse_config(buf.str());
    }

    inline nlohmann::ordered_json to_json(const ScenarioConfig &c)
    {
        return nlohmann::ordered_json{
            {"platform", to_string(c.platform)},
            {"cell_radius", c.cell_radius},
            {"carrier_freq", c.carrier_freq},
            {"n_clusters", c.n_clusters},
            {"users_per_cluster", c.users_per_cluster},
            {"n_rx", c.n_rx},
            {"corr_threshold", c.corr_threshold},
            {"r_min", c.r_min},
            {"p_tol_dbm", c.p_tol_dbm},
            {"noise_density_dbm_hz", c.noise_density_dbm_hz},
            {"bandwidth_hz", c.bandwidth_hz},
            {"kappa", c.kappa},
            {"omega", c.omega},
            {"ring_radius", c.ring_radius},
            {"seed", c.seed},
            {"n_trials", c.n_trials},
            {"fixed_circuit_power_w", c.fixed_circuit_power_w},
            {"haps_height", c.haps_height},
            {"terrestrial_height", c.terrestrial_height},
            {"sigma_sf_los", c.sigma_sf_los},
            {"sigma_sf_nlos", c.sigma_sf_nlos},
            {"element_spacing", c.element_spacing},
            {"quad_nodes", c.quad_nodes},
            {"p_t_dbm", c.p_t_dbm},
            {"power_grid_dbm", c.power_grid_dbm},
            {"r_min_grid", c.r_min_grid},
            {"favprop_antennas", c.favprop_antennas},
            {"corr_antennas", c.corr_antennas},
            {"sweep_distance", c.sweep_distance},
            {"azimuth_step_deg", c.azimuth_step_deg},
        };
    }
}

#endif

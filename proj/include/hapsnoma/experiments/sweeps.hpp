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

#ifndef HAPSNOMA_EXPERIMENTS_SWEEPS_HPP
#define HAPSNOMA_EXPERIMENTS_SWEEPS_HPP

#include "config.hpp"
#include "metrics.hpp"
#include "scenario.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace hapsnoma::experiments
{
    struct FavPropEstimate
    {
        double variance = 0.0;  // Var{h1^H h2 / sqrt(E|h1|^2 E|h2|^2)}
        double std_error = 0.0; // Monte Carlo standard error of the variance estimate
        int n_trials = 0;
    };

    // Expected squared norm of a channel row, |mean|^2 + tr(R)
    inline double expected_power(const ChannelStats &s)
    {
        return (s.has_los ? s.los_mean.squaredNorm() : 0.0) + s.covariance.trace().real();
    }

    // Monte Carlo variance of the normalised inner product of two independent single-antenna users
    inline FavPropEstimate favorable_propagation_variance(const ChannelStats &user1, const ChannelStats &user2,
                                                          int n_trials, std::uint64_t seed)
    {
        if (n_trials < 100)
            throw domain_error("favorable_propagation_variance: need at least 100 trials");
        std::mt19937_64 rng(seed);
        const CMatrix s1 = covariance_sqrt(user1.covariance);
        const CMatrix s2 = covariance_sqrt(user2.covariance);
        const double denom = std::sqrt(expected_power(user1) * expected_power(user2));

        std::vector<cplx> z(static_cast<std::size_t>(n_trials));
        cplx mean = 0.0;
        for (auto &zi : z)
        {
            const CMatrix h1 = sample_channel(user1, s1, 1, rng).matrix;
            const CMatrix h2 = sample_channel(user2, s2, 1, rng).matrix;
            zi = (h1.conjugate() * h2.transpose())(0, 0) / denom;
            mean += zi;
        }
        mean /= double(n_trials);

        double sum = 0.0, sum_sq = 0.0;
        for (const auto &zi : z)
        {
            const double dev = std::norm(zi - mean);
            sum += dev;
            sum_sq += dev * dev;
        }
        const double n = double(n_trials);
        FavPropEstimate out;
        out.n_trials = n_trials;
        out.variance = sum / (n - 1.0);
        const double mean_dev = sum / n;
        out.std_error = std::sqrt(std::max(0.0, sum_sq / n - mean_dev * mean_dev) / n);
        return out;
    }

    inline std::vector<double> azimuth_grid_deg(double lo, double hi, double step)
    {
        std::vector<double> grid;
        const int n = int(std::floor((hi - lo) / step + 1e-9));
        for (int i = 0; i <= n; ++i)
            grid.push_back(lo + step * double(i));
        return grid;
    }

    inline nlohmann::ordered_json run_metadata(const ScenarioConfig &cfg, const std::string &version)
    {
        return nlohmann::ordered_json{
            {"config", to_json(cfg)}, {"seed", cfg.seed}, {"n_trials", cfg.n_trials}, {"git_describe", version}};
    }

    enum class FadingCase
    {
        uncorrelated_rayleigh,
        correlated_rayleigh,
        correlated_rician
    };

    // Single-antenna user statistics for the favorable-propagation experiment: HAPS geometry,
    // deterministic path loss (no shadowing)
    inline ChannelStats favprop_user(const ScenarioConfig &cfg, double azimuth, FadingCase fading)
    {
        const ArrayGeometry geom = array_for(cfg.favprop_antennas, cfg.element_spacing,
                                             Orientation::horizontal_facing_down, cfg.wavelength());
        const UserPlacement user = place_user(cfg.sweep_distance, azimuth, cfg.haps_height, cfg.ring_radius);
        ChannelStats s = user_channel_stats(geom, user, path_loss_params(cfg), 0.0, 0.0,
                                            fading == FadingCase::correlated_rician, cfg.quad_nodes);
        if (fading == FadingCase::uncorrelated_rayleigh)
            s.covariance = s.beta_nlos * CMatrix::Identity(s.size(), s.size());
        return s;
    }

    // Variance of favorable propagation versus the azimuth of user 2; user 1 sits at 30 degrees
    inline MetricSeries favprop_sweep(const ScenarioConfig &cfg, const std::vector<double> &azimuths_deg,
                                      const std::string &version = "")
    {
        MetricSeries out;
        out.x_label = "azimuth_deg";
        out.x_values = azimuths_deg;
        out.metadata = run_metadata(cfg, version);
        out.metadata["antennas"] = cfg.favprop_antennas;
        const std::pair<const char *, FadingCase> cases[] = {
            {"variance_uncorrelated_rayleigh", FadingCase::uncorrelated_rayleigh},
            {"variance_correlated_rayleigh", FadingCase::correlated_rayleigh},
            {"variance_correlated_rician", FadingCase::correlated_rician}};
        for (const auto &[name, fading] : cases)
        {
            auto &col = out.add(name);
            const ChannelStats user1 = favprop_user(cfg, pi / 6.0, fading);
            for (std::size_t i = 0; i < azimuths_deg.size(); ++i)
            {
                const ChannelStats user2 = favprop_user(cfg, deg_to_rad(azimuths_deg[i]), fading);
                col[i] = favorable_propagation_variance(user1, user2, cfg.n_trials, derive_seed(cfg.seed, i)).variance;
            }
        }
        return out;
    }

    // Elevation used for a platform in the correlation sweep: one-ring center at sweep_distance
    inline double sweep_elevation(const ScenarioConfig &cfg, Platform platform)
    {
        return one_ring_spreads(place_user(cfg.sweep_distance, 0.0, cfg.platform_height(platform), cfg.ring_radius))
            .elevation_center;
    }

    // LoS correlation between a fixed user and a user swept in azimuth, both at the platform's
    // elevation. Angles are taken directly in the array frame for both presets.
    inline MetricSeries correlation_sweep(const ScenarioConfig &cfg, double fixed_azimuth,
                                          const std::vector<double> &azimuths_rad, const std::string &version = "")
    {
        const ArrayGeometry geom = array_for(cfg.corr_antennas, cfg.element_spacing,
                                             Orientation::horizontal_facing_down, cfg.wavelength());
        MetricSeries out;
        out.x_label = "azimuth_rad";
        out.x_values = azimuths_rad;
        out.metadata = run_metadata(cfg, version);
        out.metadata["antennas"] = cfg.corr_antennas;
        for (const Platform platform : {Platform::haps, Platform::terrestrial})
        {
            auto &col = out.add("correlation_" + to_string(platform));
            const double el = sweep_elevation(cfg, platform);
            const CVector fixed = los_steering(geom, {fixed_azimuth, el}, 1.0);
            for (std::size_t i = 0; i < azimuths_rad.size(); ++i)
                col[i] = correlation_coefficient(fixed, los_steering(geom, {azimuths_rad[i], el}, 1.0));
        }
        return out;
    }

    struct SweepAccumulator
    {
        double sum = 0.0;
        int feasible = 0;
        int total = 0;

        void add(const TrialOutcome &t)
        {
            ++total;
            if (t.feasible)
            {
                ++feasible;
                sum += t.sum_rate;
            }
        }
        double mean() const { return feasible > 0 ? sum / double(feasible) : infeasible; }
        double fraction() const { return total > 0 ? double(feasible) / double(total) : 0.0; }
    };

    // Shared driver for the power and QoS sweeps: trials are drawn once per platform and every
    // grid point re-runs only the allocation, so points differ by the swept quantity alone.
    // point(i) gives the (transmit power [W], minimum rate) of grid point i.
    template <typename PointFn>
    void sweep_platforms(const ScenarioConfig &cfg, MetricSeries &out, PointFn &&point)
    {
        const std::size_t n_points = out.x_values.size();
        for (const Platform platform : {Platform::haps, Platform::terrestrial})
        {
            std::vector<SweepAccumulator> acc(n_points);
            for (int t = 0; t < cfg.n_trials; ++t)
            {
                const TrialChannels ch = draw_trial(cfg, platform, std::uint64_t(t));
                for (std::size_t i = 0; i < n_points; ++i)
                {
                    const auto [p_t_w, r_min] = point(i);
                    acc[i].add(evaluate_trial(cfg, ch, p_t_w, r_min));
                }
            }
            const std::string tag = to_string(platform);
            auto &rate = out.add("sum_rate_" + tag);
            for (std::size_t i = 0; i < n_points; ++i)
                rate[i] = acc[i].mean();
            auto &ee = out.add("energy_efficiency_" + tag);
            for (std::size_t i = 0; i < n_points; ++i)
                if (!std::isnan(rate[i]))
                    ee[i] = energy_efficiency(rate[i], point(i).first, cfg.fixed_circuit_power_w);
            auto &feas = out.add("feasibility_fraction_" + tag);
            for (std::size_t i = 0; i < n_points; ++i)
                feas[i] = acc[i].fraction();
        }
    }

    // Mean sum rate (feasible trials only) versus transmit power, P_max = P_t at every point
    inline MetricSeries run_sum_rate_sweep(const ScenarioConfig &cfg, const std::vector<double> &budget_grid_w,
                                           const std::string &version = "")
    {
        if (budget_grid_w.empty())
            throw domain_error("run_sum_rate_sweep: empty grid");
        for (std::size_t i = 0; i < budget_grid_w.size(); ++i)
            if (!(budget_grid_w[i] > 0.0) || (i > 0 && !(budget_grid_w[i] > budget_grid_w[i - 1])))
                throw domain_error("run_sum_rate_sweep: grid must be positive and increasing");
        MetricSeries out;
        out.x_label = "p_t_dbm";
        for (double w : budget_grid_w)
            out.x_values.push_back(10.0 * std::log10(w) + 30.0);
        out.metadata = run_metadata(cfg, version);
        sweep_platforms(cfg, out, [&](std::size_t i) { return std::pair{budget_grid_w[i], cfg.r_min}; });
        return out;
    }

    inline std::vector<double> dbm_grid_to_watt(const std::vector<double> &dbm)
    {
        std::vector<double> w;
        for (double x : dbm)
            w.push_back(dbm_to_watt(x));
        return w;
    }

    // Mean sum rate versus a uniform minimum rate, at transmit power p_t_dbm
    inline MetricSeries run_qos_sweep(const ScenarioConfig &cfg, const std::vector<double> &r_min_grid,
                                      const std::string &version = "")
    {
        if (r_min_grid.empty())
            throw domain_error("run_qos_sweep: empty grid");
        MetricSeries out;
        out.x_label = "r_min";
        out.x_values = r_min_grid;
        out.metadata = run_metadata(cfg, version);
        const double p_t_w = dbm_to_watt(cfg.p_t_dbm);
        sweep_platforms(cfg, out, [&](std::size_t i) { return std::pair{p_t_w, r_min_grid[i]}; });
        return out;
    }

    // One operating point (p_t_dbm, r_min) of the configured platform
    inline MetricSeries run_single(const ScenarioConfig &cfg, const std::string &version = "")
    {
        MetricSeries out;
        out.x_label = "p_t_dbm";
        out.x_values = {cfg.p_t_dbm};
        out.metadata = run_metadata(cfg, version);
        const double p_t_w = dbm_to_watt(cfg.p_t_dbm);
        SweepAccumulator acc;
        double p_req_sum = 0.0;
        for (int t = 0; t < cfg.n_trials; ++t)
        {
            const TrialOutcome o = evaluate_trial(cfg, draw_trial(cfg, cfg.platform, std::uint64_t(t)), p_t_w, cfg.r_min);
            acc.add(o);
            p_req_sum += o.p_required;
        }
        out.add("sum_rate")[0] = acc.mean();
        out.add("energy_efficiency")[0] =
            std::isnan(acc.mean()) ? infeasible : energy_efficiency(acc.mean(), p_t_w, cfg.fixed_circuit_power_w);
        out.add("feasibility_fraction")[0] = acc.fraction();
        out.add("mean_p_required_w")[0] = p_req_sum / double(cfg.n_trials);
        return out;
    }

    // True when every sum-rate column is infeasible at every point
    inline bool all_infeasible(const MetricSeries &s)
    {
        bool any_rate = false;
        for (const auto &[name, v] : s.series)
        {
            if (name.rfind("sum_rate", 0) != 0)
                continue;
            any_rate = true;
            for (double x : v)
                if (!std::isnan(x))
                    return false;
        }
        return any_rate;
    }
}

#endif

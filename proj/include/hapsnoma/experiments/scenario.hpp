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

#ifndef HAPSNOMA_EXPERIMENTS_SCENARIO_HPP
#define HAPSNOMA_EXPERIMENTS_SCENARIO_HPP

#include "../channel.hpp"
#include "../clustering.hpp"
#include "../linkproc.hpp"
#include "../powalloc.hpp"
#include "config.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace hapsnoma::experiments
{
    // Thermal noise over the configured bandwidth [W]
    inline double noise_power_w(const ScenarioConfig &cfg)
    {
        return dbm_to_watt(cfg.noise_density_dbm_hz + 10.0 * std::log10(cfg.bandwidth_hz));
    }

    // SplitMix64 finaliser over (seed, trial, stream); keeps trial streams independent of run order
    inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial, std::uint64_t stream = 0)
    {
        auto mix = [](std::uint64_t z) {
            z += 0x9e3779b97f4a7c15ULL;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return z ^ (z >> 31);
        };
        return mix(mix(mix(seed) ^ trial) ^ stream);
    }

    struct DiskPoint
    {
        double radius;
        double azimuth;
    };

    // Area-uniform point in a disk
    template <typename Rng>
    DiskPoint sample_disk(double radius, Rng &rng)
    {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double r = radius * std::sqrt(unit(rng));
        const double az = pi * (2.0 * unit(rng) - 1.0);
        return {r, az};
    }

    struct UserState
    {
        UserPlacement placement;
        ChannelStats stats;
    };

    struct TrialChannels
    {
        bool ok = true;
        std::string failure;                           // Set when detection degenerates
        std::vector<UserState> users;
        ClusterAssignment clusters;
        std::vector<std::vector<EffectiveLink>> links; // Per cluster, strongest first
        RMatrix gains;                                 // clusters x users_per_cluster
    };

    inline ArrayGeometry scenario_array(const ScenarioConfig &cfg, Platform platform)
    {
        return array_for(cfg.n_clusters, cfg.element_spacing, orientation_of(platform), cfg.wavelength());
    }

    inline PathLossParams path_loss_params(const ScenarioConfig &cfg)
    {
        PathLossParams p;
        p.carrier_freq = cfg.carrier_freq;
        p.sigma_sf_los = cfg.sigma_sf_los;
        p.sigma_sf_nlos = cfg.sigma_sf_nlos;
        p.kappa = cfg.kappa;
        p.omega = cfg.omega;
        return p;
    }

    // Users, LoS and shadowing, clustering on LoS means, realizations, detection and ordering.
    // Everything is drawn from one stream keyed by (seed, trial), so both platforms and every
    // sweep point see the same user drop for a given trial.
    inline TrialChannels draw_trial(const ScenarioConfig &cfg, Platform platform, std::uint64_t trial)
    {
        std::mt19937_64 rng(derive_seed(cfg.seed, trial));
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::normal_distribution<double> shadow_los(0.0, cfg.sigma_sf_los);
        std::normal_distribution<double> shadow_nlos(0.0, cfg.sigma_sf_nlos);

        const ArrayGeometry geom = scenario_array(cfg, platform);
        const PathLossParams pl = path_loss_params(cfg);
        const double height = cfg.platform_height(platform);

        TrialChannels out;
        out.users.resize(std::size_t(cfg.n_users()));
        std::vector<CVector> los(out.users.size());
        for (std::size_t u = 0; u < out.users.size(); ++u)
        {
            DiskPoint pt = sample_disk(cfg.cell_radius, rng);
            // The one-ring model needs the user outside its own scatterer ring
            while (!(pt.radius > cfg.ring_radius))
                pt = sample_disk(cfg.cell_radius, rng);
            const UserPlacement placement = place_user(pt.radius, pt.azimuth, height, cfg.ring_radius);
            const double f_los = shadow_los(rng);
            const double f_nlos = shadow_nlos(rng);
            const double p_los = los_probability(rad_to_deg(one_ring_spreads(placement).elevation_center), cfg.kappa, cfg.omega);
            const bool has_los = unit(rng) < p_los;
            out.users[u].placement = placement;
            out.users[u].stats = user_channel_stats(geom, placement, pl, f_los, f_nlos, has_los, cfg.quad_nodes);
            los[u] = out.users[u].stats.los_mean;
        }

        out.clusters = cluster_users(los, cfg.corr_threshold, cfg.users_per_cluster, cfg.n_clusters);

        const Eigen::Index n_c = Eigen::Index(out.clusters.size());
        out.gains.setZero(cfg.n_clusters, cfg.users_per_cluster);
        out.links.resize(out.clusters.size());
        try
        {
            for (Eigen::Index c = 0; c < n_c; ++c)
            {
                std::vector<EffectiveLink> links;
                for (const int user : out.clusters.clusters[std::size_t(c)])
                {
                    const ChannelStats &stats = out.users[std::size_t(user)].stats;
                    const ChannelRealization H = sample_channel(stats, covariance_sqrt(stats.covariance), cfg.n_rx, rng);
                    const Detection det = detection_vector(H.matrix, int(c));
                    EffectiveLink link;
                    link.detection = det.vector;
                    link.eff_gain = det.eff_gain;
                    link.cluster = int(c);
                    link.user = user;
                    links.push_back(std::move(link));
                }
                out.links[std::size_t(c)] = order_cluster(std::move(links));
                for (const auto &link : out.links[std::size_t(c)])
                    out.gains(c, link.rank_in_cluster - 1) = link.eff_gain;
            }
        }
        catch (const degenerate_error &e)
        {
            out.ok = false;
            out.failure = e.what();
        }
        return out;
    }

    inline AllocationProblem make_problem(const ScenarioConfig &cfg, const RMatrix &gains, double p_t_w, double r_min)
    {
        AllocationProblem p;
        p.gains = gains;
        p.p_max = p_t_w;
        p.p_budget = p_t_w;
        p.rho = p_t_w / noise_power_w(cfg);
        p.p_tol = dbm_to_watt(cfg.p_tol_dbm);
        p.qos_rates = RMatrix::Constant(gains.rows(), gains.cols(), r_min);
        return p;
    }

    struct TrialOutcome
    {
        bool feasible = false;
        double sum_rate = 0.0;   // [bps/Hz]
        double p_required = 0.0; // [W]
        ConstraintReport report;
    };

    inline TrialOutcome evaluate_trial(const ScenarioConfig &cfg, const TrialChannels &ch, double p_t_w, double r_min)
    {
        TrialOutcome out;
        if (!ch.ok)
            return out;
        const AllocationProblem problem = make_problem(cfg, ch.gains, p_t_w, r_min);
        const AllocationOutcome res = allocate(problem);
        out.p_required = res.p_required;
        if (!res.feasible())
            return out;
        out.feasible = true;
        out.sum_rate = res.allocation->sum_rate();
        out.report = check_constraints(problem, res.allocation->omega);
        return out;
    }
}

#endif

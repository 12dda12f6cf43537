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
#include <hapsnoma/channel_io.hpp>
#include <hapsnoma/experiments/config.hpp>
#include <hapsnoma/experiments/metrics.hpp>
#include <hapsnoma/experiments/scenario.hpp>
#include <hapsnoma/experiments/sweeps.hpp>

#include <limits>
#include <random>
#include <sstream>

using namespace hapsnoma;
using namespace hapsnoma::experiments;

static std::string csv(const MetricSeries &s)
{
    std::ostringstream os;
    write_csv(os, s);
    return os.str();
}

TEST_CASE("Experiments - Config parsing")
{
    const auto cfg = parse_config("# comment\n[scenario]\nplatform = terrestrial\n n_clusters = 2 ; trailing\n"
                                  "n_rx=3\npower_grid_dbm = 10, 20,30\nseed = 99\n");
    CHECK(cfg.platform == Platform::terrestrial);
    CHECK(cfg.n_clusters == 2);
    CHECK(cfg.n_rx == 3);
    CHECK(cfg.seed == 99);
    CHECK(cfg.power_grid_dbm == std::vector<double>{10.0, 20.0, 30.0});
    CHECK(cfg.cell_radius == 1000.0);

    CHECK_THROWS_AS(parse_config("bogus = 1\n"), config_error);
    CHECK_THROWS_AS(parse_config("n_rx = 4\nn_rx = 5\n"), config_error);
    CHECK_THROWS_AS(parse_config("n_rx = four\n"), config_error);
    CHECK_THROWS_AS(parse_config("n_rx = 4.5\n"), config_error);
    CHECK_THROWS_AS(parse_config("platform = balloon\n"), config_error);
    CHECK_THROWS_AS(parse_config("[other]\n"), config_error);
    CHECK_THROWS_AS(parse_config("just text\n"), config_error);
    CHECK_THROWS_AS(parse_config("n_clusters = 4\nn_rx = 2\n"), config_error);
    CHECK_THROWS_AS(parse_config("cell_radius = -5\n"), config_error);
    CHECK_THROWS_AS(parse_config("power_grid_dbm = 30, 20\n"), config_error);
    CHECK_THROWS_AS(load_config("/nonexistent/path.cfg"), config_error);
}

TEST_CASE("Experiments - Config echo round-trips through JSON")
{
    ScenarioConfig cfg;
    cfg.n_trials = 17;
    cfg.platform = Platform::terrestrial;
    const auto j = to_json(cfg);
    CHECK(j["n_trials"] == 17);
    CHECK(j["platform"] == "terrestrial");
    CHECK(j["p_tol_dbm"] == 1.0);
    CHECK(j["kappa"] == 9.61);
}

TEST_CASE("Experiments - Noise power and SNR")
{
    ScenarioConfig cfg;
    cfg.bandwidth_hz = 1e7;
    const double n_dbm = -174.0 + 70.0;
    CHECK(std::abs(noise_power_w(cfg) - dbm_to_watt(n_dbm)) < 1e-12 * dbm_to_watt(n_dbm));
    RMatrix g = RMatrix::Constant(1, 1, 1e-12);
    const auto p = make_problem(cfg, g, 2.0, 1.0);
    CHECK(std::abs(p.rho - 2.0 / noise_power_w(cfg)) < 1e-9 * p.rho);
    CHECK(p.p_max == 2.0);
    CHECK(p.p_budget == 2.0);
    CHECK(std::abs(p.p_tol - dbm_to_watt(1.0)) < 1e-18);
}

TEST_CASE("Experiments - Seeds and disk sampling")
{
    CHECK(derive_seed(1, 2) == derive_seed(1, 2));
    CHECK(derive_seed(1, 2) != derive_seed(1, 3));
    CHECK(derive_seed(1, 2, 0) != derive_seed(1, 2, 1));
    CHECK(derive_seed(1, 2) != derive_seed(2, 2));

    std::mt19937_64 rng(31);
    const double R = 1000.0;
    double sum_r2 = 0.0, sum_az = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
    {
        const auto pt = sample_disk(R, rng);
        REQUIRE(pt.radius <= R);
        REQUIRE(std::abs(pt.azimuth) <= pi);
        sum_r2 += pt.radius * pt.radius;
        sum_az += pt.azimuth;
    }
    CHECK(std::abs(sum_r2 / n - R * R / 2.0) < 0.01 * R * R / 2.0);
    CHECK(std::abs(sum_az / n) < 0.02);
}

TEST_CASE("Experiments - Energy efficiency")
{
    CHECK(energy_efficiency(10.0, 2.0) == 5.0);
    CHECK(energy_efficiency(10.0, 2.0, 3.0) == 2.0);
    CHECK_THROWS_AS(energy_efficiency(1.0, 0.0, 0.0), domain_error);
}

TEST_CASE("Experiments - Favorable propagation variance")
{
    SECTION("i.i.d. Rayleigh approaches 1/M")
    {
        ChannelStats s;
        s.los_mean = CVector::Zero(64);
        s.covariance = CMatrix::Identity(64, 64);
        s.has_los = false;
        const auto est = favorable_propagation_variance(s, s, 10000, 3);
        CHECK(std::abs(est.variance - 1.0 / 64.0) <= 3.0 * est.std_error);
        CHECK(est.std_error < 0.05 / 64.0);
    }

    SECTION("Fully correlated users exceed 1/M")
    {
        ArrayGeometry g;
        g.m_h = g.m_v = 4;
        const CVector a = los_steering(g, {0.3, 0.8}, 1.0);
        ChannelStats s;
        s.los_mean = CVector::Zero(16);
        s.covariance = a * a.adjoint();
        s.has_los = false;
        const auto est = favorable_propagation_variance(s, s, 5000, 4);
        CHECK(est.variance > 1.0 / 16.0 + 5.0 * est.std_error);
        CHECK(std::abs(est.variance - 1.0) < 0.1);
    }

    SECTION("Orthogonal deterministic users give zero")
    {
        ChannelStats a, b;
        a.los_mean = CVector::Unit(4, 0);
        b.los_mean = CVector::Unit(4, 1);
        a.covariance = b.covariance = CMatrix::Zero(4, 4);
        const auto est = favorable_propagation_variance(a, b, 200, 5);
        CHECK(est.variance == 0.0);
    }

    ChannelStats s;
    s.los_mean = CVector::Zero(2);
    s.covariance = CMatrix::Identity(2, 2);
    CHECK_THROWS_AS(favorable_propagation_variance(s, s, 99, 1), domain_error);
}

TEST_CASE("Experiments - Favorable propagation sweep")
{
    ScenarioConfig cfg;
    cfg.n_trials = 2000;
    const auto s = favprop_sweep(cfg, {-60.0, 0.0, 30.0, 90.0});
    REQUIRE(s.series.size() == 3);
    const auto &iid = s.at("variance_uncorrelated_rayleigh");
    const auto &rician = s.at("variance_correlated_rician");
    for (std::size_t i = 0; i < s.x_values.size(); ++i)
    {
        CHECK(std::abs(iid[i] - 1.0 / 64.0) < 0.25 / 64.0);
        CHECK(rician[i] > iid[i]);
    }
    CHECK(csv(s) == csv(favprop_sweep(cfg, {-60.0, 0.0, 30.0, 90.0})));
}

TEST_CASE("Experiments - Correlation sweep")
{
    ScenarioConfig cfg;
    std::vector<double> az;
    for (int i = -18; i <= 18; ++i)
        az.push_back(deg_to_rad(5.0 * i));
    const auto s = correlation_sweep(cfg, 0.0, az);
    const auto &haps = s.at("correlation_haps");
    const auto &terr = s.at("correlation_terrestrial");
    const std::size_t centre = 18;
    CHECK(std::abs(haps[centre] - 1.0) < 1e-12);
    CHECK(std::abs(terr[centre] - 1.0) < 1e-12);
    for (std::size_t i = 0; i < az.size(); ++i)
    {
        CHECK(haps[i] <= haps[centre]);
        CHECK(terr[i] <= terr[centre]);
        CHECK((haps[i] >= 0.0 && haps[i] <= 1.0));
    }
    for (std::size_t off = 1; off <= 3; ++off)
    {
        CHECK(haps[centre + off] > terr[centre + off]);
        CHECK(haps[centre - off] > terr[centre - off]);
    }
}

TEST_CASE("Experiments - Trial pipeline")
{
    ScenarioConfig cfg;
    cfg.n_clusters = 2;
    cfg.users_per_cluster = 2;
    cfg.n_rx = 2;
    for (const Platform pf : {Platform::haps, Platform::terrestrial})
        for (std::uint64_t t = 0; t < 5; ++t)
        {
            const auto ch = draw_trial(cfg, pf, t);
            REQUIRE(ch.ok);
            REQUIRE(ch.clusters.size() == 2);
            CHECK(ch.users.size() == 4);
            for (std::size_t c = 0; c < 2; ++c)
            {
                REQUIRE(ch.links[c].size() == 2);
                CHECK(ch.links[c][0].eff_gain >= ch.links[c][1].eff_gain);
                CHECK(ch.gains(Eigen::Index(c), 0) == ch.links[c][0].eff_gain);
                for (const auto &l : ch.links[c])
                {
                    CHECK(l.cluster == int(c));
                    const double d = ch.users[std::size_t(l.user)].placement.horizontal_distance;
                    CHECK((d > cfg.ring_radius && d <= cfg.cell_radius));
                }
            }
            const auto again = draw_trial(cfg, pf, t);
            CHECK(again.gains == ch.gains);
        }

    // Both platforms see the same user drop
    const auto a = draw_trial(cfg, Platform::haps, 3), b = draw_trial(cfg, Platform::terrestrial, 3);
    for (std::size_t u = 0; u < a.users.size(); ++u)
    {
        CHECK(a.users[u].placement.horizontal_distance == b.users[u].placement.horizontal_distance);
        CHECK(a.users[u].placement.azimuth == b.users[u].placement.azimuth);
    }
}

TEST_CASE("Experiments - Single user takes the full budget")
{
    ScenarioConfig cfg;
    cfg.n_clusters = 1;
    cfg.users_per_cluster = 1;
    cfg.n_rx = 1;
    cfg.r_min = 0.0;
    for (std::uint64_t t = 0; t < 10; ++t)
    {
        const auto ch = draw_trial(cfg, Platform::haps, t);
        REQUIRE(ch.ok);
        const double p_t = 20.0;
        const auto out = evaluate_trial(cfg, ch, p_t, 0.0);
        REQUIRE(out.feasible);
        const double rho = p_t / noise_power_w(cfg);
        CHECK(std::abs(out.sum_rate - std::log2(1.0 + rho * ch.gains(0, 0))) < 1e-9);
    }
}

TEST_CASE("Experiments - Sweeps on a small relaxed scenario")
{
    // Two single-user clusters with a negligible SIC gap keep every trial feasible
    ScenarioConfig cfg;
    cfg.n_clusters = 2;
    cfg.users_per_cluster = 1;
    cfg.n_rx = 2;
    cfg.n_trials = 20;
    cfg.r_min = 0.0;
    const auto power = run_sum_rate_sweep(cfg, dbm_grid_to_watt({20.0, 30.0, 40.0}));
    for (const char *tag : {"haps", "terrestrial"})
    {
        const auto &r = power.at(std::string("sum_rate_") + tag);
        const auto &f = power.at(std::string("feasibility_fraction_") + tag);
        const auto &ee = power.at(std::string("energy_efficiency_") + tag);
        for (std::size_t i = 0; i < r.size(); ++i)
        {
            CHECK(f[i] == 1.0);
            CHECK(std::abs(ee[i] - r[i] / dbm_to_watt(power.x_values[i])) < 1e-12 * ee[i]);
            if (i > 0)
                CHECK(r[i] >= r[i - 1]);
        }
    }
    CHECK(std::abs(power.x_values[1] - 30.0) < 1e-12);

    const auto qos = run_qos_sweep(cfg, {0.0, 1.0, 50.0});
    const auto &q = qos.at("sum_rate_haps");
    CHECK(std::isnan(q[2]));
    CHECK(qos.at("feasibility_fraction_haps")[2] == 0.0);
    CHECK(!all_infeasible(qos));

    // R_min = 0 in the QoS sweep is the plain allocation at the same power
    cfg.power_grid_dbm = {cfg.p_t_dbm};
    const auto same = run_sum_rate_sweep(cfg, dbm_grid_to_watt({cfg.p_t_dbm}));
    CHECK(same.at("sum_rate_haps")[0] == q[0]);

    // Per trial the sum rate cannot grow with the QoS floor (the means may, since they only
    // average feasible trials)
    for (const Platform pf : {Platform::haps, Platform::terrestrial})
        for (std::uint64_t t = 0; t < 20; ++t)
        {
            const auto ch = draw_trial(cfg, pf, t);
            double prev = std::numeric_limits<double>::infinity();
            for (double r : {0.0, 0.5, 1.0, 2.0, 4.0})
            {
                const auto o = evaluate_trial(cfg, ch, dbm_to_watt(cfg.p_t_dbm), r);
                if (!o.feasible)
                    break;
                CHECK(o.sum_rate <= prev + 1e-9);
                prev = o.sum_rate;
            }
        }

    CHECK_THROWS_AS(run_sum_rate_sweep(cfg, {}), domain_error);
    CHECK_THROWS_AS(run_sum_rate_sweep(cfg, {2.0, 1.0}), domain_error);
}

TEST_CASE("Experiments - Output formats")
{
    MetricSeries s;
    s.x_label = "x";
    s.x_values = {1.0, 2.0};
    s.add("a") = {0.1, infeasible};
    s.metadata["seed"] = 5;
    CHECK(csv(s) == "x,a\n1,0.1\n2,infeasible\n");
    CHECK(format_value(1.0 / 3.0) == "0.333333333333333");

    const auto j = to_json(s);
    CHECK(j["x_label"] == "x");
    CHECK(j["series"]["a"][0] == 0.1);
    CHECK(j["series"]["a"][1].is_null());
    CHECK(j["metadata"]["seed"] == 5);

    CHECK(s.select({"a"}).series.size() == 1);
    CHECK_THROWS_AS(s.at("missing"), domain_error);
}

TEST_CASE("Experiments - Channel statistics JSON round trip")
{
    ScenarioConfig cfg;
    cfg.n_clusters = 2;
    cfg.n_rx = 2;
    const auto ch = draw_trial(cfg, Platform::terrestrial, 0);
    const ChannelStats &s = ch.users[0].stats;
    const auto back = channel_stats_from_json(nlohmann::ordered_json::parse(to_json(s).dump()));
    CHECK(back.los_mean == s.los_mean);
    CHECK(back.covariance == s.covariance);
    CHECK(back.beta_los == s.beta_los);
    CHECK(back.beta_nlos == s.beta_nlos);
    CHECK(back.has_los == s.has_los);
    CHECK(back.p_los == s.p_los);
}

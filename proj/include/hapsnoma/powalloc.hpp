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

#ifndef HAPSNOMA_POWALLOC_HPP
#define HAPSNOMA_POWALLOC_HPP

#include "errors.hpp"
#include "linkproc.hpp"
#include "types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

namespace hapsnoma
{
    // Sum-rate maximisation under per-user QoS, SIC power-gap and total-power constraints.
    // Power coefficients Omega are fractions of p_max; rho = p_max / sigma^2.
    struct AllocationProblem
    {
        RMatrix gains;     // Effective gains, clusters x users, non-increasing along each row
        double rho = 1.0;
        double p_max = 1.0;    // [W]
        double p_budget = 1.0; // Total transmit power budget P_t [W]
        double p_tol = 0.0;    // SIC power gap [W]
        RMatrix qos_rates;     // Minimum rates [bps/Hz], same shape as gains

        Eigen::Index n_clusters() const { return gains.rows(); }
        Eigen::Index users_per_cluster() const { return gains.cols(); }

        // SIC gap normalised by the noise power, P_tol / sigma^2
        double p_tol_normalized() const { return p_tol * rho / p_max; }

        void validate() const
        {
            if (gains.size() == 0)
                throw domain_error("AllocationProblem: empty gain matrix");
            if (qos_rates.rows() != gains.rows() || qos_rates.cols() != gains.cols())
                throw domain_error("AllocationProblem: QoS matrix shape differs from gains");
            if (!(rho > 0.0) || !(p_max > 0.0) || !(p_budget > 0.0) || !(p_tol >= 0.0))
                throw domain_error("AllocationProblem: rho, p_max and p_budget must be positive, p_tol non-negative");
            for (Eigen::Index m = 0; m < gains.rows(); ++m)
                for (Eigen::Index l = 0; l < gains.cols(); ++l)
                {
                    if (!(gains(m, l) > 0.0))
                        throw domain_error("AllocationProblem: gains must be positive");
                    if (l > 0 && gains(m, l) > gains(m, l - 1))
                        throw domain_error("AllocationProblem: gains must be non-increasing within a cluster");
                    if (!(qos_rates(m, l) >= 0.0))
                        throw domain_error("AllocationProblem: QoS rates must be non-negative");
                }
        }
    };

    struct PowerAllocation
    {
        RMatrix omega;          // Power fractions of p_max
        RMatrix omega_min;      // Minimum fractions meeting QoS and SIC
        double p_required = 0.0; // p_max * sum(omega_min) [W]
        double p_residual = 0.0; // Budget not spent by omega [W]
        RMatrix rates;          // [bps/Hz]

        double sum_rate() const { return rates.sum(); }
    };

    // Smallest fraction giving the user r_qos when the prior users' fractions interfere
    inline double min_qos_coeff(std::span<const double> prior_omegas, double gain, double rho, double r_qos)
    {
        if (!(gain > 0.0))
            throw domain_error("min_qos_coeff: gain must be positive");
        const double prior = std::accumulate(prior_omegas.begin(), prior_omegas.end(), 0.0);
        return (std::exp2(r_qos) - 1.0) * (prior + 1.0 / (rho * gain));
    }

    // Smallest fraction keeping the SIC power gap at the previous (stronger) user
    inline double min_sic_coeff(std::span<const double> prior_omegas, double gain_prev, double rho, double p_tol,
                                double p_max)
    {
        if (!(gain_prev > 0.0))
            throw domain_error("min_sic_coeff: gain must be positive");
        const double prior = std::accumulate(prior_omegas.begin(), prior_omegas.end(), 0.0);
        const double p_tol_norm = p_tol * rho / p_max;
        return prior + p_tol_norm / (rho * gain_prev);
    }

    // Cluster water level p_max 2^{sum R} / (rho gamma_head)
    inline double fraction_level(std::span<const double> rates, double gain_head, double rho, double p_max)
    {
        if (!(gain_head > 0.0))
            throw domain_error("fraction_level: head gain must be positive");
        const double total = std::accumulate(rates.begin(), rates.end(), 0.0);
        return p_max * std::exp2(total) / (rho * gain_head);
    }

    namespace detail
    {
        // One cluster of a problem: followers are always held at their minimum fractions given
        // the fractions before them, so the whole row is a function of the head fraction.
        class ClusterModel
        {
        public:
            ClusterModel(const AllocationProblem &p, Eigen::Index m)
                : gains_(std::size_t(p.users_per_cluster())), qos_(gains_.size()), rho_(p.rho),
                  p_max_(p.p_max), p_tol_(p.p_tol)
            {
                for (std::size_t l = 0; l < gains_.size(); ++l)
                {
                    gains_[l] = p.gains(m, Eigen::Index(l));
                    qos_[l] = p.qos_rates(m, Eigen::Index(l));
                }
            }

            std::size_t size() const { return gains_.size(); }

            // Minimum fraction of position l given the fractions before it
            double min_coeff(std::span<const double> prior, std::size_t l) const
            {
                double w = min_qos_coeff(prior, gains_[l], rho_, qos_[l]);
                if (l > 0)
                    w = std::max(w, min_sic_coeff(prior, gains_[l - 1], rho_, p_tol_, p_max_));
                return w;
            }

            std::vector<double> baseline() const
            {
                std::vector<double> w(size());
                for (std::size_t l = 0; l < size(); ++l)
                    w[l] = min_coeff(std::span<const double>(w.data(), l), l);
                return w;
            }

            std::vector<double> with_head(double head) const
            {
                std::vector<double> w(size());
                w[0] = head;
                for (std::size_t l = 1; l < size(); ++l)
                    w[l] = min_coeff(std::span<const double>(w.data(), l), l);
                return w;
            }

            std::vector<double> rates(std::span<const double> w) const
            {
                std::vector<double> r(size());
                for (std::size_t l = 0; l < size(); ++l)
                    r[l] = user_rate(w, gains_[l], rho_, l);
                return r;
            }

            double level(std::span<const double> w) const
            {
                const auto r = rates(w);
                return fraction_level(r, gains_[0], rho_, p_max_);
            }

            double cost(std::span<const double> w) const
            {
                return p_max_ * std::accumulate(w.begin(), w.end(), 0.0);
            }

            // Smallest head fraction >= head_lo whose cascaded row reaches the target level
            double head_for_level(double target, double head_lo) const
            {
                auto level_at = [&](double head) { return level(with_head(head)); };
                if (level_at(head_lo) >= target)
                    return head_lo;
                double step = std::max((target - level_at(head_lo)) / p_max_, std::numeric_limits<double>::min());
                double hi = head_lo + step;
                while (level_at(hi) < target)
                {
                    step *= 2.0;
                    hi = head_lo + step;
                }
                double lo = head_lo;
                for (int it = 0; it < 200; ++it)
                {
                    const double mid = 0.5 * (lo + hi);
                    if (mid <= lo || mid >= hi)
                        break;
                    (level_at(mid) < target ? lo : hi) = mid;
                }
                return hi;
            }

        private:
            std::vector<double> gains_;
            std::vector<double> qos_;
            double rho_, p_max_, p_tol_;
        };

        inline RMatrix rates_of(const AllocationProblem &p, const RMatrix &omega)
        {
            RMatrix rates(omega.rows(), omega.cols());
            std::vector<double> row(std::size_t(omega.cols()));
            for (Eigen::Index m = 0; m < omega.rows(); ++m)
            {
                for (Eigen::Index l = 0; l < omega.cols(); ++l)
                    row[std::size_t(l)] = omega(m, l);
                for (Eigen::Index l = 0; l < omega.cols(); ++l)
                    rates(m, l) = user_rate(row, p.gains(m, l), p.rho, std::size_t(l));
            }
            return rates;
        }
    }

    // Minimum fractions meeting QoS and SIC, users visited strongest first within each cluster
    inline PowerAllocation primary_allocation(const AllocationProblem &p)
    {
        p.validate();
        const Eigen::Index n_c = p.n_clusters(), n_u = p.users_per_cluster();
        PowerAllocation out;
        out.omega_min.resize(n_c, n_u);
        for (Eigen::Index m = 0; m < n_c; ++m)
        {
            const auto w = detail::ClusterModel(p, m).baseline();
            for (Eigen::Index l = 0; l < n_u; ++l)
                out.omega_min(m, l) = w[std::size_t(l)];
        }
        out.omega = out.omega_min;
        out.p_required = p.p_max * out.omega_min.sum();
        if (!(out.p_required <= p.p_budget))
            throw infeasible_error(out.p_required, p.p_budget);
        out.p_residual = p.p_budget - out.p_required;
        out.rates = detail::rates_of(p, out.omega);
        return out;
    }

    // Distributes the residual budget by raising cluster water levels from the lowest upwards.
    // Raising a level means raising the cluster head; followers are cascaded to their new minimum
    // fractions and their extra power is paid from the same residual. Once every level is equal,
    // the remaining budget lifts all clusters together.
    inline PowerAllocation residual_allocation(const AllocationProblem &p, const PowerAllocation &baseline)
    {
        p.validate();
        if (!(baseline.p_required <= p.p_budget))
            throw infeasible_error(baseline.p_required, p.p_budget);

        const Eigen::Index n_c = p.n_clusters(), n_u = p.users_per_cluster();
        std::vector<detail::ClusterModel> models;
        models.reserve(std::size_t(n_c));
        for (Eigen::Index m = 0; m < n_c; ++m)
            models.emplace_back(p, m);

        const std::size_t n_clusters = std::size_t(n_c);
        std::vector<std::vector<double>> rows(n_clusters);
        std::vector<double> levels(n_clusters), costs(n_clusters);
        for (std::size_t m = 0; m < rows.size(); ++m)
        {
            rows[m].resize(std::size_t(n_u));
            for (Eigen::Index l = 0; l < n_u; ++l)
                rows[m][std::size_t(l)] = baseline.omega(Eigen::Index(m), l);
            levels[m] = models[m].level(rows[m]);
            costs[m] = models[m].cost(rows[m]);
        }

        std::vector<std::size_t> order(rows.size());
        std::iota(order.begin(), order.end(), std::size_t(0));
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return levels[a] < levels[b]; });

        double remaining = p.p_budget - std::accumulate(costs.begin(), costs.end(), 0.0);
        // Rounding between the two ways of summing the baseline cost is not budget
        if (remaining <= 1e-12 * p.p_budget)
            remaining = 0.0;
        std::size_t active = 0;
        auto absorb_ties = [&](double level) {
            while (active < order.size() && levels[order[active]] <= level * (1.0 + 1e-12))
                ++active;
        };
        absorb_ties(levels[order[0]]);
        double common = levels[order[0]];

        // Rows and extra cost of lifting all active clusters to the target level
        auto lift = [&](double target, std::vector<std::vector<double>> &new_rows) {
            double extra = 0.0;
            for (std::size_t i = 0; i < active; ++i)
            {
                const std::size_t m = order[i];
                new_rows[i] = models[m].with_head(models[m].head_for_level(target, rows[m][0]));
                extra += models[m].cost(new_rows[i]) - costs[m];
            }
            return extra;
        };
        auto commit = [&](const std::vector<std::vector<double>> &new_rows) {
            for (std::size_t i = 0; i < active; ++i)
            {
                const std::size_t m = order[i];
                rows[m] = new_rows[i];
                costs[m] = models[m].cost(rows[m]);
            }
        };
        // Largest level in [lo, hi] whose lift fits in the remaining budget
        auto exhaust = [&](double lo, double hi) {
            std::vector<std::vector<double>> trial(order.size()), best(order.size());
            lift(lo, best);
            for (int it = 0; it < 200; ++it)
            {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi)
                    break;
                if (lift(mid, trial) <= remaining)
                {
                    lo = mid;
                    best = trial;
                }
                else
                    hi = mid;
            }
            commit(best);
        };

        std::vector<std::vector<double>> next(order.size());
        while (remaining > 0.0)
        {
            if (active < order.size())
            {
                const double target = levels[order[active]];
                const double extra = lift(target, next);
                if (extra <= remaining)
                {
                    commit(next);
                    remaining -= extra;
                    common = target;
                    absorb_ties(target);
                    continue;
                }
                exhaust(common, target);
                break;
            }
            double span = std::max(remaining, common * 1e-12);
            while (lift(common + span, next) <= remaining)
                span *= 2.0;
            exhaust(common, common + span);
            break;
        }

        PowerAllocation out;
        out.omega_min = baseline.omega_min;
        out.p_required = baseline.p_required;
        out.omega = baseline.omega;
        for (std::size_t m = 0; m < rows.size(); ++m)
            for (Eigen::Index l = 0; l < n_u; ++l)
                out.omega(Eigen::Index(m), l) = rows[m][std::size_t(l)];
        out.p_residual = p.p_budget - p.p_max * out.omega.sum();
        out.rates = detail::rates_of(p, out.omega);
        return out;
    }

    struct AllocationOutcome
    {
        std::optional<PowerAllocation> allocation; // Empty when QoS + SIC cannot fit the budget
        double p_required = 0.0;

        bool feasible() const { return allocation.has_value(); }
    };

    // Two-stage allocation with infeasibility reported as data
    inline AllocationOutcome allocate(const AllocationProblem &p)
    {
        AllocationOutcome out;
        try
        {
            const PowerAllocation base = primary_allocation(p);
            out.p_required = base.p_required;
            out.allocation = residual_allocation(p, base);
        }
        catch (const infeasible_error &e)
        {
            out.p_required = e.p_required;
        }
        return out;
    }

    // Worst-case slack of each constraint family; all three non-negative means feasible
    struct ConstraintReport
    {
        double qos_slack = std::numeric_limits<double>::infinity();    // min(R - R_qos) [bps/Hz]
        double sic_slack = std::numeric_limits<double>::infinity();    // min(gap - P_tol) [W]
        double budget_slack = std::numeric_limits<double>::infinity(); // P_t - p_max sum(omega) [W]
        double min_omega = std::numeric_limits<double>::infinity();

        bool satisfied(double tol = 1e-9) const
        {
            return qos_slack >= -tol && sic_slack >= -tol && budget_slack >= -tol && min_omega >= 0.0;
        }
    };

    inline ConstraintReport check_constraints(const AllocationProblem &p, const RMatrix &omega)
    {
        ConstraintReport rep;
        const RMatrix rates = detail::rates_of(p, omega);
        for (Eigen::Index m = 0; m < omega.rows(); ++m)
        {
            double prior = 0.0;
            for (Eigen::Index l = 0; l < omega.cols(); ++l)
            {
                rep.min_omega = std::min(rep.min_omega, omega(m, l));
                rep.qos_slack = std::min(rep.qos_slack, rates(m, l) - p.qos_rates(m, l));
                if (l > 0)
                {
                    const double gap = p.p_max * (omega(m, l) - prior) * p.gains(m, l - 1);
                    rep.sic_slack = std::min(rep.sic_slack, gap - p.p_tol);
                }
                prior += omega(m, l);
            }
        }
        rep.budget_slack = p.p_budget - p.p_max * omega.sum();
        return rep;
    }
}

#endif

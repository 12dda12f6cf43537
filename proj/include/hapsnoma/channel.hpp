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

#ifndef HAPSNOMA_CHANNEL_HPP
#define HAPSNOMA_CHANNEL_HPP

#include "errors.hpp"
#include "geometry.hpp"
#include "quadrature.hpp"
#include "types.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdint>
#include <random>

namespace hapsnoma
{
    struct PathLossParams
    {
        double carrier_freq = 2.5e9; // [Hz]
        double sigma_sf_los = 1.0;   // Shadow-fading std. deviation, LoS [dB]
        double sigma_sf_nlos = 20.0; // Shadow-fading std. deviation, NLoS [dB]
        double kappa = 9.61;         // LoS-probability S-curve constants
        double omega = 0.16;
    };

    // Statistics of one user's channel row
    struct ChannelStats
    {
        CVector los_mean;        // LoS response, length M
        CMatrix covariance;      // NLoS spatial covariance, M x M Hermitian
        double beta_los = 0.0;   // Linear power gain of the LoS path
        double beta_nlos = 0.0;  // Linear power gain of the NLoS paths
        bool has_los = true;
        double p_los = 1.0;

        Eigen::Index size() const { return los_mean.size(); }
    };

    // Stacked receive-antenna rows h^T, n_rx x M
    struct ChannelRealization
    {
        CMatrix matrix;
        int n_rx = 1;
    };

    // Free-space loss plus a caller-supplied shadowing term [dB]
    inline double path_loss_db(double distance, double freq, double shadow_db = 0.0)
    {
        if (!(distance > 0.0) || !(freq > 0.0))
            throw domain_error("path_loss_db: distance and frequency must be positive");
        return 20.0 * std::log10(distance) + 20.0 * std::log10(freq) +
               20.0 * std::log10(4.0 * pi / speed_of_light) + shadow_db;
    }

    // Linear channel power gain for a loss in dB
    inline double gain_from_loss_db(double loss_db) { return std::pow(10.0, -loss_db / 10.0); }

    // Elevation-dependent LoS probability, elevation in degrees
    inline double los_probability(double elevation_deg, double kappa, double omega)
    {
        return 1.0 / (1.0 + kappa * std::exp(-omega * (elevation_deg - kappa)));
    }

    // LoS response sqrt(beta) exp(j k^T u_m); direction given in the array frame
    inline CVector los_steering(const ArrayGeometry &geom, Direction dir, double beta_los)
    {
        if (!(beta_los >= 0.0))
            throw domain_error("los_steering: beta_los must be non-negative");
        const Eigen::Matrix3Xd pos = element_positions(geom);
        const Vec3 k = wave_vector(dir.azimuth, dir.elevation, geom.wavelength);
        const RVector phase = pos.transpose() * k;
        const double amp = std::sqrt(beta_los);
        CVector h(geom.size());
        for (Eigen::Index m = 0; m < h.size(); ++m)
            h[m] = std::polar(amp, phase[m]);
        return h;
    }

    // Unit-modulus array response for a platform-frame direction
    inline CVector array_response(const ArrayGeometry &geom, Direction platform_dir)
    {
        return los_steering(geom, to_array_frame(geom.orientation, platform_dir), 1.0);
    }

    // One-ring (3D local scattering) covariance. The box [az +- spread] x [el_c +- spread] is in
    // the platform frame; each quadrature node is rotated into the array frame before the phase
    // is evaluated. Tensor-product Gauss-Legendre with quad_nodes points per axis.
    inline CMatrix one_ring_covariance(const ArrayGeometry &geom, const OneRingSpreads &spreads,
                                       double azimuth_center, double beta_nlos, int quad_nodes = 30)
    {
        if (!(spreads.azimuth_spread > 0.0) || !(spreads.elevation_spread > 0.0))
            throw degenerate_error("one_ring_covariance: angular spreads must be positive");
        if (quad_nodes < 2)
            throw domain_error("one_ring_covariance: need at least two quadrature nodes per axis");

        const auto az = gauss_legendre<double>(std::size_t(quad_nodes), azimuth_center - spreads.azimuth_spread,
                                               azimuth_center + spreads.azimuth_spread);
        const auto el = gauss_legendre<double>(std::size_t(quad_nodes), spreads.elevation_center - spreads.elevation_spread,
                                               spreads.elevation_center + spreads.elevation_spread);
        const double area = 4.0 * spreads.azimuth_spread * spreads.elevation_spread;

        const Eigen::Matrix3Xd pos = element_positions(geom);
        const Eigen::Matrix3d rot = array_rotation(geom.orientation);
        const double k0 = 2.0 * pi / geom.wavelength;
        const Eigen::Index n = geom.size();

        // Columns are sqrt(w) a(node); the quadrature sum is then A A^H
        CMatrix A(n, Eigen::Index(az.size() * el.size()));
        Eigen::Index col = 0;
        for (std::size_t i = 0; i < az.size(); ++i)
            for (std::size_t j = 0; j < el.size(); ++j, ++col)
            {
                const Vec3 k = k0 * (rot * unit_direction(az.nodes[i], el.nodes[j]));
                const RVector phase = pos.transpose() * k;
                const double amp = std::sqrt(az.weights[i] * el.weights[j] / area);
                for (Eigen::Index m = 0; m < n; ++m)
                    A(m, col) = std::polar(amp, phase[m]);
            }
        const CMatrix acc = A * A.adjoint();

        CMatrix R(n, n);
        for (Eigen::Index a = 0; a < n; ++a)
        {
            R(a, a) = beta_nlos * acc(a, a).real();
            for (Eigen::Index b = a + 1; b < n; ++b)
            {
                R(a, b) = beta_nlos * acc(a, b);
                R(b, a) = std::conj(R(a, b));
            }
        }
        return R;
    }

    // Zero-spread limit of the one-ring integral: beta a a^H at the box center
    inline CMatrix rank_one_covariance(const ArrayGeometry &geom, Direction platform_dir, double beta_nlos)
    {
        const CVector a = array_response(geom, platform_dir);
        return beta_nlos * a * a.adjoint();
    }

    // Dispatches to the rank-one fallback when either spread vanishes
    inline CMatrix nlos_covariance(const ArrayGeometry &geom, const OneRingSpreads &spreads,
                                   double azimuth_center, double beta_nlos, int quad_nodes = 30)
    {
        if (spreads.azimuth_spread > 0.0 && spreads.elevation_spread > 0.0)
            return one_ring_covariance(geom, spreads, azimuth_center, beta_nlos, quad_nodes);
        return rank_one_covariance(geom, {azimuth_center, spreads.elevation_center}, beta_nlos);
    }

    // Hermitian square root U D^{1/2} U^H. Eigenvalues in [-1e-8 tr(R)/M, 0) are clamped to zero;
    // anything more negative means R is not a covariance.
    inline CMatrix covariance_sqrt(const CMatrix &R)
    {
        const Eigen::Index n = R.rows();
        if (R.cols() != n)
            throw domain_error("covariance_sqrt: matrix must be square");
        if (n == 0 || R.isZero(0.0))
            return CMatrix::Zero(n, n);

        Eigen::SelfAdjointEigenSolver<CMatrix> eig(R);
        if (eig.info() != Eigen::Success)
            throw numerical_error("covariance_sqrt: eigendecomposition failed");

        const double floor = -1e-8 * R.trace().real() / double(n);
        RVector d = eig.eigenvalues();
        for (Eigen::Index i = 0; i < n; ++i)
        {
            if (d[i] < floor)
                throw numerical_error("covariance_sqrt: eigenvalue " + std::to_string(d[i]) +
                                      " below PSD tolerance " + std::to_string(floor));
            d[i] = d[i] > 0.0 ? std::sqrt(d[i]) : 0.0;
        }
        const CMatrix &U = eig.eigenvectors();
        return U * d.asDiagonal() * U.adjoint();
    }

    // Circularly-symmetric standard complex Gaussian vector, CN(0, I)
    template <typename Rng>
    CVector complex_gaussian(Eigen::Index n, Rng &rng)
    {
        std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
        CVector e(n);
        for (Eigen::Index i = 0; i < n; ++i)
        {
            const double re = normal(rng);
            const double im = normal(rng);
            e[i] = cplx(re, im);
        }
        return e;
    }

    // Statistics for a placed user. Shadowing terms [dB] and the LoS draw are supplied by the caller;
    // the LoS direction and the NLoS box share the one-ring center elevation.
    inline ChannelStats user_channel_stats(const ArrayGeometry &geom, const UserPlacement &user,
                                           const PathLossParams &params, double shadow_los_db,
                                           double shadow_nlos_db, bool has_los, int quad_nodes = 30)
    {
        const OneRingSpreads spreads = one_ring_spreads(user);
        ChannelStats stats;
        stats.beta_los = gain_from_loss_db(path_loss_db(user.distance, params.carrier_freq, shadow_los_db));
        stats.beta_nlos = gain_from_loss_db(path_loss_db(user.distance, params.carrier_freq, shadow_nlos_db));
        stats.p_los = los_probability(rad_to_deg(spreads.elevation_center), params.kappa, params.omega);
        stats.has_los = has_los;
        const Direction platform_dir{user.azimuth, spreads.elevation_center};
        stats.los_mean = los_steering(geom, to_array_frame(geom.orientation, platform_dir), stats.beta_los);
        stats.covariance = nlos_covariance(geom, spreads, user.azimuth, stats.beta_nlos, quad_nodes);
        return stats;
    }

    // Karhunen-Loeve draw of n_rx independent rows h = mean + R^{1/2} e
    template <typename Rng>
    ChannelRealization sample_channel(const ChannelStats &stats, const CMatrix &cov_sqrt, int n_rx, Rng &rng)
    {
        if (n_rx < 1)
            throw domain_error("sample_channel: n_rx must be positive");
        const Eigen::Index n = stats.size();
        ChannelRealization out;
        out.n_rx = n_rx;
        out.matrix.resize(n_rx, n);
        for (int r = 0; r < n_rx; ++r)
        {
            CVector h = cov_sqrt * complex_gaussian(n, rng);
            if (stats.has_los)
                h += stats.los_mean;
            out.matrix.row(r) = h.transpose();
        }
        return out;
    }

    inline ChannelRealization sample_channel(const ChannelStats &stats, int n_rx, std::uint64_t rng_seed)
    {
        std::mt19937_64 rng(rng_seed);
        return sample_channel(stats, covariance_sqrt(stats.covariance), n_rx, rng);
    }
}

#endif

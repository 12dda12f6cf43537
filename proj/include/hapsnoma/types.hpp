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

#ifndef HAPSNOMA_TYPES_HPP
#define HAPSNOMA_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <numbers>

namespace hapsnoma
{
    using cplx = std::complex<double>;
    using CVector = Eigen::VectorXcd;
    using CMatrix = Eigen::MatrixXcd;
    using RVector = Eigen::VectorXd;
    using RMatrix = Eigen::MatrixXd;
    using Vec3 = Eigen::Vector3d;

    inline constexpr double pi = std::numbers::pi;
    inline constexpr double speed_of_light = 299792458.0; // [m/s]

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
    inline double deg_to_rad(double deg) { return deg * pi / 180.0; }
    inline double rad_to_deg(double rad) { return rad * 180.0 / pi; }
}

#endif

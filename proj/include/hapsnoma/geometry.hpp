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

#ifndef HAPSNOMA_GEOMETRY_HPP
#define HAPSNOMA_GEOMETRY_HPP

#include "errors.hpp"
#include "types.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hapsnoma
{
    // Mounting of the planar array. Element positions always live in the array's own frame
    // (plane z = 0); the orientation only decides how platform-frame directions map into it.
    //
    // Platform frame: x east, y south, z towards nadir, so a ground user is seen at positive
    // elevation. A horizontal array facing down coincides with it. A vertical array facing
    // out has its boresight along platform +y and its second lattice axis pointing up.
    enum class Orientation
    {
        horizontal_facing_down,
        vertical_facing_out
    };

    struct ArrayGeometry
    {
        int m_h = 1;             // Elements along the first lattice axis
        int m_v = 1;             // Elements along the second lattice axis
        double d_h = 0.5;        // Spacing along the first axis [wavelengths]
        double d_v = 0.5;        // Spacing along the second axis [wavelengths]
        Orientation orientation = Orientation::horizontal_facing_down;
        double wavelength = 0.1; // [m]

        int size() const { return m_h * m_v; }

        void validate() const
        {
            if (m_h < 1 || m_v < 1)
                throw domain_error("ArrayGeometry: element counts must be positive");
            if (!(d_h > 0.0) || !(d_v > 0.0))
                throw domain_error("ArrayGeometry: element spacing must be positive");
            if (!(wavelength > 0.0))
                throw domain_error("ArrayGeometry: wavelength must be positive");
        }
    };

    // Azimuth / elevation pair [rad]
    struct Direction
    {
        double azimuth = 0.0;
        double elevation = 0.0;
    };

    struct UserPlacement
    {
        double azimuth = 0.0;             // Ground azimuth around the platform axis [rad]
        double elevation = 0.0;           // Elevation of the platform seen from the user [rad]
        double distance = 1.0;            // Slant range [m]
        double horizontal_distance = 1.0; // [m]
        double platform_height = 1.0;     // [m]
        double ring_radius = 0.0;         // Radius of the ring of local scatterers [m]
    };

    struct OneRingSpreads
    {
        double azimuth_spread;   // Half-width of the azimuth box [rad]
        double elevation_spread; // Half-width of the elevation box [rad]
        double elevation_center; // [rad]
    };

    // Position of element m (1-based) in the array frame [m]
    inline Vec3 element_position(const ArrayGeometry &geom, int m)
    {
        if (m < 1 || m > geom.size())
            throw domain_error("element_position: index " + std::to_string(m) + " outside [1, " +
                               std::to_string(geom.size()) + "]");
        const int i = (m - 1) % geom.m_h;
        const int j = (m - 1) / geom.m_h;
        return Vec3(double(i) * geom.d_h * geom.wavelength, double(j) * geom.d_v * geom.wavelength, 0.0);
    }

    // All element positions as columns of a 3 x M matrix
    inline Eigen::Matrix3Xd element_positions(const ArrayGeometry &geom)
    {
        Eigen::Matrix3Xd pos(3, geom.size());
        for (int m = 1; m <= geom.size(); ++m)
            pos.col(m - 1) = element_position(geom, m);
        return pos;
    }

    inline Vec3 unit_direction(double azimuth, double elevation)
    {
        const double ce = std::cos(elevation);
        return Vec3(ce * std::cos(azimuth), ce * std::sin(azimuth), std::sin(elevation));
    }

    inline Vec3 wave_vector(double azimuth, double elevation, double wavelength)
    {
        if (!(wavelength > 0.0))
            throw domain_error("wave_vector: wavelength must be positive");
        return (2.0 * pi / wavelength) * unit_direction(azimuth, elevation);
    }

    // Rotation taking platform-frame coordinates into the array frame
    inline Eigen::Matrix3d array_rotation(Orientation orientation)
    {
        Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
        if (orientation == Orientation::vertical_facing_out)
        {
            // Rows are the array axes expressed in the platform frame: x_a = x, y_a = -z (up), z_a = y
            rot << 1.0, 0.0, 0.0,
                0.0, 0.0, -1.0,
                0.0, 1.0, 0.0;
        }
        return rot;
    }

    inline Direction to_array_frame(Orientation orientation, Direction platform_dir)
    {
        if (orientation == Orientation::horizontal_facing_down)
            return platform_dir;
        const Vec3 v = array_rotation(orientation) * unit_direction(platform_dir.azimuth, platform_dir.elevation);
        return {std::atan2(v.y(), v.x()), std::asin(std::clamp(v.z(), -1.0, 1.0))};
    }

    inline OneRingSpreads one_ring_spreads(const UserPlacement &p)
    {
        const double d = p.horizontal_distance, r = p.ring_radius, h = p.platform_height;
        if (!(h > 0.0))
            throw domain_error("one_ring_spreads: platform height must be positive");
        if (!(r >= 0.0) || !(d > r))
            throw domain_error("one_ring_spreads: need 0 <= ring radius < horizontal distance");
        const double theta_min = std::atan(h / (d + r));
        const double theta_max = std::atan(h / (d - r));
        return {std::atan(r / d), 0.5 * (theta_max - theta_min), 0.5 * (theta_max + theta_min)};
    }

    // Ground user at horizontal distance and azimuth around a platform of given height
    inline UserPlacement place_user(double horizontal_distance, double azimuth, double platform_height, double ring_radius)
    {
        if (!(horizontal_distance > 0.0) || !(platform_height > 0.0))
            throw domain_error("place_user: distances must be positive");
        UserPlacement p;
        p.azimuth = azimuth;
        p.horizontal_distance = horizontal_distance;
        p.platform_height = platform_height;
        p.ring_radius = ring_radius;
        p.distance = std::hypot(horizontal_distance, platform_height);
        p.elevation = std::atan2(platform_height, horizontal_distance);
        return p;
    }
}

#endif

// SPDX-License-Identifier: Apache-2.0
//
// Closed-form phase profiles: linear beamforming, quadratic wide beams,
// spherical focusing and wide near-field illumination through a mapping from
// RIS elements to target points.
#pragma once

#include "risbeam/geometry.hpp"
#include "risbeam/profile.hpp"

#include <functional>
#include <vector>

namespace risbeam {

/// omega_n = -kappa (d(psi_t) - d(psi_r))^T u_n, evaluated as
/// -kappa (beta_y n_y + beta_z n_z) when the geometry carries a UPA layout.
PhaseProfile linear_profile(const ArrayGeometry& geom, const Angles& psi_t, const Angles& psi_r,
                            const Wavelength& wl);

struct QuadraticCoeffs {
    double alpha_y = 0.0;
    double gamma_y = 0.0;
    double alpha_z = 0.0;
    double gamma_z = 0.0;
};

struct QuadraticDesign {
    PhaseProfile profile;
    QuadraticCoeffs coeffs;
};

/// omega_n = -kappa (alpha_y n_y^2 + gamma_y n_y) - kappa (alpha_z n_z^2 + gamma_z n_z)
/// with gamma_s = min beta_s and alpha_s = (max beta_s - gamma_s) / (2 N_s), the
/// extremes taken over all pairs of A_t x A_r.
QuadraticDesign quadratic_profile(const ArrayGeometry& geom, const std::vector<Angles>& a_t,
                                  const std::vector<Angles>& a_r, const Wavelength& wl);

enum class FocusVariant { Exact, QuadraticApprox };

/// Focusing from u_t onto u_r. Element positions are taken relative to the
/// array centroid c:
///   Exact:           omega_n = -kappa sum_p (|u_p - u_n| - |u_p - c|)
///   QuadraticApprox: |u_p - u_n| - |u_p - c| ~ -cos(psi) r_n + sin^2(psi) r_n^2 / (2 |u_p - c|)
/// where r_n = |u_n - c| and psi is the angle between u_n - c and u_p - c.
PhaseProfile focusing_profile(const ArrayGeometry& geom, const Position3& u_t, const Position3& u_r,
                              const Wavelength& wl, FocusVariant variant = FocusVariant::Exact);

/// Exact focusing phase of one element toward (u_t, u_r).
double focusing_phase(const Position3& u_n, const Position3& center, const Position3& u_t,
                      const Position3& u_r, const Wavelength& wl);

/// Maps each RIS element to the target point it is responsible for.
class RegionMapping {
public:
    using MapFn = std::function<Position3(const Position3&)>;

    /// Rectangle map u_c + [(R_x/L_z) z, (R_y/L_y) y, 0], with (y, z) the
    /// element coordinates along the layout axes relative to the array
    /// centroid and L_y, L_z the element-grid extents. A single-row array
    /// (L_z = 0) uses the diagonal u_c + [(R_x/L_y) y, (R_y/L_y) y, 0].
    static RegionMapping rectangle(const ArrayGeometry& geom, const Position3& center,
                                   double extent_x, double extent_y);

    /// Segment map u_c + t span, t in [-1/2, 1/2] the element coordinate along
    /// the layout axis `along_z ? z : y` divided by its grid extent. An array
    /// with no extent along that axis maps every element to u_c.
    static RegionMapping segment(const ArrayGeometry& geom, const Position3& center, const Position3& span,
                                 bool along_z = false);

    /// Arbitrary mapping.
    RegionMapping(MapFn fn, Position3 center);

    Position3 operator()(const Position3& element) const { return fn_(element); }
    const Position3& center() const { return center_; }

private:
    MapFn fn_;
    Position3 center_;
};

/// omega_n = omega_NF,n(u_t, M(u_n)) with the exact focusing phase.
PhaseProfile wide_near_profile(const ArrayGeometry& geom, const Position3& u_t,
                               const RegionMapping& mapping, const Wavelength& wl);

/// Source and observer both swept: omega_n = omega_NF,n(S(u_n), M(u_n)).
PhaseProfile wide_near_profile(const ArrayGeometry& geom, const RegionMapping& source,
                               const RegionMapping& mapping, const Wavelength& wl);

}  // namespace risbeam

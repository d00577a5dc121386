// SPDX-License-Identifier: Apache-2.0
//
// Generalized radar cross section: response vectors f with g = f^H w,
// worst-case evaluation over target sets, and spatial field scans.
#pragma once

#include "risbeam/geometry.hpp"
#include "risbeam/profile.hpp"
#include "risbeam/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace risbeam {

enum class ResponseKind { FarField, NearField };

struct ResponseVector {
    CVector f;
    ResponseKind kind = ResponseKind::FarField;
    double omega = 1.0;  ///< unit-cell factor, |f_n| = omega
    Angles psi_t;
    Angles psi_r;
    Position3 u_t = Position3::Zero();
    Position3 u_r = Position3::Zero();
};

/// [f]_n = Omega exp(-j kappa (d(psi_t) - d(psi_r))^T u_n).
ResponseVector response_far(const ArrayGeometry& geom, const Angles& psi_t, const Angles& psi_r,
                            double omega, const Wavelength& wl);

struct SpatialFrequencies {
    double y = 0.0;
    double z = 0.0;
};

/// beta_s = d_s (d(psi_t) - d(psi_r))^T axis_s; for the default y-z layout
/// beta_y = d_y (cos th_t sin ph_t - cos th_r sin ph_r), beta_z = d_z (sin th_t - sin th_r).
SpatialFrequencies spatial_frequencies(const UpaLayout& layout, const Angles& psi_t,
                                       const Angles& psi_r);

/// UPA form Omega exp(-j kappa (beta_y n_y + beta_z n_z)), relative to the layout origin.
ResponseVector response_far_upa(const UpaLayout& layout, const Angles& psi_t, const Angles& psi_r,
                                double omega, const Wavelength& wl);

/// [f]_n = Omega exp(-j kappa (|u_t - u_n| + |u_r - u_n|)).
ResponseVector response_near(const std::vector<Position3>& positions, const Position3& u_t,
                             const Position3& u_r, double omega, const Wavelength& wl);

cd grcs_value(const ResponseVector& f, const PhaseProfile& w);

/// |f^H w|^2 / (Omega N)^2.
double normalized_grcs(const ResponseVector& f, const PhaseProfile& w);

struct TargetSet {
    std::vector<ResponseVector> entries;
    std::string description;

    int size() const { return static_cast<int>(entries.size()); }
    int dimension() const;
    ResponseKind kind() const;
    /// Shared unit-cell factor of the entries.
    double omega() const;
    /// N x |Q| matrix whose columns are the response vectors.
    CMatrix matrix() const;
};

/// All pairs of A_t x A_r.
TargetSet far_target_set(const ArrayGeometry& geom, const std::vector<Angles>& a_t,
                         const std::vector<Angles>& a_r, double omega, const Wavelength& wl);

/// All pairs of U_t x U_r.
TargetSet near_target_set(const ArrayGeometry& geom, const std::vector<Position3>& u_t,
                          const std::vector<Position3>& u_r, double omega, const Wavelength& wl);

/// Uniform (theta, phi) grid spanning the angles under which `points` are seen
/// from `reference`. With `incident` the angles are propagation directions of
/// waves leaving the points, otherwise directions pointing at the points.
/// Axes with no angular extent collapse to one sample.
std::vector<Angles> angular_grid(const std::vector<Position3>& points, const Position3& reference,
                                 bool incident, int points_per_axis);

/// Per-target normalized GRCS values.
RVector normalized_values(const TargetSet& q, const PhaseProfile& w);

/// min_q |f_q^H w|^2 / (Omega N)^2.
double worst_case_normalized(const TargetSet& q, const PhaseProfile& w);

/// Rectangular scan grid on the plane z = `z`; axis1 is x, axis2 is y.
struct ScanGrid {
    double x_lo = 0.0;
    double x_hi = 0.0;
    int nx = 1;
    double y_lo = 0.0;
    double y_hi = 0.0;
    int ny = 1;
    double z = 0.0;

    std::vector<double> axis1() const;
    std::vector<double> axis2() const;
};

struct GrcsField {
    std::vector<double> axis1;
    std::vector<double> axis2;
    RMatrix values;  ///< (axis2 index, axis1 index), normalized linear GRCS

    double max_value() const { return values.maxCoeff(); }
    /// Minimum over pixels inside the axis-aligned rectangle; NaN if none.
    double min_in(double a1_lo, double a1_hi, double a2_lo, double a2_hi) const;
    double max_outside(double a1_lo, double a1_hi, double a2_lo, double a2_hi) const;
};

/// Normalized GRCS at every scan pixel for a fixed source u_t.
GrcsField grcs_field(const ScanGrid& grid, const Position3& u_t, const PhaseProfile& w,
                     const std::vector<Position3>& positions, double omega, const Wavelength& wl);

/// CSV `axis1,axis2,value_db` after a schema comment line.
void write_grcs_field_csv(std::ostream& os, const GrcsField& field);

}  // namespace risbeam

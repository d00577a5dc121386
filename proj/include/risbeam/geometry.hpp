// SPDX-License-Identifier: Apache-2.0
//
// Array manifolds, wavefront phase expansion and propagation-regime
// classification. Angles are radians. A direction Psi = (theta, phi) maps to
// the unit vector [cos(theta)cos(phi), cos(theta)sin(phi), sin(theta)].
#pragma once

#include "risbeam/types.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace risbeam {

class Wavelength {
public:
    static Wavelength from_meters(double lambda_m);
    static Wavelength from_frequency_hz(double freq_hz);

    double meters() const { return lambda_; }
    /// kappa = 2 pi / lambda, rad/m.
    double wave_number() const { return kappa_; }

private:
    explicit Wavelength(double lambda_m);
    double lambda_;
    double kappa_;
};

inline constexpr double kSpeedOfLight = 299792458.0;

struct Angles {
    double theta = 0.0;  ///< elevation
    double phi = 0.0;    ///< azimuth
};

Position3 direction(const Angles& a);

/// Angles of the direction of `v` (need not be normalized; must be nonzero).
Angles angles_of(const Position3& v);

/// Propagation direction of a wave leaving a source at `source` and arriving at
/// the origin, i.e. angles_of(-source). This is the AoA convention of the
/// far-field response vectors: a plane wave from `source` has element phases
/// exp(j kappa d(Psi_t)^T u_n).
Angles incident_angles(const Position3& source);

/// Angles pointing from the origin toward `observer`.
Angles departure_angles(const Position3& observer);

/// Uniform planar array. Element (ny, nz) sits at
/// origin + ny*dy*axis_y + nz*dz*axis_z; linear index n = ny + Ny*nz (ny
/// fastest). The default axes put the array in the y-z plane, giving
/// positions [0, ny*dy, nz*dz].
struct UpaLayout {
    int ny = 1;
    int nz = 1;
    double dy = 0.0;
    double dz = 0.0;
    Position3 origin = Position3::Zero();
    Position3 axis_y = Position3::UnitY();
    Position3 axis_z = Position3::UnitZ();

    int size() const { return ny * nz; }
    int index(int iy, int iz) const { return iy + ny * iz; }
    int iy_of(int n) const { return n % ny; }
    int iz_of(int n) const { return n / ny; }
};

class ArrayGeometry {
public:
    explicit ArrayGeometry(std::vector<Position3> positions,
                           std::optional<UpaLayout> layout = std::nullopt);

    const std::vector<Position3>& positions() const { return positions_; }
    const Position3& operator[](std::size_t n) const { return positions_[n]; }
    int size() const { return static_cast<int>(positions_.size()); }
    const std::optional<UpaLayout>& layout() const { return layout_; }

    /// Maximum pairwise element distance D.
    double largest_dimension() const { return largest_dimension_; }
    Position3 centroid() const;

    ArrayGeometry translated(const Position3& offset) const;
    /// Same array shifted so its centroid is at the origin.
    ArrayGeometry centered() const { return translated(-centroid()); }

private:
    std::vector<Position3> positions_;
    std::optional<UpaLayout> layout_;
    double largest_dimension_ = 0.0;
};

ArrayGeometry upa_geometry(int ny, int nz, double dy, double dz);

/// UPA along arbitrary orthonormal axes, first element at the origin.
ArrayGeometry upa_geometry(int ny, int nz, double dy, double dz, const Position3& axis_y,
                           const Position3& axis_z);

/// UPA with `ny` x `nz` elements and spacing `spacing`, centroid at `center`.
ArrayGeometry centered_upa(int ny, int nz, double spacing, const Position3& center,
                           const Position3& axis_y = Position3::UnitY(),
                           const Position3& axis_z = Position3::UnitZ());

enum class Regime { ReactiveNearField, GeneralNearField, QuadraticNearField, FarField };

std::string_view to_string(Regime r);

/// Terms of the third-order expansion of the phase change across a receive
/// aperture, next to the exact value they approximate.
struct PhaseExpansion {
    double linear = 0.0;
    double quadratic = 0.0;
    double cubic = 0.0;
    double exact = 0.0;

    double approximation() const { return linear + quadratic + cubic; }
};

/// kappa (|p0 + p| - |p0|).
double phase_delta_exact(const Position3& p0, const Position3& p, const Wavelength& wl);

/// Requires |p| < |p0|.
PhaseExpansion phase_delta_expanded(const Position3& p0, const Position3& p, const Wavelength& wl);

/// d_FF = 2 D^2 / lambda.
double far_field_distance(double largest_dimension, const Wavelength& wl);

/// d_qNF = sqrt(2 D^3 / (3 sqrt(3) lambda)).
double quadratic_near_field_distance(double largest_dimension, const Wavelength& wl);

Regime classify_regime(double distance, double largest_dimension, const Wavelength& wl);

/// [a(Psi)]_n = exp(j kappa d(Psi)^T u_n).
CVector steering_vector(const ArrayGeometry& geom, const Angles& psi, const Wavelength& wl);

/// Closed form for a UPA, relative to the layout origin:
/// exp(j kappa [dy (d.axis_y) ny + dz (d.axis_z) nz]), which for the default
/// y-z axes is exp(j kappa [dy cos(theta) sin(phi) ny + dz sin(theta) nz]).
CVector steering_vector_upa(const UpaLayout& layout, const Angles& psi, const Wavelength& wl);

/// Axis-aligned box; a degenerate axis (lo == hi) is a fixed coordinate.
struct Box3 {
    Position3 lo = Position3::Zero();
    Position3 hi = Position3::Zero();

    static Box3 point(const Position3& p) { return {p, p}; }
    static Box3 centered(const Position3& c, const Position3& extent) {
        return {c - extent / 2.0, c + extent / 2.0};
    }
    Position3 center() const { return (lo + hi) / 2.0; }
    Position3 extent() const { return hi - lo; }
    bool contains(const Position3& p, double tol = 1e-9) const;
};

/// Uniform grid of `points_per_axis` samples along every non-degenerate axis
/// of the box (one sample on degenerate axes). Order: x fastest, then y, z.
std::vector<Position3> grid_points(const Box3& box, int points_per_axis);

}  // namespace risbeam

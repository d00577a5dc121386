// SPDX-License-Identifier: Apache-2.0
#include "risbeam/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace risbeam {

Wavelength::Wavelength(double lambda_m) : lambda_(lambda_m), kappa_(kTwoPi / lambda_m) {}

Wavelength Wavelength::from_meters(double lambda_m) {
    if (!(lambda_m > 0.0) || !std::isfinite(lambda_m)) {
        throw DomainError("wavelength must be positive and finite");
    }
    return Wavelength(lambda_m);
}

Wavelength Wavelength::from_frequency_hz(double freq_hz) {
    if (!(freq_hz > 0.0) || !std::isfinite(freq_hz)) {
        throw DomainError("frequency must be positive and finite");
    }
    return Wavelength(kSpeedOfLight / freq_hz);
}

Position3 direction(const Angles& a) {
    const double ct = std::cos(a.theta);
    return {ct * std::cos(a.phi), ct * std::sin(a.phi), std::sin(a.theta)};
}

Angles angles_of(const Position3& v) {
    const double r = v.norm();
    if (r == 0.0) throw DomainError("direction of a zero vector is undefined");
    return {std::asin(std::clamp(v.z() / r, -1.0, 1.0)), std::atan2(v.y(), v.x())};
}

Angles incident_angles(const Position3& source) { return angles_of(-source); }

Angles departure_angles(const Position3& observer) { return angles_of(observer); }

namespace {

double max_pairwise_distance(const std::vector<Position3>& pts) {
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t k = i + 1; k < pts.size(); ++k) {
            best = std::max(best, (pts[i] - pts[k]).squaredNorm());
        }
    }
    return std::sqrt(best);
}

}  // namespace

ArrayGeometry::ArrayGeometry(std::vector<Position3> positions, std::optional<UpaLayout> layout)
    : positions_(std::move(positions)), layout_(std::move(layout)) {
    if (positions_.empty()) throw DomainError("array geometry needs at least one element");
    if (layout_ && layout_->size() != size()) {
        throw ShapeError("UPA layout size does not match the number of positions");
    }
    if (layout_) {
        const double ly = (layout_->ny - 1) * layout_->dy;
        const double lz = (layout_->nz - 1) * layout_->dz;
        largest_dimension_ = std::hypot(ly, lz);
    } else {
        largest_dimension_ = max_pairwise_distance(positions_);
    }
}

Position3 ArrayGeometry::centroid() const {
    Position3 c = Position3::Zero();
    for (const auto& p : positions_) c += p;
    return c / static_cast<double>(positions_.size());
}

ArrayGeometry ArrayGeometry::translated(const Position3& offset) const {
    std::vector<Position3> moved;
    moved.reserve(positions_.size());
    for (const auto& p : positions_) moved.push_back(p + offset);
    auto layout = layout_;
    if (layout) layout->origin += offset;
    return ArrayGeometry(std::move(moved), layout);
}

ArrayGeometry upa_geometry(int ny, int nz, double dy, double dz) {
    return upa_geometry(ny, nz, dy, dz, Position3::UnitY(), Position3::UnitZ());
}

ArrayGeometry upa_geometry(int ny, int nz, double dy, double dz, const Position3& axis_y,
                           const Position3& axis_z) {
    if (ny < 1 || nz < 1) throw DomainError("UPA needs ny >= 1 and nz >= 1");
    if (std::abs(axis_y.norm() - 1.0) > 1e-12 || std::abs(axis_z.norm() - 1.0) > 1e-12 ||
        std::abs(axis_y.dot(axis_z)) > 1e-12) {
        throw DomainError("UPA axes must be orthonormal");
    }
    std::vector<Position3> pos;
    pos.reserve(static_cast<std::size_t>(ny) * nz);
    for (int iz = 0; iz < nz; ++iz) {
        for (int iy = 0; iy < ny; ++iy) {
            pos.push_back(iy * dy * axis_y + iz * dz * axis_z);
        }
    }
    UpaLayout layout{ny, nz, dy, dz, Position3::Zero(), axis_y, axis_z};
    return ArrayGeometry(std::move(pos), layout);
}

ArrayGeometry centered_upa(int ny, int nz, double spacing, const Position3& center,
                           const Position3& axis_y, const Position3& axis_z) {
    auto g = upa_geometry(ny, nz, spacing, spacing, axis_y, axis_z);
    return g.translated(center - g.centroid());
}

std::string_view to_string(Regime r) {
    switch (r) {
        case Regime::ReactiveNearField: return "reactive-near-field";
        case Regime::GeneralNearField: return "near-field";
        case Regime::QuadraticNearField: return "quadratic-near-field";
        case Regime::FarField: return "far-field";
    }
    return "unknown";
}

double phase_delta_exact(const Position3& p0, const Position3& p, const Wavelength& wl) {
    const double r0 = p0.norm();
    if (r0 == 0.0) throw DomainError("phase_delta_exact: p0 must be nonzero");
    return wl.wave_number() * ((p0 + p).norm() - r0);
}

PhaseExpansion phase_delta_expanded(const Position3& p0, const Position3& p, const Wavelength& wl) {
    const double r0 = p0.norm();
    const double r = p.norm();
    if (r0 == 0.0 || r >= r0) {
        throw DomainError("phase_delta_expanded: requires 0 <= |p| < |p0|");
    }
    PhaseExpansion e;
    e.exact = phase_delta_exact(p0, p, wl);
    if (r == 0.0) return e;
    const double c = std::clamp(p0.dot(p) / (r0 * r), -1.0, 1.0);
    const double s2 = 1.0 - c * c;
    const double t = r / r0;
    const double scale = wl.wave_number() * r0;
    e.linear = scale * c * t;
    e.quadratic = scale * 0.5 * s2 * t * t;
    e.cubic = -scale * 0.5 * c * s2 * t * t * t;
    return e;
}

double far_field_distance(double largest_dimension, const Wavelength& wl) {
    if (largest_dimension < 0.0) throw DomainError("largest dimension must be >= 0");
    return 2.0 * largest_dimension * largest_dimension / wl.meters();
}

double quadratic_near_field_distance(double largest_dimension, const Wavelength& wl) {
    if (largest_dimension < 0.0) throw DomainError("largest dimension must be >= 0");
    const double d3 = largest_dimension * largest_dimension * largest_dimension;
    return std::sqrt(2.0 * d3 / (3.0 * std::sqrt(3.0) * wl.meters()));
}

Regime classify_regime(double distance, double largest_dimension, const Wavelength& wl) {
    if (!(distance > 0.0)) throw DomainError("classify_regime: distance must be positive");
    if (distance < wl.meters()) return Regime::ReactiveNearField;
    if (distance >= far_field_distance(largest_dimension, wl)) return Regime::FarField;
    if (distance >= quadratic_near_field_distance(largest_dimension, wl)) {
        return Regime::QuadraticNearField;
    }
    return Regime::GeneralNearField;
}

CVector steering_vector(const ArrayGeometry& geom, const Angles& psi, const Wavelength& wl) {
    const Position3 d = direction(psi);
    const double k = wl.wave_number();
    CVector a(geom.size());
    for (int n = 0; n < geom.size(); ++n) {
        a[n] = std::polar(1.0, k * d.dot(geom[n]));
    }
    return a;
}

CVector steering_vector_upa(const UpaLayout& layout, const Angles& psi, const Wavelength& wl) {
    const double k = wl.wave_number();
    const Position3 d = direction(psi);
    const double gy = layout.dy * d.dot(layout.axis_y);
    const double gz = layout.dz * d.dot(layout.axis_z);
    CVector a(layout.size());
    for (int n = 0; n < layout.size(); ++n) {
        a[n] = std::polar(1.0, k * (gy * layout.iy_of(n) + gz * layout.iz_of(n)));
    }
    return a;
}

bool Box3::contains(const Position3& p, double tol) const {
    for (int i = 0; i < 3; ++i) {
        if (p[i] < lo[i] - tol || p[i] > hi[i] + tol) return false;
    }
    return true;
}

std::vector<Position3> grid_points(const Box3& box, int points_per_axis) {
    if (points_per_axis < 1) throw DomainError("grid needs at least one point per axis");
    std::array<std::vector<double>, 3> axes;
    for (int i = 0; i < 3; ++i) {
        const double lo = box.lo[i];
        const double hi = box.hi[i];
        if (hi - lo <= 1e-12 || points_per_axis == 1) {
            axes[i] = {(lo + hi) / 2.0};
            continue;
        }
        for (int k = 0; k < points_per_axis; ++k) {
            axes[i].push_back(lo + (hi - lo) * k / (points_per_axis - 1));
        }
    }
    std::vector<Position3> pts;
    for (double z : axes[2]) {
        for (double y : axes[1]) {
            for (double x : axes[0]) pts.emplace_back(x, y, z);
        }
    }
    return pts;
}

}  // namespace risbeam

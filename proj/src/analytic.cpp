// SPDX-License-Identifier: Apache-2.0
#include "risbeam/analytic.hpp"

#include "risbeam/grcs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace risbeam {

PhaseProfile linear_profile(const ArrayGeometry& geom, const Angles& psi_t, const Angles& psi_r,
                            const Wavelength& wl) {
    const double k = wl.wave_number();
    RVector om(geom.size());
    if (const auto& layout = geom.layout()) {
        const auto beta = spatial_frequencies(*layout, psi_t, psi_r);
        for (int n = 0; n < geom.size(); ++n) {
            om[n] = -k * (beta.y * layout->iy_of(n) + beta.z * layout->iz_of(n));
        }
    } else {
        const Position3 dd = direction(psi_t) - direction(psi_r);
        for (int n = 0; n < geom.size(); ++n) om[n] = -k * dd.dot(geom[n]);
    }
    return PhaseProfile(std::move(om));
}

QuadraticDesign quadratic_profile(const ArrayGeometry& geom, const std::vector<Angles>& a_t,
                                  const std::vector<Angles>& a_r, const Wavelength& wl) {
    if (a_t.empty() || a_r.empty()) throw DomainError("quadratic_profile: empty angle set");
    const auto& layout = geom.layout();
    if (!layout) throw DomainError("quadratic_profile needs a UPA geometry");
    const double inf = std::numeric_limits<double>::infinity();
    double by_lo = inf, by_hi = -inf, bz_lo = inf, bz_hi = -inf;
    for (const auto& t : a_t) {
        for (const auto& r : a_r) {
            const auto b = spatial_frequencies(*layout, t, r);
            by_lo = std::min(by_lo, b.y);
            by_hi = std::max(by_hi, b.y);
            bz_lo = std::min(bz_lo, b.z);
            bz_hi = std::max(bz_hi, b.z);
        }
    }
    QuadraticDesign d;
    d.coeffs.gamma_y = by_lo;
    d.coeffs.alpha_y = (by_hi - by_lo) / (2.0 * layout->ny);
    d.coeffs.gamma_z = bz_lo;
    d.coeffs.alpha_z = (bz_hi - bz_lo) / (2.0 * layout->nz);
    const double k = wl.wave_number();
    RVector om(geom.size());
    for (int n = 0; n < geom.size(); ++n) {
        const double ny = layout->iy_of(n);
        const double nz = layout->iz_of(n);
        om[n] = -k * (d.coeffs.alpha_y * ny * ny + d.coeffs.gamma_y * ny) -
                k * (d.coeffs.alpha_z * nz * nz + d.coeffs.gamma_z * nz);
    }
    d.profile = PhaseProfile(std::move(om));
    return d;
}

double focusing_phase(const Position3& u_n, const Position3& center, const Position3& u_t,
                      const Position3& u_r, const Wavelength& wl) {
    double acc = 0.0;
    for (const Position3* p : {&u_t, &u_r}) {
        const double d = (*p - u_n).norm();
        if (d <= 1e-12) throw DomainError("focusing point lies on an RIS element");
        acc += d - (*p - center).norm();
    }
    return -wl.wave_number() * acc;
}

PhaseProfile focusing_profile(const ArrayGeometry& geom, const Position3& u_t, const Position3& u_r,
                              const Wavelength& wl, FocusVariant variant) {
    const Position3 c = geom.centroid();
    RVector om(geom.size());
    if (variant == FocusVariant::Exact) {
        for (int n = 0; n < geom.size(); ++n) om[n] = focusing_phase(geom[n], c, u_t, u_r, wl);
        return PhaseProfile(std::move(om));
    }
    const double k = wl.wave_number();
    for (int n = 0; n < geom.size(); ++n) {
        const Position3 rel = geom[n] - c;
        const double rn = rel.norm();
        double acc = 0.0;
        for (const Position3* p : {&u_t, &u_r}) {
            const Position3 up = *p - c;
            const double dp = up.norm();
            if (dp <= 1e-12) throw DomainError("focusing point lies at the RIS centre");
            if (rn == 0.0) continue;
            const double cos_psi = std::clamp(up.dot(rel) / (dp * rn), -1.0, 1.0);
            const double alpha = (1.0 - cos_psi * cos_psi) / (2.0 * dp);
            acc += alpha * rn * rn - cos_psi * rn;
        }
        om[n] = -k * acc;
    }
    return PhaseProfile(std::move(om));
}

RegionMapping::RegionMapping(MapFn fn, Position3 center) : fn_(std::move(fn)), center_(std::move(center)) {}

RegionMapping RegionMapping::rectangle(const ArrayGeometry& geom, const Position3& center,
                                       double extent_x, double extent_y) {
    if (extent_x < 0.0 || extent_y < 0.0) throw DomainError("region extents must be >= 0");
    const auto& layout = geom.layout();
    if (!layout) throw DomainError("rectangle mapping needs a UPA geometry");
    const Position3 c = geom.centroid();
    const Position3 ay = layout->axis_y;
    const Position3 az = layout->axis_z;
    const double ly = (layout->ny - 1) * layout->dy;
    const double lz = (layout->nz - 1) * layout->dz;
    if (ly <= 0.0 && lz <= 0.0) {
        return RegionMapping([center](const Position3&) { return center; }, center);
    }
    if (lz <= 0.0) {
        return RegionMapping(
            [=](const Position3& u) {
                const double y = (u - c).dot(ay);
                return Position3(center + Position3(extent_x / ly * y, extent_y / ly * y, 0.0));
            },
            center);
    }
    if (ly <= 0.0) {
        return RegionMapping(
            [=](const Position3& u) {
                const double z = (u - c).dot(az);
                return Position3(center + Position3(extent_x / lz * z, extent_y / lz * z, 0.0));
            },
            center);
    }
    return RegionMapping(
        [=](const Position3& u) {
            const double y = (u - c).dot(ay);
            const double z = (u - c).dot(az);
            return Position3(center + Position3(extent_x / lz * z, extent_y / ly * y, 0.0));
        },
        center);
}

RegionMapping RegionMapping::segment(const ArrayGeometry& geom, const Position3& center,
                                     const Position3& span, bool along_z) {
    const auto& layout = geom.layout();
    if (!layout) throw DomainError("segment mapping needs a UPA geometry");
    const Position3 c = geom.centroid();
    const Position3 axis = along_z ? layout->axis_z : layout->axis_y;
    const double l = along_z ? (layout->nz - 1) * layout->dz : (layout->ny - 1) * layout->dy;
    if (l <= 0.0) return RegionMapping([center](const Position3&) { return center; }, center);
    return RegionMapping([=](const Position3& u) { return Position3(center + (u - c).dot(axis) / l * span); },
                         center);
}

PhaseProfile wide_near_profile(const ArrayGeometry& geom, const Position3& u_t,
                               const RegionMapping& mapping, const Wavelength& wl) {
    const Position3 c = geom.centroid();
    RVector om(geom.size());
    for (int n = 0; n < geom.size(); ++n) {
        om[n] = focusing_phase(geom[n], c, u_t, mapping(geom[n]), wl);
    }
    return PhaseProfile(std::move(om));
}

PhaseProfile wide_near_profile(const ArrayGeometry& geom, const RegionMapping& source,
                               const RegionMapping& mapping, const Wavelength& wl) {
    const Position3 c = geom.centroid();
    RVector om(geom.size());
    for (int n = 0; n < geom.size(); ++n) {
        om[n] = focusing_phase(geom[n], c, source(geom[n]), mapping(geom[n]), wl);
    }
    return PhaseProfile(std::move(om));
}

}  // namespace risbeam

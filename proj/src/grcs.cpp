// SPDX-License-Identifier: Apache-2.0
#include "risbeam/grcs.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace risbeam {

ResponseVector response_far(const ArrayGeometry& geom, const Angles& psi_t, const Angles& psi_r,
                            double omega, const Wavelength& wl) {
    const Position3 dd = direction(psi_t) - direction(psi_r);
    const double k = wl.wave_number();
    ResponseVector r;
    r.kind = ResponseKind::FarField;
    r.omega = omega;
    r.psi_t = psi_t;
    r.psi_r = psi_r;
    r.f.resize(geom.size());
    for (int n = 0; n < geom.size(); ++n) r.f[n] = std::polar(omega, -k * dd.dot(geom[n]));
    return r;
}

SpatialFrequencies spatial_frequencies(const UpaLayout& layout, const Angles& psi_t,
                                       const Angles& psi_r) {
    const Position3 dd = direction(psi_t) - direction(psi_r);
    return {layout.dy * dd.dot(layout.axis_y), layout.dz * dd.dot(layout.axis_z)};
}

ResponseVector response_far_upa(const UpaLayout& layout, const Angles& psi_t, const Angles& psi_r,
                                double omega, const Wavelength& wl) {
    const auto beta = spatial_frequencies(layout, psi_t, psi_r);
    const double k = wl.wave_number();
    ResponseVector r;
    r.kind = ResponseKind::FarField;
    r.omega = omega;
    r.psi_t = psi_t;
    r.psi_r = psi_r;
    r.f.resize(layout.size());
    for (int n = 0; n < layout.size(); ++n) {
        r.f[n] = std::polar(omega, -k * (beta.y * layout.iy_of(n) + beta.z * layout.iz_of(n)));
    }
    return r;
}

ResponseVector response_near(const std::vector<Position3>& positions, const Position3& u_t,
                             const Position3& u_r, double omega, const Wavelength& wl) {
    const double k = wl.wave_number();
    ResponseVector r;
    r.kind = ResponseKind::NearField;
    r.omega = omega;
    r.u_t = u_t;
    r.u_r = u_r;
    r.f.resize(static_cast<Eigen::Index>(positions.size()));
    for (std::size_t n = 0; n < positions.size(); ++n) {
        const double dt = (u_t - positions[n]).norm();
        const double dr = (u_r - positions[n]).norm();
        if (dt <= 1e-12 || dr <= 1e-12) throw DomainError("response_near: point on an RIS element");
        r.f[static_cast<Eigen::Index>(n)] = std::polar(omega, -k * (dt + dr));
    }
    return r;
}

cd grcs_value(const ResponseVector& f, const PhaseProfile& w) {
    if (f.f.size() != w.size()) throw ShapeError("grcs_value: length mismatch");
    return f.f.dot(w.weights());
}

double normalized_grcs(const ResponseVector& f, const PhaseProfile& w) {
    const double gmax = f.omega * static_cast<double>(f.f.size());
    return std::norm(grcs_value(f, w)) / (gmax * gmax);
}

int TargetSet::dimension() const {
    if (entries.empty()) throw DomainError("empty target set");
    return static_cast<int>(entries.front().f.size());
}

ResponseKind TargetSet::kind() const {
    if (entries.empty()) throw DomainError("empty target set");
    return entries.front().kind;
}

double TargetSet::omega() const {
    if (entries.empty()) throw DomainError("empty target set");
    return entries.front().omega;
}

CMatrix TargetSet::matrix() const {
    CMatrix m(dimension(), size());
    for (int q = 0; q < size(); ++q) m.col(q) = entries[q].f;
    return m;
}

TargetSet far_target_set(const ArrayGeometry& geom, const std::vector<Angles>& a_t,
                         const std::vector<Angles>& a_r, double omega, const Wavelength& wl) {
    if (a_t.empty() || a_r.empty()) throw DomainError("far_target_set: empty angle set");
    TargetSet q;
    for (const auto& t : a_t) {
        for (const auto& r : a_r) q.entries.push_back(response_far(geom, t, r, omega, wl));
    }
    q.description = "far-field " + std::to_string(a_t.size()) + "x" + std::to_string(a_r.size());
    return q;
}

TargetSet near_target_set(const ArrayGeometry& geom, const std::vector<Position3>& u_t,
                          const std::vector<Position3>& u_r, double omega, const Wavelength& wl) {
    if (u_t.empty() || u_r.empty()) throw DomainError("near_target_set: empty location set");
    TargetSet q;
    for (const auto& t : u_t) {
        for (const auto& r : u_r) q.entries.push_back(response_near(geom.positions(), t, r, omega, wl));
    }
    q.description = "near-field " + std::to_string(u_t.size()) + "x" + std::to_string(u_r.size());
    return q;
}

std::vector<Angles> angular_grid(const std::vector<Position3>& points, const Position3& reference,
                                 bool incident, int points_per_axis) {
    if (points.empty()) throw DomainError("angular_grid: no points");
    if (points_per_axis < 1) throw DomainError("angular_grid: need at least one point per axis");
    double th_lo = std::numeric_limits<double>::infinity();
    double th_hi = -th_lo;
    double ph_lo = th_lo;
    double ph_hi = -th_lo;
    std::vector<Angles> raw;
    for (const auto& p : points) {
        const Position3 v = p - reference;
        const Angles a = incident ? incident_angles(v) : departure_angles(v);
        raw.push_back(a);
    }
    // Unwrap azimuths around the first sample so ranges never straddle +-pi.
    const double ref_phi = raw.front().phi;
    for (auto& a : raw) {
        a.phi = ref_phi + wrap_phase(a.phi - ref_phi);
        th_lo = std::min(th_lo, a.theta);
        th_hi = std::max(th_hi, a.theta);
        ph_lo = std::min(ph_lo, a.phi);
        ph_hi = std::max(ph_hi, a.phi);
    }
    auto axis = [&](double lo, double hi) {
        std::vector<double> v;
        if (hi - lo <= 1e-12 || points_per_axis == 1) {
            v.push_back((lo + hi) / 2.0);
            return v;
        }
        for (int k = 0; k < points_per_axis; ++k) v.push_back(lo + (hi - lo) * k / (points_per_axis - 1));
        return v;
    };
    std::vector<Angles> out;
    for (double th : axis(th_lo, th_hi)) {
        for (double ph : axis(ph_lo, ph_hi)) out.push_back({th, ph});
    }
    return out;
}

RVector normalized_values(const TargetSet& q, const PhaseProfile& w) {
    RVector v(q.size());
    for (int i = 0; i < q.size(); ++i) v[i] = normalized_grcs(q.entries[i], w);
    return v;
}

double worst_case_normalized(const TargetSet& q, const PhaseProfile& w) {
    if (q.entries.empty()) throw DomainError("worst_case_normalized: empty target set");
    return normalized_values(q, w).minCoeff();
}

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    if (n < 1) throw DomainError("scan grid needs at least one sample per axis");
    std::vector<double> v;
    if (n == 1) return {(lo + hi) / 2.0};
    for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * i / (n - 1));
    return v;
}

}  // namespace

std::vector<double> ScanGrid::axis1() const { return linspace(x_lo, x_hi, nx); }
std::vector<double> ScanGrid::axis2() const { return linspace(y_lo, y_hi, ny); }

double GrcsField::min_in(double a1_lo, double a1_hi, double a2_lo, double a2_hi) const {
    double best = std::numeric_limits<double>::quiet_NaN();
    const double eps = 1e-9;
    for (std::size_t j = 0; j < axis2.size(); ++j) {
        if (axis2[j] < a2_lo - eps || axis2[j] > a2_hi + eps) continue;
        for (std::size_t i = 0; i < axis1.size(); ++i) {
            if (axis1[i] < a1_lo - eps || axis1[i] > a1_hi + eps) continue;
            const double v = values(j, i);
            if (std::isnan(best) || v < best) best = v;
        }
    }
    return best;
}

double GrcsField::max_outside(double a1_lo, double a1_hi, double a2_lo, double a2_hi) const {
    double best = std::numeric_limits<double>::quiet_NaN();
    const double eps = 1e-9;
    for (std::size_t j = 0; j < axis2.size(); ++j) {
        for (std::size_t i = 0; i < axis1.size(); ++i) {
            const bool inside = axis1[i] >= a1_lo - eps && axis1[i] <= a1_hi + eps &&
                                axis2[j] >= a2_lo - eps && axis2[j] <= a2_hi + eps;
            if (inside) continue;
            const double v = values(j, i);
            if (std::isnan(best) || v > best) best = v;
        }
    }
    return best;
}

GrcsField grcs_field(const ScanGrid& grid, const Position3& u_t, const PhaseProfile& w,
                     const std::vector<Position3>& positions, double omega, const Wavelength& wl) {
    if (static_cast<int>(positions.size()) != w.size()) throw ShapeError("grcs_field: length mismatch");
    GrcsField field;
    field.axis1 = grid.axis1();
    field.axis2 = grid.axis2();
    field.values.resize(static_cast<Eigen::Index>(field.axis2.size()),
                        static_cast<Eigen::Index>(field.axis1.size()));
    const double k = wl.wave_number();
    const int n = w.size();
    // exp(j kappa |u_t - u_n|) w_n is shared by every pixel.
    CVector src(n);
    const CVector wv = w.weights();
    for (int i = 0; i < n; ++i) {
        const double dt = (u_t - positions[i]).norm();
        if (dt <= 1e-12) throw DomainError("grcs_field: source on an RIS element");
        src[i] = std::polar(1.0, k * dt) * wv[i];
    }
    const double norm = static_cast<double>(n) * static_cast<double>(n);
    for (std::size_t j = 0; j < field.axis2.size(); ++j) {
        for (std::size_t i = 0; i < field.axis1.size(); ++i) {
            const Position3 p(field.axis1[i], field.axis2[j], grid.z);
            cd acc{0.0, 0.0};
            for (int e = 0; e < n; ++e) {
                const double dr = (p - positions[e]).norm();
                acc += std::polar(1.0, k * dr) * src[e];
            }
            field.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
                std::norm(acc) / norm;
        }
    }
    (void)omega;  // cancels in the normalization
    return field;
}

void write_grcs_field_csv(std::ostream& os, const GrcsField& field) {
    os << "# risbeam-csv v1 grcs_field\n";
    os << "axis1,axis2,value_db\n";
    os << std::setprecision(10);
    for (std::size_t j = 0; j < field.axis2.size(); ++j) {
        for (std::size_t i = 0; i < field.axis1.size(); ++i) {
            const double v = field.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
            const double db = v > 0.0 ? linear_to_db(v) : -400.0;
            os << field.axis1[i] << ',' << field.axis2[j] << ',' << db << '\n';
        }
    }
}

}  // namespace risbeam

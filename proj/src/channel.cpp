// SPDX-License-Identifier: Apache-2.0
#include "risbeam/channel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace risbeam {

namespace {

double checked_distance(const Position3& a, const Position3& b, const char* what) {
    const double d = (a - b).norm();
    if (d <= 1e-12) throw DomainError(what);
    return d;
}

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

}  // namespace

ReflectorPlane::ReflectorPlane(const Position3& p, const Position3& n, cd c)
    : point(p), normal(n), attenuation(c) {
    if (std::abs(n.norm() - 1.0) > 1e-12) throw DomainError("reflector normal must be unit length");
}

Position3 ReflectorPlane::mirror(const Position3& x) const {
    return x - 2.0 * signed_distance(x) * normal;
}

CMatrix los_far(const ArrayGeometry& tx, const ArrayGeometry& rx, const Angles& psi_tx,
                const Angles& psi_rx, cd c, const Wavelength& wl) {
    const CVector a_tx = steering_vector(tx, psi_tx, wl);
    const CVector a_rx = steering_vector(rx, psi_rx, wl);
    return c * a_rx * a_tx.adjoint();
}

CMatrix los_near(const std::vector<Position3>& tx, const std::vector<Position3>& rx, cd c,
                 const Wavelength& wl) {
    const double k = wl.wave_number();
    CMatrix h(rx.size(), tx.size());
    for (std::size_t m = 0; m < rx.size(); ++m) {
        for (std::size_t n = 0; n < tx.size(); ++n) {
            const double d = checked_distance(rx[m], tx[n], "los_near: coincident tx/rx elements");
            h(m, n) = c * std::polar(1.0, k * d);
        }
    }
    return h;
}

RMatrix correlation_matrix(const ArrayGeometry& geom, const Wavelength& wl) {
    const int n = geom.size();
    const double k = wl.wave_number();
    RMatrix r(n, n);
    for (int i = 0; i < n; ++i) {
        r(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j) {
            r(i, j) = r(j, i) = sinc(k * (geom[i] - geom[j]).norm());
        }
    }
    return r;
}

RMatrix psd_sqrt(const RMatrix& r, double tol) {
    if (r.rows() != r.cols()) throw ShapeError("psd_sqrt: matrix must be square");
    Eigen::SelfAdjointEigenSolver<RMatrix> es(r);
    RVector ev = es.eigenvalues();
    const double floor = -tol * std::max(1.0, ev.maxCoeff());
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev[i] < floor) throw DomainError("psd_sqrt: matrix is not positive semidefinite");
        ev[i] = std::sqrt(std::max(ev[i], 0.0));
    }
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

CMatrix correlated_rayleigh(const RMatrix& r_tx, const RMatrix& r_rx, double sigma2, Rng& rng) {
    if (sigma2 < 0.0) throw DomainError("non-LOS power must be >= 0");
    const RMatrix s_tx = psd_sqrt(r_tx);
    const RMatrix s_rx = psd_sqrt(r_rx);
    CMatrix iid(r_rx.rows(), r_tx.rows());
    for (Eigen::Index n = 0; n < iid.cols(); ++n) {
        for (Eigen::Index m = 0; m < iid.rows(); ++m) iid(m, n) = rng.complex_normal(sigma2);
    }
    return s_rx.cast<cd>() * iid * s_tx.cast<cd>();
}

CMatrix clustered_nlos(const std::vector<ScatterCluster>& clusters, const ArrayGeometry& tx,
                       const ArrayGeometry& rx, const Wavelength& wl) {
    if (clusters.empty()) throw DomainError("clustered_nlos needs at least one cluster");
    std::size_t total = 0;
    for (const auto& c : clusters) {
        if (c.subpaths.empty()) throw DomainError("every cluster needs at least one sub-path");
        total += c.subpaths.size();
    }
    CMatrix h = CMatrix::Zero(rx.size(), tx.size());
    for (const auto& c : clusters) {
        for (const auto& sp : c.subpaths) {
            const CVector a_tx = steering_vector(tx, sp.tx, wl);
            const CVector a_rx = steering_vector(rx, sp.rx, wl);
            h.noalias() += (c.gain * std::polar(1.0, sp.phase)) * a_rx * a_tx.adjoint();
        }
    }
    return h / std::sqrt(static_cast<double>(total));
}

std::vector<ScatterCluster> draw_clusters(int count, int subpaths, double spread_rad,
                                          const std::vector<cd>& gains, Rng& rng) {
    if (count < 1 || subpaths < 1) throw DomainError("need at least one cluster and sub-path");
    if (static_cast<int>(gains.size()) != count) throw ShapeError("one gain per cluster");
    const double half = kPi / 2.0;
    std::vector<ScatterCluster> out(count);
    for (int v = 0; v < count; ++v) {
        out[v].gain = gains[v];
        const Angles tx_c{rng.uniform(-half, half), rng.uniform(-half, half)};
        const Angles rx_c{rng.uniform(-half, half), rng.uniform(-half, half)};
        for (int r = 0; r < subpaths; ++r) {
            SubPath sp;
            sp.tx = {tx_c.theta + rng.uniform(-spread_rad, spread_rad),
                     tx_c.phi + rng.uniform(-spread_rad, spread_rad)};
            sp.rx = {rx_c.theta + rng.uniform(-spread_rad, spread_rad),
                     rx_c.phi + rng.uniform(-spread_rad, spread_rad)};
            sp.phase = rng.phase();
            out[v].subpaths.push_back(sp);
        }
    }
    return out;
}

CMatrix reflector_nlos(const std::vector<Position3>& tx, const std::vector<Position3>& rx,
                       const ReflectorPlane& plane, const Wavelength& wl, MirrorSide side) {
    auto check_side = [&](const std::vector<Position3>& pts) {
        double sign = 0.0;
        for (const auto& p : pts) {
            const double s = plane.signed_distance(p);
            if (std::abs(s) <= 1e-12) throw DomainError("reflector_nlos: array element on the plane");
            if (sign != 0.0 && (s > 0) != (sign > 0)) {
                throw DomainError("reflector_nlos: array straddles the plane");
            }
            sign = s;
        }
    };
    check_side(tx);
    check_side(rx);
    const double k = wl.wave_number();
    CMatrix h(rx.size(), tx.size());
    for (std::size_t m = 0; m < rx.size(); ++m) {
        for (std::size_t n = 0; n < tx.size(); ++n) {
            const double d = side == MirrorSide::Receiver ? (plane.mirror(rx[m]) - tx[n]).norm()
                                                          : (rx[m] - plane.mirror(tx[n])).norm();
            h(m, n) = plane.attenuation * std::polar(1.0, k * d);
        }
    }
    return h;
}

CMatrix point_scatter_nlos(const std::vector<Position3>& tx, const std::vector<Position3>& rx,
                           const PointScatterer& s, const Wavelength& wl) {
    const double k = wl.wave_number();
    CVector to_rx(rx.size());
    CVector from_tx(tx.size());
    for (std::size_t m = 0; m < rx.size(); ++m) {
        to_rx[m] = std::polar(1.0, k * checked_distance(rx[m], s.position,
                                                        "point scatterer coincides with an element"));
    }
    for (std::size_t n = 0; n < tx.size(); ++n) {
        from_tx[n] = std::polar(1.0, k * checked_distance(s.position, tx[n],
                                                          "point scatterer coincides with an element"));
    }
    return s.attenuation * to_rx * from_tx.transpose();
}

double point_scatter_attenuation(double d_rx_s, double d_s_tx, double scale) {
    if (!(d_rx_s > 0.0) || !(d_s_tx > 0.0)) throw DomainError("scatterer distances must be positive");
    return scale / (d_rx_s * d_s_tx);
}

CMatrix rician_combine(const CMatrix& h_los, const CMatrix& h_nlos, double k) {
    if (h_los.rows() != h_nlos.rows() || h_los.cols() != h_nlos.cols()) {
        throw ShapeError("rician_combine: LOS and non-LOS shapes differ");
    }
    if (std::isnan(k) || k < 0.0) throw DomainError("Rician K must be >= 0");
    if (std::isinf(k)) return h_los;
    return std::sqrt(k / (1.0 + k)) * h_los + std::sqrt(1.0 / (1.0 + k)) * h_nlos;
}

double unit_cell_factor(const Wavelength& wl, double unit_cell_area_m2) {
    if (!(unit_cell_area_m2 > 0.0)) throw DomainError("unit-cell area must be positive");
    return 4.0 * kPi * unit_cell_area_m2 / (wl.meters() * wl.meters());
}

double unit_cell_factor(const Wavelength& wl) {
    const double half = wl.meters() / 2.0;
    return unit_cell_factor(wl, half * half);
}

CMatrix end_to_end(const CMatrix& h_d, const CMatrix& h_t, const CMatrix& h_r, double omega,
                   const PhaseProfile& w) {
    if (h_r.cols() != h_t.rows() || h_r.cols() != w.size()) {
        throw ShapeError("end_to_end: RIS dimension mismatch");
    }
    if (h_d.rows() != h_r.rows() || h_d.cols() != h_t.cols()) {
        throw ShapeError("end_to_end: direct link shape mismatch");
    }
    const CVector g = omega * w.weights();
    return h_d + h_r * g.asDiagonal() * h_t;
}

double PathLossModel::amplitude(double distance_m) const {
    if (!(distance_m > 0.0)) throw DomainError("path-loss distance must be positive");
    return std::sqrt(db_to_linear(h0_db) * std::pow(d0_m / distance_m, exponent));
}

}  // namespace risbeam

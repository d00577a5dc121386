// SPDX-License-Identifier: Apache-2.0
//
// Channel matrices between arrays. Rows index receive elements, columns
// transmit elements. Every propagation phase is exp(+j kappa * path length).
#pragma once

#include "risbeam/geometry.hpp"
#include "risbeam/profile.hpp"
#include "risbeam/random.hpp"
#include "risbeam/types.hpp"

#include <limits>
#include <vector>

namespace risbeam {

/// K = +infinity selects the pure LOS channel.
inline constexpr double kRicianInfinity = std::numeric_limits<double>::infinity();

struct SubPath {
    double phase = 0.0;
    Angles tx;  ///< departure direction at the transmitter
    Angles rx;  ///< arrival direction at the receiver (propagation direction)
};

struct ScatterCluster {
    cd gain{1.0, 0.0};
    std::vector<SubPath> subpaths;
};

struct ReflectorPlane {
    Position3 point = Position3::Zero();
    Position3 normal = Position3::UnitZ();
    cd attenuation{1.0, 0.0};

    ReflectorPlane(const Position3& p, const Position3& n, cd c);
    Position3 mirror(const Position3& x) const;
    double signed_distance(const Position3& x) const { return normal.dot(x - point); }
};

struct PointScatterer {
    Position3 position = Position3::Zero();
    cd attenuation{1.0, 0.0};
};

/// H = c a_rx(psi_rx) a_tx(psi_tx)^H.
CMatrix los_far(const ArrayGeometry& tx, const ArrayGeometry& rx, const Angles& psi_tx,
                const Angles& psi_rx, cd c, const Wavelength& wl);

/// [H]_{m,n} = c exp(j kappa |u_rx,m - u_tx,n|).
CMatrix los_near(const std::vector<Position3>& tx, const std::vector<Position3>& rx, cd c,
                 const Wavelength& wl);

/// [R]_{m,n} = sinc(kappa |u_m - u_n|).
RMatrix correlation_matrix(const ArrayGeometry& geom, const Wavelength& wl);

/// Symmetric square root of a symmetric PSD matrix. Eigenvalues in
/// [-tol * max(1, lambda_max), 0) are clipped to zero; anything more negative
/// is rejected.
RMatrix psd_sqrt(const RMatrix& r, double tol = 1e-9);

/// H = sqrt(R_rx) H_iid sqrt(R_tx), entries of H_iid ~ CN(0, sigma2).
CMatrix correlated_rayleigh(const RMatrix& r_tx, const RMatrix& r_rx, double sigma2, Rng& rng);

/// Sum over clusters and sub-paths of g e^{j psi} a_rx a_tx^H, scaled by
/// 1/sqrt(total sub-path count).
CMatrix clustered_nlos(const std::vector<ScatterCluster>& clusters, const ArrayGeometry& tx,
                       const ArrayGeometry& rx, const Wavelength& wl);

/// `count` clusters of `subpaths` sub-paths each. Cluster centres are uniform
/// over the front half-space (theta, phi in [-90, 90] deg); sub-paths deviate
/// uniformly by up to +-spread around the centre; phases uniform in [0, 2 pi).
std::vector<ScatterCluster> draw_clusters(int count, int subpaths, double spread_rad,
                                          const std::vector<cd>& gains, Rng& rng);

enum class MirrorSide { Receiver, Transmitter };

/// Perfect reflection by an infinite plane via image theory.
CMatrix reflector_nlos(const std::vector<Position3>& tx, const std::vector<Position3>& rx,
                       const ReflectorPlane& plane, const Wavelength& wl,
                       MirrorSide side = MirrorSide::Receiver);

/// [H]_{m,n} = c_s exp(j kappa (|u_rx,m - u_s| + |u_s - u_tx,n|)).
CMatrix point_scatter_nlos(const std::vector<Position3>& tx, const std::vector<Position3>& rx,
                           const PointScatterer& s, const Wavelength& wl);

/// scale / (d_rx_s * d_s_tx): double path loss of a point scatterer.
double point_scatter_attenuation(double d_rx_s, double d_s_tx, double scale = 1.0);

CMatrix rician_combine(const CMatrix& h_los, const CMatrix& h_nlos, double k);

/// Omega = 4 pi A_uc / lambda^2.
double unit_cell_factor(const Wavelength& wl, double unit_cell_area_m2);

/// Default unit cell of lambda/2 x lambda/2, i.e. Omega = pi.
double unit_cell_factor(const Wavelength& wl);

/// H_d + H_r diag(Omega e^{j omega_n}) H_t.
CMatrix end_to_end(const CMatrix& h_d, const CMatrix& h_t, const CMatrix& h_r, double omega,
                   const PhaseProfile& w);

struct PathLossModel {
    double h0_db = -61.0;
    double d0_m = 1.0;
    double exponent = 2.0;

    /// Amplitude sqrt(h0 (d0/d)^exponent).
    double amplitude(double distance_m) const;
};

}  // namespace risbeam

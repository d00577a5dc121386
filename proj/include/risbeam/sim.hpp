// SPDX-License-Identifier: Apache-2.0
//
// Scenario orchestration: convergence traces, illumination maps, region-size
// sweeps and the SNR-vs-Rician-K Monte Carlo with multipath and blockage.
#pragma once

#include "risbeam/analytic.hpp"
#include "risbeam/channel.hpp"
#include "risbeam/grcs.hpp"
#include "risbeam/optimizer.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace risbeam {

enum class Design { LinearFF, QuadraticFF, FocusNF, WideNF, OptimizedFF, OptimizedNF, Profile };
enum class BenchmarkId { FullCsi, LosFocusing, ProposedBestPath, RandomPhases, SpecularReflection };
enum class TargetRegime { Far, Near };

std::string_view to_string(Design d);
std::string_view to_string(BenchmarkId b);
std::string_view to_string(TargetRegime r);
std::optional<Design> parse_design(std::string_view s);
std::optional<BenchmarkId> parse_benchmark(std::string_view s);
std::optional<TargetRegime> parse_regime(std::string_view s);

const std::vector<BenchmarkId>& all_benchmarks();

struct ArraySpec {
    int ny = 1;
    int nz = 1;
    double spacing_lambda = 0.5;
    Position3 center = Position3::Zero();
    Position3 axis_y = Position3::UnitY();
    Position3 axis_z = Position3::UnitZ();

    int size() const { return ny * nz; }
    ArrayGeometry build(const Wavelength& wl) const;
};

struct MultipathSpec {
    int scatterers = 5;  ///< point scatterers; the ground is the remaining non-LOS path
    int subpaths = 20;
    double subpath_jitter_m = 0.1;
    double ground_z_m = -6.0;
    double ground_loss_db = 8.0;  ///< mean ground-path loss relative to LOS
    double ground_fluctuation_db = 3.0;
    Box3 scatterer_box{{5.0, -15.0, -6.0}, {40.0, 85.0, 5.0}};
};

struct LinkBudget {
    double pt_dbm = 20.0;
    double bandwidth_hz = 20e6;
    double noise_psd_dbm_hz = -174.0;
    double noise_figure_db = 6.0;
    double direct_blockage_db = -40.0;
    double self_blockage_prob = 0.5;
    PathLossModel path_loss;

    double pt_w() const;
    double noise_power_w() const;
};

struct SnrSpec {
    std::vector<double> k_db{-5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0};
    std::vector<BenchmarkId> benchmarks = all_benchmarks();
    int trials = 100;
    int v_est = 3;  ///< non-LOS paths known to the best-path selection
    int full_csi_iters = 50;
};

struct Scenario {
    std::string name = "scenario";
    double freq_ghz = 28.0;
    ArraySpec ris;
    std::optional<double> unit_cell_area_m2;  ///< default (lambda/2)^2
    ArraySpec bs{2, 2};                       ///< center is u_bs
    Position3 bs_extent_m = Position3::Zero();  ///< BS location uncertainty box
    Position3 u_ilm = Position3::Zero();
    double region_x_m = 0.0;
    double region_y_m = 0.0;
    TargetRegime regime = TargetRegime::Far;
    int points_per_axis = 5;
    Design design = Design::WideNF;
    std::string profile_csv;
    ScaParams sca;
    int random_inits = 2;
    std::optional<ScanGrid> scan;
    std::vector<double> sweep_r_m;
    MultipathSpec multipath;
    LinkBudget link;
    SnrSpec snr;
    std::vector<double> regime_side_m;
    std::uint64_t seed = 1;

    /// Throws DomainError naming the offending field.
    void validate() const;

    Wavelength wavelength() const;
    ArrayGeometry ris_geometry() const { return ris.build(wavelength()); }
    double omega() const;
    const Position3& u_bs() const { return bs.center; }
    Box3 bs_box() const { return Box3::centered(bs.center, bs_extent_m); }
    Box3 region_box() const { return region_box(region_x_m, region_y_m); }
    Box3 region_box(double rx, double ry) const;
};

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Each index runs
/// exactly once; callers write into per-index slots so results do not depend
/// on scheduling. The first exception thrown is rethrown after all workers stop.
void parallel_for(int n, int workers, const std::function<void(int)>& fn);

/// Target set over BS box x region for the given regime.
TargetSet scenario_targets(const Scenario& s, TargetRegime regime, const Box3& region);

struct DesignResult {
    Design design = Design::WideNF;
    PhaseProfile profile;
    std::optional<ScaResult> sca;
};

/// Builds the profile of one design for the given illumination region.
DesignResult design_profile(const Scenario& s, Design d, const Box3& region);

struct ConvergenceRun {
    std::string label;  ///< "analytic" or "random_<k>"
    ScaResult result;
};

/// Analytic init plus `random_inits` random inits on the same target set.
std::vector<ConvergenceRun> run_convergence(const Scenario& s, int workers = 1);

struct IlluminationResult {
    DesignResult design;
    GrcsField field;
    double min_in_region = 0.0;  ///< normalized, linear
    double max_in_region = 0.0;
    double max_outside = 0.0;
};

/// Default scan: the region box widened by its own size plus 4 m per axis,
/// 81 x 81 pixels in the plane z = u_ilm.z.
ScanGrid default_scan(const Scenario& s);

IlluminationResult run_illumination(const Scenario& s, Design d);

struct RegionSweepRow {
    double r_m = 0.0;
    Design design = Design::WideNF;
    double min_grcs_db = 0.0;
};

/// For each R, the four designs {QuadraticFF, WideNF, OptimizedFF, OptimizedNF}
/// are built for an R x R region and evaluated on the near-field target set.
std::vector<RegionSweepRow> run_region_sweep(const Scenario& s, const std::vector<double>& r_values,
                                             int workers = 1);

// ---- SNR vs K ---------------------------------------------------------------

/// Unit-power building blocks of one link; the K-dependent channel is
/// c0 * los + a_g * ground + a_s * scatter.
struct LinkComponents {
    CMatrix los;
    CMatrix ground;
    CMatrix scatter;  ///< sum over scatterers and subpaths with random phases
    double c0 = 0.0;
    double ground_fluctuation = 1.0;  ///< unit-mean lognormal factor
};

struct TrialRealization {
    Position3 u_mu = Position3::Zero();
    bool blocked = false;
    std::vector<Position3> scatterers;
    ArrayGeometry bs{std::vector<Position3>{Position3::Zero()}};
    LinkComponents bs_ris;
    LinkComponents ris_mu;
    CMatrix h_d;  ///< 1 x N_bs direct link
    PhaseProfile random_phases;
};

struct TrialChannel {
    CMatrix h_d;  ///< 1 x N_bs
    CMatrix h_t;  ///< N x N_bs
    CMatrix h_r;  ///< 1 x N
};

TrialRealization draw_trial(const Scenario& s, std::uint64_t trial_index);

/// Channel of a realization at linear Rician factor k (k = inf: LOS only).
TrialChannel trial_channel(const Scenario& s, const TrialRealization& t, double k);

/// P_t |h_e2e p|^2 / sigma^2 with the MRT precoder p = h_e2e^H / |h_e2e|.
double mrt_snr(const TrialChannel& h, const PhaseProfile& w, double omega, const LinkBudget& link);

/// Alternating MRT and per-element phase alignment, started from `init`.
PhaseProfile full_csi_profile(const TrialChannel& h, double omega, const PhaseProfile& init,
                              int max_iters = 50);

struct BestPath {
    PhaseProfile profile;
    int source = 0;    ///< index into the candidate sources
    int observer = 0;  ///< index into the candidate observers
    double snr = 0.0;
};

/// Focuses toward every (source, observer) candidate pair and keeps the one
/// with the largest SNR. Index 0 of each list is the LOS endpoint.
BestPath select_best_path(const ArrayGeometry& ris, const std::vector<Position3>& sources,
                          const std::vector<Position3>& observers, const TrialChannel& h, double omega,
                          const Wavelength& wl, const LinkBudget& link);

/// Candidate endpoints of a realization: the LOS endpoint, its ground image
/// and the first v_est - 1 scatterers (v_est non-LOS paths in total).
std::vector<Position3> path_sources(const Scenario& s, const TrialRealization& t, int v_est);
std::vector<Position3> path_observers(const Scenario& s, const TrialRealization& t, int v_est);

struct SnrEntry {
    double k_db = 0.0;
    BenchmarkId benchmark = BenchmarkId::FullCsi;
    double snr_db = 0.0;
    double stderr_db = 0.0;
    int trials = 0;
};

struct SnrResult {
    std::vector<SnrEntry> entries;  ///< K-major, benchmarks in request order

    const SnrEntry& at(double k_db, BenchmarkId b) const;
};

SnrResult run_snr_vs_k(const Scenario& s, const std::vector<double>& k_db,
                       const std::vector<BenchmarkId>& benchmarks, int workers = 1);

// ---- regime ---------------------------------------------------------------

struct RegimeRow {
    double side_m = 0.0;
    long long n_elements = 0;
    double d_ff_m = 0.0;
    double d_qnf_m = 0.0;
};

/// Square RIS of side L: D = sqrt(2) L, elements (L / spacing)^2.
RegimeRow regime_distances(double side_m, const Wavelength& wl, double spacing_lambda = 0.5);

// ---- CSV ------------------------------------------------------------------

void write_region_sweep_csv(std::ostream& os, const std::vector<RegionSweepRow>& rows);
void write_snr_csv(std::ostream& os, const SnrResult& r);
void write_regime_csv(std::ostream& os, const std::vector<RegimeRow>& rows);
void write_illumination_summary_csv(std::ostream& os, const IlluminationResult& r);

}  // namespace risbeam

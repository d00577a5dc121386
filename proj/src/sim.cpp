// SPDX-License-Identifier: Apache-2.0
#include "risbeam/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace risbeam {

namespace {

constexpr std::pair<Design, std::string_view> kDesignNames[] = {
    {Design::LinearFF, "LinearFF"},       {Design::QuadraticFF, "QuadraticFF"},
    {Design::FocusNF, "FocusNF"},         {Design::WideNF, "WideNF"},
    {Design::OptimizedFF, "OptimizedFF"}, {Design::OptimizedNF, "OptimizedNF"},
    {Design::Profile, "Profile"},
};

constexpr std::pair<BenchmarkId, std::string_view> kBenchmarkNames[] = {
    {BenchmarkId::FullCsi, "FullCsi"},
    {BenchmarkId::LosFocusing, "LosFocusing"},
    {BenchmarkId::ProposedBestPath, "ProposedBestPath"},
    {BenchmarkId::RandomPhases, "RandomPhases"},
    {BenchmarkId::SpecularReflection, "SpecularReflection"},
};

double nan() { return std::numeric_limits<double>::quiet_NaN(); }

double db_or_floor(double v) { return v > 0.0 ? linear_to_db(v) : -400.0; }

}  // namespace

std::string_view to_string(Design d) {
    for (const auto& [k, v] : kDesignNames) {
        if (k == d) return v;
    }
    return "?";
}

std::string_view to_string(BenchmarkId b) {
    for (const auto& [k, v] : kBenchmarkNames) {
        if (k == b) return v;
    }
    return "?";
}

std::string_view to_string(TargetRegime r) { return r == TargetRegime::Far ? "far" : "near"; }

std::optional<Design> parse_design(std::string_view s) {
    for (const auto& [k, v] : kDesignNames) {
        if (v == s) return k;
    }
    return std::nullopt;
}

std::optional<BenchmarkId> parse_benchmark(std::string_view s) {
    for (const auto& [k, v] : kBenchmarkNames) {
        if (v == s) return k;
    }
    return std::nullopt;
}

std::optional<TargetRegime> parse_regime(std::string_view s) {
    if (s == "far") return TargetRegime::Far;
    if (s == "near") return TargetRegime::Near;
    return std::nullopt;
}

const std::vector<BenchmarkId>& all_benchmarks() {
    static const std::vector<BenchmarkId> all{BenchmarkId::FullCsi, BenchmarkId::ProposedBestPath,
                                              BenchmarkId::LosFocusing, BenchmarkId::RandomPhases,
                                              BenchmarkId::SpecularReflection};
    return all;
}

ArrayGeometry ArraySpec::build(const Wavelength& wl) const {
    return centered_upa(ny, nz, spacing_lambda * wl.meters(), center, axis_y, axis_z);
}

double LinkBudget::pt_w() const { return std::pow(10.0, (pt_dbm - 30.0) / 10.0); }

double LinkBudget::noise_power_w() const {
    const double dbm = noise_psd_dbm_hz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

void Scenario::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw DomainError(what);
    };
    require(std::isfinite(freq_ghz) && freq_ghz > 0.0, "freq_ghz must be > 0");
    require(ris.ny >= 1 && ris.nz >= 1, "ris.ny and ris.nz must be >= 1");
    require(ris.spacing_lambda > 0.0, "ris.spacing_lambda must be > 0");
    require(bs.ny >= 1 && bs.nz >= 1, "bs.ny and bs.nz must be >= 1");
    require(bs.spacing_lambda > 0.0, "bs.spacing_lambda must be > 0");
    require((bs_extent_m.array() >= 0.0).all(), "bs.box_m entries must be >= 0");
    require(region_x_m >= 0.0 && region_y_m >= 0.0, "illumination.size_m entries must be >= 0");
    require(points_per_axis >= 1, "targets.points_per_axis must be >= 1");
    require(!unit_cell_area_m2 || *unit_cell_area_m2 > 0.0, "ris.unit_cell_area_m2 must be > 0");
    require(random_inits >= 0, "optimizer.random_inits must be >= 0");
    require(design != Design::Profile || !profile_csv.empty(),
            "design.profile_csv is required for the Profile design");
    for (double r : sweep_r_m) require(std::isfinite(r) && r >= 0.0, "region_sweep.r_m entries must be >= 0");
    for (double l : regime_side_m) require(std::isfinite(l) && l > 0.0, "regime.side_m entries must be > 0");
    if (scan) {
        require(scan->nx >= 1 && scan->ny >= 1, "scan.nx and scan.ny must be >= 1");
        require(scan->x_hi >= scan->x_lo && scan->y_hi >= scan->y_lo, "scan ranges must be ordered");
    }
    require(multipath.scatterers >= 0, "multipath.scatterers must be >= 0");
    require(multipath.subpaths >= 1, "multipath.subpaths must be >= 1");
    require(multipath.subpath_jitter_m >= 0.0, "multipath.subpath_jitter_m must be >= 0");
    require(multipath.ground_fluctuation_db >= 0.0, "multipath.ground_fluctuation_db must be >= 0");
    require((multipath.scatterer_box.hi.array() >= multipath.scatterer_box.lo.array()).all(),
            "multipath.scatterer_box_m must have lo <= hi");
    require(link.bandwidth_hz > 0.0, "link.bandwidth_hz must be > 0");
    require(link.self_blockage_prob >= 0.0 && link.self_blockage_prob <= 1.0,
            "link.self_blockage_prob must be in [0, 1]");
    require(link.path_loss.d0_m > 0.0, "link.path_loss_d0_m must be > 0");
    require(snr.trials >= 1, "snr.trials must be >= 1");
    require(snr.v_est >= 0 && snr.v_est <= multipath.scatterers + 1,
            "snr.v_est must be in [0, multipath.scatterers + 1]");
    require(snr.full_csi_iters >= 1, "snr.full_csi_iters must be >= 1");
    for (double k : snr.k_db) require(std::isfinite(k), "snr.k_db entries must be finite");
    try {
        sca.validate();
    } catch (const DomainError& e) {
        throw DomainError(std::string("optimizer: ") + e.what());
    }
}

Wavelength Scenario::wavelength() const { return Wavelength::from_frequency_hz(freq_ghz * 1e9); }

double Scenario::omega() const {
    const Wavelength wl = wavelength();
    return unit_cell_area_m2 ? unit_cell_factor(wl, *unit_cell_area_m2) : unit_cell_factor(wl);
}

Box3 Scenario::region_box(double rx, double ry) const {
    return Box3::centered(u_ilm, Position3(rx, ry, 0.0));
}

void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    const int threads = std::min(std::max(workers, 1), n);
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        for (;;) {
            if (failed.load()) return;
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                failed.store(true);
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

namespace {

struct FarAngles {
    std::vector<Angles> a_t;
    std::vector<Angles> a_r;
};

FarAngles far_angles(const Scenario& s, const ArrayGeometry& geom, const Box3& region) {
    const Position3 c = geom.centroid();
    return {angular_grid(grid_points(s.bs_box(), s.points_per_axis), c, true, s.points_per_axis),
            angular_grid(grid_points(region, s.points_per_axis), c, false, s.points_per_axis)};
}

}  // namespace

TargetSet scenario_targets(const Scenario& s, TargetRegime regime, const Box3& region) {
    const ArrayGeometry geom = s.ris_geometry();
    const Wavelength wl = s.wavelength();
    if (regime == TargetRegime::Far) {
        const FarAngles fa = far_angles(s, geom, region);
        return far_target_set(geom, fa.a_t, fa.a_r, s.omega(), wl);
    }
    return near_target_set(geom, grid_points(s.bs_box(), s.points_per_axis),
                           grid_points(region, s.points_per_axis), s.omega(), wl);
}

DesignResult design_profile(const Scenario& s, Design d, const Box3& region) {
    const ArrayGeometry geom = s.ris_geometry();
    const Wavelength wl = s.wavelength();
    const Position3 c = geom.centroid();
    DesignResult out;
    out.design = d;
    switch (d) {
        case Design::LinearFF:
            out.profile = linear_profile(geom, incident_angles(s.u_bs() - c),
                                         departure_angles(region.center() - c), wl);
            break;
        case Design::QuadraticFF: {
            const FarAngles fa = far_angles(s, geom, region);
            out.profile = quadratic_profile(geom, fa.a_t, fa.a_r, wl).profile;
            break;
        }
        case Design::FocusNF:
            out.profile = focusing_profile(geom, s.u_bs(), region.center(), wl);
            break;
        case Design::WideNF: {
            // With an uncertain BS the source is swept across the box as well;
            // the sweep axis and sense with the best worst case on Q are kept.
            const Position3 ext = region.extent();
            const RegionMapping observer = RegionMapping::rectangle(geom, region.center(), ext.x(), ext.y());
            out.profile = wide_near_profile(geom, s.u_bs(), observer, wl);
            if (s.bs_extent_m.norm() > 0.0) {
                const TargetSet q = scenario_targets(s, TargetRegime::Near, region);
                double best = worst_case_normalized(q, out.profile);
                for (const bool along_z : {false, true}) {
                    for (const double sense : {1.0, -1.0}) {
                        const RegionMapping source =
                            RegionMapping::segment(geom, s.u_bs(), sense * s.bs_extent_m, along_z);
                        PhaseProfile w = wide_near_profile(geom, source, observer, wl);
                        const double v = worst_case_normalized(q, w);
                        if (v > best) {
                            best = v;
                            out.profile = std::move(w);
                        }
                    }
                }
            }
            break;
        }
        case Design::OptimizedFF:
        case Design::OptimizedNF: {
            const bool far = d == Design::OptimizedFF;
            const TargetSet q = scenario_targets(s, far ? TargetRegime::Far : TargetRegime::Near, region);
            const PhaseProfile init =
                design_profile(s, far ? Design::QuadraticFF : Design::WideNF, region).profile;
            ScaResult r = penalty_sca(q, lift(init), s.sca);
            out.profile = r.profile;
            out.sca = std::move(r);
            break;
        }
        case Design::Profile: {
            std::ifstream in(s.profile_csv);
            if (!in) throw IoError("cannot open profile CSV '" + s.profile_csv + "'");
            out.profile = read_profile_csv(in);
            if (out.profile.size() != geom.size()) {
                throw ShapeError("profile CSV has " + std::to_string(out.profile.size()) +
                                 " entries but the RIS has " + std::to_string(geom.size()));
            }
            break;
        }
    }
    return out;
}

std::vector<ConvergenceRun> run_convergence(const Scenario& s, int workers) {
    const Box3 region = s.region_box();
    const TargetSet q = scenario_targets(s, s.regime, region);
    const int n = q.dimension();
    const Design analytic = s.regime == TargetRegime::Far ? Design::QuadraticFF : Design::WideNF;
    std::vector<ConvergenceRun> runs(static_cast<std::size_t>(1 + s.random_inits));
    parallel_for(static_cast<int>(runs.size()), workers, [&](int i) {
        CMatrix w0;
        if (i == 0) {
            w0 = lift(design_profile(s, analytic, region).profile);
            runs[0].label = "analytic";
        } else {
            Rng rng(s.seed + static_cast<std::uint64_t>(i));
            w0 = random_initialization(n, rng);
            runs[static_cast<std::size_t>(i)].label = "random_" + std::to_string(i);
        }
        runs[static_cast<std::size_t>(i)].result = penalty_sca(q, w0, s.sca);
    });
    return runs;
}

ScanGrid default_scan(const Scenario& s) {
    ScanGrid g;
    const double wx = 2.0 * s.region_x_m + 4.0;
    const double wy = 2.0 * s.region_y_m + 4.0;
    g.x_lo = s.u_ilm.x() - wx / 2.0;
    g.x_hi = s.u_ilm.x() + wx / 2.0;
    g.y_lo = s.u_ilm.y() - wy / 2.0;
    g.y_hi = s.u_ilm.y() + wy / 2.0;
    g.nx = 81;
    g.ny = 81;
    g.z = s.u_ilm.z();
    return g;
}

IlluminationResult run_illumination(const Scenario& s, Design d) {
    const Box3 region = s.region_box();
    const ArrayGeometry geom = s.ris_geometry();
    const Wavelength wl = s.wavelength();
    IlluminationResult out;
    out.design = design_profile(s, d, region);
    const ScanGrid grid = s.scan ? *s.scan : default_scan(s);
    out.field = grcs_field(grid, s.u_bs(), out.design.profile, geom.positions(), s.omega(), wl);

    // Region samples: the target grid itself plus every pixel inside the box.
    const TargetSet q = near_target_set(geom, {s.u_bs()}, grid_points(region, s.points_per_axis), s.omega(), wl);
    const RVector v = normalized_values(q, out.design.profile);
    double lo = v.minCoeff();
    double hi = v.maxCoeff();
    const Position3 rlo = region.lo;
    const Position3 rhi = region.hi;
    if (std::abs(grid.z - s.u_ilm.z()) <= 1e-9) {
        const double in_lo = out.field.min_in(rlo.x(), rhi.x(), rlo.y(), rhi.y());
        if (!std::isnan(in_lo)) lo = std::min(lo, in_lo);
        for (std::size_t j = 0; j < out.field.axis2.size(); ++j) {
            for (std::size_t i = 0; i < out.field.axis1.size(); ++i) {
                const Position3 p(out.field.axis1[i], out.field.axis2[j], grid.z);
                if (region.contains(p)) {
                    hi = std::max(hi, out.field.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)));
                }
            }
        }
        out.max_outside = out.field.max_outside(rlo.x(), rhi.x(), rlo.y(), rhi.y());
    } else {
        out.max_outside = out.field.values.maxCoeff();
    }
    out.min_in_region = lo;
    out.max_in_region = hi;
    return out;
}

std::vector<RegionSweepRow> run_region_sweep(const Scenario& s, const std::vector<double>& r_values,
                                             int workers) {
    static constexpr Design kDesigns[] = {Design::QuadraticFF, Design::WideNF, Design::OptimizedFF,
                                          Design::OptimizedNF};
    constexpr int kCount = 4;
    std::vector<RegionSweepRow> rows(r_values.size() * kCount);
    parallel_for(static_cast<int>(rows.size()), workers, [&](int i) {
        const double r = r_values[static_cast<std::size_t>(i / kCount)];
        if (!(r >= 0.0)) throw DomainError("region sweep: R must be >= 0");
        const Box3 region = s.region_box(r, r);
        const Design d = kDesigns[i % kCount];
        const PhaseProfile w = design_profile(s, d, region).profile;
        const TargetSet q = scenario_targets(s, TargetRegime::Near, region);
        rows[static_cast<std::size_t>(i)] = {r, d, db_or_floor(worst_case_normalized(q, w))};
    });
    return rows;
}

// ---- SNR vs K ---------------------------------------------------------------

namespace {

ReflectorPlane ground_plane(const Scenario& s) {
    return ReflectorPlane(Position3(0.0, 0.0, s.multipath.ground_z_m), Position3::UnitZ(), cd{1.0, 0.0});
}

struct Jitter {
    std::vector<std::vector<Position3>> points;  // [scatterer][subpath]
};

CMatrix scatter_sum(const std::vector<Position3>& tx, const std::vector<Position3>& rx, const Jitter& j,
                    const std::vector<double>& phases, const Wavelength& wl) {
    CMatrix h = CMatrix::Zero(static_cast<Eigen::Index>(rx.size()), static_cast<Eigen::Index>(tx.size()));
    std::size_t p = 0;
    std::size_t total = 0;
    for (const auto& sc : j.points) {
        for (const auto& pt : sc) {
            h += point_scatter_nlos(tx, rx, {pt, std::polar(1.0, phases[p++])}, wl);
            ++total;
        }
    }
    if (total > 0) h /= std::sqrt(static_cast<double>(total));
    return h;
}

double lognormal_unit_mean(double sigma_db, Rng& rng) {
    const double x = sigma_db * rng.normal();
    const double s = sigma_db * std::log(10.0) / 10.0;
    return std::pow(10.0, x / 10.0) / std::exp(s * s / 2.0);
}

}  // namespace

TrialRealization draw_trial(const Scenario& s, std::uint64_t trial_index) {
    Rng rng(s.seed + trial_index);
    const Wavelength wl = s.wavelength();
    const ArrayGeometry ris = s.ris_geometry();
    const MultipathSpec& mp = s.multipath;
    TrialRealization t;
    t.u_mu = s.u_ilm + Position3(rng.uniform(-s.region_x_m / 2.0, s.region_x_m / 2.0),
                                 rng.uniform(-s.region_y_m / 2.0, s.region_y_m / 2.0), 0.0);
    t.blocked = rng.bernoulli(s.link.self_blockage_prob);
    t.bs_ris.ground_fluctuation = lognormal_unit_mean(mp.ground_fluctuation_db, rng);
    t.ris_mu.ground_fluctuation = lognormal_unit_mean(mp.ground_fluctuation_db, rng);
    Jitter jit;
    for (int k = 0; k < mp.scatterers; ++k) {
        Position3 p;
        for (int a = 0; a < 3; ++a) p[a] = rng.uniform(mp.scatterer_box.lo[a], mp.scatterer_box.hi[a]);
        t.scatterers.push_back(p);
        std::vector<Position3> sub;
        for (int r = 0; r < mp.subpaths; ++r) {
            Position3 d;
            for (int a = 0; a < 3; ++a) d[a] = rng.uniform(-mp.subpath_jitter_m, mp.subpath_jitter_m);
            sub.push_back(p + d);
        }
        jit.points.push_back(std::move(sub));
    }
    const std::size_t nsub = static_cast<std::size_t>(mp.scatterers) * static_cast<std::size_t>(mp.subpaths);
    std::vector<double> ph_t(nsub), ph_r(nsub);
    for (auto& x : ph_t) x = rng.phase();
    for (auto& x : ph_r) x = rng.phase();
    RVector rp(ris.size());
    for (int n = 0; n < ris.size(); ++n) rp[n] = rng.phase();
    t.random_phases = PhaseProfile(std::move(rp));

    t.bs = s.bs.build(wl);
    const std::vector<Position3> mu{t.u_mu};
    const ReflectorPlane ground = ground_plane(s);
    const Position3 c = ris.centroid();
    const PathLossModel& pl = s.link.path_loss;

    t.bs_ris.c0 = pl.amplitude((s.u_bs() - c).norm());
    t.bs_ris.los = los_near(t.bs.positions(), ris.positions(), 1.0, wl);
    t.bs_ris.ground = reflector_nlos(t.bs.positions(), ris.positions(), ground, wl, MirrorSide::Transmitter);
    t.bs_ris.scatter = scatter_sum(t.bs.positions(), ris.positions(), jit, ph_t, wl);

    t.ris_mu.c0 = pl.amplitude((t.u_mu - c).norm());
    t.ris_mu.los = los_near(ris.positions(), mu, 1.0, wl);
    t.ris_mu.ground = reflector_nlos(ris.positions(), mu, ground, wl, MirrorSide::Receiver);
    t.ris_mu.scatter = scatter_sum(ris.positions(), mu, jit, ph_r, wl);

    const double cd_amp = pl.amplitude((s.u_bs() - t.u_mu).norm()) * std::pow(10.0, s.link.direct_blockage_db / 20.0);
    t.h_d = los_near(t.bs.positions(), mu, cd_amp, wl);
    return t;
}

namespace {

CMatrix link_channel(const LinkComponents& l, const Scenario& s, double k, bool blocked) {
    const double p_los = l.c0 * l.c0;
    const double p_nlos = std::isinf(k) ? 0.0 : p_los / k;
    double p_ground = p_nlos;
    if (s.multipath.scatterers > 0) {
        p_ground = std::min(p_los * std::pow(10.0, -s.multipath.ground_loss_db / 10.0), p_nlos);
    }
    const double p_scatter = std::max(p_nlos - p_ground, 0.0);
    CMatrix h = std::sqrt(p_ground * l.ground_fluctuation) * l.ground + std::sqrt(p_scatter) * l.scatter;
    if (!blocked) h += l.c0 * l.los;
    return h;
}

}  // namespace

TrialChannel trial_channel(const Scenario& s, const TrialRealization& t, double k) {
    if (std::isnan(k) || !(k > 0.0)) throw DomainError("trial_channel: K must be > 0");
    return {t.h_d, link_channel(t.bs_ris, s, k, false), link_channel(t.ris_mu, s, k, t.blocked)};
}

namespace {

CVector effective_row(const TrialChannel& h, double omega, const CVector& w) {
    const CVector g = omega * h.h_r.row(0).transpose().cwiseProduct(w);
    return h.h_d.row(0).transpose() + h.h_t.transpose() * g;
}

}  // namespace

double mrt_snr(const TrialChannel& h, const PhaseProfile& w, double omega, const LinkBudget& link) {
    if (h.h_r.cols() != w.size() || h.h_t.rows() != w.size()) throw ShapeError("mrt_snr: RIS size mismatch");
    return link.pt_w() * effective_row(h, omega, w.weights()).squaredNorm() / link.noise_power_w();
}

PhaseProfile full_csi_profile(const TrialChannel& h, double omega, const PhaseProfile& init, int max_iters) {
    const int n = init.size();
    if (h.h_r.cols() != n || h.h_t.rows() != n) throw ShapeError("full_csi_profile: RIS size mismatch");
    RVector om = init.omegas();
    double prev = -1.0;
    for (int it = 0; it < max_iters; ++it) {
        const CVector w = PhaseProfile(om).weights();
        const CVector e = effective_row(h, omega, w);
        const double norm = e.norm();
        if (it > 0 && norm * norm <= prev * (1.0 + 1e-12)) break;
        prev = norm * norm;
        CVector p = CVector::Zero(e.size());
        if (norm > 0.0) {
            p = e.conjugate() / norm;
        } else {
            p[0] = 1.0;
        }
        const cd b = (h.h_d * p)(0);
        const CVector tp = h.h_t * p;
        const double ref = std::abs(b) > 0.0 ? std::arg(b) : 0.0;
        for (int i = 0; i < n; ++i) {
            const cd a = h.h_r(0, i) * tp[i];
            if (std::abs(a) > 0.0) om[i] = ref - std::arg(a);
        }
    }
    return PhaseProfile(std::move(om));
}

BestPath select_best_path(const ArrayGeometry& ris, const std::vector<Position3>& sources,
                          const std::vector<Position3>& observers, const TrialChannel& h, double omega,
                          const Wavelength& wl, const LinkBudget& link) {
    if (sources.empty() || observers.empty()) throw DomainError("select_best_path: no candidates");
    BestPath best;
    bool found = false;
    for (std::size_t i = 0; i < sources.size(); ++i) {
        for (std::size_t j = 0; j < observers.size(); ++j) {
            PhaseProfile w;
            try {
                w = focusing_profile(ris, sources[i], observers[j], wl);
            } catch (const DomainError&) {
                continue;
            }
            const double snr = mrt_snr(h, w, omega, link);
            if (!found || snr > best.snr) {
                best = {std::move(w), static_cast<int>(i), static_cast<int>(j), snr};
                found = true;
            }
        }
    }
    if (!found) {
        best.profile = focusing_profile(ris, sources.front(), observers.front(), wl);
        best.snr = mrt_snr(h, best.profile, omega, link);
    }
    return best;
}

namespace {

std::vector<Position3> candidates(const Scenario& s, const TrialRealization& t, const Position3& los, int v_est) {
    std::vector<Position3> out{los};
    if (v_est >= 1) out.push_back(ground_plane(s).mirror(los));
    for (int k = 0; k + 1 < v_est && k < static_cast<int>(t.scatterers.size()); ++k) {
        out.push_back(t.scatterers[static_cast<std::size_t>(k)]);
    }
    return out;
}

}  // namespace

std::vector<Position3> path_sources(const Scenario& s, const TrialRealization& t, int v_est) {
    return candidates(s, t, s.u_bs(), v_est);
}

std::vector<Position3> path_observers(const Scenario& s, const TrialRealization& t, int v_est) {
    return candidates(s, t, t.u_mu, v_est);
}

const SnrEntry& SnrResult::at(double k_db, BenchmarkId b) const {
    for (const auto& e : entries) {
        if (e.benchmark == b && std::abs(e.k_db - k_db) <= 1e-12) return e;
    }
    throw std::out_of_range("SnrResult: no entry for K = " + std::to_string(k_db) + " dB, " +
                            std::string(to_string(b)));
}

SnrResult run_snr_vs_k(const Scenario& s, const std::vector<double>& k_db,
                       const std::vector<BenchmarkId>& benchmarks, int workers) {
    if (k_db.empty()) throw DomainError("run_snr_vs_k: no K values");
    if (benchmarks.empty()) throw DomainError("run_snr_vs_k: no benchmarks");
    const int trials = s.snr.trials;
    const std::size_t nk = k_db.size();
    const std::size_t nb = benchmarks.size();
    const ArrayGeometry ris = s.ris_geometry();
    const Wavelength wl = s.wavelength();
    const double omega = s.omega();
    // snr[trial][k * nb + b], linear
    std::vector<std::vector<double>> snr(static_cast<std::size_t>(trials), std::vector<double>(nk * nb));
    parallel_for(trials, workers, [&](int trial) {
        const TrialRealization t = draw_trial(s, static_cast<std::uint64_t>(trial));
        const PhaseProfile focus = focusing_profile(ris, s.u_bs(), t.u_mu, wl);
        const auto src = path_sources(s, t, s.snr.v_est);
        const auto obs = path_observers(s, t, s.snr.v_est);
        auto& row = snr[static_cast<std::size_t>(trial)];
        for (std::size_t ki = 0; ki < nk; ++ki) {
            const TrialChannel h = trial_channel(s, t, db_to_linear(k_db[ki]));
            std::optional<BestPath> best;
            auto proposed = [&]() -> const BestPath& {
                if (!best) best = select_best_path(ris, src, obs, h, omega, wl, s.link);
                return *best;
            };
            for (std::size_t bi = 0; bi < nb; ++bi) {
                double v = 0.0;
                switch (benchmarks[bi]) {
                    case BenchmarkId::FullCsi:
                        v = mrt_snr(h, full_csi_profile(h, omega, proposed().profile, s.snr.full_csi_iters),
                                    omega, s.link);
                        break;
                    case BenchmarkId::ProposedBestPath:
                        v = proposed().snr;
                        break;
                    case BenchmarkId::LosFocusing:
                        v = mrt_snr(h, focus, omega, s.link);
                        break;
                    case BenchmarkId::RandomPhases:
                        v = mrt_snr(h, t.random_phases, omega, s.link);
                        break;
                    case BenchmarkId::SpecularReflection:
                        v = mrt_snr(h, PhaseProfile::zeros(ris.size()), omega, s.link);
                        break;
                }
                row[ki * nb + bi] = v;
            }
        }
    });
    SnrResult out;
    for (std::size_t ki = 0; ki < nk; ++ki) {
        for (std::size_t bi = 0; bi < nb; ++bi) {
            double sum = 0.0;
            for (const auto& r : snr) sum += r[ki * nb + bi];
            const double mean = sum / trials;
            double se_db = nan();
            if (trials > 1) {
                double ss = 0.0;
                for (const auto& r : snr) ss += (r[ki * nb + bi] - mean) * (r[ki * nb + bi] - mean);
                const double se = std::sqrt(ss / (trials - 1) / trials);
                se_db = mean > 0.0 ? 10.0 / std::log(10.0) * se / mean : nan();
            }
            out.entries.push_back({k_db[ki], benchmarks[bi], db_or_floor(mean), se_db, trials});
        }
    }
    return out;
}

RegimeRow regime_distances(double side_m, const Wavelength& wl, double spacing_lambda) {
    if (!(side_m > 0.0)) throw DomainError("regime: side length must be > 0");
    if (!(spacing_lambda > 0.0)) throw DomainError("regime: spacing must be > 0");
    const double d = std::sqrt(2.0) * side_m;
    const long long per_side = std::llround(side_m / (spacing_lambda * wl.meters()));
    return {side_m, per_side * per_side, far_field_distance(d, wl), quadratic_near_field_distance(d, wl)};
}

// ---- CSV ------------------------------------------------------------------

void write_region_sweep_csv(std::ostream& os, const std::vector<RegionSweepRow>& rows) {
    os << "# risbeam-csv v1 region_sweep\n";
    os << "r_m,design,min_grcs_db\n";
    os << std::setprecision(10);
    for (const auto& r : rows) os << r.r_m << ',' << to_string(r.design) << ',' << r.min_grcs_db << '\n';
}

void write_snr_csv(std::ostream& os, const SnrResult& r) {
    os << "# risbeam-csv v1 snr_vs_k\n";
    os << "k_db,benchmark,snr_db,stderr_db,trials\n";
    os << std::setprecision(10);
    for (const auto& e : r.entries) {
        os << e.k_db << ',' << to_string(e.benchmark) << ',' << e.snr_db << ',';
        if (std::isnan(e.stderr_db)) {
            os << "nan";
        } else {
            os << e.stderr_db;
        }
        os << ',' << e.trials << '\n';
    }
}

void write_regime_csv(std::ostream& os, const std::vector<RegimeRow>& rows) {
    os << "# risbeam-csv v1 regime\n";
    os << "side_m,n_elements,d_ff_m,d_qnf_m\n";
    os << std::setprecision(10);
    for (const auto& r : rows) os << r.side_m << ',' << r.n_elements << ',' << r.d_ff_m << ',' << r.d_qnf_m << '\n';
}

void write_illumination_summary_csv(std::ostream& os, const IlluminationResult& r) {
    os << "# risbeam-csv v1 illumination_summary\n";
    os << "design,min_in_region_db,max_in_region_db,max_outside_db\n";
    os << std::setprecision(10);
    os << to_string(r.design.design) << ',' << db_or_floor(r.min_in_region) << ',' << db_or_floor(r.max_in_region)
       << ',';
    if (std::isnan(r.max_outside)) {
        os << "nan";
    } else {
        os << db_or_floor(r.max_outside);
    }
    os << '\n';
}

}  // namespace risbeam

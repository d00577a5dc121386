#include "risbeam/sim.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>

using namespace risbeam;

namespace {

// Small multipath scenario: 3D geometry of the SNR experiment on a 6 x 6 RIS.
Scenario snr_scenario() {
    Scenario s;
    s.ris.ny = 6;
    s.ris.nz = 6;
    s.bs.center = Position3(30, 80, 5);
    s.u_ilm = Position3(30, -5, -5);
    s.region_x_m = 4.0;
    s.region_y_m = 4.0;
    s.snr.trials = 40;
    return s;
}

// Planar far-field scenario with a line RIS.
Scenario line_scenario(int n) {
    Scenario s;
    s.ris.ny = n;
    s.ris.nz = 1;
    s.ris.axis_y = Position3::UnitX();
    s.ris.axis_z = Position3::UnitY();
    s.bs.center = Position3(30, 80, 0);
    s.u_ilm = Position3(0, 70, 0);
    s.region_x_m = 20.0;
    s.region_y_m = 20.0;
    s.random_inits = 2;
    return s;
}

}  // namespace

TEST_CASE("names round-trip") {
    for (Design d : {Design::LinearFF, Design::QuadraticFF, Design::FocusNF, Design::WideNF, Design::OptimizedFF,
                     Design::OptimizedNF, Design::Profile}) {
        CHECK(parse_design(to_string(d)) == d);
    }
    for (BenchmarkId b : all_benchmarks()) CHECK(parse_benchmark(to_string(b)) == b);
    CHECK(all_benchmarks().size() == 5);
    CHECK(parse_regime("near") == TargetRegime::Near);
    CHECK_FALSE(parse_design("Wide").has_value());
}

TEST_CASE("scenario validation names the field") {
    Scenario s;
    CHECK_NOTHROW(s.validate());
    s.freq_ghz = -1.0;
    try {
        s.validate();
        FAIL("expected an error");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find("freq_ghz") != std::string::npos);
    }
    s = {};
    s.link.self_blockage_prob = 1.5;
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("self_blockage_prob"), DomainError);
    s = {};
    s.snr.trials = 0;
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("snr.trials"), DomainError);
    s = {};
    s.sca.alpha = 0.5;
    CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("optimizer"), DomainError);
}

TEST_CASE("scenario derived quantities") {
    Scenario s;
    CHECK(s.omega() == doctest::Approx(M_PI));
    s.unit_cell_area_m2 = std::pow(s.wavelength().meters(), 2);
    CHECK(s.omega() == doctest::Approx(4 * M_PI));
    s.bs_extent_m = Position3(4, 0, 0);
    s.bs.center = Position3(30, 80, 0);
    CHECK(s.bs_box().lo.isApprox(Position3(28, 80, 0)));
    CHECK(s.bs_box().hi.isApprox(Position3(32, 80, 0)));
}

TEST_CASE("parallel_for") {
    std::vector<std::atomic<int>> hits(37);
    parallel_for(37, 4, [&](int i) { hits[static_cast<std::size_t>(i)]++; });
    for (auto& h : hits) CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(10, 3,
                                 [](int i) {
                                     if (i == 6) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
    parallel_for(0, 2, [](int) { FAIL("must not run"); });
}

TEST_CASE("regime rows") {
    const RegimeRow r = regime_distances(0.5, Wavelength::from_frequency_hz(28e9));
    CHECK(r.d_ff_m == doctest::Approx(93.3).epsilon(0.01));
    CHECK(r.d_qnf_m == doctest::Approx(3.56).epsilon(0.01));
    const long long side = std::llround(0.5 / (Wavelength::from_frequency_hz(28e9).meters() / 2));
    CHECK(r.n_elements == side * side);
    std::ostringstream os;
    write_regime_csv(os, {r});
    CHECK(os.str().rfind("# risbeam-csv v1 regime\nside_m,n_elements,d_ff_m,d_qnf_m\n", 0) == 0);
}

TEST_CASE("singleton designs are matched") {
    Scenario s = line_scenario(32);
    s.region_x_m = s.region_y_m = 0.0;
    const Box3 region = s.region_box();
    for (Design d : {Design::LinearFF, Design::QuadraticFF, Design::OptimizedFF}) {
        const PhaseProfile w = design_profile(s, d, region).profile;
        CHECK(worst_case_normalized(scenario_targets(s, TargetRegime::Far, region), w) >=
              db_to_linear(-0.05));
    }
    for (Design d : {Design::FocusNF, Design::WideNF, Design::OptimizedNF}) {
        const PhaseProfile w = design_profile(s, d, region).profile;
        CHECK(worst_case_normalized(scenario_targets(s, TargetRegime::Near, region), w) >=
              db_to_linear(-0.05));
    }
}

TEST_CASE("convergence runs share one target set") {
    Scenario s = line_scenario(16);
    const auto runs = run_convergence(s);
    REQUIRE(runs.size() == 3);
    CHECK(runs[0].label == "analytic");
    CHECK(runs[1].label == "random_1");
    CHECK(runs[2].label == "random_2");
    for (const auto& r : runs) {
        REQUIRE(!r.result.trace.records.empty());
        CHECK(r.result.trace.records.back().rank_residual < s.sca.rank_tolerance(16));
    }
    const auto again = run_convergence(s, 3);
    for (std::size_t i = 0; i < runs.size(); ++i) CHECK(runs[i].result.min_grcs == again[i].result.min_grcs);
}

TEST_CASE("illumination summary") {
    Scenario s = line_scenario(64);
    s.u_ilm = Position3(0, 7, 0);
    s.region_x_m = s.region_y_m = 2.0;
    s.regime = TargetRegime::Near;
    const IlluminationResult r = run_illumination(s, Design::WideNF);
    CHECK(r.min_in_region > 0.0);
    CHECK(r.min_in_region <= r.max_in_region);
    CHECK(r.field.values.maxCoeff() <= 1.0 + 1e-9);
    const ScanGrid g = default_scan(s);
    CHECK(g.x_lo == doctest::Approx(-4.0));
    CHECK(g.x_hi == doctest::Approx(4.0));
    CHECK(g.nx == 81);
    std::ostringstream os;
    write_illumination_summary_csv(os, r);
    CHECK(os.str().rfind("# risbeam-csv v1 illumination_summary\n"
                         "design,min_in_region_db,max_in_region_db,max_outside_db\nWideNF,",
                         0) == 0);
}

TEST_CASE("region sweep rows") {
    Scenario s = line_scenario(16);
    s.u_ilm = Position3(0, 7, 0);
    s.bs_extent_m = Position3(4, 0, 0);
    s.points_per_axis = 3;
    const auto rows = run_region_sweep(s, {0.0, 1.0}, 2);
    REQUIRE(rows.size() == 8);
    CHECK(rows[0].design == Design::QuadraticFF);
    CHECK(rows[1].design == Design::WideNF);
    CHECK(rows[2].design == Design::OptimizedFF);
    CHECK(rows[3].design == Design::OptimizedNF);
    CHECK(rows[4].r_m == 1.0);
    // the near-field optimizer starts from WideNF and keeps its best iterate
    CHECK(rows[3].min_grcs_db >= rows[1].min_grcs_db - 1e-9);
    CHECK(rows[7].min_grcs_db >= rows[5].min_grcs_db - 1e-9);
    std::ostringstream os;
    write_region_sweep_csv(os, rows);
    CHECK(os.str().rfind("# risbeam-csv v1 region_sweep\nr_m,design,min_grcs_db\n", 0) == 0);
    CHECK_THROWS_AS(run_region_sweep(s, {-1.0}), DomainError);
}

TEST_CASE("wide near-field design covers an uncertain source") {
    Scenario s = line_scenario(100);
    s.u_ilm = Position3(0, 7, 0);
    s.bs_extent_m = Position3(4, 0, 0);
    const Box3 region = s.region_box(2.0, 2.0);
    const TargetSet q = scenario_targets(s, TargetRegime::Near, region);
    const PhaseProfile w = design_profile(s, Design::WideNF, region).profile;
    const ArrayGeometry g = s.ris_geometry();
    const PhaseProfile fixed = wide_near_profile(
        g, s.u_bs(), RegionMapping::rectangle(g, region.center(), 2.0, 2.0), s.wavelength());
    CHECK(worst_case_normalized(q, w) >= worst_case_normalized(q, fixed));
}

TEST_CASE("Rician K sets the non-LOS power") {
    Scenario s = snr_scenario();
    s.link.self_blockage_prob = 0.0;
    for (const double k_db : {0.0, 10.0}) {
        const double k = db_to_linear(k_db);
        double ratio = 0.0;
        const int n = 400;
        for (int i = 0; i < n; ++i) {
            const TrialRealization t = draw_trial(s, static_cast<std::uint64_t>(i));
            const TrialChannel h = trial_channel(s, t, k);
            const CMatrix los = t.ris_mu.c0 * t.ris_mu.los;
            ratio += (h.h_r - los).squaredNorm() / los.squaredNorm();
        }
        CHECK(ratio / n == doctest::Approx(1.0 / k).epsilon(0.1));
    }
    const TrialRealization t = draw_trial(s, 0);
    CHECK_THROWS_AS(trial_channel(s, t, 0.0), DomainError);
    const TrialChannel pure = trial_channel(s, t, kRicianInfinity);
    CHECK((pure.h_r - t.ris_mu.c0 * t.ris_mu.los).norm() == 0.0);
}

TEST_CASE("trial draws are reproducible") {
    const Scenario s = snr_scenario();
    const TrialRealization a = draw_trial(s, 7);
    const TrialRealization b = draw_trial(s, 7);
    const TrialRealization c = draw_trial(s, 8);
    CHECK(a.u_mu == b.u_mu);
    CHECK((a.ris_mu.scatter - b.ris_mu.scatter).norm() == 0.0);
    CHECK(a.u_mu != c.u_mu);
    CHECK(s.region_box().contains(a.u_mu));
}

TEST_CASE("full CSI energy sanity") {
    Scenario s = snr_scenario();
    s.bs.ny = s.bs.nz = 1;
    s.link.self_blockage_prob = 0.0;
    const TrialRealization t = draw_trial(s, 3);
    const TrialChannel h = trial_channel(s, t, kRicianInfinity);
    const double omega = s.omega();
    const ArrayGeometry ris = s.ris_geometry();
    const PhaseProfile init = focusing_profile(ris, s.u_bs(), t.u_mu, s.wavelength());
    const double snr = mrt_snr(h, full_csi_profile(h, omega, init), omega, s.link);
    const double cd_amp = std::abs(h.h_d(0, 0));
    const double bound = s.link.pt_w() / s.link.noise_power_w() *
                         std::pow(cd_amp + omega * ris.size() * t.bs_ris.c0 * t.ris_mu.c0, 2);
    CHECK(std::abs(linear_to_db(snr) - linear_to_db(bound)) < 0.01);
}

TEST_CASE("best path selection") {
    Scenario s = snr_scenario();
    const ArrayGeometry ris = s.ris_geometry();
    const Wavelength wl = s.wavelength();
    const double omega = s.omega();

    SUBCASE("LOS wins at large K") {
        s.link.self_blockage_prob = 0.0;
        const TrialRealization t = draw_trial(s, 1);
        const TrialChannel h = trial_channel(s, t, db_to_linear(25.0));
        const BestPath b = select_best_path(ris, path_sources(s, t, 3), path_observers(s, t, 3), h, omega, wl, s.link);
        CHECK(b.source == 0);
        CHECK(b.observer == 0);
    }
    SUBCASE("ground image wins when the LOS is blocked") {
        s.link.self_blockage_prob = 1.0;
        const TrialRealization t = draw_trial(s, 1);
        REQUIRE(t.blocked);
        const TrialChannel h = trial_channel(s, t, db_to_linear(20.0));
        const auto obs = path_observers(s, t, 3);
        const BestPath b = select_best_path(ris, path_sources(s, t, 3), obs, h, omega, wl, s.link);
        CHECK(b.source == 0);
        CHECK(b.observer == 1);
        CHECK(obs[1].isApprox(Position3(t.u_mu.x(), t.u_mu.y(), 2 * s.multipath.ground_z_m - t.u_mu.z())));
    }
    SUBCASE("no estimated paths is LOS focusing") {
        const TrialRealization t = draw_trial(s, 2);
        const TrialChannel h = trial_channel(s, t, 1.0);
        const auto src = path_sources(s, t, 0);
        const auto obs = path_observers(s, t, 0);
        CHECK(src.size() == 1);
        CHECK(obs.size() == 1);
        const BestPath b = select_best_path(ris, src, obs, h, omega, wl, s.link);
        CHECK(b.profile.max_phase_deviation(focusing_profile(ris, s.u_bs(), t.u_mu, wl)) < 1e-12);
    }
    CHECK_THROWS_AS(select_best_path(ris, {}, {s.u_ilm}, TrialChannel{}, omega, wl, s.link), DomainError);
}

TEST_CASE("SNR sweep is independent of worker count") {
    Scenario s = snr_scenario();
    s.snr.trials = 12;
    const auto a = run_snr_vs_k(s, {0.0, 10.0}, all_benchmarks(), 1);
    const auto b = run_snr_vs_k(s, {0.0, 10.0}, all_benchmarks(), 3);
    REQUIRE(a.entries.size() == 10);
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].snr_db == b.entries[i].snr_db);
        CHECK(a.entries[i].stderr_db == b.entries[i].stderr_db);
    }
    CHECK(a.at(10.0, BenchmarkId::FullCsi).snr_db >= a.at(10.0, BenchmarkId::ProposedBestPath).snr_db - 1e-9);
    CHECK_THROWS_AS(a.at(5.0, BenchmarkId::FullCsi), std::out_of_range);

    s.snr.trials = 1;
    const auto one = run_snr_vs_k(s, {0.0}, {BenchmarkId::LosFocusing});
    CHECK(std::isnan(one.entries[0].stderr_db));
    std::ostringstream os;
    write_snr_csv(os, one);
    CHECK(os.str().find("nan") != std::string::npos);
    CHECK(os.str().rfind("# risbeam-csv v1 snr_vs_k\nk_db,benchmark,snr_db,stderr_db,trials\n", 0) == 0);
}

TEST_CASE("standard error shrinks with the trial count") {
    Scenario s = snr_scenario();
    s.ris.ny = s.ris.nz = 4;
    s.snr.trials = 100;
    const double se100 = run_snr_vs_k(s, {5.0}, {BenchmarkId::RandomPhases}).entries[0].stderr_db;
    s.snr.trials = 400;
    const double se400 = run_snr_vs_k(s, {5.0}, {BenchmarkId::RandomPhases}).entries[0].stderr_db;
    CHECK(se100 / se400 == doctest::Approx(2.0).epsilon(0.3));
}

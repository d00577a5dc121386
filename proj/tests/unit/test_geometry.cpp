#include "risbeam/geometry.hpp"
#include "risbeam/random.hpp"

#include <doctest.h>

#include <cmath>

using namespace risbeam;

namespace {

const Wavelength k28 = Wavelength::from_frequency_hz(28e9);
const Wavelength k5 = Wavelength::from_frequency_hz(5e9);

}  // namespace

TEST_CASE("wavelength") {
    const Wavelength wl = Wavelength::from_meters(0.06);
    CHECK(wl.wave_number() * wl.meters() == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
    CHECK(k28.meters() == doctest::Approx(kSpeedOfLight / 28e9));
    CHECK_THROWS_AS(Wavelength::from_meters(0.0), DomainError);
    CHECK_THROWS_AS(Wavelength::from_meters(-1.0), DomainError);
}

TEST_CASE("exact phase delta") {
    const Wavelength wl = Wavelength::from_meters(0.06);
    const Position3 p0(10, 0, 0);
    CHECK(phase_delta_exact(p0, Position3::Zero(), wl) == 0.0);
    CHECK(phase_delta_exact(p0, Position3(0.3, 0, 0), wl) == doctest::Approx(wl.wave_number() * 0.3));
    const double direct = wl.wave_number() * (std::sqrt(100.0 + 0.25) - 10.0);
    CHECK(phase_delta_exact(p0, Position3(0, 0.5, 0), wl) == doctest::Approx(direct).epsilon(1e-12));
    CHECK_THROWS_AS(phase_delta_exact(Position3::Zero(), Position3(1, 0, 0), wl), DomainError);
}

TEST_CASE("phase expansion terms") {
    const Wavelength wl = Wavelength::from_meters(0.06);
    const double k = wl.wave_number();

    SUBCASE("broadside") {
        const PhaseExpansion e = phase_delta_expanded(Position3(10, 0, 0), Position3(0, 0.5, 0), wl);
        CHECK(std::abs(e.linear) < 1e-12);
        CHECK(e.quadratic == doctest::Approx(k * 0.25 / 20.0));
        CHECK(std::abs(e.cubic) < 1e-12);
    }
    SUBCASE("collinear") {
        const PhaseExpansion e = phase_delta_expanded(Position3(10, 0, 0), Position3(0.5, 0, 0), wl);
        CHECK(e.linear == doctest::Approx(k * 0.5));
        CHECK(std::abs(e.quadratic) < 1e-9);
        CHECK(std::abs(e.cubic) < 1e-9);
    }
    SUBCASE("remainder is fourth order") {
        Rng rng(7);
        for (int i = 0; i < 1000; ++i) {
            const double p0n = rng.uniform(1.0, 100.0);
            Position3 d0(rng.normal(), rng.normal(), rng.normal());
            Position3 d(rng.normal(), rng.normal(), rng.normal());
            const Position3 p0 = p0n * d0.normalized();
            const Position3 p = 0.01 * p0n * d.normalized();
            const PhaseExpansion e = phase_delta_expanded(p0, p, wl);
            CHECK(e.exact == doctest::Approx(phase_delta_exact(p0, p, wl)).epsilon(1e-12));
            CHECK(std::abs(e.exact - e.approximation()) <= k * p0n * 10.0 * 1e-8);
        }
    }
    SUBCASE("outside radius of validity") {
        CHECK_THROWS_AS(phase_delta_expanded(Position3(1, 0, 0), Position3(0, 1, 0), wl), DomainError);
        CHECK_THROWS_AS(phase_delta_expanded(Position3(1, 0, 0), Position3(0, 2, 0), wl), DomainError);
    }
}

TEST_CASE("boundary calibration") {
    const double d = std::sqrt(2.0) * 0.5;
    for (const Wavelength& wl : {k5, k28}) {
        const double dff = far_field_distance(d, wl);
        const PhaseExpansion q = phase_delta_expanded(Position3(dff, 0, 0), Position3(0, d / 2, 0), wl);
        CHECK(std::abs(q.quadratic - M_PI / 8) < 1e-9);

        // cos(psi) sin^2(psi) = 2 / (3 sqrt 3) at cos(psi) = 1/sqrt(3)
        const double dq = quadratic_near_field_distance(d, wl);
        const double c = 1.0 / std::sqrt(3.0);
        const Position3 p = d / 2 * Position3(-c, std::sqrt(1 - c * c), 0);
        const PhaseExpansion e = phase_delta_expanded(Position3(dq, 0, 0), p, wl);
        CHECK(std::abs(std::abs(e.cubic) - M_PI / 8) < 1e-9);
    }
}

TEST_CASE("regime distances") {
    const double d = std::sqrt(2.0) * 0.5;
    CHECK(far_field_distance(d, k5) == doctest::Approx(16.7).epsilon(0.01));
    CHECK(quadratic_near_field_distance(d, k5) == doctest::Approx(1.51).epsilon(0.01));
    CHECK(far_field_distance(d, k28) == doctest::Approx(93.3).epsilon(0.01));
    CHECK(quadratic_near_field_distance(d, k28) == doctest::Approx(3.56).epsilon(0.01));
    CHECK(far_field_distance(0.0, k28) == 0.0);
    CHECK(quadratic_near_field_distance(0.0, k28) == 0.0);
    CHECK_THROWS_AS(far_field_distance(-1.0, k28), DomainError);

    for (double dd = k28.meters(); dd < 10.0; dd *= 1.1) {
        CHECK(quadratic_near_field_distance(dd, k28) <= far_field_distance(dd, k28));
    }
    // lambda <= d_qNF needs D >= (3 sqrt(3) / 2)^(1/3) lambda, about 1.375 lambda
    const double knee = std::cbrt(3.0 * std::sqrt(3.0) / 2.0) * k28.meters();
    CHECK(quadratic_near_field_distance(knee, k28) == doctest::Approx(k28.meters()).epsilon(1e-12));
    CHECK(quadratic_near_field_distance(k28.meters(), k28) < k28.meters());
    for (double dd = knee; dd < 10.0; dd *= 1.1) CHECK(k28.meters() <= quadratic_near_field_distance(dd, k28));
}

TEST_CASE("regime classification") {
    const double d = std::sqrt(2.0) * 0.5;
    CHECK(classify_regime(2 * far_field_distance(d, k28), d, k28) == Regime::FarField);
    CHECK(classify_regime(10.0, d, k28) == Regime::QuadraticNearField);
    CHECK(classify_regime(2.0, d, k28) == Regime::GeneralNearField);
    CHECK(classify_regime(k28.meters() / 2, d, k28) == Regime::ReactiveNearField);
    CHECK(classify_regime(far_field_distance(d, k28), d, k28) == Regime::FarField);
    CHECK(to_string(Regime::QuadraticNearField) == "quadratic-near-field");
}

TEST_CASE("upa layout") {
    const double h = k28.meters() / 2;
    const ArrayGeometry one = upa_geometry(1, 1, h, h);
    REQUIRE(one.size() == 1);
    CHECK(one[0].norm() == 0.0);
    CHECK(one.largest_dimension() == 0.0);

    const ArrayGeometry four = upa_geometry(2, 2, h, h);
    REQUIRE(four.size() == 4);
    CHECK(four.largest_dimension() == doctest::Approx(k28.meters() * std::sqrt(2.0) / 2));
    // ny fastest
    CHECK(four[1].isApprox(Position3(0, h, 0)));
    CHECK(four[2].isApprox(Position3(0, 0, h)));
    CHECK(four[3].isApprox(Position3(0, h, h)));

    const ArrayGeometry big = upa_geometry(100, 100, h, h);
    const double lside = 99 * h;
    CHECK(big.largest_dimension() == doctest::Approx(std::sqrt(2.0) * lside));
    // rounded reference figures: D 0.757 m and d_FF 107 m
    CHECK(big.largest_dimension() == doctest::Approx(0.757).epsilon(0.03));
    CHECK(far_field_distance(big.largest_dimension(), k28) == doctest::Approx(107).epsilon(0.05));

    CHECK_THROWS(upa_geometry(0, 1, h, h));
}

TEST_CASE("centered upa") {
    const double h = k28.meters() / 2;
    const Position3 c(1, 2, 3);
    const ArrayGeometry g = centered_upa(5, 4, h, c, Position3::UnitX(), Position3::UnitY());
    CHECK((g.centroid() - c).norm() < 1e-12);
    for (const auto& p : g.positions()) CHECK(std::abs(p.z() - 3.0) < 1e-12);
    CHECK((g.centered().centroid()).norm() < 1e-12);
}

TEST_CASE("steering vectors") {
    const double h = k28.meters() / 2;
    const ArrayGeometry g = upa_geometry(6, 5, h, h);

    const CVector a0 = steering_vector(g, {0.0, 0.0}, k28);
    CHECK((a0 - CVector::Ones(g.size())).norm() < 1e-12);

    const CVector a90 = steering_vector(g, {M_PI / 2, 0.0}, k28);
    for (int n = 0; n < g.size(); ++n) {
        const int nz = n / 6;
        const cd expect = std::exp(kJ * k28.wave_number() * h * double(nz));
        CHECK(std::abs(a90[n] - expect) < 1e-9);
    }

    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const Angles psi{rng.uniform(-M_PI / 2, M_PI / 2), rng.uniform(-M_PI, M_PI)};
        const CVector a = steering_vector(g, psi, k28);
        const CVector b = steering_vector_upa(*g.layout(), psi, k28);
        CHECK((a - b).norm() < 1e-9);
        CHECK(a.squaredNorm() == doctest::Approx(g.size()).epsilon(1e-12));
    }
}

TEST_CASE("angles and directions") {
    const Angles a{0.3, -1.1};
    const Angles b = angles_of(direction(a));
    CHECK(b.theta == doctest::Approx(a.theta));
    CHECK(b.phi == doctest::Approx(a.phi));
    const Angles inc = incident_angles(Position3(0, 5, 0));
    CHECK(direction(inc).isApprox(Position3(0, -1, 0)));
    CHECK(direction(departure_angles(Position3(0, 0, 2))).isApprox(Position3(0, 0, 1)));
    CHECK_THROWS_AS(angles_of(Position3::Zero()), DomainError);
}

TEST_CASE("box grids") {
    const Box3 box{{0, 0, 1}, {2, 4, 1}};
    const auto pts = grid_points(box, 3);
    REQUIRE(pts.size() == 9);
    CHECK(pts[0].isApprox(Position3(0, 0, 1)));
    CHECK(pts[1].isApprox(Position3(1, 0, 1)));
    CHECK(pts[3].isApprox(Position3(0, 2, 1)));
    CHECK(grid_points(Box3::point(Position3(1, 1, 1)), 5).size() == 1);
    CHECK(box.contains(Position3(1, 1, 1)));
    CHECK_FALSE(box.contains(Position3(3, 1, 1)));
}

#include "oracles.hpp"

#include "wsbf/analysis.hpp"

#include <doctest.h>

#include <random>

using namespace wsbf;

namespace {

const ArrayGeometry kGeometry(8, 0.5);

CVector uniform_taper(double steer = 0.0) {
    return oracle::steering(8, 0.5, steer) / 8.0;
}

} // namespace

TEST_CASE("uniform taper pattern against the Dirichlet kernel") {
    const BeamPattern p = beam_pattern(uniform_taper(), kGeometry, 0.1);
    CHECK(p.angles_deg.size() == 1801);
    CHECK(p.gain_db.size() == 1801);
    CHECK(p.raw_gain.size() == 1801);
    CHECK(p.gain_db.maxCoeff() == 0.0);
    CHECK(p.gain_db_at(0.0) == 0.0);
    for (std::size_t i = 0; i < p.angles_deg.size(); i += 7) {
        const double expected = oracle::dirichlet_power(8, 0.5, p.angles_deg[i]);
        CHECK(p.raw_gain(static_cast<Eigen::Index>(i)) == doctest::Approx(expected).epsilon(1e-10));
    }
    const double first_null = std::asin(2.0 / 8.0) * 180.0 / oracle::kPi;
    CHECK(array_gain(uniform_taper(), kGeometry, first_null) < 1e-20);
    CHECK(array_gain(uniform_taper(), kGeometry, -first_null) < 1e-20);
}

TEST_CASE("conjugate weights mirror the pattern") {
    std::mt19937 rng(1);
    std::normal_distribution<double> n(0.0, 1.0);
    CVector w(8);
    for (int i = 0; i < 8; ++i) {
        w(i) = Complex(n(rng), n(rng));
    }
    const BeamPattern p = beam_pattern(w, kGeometry, 0.5);
    const BeamPattern q = beam_pattern(CVector(w.conjugate()), kGeometry, 0.5);
    const Eigen::Index last = p.raw_gain.size() - 1;
    for (Eigen::Index i = 0; i <= last; ++i) {
        CHECK(std::abs(p.raw_gain(i) - q.raw_gain(last - i)) < 1e-12 * p.peak_raw_gain);
    }
}

TEST_CASE("beam pattern preconditions") {
    CHECK_THROWS_AS(beam_pattern(CVector::Zero(8), kGeometry), DomainError);
    CHECK_THROWS_AS(beam_pattern(uniform_taper(), kGeometry, 1.5), DomainError);
    CHECK_THROWS_AS(beam_pattern(uniform_taper(), kGeometry, 0.0), DomainError);
    CHECK_THROWS_AS(beam_pattern(CVector(CVector::Ones(6)), kGeometry), DomainError);
}

TEST_CASE("null depth") {
    const BeamPattern p = beam_pattern(uniform_taper(), kGeometry, 0.1);
    CHECK(null_depth(p, 14.48) <= -100.0);
    CHECK(null_depth(p, -14.48) <= -100.0);
    CHECK(null_depth(p, 14.48) >= kDbFloor);
    for (double theta : {-60.0, -20.0, 5.0, 33.3, 70.0}) {
        CHECK(null_depth(p, theta) <= p.gain_db_at(theta));
    }
    CHECK_THROWS_AS(null_depth(p, 89.5), DomainError);
    CHECK_THROWS_AS(null_depth(p, 0.0, 0.0), DomainError);

    // A single active element has a flat response.
    CVector flat = CVector::Zero(8);
    flat(0) = 1.0;
    CHECK(null_depth(beam_pattern(flat, kGeometry, 0.1), 30.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("exact zero clamps at the floor") {
    // Two elements at half wavelength, w = [1, 1]: nulls at +-90 degrees.
    const ArrayGeometry g(2, 0.5);
    CVector w(2);
    w << 1.0, 1.0;
    const BeamPattern p = beam_pattern(w, g, 0.5);
    CHECK(p.gain_db_at(90.0) <= -150.0);
    CHECK(p.gain_db.minCoeff() >= kDbFloor);
    CHECK(null_depth(p, 89.0) >= kDbFloor);
    CHECK(null_depth(p, 89.0) <= -150.0);
}

TEST_CASE("sidelobe level") {
    const SidelobeLevel s = sidelobe_level(beam_pattern(uniform_taper(), kGeometry, 0.1), 0.0);
    CHECK(s.has_sidelobe);
    CHECK(s.level_db == doctest::Approx(-12.8).epsilon(0.3 / 12.8));

    // Two elements, quarter-wavelength spacing: the response falls monotonically.
    const ArrayGeometry g(2, 0.25);
    CVector w(2);
    w << 0.5, 0.5;
    const BeamPattern mono = beam_pattern(w, g, 0.1);
    const SidelobeLevel none = sidelobe_level(mono, 0.0);
    CHECK_FALSE(none.has_sidelobe);
    CHECK(none.level_db == doctest::Approx(std::max(mono.gain_db(0), mono.gain_db(mono.gain_db.size() - 1))));

    CHECK_THROWS_AS(sidelobe_level(beam_pattern(uniform_taper(), kGeometry, 0.1), 7.0), DomainError);

    std::mt19937 rng(3);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        CVector r(8);
        for (int i = 0; i < 8; ++i) {
            r(i) = Complex(n(rng), n(rng));
        }
        const BeamPattern p = beam_pattern(r, kGeometry, 0.1);
        Eigen::Index arg = 0;
        p.gain_db.maxCoeff(&arg);
        CHECK(sidelobe_level(p, p.angles_deg[static_cast<std::size_t>(arg)]).level_db <= 0.0);
    }
}

TEST_CASE("pointing error") {
    CHECK(pointing_error(beam_pattern(uniform_taper(), kGeometry, 0.1), 0.0) == doctest::Approx(0.0));
    CHECK(pointing_error(beam_pattern(uniform_taper(3.0), kGeometry, 0.1), 0.0) ==
          doctest::Approx(3.0).epsilon(0.1 / 3.0));
    // Endfire-symmetric plateau: w = [1, -1] at half wavelength peaks at +-90.
    const ArrayGeometry g(2, 0.5);
    CVector w(2);
    w << 1.0, -1.0;
    const BeamPattern p = beam_pattern(w, g, 0.5);
    CHECK(pointing_error(p, 80.0) == doctest::Approx(10.0));
    CHECK(pointing_error(p, -80.0) == doctest::Approx(-10.0));
}

TEST_CASE("output sinr") {
    Scenario s;
    s.soi_snr_db = 10.0;
    CHECK(output_sinr(uniform_taper(), s, kGeometry) == doctest::Approx(10.0 + 10.0 * std::log10(8.0)));

    const CVector a0 = oracle::steering(8, 0.5, 0.0);
    CVector orth = oracle::steering(8, 0.5, 30.0);
    orth -= a0 * (a0.dot(orth) / a0.squaredNorm());
    CHECK(output_sinr(orth, s, kGeometry) == kDbFloor);

    s.interferers = {{-30.0, 20.0}, {70.0, 40.0}};
    const CVector w = oracle::random_hermitian_pd(8, 2).col(0);
    const double base = output_sinr(w, s, kGeometry);
    CHECK(std::abs(output_sinr(CVector(w * Complex(-3.0, 0.25)), s, kGeometry) - base) < 1e-10);
    // Independent evaluation of the ratio.
    double interference = 0.0;
    for (const auto& j : s.interferers) {
        interference += std::pow(10.0, j.inr_db / 10.0) * std::norm(w.dot(oracle::steering(8, 0.5, j.doa_deg)));
    }
    const double expected = 10.0 * std::log10(10.0 * std::norm(w.dot(a0)) / (interference + w.squaredNorm()));
    CHECK(base == doctest::Approx(expected).epsilon(1e-12));
}

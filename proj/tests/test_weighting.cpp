#include "oracles.hpp"

#include "wsbf/weighting.hpp"

#include <doctest.h>

#include <random>

using namespace wsbf;

namespace {

CMatrix random_matrix(int rows, int cols, std::mt19937& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    CMatrix C(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            C(i, j) = Complex(n(rng), n(rng));
        }
    }
    return C;
}

Scenario three_jammer_scenario(std::uint64_t seed) {
    Scenario s;
    s.interferers = {{-30.0, 20.0}, {30.0, 20.0}, {70.0, 40.0}};
    s.num_snapshots = 100;
    s.rng_seed = seed;
    return s;
}

std::size_t index_of(const DoaGrid& grid, double theta) {
    const auto& a = grid.angles_deg();
    return static_cast<std::size_t>(std::find(a.begin(), a.end(), theta) - a.begin());
}

} // namespace

TEST_CASE("identical nonzero rows give unit weights") {
    CMatrix C(4, 3);
    for (int i = 0; i < 4; ++i) {
        C.row(i) << Complex(1, 1), Complex(2, -1), Complex(0.5, 0);
    }
    CHECK((snm(C) - RVector::Ones(4)).norm() < 1e-15);
}

TEST_CASE("zero input gives zero weights") {
    CHECK(snm(CMatrix::Zero(5, 4)).norm() == 0.0);
}

TEST_CASE("noise-free single source peaks at its grid direction") {
    const ArrayGeometry g(8, 0.5);
    const DoaGrid grid = DoaGrid::uniform(1.0, 0.0);
    const SteeringMatrix A = steering_matrix(g, grid);
    CMatrix x(8, 1);
    x.col(0) = oracle::steering(8, 0.5, 70.0);
    const RVector w = snm(A.data.adjoint() * x);
    Eigen::Index arg = 0;
    CHECK(w.maxCoeff(&arg) == doctest::Approx(1.0));
    CHECK(grid.angles_deg()[static_cast<std::size_t>(arg)] == 70.0);
    // |a(70)^H a(70)| = M is strictly the largest on the 1 degree grid.
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (i != arg) {
            CHECK(w(i) < 1.0);
        }
    }
}

TEST_CASE("snm properties on random data") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> phase(-oracle::kPi, oracle::kPi);
    std::uniform_real_distribution<double> scale(0.01, 100.0);
    for (int trial = 0; trial < 50; ++trial) {
        const CMatrix C = random_matrix(12, 7, rng);
        const RVector base = snm(C);
        CHECK(base.minCoeff() >= 0.0);
        CHECK(base.maxCoeff() == doctest::Approx(1.0));
        CHECK((snm(C * std::polar(1.0, phase(rng))) - base).norm() < 1e-12);
        CHECK((snm(C * scale(rng)) - base).norm() < 1e-12);
    }
}

TEST_CASE("Q on the three-jammer scenario highlights the interferers") {
    const ArrayGeometry g(8, 0.5);
    const DoaGrid grid = DoaGrid::uniform(1.0, 0.0);
    const SteeringMatrix A = steering_matrix(g, grid);
    RVector mean = RVector::Zero(static_cast<Eigen::Index>(grid.size()));
    int peak_at_70 = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const WeightMatrix Q = build_q(A, generate_snapshots(three_jammer_scenario(seed), g));
        CHECK(Q.diag.size() == static_cast<Eigen::Index>(grid.size()));
        CHECK(Q.diag.maxCoeff() == doctest::Approx(1.0));
        Eigen::Index arg = 0;
        Q.diag.maxCoeff(&arg);
        if (std::abs(grid.angles_deg()[static_cast<std::size_t>(arg)] - 70.0) <= 3.0) {
            ++peak_at_70;
        }
        mean += Q.diag;
    }
    CHECK(peak_at_70 >= 18);
    mean /= 20.0;

    Eigen::Index global = 0;
    mean.maxCoeff(&global);
    CHECK(std::abs(grid.angles_deg()[static_cast<std::size_t>(global)] - 70.0) <= 3.0);
    // Each interferer has a local maximum of the averaged weights nearby; the
    // 20 dB sources sit on the skirt of the 40 dB one and are pulled outward.
    for (double theta : {-30.0, 30.0, 70.0}) {
        const auto centre = static_cast<Eigen::Index>(index_of(grid, theta));
        bool found = false;
        for (Eigen::Index i = centre - 5; i <= centre + 5; ++i) {
            if (i > 0 && i + 1 < mean.size() && mean(i) >= mean(i - 1) && mean(i) >= mean(i + 1)) {
                found = true;
            }
        }
        CHECK_MESSAGE(found, "no local maximum near " << theta);
    }
}

TEST_CASE("build_q degenerate and mismatched inputs") {
    const ArrayGeometry g(8, 0.5);
    const SteeringMatrix A = steering_matrix(g, DoaGrid::uniform(1.0, 0.0));
    const WeightMatrix Q = build_q(A, SnapshotMatrix{CMatrix::Zero(8, 10)});
    CHECK((Q.diag - RVector::Ones(180)).norm() == 0.0);
    CHECK_THROWS_AS(build_q(A, SnapshotMatrix{CMatrix::Zero(6, 10)}), DomainError);
}

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ftscorr/basis.hpp"
#include "ftscorr/grid.hpp"

using namespace ftscorr;

TEST_CASE("uniform grid construction and validation") {
    const Grid1D g = make_uniform_grid(4);
    CHECK(g.m == 4);
    CHECK(g.point(0) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(g.point(3) == doctest::Approx(0.875).epsilon(1e-15));
    CHECK(g.weight() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(make_uniform_grid(0), std::invalid_argument);
    CHECK_THROWS_AS(make_uniform_grid(-3), std::invalid_argument);
}

TEST_CASE("grid quadrature") {
    const Grid1D g = make_uniform_grid(1000);
    Eigen::VectorXd tau = g.points();
    Eigen::VectorXd tau_sq = tau.array().square();

    SUBCASE("integral of tau^2 near 1/3") {
        CHECK(l2_inner_grid(tau, tau, g) == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    }
    SUBCASE("exact on constants for every m") {
        for (int m : {1, 2, 7, 100}) {
            const Grid1D gm = make_uniform_grid(m);
            const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m);
            CHECK(l2_inner_grid(ones, ones, gm) == 1.0);
        }
    }
    SUBCASE("basis elements orthonormal") {
        Eigen::VectorXd psi1(g.m), psi2(g.m);
        for (int j = 0; j < g.m; ++j) {
            psi1[j] = fourier_basis_eval(1, g.point(j));
            psi2[j] = fourier_basis_eval(2, g.point(j));
        }
        CHECK(std::abs(l2_inner_grid(psi1, psi2, g)) <= 1e-9);
        CHECK(l2_inner_grid(psi1, psi1, g) == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("length mismatch rejected") {
        Eigen::VectorXd short_vec = Eigen::VectorXd::Zero(10);
        CHECK_THROWS_AS(l2_inner_grid(short_vec, tau, g), std::invalid_argument);
    }
}

TEST_CASE("fourier basis evaluation") {
    const double root2 = std::numbers::sqrt2;
    CHECK(fourier_basis_eval(0, 0.37) == 1.0);
    CHECK(fourier_basis_eval(1, 0.25) == doctest::Approx(root2).epsilon(1e-12));
    CHECK(fourier_basis_eval(2, 0.0) == doctest::Approx(root2).epsilon(1e-12));
    CHECK(fourier_basis_eval(3, 0.125) == doctest::Approx(root2).epsilon(1e-12));
    CHECK_THROWS_AS(fourier_basis_eval(-1, 0.5), std::invalid_argument);
}

TEST_CASE("fourier projection") {
    const Grid1D g = make_uniform_grid(1000);

    SUBCASE("constant curve maps to the first coordinate") {
        FunctionalSeries series = make_functional_series(Eigen::MatrixXd::Ones(3, g.m), g);
        const CoefficientSeries coef = project_fourier(series, 5);
        for (int t = 0; t < 3; ++t) {
            CHECK(coef.coef(t, 0) == doctest::Approx(1.0).epsilon(1e-9));
            for (int d = 1; d < 5; ++d) CHECK(std::abs(coef.coef(t, d)) <= 1e-9);
        }
    }
    SUBCASE("sin(6 pi tau) is basis element 5 over sqrt(2)") {
        Eigen::MatrixXd values(1, g.m);
        for (int j = 0; j < g.m; ++j)
            values(0, j) = std::sin(6.0 * std::numbers::pi * g.point(j));
        const CoefficientSeries coef =
            project_fourier(make_functional_series(values, g), 17);
        for (int d = 0; d < 17; ++d) {
            const double want = d == 5 ? 1.0 / std::numbers::sqrt2 : 0.0;
            CHECK(coef.coef(0, d) == doctest::Approx(want).epsilon(1e-6));
        }
    }
    SUBCASE("zero curves map to zero coefficients") {
        FunctionalSeries series = make_functional_series(Eigen::MatrixXd::Zero(2, 50),
                                                         make_uniform_grid(50));
        CHECK(project_fourier(series, 7).coef.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("even dimension rejected") {
        FunctionalSeries series = make_functional_series(Eigen::MatrixXd::Ones(1, 50),
                                                         make_uniform_grid(50));
        CHECK_THROWS_AS(project_fourier(series, 4), std::invalid_argument);
        CHECK_THROWS_AS(project_fourier(series, 0), std::invalid_argument);
    }
}

TEST_CASE("projection respects the L2 geometry of band-limited curves") {
    const Grid1D g = make_uniform_grid(1000);
    const int D = 7;
    Eigen::RowVectorXd c(D);
    c << 0.4, -1.2, 0.7, 0.05, -0.3, 1.1, -0.8;
    CoefficientSeries coef{c};
    const FunctionalSeries curve = reconstruct_curves(coef, g);

    SUBCASE("Parseval at band limit") {
        const double grid_sq = l2_inner_grid(curve.values.row(0), curve.values.row(0), g);
        CHECK(std::abs(c.squaredNorm() - grid_sq) <= 1e-6);
    }
    SUBCASE("projection idempotence") {
        const CoefficientSeries back = project_fourier(curve, D);
        CHECK((back.coef - c).cwiseAbs().maxCoeff() <= 1e-9);
        const CoefficientSeries again =
            project_fourier(reconstruct_curves(back, g), D);
        CHECK((again.coef - back.coef).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("functional series validation") {
    const Grid1D g = make_uniform_grid(8);
    CHECK_THROWS_AS(make_functional_series(Eigen::MatrixXd::Ones(2, 5), g),
                    std::invalid_argument);
    Eigen::MatrixXd bad = Eigen::MatrixXd::Ones(2, 8);
    bad(1, 3) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(make_functional_series(bad, g), std::invalid_argument);
}

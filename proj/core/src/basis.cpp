#include "ftscorr/basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ftscorr {

double fourier_basis_eval(int k, double tau) {
    if (k < 0) throw std::invalid_argument("basis index must be nonnegative");
    if (k == 0) return 1.0;
    const int n = (k + 1) / 2;
    const double arg = 2.0 * std::numbers::pi * n * tau;
    const double root2 = std::numbers::sqrt2;
    return (k % 2 == 1) ? root2 * std::sin(arg) : root2 * std::cos(arg);
}

Eigen::MatrixXd fourier_basis_matrix(const Grid1D& grid, int D) {
    if (D < 1) throw std::invalid_argument("basis dimension must be positive");
    Eigen::MatrixXd psi(grid.m, D);
    for (int j = 0; j < grid.m; ++j) {
        const double tau = grid.point(j);
        for (int k = 0; k < D; ++k) psi(j, k) = fourier_basis_eval(k, tau);
    }
    return psi;
}

CoefficientSeries project_fourier(const FunctionalSeries& series, int D) {
    if (D < 1 || D % 2 == 0)
        throw std::invalid_argument("basis dimension must be odd: the constant plus sine/cosine pairs");
    const Eigen::MatrixXd psi = fourier_basis_matrix(series.grid, D);
    return CoefficientSeries{series.values * psi * series.grid.weight()};
}

FunctionalSeries reconstruct_curves(const CoefficientSeries& series, const Grid1D& grid) {
    const Eigen::MatrixXd psi = fourier_basis_matrix(grid, series.dim());
    return FunctionalSeries{series.coef * psi.transpose(), grid};
}

}  // namespace ftscorr

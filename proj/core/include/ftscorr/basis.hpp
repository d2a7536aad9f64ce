#pragma once

#include <Eigen/Dense>

#include "ftscorr/grid.hpp"

namespace ftscorr {

// A time series of curves expressed in an orthonormal basis; row t holds the
// D coefficients of curve X_{t+1}. Products and norms of basis coefficients
// coincide with the L2 quantities of the curves they represent.
struct CoefficientSeries {
    Eigen::MatrixXd coef;  // T x D

    int length() const { return static_cast<int>(coef.rows()); }
    int dim() const { return static_cast<int>(coef.cols()); }
};

// Fourier basis element k at point tau:
//   k = 0      -> 1
//   k = 2n - 1 -> sqrt(2) sin(2 pi n tau)
//   k = 2n     -> sqrt(2) cos(2 pi n tau)
double fourier_basis_eval(int k, double tau);

// m x D matrix with column k the k-th basis element sampled on the grid.
Eigen::MatrixXd fourier_basis_matrix(const Grid1D& grid, int D);

// Projects each curve onto the first D Fourier elements by grid quadrature.
// D must be odd: the constant plus whole sine/cosine pairs.
CoefficientSeries project_fourier(const FunctionalSeries& series, int D);

// Evaluates coefficient curves back on a grid (exact for band-limited input).
FunctionalSeries reconstruct_curves(const CoefficientSeries& series, const Grid1D& grid);

}  // namespace ftscorr

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <span>
#include <string>

#include "ftscorr/grid.hpp"

namespace ftscorr {

// Simulation models used by the Monte Carlo harness. Null models are
// serially uncorrelated; alternative models have FAR(1) dependence.
//   N1  i.i.d. standard Brownian motion
//   N2  i.i.d. Brownian bridge
//   N3  functional ARCH(1)
//   N4  independent, variance-modulated: sigma(t/T) B_t
//   A1  FAR(1), Gaussian kernel, Brownian motion noise
//   A2  FAR(1), Gaussian kernel, Brownian bridge noise
//   A3  FAR(1), Wiener kernel, Brownian motion noise
//   A4  FAR(1), Wiener kernel, Brownian bridge noise
//   A5  FAR(1), noise scaled by sigma(t/T)
//   A6  FAR(1), operator scaled by sigma(t/T)
// with sigma(x) = x + 1/2.
enum class ModelId { N1, N2, N3, N4, A1, A2, A3, A4, A5, A6 };

ModelId parse_model_id(const std::string& name);  // "N1".."A6", case-insensitive
std::string model_name(ModelId id);
bool model_is_null(ModelId id);

enum class KernelKind { gaussian, wiener };
enum class NoiseKind { brownian_motion, brownian_bridge };
enum class HeteroMode { none, noise_scaled, operator_scaled };

// Integral-operator kernel sampled on the grid; application to a curve x is
// the quadrature matvec (values * x) * grid.weight().
struct KernelMatrix {
    Eigen::MatrixXd values;  // m x m
    double hs_norm;          // Hilbert-Schmidt norm under the same quadrature
};

// Kernel shape (Gaussian: exp((tau^2 + sigma^2)/2), Wiener: min(tau, sigma))
// rescaled so its Hilbert-Schmidt norm equals target_hs.
KernelMatrix make_integral_kernel(KernelKind kind, const Grid1D& grid, double target_hs);

// Raw multipliers used by the simulation models. The FAR(1) scales are
// calibrated against the model's lag-1 autocovariance norm (Gaussian kernel:
// E||M_1|| near 0.1419 at T=2000 with lag decay near 0.49; Wiener kernel:
// E||M_1|| near 0.1996); the ARCH scale is a fixed model constant.
inline constexpr double kGaussianFarScale = 0.3375;
inline constexpr double kWienerFarScale = 1.4142135623730951;  // sqrt(2)
inline constexpr double kArchKernelScale = 0.3418;

// The FAR(1) kernel for the given shape at its calibrated scale.
KernelMatrix make_model_kernel(KernelKind kind, const Grid1D& grid);

// Brownian path on the midpoint grid from pre-drawn standard normals.
// Consumes exactly grid.m + 1 values: m increments (the first over a half
// step, hence variance 1/(2m), the rest over full steps) plus one final half
// step that extends the path to tau = 1; the bridge subtracts tau * B(1),
// while the plain motion ignores the final increment. Keeping the draw count
// identical for both kinds keeps same-seed series aligned across models.
Eigen::VectorXd gaussian_path_from_normals(const Grid1D& grid, std::span<const double> z,
                                           bool bridge);

Eigen::VectorXd gen_gaussian_path(const Grid1D& grid, std::mt19937_64& engine, bool bridge);

struct ModelSpec {
    ModelId id;
    int T;
    Grid1D grid;
    int burn_in = 100;
    std::uint64_t seed = 0;
};

// FAR(1) recursion X_t = sigma_op * rho(X_{t-1}) + sigma_noise * eps_t from
// X_0 = 0 with `burn_in` discarded steps. The heteroscedastic factor
// sigma(t/T) uses the post-burn-in index t = 1..T and sigma(0) during
// burn-in.
FunctionalSeries gen_far1(const ModelSpec& spec, const KernelMatrix& kernel,
                          NoiseKind noise, HeteroMode hetero);

// Functional ARCH(1): X_t(tau) = B_t(tau) * sqrt(tau + (psi X_{t-1}^2)(tau))
// with psi the Gaussian-shape kernel at scale kArchKernelScale.
FunctionalSeries gen_farch1(const ModelSpec& spec);

// Generates any model; all randomness derives from spec.seed. One engine per
// series; each time step consumes grid.m + 1 normals in grid order.
FunctionalSeries gen_model(const ModelSpec& spec);

}  // namespace ftscorr

#include "ftscorr/simmodels.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "ftscorr/rng.hpp"

namespace ftscorr {

namespace {

double sigma_local(double u) { return u + 0.5; }

Eigen::MatrixXd raw_kernel(KernelKind kind, const Grid1D& grid) {
    Eigen::MatrixXd k(grid.m, grid.m);
    for (int i = 0; i < grid.m; ++i) {
        const double ti = grid.point(i);
        for (int j = 0; j < grid.m; ++j) {
            const double tj = grid.point(j);
            k(i, j) = kind == KernelKind::gaussian
                          ? std::exp(0.5 * (ti * ti + tj * tj))
                          : std::min(ti, tj);
        }
    }
    return k;
}

double hs_norm_grid(const Eigen::MatrixXd& k, const Grid1D& grid) {
    return k.norm() * grid.weight();
}

}  // namespace

ModelId parse_model_id(const std::string& name) {
    std::string up(name);
    std::transform(up.begin(), up.end(), up.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (up == "N1") return ModelId::N1;
    if (up == "N2") return ModelId::N2;
    if (up == "N3") return ModelId::N3;
    if (up == "N4") return ModelId::N4;
    if (up == "A1") return ModelId::A1;
    if (up == "A2") return ModelId::A2;
    if (up == "A3") return ModelId::A3;
    if (up == "A4") return ModelId::A4;
    if (up == "A5") return ModelId::A5;
    if (up == "A6") return ModelId::A6;
    throw std::invalid_argument("unknown model id: " + name);
}

std::string model_name(ModelId id) {
    switch (id) {
        case ModelId::N1: return "N1";
        case ModelId::N2: return "N2";
        case ModelId::N3: return "N3";
        case ModelId::N4: return "N4";
        case ModelId::A1: return "A1";
        case ModelId::A2: return "A2";
        case ModelId::A3: return "A3";
        case ModelId::A4: return "A4";
        case ModelId::A5: return "A5";
        case ModelId::A6: return "A6";
    }
    throw std::invalid_argument("unknown model id");
}

bool model_is_null(ModelId id) {
    return id == ModelId::N1 || id == ModelId::N2 || id == ModelId::N3 || id == ModelId::N4;
}

KernelMatrix make_integral_kernel(KernelKind kind, const Grid1D& grid, double target_hs) {
    if (grid.m < 1) throw std::invalid_argument("degenerate grid");
    if (!(target_hs > 0.0)) throw std::invalid_argument("target norm must be positive");
    Eigen::MatrixXd k = raw_kernel(kind, grid);
    k *= target_hs / hs_norm_grid(k, grid);
    return KernelMatrix{std::move(k), target_hs};
}

KernelMatrix make_model_kernel(KernelKind kind, const Grid1D& grid) {
    const double scale = kind == KernelKind::gaussian ? kGaussianFarScale : kWienerFarScale;
    Eigen::MatrixXd k = scale * raw_kernel(kind, grid);
    const double hs = hs_norm_grid(k, grid);
    return KernelMatrix{std::move(k), hs};
}

Eigen::VectorXd gaussian_path_from_normals(const Grid1D& grid, std::span<const double> z,
                                           bool bridge) {
    const int m = grid.m;
    if (static_cast<int>(z.size()) < m + 1)
        throw std::invalid_argument("path construction needs m + 1 normals");
    const double half_step = std::sqrt(0.5 / m);
    const double full_step = std::sqrt(1.0 / m);
    Eigen::VectorXd path(m);
    path[0] = half_step * z[0];
    for (int j = 1; j < m; ++j) path[j] = path[j - 1] + full_step * z[j];
    if (bridge) {
        const double at_one = path[m - 1] + half_step * z[m];
        for (int j = 0; j < m; ++j) path[j] -= grid.point(j) * at_one;
    }
    return path;
}

Eigen::VectorXd gen_gaussian_path(const Grid1D& grid, std::mt19937_64& engine, bool bridge) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> z(grid.m + 1);
    for (double& v : z) v = normal(engine);
    return gaussian_path_from_normals(grid, z, bridge);
}

namespace {

void check_spec(const ModelSpec& spec) {
    if (spec.T < 1) throw std::invalid_argument("series length must be positive");
    if (spec.grid.m < 1) throw std::invalid_argument("degenerate grid");
    if (spec.burn_in < 0) throw std::invalid_argument("burn-in must be nonnegative");
}

}  // namespace

FunctionalSeries gen_far1(const ModelSpec& spec, const KernelMatrix& kernel,
                          NoiseKind noise, HeteroMode hetero) {
    check_spec(spec);
    const int m = spec.grid.m;
    const double w = spec.grid.weight();
    const bool bridge = noise == NoiseKind::brownian_bridge;
    auto engine = make_engine(spec.seed, kStreamData, 0);

    Eigen::MatrixXd values(spec.T, m);
    Eigen::VectorXd prev = Eigen::VectorXd::Zero(m);
    for (int step = 1; step <= spec.burn_in + spec.T; ++step) {
        const int t = step - spec.burn_in;
        const double u = t >= 1 ? static_cast<double>(t) / spec.T : 0.0;
        const Eigen::VectorXd eps = gen_gaussian_path(spec.grid, engine, bridge);
        Eigen::VectorXd x = (kernel.values * prev) * w;
        switch (hetero) {
            case HeteroMode::none:
                x += eps;
                break;
            case HeteroMode::noise_scaled:
                x += sigma_local(u) * eps;
                break;
            case HeteroMode::operator_scaled:
                x *= sigma_local(u);
                x += eps;
                break;
        }
        if (t >= 1) values.row(t - 1) = x;
        prev = std::move(x);
    }
    return make_functional_series(std::move(values), spec.grid);
}

FunctionalSeries gen_farch1(const ModelSpec& spec) {
    check_spec(spec);
    const int m = spec.grid.m;
    const double w = spec.grid.weight();
    const KernelMatrix psi{kArchKernelScale * raw_kernel(KernelKind::gaussian, spec.grid), 0.0};
    auto engine = make_engine(spec.seed, kStreamData, 0);

    const Eigen::VectorXd tau = spec.grid.points();
    Eigen::MatrixXd values(spec.T, m);
    Eigen::VectorXd prev = Eigen::VectorXd::Zero(m);
    for (int step = 1; step <= spec.burn_in + spec.T; ++step) {
        const int t = step - spec.burn_in;
        const Eigen::VectorXd b = gen_gaussian_path(spec.grid, engine, false);
        const Eigen::VectorXd variance =
            tau + (psi.values * prev.array().square().matrix()) * w;
        Eigen::VectorXd x = (b.array() * variance.array().sqrt()).matrix();
        if (t >= 1) values.row(t - 1) = x;
        prev = std::move(x);
    }
    return make_functional_series(std::move(values), spec.grid);
}

FunctionalSeries gen_model(const ModelSpec& spec) {
    check_spec(spec);
    switch (spec.id) {
        case ModelId::N1:
        case ModelId::N2:
        case ModelId::N4: {
            // Independent curves: no recursion, so no burn-in; path t uses
            // the same draws regardless of model, keeping same-seed variants
            // aligned row by row.
            const bool bridge = spec.id == ModelId::N2;
            auto engine = make_engine(spec.seed, kStreamData, 0);
            Eigen::MatrixXd values(spec.T, spec.grid.m);
            for (int t = 1; t <= spec.T; ++t) {
                Eigen::VectorXd path = gen_gaussian_path(spec.grid, engine, bridge);
                if (spec.id == ModelId::N4)
                    path *= sigma_local(static_cast<double>(t) / spec.T);
                values.row(t - 1) = path;
            }
            return make_functional_series(std::move(values), spec.grid);
        }
        case ModelId::N3:
            return gen_farch1(spec);
        case ModelId::A1:
            return gen_far1(spec, make_model_kernel(KernelKind::gaussian, spec.grid),
                            NoiseKind::brownian_motion, HeteroMode::none);
        case ModelId::A2:
            return gen_far1(spec, make_model_kernel(KernelKind::gaussian, spec.grid),
                            NoiseKind::brownian_bridge, HeteroMode::none);
        case ModelId::A3:
            return gen_far1(spec, make_model_kernel(KernelKind::wiener, spec.grid),
                            NoiseKind::brownian_motion, HeteroMode::none);
        case ModelId::A4:
            return gen_far1(spec, make_model_kernel(KernelKind::wiener, spec.grid),
                            NoiseKind::brownian_bridge, HeteroMode::none);
        case ModelId::A5:
            return gen_far1(spec, make_model_kernel(KernelKind::gaussian, spec.grid),
                            NoiseKind::brownian_motion, HeteroMode::noise_scaled);
        case ModelId::A6:
            return gen_far1(spec, make_model_kernel(KernelKind::gaussian, spec.grid),
                            NoiseKind::brownian_motion, HeteroMode::operator_scaled);
    }
    throw std::invalid_argument("unknown model id");
}

}  // namespace ftscorr

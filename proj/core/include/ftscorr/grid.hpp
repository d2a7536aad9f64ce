#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace ftscorr {

// Midpoint grid on [0,1]: points (j + 1/2)/m for j = 0..m-1, all with
// quadrature weight 1/m. Integrals over [0,1] are rectangle-rule sums.
struct Grid1D {
    int m = 0;

    double point(int j) const { return (j + 0.5) / m; }
    double weight() const { return 1.0 / m; }

    Eigen::VectorXd points() const {
        Eigen::VectorXd p(m);
        for (int j = 0; j < m; ++j) p[j] = point(j);
        return p;
    }
};

inline Grid1D make_uniform_grid(int m) {
    if (m < 1) throw std::invalid_argument("grid size must be at least 1");
    return Grid1D{m};
}

// A time series of curves sampled on a common grid; row t is curve X_{t+1}.
struct FunctionalSeries {
    Eigen::MatrixXd values;  // T x m
    Grid1D grid;

    int length() const { return static_cast<int>(values.rows()); }
};

inline FunctionalSeries make_functional_series(Eigen::MatrixXd values, const Grid1D& grid) {
    if (values.rows() < 1) throw std::invalid_argument("series must contain at least one curve");
    if (values.cols() != grid.m) throw std::invalid_argument("curve length does not match grid size");
    if (!values.allFinite()) throw std::invalid_argument("series contains non-finite values");
    return FunctionalSeries{std::move(values), grid};
}

// L2 inner product of two grid-sampled functions: (1/m) * sum f_j g_j.
inline double l2_inner_grid(const Eigen::Ref<const Eigen::VectorXd>& f,
                            const Eigen::Ref<const Eigen::VectorXd>& g,
                            const Grid1D& grid) {
    if (f.size() != grid.m || g.size() != grid.m)
        throw std::invalid_argument("function length does not match grid size");
    return f.dot(g) * grid.weight();
}

inline double l2_norm_grid(const Eigen::Ref<const Eigen::VectorXd>& f, const Grid1D& grid) {
    if (f.size() != grid.m) throw std::invalid_argument("function length does not match grid size");
    return f.norm() * std::sqrt(grid.weight());
}

}  // namespace ftscorr

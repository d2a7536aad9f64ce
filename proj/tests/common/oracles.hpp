#pragma once

// Brute-force reference implementations of the displayed formulas, written
// for clarity rather than speed. The library must match these on small
// inputs; keep them free of the prefix-sum and sliding-window tricks the
// library uses.

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "ftscorr/basis.hpp"

namespace oracles {

inline Eigen::MatrixXd random_coef(int T, int D, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd coef(T, D);
    for (int t = 0; t < T; ++t)
        for (int d = 0; d < D; ++d) coef(t, d) = normal(engine);
    return coef;
}

// Partial sum A_s = (1/T) sum_{t=1}^{s ^ (T-h)} a_t a_{t+h}^T.
inline Eigen::MatrixXd partial_sum(const Eigen::MatrixXd& coef, int h, int s) {
    const int T = static_cast<int>(coef.rows());
    const int D = static_cast<int>(coef.cols());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(D, D);
    const int cut = std::min(s, T - h);
    for (int t = 1; t <= cut; ++t)
        a += coef.row(t - 1).transpose() * coef.row(t - 1 + h);
    return a / T;
}

// || M_h ||_{2,3} by materializing every A_s and applying the rectangle rule.
inline double lagcov_norm(const Eigen::MatrixXd& coef, int h) {
    const int T = static_cast<int>(coef.rows());
    double acc = 0.0;
    for (int s = 0; s <= T - 1; ++s) acc += partial_sum(coef, h, s).squaredNorm();
    return std::sqrt(acc / T);
}

// Local product-moment mean by direct window summation.
inline Eigen::MatrixXd local_mean(const Eigen::MatrixXd& coef, int h, int n, int t) {
    const int T = static_cast<int>(coef.rows());
    const int D = static_cast<int>(coef.cols());
    const int lo = std::max(1, t - n);
    const int hi = std::min(T - h, t + n);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(D, D);
    for (int s = lo; s <= hi; ++s)
        sum += coef.row(s - 1).transpose() * coef.row(s - 1 + h);
    return sum / (hi - lo + 1);
}

// Block sum C_i = sum_{t=i}^{(i+m-1) ^ (T-h)} (a_t a_{t+h}^T - mu_{t,h,n,T}).
inline Eigen::MatrixXd block_sum(const Eigen::MatrixXd& coef, int h, int n, int m, int i) {
    const int T = static_cast<int>(coef.rows());
    const int D = static_cast<int>(coef.cols());
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(D, D);
    for (int t = i; t <= std::min(i + m - 1, T - h); ++t) {
        sum += coef.row(t - 1).transpose() * coef.row(t - 1 + h);
        sum -= local_mean(coef, h, n, t);
    }
    return sum;
}

// Bootstrap step process B_h(s/T) = (1/sqrt(T)) sum_{i<=s^(T-h)} (R_i/sqrt(m)) C_i.
inline Eigen::MatrixXd boot_process_at(const Eigen::MatrixXd& coef, int h, int n, int m,
                                       const Eigen::VectorXd& R, int s) {
    const int T = static_cast<int>(coef.rows());
    const int D = static_cast<int>(coef.cols());
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(D, D);
    const int cut = std::min(s, T - h);
    for (int i = 1; i <= cut; ++i)
        sum += R[i - 1] / std::sqrt(static_cast<double>(m)) * block_sum(coef, h, n, m, i);
    return sum / std::sqrt(static_cast<double>(T));
}

struct BootValues {
    double norm;
    double inner;
};

// (|| B_h ||_{2,3}, < M_h, B_h >) by direct evaluation of both u-integrals.
inline BootValues boot_replicate(const Eigen::MatrixXd& coef, int h, int n, int m,
                                 const Eigen::VectorXd& R) {
    const int T = static_cast<int>(coef.rows());
    double norm_acc = 0.0;
    double inner_acc = 0.0;
    for (int s = 0; s <= T - 1; ++s) {
        const Eigen::MatrixXd b = boot_process_at(coef, h, n, m, R, s);
        norm_acc += b.squaredNorm();
        inner_acc += (partial_sum(coef, h, s).array() * b.array()).sum();
    }
    return BootValues{std::sqrt(norm_acc / T), inner_acc / T};
}

// < f, B_h > for a test function constant in u with coefficient matrix F.
inline double boot_inner_functional(const Eigen::MatrixXd& coef, int h, int n, int m,
                                    const Eigen::VectorXd& R, const Eigen::MatrixXd& f) {
    const int T = static_cast<int>(coef.rows());
    double acc = 0.0;
    for (int s = 0; s <= T - 1; ++s)
        acc += (f.array() * boot_process_at(coef, h, n, m, R, s).array()).sum();
    return acc / T;
}

// L2 inner product on [0,1]^2 of two kernels sampled on the same grid.
inline double kernel_inner_grid(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, int m) {
    return (a.array() * b.array()).sum() / (static_cast<double>(m) * m);
}

}  // namespace oracles

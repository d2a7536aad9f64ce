#include "ftscorr/lagcov.hpp"

#include <cmath>
#include <stdexcept>

namespace ftscorr {

namespace {

void check_lag(int h) {
    if (h < 1) throw std::invalid_argument("lag must be positive");
}

// Shared driver: rows of `data` are a_t (coefficients, or grid values scaled
// by sqrt(grid.weight()), which makes Euclidean products equal L2 products).
LagCovIntegral norm_integral_impl(const Eigen::MatrixXd& data, int h) {
    const int T = static_cast<int>(data.rows());
    const int dim = static_cast<int>(data.cols());
    LagCovAccumulator acc(T, dim, h);
    const int L = T - h;
    for (int s = 1; s <= T - 1; ++s) {
        if (s <= L)
            acc.advance(data.row(s - 1), data.row(s - 1 + h));
        else
            acc.advance_hold();
    }
    return LagCovIntegral{std::sqrt(acc.norm_integral()), acc.partial_sum()};
}

}  // namespace

LagCovAccumulator::LagCovAccumulator(int T, int dim, int h) : T_(T), h_(h) {
    if (T < 1) throw std::invalid_argument("series length must be positive");
    if (dim < 1) throw std::invalid_argument("dimension must be positive");
    check_lag(h);
    inv_T_ = 1.0 / T;
    sum_.setZero(dim, dim);
}

void LagCovAccumulator::advance(const Eigen::Ref<const Eigen::RowVectorXd>& a_t,
                                const Eigen::Ref<const Eigen::RowVectorXd>& a_th) {
    sum_.noalias() += inv_T_ * a_t.transpose() * a_th;
    integral_ += sum_.squaredNorm() * inv_T_;
    ++step_;
}

void LagCovAccumulator::advance_hold() {
    integral_ += sum_.squaredNorm() * inv_T_;
    ++step_;
}

Eigen::MatrixXd cum_lag_cov(const CoefficientSeries& series, int h, double u) {
    check_lag(h);
    if (!(u >= 0.0 && u <= 1.0)) throw std::invalid_argument("u must lie in [0, 1]");
    const int T = series.length();
    const int D = series.dim();
    const int cut = std::min(static_cast<int>(std::floor(u * T)), T - h);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(D, D);
    for (int t = 1; t <= cut; ++t)
        sum.noalias() += series.coef.row(t - 1).transpose() * series.coef.row(t - 1 + h);
    return sum / T;
}

LagCovIntegral lagcov_norm_integral(const CoefficientSeries& series, int h) {
    check_lag(h);
    return norm_integral_impl(series.coef, h);
}

LagCovIntegral lagcov_norm_integral(const FunctionalSeries& series, int h) {
    check_lag(h);
    return norm_integral_impl(series.values * std::sqrt(series.grid.weight()), h);
}

namespace {

template <typename Series>
ClassicalStats classical_impl(const Series& series, int H,
                              LagCovIntegral (*integral)(const Series&, int)) {
    const int T = series.length();
    if (H < 1 || H >= T) throw std::invalid_argument("lag count must satisfy 1 <= H < T");
    ClassicalStats out;
    out.H = H;
    out.norm.resize(H);
    out.stat.resize(H);
    const double root_T = std::sqrt(static_cast<double>(T));
    for (int h = 1; h <= H; ++h) {
        out.norm[h - 1] = integral(series, h).norm;
        out.stat[h - 1] = root_T * out.norm[h - 1];
    }
    out.max_stat = out.stat.maxCoeff();
    return out;
}

}  // namespace

ClassicalStats stat_classical(const CoefficientSeries& series, int H) {
    return classical_impl(series, H, &lagcov_norm_integral);
}

ClassicalStats stat_classical(const FunctionalSeries& series, int H) {
    return classical_impl(series, H, &lagcov_norm_integral);
}

RelevantStats stat_relevant(const CoefficientSeries& series, int H,
                            const Eigen::VectorXd& delta) {
    const int T = series.length();
    if (H < 1 || H >= T) throw std::invalid_argument("lag count must satisfy 1 <= H < T");
    if (delta.size() != H) throw std::invalid_argument("threshold vector length must equal the lag count");
    if ((delta.array() <= 0.0).any()) throw std::invalid_argument("thresholds must be positive");
    RelevantStats out;
    out.H = H;
    out.delta = delta;
    out.norm.resize(H);
    out.stat.resize(H);
    const double root_T = std::sqrt(static_cast<double>(T));
    for (int h = 1; h <= H; ++h) {
        const double norm = lagcov_norm_integral(series, h).norm;
        out.norm[h - 1] = norm;
        out.stat[h - 1] = root_T * (norm - delta[h - 1]) * norm;
    }
    out.max_stat = out.stat.maxCoeff();
    return out;
}

}  // namespace ftscorr

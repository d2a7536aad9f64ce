#pragma once

#include <Eigen/Dense>

#include "ftscorr/basis.hpp"
#include "ftscorr/grid.hpp"

namespace ftscorr {

// Cumulative lag-h product-moment process of a series a_1..a_T (rows of a
// CoefficientSeries), evaluated at rescaled time u:
//
//   M_h(u) = (1/T) * sum_{t=1}^{floor(uT) ^ (T-h)} a_t a_{t+h}^T
//
// Its squared L2 norm over (u, tau1, tau2) is the exact rectangle-rule
// integral (1/T) * sum_{s=0}^{T-1} ||A_{s ^ (T-h)}||_F^2 with partial sums
// A_s = (1/T) sum_{t<=s} a_t a_{t+h}^T and A_0 = 0; the process is constant
// on [s/T, (s+1)/T), so the rule is exact, not an approximation.

// Streaming accumulator for one lag: feeds pairs (a_t, a_{t+h}) in time order
// and maintains the partial sum A_s together with the running norm integral
// (1/T) * sum_{s'<=s} ||A_s'||_F^2. Step s=0 is the initial state. Past
// s = T-h the partial sum stops changing but keeps contributing to the
// integral; callers signal those steps with advance_hold().
class LagCovAccumulator {
  public:
    LagCovAccumulator(int T, int dim, int h);

    void advance(const Eigen::Ref<const Eigen::RowVectorXd>& a_t,
                 const Eigen::Ref<const Eigen::RowVectorXd>& a_th);
    void advance_hold();

    int lag() const { return h_; }
    int step() const { return step_; }
    const Eigen::MatrixXd& partial_sum() const { return sum_; }
    double norm_integral() const { return integral_; }

  private:
    int T_;
    int h_;
    int step_ = 0;
    double inv_T_;
    Eigen::MatrixXd sum_;
    double integral_ = 0.0;
};

// M_h(u) as a D x D coefficient matrix. Lags h >= T yield the zero matrix
// (the summation range is empty), not an error.
Eigen::MatrixXd cum_lag_cov(const CoefficientSeries& series, int h, double u);

struct LagCovIntegral {
    double norm;                    // || M_h ||_{2,3}
    Eigen::MatrixXd final_matrix;   // A_{T-h} = M_h(1)
};

// Single pass over the series: O(T D^2) time, O(D^2) memory.
LagCovIntegral lagcov_norm_integral(const CoefficientSeries& series, int h);

// Same integral computed directly on grid samples (rectangle rule in tau as
// well); used to cross-check the coefficient backend on band-limited data.
LagCovIntegral lagcov_norm_integral(const FunctionalSeries& series, int h);

struct ClassicalStats {
    int H;
    Eigen::VectorXd norm;  // || M_h ||_{2,3}, h = 1..H
    Eigen::VectorXd stat;  // S_h = sqrt(T) * norm_h
    double max_stat;       // max over h <= H
};

// Portmanteau statistics for lags 1..H; requires 1 <= H < T.
ClassicalStats stat_classical(const CoefficientSeries& series, int H);
ClassicalStats stat_classical(const FunctionalSeries& series, int H);

struct RelevantStats {
    int H;
    Eigen::VectorXd delta;
    Eigen::VectorXd norm;
    Eigen::VectorXd stat;  // sqrt(T) * (norm_h - delta_h) * norm_h
    double max_stat;
};

// Relevant-hypothesis statistics against thresholds delta_h > 0. The per-lag
// statistic carries a factor norm_h so that it is on the same scale as the
// bootstrap inner product <M_h, B_h>.
RelevantStats stat_relevant(const CoefficientSeries& series, int H,
                            const Eigen::VectorXd& delta);

}  // namespace ftscorr

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "ftscorr/basis.hpp"
#include "ftscorr/lagcov.hpp"

namespace ftscorr {

// Centering bandwidth: either "global" (n = T, valid under second-order
// stationarity) or a fixed window half-width.
struct BandwidthSpec {
    bool global = true;
    int n = 0;

    static BandwidthSpec make_global() { return BandwidthSpec{true, 0}; }
    static BandwidthSpec fixed(int n) { return BandwidthSpec{false, n}; }

    int resolve(int T) const { return global ? T : n; }
};

struct BootstrapConfig {
    int replicates = 200;       // K
    int block_length = 0;       // m; 0 means default_block_length(T)
    BandwidthSpec bandwidth = BandwidthSpec::make_global();
    double alpha = 0.05;
    std::uint64_t master_seed = 0;
    int threads = 0;            // execution detail only; 0 = auto
};

// Default block length max(1, floor(T^(1/3))), computed in integer
// arithmetic so cube-root rounding cannot shift the floor.
int default_block_length(int T);

// Default centering bandwidth for the locally stationary mode:
// max(1, floor(T^(2/3))).
int default_local_bandwidth(int T);

// Local product-moment mean around time t (1-based, 1 <= t <= T-h):
// the average of a_s a_{s+h}^T over s in [max(1, t-n), min(T-h, t+n)].
// With n = T this is the global mean over s = 1..T-h for every t.
Eigen::MatrixXd local_product_moment(const CoefficientSeries& series, int h, int n, int t);

// Row-major so that per-time rows are contiguous for flat vec() views.
using RowMajorMatrixXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Precomputed per-lag quantities shared by all bootstrap replicates.
// Block sums of centered products, rows indexed by block start i (1..L):
//   C_i = sum_{t=i}^{(i+m-1) ^ L} (a_t a_{t+h}^T - mu_{t,h,n,T}),  L = T-h,
// stored flattened as L x D^2. The bootstrap process is
//   B_h(u) = (1/sqrt(T)) sum_{i=1}^{floor(uT) ^ L} (R_i / sqrt(m)) C_i,
// and `gamma` holds weights such that <M_h, B_h> = sum_i R_i gamma_i.
struct LagPlan {
    int h;
    int L;
    double observed_norm;        // || M_h ||_{2,3}
    RowMajorMatrixXd blocks;     // L x D^2, row i-1 = vec(C_i)
    Eigen::VectorXd gamma;       // L
};

struct BootstrapPlan {
    int T;
    int dim;
    int H;
    int block_length;
    int bandwidth;               // resolved (n = T when global)
    std::vector<LagPlan> lags;
};

// Validates 1 <= m <= T, 1 <= n <= T, 1 <= H < T, then builds the plan in
// O(H T D^2) using prefix sums over the product sequence.
BootstrapPlan build_bootstrap_plan(const CoefficientSeries& series, int H,
                                   const BootstrapConfig& cfg);

struct LagReplicate {
    double norm;    // || B_h ||_{2,3}
    double inner;   // < M_h, B_h >
};

// One bootstrap replicate for every lag in the plan; multipliers must supply
// at least T values (entries 1..L are used for lag h). O(T D^2) per lag.
std::vector<LagReplicate> bootstrap_replicate(const BootstrapPlan& plan,
                                              const Eigen::Ref<const Eigen::VectorXd>& multipliers);

// Convenience overload matching the one-shot signature.
std::vector<LagReplicate> bootstrap_replicate(const CoefficientSeries& series, int H,
                                              const BootstrapConfig& cfg,
                                              const Eigen::Ref<const Eigen::VectorXd>& multipliers);

// Weights for the inner product of the bootstrap process with a fixed test
// function f that is constant in u, given as the D x D coefficient matrix F:
// <f, B_h> = sum_i R_i * w_i with w_i = <F, C_i>_F * (T - i) / (T^{3/2} sqrt(m)).
Eigen::VectorXd functional_inner_weights(const BootstrapPlan& plan, int lag_index,
                                         const Eigen::Ref<const Eigen::MatrixXd>& f_coef);

struct TestMeta {
    int T;
    int dim;
    int H;
    int block_length;
    int bandwidth;
    int replicates;
    double alpha;
    std::uint64_t seed;
};

struct TestResult {
    TestMeta meta;
    ClassicalStats classical;
    std::optional<RelevantStats> relevant;
    Eigen::MatrixXd boot_norm;        // K x H: || B_h ||_{2,3} per replicate
    Eigen::MatrixXd boot_inner;       // K x H: < M_h, B_h > per replicate
    Eigen::VectorXd p_classical_by_lag;  // p-value of the max statistic over lags 1..H'
    Eigen::VectorXd p_relevant_by_lag;   // empty when no thresholds were supplied
    double p_classical;
    double p_relevant;                // NaN when no thresholds were supplied
    bool reject;
};

// Classical portmanteau test: K multiplier replicates, p = fraction of
// replicates whose max_h ||B_h|| is >= sqrt(T) max_h ||M_h|| (ties count
// toward non-rejection), reject iff p < alpha. Multiplier vectors come from
// per-replicate substreams of master_seed, so the result is bit-identical
// across thread counts.
TestResult run_portmanteau_test(const CoefficientSeries& series, int H,
                                const BootstrapConfig& cfg);

// Relevant-hypothesis test against thresholds delta_h > 0; requires
// alpha < 1/2. Also fills the classical diagnostics, which share the plan.
TestResult run_relevant_test(const CoefficientSeries& series, int H,
                             const Eigen::VectorXd& delta, const BootstrapConfig& cfg);

}  // namespace ftscorr

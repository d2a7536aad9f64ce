#include "ftscorr/bootstrap.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ftscorr/parallel.hpp"
#include "ftscorr/rng.hpp"

namespace ftscorr {

namespace {

// Largest r with r^3 <= v, computed without floating-point cube roots.
int integer_cbrt_floor(long long v) {
    int r = static_cast<int>(std::cbrt(static_cast<double>(v)));
    while (static_cast<long long>(r) * r * r > v) --r;
    while (static_cast<long long>(r + 1) * (r + 1) * (r + 1) <= v) ++r;
    return r;
}

}  // namespace

int default_block_length(int T) {
    if (T < 1) throw std::invalid_argument("series length must be positive");
    return std::max(1, integer_cbrt_floor(T));
}

int default_local_bandwidth(int T) {
    if (T < 1) throw std::invalid_argument("series length must be positive");
    return std::max(1, integer_cbrt_floor(static_cast<long long>(T) * T));
}

Eigen::MatrixXd local_product_moment(const CoefficientSeries& series, int h, int n, int t) {
    const int T = series.length();
    const int D = series.dim();
    if (h < 1) throw std::invalid_argument("lag must be positive");
    if (n < 1) throw std::invalid_argument("bandwidth must be positive");
    if (t < 1 || t > T - h) throw std::invalid_argument("time index must lie in [1, T - h]");
    const int lo = std::max(1, t - n);
    const int hi = std::min(T - h, t + n);
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(D, D);
    for (int s = lo; s <= hi; ++s)
        sum.noalias() += series.coef.row(s - 1).transpose() * series.coef.row(s - 1 + h);
    return sum / (hi - lo + 1);
}

BootstrapPlan build_bootstrap_plan(const CoefficientSeries& series, int H,
                                   const BootstrapConfig& cfg) {
    const int T = series.length();
    const int D = series.dim();
    if (H < 1 || H >= T) throw std::invalid_argument("lag count must satisfy 1 <= H < T");
    const int m = cfg.block_length > 0 ? cfg.block_length : default_block_length(T);
    if (m < 1 || m > T) throw std::invalid_argument("block length must lie in [1, T]");
    const int n = cfg.bandwidth.resolve(T);
    if (n < 1 || n > T) throw std::invalid_argument("bandwidth must lie in [1, T]");

    BootstrapPlan plan;
    plan.T = T;
    plan.dim = D;
    plan.H = H;
    plan.block_length = m;
    plan.bandwidth = n;
    plan.lags.reserve(H);

    const double Td = static_cast<double>(T);
    const double gamma_scale = 1.0 / (Td * Td * std::sqrt(Td) * std::sqrt(static_cast<double>(m)));

    for (int h = 1; h <= H; ++h) {
        const int L = T - h;
        LagPlan lag;
        lag.h = h;
        lag.L = L;

        // Prefix sums of the product sequence: row i-1 of P is
        // sum_{t<=i} vec(a_t a_{t+h}^T) = T * A_i.
        RowMajorMatrixXd P(L, D * D);
        for (int i = 0; i < L; ++i) {
            Eigen::Map<Eigen::MatrixXd> row(P.row(i).data(), D, D);
            row.noalias() = series.coef.row(i).transpose() * series.coef.row(i + h);
            if (i > 0) P.row(i) += P.row(i - 1);
        }

        // || M_h ||^2 = (1/T^3) * (sum_{s<=L} ||P_s||^2 + (h-1) ||P_L||^2):
        // the process is constant in u past s = L, contributing h-1 more
        // copies of the final partial sum to the rectangle rule.
        double acc = 0.0;
        for (int i = 0; i < L; ++i) acc += P.row(i).squaredNorm();
        acc += (h - 1) * P.row(L - 1).squaredNorm();
        lag.observed_norm = std::sqrt(acc / (Td * Td * Td));

        // Centered products y_t = w_t - mu_{t,h,n,T} accumulated into prefix
        // sums Q, then block sums C_i = Q_{(i+m-1)^L} - Q_{i-1}.
        RowMajorMatrixXd Q(L, D * D);
        for (int t = 0; t < L; ++t) {
            const int lo = std::max(0, t - n);
            const int hi = std::min(L - 1, t + n);
            const double count = hi - lo + 1;
            Q.row(t) = P.row(t);
            if (t > 0) Q.row(t) -= P.row(t - 1);       // w_t
            Q.row(t) -= P.row(hi) / count;             // - window mean
            if (lo > 0) Q.row(t) += P.row(lo - 1) / count;
            if (t > 0) Q.row(t) += Q.row(t - 1);
        }
        lag.blocks.resize(L, D * D);
        for (int i = 0; i < L; ++i) {
            const int hi = std::min(L - 1, i + m - 1);
            lag.blocks.row(i) = Q.row(hi);
            if (i > 0) lag.blocks.row(i) -= Q.row(i - 1);
        }

        // gamma_i = <D_i, C_i>_F / (T^{3/2} sqrt(m)) with the suffix sums
        // D_i = sum_{s=i}^{T-1} A_{s^L}, built backward from D_L = h * A_L.
        // In P units (A = P/T) the scale absorbs one more factor 1/T.
        lag.gamma.resize(L);
        Eigen::RowVectorXd suffix = static_cast<double>(h) * P.row(L - 1);
        lag.gamma[L - 1] = suffix.dot(lag.blocks.row(L - 1)) * gamma_scale;
        for (int i = L - 2; i >= 0; --i) {
            suffix += P.row(i);
            lag.gamma[i] = suffix.dot(lag.blocks.row(i)) * gamma_scale;
        }

        plan.lags.push_back(std::move(lag));
    }
    return plan;
}

std::vector<LagReplicate> bootstrap_replicate(const BootstrapPlan& plan,
                                              const Eigen::Ref<const Eigen::VectorXd>& multipliers) {
    if (multipliers.size() < plan.T)
        throw std::invalid_argument("multiplier vector must supply at least T values");
    const double Td = static_cast<double>(plan.T);
    const double norm_scale = 1.0 / (Td * std::sqrt(static_cast<double>(plan.block_length)));
    std::vector<LagReplicate> out;
    out.reserve(plan.lags.size());
    for (const LagPlan& lag : plan.lags) {
        // Running sum over blocks is sqrt(T m) * B_h(s/T); accumulate its
        // squared norm over s = 1..L plus the constant tail, as in the
        // observed-norm integral.
        Eigen::RowVectorXd bacc = Eigen::RowVectorXd::Zero(plan.dim * plan.dim);
        double nacc = 0.0;
        for (int i = 0; i < lag.L; ++i) {
            bacc += multipliers[i] * lag.blocks.row(i);
            nacc += bacc.squaredNorm();
        }
        nacc += (lag.h - 1) * bacc.squaredNorm();
        const double inner = lag.gamma.dot(multipliers.head(lag.L));
        out.push_back(LagReplicate{std::sqrt(nacc) * norm_scale, inner});
    }
    return out;
}

std::vector<LagReplicate> bootstrap_replicate(const CoefficientSeries& series, int H,
                                              const BootstrapConfig& cfg,
                                              const Eigen::Ref<const Eigen::VectorXd>& multipliers) {
    return bootstrap_replicate(build_bootstrap_plan(series, H, cfg), multipliers);
}

Eigen::VectorXd functional_inner_weights(const BootstrapPlan& plan, int lag_index,
                                         const Eigen::Ref<const Eigen::MatrixXd>& f_coef) {
    if (lag_index < 0 || lag_index >= static_cast<int>(plan.lags.size()))
        throw std::invalid_argument("lag index out of range");
    if (f_coef.rows() != plan.dim || f_coef.cols() != plan.dim)
        throw std::invalid_argument("test function dimensions must match the series");
    const LagPlan& lag = plan.lags[lag_index];
    const double Td = static_cast<double>(plan.T);
    const double scale = 1.0 / (Td * std::sqrt(Td) * std::sqrt(static_cast<double>(plan.block_length)));
    const Eigen::Map<const Eigen::RowVectorXd> f_vec(f_coef.data(), plan.dim * plan.dim);
    Eigen::VectorXd w(lag.L);
    // f is constant in u, so block i contributes over s = i..T-1: T-i terms.
    for (int i = 0; i < lag.L; ++i)
        w[i] = f_vec.dot(lag.blocks.row(i)) * (Td - (i + 1)) * scale;
    return w;
}

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
}

// Shared engine for both tests: one plan, K replicates, prefix-max p-values
// for every H' <= H so a single run serves nested lag ranges.
TestResult run_tests(const CoefficientSeries& series, int H, const BootstrapConfig& cfg,
                     const Eigen::VectorXd* delta) {
    check_alpha(cfg.alpha);
    if (cfg.replicates < 1) throw std::invalid_argument("replicate count must be positive");
    if (delta != nullptr) {
        if (cfg.alpha >= 0.5)
            throw std::invalid_argument("relevant tests require alpha < 1/2");
        if (delta->size() != H)
            throw std::invalid_argument("threshold vector length must equal the lag count");
        if ((delta->array() <= 0.0).any())
            throw std::invalid_argument("thresholds must be positive");
    }

    const BootstrapPlan plan = build_bootstrap_plan(series, H, cfg);
    const int T = plan.T;
    const int K = cfg.replicates;
    const double root_T = std::sqrt(static_cast<double>(T));

    TestResult result;
    result.meta = TestMeta{T, plan.dim, H, plan.block_length, plan.bandwidth,
                           K, cfg.alpha, cfg.master_seed};
    result.classical.H = H;
    result.classical.norm.resize(H);
    result.classical.stat.resize(H);
    for (int h = 1; h <= H; ++h) {
        result.classical.norm[h - 1] = plan.lags[h - 1].observed_norm;
        result.classical.stat[h - 1] = root_T * plan.lags[h - 1].observed_norm;
    }
    result.classical.max_stat = result.classical.stat.maxCoeff();
    if (delta != nullptr) {
        RelevantStats rel;
        rel.H = H;
        rel.delta = *delta;
        rel.norm = result.classical.norm;
        rel.stat.resize(H);
        for (int h = 1; h <= H; ++h)
            rel.stat[h - 1] = root_T * (rel.norm[h - 1] - (*delta)[h - 1]) * rel.norm[h - 1];
        rel.max_stat = rel.stat.maxCoeff();
        result.relevant = std::move(rel);
    }

    result.boot_norm.resize(K, H);
    result.boot_inner.resize(K, H);
    parallel_for_index(static_cast<std::size_t>(K), resolve_worker_count(cfg.threads),
                       [&](std::size_t k) {
                           auto engine = make_engine(cfg.master_seed, kStreamMultiplier, k);
                           std::normal_distribution<double> normal(0.0, 1.0);
                           Eigen::VectorXd R(T);
                           for (int i = 0; i < T; ++i) R[i] = normal(engine);
                           const auto reps = bootstrap_replicate(plan, R);
                           for (int h = 0; h < H; ++h) {
                               result.boot_norm(k, h) = reps[h].norm;
                               result.boot_inner(k, h) = reps[h].inner;
                           }
                       });

    // p-value for each nested lag range 1..H': compare running maxima.
    result.p_classical_by_lag.resize(H);
    Eigen::VectorXd obs_cummax(H);
    double run = -std::numeric_limits<double>::infinity();
    for (int h = 0; h < H; ++h) {
        run = std::max(run, result.classical.stat[h]);
        obs_cummax[h] = run;
    }
    Eigen::VectorXi counts = Eigen::VectorXi::Zero(H);
    for (int k = 0; k < K; ++k) {
        double boot_run = -std::numeric_limits<double>::infinity();
        for (int h = 0; h < H; ++h) {
            boot_run = std::max(boot_run, result.boot_norm(k, h));
            if (boot_run >= obs_cummax[h]) ++counts[h];
        }
    }
    for (int h = 0; h < H; ++h)
        result.p_classical_by_lag[h] = static_cast<double>(counts[h]) / K;
    result.p_classical = result.p_classical_by_lag[H - 1];

    if (delta != nullptr) {
        result.p_relevant_by_lag.resize(H);
        run = -std::numeric_limits<double>::infinity();
        for (int h = 0; h < H; ++h) {
            run = std::max(run, result.relevant->stat[h]);
            obs_cummax[h] = run;
        }
        counts.setZero();
        for (int k = 0; k < K; ++k) {
            double boot_run = -std::numeric_limits<double>::infinity();
            for (int h = 0; h < H; ++h) {
                boot_run = std::max(boot_run, result.boot_inner(k, h));
                if (boot_run >= obs_cummax[h]) ++counts[h];
            }
        }
        for (int h = 0; h < H; ++h)
            result.p_relevant_by_lag[h] = static_cast<double>(counts[h]) / K;
        result.p_relevant = result.p_relevant_by_lag[H - 1];
        result.reject = result.p_relevant < cfg.alpha;
    } else {
        result.p_relevant = std::numeric_limits<double>::quiet_NaN();
        result.reject = result.p_classical < cfg.alpha;
    }
    return result;
}

}  // namespace

TestResult run_portmanteau_test(const CoefficientSeries& series, int H,
                                const BootstrapConfig& cfg) {
    return run_tests(series, H, cfg, nullptr);
}

TestResult run_relevant_test(const CoefficientSeries& series, int H,
                             const Eigen::VectorXd& delta, const BootstrapConfig& cfg) {
    return run_tests(series, H, cfg, &delta);
}

}  // namespace ftscorr

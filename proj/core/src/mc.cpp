#include "ftscorr/mc.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ftscorr/io.hpp"
#include "ftscorr/lagcov.hpp"
#include "ftscorr/parallel.hpp"
#include "ftscorr/rng.hpp"

namespace ftscorr {

namespace {

double binomial_se_pct(double rate_fraction, int reps) {
    return std::sqrt(rate_fraction * (1.0 - rate_fraction) / reps) * 100.0;
}

}  // namespace

McReport mc_rejection_rates(const McConfig& cfg) {
    if (cfg.reps < 1) throw std::invalid_argument("repetition count must be positive");
    if (cfg.H < 1) throw std::invalid_argument("lag count must be positive");
    const int W = cfg.delta ? static_cast<int>(cfg.delta->w.size()) : 0;
    if (cfg.delta) {
        if (cfg.delta->w.empty())
            throw std::invalid_argument("delta policy needs at least one scale factor");
        if (cfg.delta->norms.size() < cfg.H)
            throw std::invalid_argument("delta policy norm table is shorter than the lag count");
        if (cfg.boot.alpha >= 0.5)
            throw std::invalid_argument("relevant tests require alpha < 1/2");
        for (double w : cfg.delta->w)
            if (!(w > 0.0)) throw std::invalid_argument("delta scale factors must be positive");
        if ((cfg.delta->norms.head(cfg.H).array() <= 0.0).any())
            throw std::invalid_argument("norm table entries must be positive");
    }

    const Grid1D grid = make_uniform_grid(cfg.grid_m);
    const double root_T = std::sqrt(static_cast<double>(cfg.T));

    Eigen::MatrixXi classical(cfg.reps, cfg.H);
    Eigen::MatrixXi relevant(cfg.reps, W * cfg.H);

    parallel_for_index(
        static_cast<std::size_t>(cfg.reps), resolve_worker_count(cfg.boot.threads),
        [&](std::size_t rep) {
            ModelSpec spec;
            spec.id = cfg.model;
            spec.T = cfg.T;
            spec.grid = grid;
            spec.seed = derive_seed(cfg.boot.master_seed, kStreamData, rep);
            const CoefficientSeries coef =
                project_fourier(gen_model(spec), cfg.basis_dim);

            BootstrapConfig boot = cfg.boot;
            boot.master_seed = derive_seed(cfg.boot.master_seed, kStreamRepetition, rep);
            boot.threads = 1;  // repetitions are the parallel unit
            const TestResult result = run_portmanteau_test(coef, cfg.H, boot);

            for (int h = 0; h < cfg.H; ++h)
                classical(rep, h) = result.p_classical_by_lag[h] < boot.alpha ? 1 : 0;

            if (cfg.delta) {
                // All thresholds share the bootstrap replicates: only the
                // observed statistic depends on w.
                const int K = boot.replicates;
                for (int wi = 0; wi < W; ++wi) {
                    const double w = cfg.delta->w[wi];
                    double obs_run = -std::numeric_limits<double>::infinity();
                    Eigen::VectorXd obs_cummax(cfg.H);
                    for (int h = 0; h < cfg.H; ++h) {
                        const double norm = result.classical.norm[h];
                        const double stat =
                            root_T * (norm - w * cfg.delta->norms[h]) * norm;
                        obs_run = std::max(obs_run, stat);
                        obs_cummax[h] = obs_run;
                    }
                    Eigen::VectorXi counts = Eigen::VectorXi::Zero(cfg.H);
                    for (int k = 0; k < K; ++k) {
                        double boot_run = -std::numeric_limits<double>::infinity();
                        for (int h = 0; h < cfg.H; ++h) {
                            boot_run = std::max(boot_run, result.boot_inner(k, h));
                            if (boot_run >= obs_cummax[h]) ++counts[h];
                        }
                    }
                    for (int h = 0; h < cfg.H; ++h) {
                        const double p = static_cast<double>(counts[h]) / K;
                        relevant(rep, wi * cfg.H + h) = p < boot.alpha ? 1 : 0;
                    }
                }
            }
        });

    McReport report;
    report.model = cfg.model;
    report.T = cfg.T;
    report.H = cfg.H;
    report.reps = cfg.reps;
    report.replicates = cfg.boot.replicates;
    report.block_length =
        cfg.boot.block_length > 0 ? cfg.boot.block_length : default_block_length(cfg.T);
    report.bandwidth = cfg.boot.bandwidth.resolve(cfg.T);
    report.bandwidth_global = cfg.boot.bandwidth.global;
    report.alpha = cfg.boot.alpha;
    report.reject_pct.resize(cfg.H);
    report.se_pct.resize(cfg.H);
    for (int h = 0; h < cfg.H; ++h) {
        const double rate = classical.col(h).cast<double>().mean();
        report.reject_pct[h] = rate * 100.0;
        report.se_pct[h] = binomial_se_pct(rate, cfg.reps);
    }
    if (cfg.delta) {
        report.w = cfg.delta->w;
        report.rel_reject_pct.resize(W, cfg.H);
        report.rel_se_pct.resize(W, cfg.H);
        for (int wi = 0; wi < W; ++wi) {
            for (int h = 0; h < cfg.H; ++h) {
                const double rate = relevant.col(wi * cfg.H + h).cast<double>().mean();
                report.rel_reject_pct(wi, h) = rate * 100.0;
                report.rel_se_pct(wi, h) = binomial_se_pct(rate, cfg.reps);
            }
        }
    }
    return report;
}

NormTable estimate_norm_table(const std::function<CoefficientSeries(std::uint64_t)>& gen,
                              int H, int reps, int threads) {
    if (reps < 1) throw std::invalid_argument("repetition count must be positive");
    if (H < 1) throw std::invalid_argument("lag count must be positive");
    Eigen::MatrixXd norms(reps, H);
    int T = 0;
    int D = 0;
    parallel_for_index(static_cast<std::size_t>(reps), resolve_worker_count(threads),
                       [&](std::size_t rep) {
                           const CoefficientSeries coef = gen(rep);
                           if (rep == 0) {
                               T = coef.length();
                               D = coef.dim();
                           }
                           for (int h = 1; h <= H; ++h)
                               norms(rep, h - 1) = lagcov_norm_integral(coef, h).norm;
                       });
    NormTable table;
    table.T = T;
    table.dim = D;
    table.H = H;
    table.reps = reps;
    table.mean = norms.colwise().mean();
    table.variance.resize(H);
    for (int h = 0; h < H; ++h) {
        if (reps < 2) {
            table.variance[h] = 0.0;
            continue;
        }
        table.variance[h] =
            (norms.col(h).array() - table.mean[h]).square().sum() / (reps - 1);
    }
    return table;
}

NormTable estimate_norm_table(ModelId model, int T, int D, int H, int reps,
                              int grid_m, std::uint64_t seed, int threads) {
    const Grid1D grid = make_uniform_grid(grid_m);
    auto gen = [=](std::uint64_t rep) {
        ModelSpec spec;
        spec.id = model;
        spec.T = T;
        spec.grid = grid;
        spec.seed = derive_seed(seed, kStreamData, rep);
        return project_fourier(gen_model(spec), D);
    };
    return estimate_norm_table(gen, H, reps, threads);
}

void write_norm_table(std::ostream& out, const NormTable& table) {
    out << "# norm table\tT=" << table.T << "\tD=" << table.dim
        << "\treps=" << table.reps << '\n';
    out << "h\tmean_norm\tvar_norm\n";
    char buf[40];
    for (int h = 1; h <= table.H; ++h) {
        std::snprintf(buf, sizeof(buf), "%.17g", table.mean[h - 1]);
        out << h << '\t' << buf;
        std::snprintf(buf, sizeof(buf), "%.17g", table.variance[h - 1]);
        out << '\t' << buf << '\n';
    }
}

void write_norm_table(const std::string& path, const NormTable& table) {
    std::ofstream file(path);
    if (!file) throw io_error("cannot open file for writing: " + path);
    write_norm_table(file, table);
    if (!file) throw io_error("write failed: " + path);
}

NormTable read_norm_table(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw io_error("cannot open file: " + path);
    NormTable table;
    table.T = 0;
    table.dim = 0;
    table.reps = 0;
    std::vector<double> mean;
    std::vector<double> variance;
    std::string line;
    int lineno = 0;
    while (std::getline(file, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream stream(line.substr(1));
            std::string tok;
            while (stream >> tok) {
                if (tok.rfind("T=", 0) == 0) table.T = std::atoi(tok.c_str() + 2);
                if (tok.rfind("D=", 0) == 0) table.dim = std::atoi(tok.c_str() + 2);
                if (tok.rfind("reps=", 0) == 0) table.reps = std::atoi(tok.c_str() + 5);
            }
            continue;
        }
        std::istringstream stream(line);
        int h;
        double m, v;
        if (!(stream >> h)) continue;  // column header line
        if (!(stream >> m)) {
            std::ostringstream msg;
            msg << "norm table line " << lineno << ": expected h, mean[, var]";
            throw io_error(msg.str());
        }
        if (!(stream >> v)) v = 0.0;
        if (h != static_cast<int>(mean.size()) + 1) {
            std::ostringstream msg;
            msg << "norm table line " << lineno << ": lags must be consecutive from 1";
            throw io_error(msg.str());
        }
        mean.push_back(m);
        variance.push_back(v);
    }
    if (mean.empty()) throw io_error("norm table contains no rows: " + path);
    table.H = static_cast<int>(mean.size());
    table.mean = Eigen::Map<Eigen::VectorXd>(mean.data(), table.H);
    table.variance = Eigen::Map<Eigen::VectorXd>(variance.data(), table.H);
    return table;
}

}  // namespace ftscorr

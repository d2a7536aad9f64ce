#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ftscorr/basis.hpp"
#include "ftscorr/bootstrap.hpp"
#include "ftscorr/simmodels.hpp"

namespace ftscorr {

// Relevant-hypothesis thresholds for the Monte Carlo runner: delta_h = w * norms_h
// for each scale factor w.
struct DeltaPolicy {
    std::vector<double> w;
    Eigen::VectorXd norms;  // per lag 1..H
};

struct McConfig {
    ModelId model;
    int T;
    int H;
    int reps;
    int grid_m = 200;
    int basis_dim = 17;
    BootstrapConfig boot;
    std::optional<DeltaPolicy> delta;
};

struct McReport {
    ModelId model;
    int T;
    int H;
    int reps;
    int replicates;              // K
    int block_length;            // resolved
    int bandwidth;               // resolved (n = T when global)
    bool bandwidth_global;
    double alpha;
    Eigen::VectorXd reject_pct;  // per H' = 1..H, classical test
    Eigen::VectorXd se_pct;      // binomial standard error, percent
    std::vector<double> w;                // from the delta policy, possibly empty
    Eigen::MatrixXd rel_reject_pct;       // |w| x H
    Eigen::MatrixXd rel_se_pct;
};

// Runs cfg.reps independent repetitions: simulate, project, test; reports
// rejection percentages for every H' <= H (classical, and relevant for each
// w when a delta policy is given; all read off one bootstrap run per
// repetition). Repetition r uses data substream r and an independent
// bootstrap substream, so reports are reproducible and thread-count
// independent.
McReport mc_rejection_rates(const McConfig& cfg);

struct NormTable {
    int T;
    int dim;
    int H;
    int reps;
    Eigen::VectorXd mean;      // mean of || M_h ||_{2,3} over repetitions
    Eigen::VectorXd variance;  // empirical variance over repetitions
};

// Monte Carlo estimate of E|| M_h ||_{2,3} for lags 1..H over `reps`
// generated series. The generic overload takes a generator mapping a
// repetition index to a coefficient series.
NormTable estimate_norm_table(const std::function<CoefficientSeries(std::uint64_t)>& gen,
                              int H, int reps, int threads = 0);
NormTable estimate_norm_table(ModelId model, int T, int D, int H, int reps,
                              int grid_m = 200, std::uint64_t seed = 0, int threads = 0);

// Norm-table file format: TSV columns h, mean_norm, var_norm (header line
// included); read back for --delta w:file.
void write_norm_table(std::ostream& out, const NormTable& table);
void write_norm_table(const std::string& path, const NormTable& table);
NormTable read_norm_table(const std::string& path);

}  // namespace ftscorr

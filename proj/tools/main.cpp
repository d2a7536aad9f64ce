#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ftscorr/basis.hpp"
#include "ftscorr/bootstrap.hpp"
#include "ftscorr/io.hpp"
#include "ftscorr/mc.hpp"
#include "ftscorr/simmodels.hpp"

namespace {

using nlohmann::ordered_json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string fmt2(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

struct CommonOpts {
    int lags = 4;
    int boot = 200;
    int block = 0;  // 0: T^(1/3) rule
    std::string bandwidth = "global";
    double alpha = 0.05;
    std::string delta;
    int basis_dim = 17;
    std::uint64_t seed = 0;
    std::string demean = "none";
    int threads = 0;
    std::string out = "tsv";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--lags", o.lags, "Number of lags H");
    cmd->add_option("--boot", o.boot, "Bootstrap replicates K");
    cmd->add_option("--block", o.block, "Block length m (default: T^(1/3) rule)");
    cmd->add_option("--bandwidth", o.bandwidth,
                    "Centering bandwidth: global, auto (T^(2/3)), or an integer");
    cmd->add_option("--alpha", o.alpha, "Test level");
    cmd->add_option("--delta", o.delta,
                    "Relevant-test thresholds w:file (w scales a norm table; "
                    "comma-separated w list allowed for mc)");
    cmd->add_option("--basis-dim", o.basis_dim, "Fourier basis dimension D (odd)");
    cmd->add_option("--seed", o.seed, "Master seed");
    cmd->add_option("--demean", o.demean, "Preprocessing: none, global, or local:n");
    cmd->add_option("--threads", o.threads,
                    "Worker threads (default: FTSCORR_THREADS or hardware)");
    cmd->add_option("--out", o.out, "Output format: tsv or json");
}

ftscorr::BandwidthSpec parse_bandwidth(const std::string& s, int T) {
    if (s == "global") return ftscorr::BandwidthSpec::make_global();
    if (s == "auto") return ftscorr::BandwidthSpec::fixed(ftscorr::default_local_bandwidth(T));
    try {
        std::size_t pos = 0;
        const int n = std::stoi(s, &pos);
        if (pos == s.size()) return ftscorr::BandwidthSpec::fixed(n);
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("--bandwidth must be 'global', 'auto', or an integer");
}

struct DeltaSpec {
    std::vector<double> w;
    std::string path;
};

std::optional<DeltaSpec> parse_delta(const std::string& s) {
    if (s.empty()) return std::nullopt;
    const auto colon = s.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == s.size())
        throw std::invalid_argument("--delta must look like w:file or w1,w2:file");
    DeltaSpec spec;
    spec.path = s.substr(colon + 1);
    std::string list = s.substr(0, colon);
    std::size_t start = 0;
    while (start <= list.size()) {
        const auto comma = list.find(',', start);
        const std::string tok = list.substr(start, comma - start);
        try {
            std::size_t pos = 0;
            const double w = std::stod(tok, &pos);
            if (pos != tok.size() || !(w > 0.0)) throw std::invalid_argument("");
            spec.w.push_back(w);
        } catch (const std::exception&) {
            throw std::invalid_argument("--delta scale '" + tok + "' is not a positive number");
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return spec;
}

struct DemeanSpec {
    ftscorr::DemeanMode mode = ftscorr::DemeanMode::none;
    int n = 0;
};

DemeanSpec parse_demean(const std::string& s) {
    if (s == "none") return {};
    if (s == "global") return {ftscorr::DemeanMode::global, 0};
    if (s.rfind("local:", 0) == 0) {
        try {
            std::size_t pos = 0;
            const std::string arg = s.substr(6);
            const int n = std::stoi(arg, &pos);
            if (pos == arg.size() && n >= 1) return {ftscorr::DemeanMode::local, n};
        } catch (const std::exception&) {
        }
    }
    throw std::invalid_argument("--demean must be none, global, or local:n");
}

void warn_bandwidth_regime(const ftscorr::BootstrapConfig& cfg, int T) {
    if (cfg.bandwidth.global) return;
    const int m = cfg.block_length > 0 ? cfg.block_length : ftscorr::default_block_length(T);
    const int n = cfg.bandwidth.resolve(T);
    if (!(m < n && n < T))
        std::cerr << "warning: block length m=" << m << ", bandwidth n=" << n
                  << ", T=" << T << " violate m < n < T; results may be unreliable\n";
}

int cmd_test(const CommonOpts& o, const std::string& file, bool ci, bool prices) {
    const auto demean = parse_demean(o.demean);
    const auto delta_spec = parse_delta(o.delta);
    if (delta_spec && delta_spec->w.size() != 1)
        throw std::invalid_argument("test accepts a single w in --delta");

    const ftscorr::CurveTable table = ftscorr::load_curves(file);
    for (const auto& w : table.warnings) std::cerr << "warning: " << w << '\n';
    ftscorr::FunctionalSeries series =
        prices ? ftscorr::intraday_returns(table) : ftscorr::to_functional_series(table);
    if (demean.mode != ftscorr::DemeanMode::none) {
        std::cerr << "note: demeaning deviates from the centered-data assumption\n";
        series = ftscorr::demean_series(series, demean.mode, demean.n);
    }
    const ftscorr::CoefficientSeries coef = ftscorr::project_fourier(series, o.basis_dim);
    const int T = coef.length();

    ftscorr::BootstrapConfig cfg;
    cfg.replicates = o.boot;
    cfg.block_length = o.block;
    cfg.bandwidth = parse_bandwidth(o.bandwidth, T);
    cfg.alpha = o.alpha;
    cfg.master_seed = o.seed;
    cfg.threads = o.threads;
    warn_bandwidth_regime(cfg, T);

    ftscorr::TestResult result;
    if (delta_spec) {
        const ftscorr::NormTable norms = ftscorr::read_norm_table(delta_spec->path);
        if (norms.H < o.lags)
            throw std::invalid_argument("norm table has fewer lags than --lags");
        const Eigen::VectorXd delta = delta_spec->w[0] * norms.mean.head(o.lags);
        result = ftscorr::run_relevant_test(coef, o.lags, delta, cfg);
    } else {
        result = ftscorr::run_portmanteau_test(coef, o.lags, cfg);
    }

    const auto& meta = result.meta;
    if (o.out == "json") {
        ordered_json j;
        j["command"] = "test";
        j["T"] = meta.T;
        j["D"] = meta.dim;
        j["H"] = meta.H;
        j["block"] = meta.block_length;
        j["bandwidth"] = meta.bandwidth;
        j["bandwidth_global"] = cfg.bandwidth.global;
        j["K"] = meta.replicates;
        j["alpha"] = meta.alpha;
        j["seed"] = meta.seed;
        j["lags"] = ordered_json::array();
        for (int h = 1; h <= meta.H; ++h) {
            ordered_json row;
            row["h"] = h;
            row["norm"] = result.classical.norm[h - 1];
            row["stat"] = result.classical.stat[h - 1];
            row["p_upto"] = result.p_classical_by_lag[h - 1];
            if (result.relevant) {
                row["delta"] = result.relevant->delta[h - 1];
                row["stat_rel"] = result.relevant->stat[h - 1];
                row["p_rel_upto"] = result.p_relevant_by_lag[h - 1];
            }
            j["lags"].push_back(row);
        }
        j["p_classical"] = result.p_classical;
        if (result.relevant) j["p_relevant"] = result.p_relevant;
        j["reject"] = result.reject;
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "# ftscorr test\tT=" << meta.T << "\tD=" << meta.dim
                  << "\tH=" << meta.H << "\tblock=" << meta.block_length
                  << "\tbandwidth=" << (cfg.bandwidth.global ? "global" : std::to_string(meta.bandwidth))
                  << "\tK=" << meta.replicates << "\talpha=" << fmt(meta.alpha)
                  << "\tseed=" << meta.seed << '\n';
        std::cout << "h\tnorm\tstat\tp_upto";
        if (result.relevant) std::cout << "\tdelta\tstat_rel\tp_rel_upto";
        std::cout << '\n';
        for (int h = 1; h <= meta.H; ++h) {
            std::cout << h << '\t' << fmt(result.classical.norm[h - 1]) << '\t'
                      << fmt(result.classical.stat[h - 1]) << '\t'
                      << fmt(result.p_classical_by_lag[h - 1]);
            if (result.relevant)
                std::cout << '\t' << fmt(result.relevant->delta[h - 1]) << '\t'
                          << fmt(result.relevant->stat[h - 1]) << '\t'
                          << fmt(result.p_relevant_by_lag[h - 1]);
            std::cout << '\n';
        }
        std::cout << "# p_classical\t" << fmt(result.p_classical) << '\n';
        if (result.relevant) std::cout << "# p_relevant\t" << fmt(result.p_relevant) << '\n';
        std::cout << "# decision\t" << (result.reject ? "reject" : "retain") << '\n';
    }
    return ci && result.reject ? 1 : 0;
}

int cmd_simulate(const CommonOpts& o, const std::string& model, int T, int grid_m,
                 int burn_in, const std::string& out_file) {
    ftscorr::ModelSpec spec;
    spec.id = ftscorr::parse_model_id(model);
    spec.T = T;
    spec.grid = ftscorr::make_uniform_grid(grid_m);
    spec.burn_in = burn_in;
    spec.seed = o.seed;
    const ftscorr::FunctionalSeries series = ftscorr::gen_model(spec);
    if (out_file.empty())
        ftscorr::write_curves(std::cout, series);
    else
        ftscorr::write_curves(out_file, series);
    return 0;
}

int cmd_mc(const CommonOpts& o, const std::string& model, int T, int reps, int grid_m) {
    const auto delta_spec = parse_delta(o.delta);

    ftscorr::McConfig cfg;
    cfg.model = ftscorr::parse_model_id(model);
    cfg.T = T;
    cfg.H = o.lags;
    cfg.reps = reps;
    cfg.grid_m = grid_m;
    cfg.basis_dim = o.basis_dim;
    cfg.boot.replicates = o.boot;
    cfg.boot.block_length = o.block;
    cfg.boot.bandwidth = parse_bandwidth(o.bandwidth, T);
    cfg.boot.alpha = o.alpha;
    cfg.boot.master_seed = o.seed;
    cfg.boot.threads = o.threads;
    warn_bandwidth_regime(cfg.boot, T);
    if (delta_spec) {
        const ftscorr::NormTable norms = ftscorr::read_norm_table(delta_spec->path);
        if (norms.H < o.lags)
            throw std::invalid_argument("norm table has fewer lags than --lags");
        cfg.delta = ftscorr::DeltaPolicy{delta_spec->w, norms.mean};
    }

    const ftscorr::McReport report = ftscorr::mc_rejection_rates(cfg);
    const std::string name = ftscorr::model_name(report.model);

    if (o.out == "json") {
        ordered_json j;
        j["command"] = "mc";
        j["model"] = name;
        j["T"] = report.T;
        j["H"] = report.H;
        j["reps"] = report.reps;
        j["K"] = report.replicates;
        j["block"] = report.block_length;
        j["bandwidth"] = report.bandwidth;
        j["bandwidth_global"] = report.bandwidth_global;
        j["alpha"] = report.alpha;
        j["seed"] = o.seed;
        j["classical"] = ordered_json::array();
        for (int h = 1; h <= report.H; ++h) {
            ordered_json row;
            row["H"] = h;
            row["rate_pct"] = report.reject_pct[h - 1];
            row["se_pct"] = report.se_pct[h - 1];
            j["classical"].push_back(row);
        }
        if (!report.w.empty()) {
            j["relevant"] = ordered_json::array();
            for (std::size_t wi = 0; wi < report.w.size(); ++wi) {
                for (int h = 1; h <= report.H; ++h) {
                    ordered_json row;
                    row["w"] = report.w[wi];
                    row["H"] = h;
                    row["rate_pct"] = report.rel_reject_pct(static_cast<int>(wi), h - 1);
                    row["se_pct"] = report.rel_se_pct(static_cast<int>(wi), h - 1);
                    j["relevant"].push_back(row);
                }
            }
        }
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "# ftscorr mc\tmodel=" << name << "\tT=" << report.T
                  << "\tgrid_m=" << grid_m << "\tD=" << o.basis_dim
                  << "\treps=" << report.reps << "\tK=" << report.replicates
                  << "\tblock=" << report.block_length << "\tbandwidth="
                  << (report.bandwidth_global ? "global" : std::to_string(report.bandwidth))
                  << "\talpha=" << fmt(report.alpha) << "\tseed=" << o.seed << '\n';
        std::cout << "model\tT\tH\trate_pct\tse_pct\n";
        for (int h = 1; h <= report.H; ++h)
            std::cout << name << '\t' << report.T << '\t' << h << '\t'
                      << fmt2(report.reject_pct[h - 1]) << '\t'
                      << fmt2(report.se_pct[h - 1]) << '\n';
        if (!report.w.empty()) {
            std::cout << "model\tT\tH\tw\trate_pct\tse_pct\n";
            for (std::size_t wi = 0; wi < report.w.size(); ++wi)
                for (int h = 1; h <= report.H; ++h)
                    std::cout << name << '\t' << report.T << '\t' << h << '\t'
                              << fmt(report.w[wi]) << '\t'
                              << fmt2(report.rel_reject_pct(static_cast<int>(wi), h - 1)) << '\t'
                              << fmt2(report.rel_se_pct(static_cast<int>(wi), h - 1)) << '\n';
        }
    }
    return 0;
}

int cmd_norms(const CommonOpts& o, const std::string& model, int T, int reps, int grid_m,
              const std::string& out_file) {
    const ftscorr::NormTable table =
        ftscorr::estimate_norm_table(ftscorr::parse_model_id(model), T, o.basis_dim,
                                     o.lags, reps, grid_m, o.seed, o.threads);
    if (o.out == "json") {
        ordered_json j;
        j["command"] = "norms";
        j["model"] = model;
        j["T"] = table.T;
        j["D"] = table.dim;
        j["reps"] = table.reps;
        j["lags"] = ordered_json::array();
        for (int h = 1; h <= table.H; ++h) {
            ordered_json row;
            row["h"] = h;
            row["mean_norm"] = table.mean[h - 1];
            row["var_norm"] = table.variance[h - 1];
            j["lags"].push_back(row);
        }
        if (out_file.empty())
            std::cout << j.dump(2) << '\n';
        else {
            std::ofstream file(out_file);
            if (!file) throw ftscorr::io_error("cannot open file for writing: " + out_file);
            file << j.dump(2) << '\n';
        }
    } else {
        if (out_file.empty())
            ftscorr::write_norm_table(std::cout, table);
        else
            ftscorr::write_norm_table(out_file, table);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Serial-correlation tests for functional time series"};
    app.require_subcommand(1);

    CommonOpts test_opts;
    test_opts.boot = 1000;  // case-study default
    std::string test_file;
    bool test_ci = false;
    bool test_prices = false;
    CLI::App* test = app.add_subcommand("test", "Test a curve file for serial correlation");
    test->add_option("file", test_file, "Curve file (TSV/CSV, one curve per row)")->required();
    add_common(test, test_opts);
    test->add_flag("--ci", test_ci, "Exit with status 1 when the test rejects");
    test->add_flag("--prices", test_prices,
                   "Treat input as intraday prices; apply the cumulative log-return transform");

    CommonOpts sim_opts;
    std::string sim_model;
    std::string sim_out;
    int sim_T = 0;
    int sim_grid = 200;
    int sim_burn = 100;
    CLI::App* simulate = app.add_subcommand("simulate", "Generate a simulation model sample");
    simulate->add_option("--model", sim_model, "Model id (N1-N4, A1-A6)")->required();
    simulate->add_option("-T,--length", sim_T, "Series length")->required();
    simulate->add_option("--grid-m", sim_grid, "Grid size");
    simulate->add_option("--burn-in", sim_burn, "Burn-in steps for recursive models");
    simulate->add_option("--out-file", sim_out, "Output path (default: stdout)");
    simulate->add_option("--seed", sim_opts.seed, "Master seed");

    CommonOpts mc_opts;
    std::string mc_model;
    int mc_T = 0;
    int mc_reps = 1000;
    int mc_grid = 200;
    CLI::App* mc = app.add_subcommand("mc", "Monte Carlo rejection rates for a model");
    mc->add_option("--model", mc_model, "Model id (N1-N4, A1-A6)")->required();
    mc->add_option("-T,--length", mc_T, "Series length")->required();
    mc->add_option("--reps", mc_reps, "Monte Carlo repetitions");
    mc->add_option("--grid-m", mc_grid, "Grid size");
    add_common(mc, mc_opts);

    CommonOpts norms_opts;
    norms_opts.basis_dim = 51;
    std::string norms_model;
    std::string norms_out;
    int norms_T = 2000;
    int norms_reps = 500;
    int norms_grid = 200;
    CLI::App* norms = app.add_subcommand("norms", "Estimate per-lag autocovariance norms");
    norms->add_option("--model", norms_model, "Model id (N1-N4, A1-A6)")->required();
    norms->add_option("-T,--length", norms_T, "Series length");
    norms->add_option("--reps", norms_reps, "Monte Carlo repetitions");
    norms->add_option("--grid-m", norms_grid, "Grid size");
    norms->add_option("--out-file", norms_out, "Output path (default: stdout)");
    add_common(norms, norms_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(test)) return cmd_test(test_opts, test_file, test_ci, test_prices);
        if (app.got_subcommand(simulate))
            return cmd_simulate(sim_opts, sim_model, sim_T, sim_grid, sim_burn, sim_out);
        if (app.got_subcommand(mc)) return cmd_mc(mc_opts, mc_model, mc_T, mc_reps, mc_grid);
        if (app.got_subcommand(norms))
            return cmd_norms(norms_opts, norms_model, norms_T, norms_reps, norms_grid, norms_out);
    } catch (const ftscorr::io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}

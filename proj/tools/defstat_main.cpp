#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "defstat/runner.hpp"
#include "defstat/serialize.hpp"

namespace {

namespace fs = std::filesystem;
using namespace defstat;

// --out flag > config "out" > DEFSTAT_OUT > ./defstat-out
fs::path resolve_out(const std::string& flag_out, const fs::path& config_out) {
    if (!flag_out.empty()) return flag_out;
    if (!config_out.empty()) return config_out;
    if (const char* env = std::getenv("DEFSTAT_OUT"); env && *env) return env;
    return "defstat-out";
}

struct CommonOpts {
    std::string config;
    std::string out;
    std::optional<Index> horizon;
    std::optional<long long> seed;
    std::optional<int> jobs;
};

void add_common(CLI::App* sub, CommonOpts& o, bool config_required) {
    auto* c = sub->add_option("--config", o.config, "JSON config file");
    if (config_required) c->required();
    c->check(CLI::ExistingFile);
    sub->add_option("--horizon", o.horizon, "largest n analyzed (overrides config)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "RNG seed (overrides config)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--out", o.out, "output directory for artifacts");
    sub->add_option("--jobs", o.jobs, "worker threads; 0 = one per core")
        ->check(CLI::NonNegativeNumber);
}

RunConfig make_config(const CommonOpts& o) {
    RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
    if (o.horizon) {
        cfg.horizon = *o.horizon;
        cfg.n_grid.clear(); // re-derive the grid for the new horizon
    }
    if (o.seed) cfg.seed = static_cast<std::uint64_t>(*o.seed);
    if (o.jobs) cfg.jobs = *o.jobs;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"deferred statistical convergence analysis"};
    app.require_subcommand(1);

    CommonOpts an_opts, de_opts, ax_opts, th_opts;

    CLI::App* an = app.add_subcommand("analyze", "certify a convergence mode for a sequence");
    add_common(an, an_opts, true);

    CLI::App* de = app.add_subcommand("density", "deferred density trace of a predicate");
    add_common(de, de_opts, true);

    CLI::App* ax = app.add_subcommand("check-axioms", "t-norm and norm axiom suites");
    add_common(ax, ax_opts, false);
    std::string ax_tnorm, ax_base_norm;
    std::optional<int> ax_dim;
    ax->add_option("--tnorm", ax_tnorm, "min | product | lukasiewicz");
    ax->add_option("--base-norm", ax_base_norm, "euclidean | absolute | max");
    ax->add_option("--dim", ax_dim, "largest vector dimension probed")
        ->check(CLI::PositiveNumber);

    CLI::App* th = app.add_subcommand("verify-theorems", "run the theorem check manifest");
    add_common(th, th_opts, false);
    std::string manifest_path, th_tnorm;
    th->add_option("--manifest", manifest_path, "manifest JSON (default: built-in set)")
        ->check(CLI::ExistingFile);
    th->add_option("--tnorm", th_tnorm, "t-norm used by the checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Collapse all usage errors onto the config-error exit code; --help
        // and --version still leave with 0.
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_config_error;
    }

    try {
        if (*an) {
            const RunConfig cfg = make_config(an_opts);
            return run_analyze(cfg, resolve_out(an_opts.out, cfg.out_dir), std::cout);
        }
        if (*de) {
            const RunConfig cfg = make_config(de_opts);
            return run_density(cfg, resolve_out(de_opts.out, cfg.out_dir), std::cout);
        }
        if (*ax) {
            RunConfig cfg = make_config(ax_opts);
            if (!ax_tnorm.empty()) cfg.tnorm = TNorm::from_name(ax_tnorm);
            if (!ax_base_norm.empty())
                cfg.pn = ProbabilisticNorm::phi0(base_norm_from_name(ax_base_norm));
            if (ax_dim) cfg.axioms.dim = *ax_dim;
            return run_check_axioms(cfg, resolve_out(ax_opts.out, cfg.out_dir), std::cout);
        }
        if (*th) {
            HarnessSettings st;
            if (th_opts.horizon) st.horizon = *th_opts.horizon;
            if (th_opts.seed) st.seed = static_cast<std::uint64_t>(*th_opts.seed);
            if (!th_tnorm.empty()) st.tnorm = TNorm::from_name(th_tnorm);
            if (th_opts.jobs) set_parallel_jobs(*th_opts.jobs);
            const std::vector<ManifestEntry> entries =
                manifest_path.empty() ? default_manifest() : load_manifest(manifest_path);
            return run_verify_theorems(entries, st, resolve_out(th_opts.out, {}), std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config_error;
    }
    return exit_config_error;
}

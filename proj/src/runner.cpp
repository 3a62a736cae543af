#include "defstat/runner.hpp"

#include <cstdio>
#include <ostream>

#include "defstat/serialize.hpp"

namespace defstat {

namespace {

namespace fs = std::filesystem;

std::string param_tag(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

void write_point_traces(const Verdict& v, const fs::path& out_dir) {
    for (const auto& p : v.points) {
        const std::string name =
            "trace_eps" + param_tag(p.eps) + "_sigma" + param_tag(p.sigma) + ".csv";
        write_text_file(out_dir / name, trace_csv(p.trace));
    }
}

} // namespace

int exit_code_for(Outcome o) {
    switch (o) {
    case Outcome::Certified: return exit_ok;
    case Outcome::Refuted: return exit_refuted;
    case Outcome::Inconclusive: return exit_inconclusive;
    }
    return exit_config_error;
}

int run_analyze(const RunConfig& cfg, const fs::path& out_dir, std::ostream& out) {
    if (!cfg.sequence) throw ConfigError("analyze needs a \"sequence\" block");
    set_parallel_jobs(cfg.jobs);
    const std::vector<Index> n_grid = cfg.resolved_grid();
    Vec xi = cfg.resolved_xi();

    Verdict v;
    switch (cfg.mode) {
    case TestMode::Phi:
        v = test_phi(cfg.sequence, cfg.pn, xi, cfg.grid, cfg.horizon, cfg.tail_fraction);
        break;
    case TestMode::StrongDeferred:
        v = test_strong_deferred(cfg.sequence, cfg.pn, xi, cfg.window, cfg.grid, n_grid,
                                 cfg.schedule);
        break;
    case TestMode::DeferredStat:
        if (!cfg.candidates.empty()) {
            try {
                const LimitEstimate est =
                    estimate_limit(cfg.sequence, cfg.pn, cfg.window, cfg.candidates,
                                   cfg.grid, n_grid, cfg.schedule);
                if (!est.best) {
                    out << "analyze: no candidate certified\n";
                    v.mode = TestMode::DeferredStat;
                    v.outcome = Outcome::Inconclusive;
                    v.subject = cfg.sequence->describe() + " | " + cfg.pn.name() + " | " +
                                cfg.window.label();
                    write_text_file(out_dir / "verdict.json", to_json_string(v) + "\n");
                    return exit_code_for(v.outcome);
                }
                xi = *est.best;
                out << "analyze: estimated limit " << format_vec(xi) << "\n";
            } catch (const AmbiguousLimit& e) {
                out << "analyze: " << e.what() << "\n";
                return exit_inconclusive;
            }
        }
        v = test_dstat(cfg.sequence, cfg.pn, xi, cfg.window, cfg.grid, n_grid, cfg.schedule);
        break;
    case TestMode::DeferredStatCauchy:
        v = test_dstat_cauchy(cfg.sequence, cfg.pn, cfg.window, cfg.grid, n_grid,
                              cfg.schedule, cfg.anchor);
        break;
    }

    write_text_file(out_dir / "verdict.json", to_json_string(v) + "\n");
    write_point_traces(v, out_dir);

    std::size_t certified = 0;
    for (const auto& p : v.points) certified += p.certified ? 1 : 0;
    out << "mode:    " << to_string(v.mode) << "\n"
        << "subject: " << v.subject << "\n"
        << "outcome: " << to_string(v.outcome) << " (" << certified << "/" << v.points.size()
        << " grid points certified)\n"
        << "wrote:   " << (out_dir / "verdict.json").string() << "\n";
    return exit_code_for(v.outcome);
}

int run_density(const RunConfig& cfg, const fs::path& out_dir, std::ostream& out) {
    PredicateSpec psel;
    if (cfg.predicate)
        psel = *cfg.predicate;
    else if (!cfg.sequence)
        psel.kind = "squares";

    IndexPredicate pred = predicates::none();
    if (psel.kind == "squares")
        pred = predicates::squares();
    else if (psel.kind == "evens")
        pred = predicates::evens();
    else if (psel.kind == "all")
        pred = predicates::all();
    else if (psel.kind == "none")
        pred = predicates::none();
    else { // exceedance
        if (!cfg.sequence)
            throw ConfigError("density: exceedance predicate needs a \"sequence\" block");
        pred = exceedance_predicate(cfg.sequence, cfg.pn, cfg.resolved_xi(),
                                    ExceedanceParams(psel.eps, psel.sigma));
    }

    const DensityTrace t = deferred_density(pred, cfg.window, cfg.resolved_grid(), cfg.schedule);
    write_text_file(out_dir / "density.json", to_json_string(t) + "\n");
    write_text_file(out_dir / "trace.csv", trace_csv(t));

    out << "predicate: " << pred.name << "\n"
        << "window:    " << cfg.window.label() << "\n"
        << "verdict:   " << to_string(t.verdict);
    if (t.verdict == DensityVerdict::TendsTo) out << " (" << t.verdict_value << ")";
    out << "\nfinal n=" << t.n_grid.back() << " ratio=" << t.ratios.back() << "\n"
        << "wrote:     " << (out_dir / "trace.csv").string() << "\n";
    return exit_ok;
}

int run_check_axioms(const RunConfig& cfg, const fs::path& out_dir, std::ostream& out) {
    const AxiomParams& ax = cfg.axioms;
    bool all_passed = true;

    const AxiomReport tn =
        check_tnorm_axioms(cfg.tnorm, ax.tnorm_samples, cfg.seed, ax.tnorm_tol);
    write_text_file(out_dir / "axioms_tnorm.json", to_json_string(tn) + "\n");
    out << (tn.passed() ? "[PASS] " : "[FAIL] ") << tn.subject << " (" << ax.tnorm_samples
        << " samples, tol " << ax.tnorm_tol << ")\n";
    all_passed = all_passed && tn.passed();

    for (int dim = 1; dim <= ax.dim; ++dim) {
        const AxiomReport pr =
            check_pn_axioms(cfg.pn, cfg.tnorm, dim, ax.pn_samples, cfg.seed, ax.pn_tol);
        write_text_file(out_dir / ("axioms_pn_dim" + std::to_string(dim) + ".json"),
                        to_json_string(pr) + "\n");
        out << (pr.passed() ? "[PASS] " : "[FAIL] ") << pr.subject << " dim " << dim << " ("
            << ax.pn_samples << " samples, tol " << ax.pn_tol << ")\n";
        all_passed = all_passed && pr.passed();
    }
    return all_passed ? exit_ok : exit_refuted;
}

int run_verify_theorems(const std::vector<ManifestEntry>& entries,
                        const HarnessSettings& settings, const fs::path& out_dir,
                        std::ostream& out) {
    const ManifestResult r = run_manifest(entries, settings);
    write_text_file(out_dir / "theorems.json", to_json_string(r) + "\n");

    for (std::size_t i = 0; i < r.checks.size(); ++i) {
        const TheoremCheck& c = r.checks[i];
        char line[160];
        std::snprintf(line, sizeof(line), "%-28s %-14s expected %-14s %s", to_string(c.id).c_str(),
                      to_string(c.outcome).c_str(), r.entries[i].expected.c_str(),
                      r.as_expected[i] ? "[OK]" : "[MISMATCH]");
        out << line << "\n";
    }
    out << (r.all_as_expected ? "all checks as expected" : "MISMATCHES PRESENT") << "\n"
        << "wrote: " << (out_dir / "theorems.json").string() << "\n";
    return r.all_as_expected ? exit_ok : exit_refuted;
}

} // namespace defstat

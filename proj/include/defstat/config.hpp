#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "defstat/convergence.hpp"

namespace defstat {

// Predicate selection for the density subcommand.  "exceedance" derives the
// predicate from the configured sequence, norm, xi and (eps, sigma); the rest
// are the built-in index sets.
struct PredicateSpec {
    std::string kind = "exceedance"; // squares | evens | all | none | exceedance
    double eps = 1.0;
    double sigma = 0.5;
};

struct AxiomParams {
    Index tnorm_samples = 10000;
    Index pn_samples = 1000;
    int dim = 3;
    double tnorm_tol = 1e-12;
    double pn_tol = 1e-12;
};

// Everything one CLI invocation needs, assembled from a JSON config file plus
// flag overrides.  Fields hold built objects, not raw config text.
struct RunConfig {
    TestMode mode = TestMode::DeferredStat;
    std::string label = "run";
    Index horizon = 65536;
    std::uint64_t seed = 42;
    int jobs = 1; // 0 = one per hardware thread
    double tail_fraction = 0.25;

    SequencePtr sequence; // absent for axiom-only runs
    Vec xi;               // empty -> zero vector of the sequence dimension
    std::vector<Vec> candidates;

    ProbabilisticNorm pn = ProbabilisticNorm::phi0(BaseNorm::Euclidean);
    TNorm tnorm = TNorm::product();
    DeferredWindow window = DeferredWindow::classical();
    ParamGrid grid = ParamGrid::defaults();
    std::vector<Index> n_grid; // empty -> default_grid_for(window, horizon)
    ToleranceSchedule schedule{};
    AnchorRule anchor = AnchorRule::automatic();
    std::optional<PredicateSpec> predicate;
    AxiomParams axioms{};

    std::filesystem::path out_dir; // empty -> resolved by the CLI

    Vec resolved_xi() const;                // throws ConfigError without a sequence
    std::vector<Index> resolved_grid() const;
};

// Parses a config document.  base_dir anchors relative paths (sequence files,
// window endpoint files); load_config passes the config file's directory.
// Unknown keys are rejected.  Throws ParseError on malformed JSON and
// ConfigError on invalid content.
RunConfig parse_config(const std::string& json_text,
                       const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

// Block-level builders reused by tests and bindings.  Each takes one JSON
// value (object, or string shorthand where documented).
DeferredWindow window_from_json(const std::string& json_text,
                                const std::filesystem::path& base_dir = {});
SequencePtr sequence_from_json(const std::string& json_text,
                               const DeferredWindow& analysis_window, Index validate_n,
                               const std::filesystem::path& base_dir = {});

} // namespace defstat

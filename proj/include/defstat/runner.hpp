#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "defstat/config.hpp"
#include "defstat/theorems.hpp"

namespace defstat {

// Exit codes shared between the runner layer and the CLI.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 1;
inline constexpr int exit_refuted = 3;
inline constexpr int exit_inconclusive = 4;

int exit_code_for(Outcome o);

// Runs the configured mode tester and writes verdict.json plus one CSV per
// grid point (trace_eps<e>_sigma<s>.csv) into out_dir.  With candidates
// configured in dstat mode, estimates the limit first and certifies against
// the winner.  Prints a short human summary to `out`.
int run_analyze(const RunConfig& cfg, const std::filesystem::path& out_dir,
                std::ostream& out);

// Density trace of the configured predicate: density.json + trace.csv.
// Informational; always exits 0 on success.
int run_density(const RunConfig& cfg, const std::filesystem::path& out_dir,
                std::ostream& out);

// T-norm axioms plus probabilistic-norm axioms for dims 1..cfg.axioms.dim;
// one JSON artifact per suite.  Exit 0 when every suite passes, 3 otherwise.
int run_check_axioms(const RunConfig& cfg, const std::filesystem::path& out_dir,
                     std::ostream& out);

// Runs the manifest, writes theorems.json, prints one row per check.  Exit 0
// iff every check's outcome matches its annotated expectation.
int run_verify_theorems(const std::vector<ManifestEntry>& entries,
                        const HarnessSettings& settings,
                        const std::filesystem::path& out_dir, std::ostream& out);

} // namespace defstat

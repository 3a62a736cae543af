#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "defstat/convergence.hpp"
#include "defstat/tnorm.hpp"

namespace defstat {

// The ten executable checks.  Each verifies one limit statement on a concrete
// seeded instance: hypothesis gates first, then the conclusion, with exact
// counting evidence where the underlying argument is set-theoretic.
enum class CheckId {
    Uniqueness,
    LinearitySum,
    LinearityScalar,
    PhiImpliesDStat,
    AEEquality,
    StatImpliesDStatBoundedRatio,
    NestedFiniteTails,
    WindowRatio,
    ConvergentImpliesCauchy,
    LemmaEquivalences,
};

enum class CheckOutcome { Pass, Fail, NotApplicable };

std::string to_string(CheckId id);
std::string to_string(CheckOutcome o);
CheckId check_id_from_name(std::string_view name);

struct TheoremCheck {
    CheckId id{};
    std::string instance;                        // what was run, human readable
    CheckOutcome outcome = CheckOutcome::Fail;
    bool hypothesis_ok = false;                  // verified before the conclusion
    std::vector<std::pair<std::string, double>> metrics; // ordered evidence values
    std::vector<std::string> notes;
};

// Shared knobs for all harness instances.
struct HarnessSettings {
    Index horizon = 65536;
    std::uint64_t seed = 42;
    ParamGrid grid = ParamGrid::defaults();
    ToleranceSchedule schedule{};
    TNorm tnorm = TNorm::product();
    double delta_sep = 0.5; // candidate separation for the uniqueness check
};

// An auxiliary level lambda in (0,1) with (1-lambda) T (1-lambda) > 1 - sigma,
// strictly; the linearity and Cauchy arguments need one.  Throws Error when
// the strict inequality cannot be met (custom t-norms must pick their own).
double lambda_for(const TNorm& t, double sigma);

// Each check builds its default instance; broken_gate switches to a variant
// whose hypothesis fails, which must surface as NotApplicable.
TheoremCheck check_uniqueness(const HarnessSettings& st, bool broken_gate = false);
TheoremCheck check_linearity_sum(const HarnessSettings& st, bool broken_gate = false);
TheoremCheck check_linearity_scalar(const HarnessSettings& st,
                                    std::span<const double> kappas,
                                    bool broken_gate = false);
TheoremCheck check_phi_implies_dstat(const HarnessSettings& st, bool broken_gate = false);
TheoremCheck check_ae_equality(const HarnessSettings& st, bool broken_gate = false);
TheoremCheck check_bounded_ratio_transfer(const HarnessSettings& st, bool broken_gate = false);
TheoremCheck check_nested_finite_tails(const HarnessSettings& st, Index tail_bound = 2,
                                       bool broken_gate = false);
TheoremCheck check_window_ratio(const HarnessSettings& st, bool broken_gate = false);
TheoremCheck check_convergent_implies_cauchy(const HarnessSettings& st,
                                             bool broken_gate = false);
TheoremCheck check_lemma_equivalences(const HarnessSettings& st, ExceedanceParams p,
                                      bool broken_gate = false);

// One manifest row: which check, with which parameters, and what outcome the
// run is expected to produce.
struct ManifestEntry {
    CheckId id{};
    std::string expected = "pass"; // "pass" | "fail" | "not_applicable"
    bool broken_gate = false;
    std::vector<double> kappas{0.0, 3.0, -2.0}; // LinearityScalar only
    Index tail_bound = 2;                       // NestedFiniteTails only
    double eps = 1.0;                           // LemmaEquivalences only
    double sigma = 0.5;                         // LemmaEquivalences only
};

struct ManifestResult {
    std::vector<ManifestEntry> entries;
    std::vector<TheoremCheck> checks;
    std::vector<bool> as_expected;
    bool all_as_expected = false;
};

// The checked-in default: every check once, in declaration order, expected to
// pass.
std::vector<ManifestEntry> default_manifest();

TheoremCheck run_check(const ManifestEntry& e, const HarnessSettings& st);
ManifestResult run_manifest(std::span<const ManifestEntry> entries, const HarnessSettings& st);

} // namespace defstat

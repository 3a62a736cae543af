#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace defstat {

// Outcome of probing one axiom on sampled inputs.
struct AxiomResult {
    std::string name;
    bool exact = false;        // checked with == rather than a tolerance
    bool informative = false;  // reported but never fails the overall check
    bool passed = true;
    std::int64_t samples = 0;
    std::int64_t violations = 0;
    double worst_discrepancy = 0.0; // largest |lhs - rhs| seen (tolerance checks)
    std::string counterexample;     // first failing input, human readable
};

inline AxiomResult make_axiom(std::string name, bool exact = false, bool informative = false) {
    AxiomResult r;
    r.name = std::move(name);
    r.exact = exact;
    r.informative = informative;
    return r;
}

struct AxiomReport {
    std::string subject;
    std::uint64_t seed = 0;
    int sample_count = 0;
    double tol = 0.0;
    std::vector<AxiomResult> axioms;

    // Overall verdict; informative probes are excluded.
    bool passed() const {
        for (const auto& a : axioms)
            if (!a.informative && !a.passed) return false;
        return true;
    }

    const AxiomResult* find(const std::string& name) const {
        for (const auto& a : axioms)
            if (a.name == name) return &a;
        return nullptr;
    }
};

} // namespace defstat

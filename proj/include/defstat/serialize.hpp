#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "defstat/convergence.hpp"
#include "defstat/report.hpp"
#include "defstat/theorems.hpp"

namespace defstat {

// Column-oriented CSV for a trace: "n,alpha,theta,count,ratio" rows for
// density traces, "n,alpha,theta,mean" for mean traces.  Doubles use %.17g so
// a round-trip preserves the exact value.
std::string trace_csv(const DensityTrace& t);

std::string to_json_string(const DensityTrace& t, int indent = 2);
std::string to_json_string(const Verdict& v, int indent = 2);
std::string to_json_string(const AxiomReport& r, int indent = 2);
std::string to_json_string(const TheoremCheck& c, int indent = 2);
std::string to_json_string(const ManifestResult& r, int indent = 2);

// Manifest files are either a JSON array of check entries or an object with a
// "checks" array.  Each entry has "id" plus optional "expected",
// "broken_gate", "kappas", "tail_bound", "eps", "sigma".  Unknown keys are
// rejected.  Throws ParseError on malformed JSON, ConfigError on bad content.
std::vector<ManifestEntry> parse_manifest(const std::string& text);
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace defstat

#include "defstat/serialize.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace defstat {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ordered_json trace_json(const DensityTrace& t) {
    ordered_json j;
    j["kind"] = t.mean_trace ? "mean" : "density";
    j["verdict"] = to_string(t.verdict);
    if (t.verdict == DensityVerdict::TendsTo) j["verdict_value"] = t.verdict_value;
    j["final_begin"] = t.final_begin;
    j["n_grid"] = t.n_grid;
    j["alpha"] = t.alphas;
    j["theta"] = t.thetas;
    if (!t.mean_trace) j["count"] = t.counts;
    j[t.mean_trace ? "mean" : "ratio"] = t.ratios;
    return j;
}

ordered_json verdict_json(const Verdict& v) {
    ordered_json j;
    j["mode"] = to_string(v.mode);
    j["outcome"] = to_string(v.outcome);
    j["subject"] = v.subject;
    if (v.limit)
        j["limit"] = *v.limit;
    else
        j["limit"] = nullptr;
    if (v.anchor)
        j["anchor"] = *v.anchor;
    else
        j["anchor"] = nullptr;
    // Distinct parameter values in first-seen order, reconstructing the grid
    // the points were produced from.
    std::vector<double> eps, sigma;
    for (const auto& p : v.points) {
        if (std::find(eps.begin(), eps.end(), p.eps) == eps.end()) eps.push_back(p.eps);
        if (std::find(sigma.begin(), sigma.end(), p.sigma) == sigma.end())
            sigma.push_back(p.sigma);
    }
    j["grid"] = ordered_json{{"eps", eps}, {"sigma", sigma}};
    ordered_json pts = ordered_json::array();
    for (const auto& p : v.points) {
        ordered_json pj;
        pj["eps"] = p.eps;
        pj["sigma"] = p.sigma;
        pj["certified"] = p.certified;
        pj["refuted"] = p.refuted;
        if (p.anchor)
            pj["anchor"] = *p.anchor;
        else
            pj["anchor"] = nullptr;
        pj["trace"] = trace_json(p.trace);
        pts.push_back(std::move(pj));
    }
    j["traces"] = std::move(pts);
    return j;
}

ordered_json check_json(const TheoremCheck& c) {
    ordered_json j;
    j["id"] = to_string(c.id);
    j["instance"] = c.instance;
    j["outcome"] = to_string(c.outcome);
    j["hypothesis_ok"] = c.hypothesis_ok;
    ordered_json m = ordered_json::object();
    for (const auto& [k, v] : c.metrics) m[k] = v;
    j["metrics"] = std::move(m);
    j["notes"] = c.notes;
    return j;
}

ordered_json entry_json(const ManifestEntry& e) {
    ordered_json j;
    j["id"] = to_string(e.id);
    j["expected"] = e.expected;
    j["broken_gate"] = e.broken_gate;
    if (e.id == CheckId::LinearityScalar) j["kappas"] = e.kappas;
    if (e.id == CheckId::NestedFiniteTails) j["tail_bound"] = e.tail_bound;
    if (e.id == CheckId::LemmaEquivalences) {
        j["eps"] = e.eps;
        j["sigma"] = e.sigma;
    }
    return j;
}

[[noreturn]] void bad_manifest(const std::string& why) {
    throw ConfigError("manifest: " + why);
}

ManifestEntry entry_from(const nlohmann::json& j) {
    if (!j.is_object()) bad_manifest("each check entry must be an object");
    if (!j.contains("id")) bad_manifest("check entry missing \"id\"");
    ManifestEntry e;
    for (const auto& [key, val] : j.items()) {
        if (key == "id") {
            if (!val.is_string()) bad_manifest("\"id\" must be a string");
            e.id = check_id_from_name(val.get<std::string>());
        } else if (key == "expected") {
            const auto s = val.get<std::string>();
            if (s != "pass" && s != "fail" && s != "not_applicable")
                bad_manifest("\"expected\" must be pass, fail or not_applicable");
            e.expected = s;
        } else if (key == "broken_gate") {
            e.broken_gate = val.get<bool>();
        } else if (key == "kappas") {
            e.kappas = val.get<std::vector<double>>();
        } else if (key == "tail_bound") {
            e.tail_bound = val.get<Index>();
            if (e.tail_bound < 0) bad_manifest("\"tail_bound\" must be >= 0");
        } else if (key == "eps") {
            e.eps = val.get<double>();
        } else if (key == "sigma") {
            e.sigma = val.get<double>();
        } else {
            bad_manifest("unknown key \"" + key + "\"");
        }
    }
    return e;
}

} // namespace

std::string trace_csv(const DensityTrace& t) {
    std::string out = t.mean_trace ? "n,alpha,theta,mean\n" : "n,alpha,theta,count,ratio\n";
    for (std::size_t i = 0; i < t.n_grid.size(); ++i) {
        out += std::to_string(t.n_grid[i]);
        out += ',';
        out += std::to_string(t.alphas[i]);
        out += ',';
        out += std::to_string(t.thetas[i]);
        out += ',';
        if (!t.mean_trace) {
            out += std::to_string(t.counts[i]);
            out += ',';
        }
        out += g17(t.ratios[i]);
        out += '\n';
    }
    return out;
}

std::string to_json_string(const DensityTrace& t, int indent) {
    return trace_json(t).dump(indent);
}

std::string to_json_string(const Verdict& v, int indent) {
    return verdict_json(v).dump(indent);
}

std::string to_json_string(const AxiomReport& r, int indent) {
    ordered_json j;
    j["subject"] = r.subject;
    j["seed"] = r.seed;
    j["sample_count"] = r.sample_count;
    j["tol"] = r.tol;
    j["passed"] = r.passed();
    ordered_json arr = ordered_json::array();
    for (const auto& a : r.axioms) {
        ordered_json aj;
        aj["name"] = a.name;
        aj["passed"] = a.passed;
        aj["exact"] = a.exact;
        aj["informative"] = a.informative;
        aj["samples"] = a.samples;
        aj["violations"] = a.violations;
        aj["worst_discrepancy"] = a.worst_discrepancy;
        if (!a.counterexample.empty()) aj["counterexample"] = a.counterexample;
        arr.push_back(std::move(aj));
    }
    j["axioms"] = std::move(arr);
    return j.dump(indent);
}

std::string to_json_string(const TheoremCheck& c, int indent) {
    return check_json(c).dump(indent);
}

std::string to_json_string(const ManifestResult& r, int indent) {
    ordered_json j;
    j["all_as_expected"] = r.all_as_expected;
    ordered_json arr = ordered_json::array();
    for (std::size_t i = 0; i < r.checks.size(); ++i) {
        ordered_json cj;
        cj["entry"] = entry_json(r.entries[i]);
        cj["check"] = check_json(r.checks[i]);
        cj["as_expected"] = static_cast<bool>(r.as_expected[i]);
        arr.push_back(std::move(cj));
    }
    j["checks"] = std::move(arr);
    return j.dump(indent);
}

std::vector<ManifestEntry> parse_manifest(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("manifest: ") + e.what());
    }
    const nlohmann::json* arr = nullptr;
    if (j.is_array()) {
        arr = &j;
    } else if (j.is_object() && j.contains("checks") && j["checks"].is_array()) {
        arr = &j["checks"];
    } else {
        bad_manifest("expected an array of checks or an object with a \"checks\" array");
    }
    std::vector<ManifestEntry> out;
    try {
        for (const auto& item : *arr) out.push_back(entry_from(item));
    } catch (const nlohmann::json::exception& e) {
        bad_manifest(e.what());
    }
    if (out.empty()) bad_manifest("no checks listed");
    return out;
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
    return parse_manifest(read_text_file(path));
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

} // namespace defstat

#include "defstat/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "defstat/serialize.hpp"

namespace defstat {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

[[noreturn]] void bad(const std::string& why) { throw ConfigError("config: " + why); }

double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) bad(where + " must be a number");
    return v.get<double>();
}

Index as_index(const json& v, const std::string& where) {
    if (!v.is_number_integer()) bad(where + " must be an integer");
    return v.get<Index>();
}

std::string as_string(const json& v, const std::string& where) {
    if (!v.is_string()) bad(where + " must be a string");
    return v.get<std::string>();
}

Vec as_vec(const json& v, const std::string& where) {
    if (!v.is_array() || v.empty()) bad(where + " must be a nonempty array of numbers");
    Vec out;
    for (const auto& x : v) out.push_back(as_number(x, where + " element"));
    return out;
}

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    if (path.is_absolute() || base.empty()) return path;
    return base / path;
}

// Two-column CSV "n,value" with n running 1..N without gaps; returns the
// value column.  Used for explicit window endpoints.
std::vector<Index> load_endpoint_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open endpoint file " + path.string());
    std::vector<Index> out;
    std::string line;
    Index row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++row;
        const char* p = line.c_str();
        char* end = nullptr;
        const long long n = std::strtoll(p, &end, 10);
        if (end == p || *end != ',')
            throw ParseError(path.string() + ": row " + std::to_string(row) +
                             ": expected \"n,value\"");
        if (n != row)
            throw ParseError(path.string() + ": row " + std::to_string(row) +
                             ": n column must run 1,2,... without gaps");
        p = end + 1;
        const long long v = std::strtoll(p, &end, 10);
        while (*end == ' ' || *end == '\r') ++end;
        if (end == p || *end != '\0')
            throw ParseError(path.string() + ": row " + std::to_string(row) +
                             ": bad value column");
        if (v < 0)
            throw ParseError(path.string() + ": row " + std::to_string(row) +
                             ": endpoint must be >= 0");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("config: endpoint file is empty: " + path.string());
    return out;
}

Index preset_lambda_sqrt(Index n) {
    Index r = 0;
    while ((r + 1) * (r + 1) <= n) ++r;
    return std::max<Index>(r, 1);
}

Index preset_lambda_log(Index n) {
    Index lg = 0;
    for (Index v = n; v > 1; v /= 2) ++lg;
    return std::max<Index>(lg, 1);
}

DeferredWindow parse_window(const json& j, const fs::path& base) {
    if (j.is_string()) {
        const std::string name = j.get<std::string>();
        if (name == "classical") return DeferredWindow::classical();
        if (name == "lambda")
            return DeferredWindow::lambda_window(preset_lambda_sqrt, "lambda-sqrt");
        bad("window \"" + name + "\" needs an object form with its parameters");
    }
    if (!j.is_object()) bad("window must be a string or an object");
    if (!j.contains("kind")) bad("window object missing \"kind\"");
    const std::string kind = as_string(j.at("kind"), "window.kind");

    auto only = [&](std::initializer_list<const char*> allowed) {
        for (const auto& [key, val] : j.items()) {
            (void)val;
            if (key == "kind") continue;
            if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
                    return key == a;
                }) == allowed.end())
                bad("window: unknown key \"" + key + "\" for kind " + kind);
        }
    };

    if (kind == "classical") {
        only({});
        return DeferredWindow::classical();
    }
    if (kind == "lambda") {
        only({"preset"});
        std::string preset = "sqrt";
        if (j.contains("preset")) preset = as_string(j.at("preset"), "window.preset");
        if (preset == "sqrt")
            return DeferredWindow::lambda_window(preset_lambda_sqrt, "lambda-sqrt");
        if (preset == "half")
            return DeferredWindow::lambda_window(
                [](Index n) { return std::max<Index>(n / 2, 1); }, "lambda-half");
        if (preset == "log")
            return DeferredWindow::lambda_window(preset_lambda_log, "lambda-log");
        bad("window.preset must be sqrt, half or log");
    }
    if (kind == "lacunary") {
        only({"k_terms", "k0", "ratio", "terms"});
        if (j.contains("k_terms")) {
            std::vector<Index> terms;
            for (const auto& x : j.at("k_terms"))
                terms.push_back(as_index(x, "window.k_terms element"));
            return DeferredWindow::lacunary(std::move(terms));
        }
        const Index k0 = j.contains("k0") ? as_index(j.at("k0"), "window.k0") : 1;
        const Index ratio = j.contains("ratio") ? as_index(j.at("ratio"), "window.ratio") : 2;
        const Index terms =
            j.contains("terms") ? as_index(j.at("terms"), "window.terms") : 20;
        return DeferredWindow::lacunary_geometric(k0, ratio, static_cast<int>(terms));
    }
    if (kind == "affine") {
        only({"a", "b", "c", "d"});
        const Index a = j.contains("a") ? as_index(j.at("a"), "window.a") : 0;
        const Index b = j.contains("b") ? as_index(j.at("b"), "window.b") : 0;
        const Index c = j.contains("c") ? as_index(j.at("c"), "window.c") : 1;
        const Index d = j.contains("d") ? as_index(j.at("d"), "window.d") : 0;
        return DeferredWindow::affine(a, b, c, d);
    }
    if (kind == "explicit") {
        only({"alpha", "theta", "alpha_path", "theta_path"});
        std::vector<Index> alpha, theta;
        if (j.contains("alpha_path") || j.contains("theta_path")) {
            if (!j.contains("alpha_path") || !j.contains("theta_path"))
                bad("explicit window needs both alpha_path and theta_path");
            alpha = load_endpoint_csv(
                resolve(base, as_string(j.at("alpha_path"), "window.alpha_path")));
            theta = load_endpoint_csv(
                resolve(base, as_string(j.at("theta_path"), "window.theta_path")));
        } else {
            if (!j.contains("alpha") || !j.contains("theta"))
                bad("explicit window needs alpha and theta arrays (or *_path files)");
            for (const auto& x : j.at("alpha"))
                alpha.push_back(as_index(x, "window.alpha element"));
            for (const auto& x : j.at("theta"))
                theta.push_back(as_index(x, "window.theta element"));
        }
        return DeferredWindow::explicit_seq(std::move(alpha), std::move(theta));
    }
    bad("unknown window kind \"" + kind + "\"");
}

SequencePtr parse_sequence(const json& j, const DeferredWindow& awin, Index validate_n,
                           const fs::path& base) {
    if (!j.is_object()) bad("sequence must be an object");
    if (!j.contains("kind")) bad("sequence object missing \"kind\"");
    const std::string kind = as_string(j.at("kind"), "sequence.kind");

    auto only = [&](std::initializer_list<const char*> allowed) {
        for (const auto& [key, val] : j.items()) {
            (void)val;
            if (key == "kind") continue;
            if (std::find_if(allowed.begin(), allowed.end(), [&](const char* a) {
                    return key == a;
                }) == allowed.end())
                bad("sequence: unknown key \"" + key + "\" for kind " + kind);
        }
    };

    if (kind == "constant") {
        only({"value"});
        if (!j.contains("value")) bad("constant sequence needs \"value\"");
        return sequences::constant(as_vec(j.at("value"), "sequence.value"));
    }
    if (kind == "square_indicator") {
        only({});
        return sequences::square_indicator();
    }
    if (kind == "sparse_blocks") {
        only({"block_len", "k0", "window", "validate_n"});
        Index block_len = 0;
        if (j.contains("block_len"))
            block_len = as_index(j.at("block_len"), "sequence.block_len");
        else if (j.contains("k0"))
            block_len = as_index(j.at("k0"), "sequence.k0");
        else
            bad("sparse_blocks sequence needs \"block_len\"");
        const Index vn = j.contains("validate_n")
                             ? as_index(j.at("validate_n"), "sequence.validate_n")
                             : validate_n;
        const DeferredWindow w =
            j.contains("window") ? parse_window(j.at("window"), base) : awin;
        return sequences::sparse_blocks(block_len, w, vn);
    }
    if (kind == "harmonic") {
        only({"xi", "direction"});
        if (!j.contains("xi") || !j.contains("direction"))
            bad("harmonic sequence needs \"xi\" and \"direction\"");
        return sequences::harmonic_approach(as_vec(j.at("xi"), "sequence.xi"),
                                            as_vec(j.at("direction"), "sequence.direction"));
    }
    if (kind == "even_odd") {
        only({"even", "odd"});
        if (!j.contains("even") || !j.contains("odd"))
            bad("even_odd sequence needs \"even\" and \"odd\"");
        return sequences::even_odd(as_vec(j.at("even"), "sequence.even"),
                                   as_vec(j.at("odd"), "sequence.odd"));
    }
    if (kind == "scaled") {
        only({"kappa", "of"});
        if (!j.contains("kappa") || !j.contains("of"))
            bad("scaled sequence needs \"kappa\" and \"of\"");
        return sequences::scaled(as_number(j.at("kappa"), "sequence.kappa"),
                                 parse_sequence(j.at("of"), awin, validate_n, base));
    }
    if (kind == "sum") {
        only({"a", "b"});
        if (!j.contains("a") || !j.contains("b")) bad("sum sequence needs \"a\" and \"b\"");
        return sequences::sum(parse_sequence(j.at("a"), awin, validate_n, base),
                              parse_sequence(j.at("b"), awin, validate_n, base));
    }
    if (kind == "from_file") {
        only({"path", "format"});
        if (!j.contains("path")) bad("from_file sequence needs \"path\"");
        std::string fmt = "csv";
        if (j.contains("format")) fmt = as_string(j.at("format"), "sequence.format");
        sequences::FileFormat format;
        if (fmt == "csv")
            format = sequences::FileFormat::Csv;
        else if (fmt == "jsonl" || fmt == "json-lines" || fmt == "jsonlines")
            format = sequences::FileFormat::JsonLines;
        else
            bad("sequence.format must be csv or jsonl");
        return sequences::ingest_file(
            resolve(base, as_string(j.at("path"), "sequence.path")), format);
    }
    bad("unknown sequence kind \"" + kind + "\"");
}

ToleranceSchedule parse_schedule(const json& j) {
    if (!j.is_object()) bad("schedule must be an object");
    ToleranceSchedule s;
    for (const auto& [key, val] : j.items()) {
        if (key == "final_fraction")
            s.final_fraction = as_number(val, "schedule.final_fraction");
        else if (key == "threshold_coeff")
            s.threshold_coeff = as_number(val, "schedule.threshold_coeff");
        else if (key == "stability_tol")
            s.stability_tol = as_number(val, "schedule.stability_tol");
        else if (key == "refutation_floor")
            s.refutation_floor = as_number(val, "schedule.refutation_floor");
        else
            bad("schedule: unknown key \"" + key + "\"");
    }
    if (!(s.final_fraction > 0.0 && s.final_fraction <= 1.0))
        bad("schedule.final_fraction must lie in (0,1]");
    if (!(s.threshold_coeff > 0.0)) bad("schedule.threshold_coeff must be > 0");
    if (!(s.stability_tol >= 0.0)) bad("schedule.stability_tol must be >= 0");
    if (!(s.refutation_floor > 0.0 && s.refutation_floor < 0.5))
        bad("schedule.refutation_floor must lie in (0, 0.5)");
    return s;
}

AnchorRule parse_anchor(const json& j, const Vec& xi) {
    std::string rule;
    Index n0 = 0;
    if (j.is_string()) {
        rule = j.get<std::string>();
    } else if (j.is_object()) {
        for (const auto& [key, val] : j.items()) {
            if (key == "rule")
                rule = as_string(val, "anchor.rule");
            else if (key == "n0")
                n0 = as_index(val, "anchor.n0");
            else
                bad("anchor: unknown key \"" + key + "\"");
        }
    } else {
        bad("anchor must be a string or an object");
    }
    if (rule == "auto")
        return xi.empty() ? AnchorRule::automatic() : AnchorRule::automatic(xi);
    if (rule == "fixed") {
        if (n0 < 1) bad("anchor.n0 must be >= 1 for the fixed rule");
        return AnchorRule::fixed(n0);
    }
    bad("anchor.rule must be auto or fixed");
}

PredicateSpec parse_predicate(const json& j) {
    if (!j.is_object()) bad("predicate must be an object");
    PredicateSpec p;
    for (const auto& [key, val] : j.items()) {
        if (key == "kind")
            p.kind = as_string(val, "predicate.kind");
        else if (key == "eps")
            p.eps = as_number(val, "predicate.eps");
        else if (key == "sigma")
            p.sigma = as_number(val, "predicate.sigma");
        else
            bad("predicate: unknown key \"" + key + "\"");
    }
    if (p.kind != "squares" && p.kind != "evens" && p.kind != "all" && p.kind != "none" &&
        p.kind != "exceedance")
        bad("predicate.kind must be squares, evens, all, none or exceedance");
    if (p.kind == "exceedance") (void)ExceedanceParams(p.eps, p.sigma);
    return p;
}

AxiomParams parse_axioms(const json& j) {
    if (!j.is_object()) bad("axioms must be an object");
    AxiomParams a;
    for (const auto& [key, val] : j.items()) {
        if (key == "tnorm_samples")
            a.tnorm_samples = as_index(val, "axioms.tnorm_samples");
        else if (key == "pn_samples")
            a.pn_samples = as_index(val, "axioms.pn_samples");
        else if (key == "dim")
            a.dim = static_cast<int>(as_index(val, "axioms.dim"));
        else if (key == "tnorm_tol")
            a.tnorm_tol = as_number(val, "axioms.tnorm_tol");
        else if (key == "pn_tol")
            a.pn_tol = as_number(val, "axioms.pn_tol");
        else
            bad("axioms: unknown key \"" + key + "\"");
    }
    if (a.tnorm_samples < 1 || a.pn_samples < 1) bad("axioms sample counts must be >= 1");
    if (a.dim < 1) bad("axioms.dim must be >= 1");
    if (a.tnorm_tol < 0.0 || a.pn_tol < 0.0) bad("axioms tolerances must be >= 0");
    return a;
}

TestMode parse_mode(const std::string& m) {
    if (m == "phi") return TestMode::Phi;
    if (m == "strong") return TestMode::StrongDeferred;
    if (m == "dstat") return TestMode::DeferredStat;
    if (m == "dstat-cauchy" || m == "dstat_cauchy") return TestMode::DeferredStatCauchy;
    bad("mode must be phi, strong, dstat or dstat-cauchy");
}

} // namespace

Vec RunConfig::resolved_xi() const {
    if (!xi.empty()) return xi;
    if (!sequence) throw ConfigError("config: xi omitted and no sequence to take a dimension from");
    return zero_vec(sequence->dim());
}

std::vector<Index> RunConfig::resolved_grid() const {
    if (!n_grid.empty()) return n_grid;
    return default_grid_for(window, horizon);
}

RunConfig parse_config(const std::string& json_text, const fs::path& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) bad("top level must be an object");

    RunConfig c;
    std::string base_norm = "euclidean";
    bool saw_pn = false;
    const json* seq_block = nullptr;
    const json* anchor_block = nullptr;

    for (const auto& [key, val] : j.items()) {
        if (key == "mode") {
            c.mode = parse_mode(as_string(val, "mode"));
        } else if (key == "label") {
            c.label = as_string(val, "label");
            if (c.label.empty()) bad("label must be nonempty");
        } else if (key == "horizon") {
            c.horizon = as_index(val, "horizon");
            if (c.horizon < 1) bad("horizon must be >= 1");
        } else if (key == "seed") {
            const Index s = as_index(val, "seed");
            if (s < 0) bad("seed must be >= 0");
            c.seed = static_cast<std::uint64_t>(s);
        } else if (key == "jobs") {
            c.jobs = static_cast<int>(as_index(val, "jobs"));
            if (c.jobs < 0) bad("jobs must be >= 0");
        } else if (key == "tail_fraction") {
            c.tail_fraction = as_number(val, "tail_fraction");
            if (!(c.tail_fraction > 0.0 && c.tail_fraction < 1.0))
                bad("tail_fraction must lie in (0,1)");
        } else if (key == "xi") {
            c.xi = as_vec(val, "xi");
        } else if (key == "candidates") {
            if (!val.is_array() || val.empty()) bad("candidates must be a nonempty array");
            for (const auto& x : val) c.candidates.push_back(as_vec(x, "candidates element"));
        } else if (key == "sequence") {
            seq_block = &val;
        } else if (key == "window") {
            c.window = parse_window(val, base_dir);
        } else if (key == "pn") {
            if (as_string(val, "pn") != "phi0")
                bad("pn must be \"phi0\" (custom norms only via the library)");
            saw_pn = true;
        } else if (key == "base_norm") {
            base_norm = as_string(val, "base_norm");
        } else if (key == "tnorm") {
            c.tnorm = TNorm::from_name(as_string(val, "tnorm"));
        } else if (key == "grid") {
            if (!val.is_object()) bad("grid must be an object with eps and sigma arrays");
            std::vector<double> eps, sigma;
            for (const auto& [gk, gv] : val.items()) {
                if (gk == "eps")
                    eps = as_vec(gv, "grid.eps");
                else if (gk == "sigma")
                    sigma = as_vec(gv, "grid.sigma");
                else
                    bad("grid: unknown key \"" + gk + "\"");
            }
            if (eps.empty() || sigma.empty()) bad("grid needs eps and sigma arrays");
            c.grid = ParamGrid::make(std::move(eps), std::move(sigma));
        } else if (key == "n_grid") {
            if (!val.is_array() || val.empty()) bad("n_grid must be a nonempty array");
            for (const auto& x : val) c.n_grid.push_back(as_index(x, "n_grid element"));
            for (std::size_t i = 0; i < c.n_grid.size(); ++i) {
                if (c.n_grid[i] < 1) bad("n_grid entries must be >= 1");
                if (i > 0 && c.n_grid[i] <= c.n_grid[i - 1])
                    bad("n_grid must be strictly increasing");
            }
        } else if (key == "schedule") {
            c.schedule = parse_schedule(val);
        } else if (key == "anchor") {
            anchor_block = &val;
        } else if (key == "predicate") {
            c.predicate = parse_predicate(val);
        } else if (key == "axioms") {
            c.axioms = parse_axioms(val);
        } else if (key == "out") {
            c.out_dir = resolve(base_dir, as_string(val, "out"));
        } else {
            bad("unknown key \"" + key + "\"");
        }
    }
    (void)saw_pn;
    c.pn = ProbabilisticNorm::phi0(base_norm_from_name(base_norm));

    if (seq_block) c.sequence = parse_sequence(*seq_block, c.window, c.horizon, base_dir);
    if (anchor_block) c.anchor = parse_anchor(*anchor_block, c.xi);

    if (c.sequence && !c.xi.empty() && c.xi.size() != c.sequence->dim())
        bad("xi dimension does not match the sequence");
    for (const auto& cand : c.candidates)
        if (c.sequence && cand.size() != c.sequence->dim())
            bad("candidate dimension does not match the sequence");
    if (!c.n_grid.empty() && c.n_grid.back() > c.horizon)
        bad("n_grid exceeds the horizon");
    const auto wmax = c.window.max_n();
    if (wmax) {
        if (!c.n_grid.empty() && c.n_grid.back() > *wmax)
            bad("n_grid exceeds the window's table");
    }
    return c;
}

RunConfig load_config(const fs::path& path) {
    return parse_config(read_text_file(path), path.parent_path());
}

DeferredWindow window_from_json(const std::string& json_text, const fs::path& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("window: ") + e.what());
    }
    return parse_window(j, base_dir);
}

SequencePtr sequence_from_json(const std::string& json_text,
                               const DeferredWindow& analysis_window, Index validate_n,
                               const fs::path& base_dir) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("sequence: ") + e.what());
    }
    return parse_sequence(j, analysis_window, validate_n, base_dir);
}

} // namespace defstat

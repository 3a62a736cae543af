#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "defstat/config.hpp"
#include "defstat/runner.hpp"
#include "defstat/serialize.hpp"

using namespace defstat;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const auto d = fs::temp_directory_path() / "defstat_config_tests";
    fs::create_directories(d);
    return d;
}

fs::path write_file(const char* name, const std::string& body) {
    const auto p = temp_dir() / name;
    std::ofstream out(p, std::ios::trunc);
    out << body;
    return p;
}

} // namespace

TEST_CASE("full config round trip") {
    const std::string text = R"({
        "mode": "dstat",
        "label": "spikes",
        "horizon": 4096,
        "seed": 7,
        "jobs": 2,
        "sequence": {"kind": "square_indicator"},
        "xi": [0.0],
        "pn": "phi0",
        "base_norm": "absolute",
        "tnorm": "lukasiewicz",
        "window": {"kind": "affine", "a": 1, "c": 2},
        "grid": {"eps": [0.5, 1.0], "sigma": [0.25, 0.5]},
        "n_grid": [64, 256, 1024, 4096],
        "schedule": {"final_fraction": 0.5, "threshold_coeff": 5.0},
        "anchor": {"rule": "fixed", "n0": 10},
        "predicate": {"kind": "exceedance", "eps": 1.0, "sigma": 0.25},
        "axioms": {"tnorm_samples": 500, "dim": 2},
        "out": "artifacts"
    })";
    const auto c = parse_config(text, "/base");
    CHECK(c.mode == TestMode::DeferredStat);
    CHECK(c.label == "spikes");
    CHECK(c.horizon == 4096);
    CHECK(c.seed == 7);
    CHECK(c.jobs == 2);
    REQUIRE(c.sequence);
    CHECK(c.sequence->describe() == "square_indicator");
    CHECK(c.xi == Vec{0.0});
    CHECK(c.pn.is_phi0());
    CHECK(c.pn.base() == BaseNorm::Absolute);
    CHECK(c.tnorm.name() == "lukasiewicz");
    CHECK(c.window.window_at(8) == std::pair<Index, Index>{8, 16});
    CHECK(c.grid.size() == 4);
    CHECK(c.n_grid == std::vector<Index>{64, 256, 1024, 4096});
    CHECK(c.schedule.final_fraction == 0.5);
    CHECK(c.schedule.threshold_coeff == 5.0);
    CHECK(c.schedule.stability_tol == ToleranceSchedule{}.stability_tol);
    CHECK(c.anchor.kind == AnchorRule::Kind::Fixed);
    CHECK(c.anchor.fixed_n0 == 10);
    REQUIRE(c.predicate.has_value());
    CHECK(c.predicate->kind == "exceedance");
    CHECK(c.axioms.tnorm_samples == 500);
    CHECK(c.axioms.dim == 2);
    CHECK(c.axioms.pn_samples == AxiomParams{}.pn_samples);
    CHECK(c.out_dir == fs::path("/base/artifacts"));
    CHECK(c.resolved_grid() == c.n_grid);
    CHECK(c.resolved_xi() == Vec{0.0});
}

TEST_CASE("defaults when keys are omitted") {
    const auto c = parse_config(R"({"sequence": {"kind": "square_indicator"}})", "");
    CHECK(c.mode == TestMode::DeferredStat);
    CHECK(c.horizon == 65536);
    CHECK(c.window.kind() == WindowKind::Classical);
    CHECK(c.pn.base() == BaseNorm::Euclidean);
    CHECK(c.grid.size() == 20);
    CHECK(c.resolved_xi() == Vec{0.0}); // zero vector in the sequence dimension
    CHECK(c.resolved_grid() == default_grid(65536));
    CHECK_FALSE(c.predicate.has_value());
}

TEST_CASE("window shorthand strings") {
    CHECK(parse_config(R"({"window": "classical"})", "").window.kind() ==
          WindowKind::Classical);
    const auto lam = parse_config(R"({"window": "lambda"})", "").window;
    CHECK(lam.window_at(100) == std::pair<Index, Index>{90, 100});
    CHECK_THROWS_AS(parse_config(R"({"window": "lacunary"})", ""), ConfigError);
}

TEST_CASE("unknown keys are rejected everywhere") {
    CHECK_THROWS_AS(parse_config(R"({"horizons": 10})", ""), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"window": {"kind": "affine", "slope": 2}})", ""),
                    ConfigError);
    CHECK_THROWS_AS(
        parse_config(R"({"sequence": {"kind": "harmonic", "xi": [0], "dir": [1]}})", ""),
        ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"schedule": {"floor": 0.1}})", ""), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"grid": {"eps": [1], "sig": [0.5]}})", ""),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"anchor": {"rule": "auto", "n1": 3}})", ""),
                    ConfigError);
}

TEST_CASE("malformed json is a parse error") {
    CHECK_THROWS_AS(parse_config("{", ""), ParseError);
    CHECK_THROWS_AS(parse_config("[]", ""), ConfigError); // valid JSON, wrong shape
}

TEST_CASE("cross-field validation") {
    CHECK_THROWS_AS(
        parse_config(R"({"sequence": {"kind": "square_indicator"}, "xi": [0, 0]})", ""),
        ConfigError);
    CHECK_THROWS_AS(
        parse_config(
            R"({"sequence": {"kind": "square_indicator"}, "candidates": [[0, 1]]})", ""),
        ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"horizon": 100, "n_grid": [64, 128]})", ""),
                    ConfigError);
    CHECK_THROWS_AS(
        parse_config(
            R"({"window": {"kind": "lacunary", "k_terms": [1, 2, 4]}, "n_grid": [1, 2, 3]})",
            ""),
        ConfigError); // table has two windows only
    CHECK_THROWS_AS(parse_config(R"({"mode": "wiggle"})", ""), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"pn": "exotic"})", ""), ConfigError);
}

TEST_CASE("explicit window endpoints load from csv files") {
    write_file("alpha.csv", "1,0\n2,1\n3,2\n");
    write_file("theta.csv", "1,2\n2,4\n3,6\n");
    const std::string text = R"({
        "horizon": 3,
        "window": {"kind": "explicit", "alpha_path": "alpha.csv", "theta_path": "theta.csv"}
    })";
    const auto c = parse_config(text, temp_dir());
    CHECK(c.window.window_at(2) == std::pair<Index, Index>{1, 4});
    REQUIRE(c.window.max_n().has_value());
    CHECK(*c.window.max_n() == 3);

    write_file("gap.csv", "1,0\n3,1\n");
    CHECK_THROWS_AS(
        parse_config(R"({"window": {"kind": "explicit", "alpha_path": "gap.csv",
                                     "theta_path": "theta.csv"}})",
                     temp_dir()),
        ParseError);
    CHECK_THROWS_AS(
        parse_config(R"({"window": {"kind": "explicit", "alpha_path": "alpha.csv"}})",
                     temp_dir()),
        ConfigError);
}

TEST_CASE("sequence files resolve relative to the config directory") {
    write_file("seq.csv", "1,0.5\n2,1.5\n3,2.5\n");
    const auto c = parse_config(
        R"({"horizon": 3, "sequence": {"kind": "from_file", "path": "seq.csv"}})",
        temp_dir());
    REQUIRE(c.sequence);
    CHECK(sequences::eval1(*c.sequence, 2) == 1.5);
    REQUIRE(c.sequence->record_count().has_value());
    CHECK(*c.sequence->record_count() == 3);
}

TEST_CASE("load_config reads the file and its neighbors") {
    write_file("seq2.csv", "1,1\n2,2\n");
    const auto cfgp = write_file("run.json", R"({
        "horizon": 2,
        "sequence": {"kind": "from_file", "path": "seq2.csv"}
    })");
    const auto c = load_config(cfgp);
    REQUIRE(c.sequence);
    CHECK(sequences::eval1(*c.sequence, 1) == 1.0);
}

TEST_CASE("manifest parsing accepts both container shapes") {
    const auto arr = parse_manifest(R"([{"id": "uniqueness"},
                                        {"id": "window-ratio", "broken_gate": true,
                                         "expected": "not_applicable"}])");
    REQUIRE(arr.size() == 2);
    CHECK(arr[0].id == CheckId::Uniqueness);
    CHECK(arr[0].expected == "pass");
    CHECK(arr[1].broken_gate);

    const auto obj = parse_manifest(R"({"checks": [{"id": "lemma-equivalences",
                                                    "eps": 0.5, "sigma": 0.25}]})");
    REQUIRE(obj.size() == 1);
    CHECK(obj[0].eps == 0.5);
    CHECK(obj[0].sigma == 0.25);

    const auto sc = parse_manifest(
        R"([{"id": "linearity-scalar", "kappas": [1.0, -1.0]},
            {"id": "nested-finite-tails", "tail_bound": 4}])");
    CHECK(sc[0].kappas == std::vector<double>{1.0, -1.0});
    CHECK(sc[1].tail_bound == 4);

    CHECK_THROWS_AS(parse_manifest("[{]"), ParseError);
    CHECK_THROWS_AS(parse_manifest(R"([{"id": "no-such"}])"), ConfigError);
    CHECK_THROWS_AS(parse_manifest(R"([{"id": "uniqueness", "expected": "maybe"}])"),
                    ConfigError);
    CHECK_THROWS_AS(parse_manifest(R"([{"id": "uniqueness", "tolerance": 1}])"),
                    ConfigError);
    CHECK_THROWS_AS(parse_manifest(R"({"entries": []})"), ConfigError);
}

TEST_CASE("trace csv layout") {
    DensityTrace t;
    t.n_grid = {16, 32};
    t.alphas = {0, 0};
    t.thetas = {16, 32};
    t.counts = {4, 5};
    t.ratios = {0.25, 0.15625};
    CHECK(trace_csv(t) == "n,alpha,theta,count,ratio\n"
                          "16,0,16,4,0.25\n"
                          "32,0,32,5,0.15625\n");

    DensityTrace m;
    m.mean_trace = true;
    m.n_grid = {10};
    m.alphas = {5};
    m.thetas = {10};
    m.ratios = {0.5};
    CHECK(trace_csv(m) == "n,alpha,theta,mean\n10,5,10,0.5\n");
}

TEST_CASE("verdict json carries the quantifier grid and traces") {
    const auto grid = default_grid(1024);
    const auto v = test_dstat(sequences::square_indicator(),
                              ProbabilisticNorm::phi0(BaseNorm::Absolute), {0.0},
                              DeferredWindow::classical(),
                              ParamGrid::make({0.5, 1.0}, {0.25, 0.5}), grid);
    const auto js = to_json_string(v);
    for (const char* key : {"\"mode\"", "\"outcome\"", "\"limit\"", "\"anchor\"",
                            "\"grid\"", "\"traces\"", "\"eps\"", "\"sigma\""})
        CHECK_MESSAGE(js.find(key) != std::string::npos, "missing ", key);
    CHECK(js.find("\"dstat\"") != std::string::npos);
    CHECK(js.find("\"certified\"") != std::string::npos);
    CHECK(js.find("\"points\"") == std::string::npos); // traces, not points
}

TEST_CASE("runner end to end") {
    const auto out = temp_dir() / "runner_out";
    fs::remove_all(out);

    std::ostringstream log;
    auto cfg = parse_config(R"({
        "mode": "dstat",
        "horizon": 4096,
        "sequence": {"kind": "square_indicator"},
        "grid": {"eps": [1.0], "sigma": [0.25]}
    })", "");
    CHECK(run_analyze(cfg, out, log) == exit_ok);
    CHECK(fs::exists(out / "verdict.json"));
    CHECK(fs::exists(out / "trace_eps1_sigma0.25.csv"));
    CHECK(log.str().find("certified") != std::string::npos);

    auto osc = parse_config(R"({
        "mode": "dstat",
        "horizon": 4096,
        "sequence": {"kind": "even_odd", "even": [0.0], "odd": [9.0]},
        "grid": {"eps": [0.1], "sigma": [0.5]}
    })", "");
    std::ostringstream log2;
    CHECK(run_analyze(osc, out / "osc", log2) == exit_refuted);

    auto dens = parse_config(R"({"horizon": 10000,
                                 "predicate": {"kind": "squares"}})", "");
    std::ostringstream log3;
    CHECK(run_density(dens, out / "dens", log3) == exit_ok);
    CHECK(fs::exists(out / "dens" / "density.json"));
    CHECK(fs::exists(out / "dens" / "trace.csv"));

    auto ax = parse_config(R"({"axioms": {"tnorm_samples": 2000, "pn_samples": 200,
                                          "dim": 2}})", "");
    std::ostringstream log4;
    CHECK(run_check_axioms(ax, out / "ax", log4) == exit_ok);
    CHECK(fs::exists(out / "ax" / "axioms_tnorm.json"));
    CHECK(fs::exists(out / "ax" / "axioms_pn_dim2.json"));
    CHECK(log4.str().find("[PASS]") != std::string::npos);
}

TEST_CASE("verify-theorems runner writes a report") {
    const auto out = temp_dir() / "theorems_out";
    fs::remove_all(out);
    HarnessSettings st;
    st.horizon = 4096;
    std::vector<ManifestEntry> entries;
    ManifestEntry e;
    e.id = CheckId::WindowRatio;
    entries.push_back(e);
    std::ostringstream log;
    CHECK(run_verify_theorems(entries, st, out, log) == exit_ok);
    CHECK(fs::exists(out / "theorems.json"));
    CHECK(log.str().find("window-ratio") != std::string::npos);

    ManifestEntry wrong = e;
    wrong.expected = "fail";
    std::ostringstream log5;
    CHECK(run_verify_theorems({wrong}, st, out / "bad", log5) == exit_refuted);
}

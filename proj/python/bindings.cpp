#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "defstat/config.hpp"
#include "defstat/serialize.hpp"

namespace py = pybind11;
using namespace defstat;

namespace {

// The C++ side passes sequences as shared_ptr-to-const, which pybind11 cannot
// use as a class holder; a small value wrapper keeps ownership simple.
struct PySeq {
    SequencePtr p;
};

PySeq wrap(SequencePtr p) { return PySeq{std::move(p)}; }

std::string trace_verdict(const DensityTrace& t) { return to_string(t.verdict); }

sequences::FileFormat format_from(const std::string& name) {
    if (name == "csv") return sequences::FileFormat::Csv;
    if (name == "jsonl" || name == "json-lines") return sequences::FileFormat::JsonLines;
    throw ConfigError("format must be csv or jsonl");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Deferred statistical convergence analysis over probabilistic normed spaces";

    py::register_exception<Error>(m, "DefstatError");

    py::class_<UnitValue>(m, "UnitValue")
        .def(py::init<double>())
        .def_property_readonly("value", &UnitValue::value)
        .def("__float__", &UnitValue::value)
        .def("__repr__", [](const UnitValue& v) {
            return "UnitValue(" + std::to_string(v.value()) + ")";
        });

    py::class_<TNorm>(m, "TNorm")
        .def_static("from_name", &TNorm::from_name)
        .def_property_readonly("name", &TNorm::name)
        .def("__call__", &TNorm::apply_raw)
        .def("__repr__", [](const TNorm& t) { return "TNorm(" + t.name() + ")"; });

    py::class_<ProbabilisticNorm>(m, "ProbabilisticNorm")
        .def_static(
            "phi0",
            [](const std::string& base) {
                return ProbabilisticNorm::phi0(base_norm_from_name(base));
            },
            py::arg("base_norm") = "euclidean")
        .def_property_readonly("name", &ProbabilisticNorm::name)
        .def(
            "eval",
            [](const ProbabilisticNorm& pn, const Vec& tau, double eps) {
                return pn.eval_raw(tau, eps);
            },
            py::arg("tau"), py::arg("eps"));

    py::class_<DeferredWindow>(m, "DeferredWindow")
        .def_static("classical", &DeferredWindow::classical)
        .def_static("affine", &DeferredWindow::affine, py::arg("a"), py::arg("b"),
                    py::arg("c"), py::arg("d"))
        .def_static("lacunary", [](std::vector<Index> k) {
            return DeferredWindow::lacunary(std::move(k));
        })
        .def_static("lacunary_geometric", &DeferredWindow::lacunary_geometric,
                    py::arg("k0"), py::arg("ratio"), py::arg("terms"))
        .def_static("explicit_seq", &DeferredWindow::explicit_seq, py::arg("alpha"),
                    py::arg("theta"))
        .def_static(
            "from_json",
            [](const std::string& text) { return window_from_json(text); },
            py::arg("json_text"))
        .def("alpha", &DeferredWindow::alpha)
        .def("theta", &DeferredWindow::theta)
        .def("length", &DeferredWindow::length)
        .def("window_at", &DeferredWindow::window_at)
        .def_property_readonly("label", &DeferredWindow::label)
        .def_property_readonly("max_n", &DeferredWindow::max_n)
        .def("__repr__",
             [](const DeferredWindow& w) { return "DeferredWindow(" + w.label() + ")"; });

    py::class_<PySeq>(m, "SequenceSource")
        .def("eval", [](const PySeq& s, Index k) { return s.p->eval(k); })
        .def_property_readonly("dim", [](const PySeq& s) { return s.p->dim(); })
        .def_property_readonly("record_count",
                               [](const PySeq& s) { return s.p->record_count(); })
        .def("describe", [](const PySeq& s) { return s.p->describe(); })
        .def("__repr__", [](const PySeq& s) { return "SequenceSource(" + s.p->describe() + ")"; });

    m.def("constant", [](Vec v) { return wrap(sequences::constant(std::move(v))); });
    m.def("square_indicator", [] { return wrap(sequences::square_indicator()); });
    m.def(
        "sparse_blocks",
        [](Index block_len, const DeferredWindow& w, Index validate_n) {
            return wrap(sequences::sparse_blocks(block_len, w, validate_n));
        },
        py::arg("block_len"), py::arg("window"), py::arg("validate_n"));
    m.def("harmonic_approach", [](Vec xi, Vec direction) {
        return wrap(sequences::harmonic_approach(std::move(xi), std::move(direction)));
    });
    m.def("even_odd", [](Vec even, Vec odd) {
        return wrap(sequences::even_odd(std::move(even), std::move(odd)));
    });
    m.def("scaled", [](double kappa, const PySeq& s) {
        return wrap(sequences::scaled(kappa, s.p));
    });
    m.def("sequence_sum", [](const PySeq& a, const PySeq& b) {
        return wrap(sequences::sum(a.p, b.p));
    });
    m.def("pointwise", [](std::size_t dim, std::function<Vec(Index)> fn, std::string label) {
        return wrap(sequences::pointwise(dim, std::move(fn), std::move(label)));
    });
    m.def(
        "ingest_file",
        [](const std::filesystem::path& path, const std::string& format) {
            return wrap(sequences::ingest_file(path, format_from(format)));
        },
        py::arg("path"), py::arg("format") = "csv");
    m.def(
        "sequence_from_json",
        [](const std::string& text, const DeferredWindow& w, Index validate_n) {
            return wrap(sequence_from_json(text, w, validate_n));
        },
        py::arg("json_text"), py::arg("analysis_window"), py::arg("validate_n"));
    m.def("block_intervals",
          [](const PySeq& s) { return sequences::block_intervals(*s.p); });

    py::class_<IndexPredicate>(m, "IndexPredicate")
        .def("__call__", [](const IndexPredicate& p, Index k) { return p(k); })
        .def_property_readonly("name",
                               [](const IndexPredicate& p) { return p.name; });
    m.def("predicate", [](const std::string& kind) {
        if (kind == "squares") return predicates::squares();
        if (kind == "evens") return predicates::evens();
        if (kind == "all") return predicates::all();
        if (kind == "none") return predicates::none();
        throw ConfigError("predicate must be squares, evens, all or none");
    });
    m.def("custom_predicate", [](std::string name, std::function<bool(Index)> fn) {
        return predicates::custom(std::move(name), std::move(fn));
    });
    m.def(
        "exceedance_predicate",
        [](const PySeq& s, const ProbabilisticNorm& pn, Vec xi, double eps, double sigma) {
            return exceedance_predicate(s.p, pn, std::move(xi),
                                        ExceedanceParams(eps, sigma));
        },
        py::arg("s"), py::arg("pn"), py::arg("xi"), py::arg("eps"), py::arg("sigma"));

    py::class_<ToleranceSchedule>(m, "ToleranceSchedule")
        .def(py::init<>())
        .def_readwrite("final_fraction", &ToleranceSchedule::final_fraction)
        .def_readwrite("threshold_coeff", &ToleranceSchedule::threshold_coeff)
        .def_readwrite("stability_tol", &ToleranceSchedule::stability_tol)
        .def_readwrite("refutation_floor", &ToleranceSchedule::refutation_floor);

    py::class_<DensityTrace>(m, "DensityTrace")
        .def_readonly("n_grid", &DensityTrace::n_grid)
        .def_readonly("alphas", &DensityTrace::alphas)
        .def_readonly("thetas", &DensityTrace::thetas)
        .def_readonly("counts", &DensityTrace::counts)
        .def_readonly("ratios", &DensityTrace::ratios)
        .def_property_readonly("verdict", &trace_verdict)
        .def_readonly("verdict_value", &DensityTrace::verdict_value)
        .def_readonly("final_begin", &DensityTrace::final_begin)
        .def_readonly("mean_trace", &DensityTrace::mean_trace)
        .def("csv", &trace_csv)
        .def("json", [](const DensityTrace& t) { return to_json_string(t); });

    py::class_<ParamGrid>(m, "ParamGrid")
        .def_static("defaults", &ParamGrid::defaults)
        .def_static("make", &ParamGrid::make, py::arg("eps"), py::arg("sigma"))
        .def_static("single", &ParamGrid::single, py::arg("eps"), py::arg("sigma"))
        .def_readonly("eps_values", &ParamGrid::eps_values)
        .def_readonly("sigma_values", &ParamGrid::sigma_values);

    py::class_<PointResult>(m, "PointResult")
        .def_readonly("eps", &PointResult::eps)
        .def_readonly("sigma", &PointResult::sigma)
        .def_readonly("certified", &PointResult::certified)
        .def_readonly("refuted", &PointResult::refuted)
        .def_readonly("trace", &PointResult::trace)
        .def_readonly("anchor", &PointResult::anchor);

    py::class_<Verdict>(m, "Verdict")
        .def_property_readonly("mode", [](const Verdict& v) { return to_string(v.mode); })
        .def_property_readonly("outcome",
                               [](const Verdict& v) { return to_string(v.outcome); })
        .def_readonly("limit", &Verdict::limit)
        .def_readonly("anchor", &Verdict::anchor)
        .def_readonly("points", &Verdict::points)
        .def_readonly("subject", &Verdict::subject)
        .def("certified", &Verdict::certified)
        .def("json", [](const Verdict& v) { return to_json_string(v); })
        .def("__repr__", [](const Verdict& v) {
            return "Verdict(" + to_string(v.mode) + ": " + to_string(v.outcome) + ")";
        });

    m.def(
        "deferred_density",
        [](const IndexPredicate& p, const DeferredWindow& w, std::vector<Index> n_grid,
           const ToleranceSchedule& schedule) {
            return deferred_density(p, w, n_grid, schedule);
        },
        py::arg("predicate"), py::arg("window"), py::arg("n_grid"),
        py::arg("schedule") = ToleranceSchedule{});
    m.def("deferred_count", &deferred_count, py::arg("predicate"), py::arg("window"),
          py::arg("n"));
    m.def("natural_density_ratio", &natural_density_ratio, py::arg("predicate"),
          py::arg("n"));
    m.def("default_grid", &default_grid, py::arg("horizon"));
    m.def("default_grid_for", &default_grid_for, py::arg("window"), py::arg("horizon"));
    m.def("deferred_cesaro_mean",
          [](const PySeq& s, const DeferredWindow& w, Index n) {
              return deferred_cesaro_mean(*s.p, w, n);
          });
    m.def("strong_deferred_deviation",
          [](const PySeq& s, double xi, const DeferredWindow& w, Index n) {
              return strong_deferred_deviation(*s.p, xi, w, n);
          });

    m.def(
        "test_dstat",
        [](const PySeq& s, const ProbabilisticNorm& pn, Vec xi, const DeferredWindow& w,
           const ParamGrid& grid, std::vector<Index> n_grid,
           const ToleranceSchedule& schedule) {
            return test_dstat(s.p, pn, std::move(xi), w, grid, n_grid, schedule);
        },
        py::arg("s"), py::arg("pn"), py::arg("xi"), py::arg("window"), py::arg("grid"),
        py::arg("n_grid"), py::arg("schedule") = ToleranceSchedule{});
    m.def(
        "test_strong_deferred",
        [](const PySeq& s, const ProbabilisticNorm& pn, Vec xi, const DeferredWindow& w,
           const ParamGrid& grid, std::vector<Index> n_grid,
           const ToleranceSchedule& schedule) {
            return test_strong_deferred(s.p, pn, std::move(xi), w, grid, n_grid, schedule);
        },
        py::arg("s"), py::arg("pn"), py::arg("xi"), py::arg("window"), py::arg("grid"),
        py::arg("n_grid"), py::arg("schedule") = ToleranceSchedule{});
    m.def(
        "test_phi",
        [](const PySeq& s, const ProbabilisticNorm& pn, Vec xi, const ParamGrid& grid,
           Index horizon, double tail_fraction) {
            return test_phi(s.p, pn, std::move(xi), grid, horizon, tail_fraction);
        },
        py::arg("s"), py::arg("pn"), py::arg("xi"), py::arg("grid"), py::arg("horizon"),
        py::arg("tail_fraction") = 0.25);
    m.def(
        "test_dstat_cauchy",
        [](const PySeq& s, const ProbabilisticNorm& pn, const DeferredWindow& w,
           const ParamGrid& grid, std::vector<Index> n_grid,
           const ToleranceSchedule& schedule, std::optional<Index> anchor_n0,
           std::optional<Vec> anchor_xi) {
            AnchorRule rule = anchor_n0 ? AnchorRule::fixed(*anchor_n0)
                                        : AnchorRule::automatic(std::move(anchor_xi));
            return test_dstat_cauchy(s.p, pn, w, grid, n_grid, schedule, rule);
        },
        py::arg("s"), py::arg("pn"), py::arg("window"), py::arg("grid"), py::arg("n_grid"),
        py::arg("schedule") = ToleranceSchedule{}, py::arg("anchor_n0") = std::nullopt,
        py::arg("anchor_xi") = std::nullopt);
    m.def(
        "estimate_limit",
        [](const PySeq& s, const ProbabilisticNorm& pn, const DeferredWindow& w,
           std::vector<Vec> candidates, const ParamGrid& grid, std::vector<Index> n_grid,
           const ToleranceSchedule& schedule) {
            const LimitEstimate est =
                estimate_limit(s.p, pn, w, candidates, grid, n_grid, schedule);
            return py::make_tuple(est.best, est.scores);
        },
        py::arg("s"), py::arg("pn"), py::arg("window"), py::arg("candidates"),
        py::arg("grid"), py::arg("n_grid"), py::arg("schedule") = ToleranceSchedule{});
    m.def("set_parallel_jobs", &set_parallel_jobs, py::arg("jobs"));
    m.def("parallel_jobs", &parallel_jobs);

    py::class_<AxiomResult>(m, "AxiomResult")
        .def_readonly("name", &AxiomResult::name)
        .def_readonly("passed", &AxiomResult::passed)
        .def_readonly("exact", &AxiomResult::exact)
        .def_readonly("informative", &AxiomResult::informative)
        .def_readonly("samples", &AxiomResult::samples)
        .def_readonly("violations", &AxiomResult::violations)
        .def_readonly("worst_discrepancy", &AxiomResult::worst_discrepancy)
        .def_readonly("counterexample", &AxiomResult::counterexample);
    py::class_<AxiomReport>(m, "AxiomReport")
        .def_readonly("subject", &AxiomReport::subject)
        .def_readonly("seed", &AxiomReport::seed)
        .def_readonly("sample_count", &AxiomReport::sample_count)
        .def_readonly("tol", &AxiomReport::tol)
        .def_readonly("axioms", &AxiomReport::axioms)
        .def("passed", &AxiomReport::passed)
        .def("json", [](const AxiomReport& r) { return to_json_string(r); });
    m.def("check_tnorm_axioms", &check_tnorm_axioms, py::arg("tnorm"),
          py::arg("sample_count") = 10000, py::arg("seed") = 42, py::arg("tol") = 1e-12);
    m.def("check_pn_axioms", &check_pn_axioms, py::arg("pn"), py::arg("tnorm"),
          py::arg("dim"), py::arg("sample_count") = 1000, py::arg("seed") = 42,
          py::arg("tol") = 1e-9);

    py::class_<HarnessSettings>(m, "HarnessSettings")
        .def(py::init<>())
        .def_readwrite("horizon", &HarnessSettings::horizon)
        .def_readwrite("seed", &HarnessSettings::seed)
        .def_readwrite("grid", &HarnessSettings::grid)
        .def_readwrite("schedule", &HarnessSettings::schedule)
        .def_readwrite("tnorm", &HarnessSettings::tnorm)
        .def_readwrite("delta_sep", &HarnessSettings::delta_sep);
    py::class_<ManifestEntry>(m, "ManifestEntry")
        .def(py::init([](const std::string& id) {
                 ManifestEntry e;
                 e.id = check_id_from_name(id);
                 return e;
             }),
             py::arg("id"))
        .def_property(
            "id", [](const ManifestEntry& e) { return to_string(e.id); },
            [](ManifestEntry& e, const std::string& id) { e.id = check_id_from_name(id); })
        .def_readwrite("expected", &ManifestEntry::expected)
        .def_readwrite("broken_gate", &ManifestEntry::broken_gate)
        .def_readwrite("kappas", &ManifestEntry::kappas)
        .def_readwrite("tail_bound", &ManifestEntry::tail_bound)
        .def_readwrite("eps", &ManifestEntry::eps)
        .def_readwrite("sigma", &ManifestEntry::sigma);
    py::class_<TheoremCheck>(m, "TheoremCheck")
        .def_property_readonly("id", [](const TheoremCheck& c) { return to_string(c.id); })
        .def_readonly("instance", &TheoremCheck::instance)
        .def_property_readonly("outcome",
                               [](const TheoremCheck& c) { return to_string(c.outcome); })
        .def_readonly("hypothesis_ok", &TheoremCheck::hypothesis_ok)
        .def_readonly("metrics", &TheoremCheck::metrics)
        .def_readonly("notes", &TheoremCheck::notes)
        .def("json", [](const TheoremCheck& c) { return to_json_string(c); });
    py::class_<ManifestResult>(m, "ManifestResult")
        .def_readonly("entries", &ManifestResult::entries)
        .def_readonly("checks", &ManifestResult::checks)
        .def_readonly("as_expected", &ManifestResult::as_expected)
        .def_readonly("all_as_expected", &ManifestResult::all_as_expected)
        .def("json", [](const ManifestResult& r) { return to_json_string(r); });
    m.def("default_manifest", &default_manifest);
    m.def(
        "run_check",
        [](const ManifestEntry& e, const HarnessSettings& st) { return run_check(e, st); },
        py::arg("entry"), py::arg("settings") = HarnessSettings{});
    m.def(
        "run_manifest",
        [](std::vector<ManifestEntry> entries, const HarnessSettings& st) {
            return run_manifest(entries, st);
        },
        py::arg("entries"), py::arg("settings") = HarnessSettings{});
    m.def("parse_manifest", &parse_manifest, py::arg("json_text"));
}

#include <doctest.h>

#include <cmath>

#include "defstat/tnorm.hpp"

using namespace defstat;

TEST_CASE("unit interval construction") {
    CHECK(UnitValue(0.0).value() == 0.0);
    CHECK(UnitValue(1.0).value() == 1.0);
    CHECK(UnitValue(0.25).value() == 0.25);
    CHECK_THROWS_AS(UnitValue(-0.1), Error);
    CHECK_THROWS_AS(UnitValue(1.0000001), Error);
    CHECK_THROWS_AS(UnitValue(std::nan("")), Error);
    CHECK(in_unit_interval(0.5));
    CHECK_FALSE(in_unit_interval(-1e-300));
}

TEST_CASE("t-norm point values") {
    const TNorm tmin = TNorm::minimum();
    const TNorm tprod = TNorm::product();
    const TNorm tluk = TNorm::lukasiewicz();

    CHECK(tmin.apply_raw(0.3, 0.7) == 0.3);
    CHECK(tprod.apply_raw(0.5, 0.5) == 0.25);
    CHECK(tluk.apply_raw(0.7, 0.8) == 0.5);
    CHECK(tluk.apply_raw(0.2, 0.3) == 0.0); // clipped at zero
    // identity short-circuit is bitwise even where a+1 would round
    const double a = 0.1234567890123456789;
    CHECK(tluk.apply_raw(a, 1.0) == a);
    CHECK(tluk.apply_raw(1.0, a) == a);
    CHECK(tmin.apply_raw(1.0, 1.0) == 1.0);
    CHECK(tprod.apply_raw(0.0, 0.9) == 0.0);

    CHECK(tmin.apply(UnitValue(0.2), UnitValue(0.9)).value() == 0.2);
}

TEST_CASE("t-norm names") {
    CHECK(TNorm::from_name("min").kind() == TNormKind::Min);
    CHECK(TNorm::from_name("Product").kind() == TNormKind::Product);
    CHECK(TNorm::from_name("LUKASIEWICZ").kind() == TNormKind::Lukasiewicz);
    CHECK_THROWS_AS(TNorm::from_name("drastic"), ConfigError);
    CHECK(TNorm::minimum().name() == "min");
}

TEST_CASE("axiom suite: min is bitwise exact") {
    const AxiomReport r = check_tnorm_axioms(TNorm::minimum(), 10000, 42, 0.0);
    CHECK(r.passed());
    for (const auto& a : r.axioms) {
        CHECK(a.passed);
        if (!a.informative) CHECK(a.violations == 0);
    }
}

TEST_CASE("axiom suite: product within 1e-12") {
    const AxiomReport r = check_tnorm_axioms(TNorm::product(), 10000, 42, 1e-12);
    CHECK(r.passed());
    const AxiomResult* assoc = r.find("associativity");
    REQUIRE(assoc != nullptr);
    CHECK(assoc->worst_discrepancy <= 1e-12);
}

TEST_CASE("axiom suite: lukasiewicz rounding is visible at tol 0") {
    // a + b - 1 re-rounds, so associativity deviates by an ulp on some
    // triples; everything else is bitwise.
    const AxiomReport strict = check_tnorm_axioms(TNorm::lukasiewicz(), 10000, 42, 0.0);
    CHECK_FALSE(strict.passed());
    for (const auto& a : strict.axioms) {
        if (a.name == "associativity") {
            CHECK_FALSE(a.passed);
            CHECK(a.violations > 0);
            CHECK(a.worst_discrepancy <= 5e-16);
            CHECK_FALSE(a.counterexample.empty());
        } else if (!a.informative) {
            CHECK(a.passed);
        }
    }

    const AxiomReport loose = check_tnorm_axioms(TNorm::lukasiewicz(), 10000, 42, 1e-15);
    CHECK(loose.passed());
}

TEST_CASE("axiom suite flags a broken custom operation") {
    // Drops the identity law: T(a, 1) = 0.9 a.
    const TNorm bad = TNorm::custom(
        [](double a, double b) { return 0.9 * a * b; }, "damped-product");
    const AxiomReport r = check_tnorm_axioms(bad, 2000, 7, 1e-12);
    CHECK_FALSE(r.passed());
    const AxiomResult* ident = r.find("identity");
    REQUIRE(ident != nullptr);
    CHECK_FALSE(ident->passed);
    CHECK(ident->violations > 0);
}

TEST_CASE("axiom suite flags non-monotone operations") {
    // b * (1.5 - b) decreases past b = 0.75.
    const TNorm bad = TNorm::custom(
        [](double a, double b) { return a * b * (1.5 - b); }, "bent");
    const AxiomReport r = check_tnorm_axioms(bad, 2000, 7, 1e-12);
    CHECK_FALSE(r.passed());
    const AxiomResult* mono = r.find("monotonicity");
    REQUIRE(mono != nullptr);
    CHECK_FALSE(mono->passed);
}

TEST_CASE("axiom reports are reproducible for a fixed seed") {
    const AxiomReport r1 = check_tnorm_axioms(TNorm::lukasiewicz(), 5000, 123, 0.0);
    const AxiomReport r2 = check_tnorm_axioms(TNorm::lukasiewicz(), 5000, 123, 0.0);
    REQUIRE(r1.axioms.size() == r2.axioms.size());
    for (std::size_t i = 0; i < r1.axioms.size(); ++i) {
        CHECK(r1.axioms[i].violations == r2.axioms[i].violations);
        CHECK(r1.axioms[i].worst_discrepancy == r2.axioms[i].worst_discrepancy);
        CHECK(r1.axioms[i].counterexample == r2.axioms[i].counterexample);
    }
}

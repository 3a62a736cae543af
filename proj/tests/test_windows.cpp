#include <doctest.h>

#include "defstat/windows.hpp"

using namespace defstat;

TEST_CASE("classical windows are initial segments") {
    const auto w = DeferredWindow::classical();
    CHECK(w.window_at(1) == std::pair<Index, Index>{0, 1});
    CHECK(w.window_at(5) == std::pair<Index, Index>{0, 5});
    CHECK(w.length(100) == 100);
    CHECK(w.kind() == WindowKind::Classical);
    CHECK_FALSE(w.max_n().has_value());
}

TEST_CASE("lambda windows trail the endpoint") {
    const auto w = DeferredWindow::lambda_window(
        [](Index n) {
            Index r = 0;
            while ((r + 1) * (r + 1) <= n) ++r;
            return std::max<Index>(r, 1);
        },
        "lambda-sqrt");
    CHECK(w.window_at(9) == std::pair<Index, Index>{6, 9});   // lambda = 3
    CHECK(w.window_at(100) == std::pair<Index, Index>{90, 100});
    CHECK(w.window_at(1) == std::pair<Index, Index>{0, 1});
    CHECK(w.kind() == WindowKind::Lambda);
}

TEST_CASE("lacunary windows step through the term list") {
    const auto w = DeferredWindow::lacunary({1, 2, 4, 8});
    CHECK(w.window_at(1) == std::pair<Index, Index>{1, 2});
    CHECK(w.window_at(3) == std::pair<Index, Index>{4, 8});
    REQUIRE(w.max_n().has_value());
    CHECK(*w.max_n() == 3);
    CHECK_THROWS_AS(w.alpha(4), IndexOutOfRange);
    CHECK_THROWS_AS(DeferredWindow::lacunary({5, 5, 6}), ConfigError);
    CHECK_THROWS_AS(DeferredWindow::lacunary({3}), ConfigError);

    const auto g = DeferredWindow::lacunary_geometric(1, 2, 11);
    CHECK(g.window_at(10) == std::pair<Index, Index>{512, 1024});
}

TEST_CASE("affine windows") {
    const auto w = DeferredWindow::affine(1, 0, 2, 0); // (n, 2n]
    CHECK(w.window_at(10) == std::pair<Index, Index>{10, 20});
    CHECK(w.length(7) == 7);
    CHECK(w.kind() == WindowKind::Affine);
}

TEST_CASE("explicit windows from tables and callables") {
    const auto t = DeferredWindow::explicit_seq({0, 1}, {1, 3});
    CHECK(t.window_at(2) == std::pair<Index, Index>{1, 3});
    REQUIRE(t.max_n().has_value());
    CHECK(*t.max_n() == 2);
    CHECK_THROWS_AS(t.alpha(3), IndexOutOfRange);
    CHECK_THROWS_AS(DeferredWindow::explicit_seq({0}, {1, 2}), ConfigError);

    const auto f = DeferredWindow::explicit_fn([](Index n) { return n - 1; },
                                               [](Index n) { return 2 * n; }, "shifted");
    CHECK(f.window_at(4) == std::pair<Index, Index>{3, 8});
}

TEST_CASE("ordering violations throw at evaluation") {
    const auto bad = DeferredWindow::explicit_fn([](Index n) { return n; },
                                                 [](Index n) { return n; }, "empty");
    CHECK_THROWS_AS(bad.window_at(3), WindowOrderError);
    const auto neg = DeferredWindow::explicit_fn([](Index) { return Index{-1}; },
                                                 [](Index n) { return n; }, "negative");
    CHECK_THROWS_AS(neg.window_at(2), WindowOrderError);
}

TEST_CASE("prefix validation reports the first bad index") {
    const auto ok = validate_prefix(DeferredWindow::classical(), 500);
    CHECK(ok.valid);
    CHECK(ok.checked_upto == 500);

    const auto bad = DeferredWindow::explicit_fn(
        [](Index n) { return n < 10 ? 0 : n; }, [](Index n) { return n; }, "late-cross");
    const auto v = validate_prefix(bad, 100);
    CHECK_FALSE(v.valid);
    CHECK(v.first_violation_n == 10);
    CHECK_FALSE(v.message.empty());
}

TEST_CASE("validation flags stagnant endpoints") {
    const auto flat = DeferredWindow::explicit_fn([](Index) { return Index{0}; },
                                                  [](Index) { return Index{5}; }, "flat");
    const auto v = validate_prefix(flat, 50);
    CHECK_FALSE(v.grows);
}

TEST_CASE("ratio report separates bounded from unbounded") {
    const auto classical = ratio_sequence(DeferredWindow::classical(), 200);
    CHECK(classical.max_value == 0.0);
    CHECK(classical.bounded);

    const auto affine = ratio_sequence(DeferredWindow::affine(1, 0, 2, 0), 200);
    CHECK(affine.max_value == 1.0); // n / (2n - n)
    CHECK(affine.bounded);

    const auto racing = ratio_sequence(
        DeferredWindow::explicit_fn([](Index n) { return n * n - n; },
                                    [](Index n) { return n * n; }, "accelerating"),
        200);
    CHECK(racing.max_value == 199.0); // (n^2 - n) / n = n - 1
    CHECK(racing.increasing_trend);
    CHECK_FALSE(racing.bounded);
}

TEST_CASE("window pairs enforce nesting") {
    const auto outer = DeferredWindow::affine(0, 0, 2, 0);
    const auto inner = DeferredWindow::explicit_fn([](Index n) { return n / 2; },
                                                   [](Index n) { return n; }, "mid");
    const auto pair = WindowPair::validated(outer, inner, 300);
    CHECK(pair.outer().label() == outer.label());
    const auto [left, right] = pair.tail_sizes(10);
    CHECK(left == 5);   // (0, 5]
    CHECK(right == 10); // (10, 20]

    const auto escaping = DeferredWindow::affine(0, 0, 3, 0); // not inside (0, 2n]
    CHECK_THROWS_AS(WindowPair::validated(outer, escaping, 300), WindowNestingError);
}

TEST_CASE("trimmed pairs cut bounded tails and stay nonempty") {
    const auto outer = DeferredWindow::classical();
    const auto pair = WindowPair::trimmed(outer, 2, 100);
    for (Index n : {1, 2, 3, 4, 5, 10, 100}) {
        const auto [a, t] = outer.window_at(n);
        const auto [r, s] = pair.inner().window_at(n);
        CHECK(a <= r);
        CHECK(r < s);
        CHECK(s <= t);
        const auto [left, right] = pair.tail_sizes(n);
        CHECK(left <= 2);
        CHECK(right <= 2);
    }
    // length-1 window cannot be trimmed at all
    const auto [r1, s1] = pair.inner().window_at(1);
    CHECK(r1 == 0);
    CHECK(s1 == 1);
}

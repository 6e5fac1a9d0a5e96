#include "expr.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace grs;
using namespace grs::testutil;

TEST_CASE("literal forms evaluate") {
    CHECK(Expr::parse("2", 2).eval({0, 0}) == 2.0);
    CHECK(Expr::parse("-3.5e2", 2).eval({0, 0}) == -350.0);
    CHECK(Expr::parse(".25", 2).eval({0, 0}) == 0.25);
    CHECK(Expr::parse("x2", 3).eval({1, 7, 2}) == 7.0);
    CHECK(Expr::parse("x1 + 2*x2", 2).eval({3, 4}) == 11.0);
    CHECK(Expr::parse("sin(x1)^2 + cos(x1)^2", 1).eval({0.37}) == doctest::Approx(1.0));
    CHECK(Expr::parse("exp(ln(x1))", 1).eval({2.5}) == doctest::Approx(2.5));
    CHECK(Expr::parse("sqrt(x1^2)", 1).eval({3.0}) == doctest::Approx(3.0));
}

TEST_CASE("precedence and unary minus") {
    // '^' binds tighter than unary minus: -x1^2 is -(x1^2).
    CHECK(Expr::parse("-x1^2", 1).eval({3}) == -9.0);
    CHECK(Expr::parse("(-x1)^2", 1).eval({3}) == 9.0);
    CHECK(Expr::parse("2 + 3 * 4", 1).eval({0}) == 14.0);
    CHECK(Expr::parse("2 - 3 - 4", 1).eval({0}) == -5.0);
    CHECK(Expr::parse("12 / 3 / 2", 1).eval({0}) == 2.0);
    CHECK(Expr::parse("x1^-2", 1).eval({2}) == 0.25);
    CHECK(Expr::parse("--x1", 1).eval({5}) == 5.0);
}

TEST_CASE("parse errors carry byte offsets") {
    CHECK_THROWS_AS(Expr::parse("", 2), ParseError);
    try {
        Expr::parse("x1 + sin(", 2);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset == 9);
    }
    CHECK_THROWS_AS(Expr::parse("x3", 2), ParseError);      // variable out of range
    CHECK_THROWS_AS(Expr::parse("x0", 2), ParseError);
    CHECK_THROWS_AS(Expr::parse("x1^x2", 2), ParseError);   // exponent must be an integer
    CHECK_THROWS_AS(Expr::parse("x1^1.5", 2), ParseError);
    CHECK_THROWS_AS(Expr::parse("x1 x2", 2), ParseError);   // trailing junk
    CHECK_THROWS_AS(Expr::parse("tan(x1)", 2), ParseError); // unknown function
    CHECK_THROWS_AS(Expr::parse("(x1", 2), ParseError);
}

TEST_CASE("evaluation domain errors") {
    CHECK_THROWS_AS(Expr::parse("1/x1", 1).eval({0.0}), EvalError);
    CHECK_THROWS_AS(Expr::parse("ln(x1)", 1).eval({-1.0}), EvalError);
    CHECK_THROWS_AS(Expr::parse("ln(x1)", 1).eval({0.0}), EvalError);
    CHECK_THROWS_AS(Expr::parse("sqrt(x1)", 1).eval({-0.5}), EvalError);
    CHECK_THROWS_AS(Expr::parse("x1^-1", 1).eval({0.0}), EvalError);
    // Fine values right next to the singular ones.
    CHECK(Expr::parse("ln(x1)", 1).eval({1.0}) == 0.0);
    CHECK(Expr::parse("sqrt(x1)", 1).eval({4.0}) == 2.0);
}

TEST_CASE("gradient matches central finite differences on random trees") {
    std::mt19937_64 rng(20240817);
    const int dim = 3;
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::string text = random_expr_text(rng, dim);
        Expr e = Expr::parse(text, dim);
        std::vector<double> p = random_point(rng, dim);
        double v = 0.0;
        std::vector<double> grad;
        e.eval_with_gradient(p, v, grad);
        CHECK(v == doctest::Approx(e.eval(p)));
        auto fd = fd_gradient(e, p);
        double scale = 1.0;
        for (double c : fd) scale = std::max(scale, std::abs(c));
        for (int k = 0; k < dim; ++k) {
            CHECK(std::abs(grad[k] - fd[k]) / scale < 1e-6);
            ++checked;
        }
    }
    CHECK(checked == 300);
}

TEST_CASE("gradient handles ln, sqrt and division") {
    Expr e = Expr::parse("ln(x1) / sqrt(x2)", 2);
    std::vector<double> p = {2.0, 4.0};
    double v = 0.0;
    std::vector<double> grad;
    e.eval_with_gradient(p, v, grad);
    CHECK(v == doctest::Approx(std::log(2.0) / 2.0));
    CHECK(grad[0] == doctest::Approx(1.0 / (2.0 * 2.0)));
    CHECK(grad[1] == doctest::Approx(-std::log(2.0) / 16.0));
}

TEST_CASE("print-parse round trip preserves evaluation exactly") {
    std::mt19937_64 rng(7);
    const int dim = 4;
    for (int trial = 0; trial < 60; ++trial) {
        Expr e = Expr::parse(random_expr_text(rng, dim), dim);
        Expr r = Expr::parse(e.to_string(), dim);
        for (int rep = 0; rep < 3; ++rep) {
            std::vector<double> p = random_point(rng, dim);
            CHECK(e.eval(p) == r.eval(p)); // bit-identical, same tree shape
        }
    }
}

TEST_CASE("constants and zero literals") {
    Expr z = Expr::constant(0.0);
    CHECK(z.is_zero_literal());
    CHECK(z.eval({}) == 0.0);
    CHECK_FALSE(Expr::constant(1.0).is_zero_literal());
    CHECK_FALSE(Expr::parse("x1 - x1", 1).is_zero_literal());

    double v = 0.0;
    std::vector<double> grad;
    Expr::parse("4.5", 3).eval_with_gradient({1, 2, 3}, v, grad);
    CHECK(v == 4.5);
    for (double g : grad) CHECK(g == 0.0);
}

TEST_CASE("gradient of a sum is the sum of gradients") {
    std::mt19937_64 rng(99);
    const int dim = 2;
    for (int trial = 0; trial < 20; ++trial) {
        std::string a = random_expr_text(rng, dim, 2);
        std::string b = random_expr_text(rng, dim, 2);
        Expr ea = Expr::parse(a, dim), eb = Expr::parse(b, dim);
        Expr sum = Expr::parse("(" + a + ") + (" + b + ")", dim);
        std::vector<double> p = random_point(rng, dim);
        double va, vb, vs;
        std::vector<double> ga, gb, gs;
        ea.eval_with_gradient(p, va, ga);
        eb.eval_with_gradient(p, vb, gb);
        sum.eval_with_gradient(p, vs, gs);
        for (int k = 0; k < dim; ++k) CHECK(gs[k] == doctest::Approx(ga[k] + gb[k]));
    }
}

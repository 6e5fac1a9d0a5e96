#include "covderiv.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace grs;
using namespace grs::testutil;

namespace {

const char* kTorsionSpace = R"raw(
dimension = 3
g[1][1] = "1"
g[2][2] = "1 + x1^2"
g[3][3] = "2"
g[1][2] = "0.4 + x3"
g[2][1] = "0.4 - x3"
g[2][3] = "0.2*x1"
g[3][2] = "-0.2*x1"
)raw";

TensorField sample_field_11(int dim) {
    TensorField a(dim, 1, 1);
    a.at({0, 0}) = Expr::parse("x1*x2", dim);
    a.at({0, 1}) = Expr::parse("sin(x3)", dim);
    a.at({1, 0}) = Expr::parse("x2^2 - x3", dim);
    a.at({1, 2}) = Expr::parse("cos(x1)", dim);
    a.at({2, 1}) = Expr::parse("x1 + 2*x3", dim);
    a.at({2, 2}) = Expr::constant(0.7);
    return a;
}

TensorField sample_field_02(int dim) {
    TensorField a(dim, 0, 2);
    a.at({0, 0}) = Expr::parse("x2", dim);
    a.at({0, 2}) = Expr::parse("x1*x3", dim);
    a.at({1, 1}) = Expr::parse("sin(x1)", dim);
    a.at({2, 0}) = Expr::parse("x3^2", dim);
    return a;
}

TensorField sample_field_20(int dim) {
    TensorField a(dim, 2, 0);
    a.at({0, 1}) = Expr::parse("x1^2", dim);
    a.at({1, 0}) = Expr::parse("x2*x3", dim);
    a.at({2, 2}) = Expr::parse("cos(x2)", dim);
    return a;
}

// FD partials of every component: independent of the AD path.
Tensor fd_partials(const TensorField& f, const Point& p) {
    const double h = 1e-6;
    Tensor out(f.dim(), f.upper(), f.lower() + 1);
    Tensor shape(f.dim(), f.upper(), f.lower());
    for (std::size_t c = 0; c < f.size(); ++c) {
        auto idx = shape.unflat(c);
        for (int m = 0; m < f.dim(); ++m) {
            Point hi = p, lo = p;
            hi[m] += h;
            lo[m] -= h;
            auto full = idx;
            full.push_back(m);
            out.at(full) = (f[c].eval(hi) - f[c].eval(lo)) / (2 * h);
        }
    }
    return out;
}

} // namespace

TEST_CASE("slot orientation table") {
    // kind 1: always A; kind 2: always B; kinds 3/4 alternate from A and B.
    for (int slot = 0; slot < 4; ++slot) {
        CHECK(slot_orientation_a(CovKind::K1, slot, 4));
        CHECK_FALSE(slot_orientation_a(CovKind::K2, slot, 4));
        CHECK(slot_orientation_a(CovKind::K3, slot, 4) == (slot % 2 == 0));
        CHECK(slot_orientation_a(CovKind::K4, slot, 4) == (slot % 2 != 0));
    }
}

TEST_CASE("printed patterns for a (1,1) field") {
    Space s = Space::load(kTorsionSpace);
    TensorField a = sample_field_11(3);
    Point p = {0.3, -0.5, 0.7};
    Tensor av = a.eval(p);
    Tensor ap = fd_partials(a, p);
    Tensor gamma = s.connection_at(p).gamma;
    const int n = 3;
    for (CovKind kind : {CovKind::K1, CovKind::K2, CovKind::K3, CovKind::K4}) {
        Tensor d = cov_deriv(a, s, kind, p);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int m = 0; m < n; ++m) {
                    double expect = ap.at({i, j, m});
                    for (int q = 0; q < n; ++q) {
                        switch (kind) {
                        case CovKind::K1:
                            expect += gamma.at({i, q, m}) * av.at({q, j});
                            expect -= gamma.at({q, j, m}) * av.at({i, q});
                            break;
                        case CovKind::K2:
                            expect += gamma.at({i, m, q}) * av.at({q, j});
                            expect -= gamma.at({q, m, j}) * av.at({i, q});
                            break;
                        case CovKind::K3:
                            expect += gamma.at({i, q, m}) * av.at({q, j});
                            expect -= gamma.at({q, m, j}) * av.at({i, q});
                            break;
                        case CovKind::K4:
                            expect += gamma.at({i, m, q}) * av.at({q, j});
                            expect -= gamma.at({q, j, m}) * av.at({i, q});
                            break;
                        }
                    }
                    CHECK(d.at({i, j, m}) == doctest::Approx(expect).epsilon(1e-6));
                }
    }
}

TEST_CASE("printed patterns for a (0,2) field") {
    Space s = Space::load(kTorsionSpace);
    TensorField a = sample_field_02(3);
    Point p = {-0.2, 0.4, 0.1};
    Tensor av = a.eval(p);
    Tensor ap = fd_partials(a, p);
    Tensor gamma = s.connection_at(p).gamma;
    const int n = 3;
    for (CovKind kind : {CovKind::K1, CovKind::K2, CovKind::K3, CovKind::K4}) {
        Tensor d = cov_deriv(a, s, kind, p);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int m = 0; m < n; ++m) {
                    double expect = ap.at({i, j, m});
                    for (int q = 0; q < n; ++q) {
                        bool first_a = kind == CovKind::K1 || kind == CovKind::K3;
                        bool second_a = kind == CovKind::K1 || kind == CovKind::K4;
                        expect -= (first_a ? gamma.at({q, i, m}) : gamma.at({q, m, i})) *
                                  av.at({q, j});
                        expect -= (second_a ? gamma.at({q, j, m}) : gamma.at({q, m, j})) *
                                  av.at({i, q});
                    }
                    CHECK(d.at({i, j, m}) == doctest::Approx(expect).epsilon(1e-6));
                }
    }
}

TEST_CASE("kind sums equal twice the symmetric derivative") {
    Space s = Space::load(kTorsionSpace);
    std::mt19937_64 rng(3);
    for (const TensorField& a : {sample_field_11(3), sample_field_02(3), sample_field_20(3)}) {
        for (int t = 0; t < 5; ++t) {
            Point p = random_point(rng, 3);
            Tensor two_sym = 2.0 * cov_deriv_symmetric(a, s, p);
            Tensor s12 = cov_deriv(a, s, CovKind::K1, p) + cov_deriv(a, s, CovKind::K2, p);
            Tensor s34 = cov_deriv(a, s, CovKind::K3, p) + cov_deriv(a, s, CovKind::K4, p);
            CHECK((s12 - two_sym).max_abs() < 1e-10);
            CHECK((s34 - two_sym).max_abs() < 1e-10);
        }
    }
}

TEST_CASE("all kinds coincide without torsion") {
    Space s = Space::load(R"raw(
dimension = 2
g[1][1] = "1"
g[2][2] = "x1^2 + 1"
)raw");
    TensorField a(2, 1, 1);
    a.at({0, 1}) = Expr::parse("x1*x2", 2);
    a.at({1, 0}) = Expr::parse("cos(x2)", 2);
    std::mt19937_64 rng(9);
    for (int t = 0; t < 5; ++t) {
        Point p = random_point(rng, 2);
        Tensor d1 = cov_deriv(a, s, CovKind::K1, p);
        for (CovKind kind : {CovKind::K2, CovKind::K3, CovKind::K4})
            CHECK((cov_deriv(a, s, kind, p) - d1).max_abs() < 1e-12);
        CHECK((cov_deriv_symmetric(a, s, p) - d1).max_abs() < 1e-12);
    }
}

TEST_CASE("constant mixed field differentiates to connection terms only in flat space") {
    Space flat = Space::load("dimension = 2\ng[1][1] = \"1\"\ng[2][2] = \"1\"\n");
    TensorField a(2, 1, 1);
    a.at({0, 0}) = Expr::constant(1.0);
    a.at({1, 1}) = Expr::constant(1.0);
    Point p = {0.1, 0.2};
    for (CovKind kind : {CovKind::K1, CovKind::K2, CovKind::K3, CovKind::K4})
        CHECK(cov_deriv(a, flat, kind, p).max_abs() == 0.0);
}

TEST_CASE("kind-1 trace commutes with the derivative") {
    // Contracting a (1,1) field cancels the connection terms of kinds 1 and 2
    // but not of kinds 3 and 4 in a torsionful space.
    Space s = Space::load(kTorsionSpace);
    TensorField a = sample_field_11(3);
    Point p = {0.25, -0.15, 0.6};
    Tensor ap = fd_partials(a, p);
    for (CovKind kind : {CovKind::K1, CovKind::K2}) {
        Tensor tr = contract(cov_deriv(a, s, kind, p), 0, 0);
        for (int m = 0; m < 3; ++m) {
            double expect = 0.0;
            for (int i = 0; i < 3; ++i) expect += ap.at({i, i, m});
            CHECK(tr.at({m}) == doctest::Approx(expect).epsilon(1e-6));
        }
    }
    Tensor diff = contract(cov_deriv(a, s, CovKind::K3, p), 0, 0) -
                  contract(cov_deriv(a, s, CovKind::K1, p), 0, 0);
    Tensor tors = s.connection_at(p).torsion;
    Tensor av = a.eval(p);
    for (int m = 0; m < 3; ++m) {
        double expect = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int q = 0; q < 3; ++q)
                expect += 2.0 * tors.at({i, q, m}) * av.at({q, i});
        CHECK(diff.at({m}) == doctest::Approx(expect).epsilon(1e-9));
    }
}

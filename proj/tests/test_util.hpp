#pragma once

#include "expr.hpp"
#include "tensor.hpp"

#include <random>
#include <string>
#include <vector>

namespace grs::testutil {

inline double urand(std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

inline std::vector<double> random_point(std::mt19937_64& rng, int dim, double lo = -1.0,
                                        double hi = 1.0) {
    std::vector<double> p(static_cast<std::size_t>(dim));
    for (auto& c : p) c = urand(rng, lo, hi);
    return p;
}

// Random smooth expression text (polynomial/trig mix, no ln/sqrt/div), safe
// to finite-difference anywhere.
inline std::string random_expr_text(std::mt19937_64& rng, int dim, int depth = 3) {
    auto pick = [&](int n) { return static_cast<int>(rng() % static_cast<unsigned long long>(n)); };
    if (depth == 0) {
        if (pick(3) == 0) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3f", urand(rng, -2.0, 2.0));
            return buf;
        }
        return "x" + std::to_string(1 + pick(dim));
    }
    switch (pick(6)) {
    case 0: return "(" + random_expr_text(rng, dim, depth - 1) + " + " +
                   random_expr_text(rng, dim, depth - 1) + ")";
    case 1: return "(" + random_expr_text(rng, dim, depth - 1) + " - " +
                   random_expr_text(rng, dim, depth - 1) + ")";
    case 2: return "(" + random_expr_text(rng, dim, depth - 1) + ")*(" +
                   random_expr_text(rng, dim, depth - 1) + ")";
    case 3: return "sin(" + random_expr_text(rng, dim, depth - 1) + ")";
    case 4: return "cos(" + random_expr_text(rng, dim, depth - 1) + ")";
    default: return "(" + random_expr_text(rng, dim, depth - 1) + ")^" +
                    std::to_string(2 + pick(3));
    }
}

// Central finite differences, the independent oracle for all AD checks.
inline std::vector<double> fd_gradient(const Expr& e, const std::vector<double>& p,
                                       double h = 1e-5) {
    std::vector<double> g(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
        std::vector<double> hi = p, lo = p;
        hi[k] += h;
        lo[k] -= h;
        g[k] = (e.eval(hi) - e.eval(lo)) / (2 * h);
    }
    return g;
}

} // namespace grs::testutil

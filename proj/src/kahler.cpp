#include "kahler.hpp"

#include <cmath>

namespace grs {

StructureAlgebraResiduals check_structure_algebra(const Space& s,
                                                  const std::vector<Point>& points) {
    StructureAlgebraResiduals r;
    int n = s.dim();
    for (const Point& p : points) {
        Tensor f = s.structure_at(p);
        MetricAt m = s.metric_at(p);
        for (int h = 0; h < n; ++h)
            for (int i = 0; i < n; ++i) {
                double sum = 0.0;
                for (int q = 0; q < n; ++q) sum += f.at({h, q}) * f.at({q, i});
                sum += (h == i) ? 1.0 : 0.0;
                r.almost_complex = std::max(r.almost_complex, std::abs(sum));
            }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double sum = 0.0;
                for (int pp = 0; pp < n; ++pp)
                    for (int q = 0; q < n; ++q)
                        sum += m.g_sym.at({pp, q}) * f.at({pp, i}) * f.at({q, j});
                r.metric_compat = std::max(r.metric_compat, std::abs(sum - m.g_sym.at({i, j})));
                double sum_up = 0.0;
                for (int pp = 0; pp < n; ++pp)
                    for (int q = 0; q < n; ++q)
                        sum_up += m.g_sym_inverse[static_cast<std::size_t>(pp * n + q)] *
                                  f.at({i, pp}) * f.at({j, q});
                r.metric_compat_up =
                    std::max(r.metric_compat_up,
                             std::abs(m.g_sym_inverse[static_cast<std::size_t>(i * n + j)] - sum_up));
            }
    }
    return r;
}

CovConstancyResiduals check_cov_constancy(const Space& s, const std::vector<Point>& points) {
    CovConstancyResiduals r;
    const TensorField& f = s.structure_field();
    if (f.empty())
        throw SpaceError("space '" + s.name() + "' has no structure field F");
    for (const Point& p : points) {
        r.kind1 = std::max(r.kind1, cov_deriv(f, s, CovKind::K1, p).max_abs());
        r.symmetric = std::max(r.symmetric, cov_deriv_symmetric(f, s, p).max_abs());
    }
    return r;
}

TorsionRelationResiduals verify_torsion_relations(const Space& s, const std::vector<Point>& points,
                                                  double premise_tol) {
    TorsionRelationResiduals r;
    StructureAlgebraResiduals alg = check_structure_algebra(s, points);
    CovConstancyResiduals cc = check_cov_constancy(s, points);
    if (alg.almost_complex > premise_tol) { r.failed_premise = "(8)"; return r; }
    if (alg.metric_compat > premise_tol || alg.metric_compat_up > premise_tol) {
        r.failed_premise = "(9)";
        return r;
    }
    if (cc.kind1 > premise_tol) { r.failed_premise = "(10)"; return r; }
    if (cc.symmetric > premise_tol) { r.failed_premise = "(11)"; return r; }
    r.premises_ok = true;

    const TensorField& f = s.structure_field();
    int n = s.dim();
    for (const Point& p : points) {
        Tensor fv = f.eval(p);
        ConnectionAt c = s.connection_at(p);
        Tensor d2 = cov_deriv(f, s, CovKind::K2, p);
        Tensor d3 = cov_deriv(f, s, CovKind::K3, p);
        Tensor d4 = cov_deriv(f, s, CovKind::K4, p);
        r.kind2 = std::max(r.kind2, d2.max_abs());
        for (int h = 0; h < n; ++h)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    double t3 = 0.0, t4 = 0.0;
                    for (int pp = 0; pp < n; ++pp) {
                        t3 += fv.at({h, pp}) * c.torsion.at({pp, i, j});
                        t4 += fv.at({pp, i}) * c.torsion.at({h, j, pp});
                    }
                    r.kind3 = std::max(r.kind3, std::abs(d3.at({h, i, j}) - 2.0 * t3));
                    r.kind4 = std::max(r.kind4, std::abs(d4.at({h, i, j}) - 2.0 * t4));
                }
    }
    return r;
}

TraceResiduals check_trace_identities(const Space& s, const std::vector<Point>& points) {
    TraceResiduals r;
    for (const Point& p : points) {
        ConnectionAt c = s.connection_at(p);
        Tensor tt = contract(c.torsion, 0, 1); // tors^a_{ia}
        r.torsion_trace = std::max(r.torsion_trace, tt.max_abs());
        if (s.has_structure()) {
            Tensor ft = contract(s.structure_at(p), 0, 0);
            r.structure_trace = std::max(r.structure_trace, std::abs(ft[0]));
        }
    }
    return r;
}

} // namespace grs

#pragma once

#include "covderiv.hpp"

namespace grs {

// Residuals of the defining axioms of a generalized Kahlerian space of the
// first kind, sampled point-wise.  Each value is a max-abs residual over the
// supplied points.
struct StructureAlgebraResiduals {
    double almost_complex = 0.0;   // F o F + delta
    double metric_compat = 0.0;    // g_sym - F-transported g_sym, lower form
    double metric_compat_up = 0.0; // raised-index form
};

struct CovConstancyResiduals {
    double kind1 = 0.0;     // kind-1 derivative of F
    double symmetric = 0.0; // (;) derivative of F
};

struct TorsionRelationResiduals {
    bool premises_ok = false;
    std::string failed_premise; // equation tag when premises fail
    double kind2 = 0.0;         // F kind-2 derivative
    double kind3 = 0.0;         // F kind-3 derivative - 2 F^h_p tors^p_{ij}
    double kind4 = 0.0;         // F kind-4 derivative - 2 F^p_i tors^h_{jp}
};

struct TraceResiduals {
    double torsion_trace = 0.0;   // tors^a_{ia}
    double structure_trace = 0.0; // F^a_a
};

StructureAlgebraResiduals check_structure_algebra(const Space& s, const std::vector<Point>& points);
CovConstancyResiduals check_cov_constancy(const Space& s, const std::vector<Point>& points);
TorsionRelationResiduals verify_torsion_relations(const Space& s, const std::vector<Point>& points,
                                                  double premise_tol);
TraceResiduals check_trace_identities(const Space& s, const std::vector<Point>& points);

} // namespace grs

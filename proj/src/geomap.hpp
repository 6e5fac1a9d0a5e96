#pragma once

#include "covderiv.hpp"

#include <memory>

namespace grs {

struct MappingPair {
    std::shared_ptr<const Space> source;
    std::shared_ptr<const Space> target;

    int dim() const { return source->dim(); }
    static MappingPair load(const std::string& definition_text);
};

struct MappingData {
    Tensor deformation; // P^i_{jk}
    Tensor psi;         // (0,1)
    Tensor xi;          // (1,2), antisymmetric in (j,k)
};

Tensor deformation_tensor(const MappingPair& pair, const Point& p);
MappingData extract_psi_xi(const MappingPair& pair, const Point& p);

struct GeodesicFormResult {
    double residual = 0.0;
    double max_psi = 0.0; // nontriviality: below 1e-12 flags the trivial mapping
    double xi_trace = 0.0;
};
GeodesicFormResult check_geodesic_form(const MappingPair& pair, const std::vector<Point>& points);

// New space in deformed-connection mode with Gamma' = Gamma + psi d + d psi + xi.
// xi is checked for lower-slot antisymmetry at the given sample points.
Space build_mapped_connection(const Space& s, const TensorField& psi_field,
                              const TensorField& xi_field, const TensorField& metric_overlay,
                              const TensorField& structure_overlay,
                              const std::vector<Point>& antisym_check_points);

struct SideConditionResiduals {
    double min_abs_det = 0.0;   // det of target g_sym, smallest over points
    double compatibility = 0.0; // F^a_i g_sym_{aj} + F^a_j g_sym_{ai}
    double almost_complex = 0.0;
};
SideConditionResiduals check_side_conditions(const Space& target, const std::vector<Point>& points);

struct TheoremResiduals {
    double a = 0.0;         // metric condition as printed
    double a_variant = 0.0; // psi-terms taken on the transposed metric slot order
    double b = 0.0;         // structure condition
    double max_psi = 0.0;
    SideConditionResiduals side;
};
// Condition pair (a)/(b) of the geodesic-mapping theorem for the given
// derivative kind, evaluated term-by-term as printed.
TheoremResiduals check_mapping_theorem(const MappingPair& pair, CovKind kind,
                                       const std::vector<Point>& points);

struct EquitorsionResult {
    double torsion_gap = 0.0; // max |target torsion - source torsion|
};
EquitorsionResult check_equitorsion(const MappingPair& pair, const std::vector<Point>& points);

struct EquitorsionTheoremResiduals {
    bool gate_ok = false;
    double torsion_gap = 0.0;
    double a = 0.0;         // reduced condition on g_sym
    double a_variant = 0.0; // kind-4 printed variant with the full metric in one psi-term
    double b = 0.0;
    double max_psi = 0.0;
};
EquitorsionTheoremResiduals check_equitorsion_theorem(const MappingPair& pair, CovKind kind,
                                                      const std::vector<Point>& points,
                                                      double gate_tol);

} // namespace grs

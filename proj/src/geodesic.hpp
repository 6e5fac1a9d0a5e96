#pragma once

#include "geomap.hpp"

namespace grs {

struct GeodesicCurve {
    double step = 0.0;
    std::vector<Point> positions;
    std::vector<std::vector<double>> velocities;
};

// Fixed-step RK4 for x''^i + Gamma^i_{(jk)} x'^j x'^k = 0.  Only the
// symmetric connection part enters; the antisymmetric part cancels against
// x'^j x'^k.
GeodesicCurve integrate_geodesic(const Space& s, const Point& x0, const std::vector<double>& v0,
                                 int steps, double h);

// Collinearity defect of the curve against the target connection: at each
// sample r^i = (Gamma_tgt - Gamma_src)^i_{(jk)} x'^j x'^k, and the defect is
// the sine of the angle between r and x' (0 when r is parallel to the
// velocity, i.e. the path is a target geodesic up to reparametrization).
std::vector<double> mapping_geodesic_defects(const MappingPair& pair, const GeodesicCurve& curve);

} // namespace grs

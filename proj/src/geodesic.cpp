#include "geodesic.hpp"

#include <cmath>

namespace grs {

namespace {

struct State {
    std::vector<double> x, v;
};

State deriv(const Space& s, const State& st) {
    int n = s.dim();
    ConnectionAt c = s.connection_at(st.x);
    State d;
    d.x = st.v;
    d.v.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                acc -= c.gamma_sym.at({i, j, k}) * st.v[static_cast<std::size_t>(j)] *
                       st.v[static_cast<std::size_t>(k)];
        d.v[static_cast<std::size_t>(i)] = acc;
    }
    return d;
}

State axpy(const State& a, double h, const State& b) {
    State r = a;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
        r.x[i] += h * b.x[i];
        r.v[i] += h * b.v[i];
    }
    return r;
}

} // namespace

GeodesicCurve integrate_geodesic(const Space& s, const Point& x0, const std::vector<double>& v0,
                                 int steps, double h) {
    if (h <= 0.0)
        throw SpaceError("geodesic step must be positive");
    if (static_cast<int>(x0.size()) != s.dim() || static_cast<int>(v0.size()) != s.dim())
        throw SpaceError("geodesic initial condition dimension mismatch");
    GeodesicCurve curve;
    curve.step = h;
    State st{x0, v0};
    curve.positions.push_back(st.x);
    curve.velocities.push_back(st.v);
    for (int n = 0; n < steps; ++n) {
        State k1 = deriv(s, st);
        State k2 = deriv(s, axpy(st, h / 2, k1));
        State k3 = deriv(s, axpy(st, h / 2, k2));
        State k4 = deriv(s, axpy(st, h, k3));
        for (std::size_t i = 0; i < st.x.size(); ++i) {
            st.x[i] += h / 6 * (k1.x[i] + 2 * k2.x[i] + 2 * k3.x[i] + k4.x[i]);
            st.v[i] += h / 6 * (k1.v[i] + 2 * k2.v[i] + 2 * k3.v[i] + k4.v[i]);
        }
        for (double c : st.x)
            if (!std::isfinite(c))
                throw SpaceError("geodesic trajectory became non-finite");
        curve.positions.push_back(st.x);
        curve.velocities.push_back(st.v);
    }
    return curve;
}

std::vector<double> mapping_geodesic_defects(const MappingPair& pair, const GeodesicCurve& curve) {
    int n = pair.dim();
    std::vector<double> defects;
    defects.reserve(curve.positions.size());
    for (std::size_t s = 0; s < curve.positions.size(); ++s) {
        const Point& x = curve.positions[s];
        const std::vector<double>& v = curve.velocities[s];
        double vnorm2 = 0.0;
        for (double c : v) vnorm2 += c * c;
        if (vnorm2 == 0.0)
            throw SpaceError("zero-velocity geodesic sample");
        Tensor p = deformation_tensor(pair, x);
        std::vector<double> r(static_cast<std::size_t>(n), 0.0);
        double rnorm2 = 0.0, rv = 0.0;
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    acc += p.at({i, j, k}) * v[static_cast<std::size_t>(j)] *
                           v[static_cast<std::size_t>(k)];
            r[static_cast<std::size_t>(i)] = acc;
            rnorm2 += acc * acc;
            rv += acc * v[static_cast<std::size_t>(i)];
        }
        if (rnorm2 == 0.0) {
            defects.push_back(0.0);
            continue;
        }
        // |r_perp| / |r| = sin(angle between r and v); the perpendicular
        // component is formed explicitly to avoid cancellation near zero.
        double perp2 = 0.0;
        for (int i = 0; i < n; ++i) {
            double pi = r[static_cast<std::size_t>(i)] -
                        (rv / vnorm2) * v[static_cast<std::size_t>(i)];
            perp2 += pi * pi;
        }
        defects.push_back(std::sqrt(perp2 / rnorm2));
    }
    return defects;
}

} // namespace grs

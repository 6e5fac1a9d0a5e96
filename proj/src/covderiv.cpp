#include "covderiv.hpp"

namespace grs {

bool slot_orientation_a(CovKind kind, int slot, int rank) {
    (void)rank;
    switch (kind) {
    case CovKind::K1: return true;
    case CovKind::K2: return false;
    case CovKind::K3: return slot % 2 == 0;
    case CovKind::K4: return slot % 2 != 0;
    }
    return true;
}

Tensor cov_deriv_components(const Tensor& values, const Tensor& partials, const Tensor& gamma,
                            CovKind kind) {
    int n = values.dim();
    int p = values.upper(), q = values.lower();
    Tensor r = partials; // valence (p, q+1)
    std::vector<int> idx(static_cast<std::size_t>(p + q + 1));
    std::vector<int> src(static_cast<std::size_t>(p + q));
    for (std::size_t pos = 0; pos < r.size(); ++pos) {
        idx = r.unflat(pos);
        int m = idx.back();
        double sum = 0.0;
        for (int slot = 0; slot < p + q; ++slot) {
            bool a_pattern = slot_orientation_a(kind, slot, p + q);
            int own = idx[static_cast<std::size_t>(slot)];
            for (int c = 0; c < n; ++c) {
                for (int k = 0; k < p + q; ++k) src[static_cast<std::size_t>(k)] = idx[static_cast<std::size_t>(k)];
                src[static_cast<std::size_t>(slot)] = c;
                double gval = a_pattern ? gamma.at({slot < p ? own : c, slot < p ? c : own, m})
                                        : gamma.at({slot < p ? own : c, m, slot < p ? c : own});
                if (slot < p)
                    sum += gval * values.at(src); // +Gamma^i_{.m.} a^{..c..}
                else
                    sum -= gval * values.at(src); // -Gamma^c_{.m.} a_{..c..}
            }
        }
        r[pos] += sum;
    }
    return r;
}

Tensor partial_of_field(const TensorField& t, const Point& p) {
    Tensor values, partials;
    t.eval_with_partials(p, values, partials);
    return partials;
}

Tensor cov_deriv(const TensorField& t, const Space& s, CovKind kind, const Point& p) {
    Tensor values, partials;
    t.eval_with_partials(p, values, partials);
    ConnectionAt c = s.connection_at(p);
    return cov_deriv_components(values, partials, c.gamma, kind);
}

Tensor cov_deriv_symmetric(const TensorField& t, const Space& s, const Point& p) {
    Tensor values, partials;
    t.eval_with_partials(p, values, partials);
    ConnectionAt c = s.connection_at(p);
    return cov_deriv_components(values, partials, c.gamma_sym, CovKind::K1);
}

} // namespace grs

#include "geomap.hpp"

#include <cmath>
#include <limits>

namespace grs {

namespace {

struct Overlay {
    std::string name;
    TensorField metric;
    TensorField structure;
};

// g/F/name subset of a space block, for deformed targets that carry a metric
// overlay instead of their own connection.
Overlay collect_overlay(const std::vector<DefEntry>& entries, int dim, const std::string& label) {
    Overlay o;
    bool any_g = false, any_f = false;
    std::vector<bool> diag(static_cast<std::size_t>(dim), false);
    TensorField g(dim, 0, 2), f(dim, 1, 1);
    for (const auto& e : entries) {
        auto expr = [&](const std::string& text) {
            try {
                return Expr::parse(text, dim);
            } catch (const ParseError& pe) {
                throw SpaceError("bad expression in [" + label + "] line " +
                                 std::to_string(e.line) + ": " + pe.what());
            }
        };
        auto need_idx = [&](std::size_t count) {
            if (e.indices.size() != count || e.indices[0] < 1 || e.indices[0] > dim ||
                e.indices[count - 1] < 1 || e.indices[count - 1] > dim)
                throw SpaceError("bad indices for '" + e.key + "' in [" + label + "] line " +
                                 std::to_string(e.line));
        };
        if (e.key == "name") {
            o.name = e.value;
        } else if (e.key == "g") {
            need_idx(2);
            any_g = true;
            if (e.indices[0] == e.indices[1]) diag[static_cast<std::size_t>(e.indices[0] - 1)] = true;
            g.at({e.indices[0] - 1, e.indices[1] - 1}) = expr(e.value);
        } else if (e.key == "F") {
            need_idx(2);
            any_f = true;
            f.at({e.indices[0] - 1, e.indices[1] - 1}) = expr(e.value);
        } else if (e.key == "deformed_from" || e.key == "dimension") {
            // handled by the caller
        } else {
            throw SpaceError("key '" + e.key + "' is not valid in a deformed block [" + label +
                             "] (line " + std::to_string(e.line) + ")");
        }
    }
    if (any_g) {
        for (int i = 0; i < dim; ++i)
            if (!diag[static_cast<std::size_t>(i)])
                throw SpaceError("diagonal metric component g[" + std::to_string(i + 1) + "][" +
                                 std::to_string(i + 1) + "] not specified in [" + label + "]");
        o.metric = std::move(g);
    }
    if (any_f) o.structure = std::move(f);
    return o;
}

struct MappingFields {
    TensorField psi;
    TensorField xi;
};

MappingFields collect_mapping(const std::vector<DefEntry>& entries, int dim) {
    MappingFields m;
    m.psi = TensorField(dim, 0, 1);
    m.xi = TensorField(dim, 1, 2);
    for (const auto& e : entries) {
        auto expr = [&](const std::string& text) {
            try {
                return Expr::parse(text, dim);
            } catch (const ParseError& pe) {
                throw SpaceError("bad expression in [mapping] line " + std::to_string(e.line) +
                                 ": " + pe.what());
            }
        };
        if (e.key == "psi") {
            if (e.indices.size() != 1 || e.indices[0] < 1 || e.indices[0] > dim)
                throw SpaceError("bad psi index in [mapping] line " + std::to_string(e.line));
            m.psi.at({e.indices[0] - 1}) = expr(e.value);
        } else if (e.key == "xi") {
            if (e.indices.size() != 3)
                throw SpaceError("xi needs three indices in [mapping] line " +
                                 std::to_string(e.line));
            for (int idx : e.indices)
                if (idx < 1 || idx > dim)
                    throw SpaceError("xi index out of range in [mapping] line " +
                                     std::to_string(e.line));
            m.xi.at({e.indices[0] - 1, e.indices[1] - 1, e.indices[2] - 1}) = expr(e.value);
        } else {
            throw SpaceError("unknown key '" + e.key + "' in [mapping] line " +
                             std::to_string(e.line));
        }
    }
    return m;
}

void check_xi_antisym(const TensorField& xi, const std::vector<Point>& points) {
    for (const Point& p : points) {
        Tensor x = xi.eval(p);
        SymSplit sp = split_sym_antisym(x, 0, 1, false);
        if (sp.sym.max_abs() > 1e-12)
            throw SpaceError("xi field is not antisymmetric in its lower slots");
    }
}

std::vector<Point> box_corner_samples(int dim, double lo, double hi) {
    // crude fixed probe set for symbolic sanity checks
    std::vector<Point> pts;
    pts.push_back(Point(static_cast<std::size_t>(dim), (lo + hi) / 2));
    Point a(static_cast<std::size_t>(dim));
    for (int k = 0; k < dim; ++k) a[static_cast<std::size_t>(k)] = lo + (hi - lo) * (k + 1) / (dim + 2);
    pts.push_back(a);
    return pts;
}

} // namespace

MappingPair MappingPair::load(const std::string& definition_text) {
    std::vector<DefEntry> all = parse_def_text(definition_text);
    std::vector<DefEntry> src, tgt, map;
    for (auto& e : all) {
        if (e.section == "source") src.push_back(e);
        else if (e.section == "target") tgt.push_back(e);
        else if (e.section == "mapping") map.push_back(e);
        else
            throw SpaceError("pair files need [source]/[target]/[mapping] sections (line " +
                             std::to_string(e.line) + ")");
    }
    if (src.empty() || tgt.empty())
        throw SpaceError("pair file needs both a [source] and a [target] block");

    auto deformed_key = [](const std::vector<DefEntry>& entries) -> std::string {
        for (const auto& e : entries)
            if (e.key == "deformed_from") return e.value;
        return "";
    };
    std::string src_def = deformed_key(src);
    std::string tgt_def = deformed_key(tgt);
    if (!src_def.empty() && !tgt_def.empty())
        throw SpaceError("only one block of a pair may be deformed_from the other");

    MappingPair pair;
    if (src_def.empty() && tgt_def.empty()) {
        pair.source = std::make_shared<Space>(Space::from_entries(src, "source"));
        pair.target = std::make_shared<Space>(Space::from_entries(tgt, "target"));
    } else if (tgt_def == "source") {
        pair.source = std::make_shared<Space>(Space::from_entries(src, "source"));
        int n = pair.source->dim();
        MappingFields mf = collect_mapping(map, n);
        Overlay o = collect_overlay(tgt, n, "target");
        check_xi_antisym(mf.xi, box_corner_samples(n, pair.source->box_lo(), pair.source->box_hi()));
        pair.target = std::make_shared<Space>(
            Space::deformed(pair.source, std::move(mf.psi), std::move(mf.xi), +1.0,
                            std::move(o.metric), std::move(o.structure),
                            o.name.empty() ? pair.source->name() + " (mapped)" : o.name));
    } else if (src_def == "target") {
        pair.target = std::make_shared<Space>(Space::from_entries(tgt, "target"));
        int n = pair.target->dim();
        MappingFields mf = collect_mapping(map, n);
        Overlay o = collect_overlay(src, n, "source");
        check_xi_antisym(mf.xi, box_corner_samples(n, pair.target->box_lo(), pair.target->box_hi()));
        pair.source = std::make_shared<Space>(
            Space::deformed(pair.target, std::move(mf.psi), std::move(mf.xi), -1.0,
                            std::move(o.metric), std::move(o.structure),
                            o.name.empty() ? pair.target->name() + " (preimage)" : o.name));
    } else {
        throw SpaceError("deformed_from must name the other block ('source' or 'target')");
    }
    if (pair.source->dim() != pair.target->dim())
        throw SpaceError("source and target dimensions differ");
    return pair;
}

Tensor deformation_tensor(const MappingPair& pair, const Point& p) {
    Tensor gs = pair.source->connection_at(p).gamma;
    Tensor gt = pair.target->connection_at(p).gamma;
    gt -= gs;
    return gt;
}

MappingData extract_psi_xi(const MappingPair& pair, const Point& p) {
    MappingData d;
    d.deformation = deformation_tensor(pair, p);
    int n = pair.dim();
    Tensor trace = contract(d.deformation, 0, 1); // P^a_{ia}
    d.psi = trace;
    d.psi *= 1.0 / (n + 1);
    SymSplit sp = split_sym_antisym(d.deformation, 0, 1, false);
    d.xi = std::move(sp.antisym);
    return d;
}

GeodesicFormResult check_geodesic_form(const MappingPair& pair, const std::vector<Point>& points) {
    GeodesicFormResult r;
    int n = pair.dim();
    for (const Point& p : points) {
        MappingData d = extract_psi_xi(pair, p);
        r.max_psi = std::max(r.max_psi, d.psi.max_abs());
        r.xi_trace = std::max(r.xi_trace, contract(d.xi, 0, 1).max_abs());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double v = d.deformation.at({i, j, k}) - d.xi.at({i, j, k});
                    if (i == j) v -= d.psi[static_cast<std::size_t>(k)];
                    if (i == k) v -= d.psi[static_cast<std::size_t>(j)];
                    r.residual = std::max(r.residual, std::abs(v));
                }
    }
    return r;
}

Space build_mapped_connection(const Space& s, const TensorField& psi_field,
                              const TensorField& xi_field, const TensorField& metric_overlay,
                              const TensorField& structure_overlay,
                              const std::vector<Point>& antisym_check_points) {
    check_xi_antisym(xi_field, antisym_check_points);
    return Space::deformed(std::make_shared<Space>(s), psi_field, xi_field, +1.0, metric_overlay,
                           structure_overlay, s.name() + " (mapped)");
}

SideConditionResiduals check_side_conditions(const Space& target,
                                             const std::vector<Point>& points) {
    SideConditionResiduals r;
    r.min_abs_det = std::numeric_limits<double>::infinity();
    int n = target.dim();
    for (const Point& p : points) {
        MetricAt m = target.metric_at(p);
        Tensor f = target.structure_at(p);
        r.min_abs_det = std::min(r.min_abs_det, std::abs(m.det_sym));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double compat = 0.0;
                for (int a = 0; a < n; ++a)
                    compat += f.at({a, i}) * m.g_sym.at({a, j}) + f.at({a, j}) * m.g_sym.at({a, i});
                r.compatibility = std::max(r.compatibility, std::abs(compat));
                double ff = (i == j) ? 1.0 : 0.0;
                for (int a = 0; a < n; ++a) ff += f.at({i, a}) * f.at({a, j});
                r.almost_complex = std::max(r.almost_complex, std::abs(ff));
            }
    }
    return r;
}

namespace {

// Antisymmetric part of the metric with matching partials.
void antisym_part_with_partials(const MetricAt& m, Tensor& values, Tensor& partials) {
    int n = m.g.dim();
    values = m.g_antisym;
    partials = Tensor(n, 0, 3);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                partials.at({i, j, k}) =
                    0.5 * (m.g_partials.at({i, j, k}) - m.g_partials.at({j, i, k}));
}

void sym_part_with_partials(const MetricAt& m, Tensor& values, Tensor& partials) {
    int n = m.g.dim();
    values = m.g_sym;
    partials = Tensor(n, 0, 3);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                partials.at({i, j, k}) =
                    0.5 * (m.g_partials.at({i, j, k}) + m.g_partials.at({j, i, k}));
}

// xi index pair for the metric slot at `slot` (0 or 1): pattern A gives
// (own, k), pattern B gives (k, own) -- the same ordering the connection
// orientation of that slot uses.
double xi_term(const Tensor& xi, CovKind kind, int slot, int alpha, int own, int k) {
    return slot_orientation_a(kind, slot, 2) ? xi.at({alpha, own, k}) : xi.at({alpha, k, own});
}

} // namespace

TheoremResiduals check_mapping_theorem(const MappingPair& pair, CovKind kind,
                                       const std::vector<Point>& points) {
    if (!pair.target->has_metric())
        throw SpaceError("mapping-theorem check needs a target metric");
    if (!pair.target->has_structure())
        throw SpaceError("mapping-theorem check needs a target structure F");
    TheoremResiduals r;
    r.side = check_side_conditions(*pair.target, points);
    int n = pair.dim();
    const bool bar_term_in_b = kind == CovKind::K3 || kind == CovKind::K4;

    for (const Point& p : points) {
        MappingData d = extract_psi_xi(pair, p);
        r.max_psi = std::max(r.max_psi, d.psi.max_abs());
        Tensor gamma_src = pair.source->connection_at(p).gamma;
        Tensor gamma_tgt = pair.target->connection_at(p).gamma;

        MetricAt m = pair.target->metric_at(p);
        Tensor lhs_a = cov_deriv_components(m.g, m.g_partials, gamma_src, kind);

        Tensor gv, gv_part;
        antisym_part_with_partials(m, gv, gv_part);
        Tensor bar_a = cov_deriv_components(gv, gv_part, gamma_tgt, kind);

        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double psi_terms = 2.0 * d.psi[static_cast<std::size_t>(k)] * m.g.at({i, j}) +
                                       d.psi[static_cast<std::size_t>(j)] * m.g.at({i, k});
                    double xi_terms = 0.0;
                    for (int a = 0; a < n; ++a)
                        xi_terms += xi_term(d.xi, kind, 0, a, i, k) * m.g.at({a, j}) +
                                    xi_term(d.xi, kind, 1, a, j, k) * m.g.at({i, a});
                    double common = bar_a.at({i, j, k}) + psi_terms + xi_terms;
                    double printed =
                        common + d.psi[static_cast<std::size_t>(i)] * m.g.at({j, k});
                    double variant =
                        common + d.psi[static_cast<std::size_t>(i)] * m.g.at({k, j});
                    r.a = std::max(r.a, std::abs(lhs_a.at({i, j, k}) - printed));
                    r.a_variant = std::max(r.a_variant, std::abs(lhs_a.at({i, j, k}) - variant));
                }

        Tensor fbar, fbar_part;
        pair.target->structure_field().eval_with_partials(p, fbar, fbar_part);
        Tensor lhs_b = cov_deriv_components(fbar, fbar_part, gamma_src, kind);
        Tensor bar_b = bar_term_in_b ? cov_deriv_components(fbar, fbar_part, gamma_tgt, kind)
                                     : Tensor(n, 1, 2);

        for (int h = 0; h < n; ++h)
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) {
                    double rhs = bar_b.at({h, i, k}) +
                                 d.psi[static_cast<std::size_t>(i)] * fbar.at({h, k});
                    if (h == k)
                        for (int a = 0; a < n; ++a)
                            rhs -= fbar.at({a, i}) * d.psi[static_cast<std::size_t>(a)];
                    for (int a = 0; a < n; ++a)
                        rhs += -xi_term(d.xi, kind, 0, h, a, k) * fbar.at({a, i}) +
                               xi_term(d.xi, kind, 1, a, i, k) * fbar.at({h, a});
                    r.b = std::max(r.b, std::abs(lhs_b.at({h, i, k}) - rhs));
                }
    }
    return r;
}

EquitorsionResult check_equitorsion(const MappingPair& pair, const std::vector<Point>& points) {
    EquitorsionResult r;
    for (const Point& p : points) {
        Tensor ts = pair.source->connection_at(p).torsion;
        Tensor tt = pair.target->connection_at(p).torsion;
        tt -= ts;
        r.torsion_gap = std::max(r.torsion_gap, tt.max_abs());
    }
    return r;
}

EquitorsionTheoremResiduals check_equitorsion_theorem(const MappingPair& pair, CovKind kind,
                                                      const std::vector<Point>& points,
                                                      double gate_tol) {
    EquitorsionTheoremResiduals r;
    r.torsion_gap = check_equitorsion(pair, points).torsion_gap;
    if (r.torsion_gap > gate_tol)
        return r; // not an equitorsion mapping; conditions not evaluated
    r.gate_ok = true;

    if (!pair.target->has_metric())
        throw SpaceError("equitorsion-theorem check needs a target metric");
    if (!pair.target->has_structure())
        throw SpaceError("equitorsion-theorem check needs a target structure F");
    int n = pair.dim();
    const bool bar_term_in_b = kind == CovKind::K3 || kind == CovKind::K4;

    for (const Point& p : points) {
        MappingData d = extract_psi_xi(pair, p);
        r.max_psi = std::max(r.max_psi, d.psi.max_abs());
        Tensor gamma_src = pair.source->connection_at(p).gamma;
        MetricAt m = pair.target->metric_at(p);

        Tensor gu, gu_part;
        sym_part_with_partials(m, gu, gu_part);
        Tensor lhs_a = cov_deriv_components(gu, gu_part, gamma_src, kind);

        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    double common = 2.0 * d.psi[static_cast<std::size_t>(k)] * gu.at({i, j}) +
                                    d.psi[static_cast<std::size_t>(j)] * gu.at({i, k});
                    double reduced = common + d.psi[static_cast<std::size_t>(i)] * gu.at({j, k});
                    // kind-4 theorem prints one psi-term on the full metric
                    double printed4 = common + d.psi[static_cast<std::size_t>(i)] * m.g.at({j, k});
                    r.a = std::max(r.a, std::abs(lhs_a.at({i, j, k}) - reduced));
                    r.a_variant = std::max(
                        r.a_variant,
                        std::abs(lhs_a.at({i, j, k}) - (kind == CovKind::K4 ? printed4 : reduced)));
                }

        Tensor fbar, fbar_part;
        pair.target->structure_field().eval_with_partials(p, fbar, fbar_part);
        Tensor lhs_b = cov_deriv_components(fbar, fbar_part, gamma_src, kind);
        Tensor bar_b = bar_term_in_b
                           ? cov_deriv_components(fbar, fbar_part,
                                                  pair.target->connection_at(p).gamma, kind)
                           : Tensor(n, 1, 2);
        for (int h = 0; h < n; ++h)
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) {
                    double rhs = bar_b.at({h, i, k}) +
                                 d.psi[static_cast<std::size_t>(i)] * fbar.at({h, k});
                    if (h == k)
                        for (int a = 0; a < n; ++a)
                            rhs -= fbar.at({a, i}) * d.psi[static_cast<std::size_t>(a)];
                    r.b = std::max(r.b, std::abs(lhs_b.at({h, i, k}) - rhs));
                }
    }
    return r;
}

} // namespace grs

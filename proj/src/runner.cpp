#include "runner.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace grs {

namespace {

double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool excluded(const Space& s, const Point& p) {
    if (!s.exclude()) return false;
    return s.exclude()->eval(p) <= 0.0;
}

std::vector<Point> sample_box(int dim, double lo, double hi, int count, unsigned long long seed,
                              const std::function<bool(const Point&)>& reject) {
    std::mt19937_64 rng(seed);
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(count));
    int attempts = 0;
    while (static_cast<int>(pts.size()) < count) {
        if (++attempts > 1000 * count + 1000)
            throw SpaceError("could not sample enough points outside the excluded region");
        Point p(static_cast<std::size_t>(dim));
        for (int k = 0; k < dim; ++k) p[static_cast<std::size_t>(k)] = lo + (hi - lo) * unit_double(rng);
        if (reject(p)) continue;
        pts.push_back(std::move(p));
    }
    return pts;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

const char* kind_theorem(CovKind k) {
    switch (k) {
    case CovKind::K1: return "T2.3";
    case CovKind::K2: return "T2.4";
    case CovKind::K3: return "T2.5";
    case CovKind::K4: return "T2.6";
    }
    return "?";
}
const char* kind_equitorsion_theorem(CovKind k) {
    switch (k) {
    case CovKind::K1: return "T2.8";
    case CovKind::K2: return "T2.9";
    case CovKind::K3: return "T2.10";
    case CovKind::K4: return "T2.11";
    }
    return "?";
}

std::vector<CovKind> selected_kinds(int kind) {
    if (kind == 0) return {CovKind::K1, CovKind::K2, CovKind::K3, CovKind::K4};
    return {static_cast<CovKind>(kind)};
}

CheckReport make_report(const std::string& sub, const std::string& text, const std::string& path,
                        const RunOptions& opt, double lo, double hi) {
    CheckReport rep;
    rep.subcommand = sub;
    rep.input_path = path;
    rep.input_digest = fnv1a_digest(text);
    rep.points = opt.points;
    rep.seed = opt.seed;
    rep.tol = opt.tol;
    rep.kind_selection = opt.kind == 0 ? "all" : std::to_string(opt.kind);
    rep.box_lo = lo;
    rep.box_hi = hi;
    return rep;
}

} // namespace

std::vector<Point> sample_points(const Space& s, int count, unsigned long long seed) {
    return sample_box(s.dim(), s.box_lo(), s.box_hi(), count, seed,
                      [&](const Point& p) { return excluded(s, p); });
}

std::vector<Point> sample_points_pair(const MappingPair& pair, int count,
                                      unsigned long long seed) {
    const Space& s = *pair.source;
    return sample_box(s.dim(), s.box_lo(), s.box_hi(), count, seed, [&](const Point& p) {
        return excluded(*pair.source, p) || excluded(*pair.target, p);
    });
}

CheckReport run_check_space(const std::string& text, const std::string& path,
                            const RunOptions& opt) {
    Space s = Space::load(text);
    CheckReport rep = make_report("check-space", text, path, opt, s.box_lo(), s.box_hi());
    std::vector<Point> pts = sample_points(s, opt.points, opt.seed);

    double split_res = 0.0, inv_res = 0.0, antisym_max = 0.0, det_min =
        std::numeric_limits<double>::infinity();
    double conn_split = 0.0, torsion_max = 0.0;
    int n = s.dim();
    for (const Point& p : pts) {
        if (s.has_metric()) {
            MetricAt m = s.metric_at(p);
            Tensor recon = m.g_sym + m.g_antisym;
            recon -= m.g;
            split_res = std::max(split_res, recon.max_abs());
            antisym_max = std::max(antisym_max, m.g_antisym.max_abs());
            det_min = std::min(det_min, std::abs(m.det_sym));
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) {
                    double sum = (i == k) ? -1.0 : 0.0;
                    for (int j = 0; j < n; ++j)
                        sum += m.g_sym.at({i, j}) * m.g_sym_inverse[static_cast<std::size_t>(j * n + k)];
                    inv_res = std::max(inv_res, std::abs(sum));
                }
        }
        ConnectionAt c = s.connection_at(p);
        Tensor recon = c.gamma_sym + c.torsion;
        recon -= c.gamma;
        conn_split = std::max(conn_split, recon.max_abs());
        torsion_max = std::max(torsion_max, c.torsion.max_abs());
    }

    if (s.has_metric()) {
        rep.checks.push_back({"metric-split-reconstruction", "(2)", split_res, 1e-12,
                              split_res <= 1e-12 ? Verdict::Pass : Verdict::Fail, {}});
        rep.checks.push_back({"metric-antisymmetric-part", "(2)", antisym_max, 0.0, Verdict::Info,
                              {}});
        rep.checks.push_back({"symmetric-part-inverse", "(3)", inv_res, 1e-12,
                              inv_res <= 1e-12 ? Verdict::Pass : Verdict::Fail,
                              {"min |det g_sym| = " + fmt(det_min)}});
    }
    rep.checks.push_back({"connection-split-reconstruction", "(6)", conn_split, 1e-12,
                          conn_split <= 1e-12 ? Verdict::Pass : Verdict::Fail, {}});
    rep.checks.push_back({"torsion-magnitude", "(6)", torsion_max, 0.0, Verdict::Info, {}});
    return rep;
}

CheckReport run_check_kahler(const std::string& text, const std::string& path,
                             const RunOptions& opt) {
    Space s = Space::load(text);
    CheckReport rep = make_report("check-kahler", text, path, opt, s.box_lo(), s.box_hi());
    if (!s.has_structure())
        throw SpaceError("check-kahler needs a structure field F");
    std::vector<Point> pts = sample_points(s, opt.points, opt.seed);
    double tol = opt.tol;

    StructureAlgebraResiduals alg = check_structure_algebra(s, pts);
    CovConstancyResiduals cc = check_cov_constancy(s, pts);
    auto pf = [&](double r) { return r <= tol ? Verdict::Pass : Verdict::Fail; };
    rep.checks.push_back({"almost-complex-structure", "(8)", alg.almost_complex, tol,
                          pf(alg.almost_complex), {}});
    rep.checks.push_back({"metric-compatibility", "(9)", alg.metric_compat, tol,
                          pf(alg.metric_compat), {}});
    rep.checks.push_back({"metric-compatibility-raised", "(9)", alg.metric_compat_up, tol,
                          pf(alg.metric_compat_up), {}});
    rep.checks.push_back({"kind-1-constancy", "(10)", cc.kind1, tol, pf(cc.kind1), {}});
    rep.checks.push_back(
        {"symmetric-part-constancy", "(11)", cc.symmetric, tol, pf(cc.symmetric), {}});

    // F_{ij} and F^{ij} antisymmetry, a consequence of (8)+(9)
    double f_low_antisym = 0.0, f_up_antisym = 0.0;
    int n = s.dim();
    for (const Point& p : pts) {
        MetricAt m = s.metric_at(p);
        Tensor f = s.structure_at(p);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double lo = 0.0, up = 0.0;
                for (int q = 0; q < n; ++q) {
                    lo += f.at({q, j}) * m.g_sym.at({q, i}) + f.at({q, i}) * m.g_sym.at({q, j});
                    up += f.at({j, q}) * m.g_sym_inverse[static_cast<std::size_t>(q * n + i)] +
                          f.at({i, q}) * m.g_sym_inverse[static_cast<std::size_t>(q * n + j)];
                }
                f_low_antisym = std::max(f_low_antisym, std::abs(lo));
                f_up_antisym = std::max(f_up_antisym, std::abs(up));
            }
    }
    bool algebra_ok = alg.almost_complex <= tol && alg.metric_compat <= tol;
    double f_antisym = std::max(f_low_antisym, f_up_antisym);
    rep.checks.push_back({"structure-antisymmetry", "(8-9)", f_antisym, tol,
                          algebra_ok ? pf(f_antisym) : Verdict::Info,
                          algebra_ok ? std::vector<std::string>{}
                                     : std::vector<std::string>{"premises (8)-(9) fail"}});

    TorsionRelationResiduals tr = verify_torsion_relations(s, pts, tol);
    if (tr.premises_ok) {
        rep.checks.push_back({"kind-2-constancy", "(12)", tr.kind2, tol, pf(tr.kind2), {}});
        rep.checks.push_back({"kind-3-torsion-relation", "(12)", tr.kind3, tol, pf(tr.kind3), {}});
        rep.checks.push_back({"kind-4-torsion-relation", "(12)", tr.kind4, tol, pf(tr.kind4), {}});
    } else {
        rep.checks.push_back({"theorem-1.2-relations", "(12)", 0.0, tol, Verdict::Info,
                              {"premises fail at Eq " + tr.failed_premise + "; no verdict"}});
    }

    TraceResiduals tri = check_trace_identities(s, pts);
    rep.checks.push_back(
        {"torsion-trace", "(16)", tri.torsion_trace, 0.0, Verdict::Info, {}});
    rep.checks.push_back(
        {"structure-trace", "(16)", tri.structure_trace, 0.0, Verdict::Info, {}});
    return rep;
}

CheckReport run_check_mapping(const std::string& text, const std::string& path,
                              const RunOptions& opt) {
    MappingPair pair = MappingPair::load(text);
    CheckReport rep = make_report("check-mapping", text, path, opt, pair.source->box_lo(),
                                  pair.source->box_hi());
    std::vector<Point> pts = sample_points_pair(pair, opt.points, opt.seed);
    double tol = opt.tol;
    auto pf = [&](double r) { return r <= tol ? Verdict::Pass : Verdict::Fail; };

    double p_max = 0.0;
    for (const Point& p : pts) p_max = std::max(p_max, deformation_tensor(pair, p).max_abs());
    rep.checks.push_back({"deformation-magnitude", "(13)", p_max, 0.0, Verdict::Info, {}});

    GeodesicFormResult gf = check_geodesic_form(pair, pts);
    std::vector<std::string> notes;
    if (gf.max_psi < 1e-12) notes.push_back("trivial mapping (psi = 0)");
    rep.checks.push_back({"geodesic-deformation-form", "(14)", gf.residual, tol, pf(gf.residual),
                          notes});
    rep.checks.push_back({"xi-trace", "(16)", gf.xi_trace, 0.0, Verdict::Info, {}});

    bool full_target = pair.target->has_metric() && pair.target->has_structure();
    if (full_target) {
        SideConditionResiduals side = check_side_conditions(*pair.target, pts);
        rep.checks.push_back({"target-metric-nondegenerate", "(19)", side.min_abs_det, 0.0,
                              side.min_abs_det >= 1e-12 ? Verdict::Pass : Verdict::Fail,
                              {"residual column shows min |det|"}});
        rep.checks.push_back({"target-structure-compatibility", "(19)", side.compatibility, tol,
                              pf(side.compatibility), {}});
        rep.checks.push_back({"target-almost-complex", "(19)", side.almost_complex, tol,
                              pf(side.almost_complex), {}});

        for (CovKind k : selected_kinds(opt.kind)) {
            TheoremResiduals tr = check_mapping_theorem(pair, k, pts);
            std::string th = kind_theorem(k);
            std::vector<std::string> na;
            if (tr.max_psi < 1e-12) na.push_back("trivial mapping (psi = 0)");
            if (std::abs(tr.a - tr.a_variant) > 1e-12)
                na.push_back("transposed-metric variant residual " + fmt(tr.a_variant));
            rep.checks.push_back({"mapping-condition-metric-kind-" +
                                      std::to_string(static_cast<int>(k)),
                                  th + "(a)", tr.a, tol, pf(tr.a), na});
            rep.checks.push_back({"mapping-condition-structure-kind-" +
                                      std::to_string(static_cast<int>(k)),
                                  th + "(b)", tr.b, tol, pf(tr.b), {}});
        }
    } else {
        rep.checks.push_back({"mapping-theorems", "T2.3-T2.6", 0.0, tol, Verdict::Info,
                              {"skipped: target has no metric/structure fields"}});
    }

    EquitorsionResult eq = check_equitorsion(pair, pts);
    bool equitorsion = eq.torsion_gap <= tol;
    rep.checks.push_back({"equitorsion-gate", "(25)", eq.torsion_gap, tol,
                          equitorsion ? Verdict::Pass : Verdict::Info,
                          equitorsion ? std::vector<std::string>{}
                                      : std::vector<std::string>{
                                            "not equitorsion; reduced conditions skipped"}});
    if (equitorsion && full_target) {
        for (CovKind k : selected_kinds(opt.kind)) {
            EquitorsionTheoremResiduals er = check_equitorsion_theorem(pair, k, pts, tol);
            std::string th = kind_equitorsion_theorem(k);
            std::vector<std::string> na;
            if (er.max_psi < 1e-12) na.push_back("trivial mapping (psi = 0)");
            if (std::abs(er.a - er.a_variant) > 1e-12)
                na.push_back("as-printed variant residual " + fmt(er.a_variant));
            rep.checks.push_back({"equitorsion-condition-metric-kind-" +
                                      std::to_string(static_cast<int>(k)),
                                  th + "(a)", er.a, tol, pf(er.a), na});
            rep.checks.push_back({"equitorsion-condition-structure-kind-" +
                                      std::to_string(static_cast<int>(k)),
                                  th + "(b)", er.b, tol, pf(er.b), {}});
        }
    }
    return rep;
}

CheckReport run_geodesic_test(const std::string& text, const std::string& path,
                              const RunOptions& opt) {
    MappingPair pair = MappingPair::load(text);
    CheckReport rep = make_report("geodesic-test", text, path, opt, pair.source->box_lo(),
                                  pair.source->box_hi());
    int n = pair.dim();
    // initial points from the middle half of the box, velocities on the unit sphere
    double lo = pair.source->box_lo(), hi = pair.source->box_hi();
    double mid = (lo + hi) / 2, half = (hi - lo) / 4;
    std::mt19937_64 rng(opt.seed);
    double max_defect = 0.0;
    int curves = 0;
    for (int c = 0; c < opt.geodesic_count; ++c) {
        Point x0(static_cast<std::size_t>(n));
        std::vector<double> v0(static_cast<std::size_t>(n));
        double norm2 = 0.0;
        for (int k = 0; k < n; ++k) {
            x0[static_cast<std::size_t>(k)] = mid + half * (2 * unit_double(rng) - 1);
            v0[static_cast<std::size_t>(k)] = 2 * unit_double(rng) - 1;
            norm2 += v0[static_cast<std::size_t>(k)] * v0[static_cast<std::size_t>(k)];
        }
        if (norm2 < 1e-6) { --c; continue; }
        double inv = 1.0 / std::sqrt(norm2);
        for (double& v : v0) v *= inv;
        GeodesicCurve curve = integrate_geodesic(*pair.source, x0, v0, opt.geodesic_steps,
                                                 opt.geodesic_step);
        for (double d : mapping_geodesic_defects(pair, curve)) max_defect = std::max(max_defect, d);
        ++curves;
    }
    std::vector<std::string> notes{std::to_string(curves) + " curves, " +
                                   std::to_string(opt.geodesic_steps) + " steps, h = " +
                                   fmt(opt.geodesic_step)};
    rep.checks.push_back({"geodesic-collinearity-defect", "D2.1", max_defect, opt.geodesic_tol,
                          max_defect <= opt.geodesic_tol ? Verdict::Pass : Verdict::Fail, notes});
    return rep;
}

std::string build_pair_text(const std::string& text) {
    std::vector<DefEntry> all = parse_def_text(text);
    bool have_source = false, have_mapping = false;
    for (const auto& e : all) {
        if (e.section == "source") have_source = true;
        if (e.section == "mapping") have_mapping = true;
        if (e.section == "target" && e.key == "deformed_from")
            throw SpaceError("input to build-pair must not already contain a deformed target");
    }
    if (!have_source || !have_mapping)
        throw SpaceError("build-pair needs [source] and [mapping] blocks");

    auto emit_entry = [](std::ostringstream& out, const DefEntry& e) {
        out << e.key;
        for (int idx : e.indices) out << '[' << idx << ']';
        out << " = \"" << e.value << "\"\n";
    };
    std::ostringstream out;
    out << "[source]\n";
    for (const auto& e : all)
        if (e.section == "source") emit_entry(out, e);
    out << "\n[target]\n";
    out << "deformed_from = \"source\"\n";
    for (const auto& e : all)
        if (e.section == "target") emit_entry(out, e);
    out << "\n[mapping]\n";
    for (const auto& e : all)
        if (e.section == "mapping") emit_entry(out, e);

    std::string result = out.str();
    MappingPair::load(result); // validate before handing it back
    return result;
}

} // namespace grs

#include "space.hpp"

#include <cmath>

namespace grs {

std::vector<double> invert_matrix(const std::vector<double>& m, int n, double* det_out) {
    std::vector<double> a = m;
    std::vector<double> inv(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i * n + i)] = 1.0;
    double det = 1.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        double best = std::abs(a[static_cast<std::size_t>(col * n + col)]);
        for (int r = col + 1; r < n; ++r) {
            double v = std::abs(a[static_cast<std::size_t>(r * n + col)]);
            if (v > best) { best = v; pivot = r; }
        }
        if (pivot != col) {
            for (int c = 0; c < n; ++c) {
                std::swap(a[static_cast<std::size_t>(col * n + c)],
                          a[static_cast<std::size_t>(pivot * n + c)]);
                std::swap(inv[static_cast<std::size_t>(col * n + c)],
                          inv[static_cast<std::size_t>(pivot * n + c)]);
            }
            det = -det;
        }
        double p = a[static_cast<std::size_t>(col * n + col)];
        det *= p;
        if (std::abs(p) < 1e-300)
            throw SingularMetricError("singular symmetric metric part");
        double ip = 1.0 / p;
        for (int c = 0; c < n; ++c) {
            a[static_cast<std::size_t>(col * n + c)] *= ip;
            inv[static_cast<std::size_t>(col * n + c)] *= ip;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = a[static_cast<std::size_t>(r * n + col)];
            if (f == 0.0) continue;
            for (int c = 0; c < n; ++c) {
                a[static_cast<std::size_t>(r * n + c)] -= f * a[static_cast<std::size_t>(col * n + c)];
                inv[static_cast<std::size_t>(r * n + c)] -=
                    f * inv[static_cast<std::size_t>(col * n + c)];
            }
        }
    }
    if (det_out) *det_out = det;
    if (std::abs(det) < 1e-12)
        throw SingularMetricError("singular symmetric metric part (|det| < 1e-12)");
    return inv;
}

Space Space::load(const std::string& definition_text) {
    return from_entries(parse_def_text(definition_text), "");
}

Space Space::from_entries(const std::vector<DefEntry>& entries, const std::string& label) {
    auto where = [&](const DefEntry& e) {
        return (label.empty() ? std::string() : "[" + label + "] ") + "line " +
               std::to_string(e.line);
    };

    int dim = 0;
    for (const auto& e : entries) {
        if (e.key == "dimension") {
            try {
                dim = std::stoi(e.value);
            } catch (const std::exception&) {
                throw SpaceError("bad dimension value at " + where(e));
            }
        }
    }
    if (dim < 2)
        throw SpaceError("space definition needs 'dimension = N' with N >= 2" +
                         (label.empty() ? "" : " in [" + label + "]"));

    Space s;
    s.dim_ = dim;
    bool any_g = false, any_f = false, any_conn = false;
    std::vector<bool> diag_given(static_cast<std::size_t>(dim), false);
    TensorField g(dim, 0, 2), f(dim, 1, 1), conn(dim, 1, 2);

    for (const auto& e : entries) {
        auto parse_expr = [&](const std::string& text) {
            try {
                return Expr::parse(text, dim);
            } catch (const ParseError& pe) {
                throw SpaceError("bad expression at " + where(e) + ": " + pe.what());
            }
        };
        auto check_indices = [&](std::size_t count) {
            if (e.indices.size() != count)
                throw SpaceError("wrong index count for '" + e.key + "' at " + where(e));
            for (int idx : e.indices)
                if (idx < 1 || idx > dim)
                    throw SpaceError("index out of range 1.." + std::to_string(dim) + " for '" +
                                     e.key + "' at " + where(e));
        };
        if (e.key == "dimension") {
            continue;
        } else if (e.key == "name") {
            s.name_ = e.value;
        } else if (e.key == "domain") {
            std::size_t comma = e.value.find(',');
            if (comma == std::string::npos)
                throw SpaceError("domain needs 'lo, hi' at " + where(e));
            try {
                s.box_lo_ = std::stod(e.value.substr(0, comma));
                s.box_hi_ = std::stod(e.value.substr(comma + 1));
            } catch (const std::exception&) {
                throw SpaceError("bad domain bounds at " + where(e));
            }
            if (!(s.box_lo_ < s.box_hi_))
                throw SpaceError("domain needs lo < hi at " + where(e));
        } else if (e.key == "exclude") {
            s.exclude_ = parse_expr(e.value);
        } else if (e.key == "g") {
            check_indices(2);
            any_g = true;
            if (e.indices[0] == e.indices[1])
                diag_given[static_cast<std::size_t>(e.indices[0] - 1)] = true;
            g.at({e.indices[0] - 1, e.indices[1] - 1}) = parse_expr(e.value);
        } else if (e.key == "F") {
            check_indices(2);
            any_f = true;
            f.at({e.indices[0] - 1, e.indices[1] - 1}) = parse_expr(e.value);
        } else if (e.key == "connection") {
            check_indices(3);
            any_conn = true;
            conn.at({e.indices[0] - 1, e.indices[1] - 1, e.indices[2] - 1}) = parse_expr(e.value);
        } else if (e.key == "deformed_from") {
            throw SpaceError("'deformed_from' is only valid inside a mapping-pair file (" +
                             where(e) + ")");
        } else {
            throw SpaceError("unknown key '" + e.key + "' at " + where(e));
        }
    }

    if (any_g) {
        // No implicit identity: every diagonal component must be spelled out.
        for (int i = 0; i < dim; ++i)
            if (!diag_given[static_cast<std::size_t>(i)])
                throw SpaceError("diagonal metric component g[" + std::to_string(i + 1) + "][" +
                                 std::to_string(i + 1) + "] not specified" +
                                 (label.empty() ? "" : " in [" + label + "]"));
        s.metric_ = std::move(g);
    }
    if (any_f) s.structure_ = std::move(f);
    if (any_conn) {
        s.connection_ = std::move(conn);
        s.mode_ = ConnectionMode::Explicit;
    } else if (!any_g) {
        throw SpaceError("space definition needs a metric or an explicit connection" +
                         (label.empty() ? "" : " in [" + label + "]"));
    }
    return s;
}

Space Space::deformed(std::shared_ptr<const Space> base, TensorField psi, TensorField xi,
                      double sign, TensorField metric_overlay, TensorField structure_overlay,
                      std::string name) {
    Space s;
    s.dim_ = base->dim();
    s.name_ = std::move(name);
    s.mode_ = ConnectionMode::Deformed;
    s.box_lo_ = base->box_lo_;
    s.box_hi_ = base->box_hi_;
    s.exclude_ = base->exclude_;
    s.deform_base_ = std::move(base);
    s.deform_psi_ = std::move(psi);
    s.deform_xi_ = std::move(xi);
    s.deform_sign_ = sign;
    s.metric_ = std::move(metric_overlay);
    s.structure_ = std::move(structure_overlay);
    return s;
}

MetricAt Space::metric_at(const Point& p) const {
    if (metric_.empty())
        throw SpaceError("space '" + name_ + "' has no metric field");
    if (static_cast<int>(p.size()) != dim_)
        throw SpaceError("point dimension mismatch");
    MetricAt m;
    metric_.eval_with_partials(p, m.g, m.g_partials);
    SymSplit split = split_sym_antisym(m.g, 0, 1, false);
    m.g_sym = std::move(split.sym);
    m.g_antisym = std::move(split.antisym);
    std::vector<double> gs(static_cast<std::size_t>(dim_) * static_cast<std::size_t>(dim_));
    for (std::size_t i = 0; i < gs.size(); ++i) gs[i] = m.g_sym[i];
    m.g_sym_inverse = invert_matrix(gs, dim_, &m.det_sym);
    return m;
}

ConnectionAt Space::connection_at(const Point& p) const {
    if (static_cast<int>(p.size()) != dim_)
        throw SpaceError("point dimension mismatch");
    ConnectionAt c;
    switch (mode_) {
    case ConnectionMode::Explicit:
        c.gamma = connection_.eval(p);
        break;
    case ConnectionMode::Deformed: {
        c.gamma = deform_base_->connection_at(p).gamma;
        Tensor psi = deform_psi_.eval(p);
        Tensor xi = deform_xi_.eval(p);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j)
                for (int k = 0; k < dim_; ++k) {
                    double d = xi.at({i, j, k});
                    if (i == k) d += psi[static_cast<std::size_t>(j)];
                    if (i == j) d += psi[static_cast<std::size_t>(k)];
                    c.gamma.at({i, j, k}) += deform_sign_ * d;
                }
        break;
    }
    case ConnectionMode::MetricDerived: {
        MetricAt m = metric_at(p);
        // Gamma_{i.jk} = (g_{ji,k} - g_{jk,i} + g_{ik,j}) / 2
        c.gamma_first = Tensor(dim_, 0, 3);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j)
                for (int k = 0; k < dim_; ++k)
                    c.gamma_first.at({i, j, k}) =
                        0.5 * (m.g_partials.at({j, i, k}) - m.g_partials.at({j, k, i}) +
                               m.g_partials.at({i, k, j}));
        c.gamma = Tensor(dim_, 1, 2);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j)
                for (int k = 0; k < dim_; ++k) {
                    double sum = 0.0;
                    for (int q = 0; q < dim_; ++q)
                        sum += m.g_sym_inverse[static_cast<std::size_t>(i * dim_ + q)] *
                               c.gamma_first.at({q, j, k});
                    c.gamma.at({i, j, k}) = sum;
                }
        break;
    }
    }
    SymSplit split = split_sym_antisym(c.gamma, 0, 1, false);
    c.gamma_sym = std::move(split.sym);
    c.torsion = std::move(split.antisym);
    return c;
}

Tensor Space::structure_at(const Point& p) const {
    if (structure_.empty())
        throw SpaceError("space '" + name_ + "' has no structure field F");
    return structure_.eval(p);
}

} // namespace grs

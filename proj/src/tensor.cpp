#include "tensor.hpp"

#include <cmath>

namespace grs {

namespace {
std::size_t pow_size(int dim, int rank) {
    std::size_t s = 1;
    for (int k = 0; k < rank; ++k) s *= static_cast<std::size_t>(dim);
    return s;
}
} // namespace

Tensor::Tensor(int dim, int upper, int lower)
    : dim_(dim), upper_(upper), lower_(lower), data_(pow_size(dim, upper + lower), 0.0) {
    if (dim < 1 || upper < 0 || lower < 0)
        throw TensorError("invalid tensor shape");
}

std::size_t Tensor::flat(const std::vector<int>& idx) const {
    if (static_cast<int>(idx.size()) != rank())
        throw TensorError("index rank mismatch");
    std::size_t pos = 0;
    for (int v : idx) {
        if (v < 0 || v >= dim_) throw TensorError("index out of range");
        pos = pos * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(v);
    }
    return pos;
}

std::vector<int> Tensor::unflat(std::size_t pos) const {
    std::vector<int> idx(static_cast<std::size_t>(rank()), 0);
    for (int k = rank() - 1; k >= 0; --k) {
        idx[static_cast<std::size_t>(k)] = static_cast<int>(pos % static_cast<std::size_t>(dim_));
        pos /= static_cast<std::size_t>(dim_);
    }
    return idx;
}

double Tensor::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

bool Tensor::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

Tensor& Tensor::operator+=(const Tensor& o) {
    if (o.dim_ != dim_ || o.upper_ != upper_ || o.lower_ != lower_)
        throw TensorError("shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}
Tensor& Tensor::operator-=(const Tensor& o) {
    if (o.dim_ != dim_ || o.upper_ != upper_ || o.lower_ != lower_)
        throw TensorError("shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}
Tensor& Tensor::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

Tensor operator+(Tensor a, const Tensor& b) { a += b; return a; }
Tensor operator-(Tensor a, const Tensor& b) { a -= b; return a; }
Tensor operator*(double s, Tensor a) { a *= s; return a; }

Tensor Tensor::kronecker(int dim) {
    Tensor d(dim, 1, 1);
    for (int i = 0; i < dim; ++i) d.at({i, i}) = 1.0;
    return d;
}

Tensor contract(const Tensor& t, int upper_slot, int lower_slot) {
    if (upper_slot < 0 || upper_slot >= t.upper())
        throw TensorError("upper slot out of range");
    if (lower_slot < 0 || lower_slot >= t.lower())
        throw TensorError("lower slot out of range");
    int n = t.dim();
    Tensor r(n, t.upper() - 1, t.lower() - 1);
    int abs_u = upper_slot;
    int abs_l = t.upper() + lower_slot;
    std::vector<int> src(static_cast<std::size_t>(t.rank()), 0);
    for (std::size_t pos = 0; pos < r.size(); ++pos) {
        std::vector<int> out = r.unflat(pos);
        double sum = 0.0;
        for (int a = 0; a < n; ++a) {
            int oi = 0;
            for (int k = 0; k < t.rank(); ++k) {
                if (k == abs_u || k == abs_l) src[static_cast<std::size_t>(k)] = a;
                else src[static_cast<std::size_t>(k)] = out[static_cast<std::size_t>(oi++)];
            }
            sum += t.at(src);
        }
        r[pos] = sum;
    }
    return r;
}

Tensor swap_slots(const Tensor& t, int slot_a, int slot_b, bool is_upper) {
    int limit = is_upper ? t.upper() : t.lower();
    if (slot_a < 0 || slot_a >= limit || slot_b < 0 || slot_b >= limit)
        throw TensorError("slot out of range");
    int base = is_upper ? 0 : t.upper();
    int abs_a = base + slot_a, abs_b = base + slot_b;
    Tensor r(t.dim(), t.upper(), t.lower());
    for (std::size_t pos = 0; pos < t.size(); ++pos) {
        std::vector<int> idx = t.unflat(pos);
        std::swap(idx[static_cast<std::size_t>(abs_a)], idx[static_cast<std::size_t>(abs_b)]);
        r.at(idx) = t[pos];
    }
    return r;
}

SymSplit split_sym_antisym(const Tensor& t, int slot_a, int slot_b, bool is_upper) {
    Tensor swapped = swap_slots(t, slot_a, slot_b, is_upper);
    SymSplit out{t, t};
    out.sym += swapped;
    out.sym *= 0.5;
    out.antisym -= swapped;
    out.antisym *= 0.5;
    return out;
}

namespace {
// Contract slot of t with an N x N matrix; moves the slot between groups.
Tensor metric_contract(const Tensor& t, int abs_slot, const std::vector<double>& m, int new_upper,
                       int new_lower, int new_abs_slot) {
    int n = t.dim();
    Tensor r(n, new_upper, new_lower);
    std::vector<int> src(static_cast<std::size_t>(t.rank()), 0);
    for (std::size_t pos = 0; pos < r.size(); ++pos) {
        std::vector<int> out = r.unflat(pos);
        // out index order: same as src with the slot relocated to new_abs_slot
        double sum = 0.0;
        int slot_val = out[static_cast<std::size_t>(new_abs_slot)];
        for (int a = 0; a < n; ++a) {
            int oi = 0;
            for (int k = 0; k < t.rank(); ++k) {
                if (k == abs_slot) {
                    src[static_cast<std::size_t>(k)] = a;
                } else {
                    if (oi == new_abs_slot) ++oi; // skip relocated slot in out
                    src[static_cast<std::size_t>(k)] = out[static_cast<std::size_t>(oi++)];
                }
            }
            sum += m[static_cast<std::size_t>(slot_val * n + a)] * t.at(src);
        }
        r[pos] = sum;
    }
    return r;
}
} // namespace

Tensor lower_index(const Tensor& t, int upper_slot, const std::vector<double>& g_sym) {
    if (upper_slot < 0 || upper_slot >= t.upper())
        throw TensorError("upper slot out of range");
    if (g_sym.size() != static_cast<std::size_t>(t.dim()) * static_cast<std::size_t>(t.dim()))
        throw TensorError("metric size mismatch");
    // lowered slot becomes the first lower slot
    return metric_contract(t, upper_slot, g_sym, t.upper() - 1, t.lower() + 1, t.upper() - 1);
}

Tensor raise_index(const Tensor& t, int lower_slot, const std::vector<double>& g_sym_inverse) {
    if (lower_slot < 0 || lower_slot >= t.lower())
        throw TensorError("lower slot out of range");
    if (g_sym_inverse.size() !=
        static_cast<std::size_t>(t.dim()) * static_cast<std::size_t>(t.dim()))
        throw TensorError("metric size mismatch");
    // raised slot becomes the last upper slot
    return metric_contract(t, t.upper() + lower_slot, g_sym_inverse, t.upper() + 1, t.lower() - 1,
                           t.upper());
}

TensorField::TensorField(int dim, int upper, int lower)
    : dim_(dim), upper_(upper), lower_(lower), shape_(dim, upper, lower) {
    comps_.assign(shape_.size(), Expr::constant(0.0));
}

Tensor TensorField::eval(const std::vector<double>& point) const {
    Tensor r(dim_, upper_, lower_);
    for (std::size_t i = 0; i < comps_.size(); ++i) r[i] = comps_[i].eval(point);
    return r;
}

void TensorField::eval_with_partials(const std::vector<double>& point, Tensor& values,
                                     Tensor& partials) const {
    values = Tensor(dim_, upper_, lower_);
    partials = Tensor(dim_, upper_, lower_ + 1);
    std::vector<double> grad;
    for (std::size_t i = 0; i < comps_.size(); ++i) {
        double v;
        comps_[i].eval_with_gradient(point, v, grad);
        values[i] = v;
        for (int m = 0; m < dim_; ++m)
            partials[i * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(m)] =
                grad[static_cast<std::size_t>(m)];
    }
}

} // namespace grs

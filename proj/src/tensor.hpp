#pragma once

#include "expr.hpp"

#include <vector>

namespace grs {

struct TensorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dense point-wise tensor components, row-major, upper indices first.
// All indices 0-based internally; file formats and reports are 1-based.
class Tensor {
  public:
    Tensor() = default;
    Tensor(int dim, int upper, int lower);

    int dim() const { return dim_; }
    int upper() const { return upper_; }
    int lower() const { return lower_; }
    int rank() const { return upper_ + lower_; }
    std::size_t size() const { return data_.size(); }

    double& at(const std::vector<int>& idx) { return data_[flat(idx)]; }
    double at(const std::vector<int>& idx) const { return data_[flat(idx)]; }
    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::size_t flat(const std::vector<int>& idx) const;
    std::vector<int> unflat(std::size_t pos) const;

    double max_abs() const;
    bool all_finite() const;

    Tensor& operator+=(const Tensor& o);
    Tensor& operator-=(const Tensor& o);
    Tensor& operator*=(double s);

    static Tensor kronecker(int dim); // delta^i_j, valence (1,1)

  private:
    int dim_ = 0, upper_ = 0, lower_ = 0;
    std::vector<double> data_;
};

Tensor operator+(Tensor a, const Tensor& b);
Tensor operator-(Tensor a, const Tensor& b);
Tensor operator*(double s, Tensor a);

// Einstein summation over one upper and one lower slot.  Slots are 0-based
// within their own group.
Tensor contract(const Tensor& t, int upper_slot, int lower_slot);

// slot_a/slot_b are positions within the same group (both upper or both
// lower); pass is_upper accordingly.
struct SymSplit {
    Tensor sym;
    Tensor antisym;
};
SymSplit split_sym_antisym(const Tensor& t, int slot_a, int slot_b, bool is_upper);
Tensor swap_slots(const Tensor& t, int slot_a, int slot_b, bool is_upper);

// Raising and lowering always go through the symmetric metric part and its
// inverse; g is an N x N matrix in row-major order.
Tensor lower_index(const Tensor& t, int upper_slot, const std::vector<double>& g_sym);
Tensor raise_index(const Tensor& t, int lower_slot, const std::vector<double>& g_sym_inverse);

// Field of expressions with the same index layout as Tensor.
class TensorField {
  public:
    TensorField() = default;
    TensorField(int dim, int upper, int lower);

    int dim() const { return dim_; }
    int upper() const { return upper_; }
    int lower() const { return lower_; }
    std::size_t size() const { return comps_.size(); }

    Expr& at(const std::vector<int>& idx) { return comps_[shape_.flat(idx)]; }
    const Expr& at(const std::vector<int>& idx) const { return comps_[shape_.flat(idx)]; }
    Expr& operator[](std::size_t i) { return comps_[i]; }
    const Expr& operator[](std::size_t i) const { return comps_[i]; }

    Tensor eval(const std::vector<double>& point) const;
    // Values plus all partials; result valence is (upper, lower+1) with the
    // differentiation index appended as the last lower slot.
    void eval_with_partials(const std::vector<double>& point, Tensor& values,
                            Tensor& partials) const;

    bool empty() const { return comps_.empty(); }

  private:
    int dim_ = 0, upper_ = 0, lower_ = 0;
    Tensor shape_; // index arithmetic only
    std::vector<Expr> comps_;
};

} // namespace grs

#pragma once

#include "deffile.hpp"
#include "tensor.hpp"

#include <memory>
#include <optional>
#include <string>

namespace grs {

struct SpaceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularMetricError : SpaceError {
    using SpaceError::SpaceError;
};

using Point = std::vector<double>;

struct MetricAt {
    Tensor g;          // (0,2)
    Tensor g_partials; // (0,3), last slot is d/dx^k
    Tensor g_sym;      // (0,2)
    Tensor g_antisym;  // (0,2)
    std::vector<double> g_sym_inverse; // N x N row-major
    double det_sym = 0.0;
};

struct ConnectionAt {
    Tensor gamma_first; // Gamma_{i.jk} as (0,3); empty unless metric-derived
    Tensor gamma;       // Gamma^i_{jk}, (1,2)
    Tensor gamma_sym;   // symmetric part in (j,k)
    Tensor torsion;     // antisymmetric part in (j,k)
};

// Invert an N x N matrix by Gaussian elimination with partial pivoting.
// Throws SingularMetricError when |det| < 1e-12.
std::vector<double> invert_matrix(const std::vector<double>& m, int n, double* det_out = nullptr);

enum class ConnectionMode { MetricDerived, Explicit, Deformed };

class Space {
  public:
    static Space load(const std::string& definition_text);
    static Space from_entries(const std::vector<DefEntry>& entries, const std::string& label);

    // Explicit-connection space obtained by deforming `base`:
    //   Gamma' = Gamma_base + sign * (psi_j d^i_k + psi_k d^i_j + xi^i_{jk}).
    // Metric and structure come from the overlay (either may be empty).
    static Space deformed(std::shared_ptr<const Space> base, TensorField psi, TensorField xi,
                          double sign, TensorField metric_overlay, TensorField structure_overlay,
                          std::string name);

    int dim() const { return dim_; }
    const std::string& name() const { return name_; }
    ConnectionMode mode() const { return mode_; }
    bool has_metric() const { return !metric_.empty(); }
    bool has_structure() const { return !structure_.empty(); }
    const TensorField& metric_field() const { return metric_; }
    const TensorField& structure_field() const { return structure_; }
    double box_lo() const { return box_lo_; }
    double box_hi() const { return box_hi_; }
    const std::optional<Expr>& exclude() const { return exclude_; }

    MetricAt metric_at(const Point& p) const;
    ConnectionAt connection_at(const Point& p) const;
    Tensor structure_at(const Point& p) const;

  private:
    int dim_ = 0;
    std::string name_;
    ConnectionMode mode_ = ConnectionMode::MetricDerived;
    TensorField metric_;     // (0,2)
    TensorField structure_;  // (1,1)
    TensorField connection_; // (1,2), Explicit mode
    std::shared_ptr<const Space> deform_base_;
    TensorField deform_psi_; // (0,1)
    TensorField deform_xi_;  // (1,2)
    double deform_sign_ = 1.0;
    double box_lo_ = -1.0, box_hi_ = 1.0;
    std::optional<Expr> exclude_;
};

} // namespace grs

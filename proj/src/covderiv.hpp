#pragma once

#include "space.hpp"

namespace grs {

// The four orientation patterns of the connection's differentiation index.
// Pattern A places the differentiation index second (Gamma^i_{pm} on upper
// slots, Gamma^p_{jm} on lower), pattern B places it first.  Kinds 1 and 2
// are uniformly A and B; kinds 3 and 4 alternate A,B,... and B,A,... over
// the slots in storage order, which reproduces the mixed patterns for
// valence (1,1) and both-lower (0,2) fields.
enum class CovKind { K1 = 1, K2 = 2, K3 = 3, K4 = 4 };

// true = pattern A (differentiation index second) for the slot at absolute
// position `slot` out of `rank` slots.
bool slot_orientation_a(CovKind kind, int slot, int rank);

// Covariant derivative of components with known values and partials, with
// respect to the given connection.  Result valence (p, q+1), the
// differentiation index appended last.
Tensor cov_deriv_components(const Tensor& values, const Tensor& partials, const Tensor& gamma,
                            CovKind kind);

// Ordinary partial of every component; last slot is d/dx^m.
Tensor partial_of_field(const TensorField& t, const Point& p);

Tensor cov_deriv(const TensorField& t, const Space& s, CovKind kind, const Point& p);

// The (;) derivative: same formula with the symmetric connection part only,
// where all four kinds coincide.
Tensor cov_deriv_symmetric(const TensorField& t, const Space& s, const Point& p);

} // namespace grs

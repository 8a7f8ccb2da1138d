#pragma once

#include <optional>
#include <vector>

#include "siframes/hermitian_eigen.hpp"
#include "siframes/scalar.hpp"

namespace siframes::detail {

using Vec = std::vector<Scalar>;

/// sum_m x_m conj(y_m)
Scalar dot(const Vec& x, const Vec& y);

/// Orthogonal basis of span(vectors). When every step stays exact the basis is
/// orthogonal but not normalized (norms2 holds the squared lengths); otherwise
/// the span is recomputed at working precision from the Gram matrix, singular
/// values below rank_tol * sigma_max are discarded, and the basis is
/// orthonormal.
struct OrthoBasis {
  std::vector<Vec> vectors;
  std::vector<Scalar> norms2;
  bool exact = true;

  std::size_t rank() const { return vectors.size(); }
};

OrthoBasis orthogonal_basis(std::vector<Vec> vectors, const Real& rank_tol);

/// Orthogonal projection of c onto the span of the basis.
Vec project_onto(const OrthoBasis& basis, const Vec& c);

/// Multiply by the inverse phase of the first nonzero entry; spans are unchanged.
Vec strip_leading_phase(Vec v);

/// Exact null vector of a square matrix of exact scalars, or nullopt when the
/// matrix is nonsingular. Throws InexactOperand if elimination leaves the exact
/// domain.
std::optional<Vec> exact_null_vector(const Matrix<Scalar>& m);

}  // namespace siframes::detail

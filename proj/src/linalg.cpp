#include "linalg.hpp"

#include <algorithm>

#include "siframes/errors.hpp"

namespace siframes::detail {

Scalar dot(const Vec& x, const Vec& y) {
  Scalar sum;
  for (std::size_t m = 0; m < x.size(); ++m) {
    if (x[m].is_zero() || y[m].is_zero()) continue;
    sum += x[m] * y[m].conj();
  }
  return sum;
}

Vec strip_leading_phase(Vec v) {
  for (const auto& entry : v) {
    if (entry.is_zero()) continue;
    if (entry.is_exact() && entry.phase() != 0) {
      const Scalar undo = Scalar::unit(-entry.phase());
      for (auto& e : v) e = e * undo;
    }
    break;
  }
  return v;
}

namespace {

bool all_exact(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_exact(); });
}

bool all_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}

std::optional<OrthoBasis> exact_gram_schmidt(const std::vector<Vec>& vectors) {
  OrthoBasis out;
  for (const auto& v : vectors) {
    if (!all_exact(v)) return std::nullopt;
    Vec u = v;
    for (std::size_t l = 0; l < out.vectors.size(); ++l) {
      const Scalar c = dot(u, out.vectors[l]) / out.norms2[l];
      if (!c.is_exact()) return std::nullopt;
      if (c.is_zero()) continue;
      for (std::size_t m = 0; m < u.size(); ++m) u[m] -= c * out.vectors[l][m];
      if (!all_exact(u)) return std::nullopt;
    }
    if (all_zero(u)) continue;
    Scalar n2 = dot(u, u);
    if (!n2.is_exact()) return std::nullopt;
    out.vectors.push_back(std::move(u));
    out.norms2.push_back(std::move(n2));
  }
  return out;
}

OrthoBasis numeric_basis(const std::vector<Vec>& vectors, const Real& rank_tol) {
  OrthoBasis out;
  out.exact = false;
  if (vectors.empty()) return out;
  const std::size_t k = vectors.size();
  const std::size_t dim = vectors.front().size();

  std::vector<std::vector<HpComplex>> vals(k, std::vector<HpComplex>(dim));
  Real input_err = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t m = 0; m < dim; ++m) {
      vals[i][m] = vectors[i][m].value();
      input_err = std::max(input_err, vectors[i][m].error_bound());
    }
  }
  Matrix<HpComplex> gram(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      HpComplex s;
      for (std::size_t m = 0; m < dim; ++m) s += vals[i][m].conj() * vals[j][m];
      gram(i, j) = s;
      gram(j, i) = s.conj();
    }
  }
  const auto eig = hermitian_eigen<Real>(gram, unit_roundoff());
  const Real sigma_max = boost::multiprecision::sqrt(std::max(eig.values.back(), Real(0)));
  if (sigma_max == 0) return out;
  for (std::size_t j = k; j-- > 0;) {
    const Real sigma = boost::multiprecision::sqrt(std::max(eig.values[j], Real(0)));
    if (!(sigma > rank_tol * sigma_max)) continue;
    const Real err = (input_err + unit_roundoff() * sigma_max) * sigma_max / sigma * 16 * Real(k);
    Vec u(dim);
    for (std::size_t m = 0; m < dim; ++m) {
      HpComplex s;
      for (std::size_t i = 0; i < k; ++i) s += vals[i][m] * eig.vectors(i, j);
      u[m] = Scalar::approx(s / sigma, err);
    }
    out.vectors.push_back(std::move(u));
    out.norms2.emplace_back(1);
  }
  return out;
}

}  // namespace

OrthoBasis orthogonal_basis(std::vector<Vec> vectors, const Real& rank_tol) {
  for (auto& v : vectors) v = strip_leading_phase(std::move(v));
  if (auto exact = exact_gram_schmidt(vectors)) return *std::move(exact);
  return numeric_basis(vectors, rank_tol);
}

Vec project_onto(const OrthoBasis& basis, const Vec& c) {
  Vec out(c.size());
  for (std::size_t l = 0; l < basis.vectors.size(); ++l) {
    const Scalar coeff = dot(c, basis.vectors[l]) / basis.norms2[l];
    if (coeff.is_zero()) continue;
    for (std::size_t m = 0; m < c.size(); ++m) {
      if (!basis.vectors[l][m].is_zero()) out[m] += coeff * basis.vectors[l][m];
    }
  }
  return out;
}

std::optional<Vec> exact_null_vector(const Matrix<Scalar>& input) {
  const std::size_t n = input.size();
  Matrix<Scalar> m = input;
  std::vector<std::size_t> pivot_col;
  std::size_t row = 0;
  auto require_exact = [](const Scalar& s) {
    if (!s.is_exact()) throw Error(ErrorKind::InexactOperand, "elimination left the exact domain");
  };
  for (std::size_t col = 0; col < n && row < n; ++col) {
    std::size_t pivot = n;
    for (std::size_t r = row; r < n; ++r) {
      require_exact(m(r, col));
      if (!m(r, col).is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot == n) continue;
    for (std::size_t c = 0; c < n; ++c) std::swap(m(row, c), m(pivot, c));
    const Scalar inv = Scalar(1) / m(row, col);
    for (std::size_t c = 0; c < n; ++c) m(row, c) = m(row, c) * inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row || m(r, col).is_zero()) continue;
      const Scalar factor = m(r, col);
      for (std::size_t c = 0; c < n; ++c) {
        m(r, c) -= factor * m(row, c);
        require_exact(m(r, c));
      }
    }
    pivot_col.push_back(col);
    ++row;
  }
  if (pivot_col.size() == n) return std::nullopt;
  // First free column gets coefficient 1; pivots solve for it.
  std::size_t free_col = 0;
  for (std::size_t c = 0, p = 0; c < n; ++c) {
    if (p < pivot_col.size() && pivot_col[p] == c) {
      ++p;
    } else {
      free_col = c;
      break;
    }
  }
  Vec x(n);
  x[free_col] = Scalar(1);
  for (std::size_t r = 0; r < pivot_col.size(); ++r) x[pivot_col[r]] = -m(r, free_col);
  return x;
}

}  // namespace siframes::detail

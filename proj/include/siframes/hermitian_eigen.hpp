#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "siframes/complex.hpp"

namespace siframes {

/// Dense square matrix in row-major order.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), data_(n * n) {}

  std::size_t size() const { return n_; }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

template <class R>
struct HermitianEigen {
  std::vector<R> values;        // ascending
  Matrix<Cx<R>> vectors;        // column j belongs to values[j]
  int sweeps = 0;
};

/// Cyclic complex Jacobi eigensolver for small Hermitian matrices. Each
/// rotation first removes the phase of the pivot, then applies the classical
/// real rotation; it converges quadratically and is accurate to a few ulps of
/// the matrix norm, which is what the rank and independence tests rely on.
template <class R>
HermitianEigen<R> hermitian_eigen(Matrix<Cx<R>> a, R relative_eps, int max_sweeps = 60) {
  using std::abs;
  using std::sqrt;
  const std::size_t n = a.size();
  Matrix<Cx<R>> v(n);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = Cx<R>(R(1));

  R total{0};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) total += a(i, j).norm();

  HermitianEigen<R> out;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    R off{0};
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q).norm();
    out.sweeps = sweep;
    if (off <= relative_eps * relative_eps * total || off == 0) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const R r2 = a(p, q).norm();
        if (r2 == 0) continue;
        const R r = sqrt(r2);
        // Phase step: scale column q by e^{-i theta} and row q by e^{i theta}
        // so the pivot becomes the real number r.
        const Cx<R> unit_neg = a(p, q).conj() / r;  // e^{-i theta}
        const Cx<R> unit_pos = a(p, q) / r;         // e^{i theta}
        for (std::size_t k = 0; k < n; ++k) {
          a(k, q) = a(k, q) * unit_neg;
          v(k, q) = v(k, q) * unit_neg;
        }
        for (std::size_t k = 0; k < n; ++k) a(q, k) = a(q, k) * unit_pos;
        a(p, q) = Cx<R>(r);
        a(q, p) = Cx<R>(r);

        const R app = a(p, p).re;
        const R aqq = a(q, q).re;
        const R theta = (aqq - app) / (2 * r);
        const R sign = theta < 0 ? R(-1) : R(1);
        const R t = sign / (abs(theta) + sqrt(theta * theta + 1));
        const R c = 1 / sqrt(t * t + 1);
        const R s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const Cx<R> akp = a(k, p);
          const Cx<R> akq = a(k, q);
          a(k, p) = akp * c - akq * s;
          a(k, q) = akp * s + akq * c;
          const Cx<R> vkp = v(k, p);
          const Cx<R> vkq = v(k, q);
          v(k, p) = vkp * c - vkq * s;
          v(k, q) = vkp * s + vkq * c;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Cx<R> apk = a(p, k);
          const Cx<R> aqk = a(q, k);
          a(p, k) = apk * c - aqk * s;
          a(q, k) = apk * s + aqk * c;
        }
        a(p, p) = Cx<R>(app - t * r);
        a(q, q) = Cx<R>(aqq + t * r);
        a(p, q) = Cx<R>(R(0));
        a(q, p) = Cx<R>(R(0));
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x).re < a(y, y).re; });
  out.values.resize(n);
  out.vectors = Matrix<Cx<R>>(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]).re;
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = v(k, order[j]);
  }
  return out;
}

}  // namespace siframes

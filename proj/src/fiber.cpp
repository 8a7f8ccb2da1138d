#include "siframes/fiber.hpp"

#include <algorithm>
#include <set>

#include "linalg.hpp"
#include "siframes/errors.hpp"

namespace siframes {

using detail::OrthoBasis;
using detail::Vec;

namespace {

const Real& rank_tolerance() {
  static const Real tol("1e-9");
  return tol;
}

Real vec_norm(const Vec& v) {
  return boost::multiprecision::sqrt(std::max(detail::dot(v, v).value().re, Real(0)));
}

/// Per-modulation fiber vector of one function on one cell: tau -> (m -> amplitude).
using CellFiber = std::map<Rational, std::map<std::int64_t, Scalar>>;

CellFiber cell_fiber(const FiberMap& f, const Rational& lo, const Rational& hi) {
  CellFiber out;
  for (const auto& [m, comp] : f.components) {
    for (const auto& p : comp.pieces()) {
      if (p.lo <= lo && hi <= p.hi) out[p.mod][m] += p.amp;
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    auto& entries = it->second;
    std::erase_if(entries, [](const auto& kv) { return kv.second.is_zero(); });
    it = entries.empty() ? out.erase(it) : std::next(it);
  }
  return out;
}

std::vector<Rational> fiber_breakpoints(const FiberMap& f) {
  std::vector<Rational> out;
  for (const auto& [m, comp] : f.components) {
    for (const auto& p : comp.pieces()) {
      out.push_back(p.lo);
      out.push_back(p.hi);
    }
  }
  return out;
}

std::vector<Rational> sorted_unique(std::vector<Rational> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

Vec embed(const std::map<std::int64_t, Scalar>& entries, const std::vector<std::int64_t>& indices) {
  Vec out(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (auto it = entries.find(indices[i]); it != entries.end()) out[i] = it->second;
  }
  return out;
}

Vec embed(const Vec& v, const std::vector<std::int64_t>& from, const std::vector<std::int64_t>& to) {
  Vec out(to.size());
  for (std::size_t i = 0; i < from.size(); ++i) {
    const auto pos = std::lower_bound(to.begin(), to.end(), from[i]) - to.begin();
    out[static_cast<std::size_t>(pos)] = v[i];
  }
  return out;
}

bool vec_is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}

bool parallel(const Vec& v, const Vec& ref) {
  std::size_t pivot = 0;
  while (pivot < ref.size() && ref[pivot].is_zero()) ++pivot;
  if (pivot == ref.size()) return vec_is_zero(v);
  const Scalar c = v[pivot] / ref[pivot];
  Vec diff(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) diff[i] = v[i] - c * ref[i];
  if (std::all_of(diff.begin(), diff.end(), [](const Scalar& s) { return s.is_exact(); })) return vec_is_zero(diff);
  return vec_norm(diff) <= rank_tolerance() * (vec_norm(v) + vec_norm(ref));
}

/// Single constant vector spanning the generator's fiber on a cell. A generator
/// whose pieces carry several modulations is accepted only when the vectors of
/// the different modulations are parallel.
Vec generator_vector(const CellFiber& fiber, const std::vector<std::int64_t>& indices) {
  if (fiber.empty()) return Vec(indices.size());
  Vec ref = embed(fiber.begin()->second, indices);
  for (auto it = std::next(fiber.begin()); it != fiber.end(); ++it) {
    if (!parallel(embed(it->second, indices), ref)) {
      throw Error(ErrorKind::UnsupportedGenerator,
                  "generator fiber is not a scalar multiple of a constant vector on a cell");
    }
  }
  return ref;
}

bool same_cell_data(const FiberCell& x, const FiberCell& y) {
  return x.indices == y.indices && x.basis == y.basis && x.norms2 == y.norms2 && x.exact == y.exact;
}

const FiberCell& cell_at(const SISpace& v, const Rational& xi) {
  auto it = std::upper_bound(v.cells.begin(), v.cells.end(), xi,
                             [](const Rational& x, const FiberCell& c) { return x < c.hi; });
  return *it;
}

std::vector<Rational> cell_grid(const SISpace& v) {
  std::vector<Rational> out;
  for (const auto& c : v.cells) out.push_back(c.lo);
  out.push_back(v.lattice.period());
  return out;
}

Vec project_vec(const FiberCell& cell, const Vec& c) {
  OrthoBasis basis{cell.basis, cell.norms2, cell.exact};
  return detail::project_onto(basis, c);
}

}  // namespace

IntegralValue FiberMap::norm2() const {
  IntegralValue total;
  for (const auto& [m, comp] : components) total = total + siframes::norm2(comp);
  return total;
}

ModStepFn FiberMap::to_function() const {
  const Rational p = lattice.period();
  ModStepFn out;
  for (const auto& [m, comp] : components) out = out + affine_reparam(comp, 1, p * m);
  return out;
}

FiberMap fiberize(const ModStepFn& f, const LatticeConfig& lattice) {
  if (lattice.b <= 0) throw Error(ErrorKind::NonpositiveScale, "lattice spacing must be positive");
  FiberMap out{lattice, {}};
  const auto hull = f.support_hull();
  if (!hull) return out;
  const Rational p = lattice.period();
  const std::int64_t m_lo = to_int64(floor(hull->first / p));
  const std::int64_t m_hi = to_int64(ceil(hull->second / p));
  for (std::int64_t m = m_lo; m < m_hi; ++m) {
    ModStepFn comp = restrict(affine_reparam(f, 1, -p * m), 0, p);
    if (!comp.is_zero()) out.components.emplace(m, std::move(comp));
  }
  return out;
}

bool SISpace::exact() const {
  return std::all_of(cells.begin(), cells.end(), [](const FiberCell& c) { return c.exact; });
}

const std::vector<ModStepFn>& SISpace::require_generators() const {
  if (!generators) throw Error(ErrorKind::MissingGenerators, "space has no stored generator list");
  return *generators;
}

namespace {

SISpace build_space(const LatticeConfig& lattice, const std::vector<FiberMap>& generators) {
  SISpace out;
  out.lattice = lattice;
  for (const auto& g : generators) {
    if (!(g.lattice == out.lattice)) throw Error(ErrorKind::LatticeMismatch, "generators live on different lattices");
  }
  const Rational p = out.lattice.period();
  std::vector<Rational> grid{0, p};
  for (const auto& g : generators) {
    auto pts = fiber_breakpoints(g);
    grid.insert(grid.end(), pts.begin(), pts.end());
  }
  grid = sorted_unique(std::move(grid));

  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    FiberCell cell{grid[k], grid[k + 1], {}, {}, {}, true};
    std::vector<CellFiber> fibers;
    std::set<std::int64_t> active;
    for (const auto& g : generators) {
      fibers.push_back(cell_fiber(g, cell.lo, cell.hi));
      for (const auto& [tau, entries] : fibers.back()) {
        for (const auto& [m, amp] : entries) active.insert(m);
      }
    }
    cell.indices.assign(active.begin(), active.end());
    std::vector<Vec> vectors;
    for (const auto& fiber : fibers) {
      Vec v = generator_vector(fiber, cell.indices);
      if (!vec_is_zero(v)) vectors.push_back(std::move(v));
    }
    OrthoBasis basis = detail::orthogonal_basis(std::move(vectors), rank_tolerance());
    cell.basis = std::move(basis.vectors);
    cell.norms2 = std::move(basis.norms2);
    cell.exact = basis.exact;
    if (cell.basis.empty()) cell.indices.clear();

    if (!out.cells.empty() && same_cell_data(out.cells.back(), cell)) {
      out.cells.back().hi = cell.hi;
    } else {
      out.cells.push_back(std::move(cell));
    }
  }
  std::vector<ModStepFn> stored;
  stored.reserve(generators.size());
  for (const auto& g : generators) stored.push_back(g.to_function());
  out.generators = std::move(stored);
  return out;
}

}  // namespace

SISpace range_function(const std::vector<FiberMap>& generators) {
  return build_space(generators.empty() ? LatticeConfig{} : generators.front().lattice, generators);
}

SISpace si_space(const LatticeConfig& lattice, const std::vector<ModStepFn>& generators) {
  if (lattice.b <= 0) throw Error(ErrorKind::NonpositiveScale, "lattice spacing must be positive");
  std::vector<FiberMap> fibers;
  fibers.reserve(generators.size());
  for (const auto& g : generators) fibers.push_back(fiberize(g, lattice));
  SISpace out = build_space(lattice, fibers);
  out.generators = generators;
  return out;
}

DimensionFunction dimension_function(const SISpace& v) {
  std::vector<DimSegment> segments;
  for (const auto& c : v.cells) segments.push_back({c.lo, c.hi, c.dim()});
  auto out = DimensionFunction::from_segments(0, v.lattice.period(), std::move(segments));
  if (v.generators && out.max() > static_cast<int>(v.generators->size())) {
    throw Error(ErrorKind::InvalidArgument, "fiber dimension exceeds the number of generators");
  }
  return out;
}

ModStepFn project(const SISpace& v, const ModStepFn& f) {
  const FiberMap fib = fiberize(f, v.lattice);
  const Rational p = v.lattice.period();
  const auto f_points = sorted_unique(fiber_breakpoints(fib));
  std::vector<Piece> pieces;
  for (const auto& cell : v.cells) {
    if (cell.basis.empty()) continue;
    std::vector<Rational> grid{cell.lo, cell.hi};
    for (const auto& x : f_points) {
      if (cell.lo < x && x < cell.hi) grid.push_back(x);
    }
    grid = sorted_unique(std::move(grid));
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
      const CellFiber fiber = cell_fiber(fib, grid[k], grid[k + 1]);
      for (const auto& [tau, entries] : fiber) {
        const Vec y = project_vec(cell, embed(entries, cell.indices));
        for (std::size_t i = 0; i < y.size(); ++i) {
          if (y[i].is_zero()) continue;
          const Rational shift = p * cell.indices[i];
          const Scalar amp = tau == 0 ? y[i] : y[i] * Scalar::unit(tau * shift);
          pieces.push_back(Piece{grid[k] + shift, grid[k + 1] + shift, amp, tau});
        }
      }
    }
  }
  return ModStepFn::sum(std::move(pieces));
}

Membership membership(const SISpace& v, const ModStepFn& f, const Tolerance& mode) {
  const ModStepFn residual = f - project(v, f);
  Membership out;
  out.residual_norm = boost::multiprecision::sqrt(std::max(norm2(residual).value().re, Real(0)));
  if (mode.exact && residual.is_exact()) {
    out.member = residual.is_zero();
    out.exact = true;
    return out;
  }
  const Real f_norm = boost::multiprecision::sqrt(std::max(norm2(f).value().re, Real(0)));
  out.member = out.residual_norm <= mode.eps * f_norm;
  out.exact = false;
  return out;
}

InvarianceResult invariance_test(const SISpace& v, const Rational& t, const Tolerance& mode) {
  const auto& gens = v.require_generators();
  InvarianceResult out;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const Membership m = membership(v, modulate(gens[i], t), mode);
    out.exact = out.exact && m.exact;
    if (!m.member) {
      out.invariant = false;
      out.failing_generator = i;
      return out;
    }
  }
  return out;
}

SISpace dilate_space(const SISpace& v, std::int64_t a) {
  if (a < 2) throw Error(ErrorKind::InvalidArgument, "dilation factor must be an integer > 1");
  const auto& gens = v.require_generators();
  const Scalar norm = Scalar(1) / Scalar::sqrt(Rational(a));
  std::vector<ModStepFn> out;
  for (const auto& g : gens) {
    const ModStepFn dilated = scale(affine_reparam(g, Rational(a), 0), norm);
    for (std::int64_t d = 0; d < a; ++d) out.push_back(modulate(dilated, v.lattice.b * d / a));
  }
  return si_space(v.lattice, out);
}

DilationCheck dilation_dim_check(const SISpace& v, std::int64_t a) {
  DilationCheck out;
  out.lhs = dimension_function(dilate_space(v, a));
  const DimensionFunction dim_v = dimension_function(v);
  const Rational p = v.lattice.period();
  out.rhs = DimensionFunction(0, p, 0);
  for (std::int64_t d = 0; d < a; ++d) {
    out.rhs = out.rhs + dim_v.pullback(Rational(1) / a, p * d / a, 0, p);
  }
  out.pass = out.lhs == out.rhs;
  return out;
}

std::optional<FiberWitness> first_fiber_difference(const SISpace& v, const SISpace& w, const Tolerance& mode) {
  if (!(v.lattice == w.lattice)) throw Error(ErrorKind::LatticeMismatch, "spaces live on different lattices");
  auto grid = cell_grid(v);
  const auto grid_w = cell_grid(w);
  grid.insert(grid.end(), grid_w.begin(), grid_w.end());
  grid = sorted_unique(std::move(grid));
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const FiberCell& cv = cell_at(v, grid[k]);
    const FiberCell& cw = cell_at(w, grid[k]);
    FiberWitness witness{grid[k], grid[k + 1], cv.dim(), cw.dim()};
    if (cv.dim() != cw.dim()) return witness;
    if (cv.dim() == 0) continue;
    std::vector<std::int64_t> all = cv.indices;
    all.insert(all.end(), cw.indices.begin(), cw.indices.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    FiberCell target = cv;
    for (auto& b : target.basis) b = embed(b, cv.indices, all);
    for (const auto& b : cw.basis) {
      const Vec u = embed(b, cw.indices, all);
      const Vec pu = project_vec(target, u);
      Vec r(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) r[i] = u[i] - pu[i];
      const bool exact = std::all_of(r.begin(), r.end(), [](const Scalar& s) { return s.is_exact(); });
      const bool inside = mode.exact && exact ? vec_is_zero(r) : vec_norm(r) <= mode.eps * vec_norm(u);
      if (!inside) return witness;
    }
  }
  return std::nullopt;
}

DimensionFunction dimension_function_within(const SISpace& v, const std::vector<std::pair<Rational, Rational>>& band) {
  const Rational p = v.lattice.period();
  auto in_band = [&](const Rational& x) {
    return std::any_of(band.begin(), band.end(), [&](const auto& iv) { return iv.first <= x && x < iv.second; });
  };
  std::vector<DimSegment> segments;
  for (const auto& cell : v.cells) {
    std::vector<Rational> grid{cell.lo, cell.hi};
    for (const auto m : cell.indices) {
      for (const auto& [lo, hi] : band) {
        for (const Rational& x : {lo - p * m, hi - p * m}) {
          if (cell.lo < x && x < cell.hi) grid.push_back(x);
        }
      }
    }
    grid = sorted_unique(std::move(grid));
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
      const Rational mid = (grid[k] + grid[k + 1]) / 2;
      // Coordinates outside the band must vanish; the subspace of the fiber
      // meeting that constraint has dimension dim - rank(restricted basis).
      std::vector<std::size_t> outside;
      for (std::size_t i = 0; i < cell.indices.size(); ++i) {
        if (!in_band(mid + p * cell.indices[i])) outside.push_back(i);
      }
      std::vector<Vec> restricted;
      for (const auto& b : cell.basis) {
        Vec r;
        for (const auto i : outside) r.push_back(b[i]);
        if (!vec_is_zero(r)) restricted.push_back(std::move(r));
      }
      const auto rank = detail::orthogonal_basis(std::move(restricted), rank_tolerance()).rank();
      segments.push_back({grid[k], grid[k + 1], cell.dim() - static_cast<int>(rank)});
    }
  }
  if (segments.empty()) return DimensionFunction(0, p, 0);
  return DimensionFunction::from_segments(0, p, std::move(segments));
}

}  // namespace siframes

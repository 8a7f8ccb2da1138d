#include "siframes/step_function.hpp"

#include <algorithm>
#include <map>

#include "siframes/errors.hpp"

namespace siframes {

namespace {

bool piece_order(const Piece& a, const Piece& b) {
  if (a.lo != b.lo) return a.lo < b.lo;
  return a.mod < b.mod;
}

void check_interval(const Piece& p) {
  if (!(p.lo < p.hi)) {
    throw Error(ErrorKind::DegenerateInterval,
                "piece [" + to_string(p.lo) + ", " + to_string(p.hi) + ") is empty");
  }
}

enum class Combine { Add, Assign };

// Shared canonicalization: refine each modulation class onto its breakpoint
// grid, combine contributions, then merge equal neighbours.
std::vector<Piece> canonicalize(std::vector<Piece> pieces, Combine how) {
  std::map<Rational, std::vector<const Piece*>> classes;
  for (const auto& p : pieces) {
    check_interval(p);
    classes[p.mod].push_back(&p);
  }
  std::vector<Piece> out;
  for (const auto& [mod, members] : classes) {
    std::vector<Rational> grid;
    grid.reserve(members.size() * 2);
    for (const Piece* p : members) {
      grid.push_back(p->lo);
      grid.push_back(p->hi);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<Scalar> acc(grid.size() - 1);
    std::vector<bool> touched(grid.size() - 1, false);
    for (const Piece* p : members) {
      const auto first = std::lower_bound(grid.begin(), grid.end(), p->lo) - grid.begin();
      const auto last = std::lower_bound(grid.begin(), grid.end(), p->hi) - grid.begin();
      for (auto k = first; k < last; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        if (how == Combine::Add) {
          acc[idx] = touched[idx] ? acc[idx] + p->amp : p->amp;
        } else if (!touched[idx]) {
          acc[idx] = p->amp;
        } else if (!(acc[idx] == p->amp)) {
          throw Error(ErrorKind::OverlapConflict,
                      "pieces overlap on [" + to_string(grid[idx]) + ", " + to_string(grid[idx + 1]) +
                          ") with different amplitudes");
        }
        touched[idx] = true;
      }
    }
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
      if (!touched[k] || acc[k].is_zero()) continue;
      if (!out.empty() && out.back().mod == mod && out.back().hi == grid[k] && out.back().amp == acc[k]) {
        out.back().hi = grid[k + 1];
      } else {
        out.push_back(Piece{grid[k], grid[k + 1], acc[k], mod});
      }
    }
  }
  std::sort(out.begin(), out.end(), piece_order);
  return out;
}

}  // namespace

const Scalar& IntegralValue::exact_value() const {
  if (!is_exact()) throw Error(ErrorKind::InexactOperand, "integral has a transcendental or inexact part");
  return rational_part;
}

HpComplex IntegralValue::value() const {
  return rational_part.value() + over_two_pi.value() / (2 * pi());
}

Real IntegralValue::error_bound() const {
  return rational_part.error_bound() + over_two_pi.error_bound() / (2 * pi()) +
         unit_roundoff() * (abs(value()) + 1);
}

ModStepFn ModStepFn::make(std::vector<Piece> pieces) {
  return ModStepFn(canonicalize(std::move(pieces), Combine::Assign));
}

ModStepFn ModStepFn::sum(std::vector<Piece> pieces) {
  return ModStepFn(canonicalize(std::move(pieces), Combine::Add));
}

ModStepFn ModStepFn::indicator(const Rational& lo, const Rational& hi, const Scalar& amp) {
  return make({Piece{lo, hi, amp, 0}});
}

bool ModStepFn::is_exact() const {
  return std::all_of(pieces_.begin(), pieces_.end(), [](const Piece& p) { return p.amp.is_exact(); });
}

std::vector<Rational> ModStepFn::breakpoints() const {
  std::vector<Rational> pts;
  for (const auto& p : pieces_) {
    pts.push_back(p.lo);
    pts.push_back(p.hi);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

std::optional<std::pair<Rational, Rational>> ModStepFn::support_hull() const {
  if (pieces_.empty()) return std::nullopt;
  Rational lo = pieces_.front().lo;
  Rational hi = pieces_.front().hi;
  for (const auto& p : pieces_) {
    lo = std::min(lo, p.lo);
    hi = std::max(hi, p.hi);
  }
  return std::make_pair(lo, hi);
}

HpComplex ModStepFn::evaluate(const Rational& xi) const {
  HpComplex sum;
  for (const auto& p : pieces_) {
    if (p.lo <= xi && xi < p.hi) sum += p.amp.value() * unit_phase(-p.mod * xi);
  }
  return sum;
}

ModStepFn linear_combine(std::span<const Scalar> coeffs, std::span<const ModStepFn> fns) {
  if (coeffs.size() != fns.size()) {
    throw Error(ErrorKind::LengthMismatch, std::to_string(coeffs.size()) + " coefficients for " +
                                               std::to_string(fns.size()) + " functions");
  }
  std::vector<Piece> all;
  for (std::size_t i = 0; i < fns.size(); ++i) {
    if (coeffs[i].is_zero()) continue;
    for (const auto& p : fns[i].pieces()) all.push_back(Piece{p.lo, p.hi, coeffs[i] * p.amp, p.mod});
  }
  return ModStepFn::sum(std::move(all));
}

ModStepFn scale(const ModStepFn& f, const Scalar& c) {
  const Scalar coeffs[] = {c};
  return linear_combine(coeffs, std::span<const ModStepFn>(&f, 1));
}

ModStepFn operator+(const ModStepFn& f, const ModStepFn& g) {
  std::vector<Piece> all = f.pieces();
  all.insert(all.end(), g.pieces().begin(), g.pieces().end());
  return ModStepFn::sum(std::move(all));
}

ModStepFn operator-(const ModStepFn& f, const ModStepFn& g) { return f + scale(g, Scalar(-1)); }

ModStepFn mul_conj(const ModStepFn& f, const ModStepFn& g) {
  std::vector<Piece> products;
  for (const auto& p : f.pieces()) {
    for (const auto& q : g.pieces()) {
      const Rational lo = std::max(p.lo, q.lo);
      const Rational hi = std::min(p.hi, q.hi);
      if (lo < hi) products.push_back(Piece{lo, hi, p.amp * q.amp.conj(), p.mod - q.mod});
    }
  }
  return ModStepFn::sum(std::move(products));
}

ModStepFn affine_reparam(const ModStepFn& f, const Rational& s, const Rational& t) {
  if (s <= 0) throw Error(ErrorKind::NonpositiveScale, "scale " + to_string(s) + " is not positive");
  std::vector<Piece> out;
  out.reserve(f.pieces().size());
  for (const auto& p : f.pieces()) {
    const Rational mod = p.mod / s;
    Scalar amp = p.mod == 0 || t == 0 ? p.amp : p.amp * Scalar::unit(mod * t);
    out.push_back(Piece{s * p.lo + t, s * p.hi + t, std::move(amp), mod});
  }
  return ModStepFn::sum(std::move(out));
}

ModStepFn modulate(const ModStepFn& f, const Rational& tau) {
  std::vector<Piece> out = f.pieces();
  for (auto& p : out) p.mod += tau;
  return ModStepFn::sum(std::move(out));
}

ModStepFn restrict(const ModStepFn& f, const Rational& lo, const Rational& hi) {
  std::vector<Piece> out;
  for (const auto& p : f.pieces()) {
    const Rational a = std::max(p.lo, lo);
    const Rational b = std::min(p.hi, hi);
    if (a < b) out.push_back(Piece{a, b, p.amp, p.mod});
  }
  return ModStepFn::sum(std::move(out));
}

IntegralValue integrate(const ModStepFn& f) {
  IntegralValue total;
  for (const auto& p : f.pieces()) {
    if (p.mod == 0) {
      total.rational_part += p.amp * Scalar(p.hi - p.lo);
    } else {
      // int_lo^hi e^{-2 pi i tau x} dx = i (e^{-2 pi i tau hi} - e^{-2 pi i tau lo}) / (2 pi tau)
      const Scalar diff = Scalar::unit(-p.mod * p.hi) - Scalar::unit(-p.mod * p.lo);
      if (!diff.is_zero()) total.over_two_pi += p.amp * Scalar::i() * diff / Scalar(p.mod);
    }
  }
  return total;
}

IntegralValue norm2(const ModStepFn& f) { return integrate(mul_conj(f, f)); }

ModStepFn periodize(const ModStepFn& f, const Rational& p) {
  if (p <= 0) throw Error(ErrorKind::NonpositiveScale, "period " + to_string(p) + " is not positive");
  std::vector<Piece> out;
  for (const auto& piece : f.pieces()) {
    const Integer first = floor(piece.lo / p);
    const Integer last = ceil(piece.hi / p);
    for (Integer m = first; m < last; ++m) {
      const Rational shift = Rational(m) * p;
      const Rational lo = std::max(piece.lo, shift);
      const Rational hi = std::min(piece.hi, shift + p);
      if (!(lo < hi)) continue;
      Scalar amp = piece.mod == 0 ? piece.amp : piece.amp * Scalar::unit(-piece.mod * shift);
      out.push_back(Piece{lo - shift, hi - shift, std::move(amp), piece.mod});
    }
  }
  return ModStepFn::sum(std::move(out));
}

bool equals(const ModStepFn& f, const ModStepFn& g, const Tolerance& mode) {
  if (mode.exact) {
    if (!f.is_exact() || !g.is_exact()) {
      throw Error(ErrorKind::InexactOperand, "exact comparison of a function with inexact pieces");
    }
    return f == g;
  }
  const ModStepFn diff = f - g;
  return std::all_of(diff.pieces().begin(), diff.pieces().end(),
                     [&](const Piece& p) { return magnitude(p.amp) <= mode.eps; });
}

}  // namespace siframes

#include "siframes/dimension.hpp"

#include <algorithm>

#include "siframes/errors.hpp"

namespace siframes {

DimensionFunction::DimensionFunction(Rational lo, Rational hi, int value)
    : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (!(lo_ < hi_)) throw Error(ErrorKind::DegenerateInterval, "empty dimension-function domain");
  segments_.push_back({lo_, hi_, value});
}

DimensionFunction DimensionFunction::from_segments(Rational lo, Rational hi, std::vector<DimSegment> segments) {
  std::sort(segments.begin(), segments.end(), [](const DimSegment& a, const DimSegment& b) { return a.lo < b.lo; });
  DimensionFunction out(lo, hi);
  out.segments_.clear();
  Rational cursor = lo;
  for (auto& s : segments) {
    if (s.lo != cursor || !(s.lo < s.hi)) {
      throw Error(ErrorKind::InvalidArgument, "dimension segments must tile the domain");
    }
    cursor = s.hi;
    if (s.dim < 0) throw Error(ErrorKind::InvalidArgument, "negative dimension");
    if (!out.segments_.empty() && out.segments_.back().dim == s.dim) {
      out.segments_.back().hi = s.hi;
    } else {
      out.segments_.push_back(std::move(s));
    }
  }
  if (cursor != hi) throw Error(ErrorKind::InvalidArgument, "dimension segments must tile the domain");
  return out;
}

int DimensionFunction::at(const Rational& x) const {
  for (const auto& s : segments_) {
    if (s.lo <= x && x < s.hi) return s.dim;
  }
  throw Error(ErrorKind::InvalidArgument, "point " + to_string(x) + " outside the domain");
}

int DimensionFunction::max() const {
  int m = 0;
  for (const auto& s : segments_) m = std::max(m, s.dim);
  return m;
}

int DimensionFunction::min() const {
  int m = segments_.front().dim;
  for (const auto& s : segments_) m = std::min(m, s.dim);
  return m;
}

Rational DimensionFunction::integral() const {
  Rational total = 0;
  for (const auto& s : segments_) total += (s.hi - s.lo) * s.dim;
  return total;
}

DimensionFunction DimensionFunction::pullback(const Rational& s, const Rational& t, const Rational& lo,
                                              const Rational& hi) const {
  if (s <= 0) throw Error(ErrorKind::NonpositiveScale, "pullback scale must be positive");
  if (s * lo + t < lo_ || s * hi + t > hi_) {
    throw Error(ErrorKind::InvalidArgument, "pullback image leaves the domain");
  }
  std::vector<DimSegment> out;
  for (const auto& seg : segments_) {
    const Rational a = std::max((seg.lo - t) / s, lo);
    const Rational b = std::min((seg.hi - t) / s, hi);
    if (a < b) out.push_back({a, b, seg.dim});
  }
  return from_segments(lo, hi, std::move(out));
}

namespace {

template <class Op>
std::vector<DimSegment> combine(const DimensionFunction& a, const DimensionFunction& b, Op op) {
  if (a.lo() != b.lo() || a.hi() != b.hi()) {
    throw Error(ErrorKind::InvalidArgument, "dimension functions live on different domains");
  }
  std::vector<Rational> grid;
  for (const auto& s : a.segments()) grid.push_back(s.lo);
  for (const auto& s : b.segments()) grid.push_back(s.lo);
  grid.push_back(a.hi());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<DimSegment> out;
  std::size_t ia = 0;
  std::size_t ib = 0;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    while (a.segments()[ia].hi <= grid[k]) ++ia;
    while (b.segments()[ib].hi <= grid[k]) ++ib;
    out.push_back({grid[k], grid[k + 1], op(a.segments()[ia].dim, b.segments()[ib].dim)});
  }
  return out;
}

}  // namespace

DimensionFunction operator+(const DimensionFunction& a, const DimensionFunction& b) {
  return DimensionFunction::from_segments(a.lo(), a.hi(), combine(a, b, [](int x, int y) { return x + y; }));
}

bool pointwise_le(const DimensionFunction& a, const DimensionFunction& b) {
  const auto diff = combine(a, b, [](int x, int y) { return x <= y ? 0 : 1; });
  return std::all_of(diff.begin(), diff.end(), [](const DimSegment& s) { return s.dim == 0; });
}

}  // namespace siframes

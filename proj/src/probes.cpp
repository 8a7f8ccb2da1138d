#include "siframes/probes.hpp"

#include <algorithm>

#include "siframes/errors.hpp"

namespace siframes {

std::int64_t ProbeSource::integer(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(engine_() % span);
}

Rational ProbeSource::grid_point(const Rational& lo, const Rational& hi, std::int64_t denominator) {
  const std::int64_t first = to_int64(ceil(lo * denominator));
  const std::int64_t last = to_int64(ceil(hi * denominator)) - 1;
  if (first > last) throw Error(ErrorKind::InvalidArgument, "grid has no point in the interval");
  return Rational(integer(first, last)) / denominator;
}

namespace {

std::vector<Rational> breakpoints(ProbeSource& src, const Rational& lo, const Rational& hi, int count,
                                  std::int64_t denominator) {
  std::vector<Rational> pts;
  for (int guard = 0; static_cast<int>(pts.size()) < count && guard < 64 * count; ++guard) {
    Rational x = src.grid_point(lo, hi, denominator);
    if (std::find(pts.begin(), pts.end(), x) == pts.end()) pts.push_back(std::move(x));
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace

ModStepFn ProbeSource::step_function(const Rational& lo, const Rational& hi, int max_pieces, std::int64_t denominator) {
  const int pieces = static_cast<int>(integer(1, max_pieces));
  const auto pts = breakpoints(*this, lo, hi, pieces + 1, denominator);
  std::vector<Piece> out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    Rational re(integer(-4, 4), integer(1, 3));
    Rational im(integer(-4, 4), integer(1, 3));
    if (re == 0 && im == 0) re = 1;
    out.push_back(Piece{pts[i], pts[i + 1], Scalar::from_parts(re, im, 1, 0), 0});
  }
  return ModStepFn::sum(std::move(out));
}

ModStepFn ProbeSource::indicator(const Rational& lo, const Rational& hi, int max_pieces, std::int64_t denominator) {
  const int pieces = static_cast<int>(integer(1, max_pieces));
  const auto pts = breakpoints(*this, lo, hi, 2 * pieces, denominator);
  std::vector<Piece> out;
  for (std::size_t i = 0; i + 1 < pts.size(); i += 2) out.push_back(Piece{pts[i], pts[i + 1], Scalar(1), 0});
  return ModStepFn::sum(std::move(out));
}

std::vector<ModStepFn> random_probes(std::size_t count, std::uint64_t seed, const Rational& lo, const Rational& hi) {
  ProbeSource src(seed);
  std::vector<ModStepFn> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(src.step_function(lo, hi));
  return out;
}

}  // namespace siframes

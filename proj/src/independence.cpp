#include "siframes/independence.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <cstdlib>
#include <set>
#include <thread>

#include "linalg.hpp"
#include "siframes/errors.hpp"

namespace siframes {

namespace {

Real sqrt_pos(const Real& x) { return x > 0 ? Real(boost::multiprecision::sqrt(x)) : Real(0); }

/// ||sum_p c_p f_p||^2 from the Gram matrix.
Scalar combination_norm2(const GramMatrix& g, const std::vector<Scalar>& c) {
  Scalar total;
  for (std::size_t p = 0; p < g.size(); ++p) {
    for (std::size_t q = 0; q < g.size(); ++q) {
      if (c[p].is_zero() || c[q].is_zero()) continue;
      const IntegralValue& e = g.entries(p, q);
      const Scalar entry = e.is_exact() ? e.exact_value() : Scalar::approx(e.value(), e.error_bound());
      total += c[p] * c[q].conj() * entry;
    }
  }
  return total;
}

Real residual_of(const GramMatrix& g, const std::vector<Scalar>& c, bool& exact_zero) {
  exact_zero = false;
  if (!g.functions.empty()) {
    const ModStepFn combo = linear_combine(c, g.functions);
    if (combo.is_exact() && combo.is_zero()) {
      exact_zero = true;
      return 0;
    }
    return sqrt_pos(norm2(combo).value().re);
  }
  const Scalar n2 = combination_norm2(g, c);
  if (n2.is_exact() && n2.is_zero()) {
    exact_zero = true;
    return 0;
  }
  return sqrt_pos(n2.value().re);
}

int thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("SIFRAMES_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

}  // namespace

bool GramMatrix::exact() const {
  for (std::size_t p = 0; p < size(); ++p)
    for (std::size_t q = 0; q < size(); ++q)
      if (!entries(p, q).is_exact()) return false;
  return true;
}

GramMatrix GramMatrix::sub(const std::vector<std::size_t>& positions) const {
  GramMatrix out;
  out.entries = Matrix<IntegralValue>(positions.size());
  for (std::size_t p = 0; p < positions.size(); ++p) {
    if (!elements.empty()) out.elements.push_back(elements[positions[p]]);
    if (!functions.empty()) out.functions.push_back(functions[positions[p]]);
    for (std::size_t q = 0; q < positions.size(); ++q) out.entries(p, q) = entries(positions[p], positions[q]);
  }
  return out;
}

GramMatrix gram_from_functions(std::vector<ModStepFn> functions) {
  GramMatrix out;
  const std::size_t n = functions.size();
  out.entries = Matrix<IntegralValue>(n);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p; q < n; ++q) {
      out.entries(p, q) = integrate(mul_conj(functions[p], functions[q]));
      if (q != p) out.entries(q, p) = out.entries(p, q).conj();
    }
  }
  out.functions = std::move(functions);
  return out;
}

GramMatrix gram(const AffineConfig& cfg, const std::vector<Element>& elements) {
  cfg.validate();
  std::set<Element> seen;
  for (const auto& e : elements) {
    if (!seen.insert(e).second) {
      throw Error(ErrorKind::DuplicateElements,
                  "element (" + std::to_string(e.j) + "," + std::to_string(e.k) + ") listed twice");
    }
  }
  std::vector<ModStepFn> fns;
  fns.reserve(elements.size());
  for (const auto& e : elements) fns.push_back(element_ft(cfg, e));
  GramMatrix out = gram_from_functions(std::move(fns));
  out.elements = elements;
  return out;
}

std::string_view to_string(IndependenceStatus s) {
  switch (s) {
    case IndependenceStatus::Independent: return "independent";
    case IndependenceStatus::Dependent: return "dependent";
    case IndependenceStatus::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

IndependenceVerdict independence_test(const GramMatrix& g, const Real& tol) {
  if (!(tol > 0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  IndependenceVerdict out;
  out.tolerance = tol;
  const std::size_t n = g.size();
  if (n == 0) {
    out.status = IndependenceStatus::Independent;
    return out;
  }
  Matrix<HpComplex> m(n);
  Real entry_err = 0;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      m(p, q) = g.entries(p, q).value();
      entry_err = std::max(entry_err, g.entries(p, q).error_bound());
    }
  }
  const auto eig = hermitian_eigen<Real>(m, unit_roundoff());
  out.lambda_min = eig.values.front();
  out.lambda_max = eig.values.back();
  out.min_singular_value = sqrt_pos(out.lambda_min);
  if (out.lambda_max > 0) out.relative_singular_value = sqrt_pos(out.lambda_min / out.lambda_max);
  const Real err = entry_err * Real(n) + 64 * unit_roundoff() * Real(n) * abs(out.lambda_max);
  if (out.lambda_min - err > tol * (out.lambda_max + err)) {
    out.status = IndependenceStatus::Independent;
    return out;
  }

  if (g.exact()) {
    Matrix<Scalar> exact(n);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) exact(p, q) = g.entries(p, q).exact_value();
    try {
      // Gram vector c with G c = 0 gives sum_p conj(c_p) f_p = 0.
      if (auto null = detail::exact_null_vector(exact)) {
        std::vector<Scalar> c;
        for (const auto& x : *null) c.push_back(x.conj());
        bool zero = false;
        const Real r = residual_of(g, c, zero);
        out.witness = std::move(c);
        out.residual_norm = r;
        out.witness_exact = zero;
        out.status = zero ? IndependenceStatus::Dependent : IndependenceStatus::Inconclusive;
        return out;
      }
      out.status = IndependenceStatus::Inconclusive;
      return out;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InexactOperand) throw;
    }
  }

  std::vector<Scalar> c(n);
  const Real vec_err = err / std::max(out.lambda_max, Real("1e-300"));
  for (std::size_t p = 0; p < n; ++p) c[p] = Scalar::approx(eig.vectors(p, 0).conj(), vec_err);
  bool zero = false;
  const Real r = residual_of(g, c, zero);
  out.witness = std::move(c);
  out.residual_norm = r;
  out.witness_exact = zero;
  out.status = zero || r * r <= tol * out.lambda_max + err ? IndependenceStatus::Dependent
                                                           : IndependenceStatus::Inconclusive;
  return out;
}

TranslatesVerdict translates_criterion(const std::map<std::int64_t, Scalar>& coeffs, const Rational& b) {
  if (b <= 0) throw Error(ErrorKind::NonpositiveScale, "lattice spacing must be positive");
  std::vector<std::pair<std::int64_t, HpComplex>> terms;
  for (const auto& [k, c] : coeffs) {
    if (!c.is_zero()) terms.emplace_back(k, c.value());
  }
  if (terms.empty()) throw Error(ErrorKind::DegenerateCoefficients, "all coefficients vanish");
  // A nonzero trigonometric polynomial of degree span d cannot vanish at d + 1
  // distinct points of one period.
  const std::int64_t span = terms.back().first - terms.front().first;
  TranslatesVerdict out;
  out.witness_modulus = -1;
  for (std::int64_t s = 0; s <= span; ++s) {
    const Rational xi = Rational(s) / (b * (span + 1));
    HpComplex value;
    for (const auto& [k, c] : terms) value += c * unit_phase(b * k * xi);
    const Real modulus = abs(value);
    if (modulus > out.witness_modulus) {
      out.witness_modulus = modulus;
      out.witness_xi = xi;
    }
  }
  return out;
}

std::vector<Element> SweepWindow::elements() const {
  std::vector<Element> out;
  for (std::int64_t j = j_min; j <= j_max; ++j)
    for (std::int64_t k = k_min; k <= k_max; ++k) out.push_back({j, k});
  return out;
}

std::uint64_t subset_count(std::uint64_t n, int k) {
  std::uint64_t total = 0;
  std::uint64_t binom = 1;
  for (int s = 1; s <= k && static_cast<std::uint64_t>(s) <= n; ++s) {
    binom = binom * (n - static_cast<std::uint64_t>(s) + 1) / static_cast<std::uint64_t>(s);
    total += binom;
  }
  return total;
}

namespace {

constexpr std::size_t kMaxSubset = 8;
constexpr std::size_t kBlock = 1 << 15;

struct Combo {
  std::array<std::uint8_t, kMaxSubset> idx{};
  std::uint8_t size = 0;
};

struct SubsetResult {
  IndependenceStatus status = IndependenceStatus::Independent;
  double relative = 0;
  double sigma_min = 0;
  bool escalated = false;
  std::optional<IndependenceVerdict> verdict;
};

struct SweepContext {
  const GramMatrix* gram;
  Matrix<Cx<double>> dense;
  double entry_err = 0;
  Real tol;
  double tol_d = 0;
};

SubsetResult evaluate(const SweepContext& ctx, const Combo& c) {
  const std::size_t s = c.size;
  Matrix<Cx<double>> m(s);
  double scale = 0;
  for (std::size_t p = 0; p < s; ++p) {
    for (std::size_t q = 0; q < s; ++q) {
      m(p, q) = ctx.dense(c.idx[p], c.idx[q]);
      scale = std::max(scale, std::abs(m(p, q).re) + std::abs(m(p, q).im));
    }
  }
  const auto eig = hermitian_eigen<double>(m, DBL_EPSILON);
  const double lmin = eig.values.front();
  const double lmax = eig.values.back();
  const double err = static_cast<double>(s) * (ctx.entry_err + 64 * DBL_EPSILON * std::max(scale, std::abs(lmax)));
  SubsetResult r;
  r.sigma_min = lmin > 0 ? std::sqrt(lmin) : 0;
  r.relative = lmax > 0 && lmin > 0 ? std::sqrt(lmin / lmax) : 0;
  if (lmin - err > ctx.tol_d * (lmax + err)) return r;

  // Too close to call in double precision: redo at working precision.
  std::vector<std::size_t> positions(c.idx.begin(), c.idx.begin() + static_cast<std::ptrdiff_t>(s));
  IndependenceVerdict v = independence_test(ctx.gram->sub(positions), ctx.tol);
  r.escalated = true;
  r.status = v.status;
  r.sigma_min = static_cast<double>(v.min_singular_value);
  r.relative = static_cast<double>(v.relative_singular_value);
  if (v.status != IndependenceStatus::Independent) r.verdict = std::move(v);
  return r;
}

bool next_combo(Combo& c, std::size_t n) {
  const std::size_t s = c.size;
  for (std::size_t i = s; i-- > 0;) {
    if (c.idx[i] < n - s + i) {
      ++c.idx[i];
      for (std::size_t l = i + 1; l < s; ++l) c.idx[l] = static_cast<std::uint8_t>(c.idx[l - 1] + 1);
      return true;
    }
  }
  return false;
}

}  // namespace

SweepReport independence_sweep(const AffineConfig& cfg, const SweepWindow& window, const SweepOptions& options) {
  cfg.validate();
  if (window.j_min > window.j_max || window.k_min > window.k_max) {
    throw Error(ErrorKind::InvalidArgument, "empty sweep window");
  }
  if (options.max_subset_size < 1 || options.max_subset_size > static_cast<int>(kMaxSubset)) {
    throw Error(ErrorKind::WindowTooLarge, "subset size must be between 1 and 8");
  }
  const std::vector<Element> elements = window.elements();
  if (elements.size() > 255) throw Error(ErrorKind::WindowTooLarge, "window holds more than 255 elements");
  SweepReport report;
  report.window = window;
  report.max_subset_size = options.max_subset_size;
  const std::uint64_t total = subset_count(elements.size(), options.max_subset_size);
  if (total > options.max_subsets) {
    throw Error(ErrorKind::WindowTooLarge, std::to_string(total) + " subsets exceed the limit of " +
                                               std::to_string(options.max_subsets));
  }

  if (options.context_checks) {
    try {
      report.parseval_verified = parseval_verify(cfg, {}).pass();
    } catch (const Error&) {
    }
    try {
      report.v0_invariant = vk_invariance_check(cfg, 3, cfg.b).invariance.invariant;
    } catch (const Error&) {
    }
  }

  const GramMatrix g = gram(cfg, elements);
  SweepContext ctx{&g, Matrix<Cx<double>>(g.size()), 0, options.tolerance,
                   static_cast<double>(options.tolerance)};
  for (std::size_t p = 0; p < g.size(); ++p) {
    for (std::size_t q = 0; q < g.size(); ++q) {
      const HpComplex v = g.entries(p, q).value();
      ctx.dense(p, q) = {static_cast<double>(v.re), static_cast<double>(v.im)};
      ctx.entry_err = std::max(ctx.entry_err, static_cast<double>(g.entries(p, q).error_bound()));
    }
  }
  const int threads = thread_count(options.threads);
  if (options.record_subsets) report.subset_relative_singular_values.reserve(total);

  report.min_relative_singular_value = 1;
  report.min_singular_value = -1;
  std::vector<Combo> block;
  block.reserve(kBlock);
  std::vector<SubsetResult> results;
  bool stop = false;

  auto flush = [&]() {
    results.assign(block.size(), {});
    auto work = [&](int t) {
      for (std::size_t i = static_cast<std::size_t>(t); i < block.size(); i += static_cast<std::size_t>(threads)) {
        results[i] = evaluate(ctx, block[i]);
      }
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
      for (auto& th : pool) th.join();
    }
    for (std::size_t i = 0; i < block.size() && !stop; ++i) {
      const SubsetResult& r = results[i];
      ++report.subset_count;
      report.escalations += r.escalated ? 1 : 0;
      report.min_relative_singular_value = std::min(report.min_relative_singular_value, r.relative);
      if (report.min_singular_value < 0 || r.sigma_min < report.min_singular_value) {
        report.min_singular_value = r.sigma_min;
      }
      if (options.record_subsets) report.subset_relative_singular_values.push_back(static_cast<float>(r.relative));
      switch (r.status) {
        case IndependenceStatus::Independent: ++report.independent; break;
        case IndependenceStatus::Dependent: ++report.dependent; break;
        case IndependenceStatus::Inconclusive: ++report.inconclusive; break;
      }
      if (r.status != IndependenceStatus::Independent) {
        SweepFailure failure{{}, *r.verdict};
        for (std::size_t p = 0; p < block[i].size; ++p) failure.subset.push_back(elements[block[i].idx[p]]);
        report.first_failure = std::move(failure);
        stop = true;
      }
    }
    block.clear();
  };

  const std::size_t n = elements.size();
  for (int s = 1; s <= options.max_subset_size && static_cast<std::size_t>(s) <= n && !stop; ++s) {
    Combo c;
    c.size = static_cast<std::uint8_t>(s);
    for (int i = 0; i < s; ++i) c.idx[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
    do {
      block.push_back(c);
      if (block.size() == kBlock) flush();
    } while (!stop && next_combo(c, n));
    if (!stop && !block.empty()) flush();
  }
  if (report.min_singular_value < 0) report.min_singular_value = 0;
  return report;
}

}  // namespace siframes

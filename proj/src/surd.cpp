#include "siframes/surd.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "siframes/errors.hpp"

namespace siframes {

Gaussian Gaussian::inverse() const {
  const Rational n = norm();
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "division by zero");
  return {re / n, -im / n};
}

namespace {

using Radicand = Surd::Radicand;

std::vector<Radicand> prime_factors(Radicand r) {
  std::vector<Radicand> primes;
  for (Radicand p = 2; p * p <= r; ++p) {
    if (r % p == 0) {
      primes.push_back(p);
      while (r % p == 0) r /= p;
    }
  }
  if (r > 1) primes.push_back(r);
  return primes;
}

Radicand checked_product(Radicand a, Radicand b) {
  const auto wide = static_cast<unsigned __int128>(a) * b;
  if (wide > static_cast<unsigned __int128>(UINT64_MAX)) {
    throw Error(ErrorKind::InvalidArgument, "radicand overflow in exact arithmetic");
  }
  return static_cast<Radicand>(wide);
}

// n = square^2 * free with free square-free; prime factors above the cap are rejected.
std::pair<Integer, Radicand> split_square(Integer n) {
  Integer square = 1;
  Integer free = 1;
  for (std::uint64_t p = 2; p * p <= n && p <= kMaxRadicandPrime; ++p) {
    unsigned count = 0;
    while (n % p == 0) {
      n /= p;
      ++count;
    }
    for (unsigned i = 0; i + 1 < count; i += 2) square *= p;
    if (count % 2 == 1) free *= p;
  }
  if (n > 1) {
    const Integer root = boost::multiprecision::sqrt(n);
    if (root * root == n) {
      square *= root;
    } else if (n <= kMaxRadicandPrime) {
      free *= n;
    } else {
      throw Error(ErrorKind::InvalidArgument, "radicand has a prime factor beyond the supported range");
    }
  }
  if (free > Integer(UINT64_MAX)) throw Error(ErrorKind::InvalidArgument, "radicand too large");
  return {square, free.convert_to<Radicand>()};
}

}  // namespace

Surd::Surd(const Rational& q) {
  if (q != 0) terms_.emplace_back(1, Gaussian{q, 0});
}

Surd::Surd(const Gaussian& g) {
  if (!g.is_zero()) terms_.emplace_back(1, g);
}

Surd Surd::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.first < y.first; });
  Surd out;
  for (auto& t : terms) {
    if (!out.terms_.empty() && out.terms_.back().first == t.first) {
      out.terms_.back().second = out.terms_.back().second + t.second;
      if (out.terms_.back().second.is_zero()) out.terms_.pop_back();
    } else if (!t.second.is_zero()) {
      out.terms_.push_back(std::move(t));
    }
  }
  return out;
}

Surd Surd::sqrt(const Rational& q) {
  if (q <= 0) throw Error(ErrorKind::InvalidArgument, "square root of a nonpositive rational");
  const Integer num = boost::multiprecision::numerator(q);
  const Integer den = boost::multiprecision::denominator(q);
  // sqrt(n/d) = sqrt(n*d)/d
  const auto [square, free] = split_square(num * den);
  Surd out;
  out.terms_.emplace_back(free, Gaussian{Rational(square, den), 0});
  return out;
}

const Surd& Surd::root_of_unity_24(int k) {
  static const std::array<Surd, 24> table = [] {
    // zeta_24 = cos 15deg + i sin 15deg = ((sqrt6 + sqrt2) + i (sqrt6 - sqrt2)) / 4
    Surd zeta = from_terms({{2, Gaussian{Rational(1, 4), Rational(-1, 4)}},
                            {6, Gaussian{Rational(1, 4), Rational(1, 4)}}});
    std::array<Surd, 24> powers;
    powers[0] = Surd(1);
    for (std::size_t i = 1; i < powers.size(); ++i) powers[i] = powers[i - 1] * zeta;
    return powers;
  }();
  return table[static_cast<std::size_t>(((k % 24) + 24) % 24)];
}

Surd Surd::conj() const {
  Surd out = *this;
  for (auto& t : out.terms_) t.second = t.second.conj();
  return out;
}

Surd& Surd::operator+=(const Surd& o) {
  std::vector<Term> all = terms_;
  all.insert(all.end(), o.terms_.begin(), o.terms_.end());
  *this = from_terms(std::move(all));
  return *this;
}

Surd& Surd::operator-=(const Surd& o) { return *this += -o; }

Surd operator-(const Surd& a) {
  Surd out = a;
  for (auto& t : out.terms_) t.second = -t.second;
  return out;
}

Surd operator*(const Surd& a, const Surd& b) {
  std::vector<Surd::Term> products;
  products.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& [ra, ga] : a.terms_) {
    for (const auto& [rb, gb] : b.terms_) {
      const Radicand g = std::gcd(ra, rb);
      const Radicand r = checked_product(ra / g, rb / g);
      products.emplace_back(r, ga * gb * Rational(static_cast<unsigned long long>(g)));
    }
  }
  return Surd::from_terms(std::move(products));
}

Surd Surd::inverse() const {
  if (is_zero()) throw Error(ErrorKind::InvalidArgument, "division by zero");
  Radicand largest = 1;
  for (const auto& [r, g] : terms_) {
    const auto primes = prime_factors(r);
    if (!primes.empty()) largest = std::max(largest, primes.back());
  }
  if (largest == 1) return Surd(terms_.front().second.inverse());
  // x = A + B sqrt(p)  =>  1/x = (A - B sqrt(p)) / (A^2 - p B^2), and the
  // denominator no longer involves sqrt(p).
  const Radicand p = largest;
  std::vector<Term> a_terms;
  std::vector<Term> b_terms;
  for (const auto& t : terms_) {
    if (t.first % p == 0) {
      b_terms.emplace_back(t.first / p, t.second);
    } else {
      a_terms.push_back(t);
    }
  }
  const Surd a = from_terms(std::move(a_terms));
  const Surd b = from_terms(std::move(b_terms));
  const Surd denom = a * a - b * b * Surd(Rational(static_cast<unsigned long long>(p)));
  Surd sqrt_p;
  sqrt_p.terms_.emplace_back(p, Gaussian{1, 0});
  return (a - b * sqrt_p) * denom.inverse();
}

HpComplex Surd::approx() const {
  HpComplex sum;
  for (const auto& [r, g] : terms_) {
    const Real root = boost::multiprecision::sqrt(Real(static_cast<unsigned long long>(r)));
    sum += HpComplex{to_real(g.re) * root, to_real(g.im) * root};
  }
  return sum;
}

}  // namespace siframes

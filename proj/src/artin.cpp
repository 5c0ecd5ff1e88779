#include "cubicount/artin.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace cubic {

namespace {

// Reciprocal polynomial of D_p (and of L_p) per class: D_p = 1/poly.
std::array<i64, 3> d_reciprocal(SplittingType t) {
  switch (t) {
    case SplittingType::Split111: return {1, -2, 1};
    case SplittingType::Partial12: return {1, 0, -1};
    case SplittingType::Inert3: return {1, 1, 1};
    case SplittingType::Ramified1_21: return {1, -1, 0};
    case SplittingType::TotallyRamified1_3:
    case SplittingType::Zero0: return {1, 0, 0};
  }
  throw std::logic_error("d_reciprocal: bad splitting type");
}

bool is_legal_e_polynomial(const std::array<i64, 3>& q) {
  static const std::array<i64, 3> legal[6] = {{1, 0, 0},  {1, -1, 0}, {1, 1, 0},
                                              {1, -2, 1}, {1, 0, -1}, {1, 1, 1}};
  return std::find(std::begin(legal), std::end(legal), q) != std::end(legal);
}

// Trial-division factorization, adequate for the coefficient-layer domain
// (indices, truncation lengths, AFE summation ranges).
std::vector<std::pair<i64, i64>> factorize(i64 n) {
  if (n < 1) throw std::invalid_argument("factorize: n must be >= 1");
  std::vector<std::pair<i64, i64>> out;
  for (i64 p = 2; p * p <= n && p <= 1000000; p += (p == 2) ? 1 : 2) {
    if (n % p) continue;
    i64 m = 0;
    while (n % p == 0) {
      n /= p;
      ++m;
    }
    out.push_back({p, m});
  }
  if (n > 1) {
    if (!is_prime_i64(n))
      throw std::invalid_argument("factorize: cofactor beyond trial bound");
    out.push_back({n, 1});
  }
  return out;
}

void require_prime(i64 p, const char* who) {
  if (!is_prime_i64(p))
    throw std::invalid_argument(std::string(who) + ": p must be prime");
}

// The E-factor at p given the form's class and its maximalization: the exact
// polynomial quotient L_reciprocal / D_reciprocal, with every structural
// guarantee re-checked (quotient exact and integral, one of the six legal
// polynomials, degree bounds, triviality exactly at primes not dividing the
// index).
EulerFactorData make_e_factor(const BinaryCubicForm& f,
                              const MaximalizationResult& mr, i64 p) {
  const std::array<i64, 3> D = d_reciprocal(splitting_type_only(f, p));
  const std::array<i64, 3> L =
      d_reciprocal(splitting_type_only(mr.maximal_form, p));
  // Solve D * E = L with deg E <= 2 (D[0] = 1), then confirm the x^3, x^4
  // coefficients of the product vanish so the division was exact.
  std::array<i64, 3> E;
  E[0] = L[0];
  E[1] = L[1] - D[1] * E[0];
  E[2] = L[2] - D[1] * E[1] - D[2] * E[0];
  if (D[1] * E[2] + D[2] * E[1] != 0 || D[2] * E[2] != 0)
    throw std::logic_error("euler_factor: local quotient is not a polynomial");
  if (!is_legal_e_polynomial(E))
    throw std::logic_error("euler_factor: quotient outside the legal list");
  i64 v = 0;
  for (i64 idx = mr.index; idx % p == 0; idx /= p) ++v;
  const bool trivial = (E[1] == 0 && E[2] == 0);
  // Maximal at p forces a trivial quotient; a nontrivial one at p coprime to
  // the index would contradict that, so treat it as an internal error.  (The
  // converse direction is genuinely false: see the header.)
  if (v == 0 && !trivial)
    throw std::logic_error("euler_factor: nontrivial quotient at maximal p");
  if ((v == 1 || splitting_type_only(f, p) == SplittingType::Ramified1_21) &&
      E[2] != 0)
    throw std::logic_error("euler_factor: degree bound violated");
  return EulerFactorData{p, EulerFactorKind::EFactor, E};
}

}  // namespace

i64 lambda_prime_power(SplittingType sigma, i64 m) {
  if (m < 0) throw std::invalid_argument("lambda_prime_power: m must be >= 0");
  if (m == 0) return 1;
  switch (sigma) {
    case SplittingType::Split111: return m + 1;
    case SplittingType::Partial12: return (m % 2 == 0) ? 1 : 0;
    case SplittingType::Inert3: return m % 3 == 0 ? 1 : (m % 3 == 1 ? -1 : 0);
    case SplittingType::Ramified1_21: return 1;
    case SplittingType::TotallyRamified1_3:
    case SplittingType::Zero0: return 0;
  }
  throw std::logic_error("lambda_prime_power: bad splitting type");
}

i64 lambda(const BinaryCubicForm& f, i64 n) {
  if (n < 1) throw std::invalid_argument("lambda: n must be >= 1");
  i64 result = 1;
  for (auto [p, m] : factorize(n)) {
    result *= lambda_prime_power(splitting_type_only(f, p), m);
    if (result == 0) return 0;
  }
  return result;
}

std::vector<i64> lambda_table(const BinaryCubicForm& f, i64 nmax) {
  if (nmax < 0) throw std::invalid_argument("lambda_table: nmax must be >= 0");
  if (nmax > 20000000)
    throw std::invalid_argument("lambda_table: nmax too large for the sieve");
  std::vector<i64> lam(static_cast<size_t>(nmax) + 1, 0);
  if (nmax == 0) return lam;
  lam[1] = 1;
  if (nmax == 1) return lam;
  // Smallest prime factor sieve, then peel p^m off n and reuse lam[n / p^m].
  std::vector<i64> spf(static_cast<size_t>(nmax) + 1, 0);
  for (i64 i = 2; i <= nmax; ++i) {
    if (spf[i] != 0) continue;
    for (i64 j = i; j <= nmax; j += i)
      if (spf[j] == 0) spf[j] = i;
  }
  std::map<i64, SplittingType> klass;
  for (i64 n = 2; n <= nmax; ++n) {
    const i64 p = spf[n];
    i64 m = 0, rest = n;
    while (rest % p == 0) {
      rest /= p;
      ++m;
    }
    auto it = klass.find(p);
    if (it == klass.end())
      it = klass.emplace(p, splitting_type_only(f, p)).first;
    lam[n] = lam[rest] * lambda_prime_power(it->second, m);
  }
  return lam;
}

Rat theta(const BinaryCubicForm& f, i64 p, i64 m) {
  require_prime(p, "theta");
  if (m < 1) throw std::invalid_argument("theta: m must be >= 1");
  const std::array<i64, 3> q = d_reciprocal(splitting_type_only(f, p));
  // Newton's identities for the power sums of the inverse roots of
  // q0 + q1 x + q2 x^2 (q0 = 1): s1 = -q1, s2 = q1^2 - 2 q2, and
  // s_m = -q1 s_{m-1} - q2 s_{m-2} for m >= 3.
  i64 s_prev = -q[1];                  // s_1
  if (m == 1) return Rat(s_prev);
  i64 s_cur = q[1] * q[1] - 2 * q[2];  // s_2
  for (i64 j = 3; j <= m; ++j) {
    i64 s_next = -q[1] * s_cur - q[2] * s_prev;
    s_prev = s_cur;
    s_cur = s_next;
  }
  return Rat(s_cur);
}

int factor_degree(const EulerFactorData& factor) {
  if (factor.poly[2] != 0) return 2;
  if (factor.poly[1] != 0) return 1;
  return 0;
}

EulerFactorData euler_factor(const BinaryCubicForm& f, i64 p,
                             EulerFactorKind kind) {
  require_prime(p, "euler_factor");
  if (kind == EulerFactorKind::DFactor)
    return EulerFactorData{p, kind, d_reciprocal(splitting_type_only(f, p))};
  MaximalizationResult mr = maximalize(f);
  if (kind == EulerFactorKind::LFactor)
    return EulerFactorData{
        p, kind, d_reciprocal(splitting_type_only(mr.maximal_form, p))};
  return make_e_factor(f, mr, p);
}

UnbalancedCoeffs unbalanced_expansion(const EulerFactorData& e_factor, int M) {
  if (e_factor.kind != EulerFactorKind::EFactor)
    throw std::invalid_argument("unbalanced_expansion: needs an E-factor");
  if (M < 0) throw std::invalid_argument("unbalanced_expansion: M must be >= 0");
  require_prime(e_factor.p, "unbalanced_expansion");
  const i64 p = e_factor.p;
  const std::array<i64, 3>& q = e_factor.poly;
  // With u = p^{1/2-s} and E_p = Q(x): the target series is
  // (q2 + q1 u + q0 u^2) / Q(u/p), a rational power series in u.
  const Rat d1 = Rat(q[1]) / Rat(p);
  const Rat d2 = Rat(q[2]) / (Rat(p) * Rat(p));
  UnbalancedCoeffs out;
  out.p = p;
  out.e.resize(static_cast<size_t>(M) + 1);
  for (int m = 0; m <= M; ++m) {
    Rat num = 0;
    if (m == 0) num = q[2];
    if (m == 1) num = q[1];
    if (m == 2) num = q[0];
    if (m >= 1) num -= d1 * out.e[m - 1];
    if (m >= 2) num -= d2 * out.e[m - 2];
    out.e[m] = num;
  }
  return out;
}

UnbalancedCoeffs e_coeffs(const BinaryCubicForm& f, i64 p, int M) {
  require_prime(p, "e_coeffs");
  if (M < 0) throw std::invalid_argument("e_coeffs: M must be >= 0");
  MaximalizationResult mr = maximalize(f);
  if (mr.index % p != 0) {
    UnbalancedCoeffs out;
    out.p = p;
    out.e.assign(static_cast<size_t>(M) + 1, Rat(0));
    return out;
  }
  return unbalanced_expansion(make_e_factor(f, mr, p), M);
}

Rat EkSeries::coefficient(i64 k) const {
  if (k < 1) throw std::invalid_argument("EkSeries: k must be >= 1");
  Rat result = 1;
  i64 rest = k;
  for (size_t i = 0; i < primes.size(); ++i) {
    i64 v = 0;
    while (rest % primes[i] == 0) {
      rest /= primes[i];
      ++v;
    }
    if (v >= static_cast<i64>(per_prime[i].e.size()))
      throw std::invalid_argument("EkSeries: exponent beyond truncation");
    result *= per_prime[i].e[v];
  }
  if (rest != 1) return 0;  // k has a prime factor outside ind(f)
  return result;
}

std::vector<std::pair<i64, Rat>> EkSeries::nonzero_up_to(i64 kmax) const {
  std::vector<std::pair<i64, Rat>> out;
  if (kmax < 1) return out;
  // Depth-first product over the index primes; exponents bounded by both the
  // truncation and kmax.
  struct Frame {
    size_t i;
    i64 k;
    Rat value;
  };
  std::vector<Frame> stack{{0, 1, Rat(1)}};
  while (!stack.empty()) {
    Frame fr = stack.back();
    stack.pop_back();
    if (fr.i == primes.size()) {
      if (fr.value != 0) out.push_back({fr.k, fr.value});
      continue;
    }
    const auto& coeffs = per_prime[fr.i].e;
    i64 pk = 1;
    for (size_t m = 0; m < coeffs.size(); ++m) {
      if (m > 0) {
        if (pk > kmax / primes[fr.i]) break;
        pk *= primes[fr.i];
      }
      if (fr.k > kmax / pk) break;
      stack.push_back({fr.i + 1, fr.k * pk, Rat(fr.value * coeffs[m])});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

EkSeries e_series(const BinaryCubicForm& f, int M) {
  if (M < 0) throw std::invalid_argument("e_series: M must be >= 0");
  MaximalizationResult mr = maximalize(f);
  EkSeries series;
  series.index = mr.index;
  series.radical = 1;
  for (auto [p, v] : factorize(mr.index)) {
    (void)v;
    series.primes.push_back(p);
    series.radical *= p;
    series.per_prime.push_back(
        unbalanced_expansion(make_e_factor(f, mr, p), M));
  }
  return series;
}

Rat e_k(const BinaryCubicForm& f, i64 k) {
  if (k < 1) throw std::invalid_argument("e_k: k must be >= 1");
  i64 needed = 1;
  for (auto [p, v] : factorize(k)) {
    (void)p;
    needed = std::max(needed, v);
  }
  return e_series(f, static_cast<int>(needed)).coefficient(k);
}

}  // namespace cubic

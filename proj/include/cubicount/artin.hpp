#pragma once
// ============================================================================
// Dirichlet-coefficient layer for cubic forms and their fields.
//
// To a nonzero class of f mod p we attach the local factor (x = p^{-s})
//
//     D_p(s,f) = (1-x)^{-2}        if  f has class (111)
//                (1-x^2)^{-1}      if  (12)
//                (1+x+x^2)^{-1}    if  (3)
//                (1-x)^{-1}        if  (1^21)
//                1                 if  (1^3) or (0),
//
// whose Dirichlet coefficients lambda_{p^m}(f) are, explicitly,
//
//     (111): m+1      (12): 1 if m even, else 0      (3): 1, -1, 0 as
//     m = 0, 1, 2 mod 3      (1^21): 1      (1^3), (0): 0,
//
// extended multiplicatively to lambda_n(f) over n = prod p^m.  For the ring
// of integers of a cubic field K (f maximal) these are the coefficients of
// the degree-2 Artin L-function L(s, rho_K): D(s,f) = L(s, rho_{K_f}) when f
// is maximal, and in general D(s,f) = L(s, rho_{K_f}) E(s,f) where the
// correction E(s,f) = prod_p E_p(s,f) is a finite product over p | ind(f),
// ind(f)^2 being the ratio of disc(f) to the field discriminant.
//
// Each E_p(s,f) = D_p(s,f) / L_p(s, rho_{K_f}) is a polynomial in p^{-s} of
// degree at most two; the complete list of possibilities is
//
//     1,  1 - x,  1 + x,  (1-x)^2,  1 - x^2,  1 + x + x^2,
//
// and the degree is at most one whenever p || ind(f) or f has class (1^21)
// at p.
//
// theta_{p^m}(f) denotes the p^m-th coefficient of the logarithmic
// derivative -D'/D(s,f) divided by log p: the power sum of the m-th powers
// of the inverse roots of the reciprocal polynomial of D_p.  It satisfies
// theta_p = lambda_p, theta_{p^2} = 2 lambda_{p^2} - lambda_p^2, and
// |theta_{p^m}| <= 2 always.
//
// The unbalanced-functional-equation coefficients e_{p,m}(f) are defined by
// the expansion (u = p^{1/2 - s})
//
//     E_p(1/2-s, f) / E_p(1/2+s, f) = p^{2s-1} sum_{m>=0} e_{p,m}(f) u^m,
//
// i.e., with E_p = Q(x), the series sum e_{p,m} u^m equals the exact
// rational division (q2 + q1 u + q0 u^2) / Q(u/p).  For p not dividing
// ind(f) every e_{p,m} is defined to be zero.  The assembled coefficients
//
//     e_k(f) = prod_{p | ind(f)} e_{p, v_p(k)}(f)
//
// (zero when k has a prime factor outside ind(f)) satisfy, for
// Re(s) > -1/2,
//
//     E(1/2-s, f) / E(1/2+s, f)
//         = rad(ind(f))^{2s-1} sum_{k>=1} e_k(f) k^{1/2-s},
//
// and vanish unless k is a multiple of the squarefree part of ind(f),
// because e_{p,0} = 0 exactly when deg E_p <= 1.  Note the product runs
// over all primes dividing ind(f), not only those dividing k: a prime
// p | ind(f) with deg E_p <= 1 and p not dividing k contributes its
// e_{p,0} = 0, which is what produces that support constraint.
// ============================================================================

#include <array>
#include <utility>
#include <vector>

#include "cubicount/common.hpp"
#include "cubicount/forms.hpp"
#include "cubicount/local.hpp"

namespace cubic {

// lambda_{p^m} of a class, from the table above.  m >= 0 (lambda_{p^0} = 1).
i64 lambda_prime_power(SplittingType sigma, i64 m);

// lambda_n(f), multiplicative in n; n >= 1.  Depends only on f mod rad(n).
i64 lambda(const BinaryCubicForm& f, i64 n);

// lambda_n(f) for all 0 <= n <= nmax at once (index 0 holds 0), via a
// smallest-prime-factor sieve; the per-prime class is computed once.
std::vector<i64> lambda_table(const BinaryCubicForm& f, i64 nmax);

// theta_{p^m}(f) for m >= 1, computed by the Newton power-sum recurrence on
// the stored reciprocal polynomial of D_p.  Always an integer of absolute
// value at most 2 (returned exact).
Rat theta(const BinaryCubicForm& f, i64 p, i64 m);

enum class EulerFactorKind { DFactor, LFactor, EFactor };

// One local factor at p, as a polynomial in x = p^{-s} with integer
// coefficients poly[0] + poly[1] x + poly[2] x^2.  For the D and L kinds the
// actual factor is the reciprocal 1/poly (these factors are inverses of
// polynomials); for the E kind the factor is poly itself.
struct EulerFactorData {
  i64 p = 0;
  EulerFactorKind kind = EulerFactorKind::DFactor;
  std::array<i64, 3> poly{1, 0, 0};

  friend bool operator==(const EulerFactorData&, const EulerFactorData&) = default;
};

// Degree of the stored polynomial (0 for the constant factor 1).
int factor_degree(const EulerFactorData& factor);

// The local factor of f at p:
//   DFactor: from the class of f mod p (any nonzero form).
//   LFactor: from the class of the maximalization of f (requires f
//            irreducible; throws std::invalid_argument otherwise).
//   EFactor: the exact quotient D_p / L_p, simplified to one of the six
//            polynomials above.  Equals 1 whenever f is maximal at p; the
//            converse fails (an index-p subring formed at the single root
//            of a (1^21) form keeps its class, so its quotient is 1 even
//            though p divides the index).  The division is performed and
//            checked exactly; the degree bounds (<= 2 always; <= 1 when
//            p || ind(f) or class (1^21)) are asserted.
EulerFactorData euler_factor(const BinaryCubicForm& f, i64 p, EulerFactorKind kind);

// e_{p,0..M} for one prime.
struct UnbalancedCoeffs {
  i64 p = 0;
  std::vector<Rat> e;  // e[m] = e_{p,m}(f), 0 <= m <= M
};

// The expansion coefficients of p^{1-2s} E_p(1/2-s)/E_p(1/2+s) for the given
// E-factor (kind must be EFactor), by exact rational power-series division.
UnbalancedCoeffs unbalanced_expansion(const EulerFactorData& e_factor, int M);

// e_{p,m}(f) for 0 <= m <= M.  All zero when p does not divide ind(f)
// (that includes every maximal f).  Requires f irreducible.
UnbalancedCoeffs e_coeffs(const BinaryCubicForm& f, i64 p, int M);

// Precomputed per-form assembly of the e_k(f) over composite k.
struct EkSeries {
  i64 index = 1;    // ind(f)
  i64 radical = 1;  // rad(ind(f))
  std::vector<i64> primes;                  // primes dividing ind(f), ascending
  std::vector<UnbalancedCoeffs> per_prime;  // parallel to primes, m <= M

  // e_k(f).  Zero for k with a prime factor outside ind(f); throws
  // std::invalid_argument if some v_p(k) exceeds the stored M.
  Rat coefficient(i64 k) const;

  // All (k, e_k) with e_k != 0 and k <= kmax, sorted by k.
  std::vector<std::pair<i64, Rat>> nonzero_up_to(i64 kmax) const;
};

// Build the assembly for f (irreducible), with per-prime truncation M.
EkSeries e_series(const BinaryCubicForm& f, int M = 40);

// Convenience single-value e_k(f).
Rat e_k(const BinaryCubicForm& f, i64 k);

}  // namespace cubic

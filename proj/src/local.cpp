// ============================================================================
// Local structure: splitting types, maximality, index-p moves, switching.
//
// Root multiplicities mod p are computed by synthetic division: the point
// [t0:1] appears in f mod p with the multiplicity of t0 in the dehomogenized
// cubic f(t,1), and [1:0] with multiplicity 3 - deg(f(t,1) mod p).  A
// homogeneous cubic over F_p factors as linears and irreducibles of total
// degree 3, so the total root multiplicity is 3, 1, or 0 -- never 2.
//
// The maximality test is root-local.  At a multiple root alpha of f mod p
// both partials vanish mod p, so f(alpha') mod p^2 is the same for every
// primitive lift alpha'; nonmaximality at p (for f not a multiple of p) is
// exactly the existence of a multiple root with p^2 | f(alpha').  Moving
// alpha to [1:0] by gamma = [[u,1],[-1,0]] (affine alpha = [u:1]) or the
// identity (alpha = [1:0]) turns that condition into p^2 | a, p | b, in
// which shape the index-p overring and subring are coefficient shifts:
//
//   overring (p^2 | a, p | b):   (a/p^2, b/p, c, p d)
//   subring  (p | a):            (a/p,   b, p c, p^2 d)
//
// The switching check counts index-p inclusions R c R' two ways; see the
// header for the identity.  Stabilizers of a pair are computed as the
// automorphs of the relevant positive definite covariant (the Hessian for
// disc > 0, the definite quadratic factor for reducible disc < 0) filtered
// to stabilize the form and fix the distinguished root mod p.
// ============================================================================

#include "cubicount/local.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cubicount/enumerate.hpp"
#include "cubicount/reduce.hpp"

namespace cubic {

namespace {

// ---------------------------------------------------------------------------
// F_p scalar helpers.
// ---------------------------------------------------------------------------

i64 fp_mul(i64 x, i64 y, i64 p) { return static_cast<i64>(static_cast<i128>(x) * y % p); }

i64 fp_inv(i64 x, i64 p) {
  i64 s = 0, t = 0;
  const i64 g = ext_gcd(mod_pos(x, p), p, s, t);
  if (g != 1) throw std::invalid_argument("fp_inv: not invertible");
  return mod_pos(s, p);
}

i64 fp_pow(i64 x, i64 e, i64 p) {
  i64 r = 1 % p;
  x = mod_pos(x, p);
  while (e > 0) {
    if (e & 1) r = fp_mul(r, x, p);
    x = fp_mul(x, x, p);
    e >>= 1;
  }
  return r;
}

i128 isqrt_i128(i128 n) {
  if (n < 0) throw std::invalid_argument("isqrt_i128: negative");
  if (n == 0) return 0;
  i128 x = static_cast<i128>(__builtin_sqrtl(static_cast<long double>(n))) + 2;
  while (x * x > n) --x;
  return x;
}

// ---------------------------------------------------------------------------
// Root scan mod p.
// ---------------------------------------------------------------------------

// Multiplicity of t0 as a root of A3 t^3 + A2 t^2 + A1 t + A0 over F_p,
// by repeated synthetic division; the coefficient vector may have leading
// zeros (degree drop is handled at [1:0] separately).
int affine_multiplicity(std::array<i64, 4> coef, i64 t0, i64 p) {
  int mult = 0;
  while (mult < 3) {
    const i64 r0 = coef[0];
    const i64 r1 = mod_pos(coef[1] + fp_mul(t0, r0, p), p);
    const i64 r2 = mod_pos(coef[2] + fp_mul(t0, r1, p), p);
    const i64 rem = mod_pos(coef[3] + fp_mul(t0, r2, p), p);
    if (rem != 0) break;
    ++mult;
    coef = {0, r0, r1, r2};
  }
  return mult;
}

SplittingType classify_from_multiplicities(const std::vector<LocalRoot>& roots) {
  int total = 0;
  int max_mult = 0;
  for (const LocalRoot& r : roots) {
    total += r.multiplicity;
    max_mult = std::max(max_mult, r.multiplicity);
  }
  switch (total) {
    case 0:
      return SplittingType::Inert3;
    case 1:
      return SplittingType::Partial12;
    case 3:
      if (max_mult == 3) return SplittingType::TotallyRamified1_3;
      if (max_mult == 2) return SplittingType::Ramified1_21;
      return SplittingType::Split111;
    default:
      throw std::logic_error("classify_from_multiplicities: impossible total");
  }
}

// ---------------------------------------------------------------------------
// Distinct-root counting via Frobenius, for large p away from disc.
// Polynomials over F_p are coefficient vectors, lowest degree first.
// ---------------------------------------------------------------------------

void poly_trim(std::vector<i64>& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

// Remainder modulo the monic cubic t^3 + q2 t^2 + q1 t + q0, in place on a
// degree <= 4 coefficient array.
void reduce_by_monic_cubic(std::array<i64, 5>& e, i64 q2, i64 q1, i64 q0, i64 p) {
  for (int k = 4; k >= 3; --k) {
    const i64 top = e[k];
    if (top == 0) continue;
    e[k] = 0;
    e[k - 1] = mod_pos(e[k - 1] - fp_mul(top, q2, p), p);
    e[k - 2] = mod_pos(e[k - 2] - fp_mul(top, q1, p), p);
    e[k - 3] = mod_pos(e[k - 3] - fp_mul(top, q0, p), p);
  }
}

std::array<i64, 3> mulmod_cubic(const std::array<i64, 3>& u, const std::array<i64, 3>& v,
                                i64 q2, i64 q1, i64 q0, i64 p) {
  std::array<i64, 5> e{};
  for (int i = 0; i < 3; ++i) {
    if (u[i] == 0) continue;
    for (int j = 0; j < 3; ++j) e[i + j] = mod_pos(e[i + j] + fp_mul(u[i], v[j], p), p);
  }
  reduce_by_monic_cubic(e, q2, q1, q0, p);
  return {e[0], e[1], e[2]};
}

// t^p modulo the monic cubic, by square-and-multiply.
std::array<i64, 3> frobenius_of_t(i64 q2, i64 q1, i64 q0, i64 p) {
  std::array<i64, 3> result{1, 0, 0};
  std::array<i64, 3> base{0, 1, 0};
  i64 e = p;
  while (e > 0) {
    if (e & 1) result = mulmod_cubic(result, base, q2, q1, q0, p);
    base = mulmod_cubic(base, base, q2, q1, q0, p);
    e >>= 1;
  }
  return result;
}

// Degree of gcd(f, g) over F_p (inputs of degree <= 3); -1 for gcd(0, 0).
int poly_gcd_degree(std::vector<i64> f, std::vector<i64> g, i64 p) {
  poly_trim(f);
  poly_trim(g);
  while (!g.empty()) {
    const i64 lead_inv = fp_inv(g.back(), p);
    while (f.size() >= g.size()) {
      const i64 scale = fp_mul(f.back(), lead_inv, p);
      const std::size_t shift = f.size() - g.size();
      for (std::size_t i = 0; i < g.size(); ++i)
        f[shift + i] = mod_pos(f[shift + i] - fp_mul(scale, g[i], p), p);
      poly_trim(f);
      if (f.empty()) break;
    }
    std::swap(f, g);
  }
  return f.empty() ? -1 : static_cast<int>(f.size()) - 1;
}

// ---------------------------------------------------------------------------
// Factorization helpers.
// ---------------------------------------------------------------------------

constexpr i64 kTrialDivisionBound = 10000;

// Primes p with p^2 | n, found by trial division up to the bound.  A
// cofactor with all prime factors above the bound is certified squarefree
// when it is 1, a proven prime, or the square of a proven prime (that prime
// is then returned too); otherwise we cannot rule out a hidden square
// factor and throw rather than answer wrongly.
std::vector<i64> square_divisor_primes(i128 n, i64 bound) {
  if (n < 0) n = -n;
  std::vector<i64> out;
  for (i64 p = 2; p <= bound && static_cast<i128>(p) * p <= n; p += (p == 2) ? 1 : 2) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e >= 2) out.push_back(p);
  }
  if (n == 1) return out;
  if (n <= static_cast<i128>(bound) * bound) return out;  // cofactor must be prime
  if (n <= static_cast<i128>(UINT64_MAX) && is_prime_u64(static_cast<u64>(n))) return out;
  const i128 s = isqrt_i128(n);
  if (s * s == n && s <= static_cast<i128>(UINT64_MAX) && is_prime_u64(static_cast<u64>(s))) {
    out.push_back(checked_narrow(s));
    return out;
  }
  throw std::invalid_argument("square_divisor_primes: cofactor exceeds trial-division range");
}

std::vector<i64> squarefree_prime_factors(i64 m) {
  if (m < 1) throw std::invalid_argument("squarefree_prime_factors: m < 1");
  std::vector<i64> out;
  for (i64 p = 2; p * p <= m; p += (p == 2) ? 1 : 2) {
    if (m % p != 0) continue;
    m /= p;
    if (m % p == 0) throw std::invalid_argument("squarefree_prime_factors: m not squarefree");
    out.push_back(p);
  }
  if (m > 1) out.push_back(m);
  return out;
}

// ---------------------------------------------------------------------------
// Root translation.
// ---------------------------------------------------------------------------

// gamma with (1,0) * gamma = alpha, so that act(gamma, f) has a = f(alpha).
GL2Element move_root_to_infinity(const P1Point& alpha) {
  if (alpha.v == 1) return GL2Element{alpha.u, 1, -1, 0};  // det = +1
  return GL2Element::identity();                           // alpha = [1:0]
}

bool divisible(i64 x, i64 m) { return x % m == 0; }

Rat ratio(i64 num, i64 den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------------------
// Stabilizer elements (matrices), mirroring the order computation: the
// candidates are automorphs of a positive definite covariant.
// ---------------------------------------------------------------------------

// The positive definite quadratic factor of a reducible form with disc < 0:
// f = (v x - u y) * Q for the unique rational root (u, v).
HessianForm definite_quadratic_factor(const BinaryCubicForm& f,
                                      const std::pair<i64, i64>& root) {
  const auto [u, v] = root;
  Rat A, B, C;
  if (v != 0) {
    A = Rat(f.a) / v;
    B = (Rat(f.b) + u * A) / v;
    C = (Rat(f.c) + u * B) / v;
    if (Rat(-u) * C != Rat(f.d))
      throw std::logic_error("definite_quadratic_factor: division failed");
  } else {
    A = -f.b;
    B = -f.c;
    C = -f.d;
  }
  const mpz_class l = lcm(lcm(A.get_den(), B.get_den()), C.get_den());
  const auto scaled = [&l](const Rat& x) {
    Rat y = x * Rat(l);
    if (y.get_den() != 1) throw std::logic_error("definite_quadratic_factor: lcm failed");
    return y.get_num();
  };
  mpz_class Ai = scaled(A), Bi = scaled(B), Ci = scaled(C);
  const mpz_class g = gcd(gcd(Ai, Bi), Ci);
  if (g == 0) throw std::logic_error("definite_quadratic_factor: zero quadratic");
  Ai /= g;
  Bi /= g;
  Ci /= g;
  if (Ai < 0) {
    Ai = -Ai;
    Bi = -Bi;
    Ci = -Ci;
  }
  if (Ai <= 0 || Bi * Bi - 4 * Ai * Ci >= 0)
    throw std::logic_error("definite_quadratic_factor: factor not definite");
  if (!Ai.fits_slong_p() || !Bi.fits_slong_p() || !Ci.fits_slong_p())
    throw overflow_error("definite_quadratic_factor: coefficients out of range");
  return HessianForm{Ai.get_si(), Bi.get_si(), Ci.get_si()};
}

std::vector<GL2Element> stabilizer_elements(const BinaryCubicForm& f) {
  const i128 disc = discriminant(f);
  if (disc == 0) throw std::invalid_argument("stabilizer_elements: discriminant is zero");
  std::vector<GL2Element> candidates;
  if (disc > 0) {
    candidates = automorphs(hessian(f));
  } else {
    const auto roots = rational_roots(f);
    if (roots.empty()) return {GL2Element::identity()};  // trivial stabilizer
    candidates = automorphs(definite_quadratic_factor(f, roots.front()));
  }
  std::vector<GL2Element> stab;
  for (const GL2Element& g : candidates)
    if (act(g, f) == f) stab.push_back(g);
  return stab;
}

// Does gamma in Stab(f) fix the point alpha of P^1(F_p)?  Roots transform by
// alpha -> alpha * gamma^{-1} (row vector) under the twisted action.
bool fixes_point(const GL2Element& gamma, const P1Point& alpha, i64 p) {
  const GL2Element inv = gamma.inverse();
  const i64 u = mod_pos(checked_narrow(checked_add(checked_mul(alpha.u, inv.m00),
                                                   checked_mul(alpha.v, inv.m10))),
                        p);
  const i64 v = mod_pos(checked_narrow(checked_add(checked_mul(alpha.u, inv.m01),
                                                   checked_mul(alpha.v, inv.m11))),
                        p);
  return p1_point(p, u, v) == alpha;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public API.
// ---------------------------------------------------------------------------

const char* splitting_type_name(SplittingType t) {
  switch (t) {
    case SplittingType::Split111: return "111";
    case SplittingType::Partial12: return "12";
    case SplittingType::Inert3: return "3";
    case SplittingType::Ramified1_21: return "1^21";
    case SplittingType::TotallyRamified1_3: return "1^3";
    case SplittingType::Zero0: return "0";
  }
  throw std::logic_error("splitting_type_name: bad tag");
}

P1Point p1_point(i64 p, i64 u, i64 v) {
  if (p < 2) throw std::invalid_argument("p1_point: p < 2");
  const i64 um = mod_pos(u, p);
  const i64 vm = mod_pos(v, p);
  if (vm != 0) return P1Point{fp_mul(um, fp_inv(vm, p), p), 1};
  if (um == 0) throw std::invalid_argument("p1_point: (0, 0) is not projective");
  return P1Point{1, 0};
}

SplittingData splitting_type(const BinaryCubicForm& f, i64 p) {
  if (p < 2) throw std::invalid_argument("splitting_type: p < 2");
  const std::array<i64, 4> coef = {mod_pos(f.a, p), mod_pos(f.b, p), mod_pos(f.c, p),
                                   mod_pos(f.d, p)};
  SplittingData out;
  if (coef[0] == 0 && coef[1] == 0 && coef[2] == 0 && coef[3] == 0) {
    out.type = SplittingType::Zero0;
    out.roots.omega = p + 1;
    out.roots.omega_simple = 0;
    return out;
  }
  // Affine points [t:1].
  for (i64 t = 0; t < p; ++t) {
    const int m = affine_multiplicity(coef, t, p);
    if (m > 0) out.roots.roots.push_back({P1Point{t, 1}, m});
  }
  // [1:0], with multiplicity 3 - deg(f(t,1) mod p).
  int deg = 0;
  if (coef[0] != 0) deg = 3;
  else if (coef[1] != 0) deg = 2;
  else if (coef[2] != 0) deg = 1;
  if (deg < 3) out.roots.roots.push_back({P1Point{1, 0}, 3 - deg});
  for (const LocalRoot& r : out.roots.roots) {
    ++out.roots.omega;
    if (r.multiplicity == 1) ++out.roots.omega_simple;
  }
  out.type = classify_from_multiplicities(out.roots.roots);
  return out;
}

SplittingType splitting_type_only(const BinaryCubicForm& f, i64 p) {
  if (p < 2) throw std::invalid_argument("splitting_type_only: p < 2");
  const i64 a = mod_pos(f.a, p), b = mod_pos(f.b, p), c = mod_pos(f.c, p), d = mod_pos(f.d, p);
  if (a == 0 && b == 0 && c == 0 && d == 0) return SplittingType::Zero0;
  constexpr i64 kScanCutoff = 256;
  if (p <= kScanCutoff) return splitting_type(f, p).type;
  const i128 disc = discriminant(f);
  if (disc % p == 0) return splitting_type(f, p).type;  // ramified: rare, scan
  // Unramified and p odd: the form is squarefree mod p, so the number of
  // distinct roots (0, 1, or 3) determines the type.
  int total;
  if (a != 0) {
    const i64 inva = fp_inv(a, p);
    const i64 q2 = fp_mul(b, inva, p), q1 = fp_mul(c, inva, p), q0 = fp_mul(d, inva, p);
    const std::array<i64, 3> tp = frobenius_of_t(q2, q1, q0, p);
    // gcd(t^p - t, F): the degree counts distinct affine roots.
    std::vector<i64> lhs = {tp[0], mod_pos(tp[1] - 1, p), tp[2]};
    std::vector<i64> F = {q0, q1, q2, 1};
    const int deg = poly_gcd_degree(std::move(lhs), std::move(F), p);
    total = (deg < 0) ? 3 : deg;  // t^p == t in F_p[t]/(F) means F splits
  } else {
    // [1:0] is a simple root (p | b here would force a double root there,
    // contradicting p not dividing disc), leaving b t^2 + c t + d.
    if (b == 0) throw std::logic_error("splitting_type_only: unramified with double root");
    const i64 disc_q = mod_pos(fp_mul(c, c, p) - fp_mul(fp_mul(4 % p, b, p), d, p), p);
    const i64 chi = fp_pow(disc_q, (p - 1) / 2, p);  // Legendre symbol
    if (chi == 0) throw std::logic_error("splitting_type_only: unramified with repeated quadratic root");
    total = 1 + ((chi == 1) ? 2 : 0);
  }
  switch (total) {
    case 0: return SplittingType::Inert3;
    case 1: return SplittingType::Partial12;
    case 3: return SplittingType::Split111;
    default: throw std::logic_error("splitting_type_only: impossible root count");
  }
}

i64 omega_m(const BinaryCubicForm& f, i64 m) {
  i64 out = 1;
  for (i64 p : squarefree_prime_factors(m))
    out = checked_narrow(checked_mul(out, splitting_type(f, p).roots.omega));
  return out;
}

i64 omega_simple_m(const BinaryCubicForm& f, i64 m) {
  i64 out = 1;
  for (i64 p : squarefree_prime_factors(m))
    out = checked_narrow(checked_mul(out, splitting_type(f, p).roots.omega_simple));
  return out;
}

bool is_maximal_at(const BinaryCubicForm& f, i64 p) {
  if (p < 2) throw std::invalid_argument("is_maximal_at: p < 2");
  const i128 disc = discriminant(f);
  if (disc == 0) throw std::invalid_argument("is_maximal_at: discriminant is zero");
  const i128 p2 = static_cast<i128>(p) * p;
  if (disc % p2 != 0) return true;  // nonmaximality at p forces p^2 | disc
  const SplittingData sd = splitting_type(f, p);
  if (sd.type == SplittingType::Zero0) return false;
  for (const LocalRoot& r : sd.roots.roots) {
    if (r.multiplicity < 2) continue;
    if (f.eval(r.point.u, r.point.v) % p2 == 0) return false;
  }
  return true;
}

bool is_maximal(const BinaryCubicForm& f) {
  const i128 disc = discriminant(f);
  if (disc == 0) throw std::invalid_argument("is_maximal: discriminant is zero");
  for (i64 p : square_divisor_primes(disc, kTrialDivisionBound))
    if (!is_maximal_at(f, p)) return false;
  return true;
}

BinaryCubicForm overring_step(const BinaryCubicForm& f, i64 p, const P1Point& alpha) {
  if (p < 2) throw std::invalid_argument("overring_step: p < 2");
  const P1Point a_norm = p1_point(p, alpha.u, alpha.v);
  const BinaryCubicForm ft = act(move_root_to_infinity(a_norm), f);
  const i64 p2 = checked_narrow(checked_mul(p, p));
  if (!divisible(ft.a, p2) || !divisible(ft.b, p))
    throw std::invalid_argument("overring_step: root does not qualify");
  return BinaryCubicForm{ft.a / p2, ft.b / p, ft.c, checked_narrow(checked_mul(ft.d, p))};
}

BinaryCubicForm subring(const BinaryCubicForm& g, i64 p, const P1Point& alpha) {
  if (p < 2) throw std::invalid_argument("subring: p < 2");
  const P1Point a_norm = p1_point(p, alpha.u, alpha.v);
  const BinaryCubicForm gt = act(move_root_to_infinity(a_norm), g);
  if (!divisible(gt.a, p)) throw std::invalid_argument("subring: alpha is not a root");
  return BinaryCubicForm{gt.a / p, gt.b, checked_narrow(checked_mul(gt.c, p)),
                         checked_narrow(checked_mul(gt.d, checked_mul(p, p)))};
}

MaximalizationResult maximalize(const BinaryCubicForm& f) {
  if (!is_irreducible(f)) throw std::invalid_argument("maximalize: form is reducible");
  const i128 disc0 = discriminant(f);
  BinaryCubicForm current = canonical_form(f);
  i64 index = 1;
  for (i64 p : square_divisor_primes(disc0, kTrialDivisionBound)) {
    const i64 p2 = p * p;
    for (;;) {
      if (divisible(current.a, p) && divisible(current.b, p) && divisible(current.c, p) &&
          divisible(current.d, p)) {
        // R_{p g} has index p^2 in R_g: divide out the content.
        current = BinaryCubicForm{current.a / p, current.b / p, current.c / p, current.d / p};
        index = checked_narrow(checked_mul(index, p2));
        continue;
      }
      const SplittingData sd = splitting_type(current, p);
      const LocalRoot* qualifying = nullptr;
      for (const LocalRoot& r : sd.roots.roots) {
        if (r.multiplicity < 2) continue;
        if (current.eval(r.point.u, r.point.v) % static_cast<i128>(p2) == 0) {
          qualifying = &r;
          break;
        }
      }
      if (qualifying == nullptr) break;  // maximal at p
      current = canonical_form(overring_step(current, p, qualifying->point));
      index = checked_narrow(checked_mul(index, p));
    }
  }
  const i128 field_disc = discriminant(current);
  if (field_disc * index * index != disc0)
    throw std::logic_error("maximalize: discriminant bookkeeping failed");
  return MaximalizationResult{canonical_form(current), index, checked_narrow(field_disc)};
}

SwitchingCheckResult switching_check(i64 q, i64 X, int sign) {
  if (q < 1) throw std::invalid_argument("switching_check: q < 1");
  if (sign != 1 && sign != -1) throw std::invalid_argument("switching_check: sign must be +-1");
  const std::vector<i64> q_primes = squarefree_prime_factors(q);  // validates squarefree

  SwitchingCheckResult out;
  out.lhs = 0;
  out.rhs = 0;

  // Left side: orbits nonmaximal at every prime dividing q, |Delta| < X.
  const std::vector<OrbitRecord> lhs_orbits = enumerate_orbits(X, sign);
  std::vector<const OrbitRecord*> wq;
  for (const OrbitRecord& rec : lhs_orbits) {
    bool in_wq = true;
    for (i64 p : q_primes)
      if (is_maximal_at(rec.representative, p)) {
        in_wq = false;
        break;
      }
    if (!in_wq) continue;
    wq.push_back(&rec);
    out.lhs += ratio(1, rec.stabilizer_order);
    ++out.lhs_orbits;
  }

  // Right side: sum over k*l | q of mu(l) * omega_{kl}-weighted masses with
  // the dilated indicator q^4 |Delta| / k^2 < X, i.e. q^4 |Delta| < X k^2.
  const i64 q2 = q * q;
  const i64 bound = std::max<i64>(1, (X + q2 - 1) / q2);  // covers |Delta| < X k^2 / q^4
  const std::vector<OrbitRecord> rhs_orbits = (q == 1) ? lhs_orbits : enumerate_orbits(bound, sign);
  const i128 q4 = static_cast<i128>(q2) * q2;
  const std::size_t r = q_primes.size();
  for (std::size_t mk = 0; mk < (std::size_t{1} << r); ++mk) {
    i64 k = 1;
    for (std::size_t i = 0; i < r; ++i)
      if (mk & (std::size_t{1} << i)) k *= q_primes[i];
    for (std::size_t ml = 0; ml < (std::size_t{1} << r); ++ml) {
      if (ml & mk) continue;  // k and l must be coprime with k l | q
      i64 l = 1;
      int mu = 1;
      for (std::size_t i = 0; i < r; ++i)
        if (ml & (std::size_t{1} << i)) {
          l *= q_primes[i];
          mu = -mu;
        }
      const i128 x_k2 = static_cast<i128>(X) * k * k;
      for (const OrbitRecord& rec : rhs_orbits) {
        const i128 abs_disc = rec.discriminant < 0 ? -static_cast<i128>(rec.discriminant)
                                                   : static_cast<i128>(rec.discriminant);
        if (q4 * abs_disc >= x_k2) continue;
        const i64 w = omega_m(rec.representative, k * l);
        if (w != 0) out.rhs += ratio(mu * w, rec.stabilizer_order);
      }
    }
  }
  out.equal = (out.lhs == out.rhs);

  // For prime q: walk the explicit bijection f <-> (g, alpha) on the forms
  // that are not multiples of p, and compare |Stab(f)| with the stabilizer
  // of the pair (elements of Stab(g) fixing alpha mod p).
  if (q_primes.size() == 1 && q_primes[0] == q) {
    const i64 p = q;
    for (const OrbitRecord* rec : wq) {
      const BinaryCubicForm& f = rec->representative;
      if (content(f) % p == 0) continue;
      const SplittingData sd = splitting_type(f, p);
      const LocalRoot* qualifying = nullptr;
      for (const LocalRoot& root : sd.roots.roots) {
        if (root.multiplicity < 2) continue;
        if (f.eval(root.point.u, root.point.v) % (static_cast<i128>(p) * p) == 0) {
          qualifying = &root;
          break;
        }
      }
      if (qualifying == nullptr)
        throw std::logic_error("switching_check: nonmaximal form without qualifying root");
      // Translate the root to [1:0]; the overring h then has distinguished
      // root [0:1] (the subring of h at [0:1] recovers the translate of f).
      const BinaryCubicForm ft = act(move_root_to_infinity(qualifying->point), f);
      const BinaryCubicForm h = BinaryCubicForm{ft.a / (p * p), ft.b / p, ft.c,
                                                checked_narrow(checked_mul(ft.d, p))};
      const P1Point beta{0, 1};
      i64 pair_stab = 0;
      for (const GL2Element& gamma : stabilizer_elements(h))
        if (fixes_point(gamma, beta, p)) ++pair_stab;
      ++out.stab_checked;
      if (pair_stab != rec->stabilizer_order) ++out.stab_mismatches;
    }
  }
  return out;
}

}  // namespace cubic

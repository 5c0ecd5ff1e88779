#include "cubicount/reduce.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace cubic {

namespace {

int sgn_i128(i128 v) { return v < 0 ? -1 : (v > 0 ? 1 : 0); }
int sgn_i64(i64 v) { return v < 0 ? -1 : (v > 0 ? 1 : 0); }
int sgn_mpz(const mpz_class& v) { return sgn(v); }

// ---------------------------------------------------------------------------
// Exact sign of f(u, v) = a u^3 + b u^2 v + c u v^2 + d v^3.  The int128
// Horner chain is overflow-checked; on overflow the evaluation is repeated
// with arbitrary precision, so the sign is exact for every input.
// ---------------------------------------------------------------------------
int sign_cubic_mpz(const BinaryCubicForm& f, const mpz_class& u, const mpz_class& v) {
  mpz_class r = mpz_class(static_cast<long>(f.a)) * u * u * u;
  r += mpz_class(static_cast<long>(f.b)) * u * u * v;
  r += mpz_class(static_cast<long>(f.c)) * u * v * v;
  r += mpz_class(static_cast<long>(f.d)) * v * v * v;
  return sgn_mpz(r);
}

int sign_cubic(const BinaryCubicForm& f, i64 u, i64 v) {
  try {
    const i128 U = u, V = v;
    i128 r = static_cast<i128>(f.a);
    r = checked_add(checked_mul(r, U), checked_mul(static_cast<i128>(f.b), V));
    r = checked_add(checked_mul(r, U), checked_mul(checked_mul(static_cast<i128>(f.c), V), V));
    i128 v3 = checked_mul(checked_mul(static_cast<i128>(f.d), V), V);
    v3 = checked_mul(v3, V);
    r = checked_add(checked_mul(r, U), v3);
    return sgn_i128(r);
  } catch (const overflow_error&) {
    return sign_cubic_mpz(f, mpz_class(static_cast<long>(u)), mpz_class(static_cast<long>(v)));
  }
}

// Exact sign of A2 u^2 + B2 u v + C2 v^2.
int sign_quad_mpz(i64 A2, i64 B2, i64 C2, const mpz_class& u, const mpz_class& v) {
  mpz_class r = mpz_class(static_cast<long>(A2)) * u * u;
  r += mpz_class(static_cast<long>(B2)) * u * v;
  r += mpz_class(static_cast<long>(C2)) * v * v;
  return sgn_mpz(r);
}

int sign_quad(i64 A2, i64 B2, i64 C2, i64 u, i64 v) {
  try {
    const i128 U = u, V = v;
    i128 r = checked_mul(checked_mul(static_cast<i128>(A2), U), U);
    r = checked_add(r, checked_mul(checked_mul(static_cast<i128>(B2), U), V));
    r = checked_add(r, checked_mul(checked_mul(static_cast<i128>(C2), V), V));
    return sgn_i128(r);
  } catch (const overflow_error&) {
    return sign_quad_mpz(A2, B2, C2, mpz_class(static_cast<long>(u)), mpz_class(static_cast<long>(v)));
  }
}

// Cauchy bound: every root t of f(t,1) satisfies |t| < 1 + max(|b|,|c|,|d|)/|a|.
i64 cauchy_bound(const BinaryCubicForm& f) {
  const i64 aa = f.a < 0 ? -f.a : f.a;
  i64 m = 0;
  for (i64 v : {f.b, f.c, f.d}) m = std::max(m, v < 0 ? -v : v);
  return 2 + (m + aa - 1) / aa;
}

// ---------------------------------------------------------------------------
// Dyadic bracket (lo/2^k, hi/2^k) around the unique real root theta, all
// endpoint decisions by exact integer signs.  Kept in arbitrary precision so
// the bisection can refine indefinitely; the int128 fast path covers every
// realistic depth.
// ---------------------------------------------------------------------------
struct DyadicBracket {
  mpz_class lo, hi;  // theta in (lo/2^k, hi/2^k)
  int k = 0;
};

int sign_cubic_dyadic(const BinaryCubicForm& f, const mpz_class& u, int k) {
  if (k <= 40 && u.fits_slong_p())
    return sign_cubic(f, static_cast<i64>(u.get_si()), i64{1} << k);
  mpz_class v = mpz_class(1) << k;
  return sign_cubic_mpz(f, u, v);
}

int sign_quad_dyadic(i64 A2, i64 B2, i64 C2, const mpz_class& u, int k) {
  if (k <= 40 && u.fits_slong_p())
    return sign_quad(A2, B2, C2, static_cast<i64>(u.get_si()), i64{1} << k);
  mpz_class v = mpz_class(1) << k;
  return sign_quad_mpz(A2, B2, C2, u, v);
}

// One bisection step: cuts at the midpoint, keeping theta strictly inside.
// sign(a) * f(t, 1) is < 0 left of theta and > 0 right of it (single real
// root), so the exact midpoint sign tells which half to keep.
void bisect_once(const BinaryCubicForm& f, int sgn_a, DyadicBracket& br) {
  mpz_class mid = br.lo + br.hi;  // at scale k+1
  br.k += 1;
  br.lo <<= 1;
  br.hi <<= 1;
  const int s = sign_cubic_dyadic(f, mid, br.k);
  if (s == 0) throw std::invalid_argument("bisect_once: dyadic rational root (form is reducible)");
  if (s * sgn_a < 0)
    br.lo = mid;
  else
    br.hi = mid;
}

// Initial certified bracket: try a narrow window around the double-precision
// approximation first, else fall back to the Cauchy bound.
DyadicBracket initial_bracket(const BinaryCubicForm& f, int sgn_a) {
  const double th = real_root_approx(f);
  const double scaled = std::ldexp(th, 20);
  if (std::fabs(scaled) < 9.0e18) {
    const i64 u0 = llround(scaled);
    for (i64 w : {i64{4}, i64{1} << 10, i64{1} << 19}) {
      const int sl = sign_cubic(f, u0 - w, i64{1} << 20);
      const int sh = sign_cubic(f, u0 + w, i64{1} << 20);
      if (sl * sgn_a < 0 && sh * sgn_a > 0) {
        DyadicBracket br;
        br.lo = u0 - w;
        br.hi = u0 + w;
        br.k = 20;
        return br;
      }
    }
  }
  DyadicBracket br;
  const i64 M = cauchy_bound(f);
  br.lo = -M;
  br.hi = M;
  br.k = 0;
  return br;
}

GL2Element gl2(i64 m00, i64 m01, i64 m10, i64 m11) { return GL2Element{m00, m01, m10, m11}; }

// q o gamma for a quadratic q: rows of gamma are the images of (1,0), (0,1)
// under the row-vector action (x,y) -> (x,y) gamma.
HessianForm compose_quadratic(const HessianForm& h, const GL2Element& g) {
  const i128 P = h.P, Q = h.Q, R = h.R;
  const i128 a = g.m00, b = g.m01, c = g.m10, d = g.m11;
  const i128 P2 = checked_add(checked_add(checked_mul(checked_mul(P, a), a), checked_mul(checked_mul(Q, a), b)),
                              checked_mul(checked_mul(R, b), b));
  const i128 R2 = checked_add(checked_add(checked_mul(checked_mul(P, c), c), checked_mul(checked_mul(Q, c), d)),
                              checked_mul(checked_mul(R, d), d));
  const i128 Q2 =
      checked_add(checked_add(checked_mul(checked_mul(checked_mul(P, 2), a), c),
                              checked_mul(Q, checked_add(checked_mul(a, d), checked_mul(b, c)))),
                  checked_mul(checked_mul(checked_mul(R, 2), b), d));
  return HessianForm{checked_narrow(P2), checked_narrow(Q2), checked_narrow(R2)};
}

bool quads_equal(const HessianForm& x, const HessianForm& y) { return x.P == y.P && x.Q == y.Q && x.R == y.R; }

// The 40 matrices with entries in {-1,0,1} and determinant +-1; every
// integral automorph of a reduced positive definite quadratic lies here
// (its rows are vectors of norm P resp. R, and the reduction inequalities
// force such vectors to have entries <= 1).
const std::vector<GL2Element>& small_matrices() {
  static const std::vector<GL2Element> ms = [] {
    std::vector<GL2Element> v;
    for (int a = -1; a <= 1; ++a)
      for (int b = -1; b <= 1; ++b)
        for (int c = -1; c <= 1; ++c)
          for (int d = -1; d <= 1; ++d) {
            const int det = a * d - b * c;
            if (det == 1 || det == -1) v.push_back(gl2(a, b, c, d));
          }
    return v;
  }();
  return ms;
}

// Is (u,v), v>0, inside the open interval (lo/2^k, hi/2^k)?  Exact.
bool rational_inside(i64 u, i64 v, const DyadicBracket& br) {
  mpz_class lhs = mpz_class(static_cast<long>(u)) << br.k;  // u * 2^k
  mpz_class loq = br.lo * static_cast<long>(v);
  mpz_class hiq = br.hi * static_cast<long>(v);
  return lhs > loq && lhs < hiq;
}

}  // namespace

int sign_at_rational(const BinaryCubicForm& f, i64 u, i64 v) {
  if (v <= 0) throw std::invalid_argument("sign_at_rational: requires v > 0");
  return sign_cubic(f, u, v);
}

double real_root_approx(const BinaryCubicForm& f) {
  if (f.a == 0) throw std::invalid_argument("real_root_approx: leading coefficient is zero");
  const double a = static_cast<double>(f.a), b = static_cast<double>(f.b), c = static_cast<double>(f.c),
               d = static_cast<double>(f.d);
  auto F = [&](double t) { return ((a * t + b) * t + c) * t + d; };
  auto Fp = [&](double t) { return (3.0 * a * t + 2.0 * b) * t + c; };
  double lo = -static_cast<double>(cauchy_bound(f));
  double hi = -lo;
  // sign(a) * F is negative at lo, positive at hi; plain bisection is
  // unconditionally safe, Newton polishing only sharpens the result.
  const double sa = f.a > 0 ? 1.0 : -1.0;
  for (int i = 0; i < 120; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (sa * F(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  double t = 0.5 * (lo + hi);
  for (int i = 0; i < 6; ++i) {
    const double der = Fp(t);
    if (der == 0.0) break;
    const double step = F(t) / der;
    const double nt = t - step;
    if (nt < lo - 1.0 || nt > hi + 1.0) break;
    t = nt;
  }
  return t;
}

int cmp_theta_rational(const BinaryCubicForm& f, i64 u, i64 v) {
  if (v <= 0) throw std::invalid_argument("cmp_theta_rational: requires v > 0");
  if (f.a == 0) throw std::invalid_argument("cmp_theta_rational: leading coefficient is zero");
  const int s = sign_cubic(f, u, v);
  if (s == 0) throw std::invalid_argument("cmp_theta_rational: u/v is a root (form is reducible)");
  const int sa = sgn_i64(f.a);
  // sign(a)*f(u,v) > 0 exactly when u/v lies right of the single real root.
  return (s * sa > 0) ? -1 : 1;
}

int sign_quadratic_at_theta(const BinaryCubicForm& f, i64 A2, i64 B2, i64 C2) {
  if (A2 == 0 && B2 == 0) return sgn_i64(C2);
  if (f.a == 0) throw std::invalid_argument("sign_quadratic_at_theta: leading coefficient is zero");
  const int sa = sgn_i64(f.a);
  DyadicBracket br = initial_bracket(f, sa);
  for (int it = 0; it < 4000; ++it) {
    const int sLo = sign_quad_dyadic(A2, B2, C2, br.lo, br.k);
    const int sHi = sign_quad_dyadic(A2, B2, C2, br.hi, br.k);
    if (sLo != 0 && sLo == sHi) {
      if (A2 == 0) return sLo;  // linear, monotone: equal end signs decide
      // Vertex at -B2/(2A2).  If it lies outside the bracket, the quadratic
      // is monotone there; if inside but with the same sign, the extremum
      // agrees and the sign is constant on the whole bracket.
      const i64 q = 2 * (A2 < 0 ? -A2 : A2);
      const i64 p = A2 < 0 ? B2 : -B2;
      if (!rational_inside(p, q, br)) return sLo;
      mpz_class disc = mpz_class(static_cast<long>(A2)) * static_cast<long>(C2) * 4;
      disc -= mpz_class(static_cast<long>(B2)) * static_cast<long>(B2);
      const int sv = sgn_mpz(disc) * sgn_i64(A2);
      if (sv == sLo) return sLo;
    }
    bisect_once(f, sa, br);
  }
  throw std::logic_error("sign_quadratic_at_theta: bisection failed to separate (reducible input?)");
}

bool quadratic_is_reduced(const HessianForm& h) {
  if (h.P <= 0) return false;
  if (!(-h.P < h.Q && h.Q <= h.P && h.P <= h.R)) return false;
  if (h.P == h.R && h.Q < 0) return false;
  return true;
}

GL2Element gauss_reduce_quadratic(HessianForm h) {
  const i128 disc =
      checked_sub(checked_mul(static_cast<i128>(h.Q), static_cast<i128>(h.Q)),
                  checked_mul(checked_mul(static_cast<i128>(h.P), static_cast<i128>(h.R)), i128{4}));
  if (h.P <= 0 || disc >= 0) throw std::invalid_argument("gauss_reduce_quadratic: form is not positive definite");
  const HessianForm orig = h;
  GL2Element acc = GL2Element::identity();
  // Row-vector composition reverses products: (q o g) o s = q o (s g), so the
  // newest step multiplies on the LEFT of the accumulator.
  auto apply = [&](const GL2Element& s) {
    h = compose_quadratic(h, s);
    acc = s * acc;
  };
  for (int it = 0; it < 20000; ++it) {
    // Unique translate with Q in (-P, P].
    const i128 num = checked_sub(static_cast<i128>(h.P), static_cast<i128>(h.Q));
    const i128 den = checked_mul(static_cast<i128>(h.P), i128{2});
    i128 quo = num / den;
    if (num % den != 0 && (num < 0)) quo -= 1;  // floor for possibly negative numerator
    const i64 t = checked_narrow(quo);
    if (t != 0) apply(gl2(1, 0, t, 1));
    if (h.P > h.R) {
      apply(gl2(0, -1, 1, 0));  // (P,Q,R) -> (R,-Q,P)
      continue;
    }
    if (h.P == h.R && h.Q < 0) apply(gl2(0, -1, 1, 0));
    if (quadratic_is_reduced(h)) {
      if (!quads_equal(compose_quadratic(orig, acc), h))
        throw std::logic_error("gauss_reduce_quadratic: transformation bookkeeping failed");
      return acc;
    }
  }
  throw std::logic_error("gauss_reduce_quadratic: did not terminate");
}

std::vector<GL2Element> automorphs(const HessianForm& h) {
  const GL2Element g = gauss_reduce_quadratic(h);
  const HessianForm red = compose_quadratic(h, g);
  const GL2Element ginv = g.inverse();
  std::vector<GL2Element> out;
  for (const GL2Element& t : small_matrices()) {
    if (!quads_equal(compose_quadratic(red, t), red)) continue;
    // h o (g^-1 t g) = ((h o g) o t) o g^-1 = red o g^-1 = h.
    const GL2Element alpha = ginv * t * g;
    if (!quads_equal(compose_quadratic(h, alpha), h))
      throw std::logic_error("automorphs: conjugated matrix is not an automorph");
    out.push_back(alpha);
  }
  return out;
}

bool is_mathews_reduced(const BinaryCubicForm& f) {
  if (f.a <= 0) return false;
  // B > -A  <=>  theta > (-a-b)/a ; B < A  <=>  theta < (a-b)/a.
  if (cmp_theta_rational(f, checked_narrow(checked_sub(-static_cast<i128>(f.a), static_cast<i128>(f.b))), f.a) < 0)
    return false;
  if (cmp_theta_rational(f, checked_narrow(checked_sub(static_cast<i128>(f.a), static_cast<i128>(f.b))), f.a) > 0)
    return false;
  // A < C  <=>  a*theta^2 + b*theta + (c - a) > 0.
  return sign_quadratic_at_theta(f, f.a, f.b, checked_narrow(checked_sub(static_cast<i128>(f.c), static_cast<i128>(f.a)))) > 0;
}

namespace {

bool mathews_B_in_range(const BinaryCubicForm& f) {
  if (cmp_theta_rational(f, checked_narrow(checked_sub(-static_cast<i128>(f.a), static_cast<i128>(f.b))), f.a) < 0)
    return false;
  if (cmp_theta_rational(f, checked_narrow(checked_sub(static_cast<i128>(f.a), static_cast<i128>(f.b))), f.a) > 0)
    return false;
  return true;
}

}  // namespace

BinaryCubicForm mathews_reduce(const BinaryCubicForm& f) {
  if (discriminant(f) >= 0) throw std::invalid_argument("mathews_reduce: discriminant must be negative");
  BinaryCubicForm g = f;
  if (g.a < 0 || (g.a == 0 && g.d > 0)) g = g.negated();
  // Translate/invert walk to the fundamental domain |B| <= A <= C of the
  // point z(q_g) in the upper half plane.  Each inversion strictly increases
  // Im z, and only finitely many orbit points lie above any horizontal line
  // (|c z + d|^2 <= 1 has finitely many integral solutions), so the walk
  // terminates.
  for (int it = 0; it < 100000; ++it) {
    if (g.a == 0) throw std::invalid_argument("mathews_reduce: form is reducible (leading zero reached)");
    if (g.a < 0) g = g.negated();
    if (!mathews_B_in_range(g)) {
      const double th = real_root_approx(g);
      const double a = static_cast<double>(g.a), b = static_cast<double>(g.b);
      const i64 t0 = llround(-(b / a + th) / 2.0);
      bool moved = false;
      for (i64 dlt : {i64{0}, i64{1}, i64{-1}, i64{2}, i64{-2}, i64{3}, i64{-3}}) {
        const BinaryCubicForm cand = act(gl2(1, 0, t0 + dlt, 1), g);
        if (mathews_B_in_range(cand)) {
          g = cand;
          moved = true;
          break;
        }
      }
      if (!moved) throw std::logic_error("mathews_reduce: translation hint failed");
    }
    const int sG =
        sign_quadratic_at_theta(g, g.a, g.b, checked_narrow(checked_sub(static_cast<i128>(g.c), static_cast<i128>(g.a))));
    if (sG > 0) return g;
    if (sG == 0) throw std::logic_error("mathews_reduce: boundary tie (form must be reducible)");
    g = act(gl2(0, -1, 1, 0), g);
  }
  throw std::logic_error("mathews_reduce: did not terminate");
}

namespace {

BinaryCubicForm canonical_totally_real(const BinaryCubicForm& f) {
  std::optional<BinaryCubicForm> best;
  for (const BinaryCubicForm& g : {f, f.mirrored()}) {
    const HessianForm hg = hessian(g);
    const GL2Element g0 = gauss_reduce_quadratic(hg);
    const HessianForm red = compose_quadratic(hg, g0);
    for (const GL2Element& t : small_matrices()) {
      if (!quads_equal(compose_quadratic(red, t), red)) continue;
      const BinaryCubicForm cand = act(t * g0, g);
      if (!best || cand < *best) best = cand;
    }
  }
  return *best;
}

BinaryCubicForm canonical_complex_reducible(const BinaryCubicForm& f,
                                            const std::vector<std::pair<i64, i64>>& roots) {
  if (roots.size() != 1)
    throw std::logic_error("canonical_complex_reducible: negative discriminant needs exactly one rational root");
  const i64 u = roots[0].first, v = roots[0].second;
  i64 x = 0, y = 0;
  const i64 gg = ext_gcd(u, v, x, y);
  if (gg != 1 && gg != -1) throw std::logic_error("canonical_complex_reducible: root is not primitive");
  // gamma = [[u, v], [-y/g, x/g]] has determinant (u x + v y)/g = 1 and sends
  // (1,0) to the root, so the transported form has leading coefficient 0.
  const GL2Element gamma = gl2(u, v, -y / gg, x / gg);
  BinaryCubicForm g = act(gamma, f);
  if (g.a != 0) throw std::logic_error("canonical_complex_reducible: root transport failed");
  if (g.b < 0) g = g.negated();
  const i64 A = g.b;
  if (A == 0) throw std::logic_error("canonical_complex_reducible: degenerate quadratic factor");
  // Cusp stabilizer: translate B into [0, 2A), then fold (A, 2A) down by the
  // mirror-negate flip (B -> -B) followed by one more translation.
  const i64 r = -floor_div(g.c, 2 * A);
  if (r != 0) g = act(gl2(1, 0, r, 1), g);
  if (g.c > A) {
    g = act(gl2(1, 0, 0, -1), g);  // B -> -B
    g = act(gl2(1, 0, 1, 1), g);   // B -> B + 2A
  }
  if (!(g.a == 0 && g.b == A && 0 <= g.c && g.c <= A))
    throw std::logic_error("canonical_complex_reducible: normal form out of range");
  return g;
}

}  // namespace

BinaryCubicForm canonical_form(const BinaryCubicForm& f) {
  const i128 disc = discriminant(f);
  if (disc == 0) throw std::invalid_argument("canonical_form: discriminant is zero");
  if (disc > 0) return canonical_totally_real(f);
  const auto roots = rational_roots(f);
  if (roots.empty()) {
    const BinaryCubicForm g = mathews_reduce(f);
    const BinaryCubicForm gm = g.mirrored();
    if (!is_mathews_reduced(gm)) throw std::logic_error("canonical_form: mirror of reduced form is not reduced");
    return gm < g ? gm : g;
  }
  return canonical_complex_reducible(f, roots);
}

int stabilizer_order(const BinaryCubicForm& f) {
  const i128 disc = discriminant(f);
  if (disc == 0) throw std::invalid_argument("stabilizer_order: discriminant is zero");
  if (disc > 0) {
    // Any stabilizing matrix preserves the (positive definite, covariant)
    // Hessian, so it is one of its finitely many automorphs.
    int n = 0;
    for (const GL2Element& t : automorphs(hessian(f)))
      if (act(t, f) == f) ++n;
    return n;
  }
  const auto roots = rational_roots(f);
  if (roots.empty()) {
    // A stabilizing matrix fixes the unique real root line: (theta,1) gamma
    // proportional to (theta,1) gives m01 theta^2 + (m11-m00) theta - m10 = 0,
    // and 1, theta, theta^2 are Q-independent (theta has degree 3), forcing
    // gamma = +-I; -I negates the form.  The stabilizer is trivial.
    return 1;
  }
  // Reducible: f = (linear)(definite quadratic) over Q, and a stabilizing
  // matrix preserves each factor up to sign; positivity forces it to be an
  // automorph of the quadratic factor.  Work on the cusp normal form.
  const BinaryCubicForm g = canonical_complex_reducible(f, roots);
  const HessianForm q{g.b, g.c, g.d};
  int n = 0;
  for (const GL2Element& t : automorphs(q))
    if (act(t, g) == g) ++n;
  return n;
}

}  // namespace cubic

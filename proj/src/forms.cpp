#include "cubicount/forms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cubic {

// ============================================================================
// Evaluation and invariants
// ============================================================================

i128 BinaryCubicForm::eval(i128 x, i128 y) const {
  // Horner in x over the y-graded coefficients: ((a x + b y) x + c y^2) x + d y^3.
  i128 y2 = checked_mul(y, y);
  i128 y3 = checked_mul(y2, y);
  i128 r = checked_add(checked_mul(i128(a), x), checked_mul(i128(b), y));
  r = checked_add(checked_mul(r, x), checked_mul(i128(c), y2));
  r = checked_add(checked_mul(r, x), checked_mul(i128(d), y3));
  return r;
}

i128 discriminant(const BinaryCubicForm& f) {
  const i128 a = f.a, b = f.b, c = f.c, d = f.d;
  // b^2 c^2 - 4 a c^3 - 4 b^3 d - 27 a^2 d^2 + 18 a b c d
  i128 b2 = checked_mul(b, b), c2 = checked_mul(c, c), d2 = checked_mul(d, d);
  i128 t1 = checked_mul(b2, c2);
  i128 t2 = checked_mul(4, checked_mul(a, checked_mul(c, c2)));
  i128 t3 = checked_mul(4, checked_mul(checked_mul(b, b2), d));
  i128 t4 = checked_mul(27, checked_mul(checked_mul(a, a), d2));
  i128 t5 = checked_mul(18, checked_mul(checked_mul(a, b), checked_mul(c, d)));
  return checked_add(checked_sub(checked_sub(checked_sub(t1, t2), t3), t4), t5);
}

HessianForm hessian(const BinaryCubicForm& f) {
  const i128 a = f.a, b = f.b, c = f.c, d = f.d;
  HessianForm h;
  h.P = checked_narrow(checked_sub(checked_mul(b, b), checked_mul(3, checked_mul(a, c))));
  h.Q = checked_narrow(checked_sub(checked_mul(b, c), checked_mul(9, checked_mul(a, d))));
  h.R = checked_narrow(checked_sub(checked_mul(c, c), checked_mul(3, checked_mul(b, d))));
  return h;
}

i64 content(const BinaryCubicForm& f) {
  return gcd_i64(gcd_i64(f.a, f.b), gcd_i64(f.c, f.d));
}

// ============================================================================
// Group action
// ============================================================================

GL2Element GL2Element::inverse() const {
  const i64 dt = det();
  if (dt != 1 && dt != -1) throw std::invalid_argument("GL2Element::inverse: determinant must be +-1");
  // adj / det with det = +-1, so just multiply the adjugate by det.
  return GL2Element{dt * m11, dt * -m01, dt * -m10, dt * m00};
}

GL2Element GL2Element::operator*(const GL2Element& o) const {
  GL2Element r;
  r.m00 = checked_narrow(checked_add(checked_mul(m00, o.m00), checked_mul(m01, o.m10)));
  r.m01 = checked_narrow(checked_add(checked_mul(m00, o.m01), checked_mul(m01, o.m11)));
  r.m10 = checked_narrow(checked_add(checked_mul(m10, o.m00), checked_mul(m11, o.m10)));
  r.m11 = checked_narrow(checked_add(checked_mul(m10, o.m01), checked_mul(m11, o.m11)));
  return r;
}

// Coefficients of f((x,y) * gamma) expanded symbolically.  Writing
// (x,y) gamma = (p x + q y, r x + s y) with p=g.m00, r=g.m10, q=g.m01,
// s=g.m11, the image coefficients are the classical quartet below; each is a
// cubic monomial sum, safe in int128 for 64-bit inputs.
static std::array<i128, 4> composed_coeffs(const GL2Element& g, const BinaryCubicForm& f) {
  const i128 p = g.m00, q = g.m01, r = g.m10, s = g.m11;
  const i128 a = f.a, b = f.b, c = f.c, d = f.d;
  i128 p2 = checked_mul(p, p), p3 = checked_mul(p2, p);
  i128 q2 = checked_mul(q, q), q3 = checked_mul(q2, q);
  i128 r2 = checked_mul(r, r), r3 = checked_mul(r2, r);
  i128 s2 = checked_mul(s, s), s3 = checked_mul(s2, s);

  // x^3: f(p, q)
  i128 A = checked_add(
      checked_add(checked_mul(a, p3), checked_mul(b, checked_mul(p2, q))),
      checked_add(checked_mul(c, checked_mul(p, q2)), checked_mul(d, q3)));
  // x^2 y: 3a p^2 r + b(p^2 s + 2 p q r) + c(q^2 r + 2 p q s) + 3d q^2 s
  i128 B = checked_add(
      checked_add(checked_mul(3, checked_mul(a, checked_mul(p2, r))),
                  checked_mul(b, checked_add(checked_mul(p2, s),
                                             checked_mul(2, checked_mul(p, checked_mul(q, r)))))),
      checked_add(checked_mul(c, checked_add(checked_mul(q2, r),
                                             checked_mul(2, checked_mul(p, checked_mul(q, s))))),
                  checked_mul(3, checked_mul(d, checked_mul(q2, s)))));
  // x y^2: 3a p r^2 + b(q r^2 + 2 p r s) + c(p s^2 + 2 q r s) + 3d q s^2
  i128 C = checked_add(
      checked_add(checked_mul(3, checked_mul(a, checked_mul(p, r2))),
                  checked_mul(b, checked_add(checked_mul(q, r2),
                                             checked_mul(2, checked_mul(p, checked_mul(r, s)))))),
      checked_add(checked_mul(c, checked_add(checked_mul(p, s2),
                                             checked_mul(2, checked_mul(q, checked_mul(r, s))))),
                  checked_mul(3, checked_mul(d, checked_mul(q, s2)))));
  // y^3: f(r, s)
  i128 D = checked_add(
      checked_add(checked_mul(a, r3), checked_mul(b, checked_mul(r2, s))),
      checked_add(checked_mul(c, checked_mul(r, s2)), checked_mul(d, s3)));
  return {A, B, C, D};
}

BinaryCubicForm act(const GL2Element& g, const BinaryCubicForm& f) {
  i64 det = g.det();
  if (det != 1 && det != -1)
    throw std::invalid_argument("act: matrix not in GL2(Z) (det must be +-1)");
  auto [A, B, C, D] = composed_coeffs(g, f);
  // Twisted: divide by det (= multiply, since det = +-1).
  return {checked_narrow(checked_mul(A, det)), checked_narrow(checked_mul(B, det)),
          checked_narrow(checked_mul(C, det)), checked_narrow(checked_mul(D, det))};
}

BinaryCubicForm act_mod(const GL2Element& g, const BinaryCubicForm& f, i64 n) {
  if (n <= 1) throw std::invalid_argument("act_mod: modulus must be > 1");
  i64 det = mod_pos(checked_narrow(checked_sub(checked_mul(i128(g.m00), g.m11),
                                               checked_mul(i128(g.m01), g.m10))),
                    n);
  // det must be a unit mod n; its inverse realizes the twist.
  i64 x, y;
  i64 gg = ext_gcd(det, n, x, y);
  if (gg != 1) throw std::invalid_argument("act_mod: det not a unit mod n");
  i64 det_inv = mod_pos(x, n);
  auto [A, B, C, D] = composed_coeffs(g, f);
  auto red = [&](i128 v) {
    i64 r = static_cast<i64>(v % n);
    return mod_pos(checked_narrow(checked_mul(i128(mod_pos(r, n)), det_inv) % n), n);
  };
  return {red(A), red(B), red(C), red(D)};
}

// ============================================================================
// Dual pairing
// ============================================================================

i128 dual_pairing_raw(const BinaryCubicForm& f, const BinaryCubicForm& fs) {
  // d*as - c*bs + b*cs - a*ds
  return checked_add(
      checked_sub(checked_mul(i128(f.d), fs.a), checked_mul(i128(f.c), fs.b)),
      checked_sub(checked_mul(i128(f.b), fs.c), checked_mul(i128(f.a), fs.d)));
}

i64 dual_pairing(const BinaryCubicForm& f, const BinaryCubicForm& fs, i64 n) {
  if (n <= 0) throw std::invalid_argument("dual_pairing: modulus must be positive");
  return mod_pos(static_cast<i64>(dual_pairing_raw(f, fs) % n), n);
}

BinaryCubicForm act_dual(const GL2Element& g, const BinaryCubicForm& fs) {
  i64 det = g.det();
  if (det != 1 && det != -1)
    throw std::invalid_argument("act_dual: matrix not in GL2(Z) (det must be +-1)");
  BinaryCubicForm expanded{fs.a, checked_narrow(checked_mul(3, i128(fs.b))),
                           checked_narrow(checked_mul(3, i128(fs.c))), fs.d};
  BinaryCubicForm image = act(g, expanded);
  if (image.b % 3 != 0 || image.c % 3 != 0)
    throw std::logic_error("act_dual: dual lattice not preserved (internal bug)");
  return {image.a, image.b / 3, image.c / 3, image.d};
}

// ============================================================================
// Rationality
// ============================================================================

static std::vector<i64> divisors_of(i64 n) {
  if (n < 0) n = -n;
  std::vector<i64> ds;
  for (i64 i = 1; i * i <= n; ++i) {
    if (n % i == 0) {
      ds.push_back(i);
      if (i != n / i) ds.push_back(n / i);
    }
  }
  return ds;
}

// Exact floor(sqrt(n)) for n >= 0.
static i64 isqrt_i64(i64 n) {
  if (n < 0) throw std::invalid_argument("isqrt of negative");
  i64 r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

// Normalize a projective point: primitive, v > 0, or v = 0 and u = 1.
static std::pair<i64, i64> normalize_point(i64 u, i64 v) {
  i64 g = gcd_i64(u, v);
  u /= g;
  v /= g;
  if (v < 0 || (v == 0 && u < 0)) { u = -u; v = -v; }
  return {u, v};
}

static void push_unique(std::vector<std::pair<i64, i64>>& roots, std::pair<i64, i64> pt) {
  if (std::find(roots.begin(), roots.end(), pt) == roots.end()) roots.push_back(pt);
}

// Roots in P^1(Q) of A x^2 + B xy + C y^2 (not all coefficients zero).
static void quadratic_roots(i64 A, i64 B, i64 C, std::vector<std::pair<i64, i64>>& roots) {
  if (A == 0) {
    // y (B x + C y): (1:0) always; (C : -B) when B != 0.
    push_unique(roots, {1, 0});
    if (B != 0) push_unique(roots, normalize_point(C, -B));
    return;
  }
  i128 disc128 = checked_sub(checked_mul(i128(B), B), checked_mul(4, checked_mul(i128(A), C)));
  if (disc128 < 0) return;
  i64 disc = checked_narrow(disc128);
  i64 s = isqrt_i64(disc);
  if (s * s != disc) return;
  push_unique(roots, normalize_point(-B + s, 2 * A));
  if (s != 0) push_unique(roots, normalize_point(-B - s, 2 * A));
}

std::vector<std::pair<i64, i64>> rational_roots(const BinaryCubicForm& f) {
  if (f.is_zero()) throw std::invalid_argument("rational_roots: zero form");
  std::vector<std::pair<i64, i64>> roots;
  // Work with the primitive part; a scalar multiple has the same roots.
  i64 g = content(f);
  BinaryCubicForm h{f.a / g, f.b / g, f.c / g, f.d / g};

  if (h.a == 0) {
    // y | f: the point (1:0) is a root; the cofactor is b x^2 + c xy + d y^2.
    push_unique(roots, {1, 0});
    if (!(h.b == 0 && h.c == 0 && h.d == 0)) quadratic_roots(h.b, h.c, h.d, roots);
    return roots;
  }
  if (h.d == 0) {
    // x | f: the point (0:1) is a root; the cofactor is a x^2 + b xy + c y^2.
    push_unique(roots, {0, 1});
    quadratic_roots(h.a, h.b, h.c, roots);
    return roots;
  }
  // General case: a primitive root (u:v) with f(u,v)=0 forces u | d and v | a
  // (rational root theorem applied to both dehomogenizations); a, d != 0 so
  // both divisor sets are finite.
  for (i64 u : divisors_of(h.d)) {
    for (i64 su : {u, -u}) {
      for (i64 v : divisors_of(h.a)) {
        if (gcd_i64(su, v) != 1) continue;
        if (h.eval(su, v) == 0) push_unique(roots, {su, v});
      }
    }
  }
  return roots;
}

bool is_irreducible(const BinaryCubicForm& f) {
  if (f.is_zero()) throw std::invalid_argument("is_irreducible: zero form");
  // A cubic form factors over Q iff it has a rational projective root.
  // Degenerate (non-cubic) content-stripped forms with a = 0 always have the
  // root (1:0), so this also classifies them as reducible.
  return rational_roots(f).empty();
}

}  // namespace cubic

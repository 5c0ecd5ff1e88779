#pragma once
// ============================================================================
// Integral binary cubic forms and the twisted GL2 action.
//
//   f(x,y) = a x^3 + b x^2 y + c x y^2 + d y^3,   (a,b,c,d) in Z^4.
//
// The group GL2(Z) acts by the "twisted" rule
//
//   (gamma . f)(x,y) := det(gamma)^{-1} * f( (x,y) * gamma ),
//
// where (x,y) is a row vector, so ((x,y)*gamma) = (g11 x + g21 y,
// g12 x + g22 y).  With the row-vector convention this is a left action:
// gamma1.(gamma2.f) = (gamma1*gamma2).f.  The discriminant
//
//   Delta(f) = b^2 c^2 - 4 a c^3 - 4 b^3 d - 27 a^2 d^2 + 18 a b c d
//
// transforms by Delta(gamma.f) = det(gamma)^2 Delta(f), so it is a genuine
// orbit invariant over GL2(Z).  The quadratic Hessian covariant
//
//   H(f) = (P, Q, R) = (b^2 - 3ac, bc - 9ad, c^2 - 3bd),
//
// read as P x^2 + Q xy + R y^2, satisfies disc(H) = Q^2 - 4PR = -3 Delta(f)
// and H(gamma.f) = H(f) composed with gamma (untwisted), which drives the
// reduction theory in reduce.hpp: for Delta > 0 the Hessian is positive
// definite, and for Delta < 0 the positive-definite quadratic factor of f
// over R plays the same role.
// ============================================================================

#include <array>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "cubicount/common.hpp"

namespace cubic {

struct BinaryCubicForm {
  i64 a = 0, b = 0, c = 0, d = 0;

  friend bool operator==(const BinaryCubicForm&, const BinaryCubicForm&) = default;
  // Lexicographic coefficient order; used for canonical representatives.
  friend auto operator<=>(const BinaryCubicForm&, const BinaryCubicForm&) = default;

  BinaryCubicForm negated() const { return {-a, -b, -c, -d}; }
  // Mirror x -> x, y -> -y (an untwisted GL2(Z) image, det = -1).
  BinaryCubicForm mirrored() const { return {a, -b, c, -d}; }
  bool is_zero() const { return a == 0 && b == 0 && c == 0 && d == 0; }

  // Evaluate f(x, y) exactly.
  i128 eval(i128 x, i128 y) const;
};

struct GL2Element {
  // Row-major entries [[m00, m01], [m10, m11]].
  i64 m00 = 1, m01 = 0, m10 = 0, m11 = 1;

  friend bool operator==(const GL2Element&, const GL2Element&) = default;

  i64 det() const { return checked_narrow(checked_sub(checked_mul(m00, m11), checked_mul(m01, m10))); }
  GL2Element operator*(const GL2Element& o) const;
  // Inverse in GL2(Z); requires det = +-1.
  GL2Element inverse() const;
  static GL2Element identity() { return {}; }
};

struct OrbitRecord {
  BinaryCubicForm representative;
  i64 discriminant = 0;
  int stabilizer_order = 1;
  bool irreducible = false;
};

// Quadratic Hessian covariant (P, Q, R).
struct HessianForm {
  i64 P = 0, Q = 0, R = 0;
};

// --- Basic invariants -------------------------------------------------------

// Delta(f), checked arithmetic throughout; throws cubic::overflow_error
// rather than wrapping.
i128 discriminant(const BinaryCubicForm& f);

HessianForm hessian(const BinaryCubicForm& f);

// Content gcd(a,b,c,d) >= 0 (zero form has content 0).
i64 content(const BinaryCubicForm& f);

// --- Group action -----------------------------------------------------------

// Twisted action det(gamma)^{-1} f((x,y) gamma).  Requires det = +-1;
// throws std::invalid_argument otherwise.
BinaryCubicForm act(const GL2Element& g, const BinaryCubicForm& f);

// Same formula over Z/n: entries and det taken mod n; det must be a unit.
BinaryCubicForm act_mod(const GL2Element& g, const BinaryCubicForm& f, i64 n);

// --- Dual pairing -----------------------------------------------------------

// [f, fs] = d*as - c*bs + b*cs - a*ds, where fs = (as, bs, cs, ds) holds the
// coordinates of a dual form in the integral dual basis (so the stored
// integers are (a*, 3b*, 3c*, d*) of the rational pairing
// d1 a2 - c1 b2 / 3 + b1 c2 / 3 - a1 d2; the 3s cancel and the pairing is
// integral).  Equivariance: [gamma.f, gamma.fs] = det(gamma) [f, fs], with
// gamma acting on dual coordinates by the same twisted formula.
i128 dual_pairing_raw(const BinaryCubicForm& f, const BinaryCubicForm& fs);

// The pairing reduced to a residue in [0, n).
i64 dual_pairing(const BinaryCubicForm& f, const BinaryCubicForm& fs, i64 n);

// Action on dual coordinates: conjugate the twisted action by the basis
// change (as, bs, cs, ds) -> (as, 3bs, 3cs, ds).  The sublattice with middle
// coefficients divisible by 3 is stable under the twisted action (visible in
// the expanded coefficient formulas), so the division by 3 is exact over Z
// and the result reduces well mod any n, including powers of 3.  This is the
// unique action making [gamma.f, gamma.fs] = det(gamma) [f, fs] hold.
BinaryCubicForm act_dual(const GL2Element& g, const BinaryCubicForm& fs);

// --- Rationality ------------------------------------------------------------

// True iff f (nonzero) has no linear factor over Q, i.e. no root in P^1(Q).
// Throws std::invalid_argument on the zero form.
bool is_irreducible(const BinaryCubicForm& f);

// All roots of f in P^1(Q), returned as primitive integer pairs (u, v) with
// v >= 0 (and u > 0 when v = 0), without multiplicity.
std::vector<std::pair<i64, i64>> rational_roots(const BinaryCubicForm& f);

}  // namespace cubic

// Hash support for dedupe sets keyed by coefficient tuples.
template <>
struct std::hash<cubic::BinaryCubicForm> {
  std::size_t operator()(const cubic::BinaryCubicForm& f) const noexcept {
    cubic::u64 h = 0x9E3779B97F4A7C15ULL;
    for (cubic::i64 v : {f.a, f.b, f.c, f.d}) {
      h ^= static_cast<cubic::u64>(v) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

#pragma once

// ============================================================================
// Reduction theory and canonicalization for integral binary cubic forms under
// the twisted GL2(Z)-action.
//
// Every orbit with nonzero discriminant gets a unique canonical representative,
// computed without floating-point decisions (doubles are used only as hints;
// every accepted inequality is certified by exact integer / rational sign
// tests).  The three strata:
//
// (1) disc > 0 (totally real resolvent).  The Hessian
//         H_f(x,y) = P x^2 + Q xy + R y^2,
//         P = b^2 - 3ac, Q = bc - 9ad, R = c^2 - 3bd,
//     is positive definite (disc H = Q^2 - 4PR = -3 disc f < 0, P > 0) and
//     covariant: H_{gamma.f} = H_f o gamma for every gamma in GL2(Z) under the
//     twisted action.  Gauss-reduce H by unimodular steps; a form is
//     "Hessian-reduced" when
//         -P < Q <= P <= R,  and  Q >= 0 if P == R.
//     With this strict convention each positive definite class contains
//     exactly one reduced form, and every integral automorph of a reduced
//     form has entries in {-1,0,1}: its rows are vectors of norm P resp. R,
//     and any vector (x,y) with |x| >= 2 or |y| >= 2 has
//         H(x,y) >= (P - |Q| + R) min(x^2,y^2) + ... > R
//     by the reduction inequalities.  Hence the full set of orbit members
//     with reduced Hessian is { (gamma0 tau).g : g in {f, f~}, tau automorph }
//     where gamma0 Gauss-reduces H_g and f~(x,y) = f(x,-y) accounts for the
//     det = -1 coset (twisted: diag(1,-1).f = -f~, and negations are absorbed
//     because -I is an automorph).  The canonical representative is the
//     lexicographically least candidate.
//
// (2) disc < 0, irreducible (complex resolvent).  f has a unique real root
//     theta of f(t,1) and factors over R as
//         f = a (x - theta y) (x^2 + ... )  = (x - theta y) q_f(x,y),
//         q_f = A x^2 + B xy + C y^2,  A = a, B = b + a theta,
//         C = c + b theta + a theta^2,
//     a positive definite real quadratic once a > 0.  f is reduced when
//         |B| <= A <= C  (with a > 0).
//     Ties are impossible for irreducible f: B = +-A would make theta
//     rational, and A = C would make theta a root of the integer quadratic
//     a t^2 + b t + (c - a), contradicting irreducibility of the cubic.  So
//     each SL2(Z)-orbit contains exactly one reduced form (automorphs of a
//     strictly reduced definite form are +-I, and -I negates f, breaking
//     a > 0).  Mirroring sends (A,B,C) to (A,-B,C), so the mirror of a
//     reduced form is again reduced, and the GL2-canonical representative is
//     simply min(reduce(f), reduce(f).mirrored()).
//
//     Exact decisions about theta: for rational r = u/v (v > 0),
//         theta > r  <=>  f(u,v) sign-mismatches the leading behaviour,
//     i.e. sign(a) * f(u, v) < 0, because t -> f(t,1) crosses zero exactly
//     once.  The sign of an integer quadratic at theta is certified by a
//     double-precision prefilter with a rigorous error margin, falling back
//     to dyadic rational bisection with exact integer sign tests.
//
// (3) disc < 0, reducible.  Three real roots would force disc >= 0, so f has
//     exactly one rational root; over Q, f = (linear) * (definite quadratic).
//     Moving the rational root to [1:0] gives the cusp normal form
//         f = (0, A, B, C) = y (A x^2 + B xy + C y^2),  A > 0,
//     with disc f = A^2 (B^2 - 4AC) < 0.  The residual group is the
//     stabilizer of the unique cusp, the triangular matrices
//     [[e1,0],[r,e2]]; they translate B by 2Ar and flip its sign, so
//         B in [0, A]
//     pins a unique representative (C is determined by the orbit).  The
// orbit stabilizer is computed honestly in all three strata by enumerating
// automorphs of the attached reduced definite quadratic (integer Hessian for
// disc > 0, integer quadratic factor for the reducible stratum, real q_f for
// the complex stratum) and testing the twisted fixed-point condition.
// ============================================================================

#include <vector>

#include "cubicount/forms.hpp"

namespace cubic {

// --- exact real-root machinery (disc < 0, irreducible, used by Mathews
//     reduction; theta = unique real root of f(t,1)) ---------------------

// sign of f(u, v) for a rational point (u, v), v > 0, as an exact integer test.
int sign_at_rational(const BinaryCubicForm& f, i64 u, i64 v);

// sign(theta - u/v), exact; requires v > 0 and f irreducible with a != 0.
// Never returns 0 (theta is irrational).
int cmp_theta_rational(const BinaryCubicForm& f, i64 u, i64 v);

// sign of A2*theta^2 + B2*theta + C2, exact; requires f irreducible (so the
// value cannot vanish unless A2 = B2 = C2 = 0, which returns 0).
int sign_quadratic_at_theta(const BinaryCubicForm& f, i64 A2, i64 B2, i64 C2);

// Double-precision approximation of theta (Newton with bisection safety);
// only ever used as a hint, never as a decision.
double real_root_approx(const BinaryCubicForm& f);

// --- positive definite quadratics ---------------------------------------

// Strict Gauss-reduced test: -P < Q <= P <= R and (P != R or Q >= 0).
bool quadratic_is_reduced(const HessianForm& h);

// Gauss-reduce a positive definite integer quadratic; returns gamma in SL2(Z)
// with h o gamma reduced (composition (x,y) -> (x,y)gamma as in act()).
GL2Element gauss_reduce_quadratic(HessianForm h);

// All integral automorphs of a positive definite quadratic (not necessarily
// reduced): conjugates the entries<=1 automorph group of its reduction.
std::vector<GL2Element> automorphs(const HessianForm& h);

// --- Mathews reduction (disc < 0, irreducible) ---------------------------

// Is f in the strict reduced position |B| <= A <= C with a > 0?
bool is_mathews_reduced(const BinaryCubicForm& f);

// SL2(Z)-reduction to the unique Mathews-reduced orbit member.
BinaryCubicForm mathews_reduce(const BinaryCubicForm& f);

// --- canonical representatives and stabilizers ---------------------------

// Unique canonical representative of the twisted GL2(Z)-orbit of f.
// Requires disc(f) != 0.
BinaryCubicForm canonical_form(const BinaryCubicForm& f);

// Order of the twisted stabilizer of f in GL2(Z) (= # Aut of the cubic ring).
// 1 or 3 for irreducible f; 1, 2, 3 or 6 for reducible f.
int stabilizer_order(const BinaryCubicForm& f);

}  // namespace cubic

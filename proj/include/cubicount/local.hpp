#pragma once
// ============================================================================
// Local (mod p) structure of integral binary cubic forms and their rings.
//
// A form f factors over F_p as a product of irreducible binary forms, and
// the factorization shape -- the splitting type sigma_p(f) -- is one of
//
//   (111)  three distinct linear factors        Split111
//   (12)   linear times irreducible quadratic   Partial12
//   (3)    irreducible cubic                    Inert3
//   (1^21) double linear times distinct linear  Ramified1_21
//   (1^3)  cube of a linear form                TotallyRamified1_3
//   (0)    f == 0 mod p                         Zero0
//
// For the cubic ring R_f attached to f, the splitting type records
// R_f (x) F_p; when f is maximal at p it equals the splitting of p in the
// cubic field K_f.
//
// Maximality at p is detected root-locally.  R_f is nonmaximal at p iff
// either f == 0 mod p, or f has a multiple root alpha in P^1(F_p) with
// p^2 | f(alpha') for a primitive lift alpha' of alpha.  (At a multiple
// root both partial derivatives of f vanish mod p, so f(alpha') mod p^2
// does not depend on the choice of lift.)  Equivalently, some GL2(Z)
// translate of f has p^2 | a and p | b.
//
// Index-p moves between rings.  If alpha is a root of g mod p, translating
// alpha to [1:0] gives a' = g(alpha') == 0 mod p, and
//
//   subring:  (a', b', c', d')  ->  (a'/p, b', p c', p^2 d')
//
// is the form of the index-p subring of R_g attached to alpha; its
// discriminant is p^2 Delta(g).  The inverse move, defined at a multiple
// root with the p^2 condition, is
//
//   overring: (a', b', c', d')  ->  (a'/p^2, b'/p, c', p d')
//
// with discriminant Delta(f)/p^2.  Iterating overring steps (and dividing
// out content: R_{p g} sits inside R_g with index p^2) maximalizes any
// irreducible form, reaching the maximal order with
// Delta(f) = index^2 * field_discriminant exactly.
//
// Switching identity.  Let W_q be the forms nonmaximal at every prime
// dividing the squarefree integer q, and omega_m(f) the number of roots of
// f in P^1(Z/m).  Counting index-p inclusions R c R' in two ways gives, for
// any weight Psi of compact support,
//
//   sum_{f in W_q / GL2(Z)} Psi(|Delta(f)|) / |Stab(f)|
//     = sum_{k l | q} mu(l) sum_{g in V(Z) / GL2(Z)}
//         omega_{k l}(g) Psi(q^4 |Delta(g)| / k^2) / |Stab(g)|,
//
// an exact rearrangement valid per discriminant sign.  switching_check
// evaluates both sides with an indicator weight over an enumerated range
// and also verifies that the underlying bijection preserves stabilizers.
// ============================================================================

#include <vector>

#include "cubicount/common.hpp"
#include "cubicount/forms.hpp"

namespace cubic {

enum class SplittingType {
  Split111,           // (111)
  Partial12,          // (12)
  Inert3,             // (3)
  Ramified1_21,       // (1^21)
  TotallyRamified1_3, // (1^3)
  Zero0,              // (0)
};

const char* splitting_type_name(SplittingType t);

// A point of P^1(F_p), normalized to (u, 1) with 0 <= u < p, or (1, 0).
struct P1Point {
  i64 u = 0, v = 1;

  friend bool operator==(const P1Point&, const P1Point&) = default;
  friend auto operator<=>(const P1Point&, const P1Point&) = default;
};

// Normalize homogeneous coordinates (u, v), not both == 0 mod p, to the
// canonical representative above.
P1Point p1_point(i64 p, i64 u, i64 v);

struct LocalRoot {
  P1Point point;
  int multiplicity = 0;
};

struct LocalRootData {
  std::vector<LocalRoot> roots; // distinct roots; empty when f == 0 mod p
  i64 omega = 0;                // #roots in P^1(F_p); p+1 when f == 0 mod p
  i64 omega_simple = 0;         // #simple roots; 0 when f == 0 mod p
};

struct SplittingData {
  SplittingType type = SplittingType::Zero0;
  LocalRootData roots;
};

// Factorization shape of f mod p together with all P^1(F_p) roots and
// multiplicities, found by scanning the p+1 points.  O(p).
SplittingData splitting_type(const BinaryCubicForm& f, i64 p);

// Type only.  Same answer as splitting_type(f, p).type, but for large p
// not dividing disc or content it counts roots via gcd(t^p - t, f(t, 1))
// in O(log p) field operations instead of scanning.
SplittingType splitting_type_only(const BinaryCubicForm& f, i64 p);

// Number of roots (resp. simple roots) of f in P^1(Z/m) for squarefree
// m >= 1; multiplicative in m, with the empty product omega_1 = 1.
i64 omega_m(const BinaryCubicForm& f, i64 m);
i64 omega_simple_m(const BinaryCubicForm& f, i64 m);

// True iff R_f is maximal at p.  Requires Delta(f) != 0.
bool is_maximal_at(const BinaryCubicForm& f, i64 p);

// True iff R_f is maximal at every prime.  Requires Delta(f) != 0.
bool is_maximal(const BinaryCubicForm& f);

// Form of the index-p overring of R_f attached to a multiple root alpha of
// f mod p satisfying the p^2 divisibility; discriminant shrinks by p^2.
// Throws std::invalid_argument if alpha does not qualify.
BinaryCubicForm overring_step(const BinaryCubicForm& f, i64 p, const P1Point& alpha);

// Form of the index-p subring of R_g attached to any root alpha of g mod p;
// discriminant grows by p^2.  Throws std::invalid_argument if alpha is not
// a root.
BinaryCubicForm subring(const BinaryCubicForm& g, i64 p, const P1Point& alpha);

struct MaximalizationResult {
  BinaryCubicForm maximal_form; // canonical representative, maximal everywhere
  i64 index = 1;                // [O_{K_f} : R_f]
  i64 field_discriminant = 0;   // Delta(f) = index^2 * field_discriminant
};

// Climb from R_f to the maximal order of K_f by overring steps and content
// division.  Requires f irreducible (throws std::invalid_argument
// otherwise, and on discriminants too large for the trial-division bound).
MaximalizationResult maximalize(const BinaryCubicForm& f);

struct SwitchingCheckResult {
  Rat lhs;                  // mass of W_q orbits, |Delta| < X
  Rat rhs;                  // Moebius/omega-weighted mass over all orbits
  bool equal = false;       // lhs == rhs exactly
  i64 lhs_orbits = 0;       // #orbits summed on the left
  i64 stab_checked = 0;     // #bijection pairs whose stabilizers were compared
  i64 stab_mismatches = 0;  // pairs where |Stab(f)| != |Stab(g, alpha)|
};

// Evaluate both sides of the switching identity with the indicator weight
// Psi(t) = [t < X] for squarefree q >= 1 and sign in {+1, -1}.  When q is
// prime, additionally walks the explicit bijection f <-> (g, alpha) and
// compares |Stab(f)| with the stabilizer of the pair.
SwitchingCheckResult switching_check(i64 q, i64 X, int sign);

}  // namespace cubic

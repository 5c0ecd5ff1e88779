#pragma once
// ============================================================================
// Finite-field Fourier analysis on the space V(F_p) of binary cubic forms.
//
// V(F_p) = {f = (a,b,c,d) : ax^3 + bx^2y + cxy^2 + dy^3} carries the twisted
// action gamma.f = det(gamma)^{-1} f((x,y) gamma), under which it breaks into
// exactly six GL_2(F_p)-invariant classes, indexed by the factorization shape
// of f over F_p:
//
//     index  class   meaning                                    size
//       0    (0)     f == 0 mod p                               1
//       1    (1^3)   cube of a linear form                      p^2 - 1
//       2    (1^21)  square times a distinct linear factor      p(p^2 - 1)
//       3    (111)   three distinct rational roots              p(p+1)(p-1)^2/6
//       4    (12)    one rational root, one quadratic factor    p(p+1)(p-1)^2/2
//       5    (3)     irreducible cubic                          p(p+1)(p-1)^2/3
//
// This fixed order (0), (1^3), (1^21), (111), (12), (3) is used for every
// array-of-six in this header.  A GL_2(F_p)-invariant function on V(F_p) is
// the same thing as a vector of six values, one per class.
//
// The dual space is realized inside V itself: a dual vector f* = (a*,b*,c*,d*)
// corresponds to the integral form a*x^3 + 3b*x^2y + 3c*xy^2 + d*y^3 (middle
// coefficients divisible by 3), paired with V by
//
//     [f, f*] = d a* - c b* + b c* - a d*,
//
// which satisfies [gamma.f, gamma.f*] = det(gamma) [f, f*] when f* transforms
// by act_dual (the embedding conjugated by diag(1,3,3,1)).  The Fourier
// transform of phi : V(F_p) -> C is
//
//     phi^(f*) = p^{-4} sum_{f in V(F_p)} e([f, f*] / p) phi(f).
//
// Invariance is preserved, so on invariant functions the transform is a 6x6
// rational matrix M: if phi has class values a_j then phi^ has value
// v_i = sum_j M[i][j] a_j on the i-th dual class.  Column j of M is the
// transform of the indicator function of class j.
//
// For p != 3 the dual classes are read off by factoring the embedded form
// (a*, 3b*, 3c*, d*) mod p, their sizes match the table above, and M is given
// in closed form, rational in p except for a sign s = +1 when p = 1 mod 3 and
// s = -1 when p = 2 mod 3 appearing only in the lower-right 3x3 block (rows
// and columns (111), (12), (3)).
//
// For p = 3 the embedding degenerates (3 = 0 mod p) and V*(F_3) is a
// different 81-element representation.  It still has exactly six orbits, with
// the same size multiset {1, 8, 8, 16, 24, 24}, labeled here by the
// convention (computed once by orbit enumeration and cached):
//
//     (0)*    the zero form                                      size  1
//     (111)*  nonzero with a* = d* = 0 mod 3                     size  8
//     (1^3)*  the other size-8 orbit (orbit of (0,0,0,1); its
//             transform row continues the p != 3 closed form)    size  8
//     (3)*    the size-16 orbit                                  size 16
//     (12)*   size-24 orbit with dual discriminant = 2 mod 3     size 24
//     (1^21)* size-24 orbit with dual discriminant = 1 mod 3     size 24
//
// With this labeling the forward transform matrix at p = 3 composed with the
// reverse transform (computed the same way with the roles of V and V*
// exchanged) equals p^{-4} times the identity, as the inversion formula
// phi^^ = p^{-4} phi(-.) demands; unlike the p != 3 case the two matrices
// are not equal, so brute_force_ft(3) is the forward matrix only.
//
// The matrix rows obey exact orthogonality relations
//
//     p^4 sum_i M[i][j] M[i][k] M[0][i] = delta_{jk} M[0][j]
//
// (21 identities, one per unordered pair j <= k), and the row absolute sums
// are small: row (0)* sums to exactly 1, row (1^3)* to at most 1/p, and the
// remaining four rows to at most 4/p^2 each.  Consequently any invariant phi
// with |phi| <= 1 has |phi^| <= 4/p^2 away from the (0)* and (1^3)* classes.
//
// The header also provides the local densities, within each nonzero class, of
// forms that are maximal at p (cutting out the ring of integers of a cubic
// etale algebra at p).  Maximality at p is determined by f mod p^2, and the
// density of the maximal locus inside V(Z/p^2), weighted by the standard
// invariant functions lambda_p, lambda_{p^2}, theta_{p^2} below, has the
// closed forms recorded in MaximalDensities.
// ============================================================================

#include <array>

#include "cubicount/common.hpp"
#include "cubicount/forms.hpp"
#include "cubicount/local.hpp"

namespace cubic {

// The six classes in the fixed order documented above.
inline constexpr std::array<SplittingType, 6> kClassOrder = {
    SplittingType::Zero0,         SplittingType::TotallyRamified1_3,
    SplittingType::Ramified1_21,  SplittingType::Split111,
    SplittingType::Partial12,     SplittingType::Inert3,
};

// Position of a class in kClassOrder (0..5).
int class_index(SplittingType t);

// A GL_2(F_p)-invariant function on V(F_p), stored as one rational value per
// class in kClassOrder order.  The same six values define a function on the
// dual space via the dual class labels.
struct InvariantFunction {
  std::array<Rat, 6> coeff{};

  Rat& operator[](SplittingType t) { return coeff[class_index(t)]; }
  const Rat& operator[](SplittingType t) const { return coeff[class_index(t)]; }

  // Value at a concrete form: the coefficient of the class of f mod p.
  Rat evaluate(const BinaryCubicForm& f, i64 p) const;

  // Indicator of the zero form.
  static InvariantFunction dirac_at_zero();
  // Constant function.
  static InvariantFunction constant(const Rat& value);
  // lambda_p: number of first-degree prime ideals minus one, per class:
  // values (0, 0, 1, 2, 0, -1).  For a form maximal at p this is the p-th
  // coefficient of the Dirichlet series of its cubic ring.
  static InvariantFunction lambda_p();
  // lambda_{p^2}: the p^2-nd Dirichlet coefficient, values (0, 0, 1, 3, 1, 0).
  static InvariantFunction lambda_p_squared();
  // theta_{p^2} = 2 lambda_{p^2} - lambda_p^2: the p^2-nd coefficient of the
  // square of the associated degree-2 Euler product, values (0, 0, 1, 2, 2, -1).
  static InvariantFunction theta_p_squared();
};

// Sizes of the six classes of V(F_p), in kClassOrder order.  Valid for every
// prime p, including p = 3, on both the source and the dual side.
std::array<i64, 6> orbit_sizes(i64 p);

// The transform matrix on invariant functions.  entries[i][j] is the value on
// the i-th dual class of the transform of the indicator of the j-th source
// class; all entries have denominator dividing p^4.
struct MoriMatrix {
  i64 p = 0;
  // +1 when p = 1 mod 3, -1 when p = 2 mod 3, 0 for p = 3.
  int sign_branch = 0;
  std::array<std::array<Rat, 6>, 6> entries{};
};

// Closed-form transform matrix.  Requires p prime, p != 3 (throws
// std::invalid_argument otherwise).
MoriMatrix mori_matrix(i64 p);

// Transform matrix computed directly from the definition, by counting, for
// any prime p <= kMaxBruteForcePrime (O(p^5) work).  Exact: each column is
// verified to be rational (the transform value is independent of the choice
// of nonzero pairing residue and of the orbit representative) before the
// entry is formed, so no floating-point roots of unity are involved.  For
// p != 3 this equals mori_matrix(p); for p = 3 it is the forward matrix
// under the labeling convention above.
MoriMatrix brute_force_ft(i64 p);

inline constexpr i64 kMaxBruteForcePrime = 31;

// Class of a dual vector f* = (a*,b*,c*,d*): for p != 3 the splitting type of
// the embedded form (a*, 3b*, 3c*, d*); for p = 3 the cached orbit label.
SplittingType dual_splitting_type(const BinaryCubicForm& fs, i64 p);

// Discriminant of the dual coordinates,
//   disc*(f*) = 3 b*^2 c*^2 + 6 a* b* c* d* - 4 a* c*^3 - 4 b*^3 d* - a*^2 d*^2,
// satisfying disc((a*,3b*,3c*,d*)) = 27 disc*(f*).  Overflow-checked.
i128 dual_discriminant(const BinaryCubicForm& fs);

// Fourier transform of an invariant function (matrix-vector product; uses the
// closed form for p != 3 and the exact brute-force matrix for p = 3).
InvariantFunction fourier_transform(const InvariantFunction& phi, i64 p);

// The 21 orthogonality identities
//   p^4 sum_i M[i][j] M[i][k] M[0][i] = delta_{jk} M[0][j]
// checked exactly for the closed-form matrix, indexed by pairs (j, k) with
// 0 <= j <= k <= 5 in lexicographic order.  Requires p prime, p != 3.
std::array<bool, 21> verify_orthogonality(i64 p);

// Local densities of the maximal locus.  mu[i] is the density in V(Z/p^2)
// (equivalently, the natural density in V(Z)) of forms with class i mod p
// that are maximal at p; maximality depends only on f mod p^2.  Classes
// (111), (12), (3) have p not dividing the discriminant, so there every lift
// is maximal and mu is just the class size over p^4; in the ramified classes
// only a fraction of lifts survive:
//
//   mu[(0)]    = 0
//   mu[(1^3)]  = (p-1)^2 (p+1) / p^5
//   mu[(1^21)] = (p-1)^2 (p+1) / p^4
//   mu[(111)]  = (1/6) (p-1)^2 p (p+1) / p^4
//   mu[(12)]   = (1/2) (p-1)^2 p (p+1) / p^4
//   mu[(3)]    = (1/3) (p-1)^2 p (p+1) / p^4
//
// summing to (1 - p^{-2})(1 - p^{-3}).  The hat_ values are the transforms
// at the zero dual vector, over V(Z/p^2), of the maximal-locus indicator u_p
// weighted by the standard invariant functions:
//
//   hat_u_lambda_p         = sum mu[i] lambda_p[i]     = (p-1)(p^2-1) / p^4
//   hat_u_lambda_p_squared = sum mu[i] lambda_{p^2}[i] = (p^2-1)^2 / p^4
//   hat_u_theta_p_squared  = sum mu[i] theta_{p^2}[i]  = (p^2-1)^2 / p^4
struct MaximalDensities {
  i64 p = 0;
  std::array<Rat, 6> mu{};
  Rat hat_u_lambda_p;
  Rat hat_u_lambda_p_squared;
  Rat hat_u_theta_p_squared;
};

// The table above for any prime p.
MaximalDensities maximal_densities(i64 p);

}  // namespace cubic

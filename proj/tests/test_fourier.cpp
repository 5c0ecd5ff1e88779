#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
// ============================================================================
// Fourier analysis on V(F_p): the closed-form transform matrix against a
// brute-force discrete Fourier transform, orbit sizes against exhaustive
// classification, inversion (double transform), Plancherel, orthogonality,
// decay bounds, and the maximal-locus densities against an exhaustive scan
// of V(Z/p^2) with an independent maximality oracle.
//
// The brute-force side never touches floating point: sums of p-th roots of
// unity over a class collapse to integers once the nonzero pairing residues
// are verified to occur equally often, so every comparison here is exact
// rational arithmetic.
// ============================================================================
#include "doctest.h"

#include <array>
#include <vector>

#include "cubicount/common.hpp"
#include "cubicount/forms.hpp"
#include "cubicount/fourier.hpp"
#include "cubicount/local.hpp"

using namespace cubic;

namespace {

using Mat6 = std::array<std::array<Rat, 6>, 6>;

Mat6 matmul(const Mat6& A, const Mat6& B) {
  Mat6 C{};
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      Rat s = 0;
      for (int k = 0; k < 6; ++k) s += A[i][k] * B[k][j];
      C[i][j] = s;
    }
  return C;
}

Rat rat_abs(const Rat& x) { return x < 0 ? Rat(-x) : x; }

BinaryCubicForm index_to_form(i64 id, i64 p) {
  BinaryCubicForm f;
  f.d = id % p;
  id /= p;
  f.c = id % p;
  id /= p;
  f.b = id % p;
  id /= p;
  f.a = id % p;
  return f;
}

// Reverse transform matrix computed from the definition: the value on the
// k-th source class of psi^(f) = p^{-4} sum_{f*} e([f, f*]/p) psi(f*), for
// psi the indicator of the j-th dual class.  Same counting collapse as the
// forward brute force, with the roles of V and V* exchanged.  For p != 3 the
// representation and its dual are isomorphic and this must equal the forward
// matrix; at p = 3 it is genuinely different, but composing the two in either
// order must give p^{-4} times the identity (the inversion formula, plus the
// fact that every class is stable under f -> -f).
Mat6 reverse_ft_oracle(i64 p) {
  const i64 total = p * p * p * p;
  std::vector<std::uint8_t> src_class(total), dual_class(total);
  std::array<i64, 6> src_first, src_last;
  src_first.fill(-1);
  src_last.fill(-1);
  for (i64 id = 0; id < total; ++id) {
    BinaryCubicForm f = index_to_form(id, p);
    src_class[id] =
        static_cast<std::uint8_t>(class_index(splitting_type_only(f, p)));
    dual_class[id] =
        static_cast<std::uint8_t>(class_index(dual_splitting_type(f, p)));
    int k = src_class[id];
    if (src_first[k] < 0) src_first[k] = id;
    src_last[k] = id;
  }
  const Rat p4 = Rat(total);
  Mat6 R{};
  for (int k = 0; k < 6; ++k) {
    std::array<Rat, 6> column_by_rep[2];
    for (int rep = 0; rep < 2; ++rep) {
      BinaryCubicForm f = index_to_form(rep == 0 ? src_first[k] : src_last[k], p);
      std::vector<i64> count(6 * p, 0);
      for (i64 id = 0; id < total; ++id) {
        i64 r = dual_pairing(f, index_to_form(id, p), p);
        ++count[dual_class[id] * p + r];
      }
      for (int j = 0; j < 6; ++j) {
        for (i64 r = 2; r < p; ++r)
          REQUIRE(count[j * p + r] == count[j * p + 1]);
        column_by_rep[rep][j] = Rat(count[j * p + 0] - count[j * p + 1]) / p4;
      }
    }
    REQUIRE(column_by_rep[0] == column_by_rep[1]);
    R[k] = column_by_rep[0];
  }
  return R;
}

}  // namespace

TEST_CASE("class order and indexing") {
  for (int i = 0; i < 6; ++i) CHECK(class_index(kClassOrder[i]) == i);
  InvariantFunction phi;
  phi[SplittingType::Inert3] = Rat(7);
  CHECK(phi.coeff[5] == 7);
  CHECK(phi[SplittingType::Zero0] == 0);
  const InvariantFunction lam = InvariantFunction::lambda_p();
  CHECK(lam[SplittingType::Split111] == 2);
  CHECK(lam[SplittingType::Inert3] == -1);
  CHECK(lam[SplittingType::Ramified1_21] == 1);
  CHECK(lam[SplittingType::TotallyRamified1_3] == 0);
}

TEST_CASE("invariant function values at concrete forms") {
  const InvariantFunction lam = InvariantFunction::lambda_p();
  // y(x-y)(x+y): three distinct roots at every odd prime.
  CHECK(lam.evaluate({0, 1, 0, -1}, 5) == 2);
  CHECK(lam.evaluate({0, 1, 0, -1}, 13) == 2);
  // x^3: triple root.
  CHECK(lam.evaluate({1, 0, 0, 7}, 7) == 0);
  // x^2(x+y): double root [0:1] and simple root [-1:1].
  CHECK(lam.evaluate({1, 1, 0, 0}, 2) == 1);
  CHECK(lam.evaluate({1, 1, 0, 0}, 11) == 1);
  // x^3 - y^3 at p = 2 mod 3: cubing is a bijection, one root plus a
  // quadratic factor.
  CHECK(lam.evaluate({1, 0, 0, -1}, 5) == 0);
  // x^3 - xy^2 - y^3 has no root mod 3, hence is irreducible.
  CHECK(lam.evaluate({1, 0, -1, -1}, 3) == -1);
  CHECK(lam.evaluate({1, 0, -1, -1}, 2) == -1);
  // Content divisible by p.
  CHECK(lam.evaluate({5, 5, 5, 5}, 5) == 0);
  CHECK(InvariantFunction::theta_p_squared().evaluate({1, 1, 0, 0}, 11) == 1);
}

TEST_CASE("orbit sizes match exhaustive classification") {
  for (i64 p : {2, 3, 5, 7}) {
    CAPTURE(p);
    std::array<i64, 6> counted{};
    const i64 total = p * p * p * p;
    for (i64 id = 0; id < total; ++id)
      ++counted[class_index(splitting_type_only(index_to_form(id, p), p))];
    CHECK(counted == orbit_sizes(p));
  }
  for (i64 p : {2, 3, 5, 7, 13, 101}) {
    CAPTURE(p);
    auto sizes = orbit_sizes(p);
    i64 sum = 0;
    for (i64 s : sizes) sum += s;
    CHECK(sum == p * p * p * p);
    CHECK(sizes[0] == 1);
    CHECK(sizes[1] == p * p - 1);
  }
  CHECK_THROWS_AS(orbit_sizes(4), std::invalid_argument);
  CHECK_THROWS_AS(orbit_sizes(1), std::invalid_argument);
}

TEST_CASE("dual class sizes and invariance under the dual action") {
  // Dual classes have the same sizes as the source classes, p = 3 included.
  for (i64 p : {2, 3, 5, 7}) {
    CAPTURE(p);
    std::array<i64, 6> counted{};
    const i64 total = p * p * p * p;
    for (i64 id = 0; id < total; ++id)
      ++counted[class_index(dual_splitting_type(index_to_form(id, p), p))];
    CHECK(counted == orbit_sizes(p));
  }
  // The class of f* is constant along act_dual orbits.
  SplitMix64 rng(20240816);
  const GL2Element gens[4] = {
      {1, 1, 0, 1}, {1, -1, 0, 1}, {0, -1, 1, 0}, {1, 0, 0, -1}};
  for (i64 p : {2, 3, 5, 7, 13}) {
    CAPTURE(p);
    for (int trial = 0; trial < 200; ++trial) {
      BinaryCubicForm fs{
          static_cast<i64>(rng.uniform(0, p - 1)),
          static_cast<i64>(rng.uniform(0, p - 1)),
          static_cast<i64>(rng.uniform(0, p - 1)),
          static_cast<i64>(rng.uniform(0, p - 1))};
      SplittingType t = dual_splitting_type(fs, p);
      BinaryCubicForm moved = fs;
      int words = static_cast<int>(rng.uniform(1, 6));
      for (int w = 0; w < words; ++w)
        moved = act_dual(gens[rng.uniform(0, 3)], moved);
      moved = {mod_pos(moved.a, p), mod_pos(moved.b, p), mod_pos(moved.c, p),
               mod_pos(moved.d, p)};
      CHECK(dual_splitting_type(moved, p) == t);
    }
  }
  CHECK_THROWS_AS(dual_splitting_type({1, 0, 0, 1}, 6), std::invalid_argument);
}

TEST_CASE("dual discriminant matches the embedded form") {
  // disc(a, 3b, 3c, d) = 27 disc*(a, b, c, d), exactly over Z.
  SplitMix64 rng(97);
  for (int trial = 0; trial < 500; ++trial) {
    BinaryCubicForm fs{
        static_cast<i64>(rng.uniform(0, 40)) - 20,
        static_cast<i64>(rng.uniform(0, 40)) - 20,
        static_cast<i64>(rng.uniform(0, 40)) - 20,
        static_cast<i64>(rng.uniform(0, 40)) - 20};
    BinaryCubicForm embedded{fs.a, 3 * fs.b, 3 * fs.c, fs.d};
    CHECK(discriminant(embedded) == 27 * dual_discriminant(fs));
  }
}

TEST_CASE("closed-form matrix: shape, pins, and domain") {
  CHECK_THROWS_AS(mori_matrix(3), std::invalid_argument);
  CHECK_THROWS_AS(mori_matrix(9), std::invalid_argument);
  CHECK(mori_matrix(7).sign_branch == 1);
  CHECK(mori_matrix(5).sign_branch == -1);
  CHECK(mori_matrix(2).sign_branch == -1);
  for (i64 p : {2, 5, 7, 13, 101}) {
    CAPTURE(p);
    MoriMatrix M = mori_matrix(p);
    const Rat p4 = Rat(p) * Rat(p) * Rat(p) * Rat(p);
    auto sizes = orbit_sizes(p);
    Rat row0_sum = 0;
    for (int j = 0; j < 6; ++j) {
      // Column of the zero class: the transform of the dirac at 0 is the
      // constant p^{-4}.
      CHECK(M.entries[j][0] == 1 / p4);
      // Top row: the transform of an indicator at the zero dual vector is
      // the class density.
      CHECK(M.entries[0][j] == Rat(sizes[j]) / p4);
      row0_sum += M.entries[0][j];
    }
    CHECK(row0_sum == 1);
  }
  // The sign branch is visible in the (111),(111) entry: p(sp+5)/6 p^{-4}.
  CHECK(mori_matrix(7).entries[3][3] == Rat(14) / Rat(2401));
  CHECK(mori_matrix(5).entries[3][3] == 0);
}

TEST_CASE("closed form equals brute-force transform") {
  for (i64 p : {2, 5, 7}) {
    CAPTURE(p);
    MoriMatrix formula = mori_matrix(p);
    MoriMatrix brute = brute_force_ft(p);
    CHECK(brute.sign_branch == formula.sign_branch);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        CAPTURE(i);
        CAPTURE(j);
        CHECK(formula.entries[i][j] == brute.entries[i][j]);
      }
  }
  CHECK_THROWS_AS(brute_force_ft(37), std::invalid_argument);
  CHECK_THROWS_AS(brute_force_ft(4), std::invalid_argument);
}

TEST_CASE("p = 3 forward matrix") {
  MoriMatrix M = brute_force_ft(3);
  CHECK(M.sign_branch == 0);
  // 81 times the matrix, rows (0)*,(1^3)*,(1^21)*,(111)*,(12)*,(3)*.  The
  // (1^3)* row continues the p != 3 closed form
  // (1, -1, p(p-1), p(p-1)(2p-1)/6, -p(p-1)/2, -p(p+1)(p-1)/3) at p = 3.
  const i64 expected[6][6] = {
      {1, 8, 24, 8, 24, 16},  {1, -1, 6, 5, -3, -8}, {1, -1, -3, -1, 6, -2},
      {1, 8, -3, -1, -3, -2}, {1, -1, -3, 2, -3, 4}, {1, -1, 6, -4, -3, 1}};
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      CAPTURE(i);
      CAPTURE(j);
      CHECK(M.entries[i][j] == Rat(expected[i][j]) / Rat(81));
    }
}

TEST_CASE("transform of dirac and of the constant function") {
  for (i64 p : {2, 3, 5, 7, 13}) {
    CAPTURE(p);
    const Rat p4 = Rat(p) * Rat(p) * Rat(p) * Rat(p);
    InvariantFunction dhat =
        fourier_transform(InvariantFunction::dirac_at_zero(), p);
    InvariantFunction chat =
        fourier_transform(InvariantFunction::constant(Rat(1)), p);
    for (int i = 0; i < 6; ++i) {
      CHECK(dhat.coeff[i] == 1 / p4);
      CHECK(chat.coeff[i] == ((i == 0) ? Rat(1) : Rat(0)));
    }
  }
}

TEST_CASE("transform of the standard invariant functions") {
  // lambda_p^ equals (p^2-1)/p^3 on the (0)* and (1^3)* classes and -1/p^3
  // elsewhere; theta_{p^2}^ at the zero dual vector equals 1 - 1/p^2.  Both
  // hold at p = 3 as well.
  for (i64 p : {2, 3, 5, 7, 13, 97}) {
    CAPTURE(p);
    const Rat P(p);
    const Rat p3 = P * P * P;
    InvariantFunction lhat =
        fourier_transform(InvariantFunction::lambda_p(), p);
    for (int i = 0; i < 6; ++i) {
      CAPTURE(i);
      CHECK(lhat.coeff[i] == ((i <= 1) ? Rat((P * P - 1) / p3) : Rat(-1 / p3)));
    }
    InvariantFunction that =
        fourier_transform(InvariantFunction::theta_p_squared(), p);
    CHECK(that.coeff[0] == 1 - 1 / (P * P));
  }
}

TEST_CASE("orthogonality of the matrix rows") {
  for (i64 p : {2, 5, 7, 13, 31, 43}) {
    CAPTURE(p);
    auto ok = verify_orthogonality(p);
    for (int idx = 0; idx < 21; ++idx) {
      CAPTURE(idx);
      CHECK(ok[idx]);
    }
  }
  CHECK_THROWS_AS(verify_orthogonality(3), std::invalid_argument);
  // Same identity for the p = 3 forward matrix, checked by hand.
  MoriMatrix M = brute_force_ft(3);
  const Rat p4(81);
  for (int j = 0; j < 6; ++j)
    for (int k = j; k < 6; ++k) {
      Rat lhs = 0;
      for (int i = 0; i < 6; ++i)
        lhs += M.entries[i][j] * M.entries[i][k] * M.entries[0][i];
      CHECK(p4 * lhs == ((j == k) ? M.entries[0][j] : Rat(0)));
    }
}

TEST_CASE("row absolute sums and decay bounds") {
  // Row (0)* sums to exactly 1; the other rows decay: (1^3)* at most 1/p,
  // the rest at most 4/p^2 (with 2/p^2 for all but the (111)* row).  Hence
  // any invariant phi with |phi| <= 1 has |phi^| <= 4/p^2 away from the
  // (0)* and (1^3)* dual classes, and |phi^| <= 1/p on (1^3)*.
  for (i64 p : {2, 5, 7, 13, 19, 31, 43, 97, 101}) {
    CAPTURE(p);
    MoriMatrix M = mori_matrix(p);
    const Rat P(p);
    std::array<Rat, 6> row_sum{};
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) row_sum[i] += rat_abs(M.entries[i][j]);
    CHECK(row_sum[0] == 1);
    CHECK(row_sum[1] <= 1 / P);
    CHECK(row_sum[2] <= 2 / (P * P));
    CHECK(row_sum[3] <= 4 / (P * P));
    CHECK(row_sum[4] <= 2 / (P * P));
    CHECK(row_sum[5] <= 2 / (P * P));
  }
}

TEST_CASE("plancherel identity") {
  SplitMix64 rng(424242);
  for (i64 p : {2, 3, 5, 7, 13}) {
    CAPTURE(p);
    const Rat p4 = Rat(p) * Rat(p) * Rat(p) * Rat(p);
    auto sizes = orbit_sizes(p);
    for (int trial = 0; trial < 25; ++trial) {
      InvariantFunction phi, psi;
      for (int j = 0; j < 6; ++j) {
        phi.coeff[j] = Rat(static_cast<i64>(rng.uniform(0, 18)) - 9) /
                       Rat(static_cast<i64>(rng.uniform(1, 9)));
        psi.coeff[j] = Rat(static_cast<i64>(rng.uniform(0, 18)) - 9) /
                       Rat(static_cast<i64>(rng.uniform(1, 9)));
      }
      InvariantFunction phat = fourier_transform(phi, p);
      InvariantFunction qhat = fourier_transform(psi, p);
      Rat dual_side = 0, source_side = 0;
      for (int j = 0; j < 6; ++j) {
        dual_side += Rat(sizes[j]) * phat.coeff[j] * qhat.coeff[j];
        source_side += Rat(sizes[j]) * phi.coeff[j] * psi.coeff[j];
      }
      CHECK(dual_side == source_side / p4);
    }
  }
}

TEST_CASE("double transform is p^-4 times the identity") {
  // Closed form: the matrix squares to p^-4 I (the dual of the dual class
  // labeling coincides with the source labeling when p != 3).
  for (i64 p : {5, 7, 13}) {
    CAPTURE(p);
    MoriMatrix M = mori_matrix(p);
    const Rat p4 = Rat(p) * Rat(p) * Rat(p) * Rat(p);
    Mat6 sq = matmul(M.entries, M.entries);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        CHECK(sq[i][j] == ((i == j) ? 1 / p4 : Rat(0)));
  }
  // Brute force, via the reverse-transform oracle.  For p != 3 the reverse
  // matrix equals the forward one; at p = 3 it differs, but both products
  // still collapse to p^-4 I.
  for (i64 p : {2, 3, 5}) {
    CAPTURE(p);
    MoriMatrix fwd = brute_force_ft(p);
    Mat6 rev = reverse_ft_oracle(p);
    const Rat p4 = Rat(p) * Rat(p) * Rat(p) * Rat(p);
    if (p != 3) CHECK(rev == fwd.entries);
    Mat6 ab = matmul(rev, fwd.entries);
    Mat6 ba = matmul(fwd.entries, rev);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        CAPTURE(i);
        CAPTURE(j);
        CHECK(ab[i][j] == ((i == j) ? 1 / p4 : Rat(0)));
        CHECK(ba[i][j] == ((i == j) ? 1 / p4 : Rat(0)));
      }
  }
}

TEST_CASE("maximal density table: internal identities") {
  for (i64 p : {2, 3, 5, 7, 13, 101}) {
    CAPTURE(p);
    MaximalDensities D = maximal_densities(p);
    const Rat P(p);
    const Rat p4 = P * P * P * P;
    auto sizes = orbit_sizes(p);
    // Total density of the maximal locus.
    Rat total = 0;
    for (const Rat& m : D.mu) total += m;
    CHECK(total == (1 - 1 / (P * P)) * (1 - 1 / (P * P * P)));
    // Within each ramified class a fraction (p-1)/p of lifts is maximal;
    // the unramified classes are maximal outright.
    CHECK(D.mu[0] == 0);
    CHECK(D.mu[1] == Rat(sizes[1]) / p4 * (P - 1) / P);
    CHECK(D.mu[2] == Rat(sizes[2]) / p4 * (P - 1) / P);
    for (int j = 3; j < 6; ++j) CHECK(D.mu[j] == Rat(sizes[j]) / p4);
    // The hat_ values are the mu-weighted sums of the invariant functions.
    const InvariantFunction lam = InvariantFunction::lambda_p();
    const InvariantFunction lam2 = InvariantFunction::lambda_p_squared();
    const InvariantFunction theta = InvariantFunction::theta_p_squared();
    Rat s1 = 0, s2 = 0, s3 = 0;
    for (int j = 0; j < 6; ++j) {
      s1 += D.mu[j] * lam.coeff[j];
      s2 += D.mu[j] * lam2.coeff[j];
      s3 += D.mu[j] * theta.coeff[j];
    }
    CHECK(s1 == D.hat_u_lambda_p);
    CHECK(s2 == D.hat_u_lambda_p_squared);
    CHECK(s3 == D.hat_u_theta_p_squared);
    CHECK(D.hat_u_lambda_p == (P - 1) * (P * P - 1) / p4);
    CHECK(D.hat_u_lambda_p_squared == (P * P - 1) * (P * P - 1) / p4);
    CHECK(D.hat_u_theta_p_squared == D.hat_u_lambda_p_squared);
  }
  CHECK_THROWS_AS(maximal_densities(6), std::invalid_argument);
}

TEST_CASE("maximal density table: exhaustive scan of V(Z/p^2)") {
  // Maximality at p depends only on f mod p^2.  Scan every residue, lift it
  // to a form with nonzero discriminant, and test maximality directly; the
  // per-class counts over p^8 residues must equal mu exactly, and the
  // weighted counts must equal the hat_ values.
  SplitMix64 rng(1618);
  for (i64 p : {2, 3, 5, 7}) {
    CAPTURE(p);
    const i64 p2 = p * p;
    const i64 residues = p2 * p2 * p2 * p2;
    std::array<i64, 6> maximal_count{};
    i64 sum_lambda = 0, sum_lambda2 = 0, sum_theta = 0;
    const i64 lam[6] = {0, 0, 1, 2, 0, -1};
    const i64 lam2[6] = {0, 0, 1, 3, 1, 0};
    const i64 theta[6] = {0, 0, 1, 2, 2, -1};
    for (i64 id = 0; id < residues; ++id) {
      i64 rest = id;
      BinaryCubicForm f;
      f.d = rest % p2;
      rest /= p2;
      f.c = rest % p2;
      rest /= p2;
      f.b = rest % p2;
      rest /= p2;
      f.a = rest % p2;
      // Lift until the discriminant is nonzero (random multiples of p^2 on
      // all four coefficients; any lift gives the same local answer).
      int guard = 0;
      while (discriminant(f) == 0) {
        REQUIRE(++guard < 100);
        f.a += p2 * static_cast<i64>(rng.uniform(0, 8));
        f.b += p2 * static_cast<i64>(rng.uniform(0, 8));
        f.c += p2 * static_cast<i64>(rng.uniform(0, 8));
        f.d += p2 * static_cast<i64>(rng.uniform(0, 8));
      }
      if (!is_maximal_at(f, p)) continue;
      int cls = class_index(splitting_type_only(f, p));
      ++maximal_count[cls];
      sum_lambda += lam[cls];
      sum_lambda2 += lam2[cls];
      sum_theta += theta[cls];
    }
    MaximalDensities D = maximal_densities(p);
    const Rat denom(residues);
    for (int j = 0; j < 6; ++j) {
      CAPTURE(j);
      CHECK(Rat(maximal_count[j]) / denom == D.mu[j]);
    }
    CHECK(Rat(sum_lambda) / denom == D.hat_u_lambda_p);
    CHECK(Rat(sum_lambda2) / denom == D.hat_u_lambda_p_squared);
    CHECK(Rat(sum_theta) / denom == D.hat_u_theta_p_squared);
  }
}

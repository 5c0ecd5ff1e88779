#include "cubicount/fourier.hpp"

#include <queue>
#include <stdexcept>
#include <vector>

namespace cubic {

namespace {

void require_prime(i64 p, const char* who) {
  if (!is_prime_i64(p))
    throw std::invalid_argument(std::string(who) + ": p must be prime");
}

// Exact rational a/b from small integers (the two-argument mpq_class
// constructor does not canonicalize on its own).
Rat ratio(const Rat& num, i64 den) { return num / Rat(den); }

// Index <-> form bijection for V(Z/p), coefficients in [0, p).
i64 form_to_index(const BinaryCubicForm& f, i64 p) {
  return ((mod_pos(f.a, p) * p + mod_pos(f.b, p)) * p + mod_pos(f.c, p)) * p +
         mod_pos(f.d, p);
}

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

// ----------------------------------------------------------------------------
// p = 3 dual orbit labels.
//
// The dual space V*(F_3) is enumerated once and partitioned into orbits under
// act_dual by breadth-first closure over generators of GL_2(Z).  The six
// orbits are then labeled by the convention in the header: zero; the size-8
// orbit supported on a* = d* = 0 is (111)*; the other size-8 orbit is (1^3)*;
// the size-16 orbit is (3)*; the two size-24 orbits are split by the residue
// of the dual discriminant, 2 -> (12)* and 1 -> (1^21)*.  Every labeling rule
// is re-verified over the whole orbit while the table is built.
// ----------------------------------------------------------------------------
struct DualTable3 {
  std::array<SplittingType, 81> label{};
};

DualTable3 build_dual_table_3() {
  const i64 p = 3;
  std::array<int, 81> orbit;
  orbit.fill(-1);
  int norb = 0;
  const GL2Element gens[3] = {{1, 1, 0, 1}, {0, -1, 1, 0}, {1, 0, 0, -1}};
  for (i64 seed = 0; seed < 81; ++seed) {
    if (orbit[seed] != -1) continue;
    std::queue<i64> queue;
    queue.push(seed);
    orbit[seed] = norb;
    while (!queue.empty()) {
      i64 cur = queue.front();
      queue.pop();
      for (const GL2Element& g : gens) {
        i64 next = form_to_index(act_dual(g, index_to_form(cur, p)), p);
        if (orbit[next] == -1) {
          orbit[next] = norb;
          queue.push(next);
        }
      }
    }
    ++norb;
  }
  if (norb != 6) throw std::logic_error("V*(F_3): expected 6 orbits");

  std::array<int, 6> size{};
  for (int id = 0; id < 81; ++id) ++size[orbit[id]];

  // Per-orbit invariants, with constancy checks across all members.
  std::array<int, 6> embedded_zero;  // a* = d* = 0 mod 3 throughout?
  std::array<int, 6> dual_disc_mod3;
  embedded_zero.fill(-1);
  dual_disc_mod3.fill(-1);
  for (int id = 0; id < 81; ++id) {
    BinaryCubicForm f = index_to_form(id, p);
    int o = orbit[id];
    int ez = (f.a % 3 == 0 && f.d % 3 == 0) ? 1 : 0;
    int ds = static_cast<int>(mod_pos(checked_narrow(dual_discriminant(f)), 3));
    if (embedded_zero[o] == -1) {
      embedded_zero[o] = ez;
      dual_disc_mod3[o] = ds;
    } else if (embedded_zero[o] != ez || dual_disc_mod3[o] != ds) {
      throw std::logic_error("V*(F_3): labeling invariant not orbit-constant");
    }
  }

  std::array<SplittingType, 6> tag;
  std::array<bool, 6> used{};
  for (int o = 0; o < 6; ++o) {
    SplittingType t;
    if (size[o] == 1) {
      t = SplittingType::Zero0;
    } else if (size[o] == 8) {
      t = embedded_zero[o] ? SplittingType::Split111
                           : SplittingType::TotallyRamified1_3;
    } else if (size[o] == 16) {
      t = SplittingType::Inert3;
    } else if (size[o] == 24) {
      if (dual_disc_mod3[o] == 2)
        t = SplittingType::Partial12;
      else if (dual_disc_mod3[o] == 1)
        t = SplittingType::Ramified1_21;
      else
        throw std::logic_error("V*(F_3): size-24 orbit with zero dual disc");
    } else {
      throw std::logic_error("V*(F_3): unexpected orbit size");
    }
    int ci = class_index(t);
    if (used[ci]) throw std::logic_error("V*(F_3): duplicate orbit label");
    used[ci] = true;
    tag[o] = t;
  }

  DualTable3 table;
  for (int id = 0; id < 81; ++id) table.label[id] = tag[orbit[id]];
  return table;
}

const DualTable3& dual_table_3() {
  static const DualTable3 table = build_dual_table_3();
  return table;
}

}  // namespace

int class_index(SplittingType t) {
  switch (t) {
    case SplittingType::Zero0: return 0;
    case SplittingType::TotallyRamified1_3: return 1;
    case SplittingType::Ramified1_21: return 2;
    case SplittingType::Split111: return 3;
    case SplittingType::Partial12: return 4;
    case SplittingType::Inert3: return 5;
  }
  throw std::logic_error("class_index: bad splitting type");
}

Rat InvariantFunction::evaluate(const BinaryCubicForm& f, i64 p) const {
  return coeff[class_index(splitting_type_only(f, p))];
}

InvariantFunction InvariantFunction::dirac_at_zero() {
  InvariantFunction phi;
  phi.coeff[0] = 1;
  return phi;
}

InvariantFunction InvariantFunction::constant(const Rat& value) {
  InvariantFunction phi;
  phi.coeff.fill(value);
  return phi;
}

InvariantFunction InvariantFunction::lambda_p() {
  InvariantFunction phi;
  phi.coeff = {Rat(0), Rat(0), Rat(1), Rat(2), Rat(0), Rat(-1)};
  return phi;
}

InvariantFunction InvariantFunction::lambda_p_squared() {
  InvariantFunction phi;
  phi.coeff = {Rat(0), Rat(0), Rat(1), Rat(3), Rat(1), Rat(0)};
  return phi;
}

InvariantFunction InvariantFunction::theta_p_squared() {
  InvariantFunction phi;
  phi.coeff = {Rat(0), Rat(0), Rat(1), Rat(2), Rat(2), Rat(-1)};
  return phi;
}

std::array<i64, 6> orbit_sizes(i64 p) {
  require_prime(p, "orbit_sizes");
  // {1, p^2-1, p(p^2-1), t/6, t/2, t/3} with t = p(p+1)(p-1)^2; the divisions
  // are exact (two consecutive integers give the 2, and 3 | p(p+1)(p-1)).
  i64 p2m1 = checked_narrow(checked_sub(checked_mul(p, p), 1));
  i64 t = checked_narrow(
      checked_mul(checked_mul(p, p + 1), checked_mul(p - 1, p - 1)));
  return {1, p2m1, checked_narrow(checked_mul(p, p2m1)), t / 6, t / 2, t / 3};
}

MoriMatrix mori_matrix(i64 p) {
  require_prime(p, "mori_matrix");
  if (p == 3)
    throw std::invalid_argument(
        "mori_matrix: no closed form at p = 3; use brute_force_ft(3)");
  MoriMatrix M;
  M.p = p;
  M.sign_branch = (p % 3 == 1) ? 1 : -1;
  const Rat P(p);
  const Rat S(M.sign_branch);
  const Rat p4 = P * P * P * P;
  // Row layout: dual classes (0)*, (1^3)*, (1^21)*, (111)*, (12)*, (3)*;
  // columns are source classes in the same order.  Entries are p^4 times the
  // transform value; the sign branch enters only the lower-right 3x3 block.
  const std::array<std::array<Rat, 6>, 6> raw = {{
      {Rat(1), (P + 1) * (P - 1), P * (P + 1) * (P - 1),
       ratio(P * (P + 1) * (P - 1) * (P - 1), 6),
       ratio(P * (P + 1) * (P - 1) * (P - 1), 2),
       ratio(P * (P + 1) * (P - 1) * (P - 1), 3)},
      {Rat(1), Rat(-1), P * (P - 1), ratio(P * (P - 1) * (2 * P - 1), 6),
       ratio(-P * (P - 1), 2), ratio(-P * (P + 1) * (P - 1), 3)},
      {Rat(1), P - 1, P * (P - 2), ratio(-P * (P - 1), 2),
       ratio(-P * (P - 1), 2), Rat(0)},
      {Rat(1), 2 * P - 1, -3 * P, ratio(P * (S * P + 5), 6),
       ratio(-P * (S * P - 1), 2), ratio(P * (S * P - 1), 3)},
      {Rat(1), Rat(-1), -P, ratio(-P * (S * P - 1), 6),
       ratio(P * (S * P + 1), 2), ratio(-P * (S * P - 1), 3)},
      {Rat(1), -(P + 1), Rat(0), ratio(P * (S * P - 1), 6),
       ratio(-P * (S * P - 1), 2), ratio(P * (S * P + 2), 3)},
  }};
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) M.entries[i][j] = raw[i][j] / p4;
  return M;
}

SplittingType dual_splitting_type(const BinaryCubicForm& fs, i64 p) {
  require_prime(p, "dual_splitting_type");
  if (p != 3) {
    BinaryCubicForm embedded{fs.a, checked_narrow(checked_mul(3, fs.b)),
                             checked_narrow(checked_mul(3, fs.c)), fs.d};
    return splitting_type_only(embedded, p);
  }
  return dual_table_3().label[form_to_index(fs, 3)];
}

i128 dual_discriminant(const BinaryCubicForm& fs) {
  const i128 a = fs.a, b = fs.b, c = fs.c, d = fs.d;
  // 3 b^2 c^2 + 6 a b c d - 4 a c^3 - 4 b^3 d - a^2 d^2
  i128 t1 = checked_mul(3, checked_mul(checked_mul(b, b), checked_mul(c, c)));
  i128 t2 = checked_mul(6, checked_mul(checked_mul(a, b), checked_mul(c, d)));
  i128 t3 = checked_mul(4, checked_mul(a, checked_mul(c, checked_mul(c, c))));
  i128 t4 = checked_mul(4, checked_mul(checked_mul(b, checked_mul(b, b)), d));
  i128 t5 = checked_mul(checked_mul(a, a), checked_mul(d, d));
  return checked_sub(checked_sub(checked_sub(checked_add(t1, t2), t3), t4), t5);
}

MoriMatrix brute_force_ft(i64 p) {
  require_prime(p, "brute_force_ft");
  if (p > kMaxBruteForcePrime)
    throw std::invalid_argument("brute_force_ft: p too large");
  const i64 total = p * p * p * p;

  // Classify every tuple, on both the source and dual side.
  std::vector<std::uint8_t> src_class(total), dual_class(total);
#pragma omp parallel for schedule(static)
  for (i64 id = 0; id < total; ++id) {
    BinaryCubicForm f = index_to_form(id, p);
    src_class[id] =
        static_cast<std::uint8_t>(class_index(splitting_type_only(f, p)));
    dual_class[id] =
        static_cast<std::uint8_t>(class_index(dual_splitting_type(f, p)));
  }

  // Dual class sizes must match the closed-form orbit sizes; pick the first
  // and last member of each dual class as two independent representatives.
  std::array<i64, 6> dual_size{}, first_rep, last_rep;
  first_rep.fill(-1);
  last_rep.fill(-1);
  for (i64 id = 0; id < total; ++id) {
    int i = dual_class[id];
    ++dual_size[i];
    if (first_rep[i] < 0) first_rep[i] = id;
    last_rep[i] = id;
  }
  if (dual_size != orbit_sizes(p))
    throw std::logic_error("brute_force_ft: dual class sizes are wrong");

  MoriMatrix M;
  M.p = p;
  M.sign_branch = (p == 3) ? 0 : ((p % 3 == 1) ? 1 : -1);
  const Rat p4 = rat_of_i128(i128(total));

  // Column j of the matrix is determined by the pairing-residue profile of
  // class j against a dual representative: the sum of e(r/p) over the class
  // collapses to N_j(0) - N_j(1) once all nonzero residues occur equally
  // often.  That equality, and agreement between the two representatives,
  // are checked before any entry is accepted.
  for (int i = 0; i < 6; ++i) {
    std::array<Rat, 6> column_by_rep[2];
    for (int rep = 0; rep < 2; ++rep) {
      BinaryCubicForm fs =
          index_to_form(rep == 0 ? first_rep[i] : last_rep[i], p);
      std::vector<i64> count(6 * p, 0);
#pragma omp parallel
      {
        std::vector<i64> local(6 * p, 0);
#pragma omp for schedule(static)
        for (i64 id = 0; id < total; ++id) {
          i64 r = dual_pairing(index_to_form(id, p), fs, p);
          ++local[src_class[id] * p + r];
        }
#pragma omp critical
        for (size_t k = 0; k < local.size(); ++k) count[k] += local[k];
      }
      for (int j = 0; j < 6; ++j) {
        for (i64 r = 2; r < p; ++r)
          if (count[j * p + r] != count[j * p + 1])
            throw std::logic_error("brute_force_ft: transform not rational");
        column_by_rep[rep][j] =
            Rat(count[j * p + 0] - count[j * p + 1]) / p4;
      }
    }
    if (column_by_rep[0] != column_by_rep[1])
      throw std::logic_error("brute_force_ft: value not orbit-constant");
    M.entries[i] = column_by_rep[0];
  }
  return M;
}

InvariantFunction fourier_transform(const InvariantFunction& phi, i64 p) {
  MoriMatrix M = (p == 3) ? brute_force_ft(3) : mori_matrix(p);
  InvariantFunction out;
  for (int i = 0; i < 6; ++i) {
    Rat v = 0;
    for (int j = 0; j < 6; ++j) v += M.entries[i][j] * phi.coeff[j];
    out.coeff[i] = v;
  }
  return out;
}

std::array<bool, 21> verify_orthogonality(i64 p) {
  MoriMatrix M = mori_matrix(p);
  const Rat p4 = Rat(p) * Rat(p) * Rat(p) * Rat(p);
  std::array<bool, 21> ok{};
  int idx = 0;
  for (int j = 0; j < 6; ++j) {
    for (int k = j; k < 6; ++k) {
      Rat lhs = 0;
      for (int i = 0; i < 6; ++i)
        lhs += M.entries[i][j] * M.entries[i][k] * M.entries[0][i];
      lhs *= p4;
      Rat rhs = (j == k) ? M.entries[0][j] : Rat(0);
      ok[idx++] = (lhs == rhs);
    }
  }
  return ok;
}

MaximalDensities maximal_densities(i64 p) {
  require_prime(p, "maximal_densities");
  MaximalDensities D;
  D.p = p;
  const Rat P(p);
  const Rat p4 = P * P * P * P;
  const Rat unram = (P - 1) * (P - 1) * P * (P + 1) / p4;
  D.mu[0] = 0;
  D.mu[1] = (P - 1) * (P - 1) * (P + 1) / (p4 * P);
  D.mu[2] = (P - 1) * (P - 1) * (P + 1) / p4;
  D.mu[3] = ratio(unram, 6);
  D.mu[4] = ratio(unram, 2);
  D.mu[5] = ratio(unram, 3);
  const Rat p2m1 = P * P - 1;
  D.hat_u_lambda_p = (P - 1) * p2m1 / p4;
  D.hat_u_lambda_p_squared = p2m1 * p2m1 / p4;
  D.hat_u_theta_p_squared = p2m1 * p2m1 / p4;
  return D;
}

}  // namespace cubic

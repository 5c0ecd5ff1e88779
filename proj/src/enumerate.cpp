// ============================================================================
// Enumeration of GL2(Z)-orbits of integral binary cubic forms by discriminant.
//
// Strategy per stratum:
//
//   disc > 0   Scan forms whose Hessian (P,Q,R) lies in the (inclusive) Gauss
//              box -P <= Q <= P <= R.  Every orbit contains such a form, the
//              windows below are provably complete, and a candidate's orbit
//              label is computed with canonical_form(); duplicates (boundary
//              ties, the finitely many Hessian automorphs) disappear in a
//              sort-unique pass.
//
//   disc < 0,  Scan Mathews-reduced forms directly.  The reduced position is
//   irreducible unique in each SL2(Z)-class and mirror-symmetric across the
//              GL2(Z)-orbit, so emitting exactly the lexicographically
//              smaller of f and its mirror visits each orbit once with no
//              dedup memory.  Stabilizers are trivial in this stratum.
//
//   disc < 0,  Reducible forms with negative discriminant have a unique
//   reducible  rational root; the cusp normal form (0, A, B, C) with A >= 1,
//              0 <= B <= A, and A x^2 + B x y + C y^2 positive definite is a
//              complete and repetition-free set of representatives, scanned
//              by direct loops.  The stabilizer is 2 exactly when B is 0 or
//              A, else 1.
//
// All window endpoints are computed in double precision with generous slack
// and every surviving candidate is re-checked with exact integer arithmetic,
// so floating point can only cost a few wasted iterations, never an orbit.
// ============================================================================

#include "cubicount/enumerate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <utility>

#include "cubicount/reduce.hpp"

namespace cubic {

namespace {

i64 isqrt_floor(i64 n) {
    if (n < 0) throw std::invalid_argument("isqrt_floor: negative argument");
    i64 r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

// Certified irreducibility test, cheap path first.  A cubic form with a
// rational linear factor keeps a projective root modulo every prime p that
// does not divide its content, so "no root in P^1(F_p)" for a single prime
// with nonzero reduction certifies irreducibility over Q.  Forms that have a
// root modulo each small prime fall through to the exact rational root
// search.
bool is_irreducible_screened(const BinaryCubicForm& f) {
    static const int primes[4] = {2, 3, 5, 7};
    for (int p : primes) {
        const i64 am = mod_pos(f.a, p);
        const i64 bm = mod_pos(f.b, p);
        const i64 cm = mod_pos(f.c, p);
        const i64 dm = mod_pos(f.d, p);
        if (am == 0 && bm == 0 && cm == 0 && dm == 0) continue;  // inconclusive
        bool has_root = (am == 0);  // the point (1:0)
        for (i64 t = 0; !has_root && t < p; ++t) {
            const i64 v = ((am * t + bm) * t + cm) % p * t % p;
            if ((v + dm) % p == 0) has_root = true;
        }
        if (!has_root) return true;
    }
    return rational_roots(f).empty();
}

// --------------------------------------------------------------------------
// Stratum 1: disc > 0 (Hessian scan).
//
// Let H_f = (P, Q, R) = (b^2 - 3ac, bc - 9ad, c^2 - 3bd), a positive definite
// quadratic with disc(H) = Q^2 - 4PR = -3 disc(f).  For a Gauss-box Hessian
// (-P <= Q <= P <= R) with 0 < disc(f) < X:
//
//   P bound:   4P^2 <= 4PR = 3 disc + Q^2 <= 3 disc + P^2, so P^2 <= disc,
//              i.e. 1 <= P <= sqrt(disc) < sqrt(X).
//   a bound:   the covariant syzygy 4 H^3 = G^2 + 27 disc f^2 evaluated at
//              (1,0) gives 27 disc a^2 <= 4P^3 <= 4 disc^{3/2}, so
//              |a| <= (2/3^{3/2}) disc^{1/4}.  (Checked numerically: for
//              (1,0,-1,0), disc 4, P 3: 108 = 0 + 27*4; for (1,1,-2,-1),
//              disc 49, P 7: 1372 = 49 + 27*49.)
//   b bound:   R = (bQ - cP)/(3a) for a != 0 (an exact identity among the
//              covariants), so P <= R and |Q| <= P force
//              3aP <= bQ - cP <= |b|P - cP, i.e. c <= |b| - 3a; combined
//              with c >= (b^2 - sqrt(X))/(3a) from P <= sqrt(X) this needs
//              b^2 - 3a|b| + 9a^2 - sqrt(X) <= 0, giving
//              |b| <= (3a + sqrt(4 sqrt(X) - 27a^2))/2.
//   c window:  1 <= P = b^2 - 3ac <= Pmax pins c to an interval.
//   d window:  |Q| = |bc - 9ad| <= P pins d to an interval.
//
// Negating a form fixes its Hessian, so every orbit has a Gauss-box
// representative with a >= 0; the a = 0 branch (P = b^2, Q = bc, R = c^2-3bd)
// is scanned separately with b >= 1 (negation again), |c| <= b from |Q| <= P,
// and d from P <= R <= (3 disc + Q^2)/(4P) < (3X + Q^2)/(4P).
// --------------------------------------------------------------------------

void totally_real_candidates_for_a(i64 a, i64 X, std::vector<BinaryCubicForm>& out) {
    const i64 Pmax = isqrt_floor(X - 1);
    const double sqrtX = std::sqrt(static_cast<double>(X));
    if (a == 0) {
        for (i64 b = 1; b * b <= Pmax; ++b) {
            const i64 P = b * b;
            for (i64 c = -b; c <= b; ++c) {
                const i64 Q = b * c;
                const i64 Rmax = (3 * (X - 1) + Q * Q) / (4 * P);
                if (Rmax < P) continue;
                const i64 dlo = ceil_div(c * c - Rmax, 3 * b);
                const i64 dhi = floor_div(c * c - P, 3 * b);
                for (i64 d = dlo; d <= dhi; ++d) {
                    const BinaryCubicForm f{0, b, c, d};
                    const i64 R = c * c - 3 * b * d;
                    if (R < P || Q > P || Q < -P) continue;
                    const i128 disc = discriminant(f);
                    if (disc <= 0 || disc >= X) continue;
                    out.push_back(canonical_form(f));
                }
            }
        }
        return;
    }
    const double rad = 4.0 * sqrtX - 27.0 * static_cast<double>(a) * static_cast<double>(a);
    if (rad < 0.0) return;
    const i64 bmax = static_cast<i64>((3.0 * static_cast<double>(a) + std::sqrt(rad)) / 2.0) + 1;
    for (i64 b = -bmax; b <= bmax; ++b) {
        const i64 clo = ceil_div(b * b - Pmax, 3 * a);
        const i64 chi = floor_div(b * b - 1, 3 * a);
        for (i64 c = clo; c <= chi; ++c) {
            const i64 P = b * b - 3 * a * c;
            const i64 bc = b * c;
            const i64 dlo = ceil_div(bc - P, 9 * a);
            const i64 dhi = floor_div(bc + P, 9 * a);
            for (i64 d = dlo; d <= dhi; ++d) {
                const i64 Q = bc - 9 * a * d;
                if (Q > P || Q < -P) continue;
                const i128 R = checked_sub(checked_mul(c, c), checked_mul(3, checked_mul(b, d)));
                if (R < P) continue;
                const BinaryCubicForm f{a, b, c, d};
                const i128 disc = discriminant(f);
                if (disc <= 0 || disc >= X) continue;
                out.push_back(canonical_form(f));
            }
        }
    }
}

// --------------------------------------------------------------------------
// Stratum 2: disc < 0, irreducible (Mathews scan).
//
// Write f = (x - theta y) q(x, y) over R with q = A x^2 + B x y + C y^2 the
// positive definite quadratic attached to the complex pair, A = a.  Then
//
//   disc(f) = disc(q) * q(theta, 1)^2,     q(theta, 1) = f'(theta) > 0,
//
// and Mathews-reduced means a > 0, -a <= B = b + a theta <= a (strictly, in
// the exact tests), and A <= C.  Writing D = 4AC - B^2 = |disc(q)|:
//
//   a bound:     D >= 3a^2 and q(theta,1) >= D/(4a) give
//                |disc| >= D^3/(16 a^2) >= 27 a^4 / 16, so
//                a <= (2/3^{3/4}) |disc|^{1/4}.
//   theta bound: q(theta,1) = |disc|^{1/2} / D^{1/2} <= sqrt(X/3)/a, while
//                q(t,1) >= a(t^2 - |t| + 1), so theta^2 - |theta| + 1 <= W
//                with W = sqrt(X) / (sqrt(3) a^2), i.e.
//                |theta| <= (1 + sqrt(4W - 3))/2 (or simply < 2 when W is
//                below 3/4).
//   b window:    b = B - a theta with |B| <= a, so |b| <= a (1 + theta_max).
//   c window:    f'(theta) = 3a theta^2 + 2b theta + c lies in
//                (0, sqrt(X/3)/a], and theta lies in the interval
//                [-b/a - 1, -b/a + 1] forced by the B condition, so c is
//                within [min g, max g + sqrt(X/3)/a] where
//                g(s) = -b^2/a + 4bs - 3as^2 on s in [-1, 1] (concave, so
//                extremes at the endpoints and, for the max, the vertex
//                s* = 2b/(3a)).
//   d windows:   for fixed (a,b,c), d = -phi(theta) with
//                phi(t) = a t^3 + b t^2 + c t, strictly decreasing in theta
//                on valid forms (d/dtheta = -f'(theta) < 0).  Three cuts:
//                  (i)  B condition: theta in [(-a-b)/a, (a-b)/a] maps to a
//                       d interval;
//                  (ii) disc(d) = -27a^2 d^2 + (18abc - 4b^3) d
//                       + (b^2c^2 - 4ac^3) is a downward parabola in d, and
//                       -X < disc < 0 is one or two explicit intervals;
//                  (iii) A <= C fails exactly for theta strictly between the
//                       roots of a t^2 + b t + (c - a), excluding an explicit
//                       d interval.
//                The intersection (i) and (ii) minus (iii), with +-2 slack on
//                every endpoint, is enumerated and exact-filtered.
//
// The scan region is symmetric under mirroring (b, d) -> (-b, -d), and every
// window evaluation commutes exactly with that negation in floating point, so
// each orbit's two Mathews representatives are both visited; emitting only
// the lexicographically smaller yields exactly one record per orbit.
// --------------------------------------------------------------------------

struct DIntervals {
    // At most four [lo, hi] integer ranges after the cuts described above.
    std::pair<i64, i64> seg[4];
    int n = 0;
    void add(double lo, double hi, i64 clamp_lo, i64 clamp_hi) {
        if (!(lo <= hi) || n == 4) return;
        // Clamp in double space before casting so an extreme window endpoint
        // can never overflow the integer conversion.
        const double flo = std::max(std::floor(lo), static_cast<double>(clamp_lo));
        const double fhi = std::min(std::ceil(hi), static_cast<double>(clamp_hi));
        if (flo > fhi) return;
        const i64 L = static_cast<i64>(flo), H = static_cast<i64>(fhi);
        // Segments arrive in increasing order; merge when the slack makes
        // them touch, so no integer d is visited twice.
        if (n > 0 && L <= seg[n - 1].second + 1) {
            seg[n - 1].second = std::max(seg[n - 1].second, H);
            return;
        }
        seg[n++] = {L, H};
    }
};

void complex_irreducible_for_a(i64 a, i64 X, std::vector<OrbitRecord>& out) {
    const double ad = static_cast<double>(a);
    const double sqrtX = std::sqrt(static_cast<double>(X));
    const double W = sqrtX / (std::sqrt(3.0) * ad * ad);
    const double theta_max = std::max(2.0, (1.0 + std::sqrt(std::max(1.0, 4.0 * W - 3.0))) / 2.0);
    const double fprime_cap = std::sqrt(static_cast<double>(X) / 3.0) / ad;
    const i64 bmax = static_cast<i64>(ad * (1.0 + theta_max)) + 1;
    // Generous clamp for d from |phi| on the theta interval; exact filters
    // make over-coverage harmless.
    for (i64 b = -bmax; b <= bmax; ++b) {
        const double bd = static_cast<double>(b);
        // Range of g(s) = -b^2/a + 4bs - 3as^2 on [-1, 1].
        const double g_m1 = -bd * bd / ad - 4.0 * bd - 3.0 * ad;
        const double g_p1 = -bd * bd / ad + 4.0 * bd - 3.0 * ad;
        double gmin = std::min(g_m1, g_p1);
        double gmax = std::max(g_m1, g_p1);
        const double svert = 2.0 * bd / (3.0 * ad);
        if (-1.0 <= svert && svert <= 1.0) gmax = std::max(gmax, bd * bd / (3.0 * ad));
        const i64 clo = static_cast<i64>(std::floor(gmin)) - 1;
        const i64 chi = static_cast<i64>(std::ceil(gmax + fprime_cap)) + 1;
        const double tB_lo = (-ad - bd) / ad;
        const double tB_hi = (ad - bd) / ad;
        for (i64 c = clo; c <= chi; ++c) {
            const double cd = static_cast<double>(c);
            const auto phi = [&](double t) { return ((ad * t + bd) * t + cd) * t; };
            // Cut (i): the B-condition window, decreasing map d = -phi.
            const double dB_lo = -phi(tB_hi) - 2.0;
            const double dB_hi = -phi(tB_lo) + 2.0;
            if (!(dB_lo <= dB_hi)) continue;
            // Cut (ii): discriminant parabola in d.
            const double beta = 18.0 * ad * bd * cd - 4.0 * bd * bd * bd;
            const double gamma = bd * bd * cd * cd - 4.0 * ad * cd * cd * cd;
            const double a2 = 27.0 * ad * ad;
            const double radX = beta * beta + 4.0 * a2 * (gamma + static_cast<double>(X));
            if (radX < 0.0) continue;  // disc(d) never exceeds -X: no valid d
            const double sX = std::sqrt(radX);
            const double d_lo = (beta - sX) / (2.0 * a2);
            const double d_hi = (beta + sX) / (2.0 * a2);
            const double rad0 = beta * beta + 4.0 * a2 * gamma;
            DIntervals iv;
            const i64 clamp_lo = static_cast<i64>(std::floor(dB_lo));
            const i64 clamp_hi = static_cast<i64>(std::ceil(dB_hi));
            if (rad0 >= 0.0) {
                const double s0 = std::sqrt(rad0);
                const double d0_lo = (beta - s0) / (2.0 * a2);
                const double d0_hi = (beta + s0) / (2.0 * a2);
                iv.add(d_lo - 2.0, d0_lo + 2.0, clamp_lo, clamp_hi);
                iv.add(d0_hi - 2.0, d_hi + 2.0, clamp_lo, clamp_hi);
            } else {
                iv.add(d_lo - 2.0, d_hi + 2.0, clamp_lo, clamp_hi);
            }
            // Cut (iii): remove the open theta interval where A > C, mapped
            // to d and shrunk by 2 to stay complete.
            double ex_lo = 1.0, ex_hi = 0.0;
            const double discG = bd * bd - 4.0 * ad * (cd - ad);
            if (discG > 0.0) {
                const double sg = std::sqrt(discG);
                const double r_minus = (-bd - sg) / (2.0 * ad);
                const double r_plus = (-bd + sg) / (2.0 * ad);
                ex_lo = -phi(r_plus) + 2.0;
                ex_hi = -phi(r_minus) - 2.0;
            }
            for (int k = 0; k < iv.n; ++k) {
                for (i64 d = iv.seg[k].first; d <= iv.seg[k].second; ++d) {
                    if (ex_lo <= static_cast<double>(d) && static_cast<double>(d) <= ex_hi) continue;
                    const BinaryCubicForm f{a, b, c, d};
                    const i128 disc = discriminant(f);
                    if (disc >= 0 || disc <= -static_cast<i128>(X)) continue;
                    const BinaryCubicForm fm = f.mirrored();
                    if (fm < f) continue;  // the mirror visit emits this orbit
                    if (!is_irreducible_screened(f)) continue;
                    if (!is_mathews_reduced(f)) continue;
                    out.push_back(OrbitRecord{f, checked_narrow(disc), 1, true});
                }
            }
        }
    }
}

// --------------------------------------------------------------------------
// Stratum 3: disc < 0, reducible (cusp normal form).
//
// Representatives (0, A, B, C): A >= 1, 0 <= B <= A, A x^2 + B x y + C y^2
// positive definite (so 4AC > B^2, C >= 1), one per orbit, with
// disc = -A^2 (4AC - B^2).  Windows are exact:
//   A <= sqrt(X-1)            since |disc| >= A^2;
//   C >= floor(B^2/(4A)) + 1  from definiteness;
//   C <= (X - 1 + A^2 B^2) / (4 A^3)  from |disc| <= X-1.
// Stabilizer is 2 exactly on the B in {0, A} boundary (proved and tested in
// the reduction layer), 1 in the interior.
// --------------------------------------------------------------------------

void complex_reducible_for_A(i64 A, i64 X, std::vector<OrbitRecord>& out) {
    for (i64 B = 0; B <= A; ++B) {
        const i64 Cmin = B * B / (4 * A) + 1;
        const i128 num = static_cast<i128>(X) - 1 + checked_mul(checked_mul(A, A), checked_mul(B, B));
        const i128 den = checked_mul(4, checked_mul(A, checked_mul(A, A)));
        const i64 Cmax = checked_narrow(num / den);
        for (i64 C = Cmin; C <= Cmax; ++C) {
            const BinaryCubicForm f{0, A, B, C};
            const i128 disc = discriminant(f);
            if (disc >= 0 || disc <= -static_cast<i128>(X)) continue;
            const int stab = (B == 0 || B == A) ? 2 : 1;
            out.push_back(OrbitRecord{f, checked_narrow(disc), stab, false});
        }
    }
}

// --------------------------------------------------------------------------
// Dispatch, parallel partition by leading coefficient, deterministic merge.
// --------------------------------------------------------------------------

bool record_before(const OrbitRecord& x, const OrbitRecord& y) {
    const i64 ax = std::llabs(x.discriminant), ay = std::llabs(y.discriminant);
    if (ax != ay) return ax < ay;
    return x.representative < y.representative;
}

std::vector<OrbitRecord> enumerate_impl(i64 X, int sign, bool parallel) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("enumerate_orbits: sign must be +1 or -1");
    if (X < 1) throw std::invalid_argument("enumerate_orbits: X must be positive");
    if (X > kMaxEnumerationBound)
        throw std::invalid_argument("enumerate_orbits: X exceeds the configured overflow-safe bound");

    std::vector<OrbitRecord> records;
    if (sign == 1) {
        const double Xd = static_cast<double>(X);
        const i64 amax = static_cast<i64>(2.0 * std::pow(Xd, 0.25) / std::sqrt(27.0)) + 1;
        std::vector<BinaryCubicForm> reps;
#pragma omp parallel if (parallel)
        {
            std::vector<BinaryCubicForm> local;
#pragma omp for schedule(dynamic) nowait
            for (i64 a = 0; a <= amax; ++a) totally_real_candidates_for_a(a, X, local);
#pragma omp critical
            reps.insert(reps.end(), local.begin(), local.end());
        }
        std::sort(reps.begin(), reps.end());
        reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
        records.reserve(reps.size());
        for (const BinaryCubicForm& f : reps) {
            const i64 disc = checked_narrow(discriminant(f));
            records.push_back(OrbitRecord{f, disc, stabilizer_order(f), is_irreducible_screened(f)});
        }
    } else {
        const double Xd = static_cast<double>(X);
        const i64 amax = static_cast<i64>(2.0 / std::pow(3.0, 0.75) * std::pow(Xd, 0.25)) + 1;
        const i64 Amax = isqrt_floor(X - 1);
#pragma omp parallel if (parallel)
        {
            std::vector<OrbitRecord> local;
#pragma omp for schedule(dynamic) nowait
            for (i64 a = 1; a <= amax; ++a) complex_irreducible_for_a(a, X, local);
#pragma omp for schedule(dynamic) nowait
            for (i64 A = 1; A <= Amax; ++A) complex_reducible_for_A(A, X, local);
#pragma omp critical
            records.insert(records.end(), local.begin(), local.end());
        }
    }
    std::sort(records.begin(), records.end(), record_before);
    return records;
}

}  // namespace

std::vector<OrbitRecord> enumerate_orbits(i64 X, int sign) { return enumerate_impl(X, sign, true); }

std::vector<OrbitRecord> enumerate_orbits_serial(i64 X, int sign) { return enumerate_impl(X, sign, false); }

}  // namespace cubic

#pragma once
// ============================================================================
// Archimedean layer: gamma factors, the Mellin–Barnes smoothing kernels
// V^{±}(y), approximate functional equations (AFE) for the central value
// L(1/2, rho_K) of the degree-2 Artin factor of a cubic field, the truncated
// sum S(f) attached to an arbitrary irreducible integral binary cubic form,
// the finite correction D(1/2, f) = L(1/2, rho_K) * prod_{p | ind} E_p(1/2),
// and the unbalanced AFE identity that ties them together for non-maximal
// cubic orders.
//
// Gamma factors.  With
//     Gamma_R(s) = pi^{-s/2} Gamma(s/2),   Gamma_C(s) = 2 (2 pi)^{-s} Gamma(s),
// the degree-2 Artin L-function L(s, rho_K) attached to a cubic field K of
// discriminant Delta completes to an entire function invariant under
// s -> 1 - s with archimedean factor
//     gamma^{+}(s) = Gamma_R(s)^2        when Delta > 0 (totally real),
//     gamma^{-}(s) = Gamma_C(s)          when Delta < 0 (complex).
// The Dedekind zeta function zeta_K = zeta * L(., rho_K) completes with one
// more Gamma_R factor (degree 3) and has simple poles at s = 0, 1.
//
// Smoothing kernel.  For an even analytic G with G(0) = 1 that keeps the
// contour integrals absolutely convergent,
//     V(y) = (1/2 pi i) Int_{Re u = c}  y^{-u} G(u)
//                 [gamma(1/2 + u) / gamma(1/2)]  du / u          (c > 0),
// a smoothed cutoff: V(0+) = 1, and V decays faster than any power.
// Two representations are kept:
//   * the "main" line Re u = 3/2, used for y >= 1, giving V(y) as
//     y^{-3/2} times a rapidly converging oscillatory integral;
//   * the "shifted" line Re u = -1/4, used for y < 1: moving the contour
//     across the simple pole at u = 0 (residue 1) gives
//     V(y) = 1 + y^{1/4} * (shifted-line integral), exposing V(0+) = 1
//     exactly and keeping full relative accuracy near y = 0.
// The nearest singularities of the integrand are u = 0 and the gamma pole
// at u = -1/2, so both lines are pole-free and the shift is legitimate.
//
// Quadrature certificates.  Each line integral is evaluated by an infinite
// trapezoid rule with step h and truncation height T.  The truncation tail
// is bounded RIGOROUSLY via the monotone envelope
//     |Gamma(x + i t)| <= Gamma(x) * prod_{n=0}^{N-1} (1 + t^2/(x+n)^2)^{-1/2},
// an exact consequence of |Gamma(x+it)|^2 = Gamma(x)^2 prod_{n>=0} (...)
// (each omitted factor is <= 1), integrated by decreasing upper sums plus a
// closed-form power-law remainder (1 + t^2/(x+n)^2)^{-1/2} <= (x+n)/t.  The
// discretization error is certified empirically by step-halving agreement on
// probe points; both numbers are exposed through error_bound(y).
//
// Decay ladder.  Shifting the contour to Re u = c gives the rigorous bound
// |V(y)| <= M_c * y^{-c} with M_c the envelope mass of the line; the kernel
// precomputes (c, log M_c) for a ladder of abscissas and exposes
//     decay_bound(y)        = min_c M_c y^{-c}                  >= |V(y)|,
//     tail_sum_bound(s,N,r) >= sum_{n > N} d_r(n) n^{-1/2} |V(s n)|,
// the latter via the elementary divisor-sum inequality
//     sum_{n > N} d_r(n) n^{-a} <= N^{1-a} (log N + 1 + zeta(a))^{r-1}/(a-1)
// valid for a > 1, N >= 1, r in {1, 2, 3}.  These drive certified
// truncation of all AFE sums.
//
// G choices.  G = 1 (default); G(u) = cos(pi u / 8)^{-2} (poles at u = +-4,
// which cap the usable ladder below 4 — kept, but excluded from bulk
// certified runs; see the note on GChoice); and G(u) = (1 - 4u^2)^2, entire
// with double zeros at u = +-1/2.  The last choice kills the residues of the
// gamma poles at u = -1/2, so V(y) - 1 vanishes to a higher power of y as
// y -> 0, and — crucially — cancels the simple poles of the completed
// Dedekind zeta at s in {0, 1} in the degree-3 functional-equation argument,
// giving the residue-free identity
//     zeta_K(1/2) = 2 sum_n a_K(n) n^{-1/2} W(n / |Delta|^{1/2}),
// a_K = 1 * lambda (Dirichlet convolution), W the degree-3 kernel.  This is
// an independent route to the central value requiring no class-number or
// regulator data, used to cross-check afe_central_value through
// zeta(1/2) * L(1/2, rho_K) = zeta_K(1/2).
//
// Central values.  For a maximal irreducible form f of discriminant Delta,
//     L(1/2, rho_K) = 2 sum_{n >= 1} lambda_n(f) n^{-1/2} V(n/|Delta|^{1/2}).
// For arbitrary irreducible f with index ind = ind(f) and rad = rad(ind),
//     S(f)      = sum_n lambda_n(f) n^{-1/2} V(n/|Delta(f)|^{1/2}),
//     D(1/2, f) = L(1/2, rho_{K_f}) * prod_{p | ind} E_p(1/2, f),
// and the unbalanced approximate functional equation states
//     S(f) = D(1/2, f)
//          - sum_{k} (e_k(f) k^{1/2} / rad)
//                sum_n lambda_n(f) n^{-1/2} V(ind^2 k n / (rad^2 |Delta|^{1/2})),
// where e_k are the coefficients of E(1/2 - s)/E(1/2 + s) expanded at the
// central point (see artin.hpp).  For maximal f the k-sum is exactly the
// k = 1 term, which equals S(f), so the identity collapses to 2 S = D = L;
// unbalanced_afe_residual reproduces this cancellation exactly (bit-for-bit
// zero) by routing every sum through the same truncation rule.
//
// All kernels and weights are immutable after construction; every evaluation
// method is const and thread-safe.
// ============================================================================

#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cubicount/common.hpp"
#include "cubicount/forms.hpp"

namespace cubic {

using Cplx = std::complex<double>;

// ----------------------------------------------------------------------------
// Classical special functions.
// ----------------------------------------------------------------------------

// log Gamma(z), principal branch: Lanczos approximation (g = 7, 9 terms) for
// Re z >= 1/2, reflection formula otherwise.  Relative accuracy ~1e-14 away
// from the poles z = 0, -1, -2, ...
Cplx log_gamma(Cplx z);

// Riemann zeta at real s != 1 by Euler–Maclaurin summation (N = 64 initial
// terms, Bernoulli corrections through B_20); absolute accuracy deep below
// 1e-15 for |s| <= 50.  Throws std::invalid_argument at the pole s = 1.
double real_zeta(double s);

// log Gamma_R(s) = log( pi^{-s/2} Gamma(s/2) ),
// log Gamma_C(s) = log( 2 (2 pi)^{-s} Gamma(s) ).
Cplx log_gamma_R(Cplx s);
Cplx log_gamma_C(Cplx s);

// Archimedean factor of the degree-2 functional equation:
//   sign = +1:  gamma^{+}(s) = Gamma_R(s)^2 = pi^{-s} Gamma(s/2)^2
//   sign = -1:  gamma^{-}(s) = Gamma_C(s)   = 2 (2 pi)^{-s} Gamma(s)
// This is L_infinity(s, rho_K) for a cubic field of discriminant sign `sign`.
struct GammaFactor {
  int sign = +1;

  Cplx log_eval(Cplx s) const;
  Cplx eval(Cplx s) const;
};

// ----------------------------------------------------------------------------
// The smoothing kernel V and its certificates.
// ----------------------------------------------------------------------------

enum class GChoice {
  // G(u) = 1.  Default.  For sign -1 the kernel has the exact closed form
  // V(y) = erfc(sqrt(2 pi y)); for sign +1, V(y) = (2^{3/2}/Gamma(1/4)^2) *
  // Int_{2 pi y}^{infty} w^{-1/2} K_0(w) dw.  Both are used as test oracles.
  One,
  // G(u) = cos(pi u / 8)^{-2}.  Even, G(0) = 1, poles at u = +-4: the decay
  // ladder is capped below 4, so certified n-sum tails converge only at a
  // relaxed target; kept as an independent cross-check kernel.
  InverseCosSquare,
  // G(u) = (1 - 4u^2)^2.  Entire, even, G(0) = 1, double zeros at +-1/2
  // killing the gamma-pole residues there (V - 1 = O(y^{3/2}) instead of
  // O(y^{1/2})); required for the degree-3 Dedekind kernel.
  QuarticHalfZero,
};

// Immutable precomputed contour-integral evaluator for V(y).
class AfeKernel {
 public:
  // Degree-2 kernel for gamma^{sign} with the given G.
  static AfeKernel standard(int sign, GChoice g = GChoice::One);
  // Degree-3 kernel for the completed Dedekind zeta, gamma factor
  // Gamma_R(s) * gamma^{sign}(s); G is forced to QuarticHalfZero so the
  // contour shift crosses no pole of the completed zeta.
  static AfeKernel dedekind(int sign);

  int sign() const { return sign_; }
  int degree() const { return degree_; }
  GChoice g_choice() const { return g_; }

  // V(y) for y > 0 (y < 1 via the shifted line, y >= 1 via the main line).
  double V(double y) const;

  // Certified bound on |computed V(y) - true V(y)|: truncation tail +
  // step-halving agreement + roundoff envelope, scaled by the line prefactor.
  double error_bound(double y) const;

  // Rigorous envelope  decay_bound(y) >= |V(y)|  (min over the ladder, and
  // 1 + y^{1/4} * shifted-line mass for y < 1).
  double decay_bound(double y) const;

  // Rigorous bound on sum_{n > nmin} d_r(n) n^{-1/2} |V(scale n)|.
  double tail_sum_bound(double scale, double nmin, int divisor_order = 2) const;

  // Smallest cutoff N with tail_sum_bound(scale, N, r) <= target.  Throws
  // std::runtime_error (a precision error, with diagnostics) if no N below
  // an internal cap certifies.
  i64 cutoff(double scale, double target, int divisor_order = 2) const;

  // Largest abscissa of the decay ladder (capped at 3.5 for the cos^{-2}
  // choice, whose poles at u = +-4 block further contour shifts).
  double max_ladder_abscissa() const;

  // Rigorous bound on sum_{k > cap} k * [sum_n d(n) n^{-1/2} |V(base k n)|]
  //   <= min_{c in ladder, c > 2} M_c zeta(1/2+c)^2 base^{-c} cap^{2-c}/(c-2),
  // the k-tail workhorse for the unbalanced AFE correction.
  double k_tail_poly_bound(double base, double cap) const;

  // The chosen G, and the Mellin transform of V:
  //   Int_0^infty V(y) y^{s-1} dy = G(s) gamma(1/2 + s) / (s gamma(1/2)),
  // valid for Re s > 0.
  Cplx g_function(Cplx u) const;
  Cplx mellin_formula(Cplx s) const;

  // The two independent contour representations (agree for all y > 0; the
  // dispatcher picks main for y >= 1, shifted for y < 1).
  double V_via_main(double y) const;
  double V_via_shifted(double y) const;

  // Diagnostic two-sided complex evaluation of the main line without using
  // conjugate symmetry; returns (real part, |imaginary part|).  The
  // imaginary part must vanish to roundoff.
  std::pair<double, double> V_complex_twosided(double y) const;

  // Quadrature diagnostics.
  double step() const { return main_.h; }
  double height() const { return main_.h * static_cast<double>(main_.q.size()); }
  double tail_bound_main() const { return main_.tail; }
  double tail_bound_shifted() const { return shifted_.tail; }
  double refinement_agreement() const { return agreement_; }

 private:
  struct Component {  // Gamma(a + b u)^mult
    double a = 0, b = 0;
    int mult = 1;
  };
  struct Line {
    double c = 0;            // abscissa
    double h = 0;            // step
    double q0 = 0;           // t = 0 node, premultiplied by h/(2 pi)
    std::vector<Cplx> q;     // t = j h nodes (j >= 1), premultiplied by h/pi
    double tail = 0;         // certified truncation remainder
    double mass = 0;         // |q0| + sum |q_j|  (roundoff envelope)
  };

  AfeKernel() = default;
  void build();

  Cplx r_log(Cplx u) const;            // log( gamma(1/2+u) / gamma(1/2) )
  double g_envelope(double c, double t) const;    // >= |G(c + i t)|, monotone boxes
  double gamma_line_envelope(double c, double t) const;  // >= |exp(r_log)| on the line
  double line_tail_bound(double c, double t_from) const;
  double line_mass_log(double c) const;            // log M_c
  Line build_line(double c, double h, double tail_target) const;
  double eval_line(const Line& line, double y) const;   // the bracketed sum * y^{-c}

  int sign_ = +1;
  int degree_ = 2;
  GChoice g_ = GChoice::One;
  double k0_ = 0, k1_ = 0;             // log gamma(1/2+u) = k0 + k1 u + sum mult*logGamma(a+bu)
  double log_gamma_half_ = 0;          // log gamma(1/2)  (real)
  std::vector<Component> comps_;
  Line main_, shifted_;
  double agreement_ = 0;
  double shifted_mass_log_ = 0;                    // log of the Re u = -1/4 envelope mass
  std::vector<std::pair<double, double>> ladder_;  // (c, log M_c)
};

// Free-function form with an explicit sign check (throws on mismatch).
double V_kernel(double y, int sign, const AfeKernel& kernel);

// ----------------------------------------------------------------------------
// Smooth weight Psi.
// ----------------------------------------------------------------------------

// The normalized C^infty bump supported on [1, 2]:
//   Psi(t) = norm * exp(-1 / (1 - (2t - 3)^2))  on (1, 2),  0 elsewhere,
// with norm fixed so that Int Psi = Mellin(1) = 1.  The Mellin transform
//   Mellin(s) = Int_1^2 Psi(t) t^{s-1} dt
// is computed by composite trapezoid on a fixed 1025-node grid (trapezoid
// converges super-algebraically for smooth compactly supported integrands);
// the stored certificate is the largest fine-vs-half-resolution discrepancy
// over probe points spanning the strip -1 <= Re s <= 3.
class SmoothWeight {
 public:
  SmoothWeight();

  double operator()(double t) const;   // Psi(t)
  double support_min() const { return 1.0; }
  double support_max() const { return 2.0; }

  Cplx mellin(Cplx s) const;           // tilde-Psi(s)
  double mellin_prime_at_1() const;    // tilde-Psi'(1) = Int Psi(t) log t dt
  double mellin_error_bound() const;   // certified quadrature error

  // H_y(t) = Psi(t) V(y / sqrt(t)); the smoothed-count impulse function.
  double h_y(double y, double t, const AfeKernel& kernel) const;
  // g(y) = Int_0^infty H_y(t) dt = Int_1^2 Psi(t) V(y / sqrt(t)) dt, whose
  // Mellin transform is tilde-Psi(1 + s/2) tilde-V(s) with a single simple
  // pole at s = 0 on Re s > -1/2.
  double g_of_y(double y, const AfeKernel& kernel) const;

 private:
  double norm_ = 1.0;
  double mellin_err_ = 0.0;
  std::vector<double> psi_;            // values on t_j = 1 + j/1024
};

// ----------------------------------------------------------------------------
// AFE evaluation of central values.
// ----------------------------------------------------------------------------

struct CentralValue {
  double value = 0;        // L(1/2, rho_K)
  double tail_bound = 0;   // certified truncation + quadrature error
  i64 cutoff = 0;          // number of Dirichlet coefficients used
  bool converged = false;  // tail_bound <= 1e-8
};

// L(1/2, rho_K) = 2 sum_n lambda_n(f) n^{-1/2} V(n / sqrt|Delta|) for a
// MAXIMAL irreducible form f; throws std::invalid_argument for reducible or
// non-maximal input (use S_of_f for the latter) and on kernel sign/degree
// mismatch.  tail_target is the certified truncation target for the n-sum.
CentralValue afe_central_value_detailed(const BinaryCubicForm& f,
                                        const AfeKernel& kernel,
                                        double tail_target = 1e-12);
double afe_central_value(const BinaryCubicForm& f, const AfeKernel& kernel);

struct SfValue {
  double value = 0;
  double tail_bound = 0;
  i64 cutoff = 0;
};

// S(f) = sum_n lambda_n(f) n^{-1/2} V(n / sqrt|Delta(f)|) for any
// irreducible f (maximal or not).  For maximal f, 2 S(f) = L(1/2, rho_K).
SfValue S_of_f(const BinaryCubicForm& f, const AfeKernel& kernel,
               double tail_target = 1e-12);

struct DHalfValue {
  double value = 0;          // D(1/2, f) = l_half * e_half
  double l_half = 0;         // L(1/2, rho_{K_f})
  double e_half = 0;         // prod_{p | ind} E_p(1/2, f), exact in p^{-1/2}
  bool e_half_positive = true;
  double tail_bound = 0;     // inherited from the L evaluation
};

// D(1/2, f): the L-value of the maximalization times the exact finite Euler
// correction at the index primes.  sign(D) = sign(L) whenever e_half > 0;
// e_half_positive flags the (never yet observed) contrary case.
DHalfValue D_half(const BinaryCubicForm& f, const AfeKernel& kernel);

struct UnbalancedResidual {
  double residual = 0;         // S - D + correction  (identically 0 in exact arithmetic)
  double s_value = 0;          // S(f)
  double d_value = 0;          // D(1/2, f)
  double correction = 0;       // sum_k (e_k sqrt(k)/rad) (inner n-sum)
  double certified_bound = 0;  // rigorous bound on |residual| from all truncations
};

// Evaluates both sides of the unbalanced approximate functional equation and
// returns the residual with a certified truncation bound.  M bounds the
// prime-power depth of the e_k expansion (coefficients beyond it are
// negligible and are absorbed into the certificate).  Throws a precision
// error (std::runtime_error) if any truncation cannot be certified.
UnbalancedResidual unbalanced_afe_residual(const BinaryCubicForm& f,
                                           const AfeKernel& kernel, int M = 40);

// zeta_K(1/2) by the residue-free degree-3 AFE (kernel must come from
// AfeKernel::dedekind with matching sign; f must be maximal irreducible):
//   zeta_K(1/2) = 2 sum_n a_K(n) n^{-1/2} W(n / sqrt|Delta|),  a_K = 1 * lambda.
double dedekind_zeta_central(const BinaryCubicForm& f, const AfeKernel& kernel);

}  // namespace cubic

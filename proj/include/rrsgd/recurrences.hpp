#pragma once

#include <functional>
#include <optional>

namespace rrsgd {

// Parameters of the non-asymptotic recursion
//   xi_{k+1} <= exp(-alpha/(k0+k+1)) xi_k + A/(k0+k+1)^{beta+1}.
struct ChungParams {
  double k0;     // > 0
  double alpha;  // > beta
  double beta;   // > 0
  double A;      // >= 0 (0 accepted as a boundary case)
  double xi0;    // >= 0
};

struct VariantExtension {
  double A3;     // >= 0
  double gamma;  // > 0, and < alpha
};

// Parameters of the two-parameter recursion
//   xi_1     <= exp(-alpha sum_{i=1}^n 1/(k0+i)) xi_0 + A1
//   xi_{k+1} <= exp(-alpha sum_{i=1}^n 1/(k0+nk+i) + eps/k^2) xi_k
//               + A2/(k0+n(k+1))^{beta+1} [+ A3/(k0+n(k+1))^{gamma+1}].
struct VariantParams {
  double k0;
  double alpha;
  double beta;
  double epsilon;  // > 0
  double A1;       // >= 0
  double A2;       // >= 0
  int n;           // >= 1
  double xi0;
  std::optional<VariantExtension> extension;
};

struct TheoremConstants {
  double a1 = 0.0;
  double a2 = 0.0;
  double b2 = 0.0;
  double b3 = 0.0;
};

// Compensated sum of 1/(k0 + from + i) for i = 1..count.
double inverse_linear_sum(double k0, double from, long count);

// Closed-form bound with the power-law leading factor.
double chung_bound(const ChungParams& p, int K);
// Sharper form with the exact exponential-sum leading factor;
// always <= chung_bound.
double chung_bound_tight(const ChungParams& p, int K);
// Extremal sequence: the recursion iterated with equality.
double recursion_oracle_chung(const ChungParams& p, int K);

double variant_bound(const VariantParams& p, int K);
double recursion_oracle_variant(const VariantParams& p, int K);

// variant_bound plus the extension tail terms; requires p.extension.
double extended_variant_bound(const VariantParams& p, int K);
double recursion_oracle_extended(const VariantParams& p, int K);

struct Bracket {
  double lower;
  double upper;
};

// Two-sided bracket for sum_{i=m}^{n} f(i) when f is monotone:
// non-decreasing:  integral + f(m) <= sum <= integral + f(n)
// non-increasing:  integral + f(n) <= sum <= integral + f(m).
// The integral uses the supplied antiderivative when given, otherwise
// adaptive Simpson quadrature to 1e-10.
Bracket integral_bracket(const std::function<double(double)>& f, int m, int n,
                         bool non_decreasing,
                         const std::function<double(double)>* antiderivative = nullptr);

// Sandwich for the decay product
//   prod_{j=ell}^{k} exp(-alpha sum_{i=1}^n 1/(k0+n(j-1)+i)).
Bracket product_a_bracket(double k0, double alpha, int ell, int k, int n);

// Explicit first-epoch / tail constants of the two main convergence bounds.
// `deduplicate_a1` drops the apparently typographical inner alpha^2 G^2
// factor from the printed a1 expression; the printed (larger) form is the
// default.
TheoremConstants theorem1_constants(double mu, double L, double G, int n,
                                    double alpha, bool deduplicate_a1 = false);
TheoremConstants theorem2_constants(double mu, double L, double G, int n,
                                    double alpha, bool deduplicate_a1 = false);

VariantParams theorem1_params(double mu, double L, double G, int n, double alpha,
                              double dist0, bool deduplicate_a1 = false);
VariantParams theorem2_params(double mu, double L, double G, int n, double alpha,
                              double dist0, bool deduplicate_a1 = false);

// Fully explicit right-hand sides of the two convergence bounds on
// E||y_K - x*||^2, composed from the lemma bounds above.
double theorem1_bound(double mu, double L, double G, int n, double alpha, int K,
                      double dist0, bool deduplicate_a1 = false);
double theorem2_bound(double mu, double L, double G, int n, double alpha, int K,
                      double dist0, bool deduplicate_a1 = false);

}  // namespace rrsgd

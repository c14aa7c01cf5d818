#include "rrsgd/recurrences.hpp"

#include <cmath>
#include <stdexcept>

namespace rrsgd {

namespace {

constexpr double kPiSqOver6 = 1.6449340668482264;  // sum 1/i^2

void check_chung(const ChungParams& p) {
  if (!(p.k0 > 0.0)) throw std::invalid_argument("ChungParams: k0 must be > 0");
  if (!(p.alpha > p.beta && p.beta > 0.0))
    throw std::invalid_argument("ChungParams: need alpha > beta > 0");
  if (!(p.A >= 0.0) || !(p.xi0 >= 0.0))
    throw std::invalid_argument("ChungParams: A and xi0 must be >= 0");
}

void check_variant(const VariantParams& p) {
  if (!(p.k0 > 0.0)) throw std::invalid_argument("VariantParams: k0 must be > 0");
  if (!(p.alpha > p.beta && p.beta > 0.0))
    throw std::invalid_argument("VariantParams: need alpha > beta > 0");
  if (!(p.epsilon > 0.0)) throw std::invalid_argument("VariantParams: epsilon must be > 0");
  if (!(p.A1 >= 0.0) || !(p.A2 >= 0.0) || !(p.xi0 >= 0.0))
    throw std::invalid_argument("VariantParams: A1, A2, xi0 must be >= 0");
  if (p.n < 1) throw std::invalid_argument("VariantParams: n must be >= 1");
  if (p.extension) {
    if (!(p.extension->A3 >= 0.0))
      throw std::invalid_argument("VariantParams: A3 must be >= 0");
    if (!(p.extension->gamma > 0.0 && p.extension->gamma < p.alpha))
      throw std::invalid_argument(
          "VariantParams: extension needs alpha > gamma > 0");
  }
}

void check_K(int K) {
  if (K < 1) throw std::invalid_argument("recurrence bound: K must be >= 1");
}

// Adaptive Simpson to abs tolerance.
double simpson(const std::function<double(double)>& f, double a, double b,
               double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = simpson(f, a, b, fa, fm, fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 40);
}

}  // namespace

double inverse_linear_sum(double k0, double from, long count) {
  double sum = 0.0, comp = 0.0;  // Kahan
  for (long i = 1; i <= count; ++i) {
    const double term = 1.0 / (k0 + from + static_cast<double>(i));
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

double chung_bound(const ChungParams& p, int K) {
  check_chung(p);
  check_K(K);
  const double lead = std::pow((p.k0 + 1.0) / (p.k0 + K), p.alpha) * p.xi0;
  const double e = std::exp(p.alpha / (p.k0 + 1.0));
  return lead + (1.0 / (p.alpha - p.beta)) * e * p.A / std::pow(p.k0 + K, p.beta) +
         e * p.A / std::pow(p.k0 + K, p.beta + 1.0);
}

double chung_bound_tight(const ChungParams& p, int K) {
  check_chung(p);
  check_K(K);
  const double lead =
      std::exp(-p.alpha * inverse_linear_sum(p.k0, 0.0, K)) * p.xi0;
  const double e = std::exp(p.alpha / (p.k0 + 1.0));
  return lead + (1.0 / (p.alpha - p.beta)) * e * p.A / std::pow(p.k0 + K, p.beta) +
         e * p.A / std::pow(p.k0 + K, p.beta + 1.0);
}

double recursion_oracle_chung(const ChungParams& p, int K) {
  check_chung(p);
  check_K(K);
  double xi = p.xi0;
  for (int k = 0; k < K; ++k) {
    const double denom = p.k0 + k + 1.0;
    xi = std::exp(-p.alpha / denom) * xi + p.A / std::pow(denom, p.beta + 1.0);
  }
  return xi;
}

namespace {

double variant_tail_terms(const VariantParams& p, int K, double A, double power) {
  // c/(alpha-power) e^{alpha/(k0+n+1)} A / (n (k0+nK)^power)
  //   + c e^{alpha/(k0+n+1)} A / (k0+nK)^{power+1}
  const double c = std::exp(p.epsilon * kPiSqOver6);
  const double e = std::exp(p.alpha / (p.k0 + p.n + 1.0));
  const double D = p.k0 + static_cast<double>(p.n) * K;
  return (c / (p.alpha - power)) * e * A / (p.n * std::pow(D, power)) +
         c * e * A / std::pow(D, power + 1.0);
}

}  // namespace

double variant_bound(const VariantParams& p, int K) {
  check_variant(p);
  check_K(K);
  const double c = std::exp(p.epsilon * kPiSqOver6);
  const double D = p.k0 + static_cast<double>(p.n) * K;
  double v = c * std::pow(p.k0 + 1.0, p.alpha) / std::pow(D, p.alpha) * p.xi0 +
             c * std::pow(p.k0 + p.n + 1.0, p.alpha) * p.A1 / std::pow(D, p.alpha);
  v += variant_tail_terms(p, K, p.A2, p.beta);
  return v;
}

double recursion_oracle_variant(const VariantParams& p, int K) {
  check_variant(p);
  check_K(K);
  const double A3 = p.extension ? p.extension->A3 : 0.0;
  const double gamma = p.extension ? p.extension->gamma : 1.0;
  double xi =
      std::exp(-p.alpha * inverse_linear_sum(p.k0, 0.0, p.n)) * p.xi0 + p.A1;
  for (int k = 1; k < K; ++k) {
    const double s =
        inverse_linear_sum(p.k0, static_cast<double>(p.n) * k, p.n);
    const double D = p.k0 + static_cast<double>(p.n) * (k + 1.0);
    xi = std::exp(-p.alpha * s + p.epsilon / (static_cast<double>(k) * k)) * xi +
         p.A2 / std::pow(D, p.beta + 1.0) + A3 / std::pow(D, gamma + 1.0);
  }
  return xi;
}

double extended_variant_bound(const VariantParams& p, int K) {
  check_variant(p);
  check_K(K);
  if (!p.extension)
    throw std::invalid_argument("extended_variant_bound: extension absent");
  return variant_bound(p, K) +
         variant_tail_terms(p, K, p.extension->A3, p.extension->gamma);
}

double recursion_oracle_extended(const VariantParams& p, int K) {
  if (!p.extension)
    throw std::invalid_argument("recursion_oracle_extended: extension absent");
  return recursion_oracle_variant(p, K);
}

Bracket integral_bracket(const std::function<double(double)>& f, int m, int n,
                         bool non_decreasing,
                         const std::function<double(double)>* antiderivative) {
  if (!(1 <= m && m < n))
    throw std::invalid_argument("integral_bracket: need 1 <= m < n");
  double integral;
  if (antiderivative)
    integral = (*antiderivative)(static_cast<double>(n)) -
               (*antiderivative)(static_cast<double>(m));
  else
    integral = integrate(f, m, n, 1e-10);
  const double fm = f(static_cast<double>(m));
  const double fn = f(static_cast<double>(n));
  if (non_decreasing) return {integral + fm, integral + fn};
  return {integral + fn, integral + fm};
}

Bracket product_a_bracket(double k0, double alpha, int ell, int k, int n) {
  if (!(k0 > 0.0)) throw std::invalid_argument("product_a_bracket: k0 must be > 0");
  if (!(alpha >= 0.0)) throw std::invalid_argument("product_a_bracket: alpha must be >= 0");
  if (ell < 1 || k < ell || n < 1)
    throw std::invalid_argument("product_a_bracket: need 1 <= ell <= k, n >= 1");
  const double start = k0 + static_cast<double>(n) * (ell - 1) + 1.0;
  const double end = k0 + static_cast<double>(n) * k;
  const double ratio = std::pow(start / end, alpha);
  return {std::exp(-alpha / start) * ratio, ratio};
}

TheoremConstants theorem1_constants(double mu, double L, double G, int n,
                                    double alpha, bool deduplicate_a1) {
  if (!(alpha > 2.0)) throw std::invalid_argument("theorem1_constants: need alpha > 2");
  if (!(mu > 0.0 && L >= mu) || n < 1 || !(G >= 0.0))
    throw std::invalid_argument("theorem1_constants: invalid problem constants");
  const double kappa = L / mu;
  const double e = std::exp(1.0);
  const double inner2 = 12.0 / (mu * L) + 32.0 * kappa * kappa;
  const double dup = deduplicate_a1 ? 1.0 : alpha * alpha * G * G;
  TheoremConstants c;
  c.a1 = alpha * alpha * G * G *
         ((e / (alpha - 1.0)) * (12.0 / (mu * mu) + 32.0 * kappa * kappa * kappa) +
          e * dup * inner2);
  // The 3L/2 term carries a G^2 that the source drops when factoring
  // 3G^2 (4 kappa L + L/(2n)); without it the bound fails the G -> 0 limit.
  c.a2 = 12.0 * kappa * L * G * G +
         (1.5 * L * G * G + 4.0 * kappa * L * G * G) / n +
         20.0 * kappa * L * G * G + 0.625 * mu * mu * G * G;
  return c;
}

TheoremConstants theorem2_constants(double mu, double L, double G, int n,
                                    double alpha, bool deduplicate_a1) {
  if (!(alpha > 4.0)) throw std::invalid_argument("theorem2_constants: need alpha > 4");
  TheoremConstants c = theorem1_constants(mu, L, G, n, alpha, deduplicate_a1);
  const double kappa = L / mu;
  const double edge = 4.0 * kappa * L + L / (2.0 * n);
  c.b2 = 15.0 * L * L * G * G + 3.0 * G * G * edge * edge;
  c.b3 = 32.0 * kappa * L * G * G;
  return c;
}

VariantParams theorem1_params(double mu, double L, double G, int n, double alpha,
                              double dist0, bool deduplicate_a1) {
  const TheoremConstants c = theorem1_constants(mu, L, G, n, alpha, deduplicate_a1);
  const double k0 = alpha * L / mu;
  VariantParams p;
  p.k0 = k0;
  p.alpha = alpha;
  p.beta = 2.0;
  p.epsilon = alpha;
  p.A1 = c.a1 / (k0 + n);
  p.A2 = 8.0 * c.a2 * alpha * alpha * alpha * static_cast<double>(n) * n /
         (mu * mu * mu);
  p.n = n;
  p.xi0 = dist0;
  return p;
}

VariantParams theorem2_params(double mu, double L, double G, int n, double alpha,
                              double dist0, bool deduplicate_a1) {
  const TheoremConstants c = theorem2_constants(mu, L, G, n, alpha, deduplicate_a1);
  const double k0 = alpha * L / mu;
  VariantParams p;
  p.k0 = k0;
  p.alpha = alpha;
  p.beta = 2.0;
  p.epsilon = alpha;
  p.A1 = c.a1 / (k0 + n);
  p.A2 = 8.0 * c.b3 * alpha * alpha * alpha * n / (mu * mu * mu);
  p.n = n;
  p.xi0 = dist0;
  p.extension = VariantExtension{
      16.0 * c.b2 * std::pow(alpha, 4.0) * std::pow(static_cast<double>(n), 3.0) /
          std::pow(mu, 4.0),
      3.0};
  return p;
}

double theorem1_bound(double mu, double L, double G, int n, double alpha, int K,
                      double dist0, bool deduplicate_a1) {
  return variant_bound(theorem1_params(mu, L, G, n, alpha, dist0, deduplicate_a1), K);
}

double theorem2_bound(double mu, double L, double G, int n, double alpha, int K,
                      double dist0, bool deduplicate_a1) {
  return extended_variant_bound(
      theorem2_params(mu, L, G, n, alpha, dist0, deduplicate_a1), K);
}

}  // namespace rrsgd

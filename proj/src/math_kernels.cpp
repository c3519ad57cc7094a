#include "ssp/math_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ssp {

double span(const Vec& f) {
  if (f.empty()) fail(Errc::InvalidArgument, "span of an empty vector");
  return (max_of(f) - min_of(f)) / 2.0;
}

double min_sup_deviation_nonpos(const Vec& f) {
  if (f.empty()) fail(Errc::InvalidArgument, "empty vector");
  for (double v : f)
    if (v < 0.0) fail(Errc::NegativeInput, "min_sup_deviation_nonpos needs f >= 0");
  return max_of(f);
}

MinLocation min_weighted_l1_deviation(const Vec& a, const Vec& b, LambdaConstraint constraint) {
  if (a.size() != b.size() || a.empty()) fail(Errc::InvalidArgument, "weights and points must match");
  for (double w : a)
    if (!(w > 0.0)) fail(Errc::NonPositiveWeight, "weights must be positive");
  auto objective = [&](double lambda) {
    double v = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) v += a[i] * std::abs(b[i] - lambda);
    return v;
  };
  if (constraint == LambdaConstraint::NonPositive) {
    for (double v : b)
      if (v < 0.0) fail(Errc::NegativeInput, "NonPositive variant needs b >= 0");
    return {0.0, objective(0.0)};
  }
  std::vector<std::size_t> order(a.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return b[i] < b[j]; });
  const double half = std::accumulate(a.begin(), a.end(), 0.0) / 2.0;
  double cumulative = 0.0;
  for (std::size_t idx : order) {
    cumulative += a[idx];
    if (cumulative >= half) return {b[idx], objective(b[idx])};
  }
  const std::size_t last = order.back();
  return {b[last], objective(b[last])};
}

MinLocation min_hyperbola(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) fail(Errc::NonPositiveInput, "min_hyperbola needs a, b > 0");
  return {std::sqrt(b / a), 2.0 * std::sqrt(a * b)};
}

MinLocation min_xlog(double a) {
  if (!(a > 0.0)) fail(Errc::NonPositiveInput, "min_xlog needs a > 0");
  return {a / std::exp(1.0), -a / std::exp(1.0)};
}

double cumulant_bound_margin(const Vec& p, const Vec& x, double lambda) {
  if (p.size() != x.size() || p.empty()) fail(Errc::InvalidArgument, "p and x must match");
  double mass = 0.0;
  for (double w : p) {
    if (w < 0.0) fail(Errc::InvalidArgument, "weights must be nonnegative");
    mass += w;
  }
  if (!(mass > 0.0) || mass > 1.0 + 1e-12) fail(Errc::InvalidArgument, "weights must have mass in (0,1]");
  const double mean = dot(p, x);
  double spread = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) spread = std::max(spread, std::abs(x[i] - mean));
  if (!(lambda > 0.0) || lambda < spread)
    fail(Errc::LambdaTooSmall, "lambda must dominate |x - <p,x>| on the support");
  double ex = 0.0, ex2 = 0.0, mgf = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = x[i] - mean;
    ex += p[i] * d;
    ex2 += p[i] * d * d;
    mgf += p[i] * std::exp(d / lambda);
  }
  return (ex + ex2 / lambda) - lambda * std::log(mgf);
}

bool minmax_rearrange_holds(const Vec& x, const Vec& y) {
  if (x.size() != y.size() || x.empty()) fail(Errc::InvalidArgument, "vectors must have equal length");
  const double gap = sup_dist(x, y);
  return gap >= std::abs(min_of(x) - min_of(y)) && gap >= std::abs(max_of(x) - max_of(y));
}

MinLocation grid_minimize_1d(const std::function<double(double)>& f, double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) fail(Errc::InvalidArgument, "bad grid");
  const long count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  MinLocation best{lo, f(lo)};
  for (long i = 1; i <= count; ++i) {
    const double t = lo + static_cast<double>(i) * step;
    const double v = f(t);
    if (v < best.value) best = {t, v};
  }
  return best;
}

}  // namespace ssp

#pragma once

#include <functional>

#include "ssp/common.hpp"

namespace ssp {

struct MinLocation {
  double location;
  double value;
};

enum class LambdaConstraint { Free, NonPositive };

double span(const Vec& f);
double min_sup_deviation_nonpos(const Vec& f);
MinLocation min_weighted_l1_deviation(const Vec& a, const Vec& b, LambdaConstraint constraint);
MinLocation min_hyperbola(double a, double b);
MinLocation min_xlog(double a);

// (E X + E X^2 / lambda) - lambda log E exp(X / lambda) with X = x - <p,x>
// under the (possibly substochastic) weights p.
double cumulant_bound_margin(const Vec& p, const Vec& x, double lambda);

bool minmax_rearrange_holds(const Vec& x, const Vec& y);

// Dense 1-D grid minimisation used as an oracle for the closed forms above.
MinLocation grid_minimize_1d(const std::function<double(double)>& f, double lo, double hi, double step);

}  // namespace ssp

#include "ssp/common.hpp"

#include <cmath>
#include <cstdlib>

namespace ssp {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Parse: return "Parse";
    case Errc::Validation: return "Validation";
    case Errc::ImproperPolicy: return "ImproperPolicy";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::NonConvergence: return "NonConvergence";
    case Errc::MaxIterExceeded: return "MaxIterExceeded";
    case Errc::CycleDetected: return "CycleDetected";
    case Errc::NotAllProper: return "NotAllProper";
    case Errc::NoProperPolicy: return "NoProperPolicy";
    case Errc::UnsupportedDivergence: return "UnsupportedDivergence";
    case Errc::NonNegativityViolated: return "NonNegativityViolated";
    case Errc::MissingModification: return "MissingModification";
    case Errc::ZeroCounts: return "ZeroCounts";
    case Errc::TooManyStates: return "TooManyStates";
    case Errc::NegativeInput: return "NegativeInput";
    case Errc::NonPositiveWeight: return "NonPositiveWeight";
    case Errc::NonPositiveInput: return "NonPositiveInput";
    case Errc::LambdaTooSmall: return "LambdaTooSmall";
    case Errc::InvalidOccupancy: return "InvalidOccupancy";
    case Errc::NoCandidate: return "NoCandidate";
    case Errc::Infeasible: return "Infeasible";
    case Errc::PlanningFailed: return "PlanningFailed";
    case Errc::ImproperRisk: return "ImproperRisk";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double max_of(const Vec& v) {
  double m = v.at(0);
  for (double e : v) m = std::max(m, e);
  return m;
}

double min_of(const Vec& v) {
  double m = v.at(0);
  for (double e : v) m = std::min(m, e);
  return m;
}

double sum_of(const Vec& v) {
  double s = 0.0;
  for (double e : v) s += e;
  return s;
}

double sup_dist(const Vec& a, const Vec& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

unsigned worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("SSP_EVI_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) hw = std::min<unsigned>(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

}  // namespace ssp

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ssp {

using Vec = std::vector<double>;
// Transition rows indexed [state][local action index], each of length N.
using Tensor = std::vector<std::vector<Vec>>;
// Per state-action scalar, indexed [state][local action index].
using SaTable = std::vector<Vec>;

enum class Errc {
  InvalidArgument,
  Parse,
  Validation,
  ImproperPolicy,
  SingularSystem,
  NonConvergence,
  MaxIterExceeded,
  CycleDetected,
  NotAllProper,
  NoProperPolicy,
  UnsupportedDivergence,
  NonNegativityViolated,
  MissingModification,
  ZeroCounts,
  TooManyStates,
  NegativeInput,
  NonPositiveWeight,
  NonPositiveInput,
  LambdaTooSmall,
  InvalidOccupancy,
  NoCandidate,
  Infeasible,
  PlanningFailed,
  ImproperRisk,
  Io,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

double dot(const Vec& a, const Vec& b);
double max_of(const Vec& v);
double min_of(const Vec& v);
double sum_of(const Vec& v);
double sup_dist(const Vec& a, const Vec& b);

// Worker count for internal sweeps; honours SSP_EVI_THREADS.
unsigned worker_count();

// Runs body(i) for i in [0, n) across worker_count() threads. Each index is
// visited exactly once, so writes to distinct slots need no locking.
template <class F>
void parallel_for(std::size_t n, F&& body);

}  // namespace ssp

#include "ssp/parallel_impl.hpp"

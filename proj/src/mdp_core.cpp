#include "ssp/mdp_core.hpp"

#include <cmath>
#include <complex>
#include <sstream>

namespace ssp {

int SspInstance::max_actions() const {
  int m = 0;
  for (const auto& a : action_ids) m = std::max(m, static_cast<int>(a.size()));
  return m;
}

int SspInstance::total_pairs() const {
  int t = 0;
  for (const auto& a : action_ids) t += static_cast<int>(a.size());
  return t;
}

double SspInstance::goal_mass(int s, int k) const {
  return std::max(0.0, 1.0 - sum_of(trans[s][k]));
}

int SspInstance::local_index(int s, int action_id) const {
  const auto& ids = action_ids.at(s);
  for (std::size_t k = 0; k < ids.size(); ++k)
    if (ids[k] == action_id) return static_cast<int>(k);
  return -1;
}

double SspInstance::min_cost(int s) const { return min_of(cost[s]); }

Vec SspInstance::min_cost_vector() const {
  Vec v(num_states);
  for (int s = 0; s < num_states; ++s) v[s] = min_cost(s);
  return v;
}

void SspInstance::validate() const {
  auto bad = [](const std::string& msg) { fail(Errc::Validation, msg); };
  if (num_states <= 0) bad("num_states must be positive");
  const auto n = static_cast<std::size_t>(num_states);
  if (action_ids.size() != n || cost.size() != n || trans.size() != n)
    bad("per-state tables must have num_states entries");
  if (initial_state < 0 || initial_state >= num_states) bad("initial_state out of range");
  for (int s = 0; s < num_states; ++s) {
    if (action_ids[s].empty()) bad("state " + std::to_string(s) + " has no actions");
    if (cost[s].size() != action_ids[s].size() || trans[s].size() != action_ids[s].size())
      bad("state " + std::to_string(s) + ": cost/transition count does not match actions");
    for (std::size_t k = 0; k < action_ids[s].size(); ++k) {
      const std::string where =
          "(" + std::to_string(s) + "," + std::to_string(action_ids[s][k]) + ")";
      for (std::size_t j = 0; j < k; ++j)
        if (action_ids[s][j] == action_ids[s][k]) bad("duplicate action id at " + where);
      const double c = cost[s][k];
      if (!std::isfinite(c) || c < kMinCost || c > 1.0)
        bad("cost at " + where + " must lie in [1e-9, 1]");
      const Vec& row = trans[s][k];
      if (row.size() != n) bad("transition row at " + where + " must have num_states entries");
      double total = 0.0;
      for (double p : row) {
        if (!std::isfinite(p) || p < 0.0) bad("negative or non-finite probability at " + where);
        total += p;
      }
      if (total > 1.0 + 1e-12) bad("transition row at " + where + " sums above 1");
    }
  }
}

SspInstance make_instance(const SaTable& cost, const Tensor& trans, int initial_state) {
  SspInstance inst;
  inst.num_states = static_cast<int>(cost.size());
  inst.initial_state = initial_state;
  inst.cost = cost;
  inst.trans = trans;
  inst.action_ids.resize(cost.size());
  for (std::size_t s = 0; s < cost.size(); ++s)
    for (std::size_t k = 0; k < cost[s].size(); ++k)
      inst.action_ids[s].push_back(static_cast<int>(k));
  inst.validate();
  return inst;
}

void check_policy(const SspInstance& inst, const Policy& pi) {
  if (pi.size() != static_cast<std::size_t>(inst.num_states))
    fail(Errc::InvalidArgument, "policy length differs from num_states");
  for (int s = 0; s < inst.num_states; ++s)
    if (pi[s] < 0 || pi[s] >= inst.num_actions(s))
      fail(Errc::InvalidArgument, "policy action out of range at state " + std::to_string(s));
}

PolicyMatrices policy_matrices(const SspInstance& inst, const Policy& pi) {
  check_policy(inst, pi);
  const int n = inst.num_states;
  PolicyMatrices pm{Eigen::MatrixXd(n, n), Eigen::VectorXd(n)};
  for (int s = 0; s < n; ++s) {
    pm.c_vector(s) = inst.cost[s][pi[s]];
    for (int t = 0; t < n; ++t) pm.p_matrix(s, t) = inst.trans[s][pi[s]][t];
  }
  return pm;
}

bool is_proper(const SspInstance& inst, const Policy& pi) {
  const PolicyMatrices pm = policy_matrices(inst, pi);
  const int n = inst.num_states;
  Eigen::VectorXd goal(n);
  for (int s = 0; s < n; ++s) goal(s) = inst.goal_mass(s, pi[s]);
  // reach_k(s) = probability of hitting the goal within k steps.
  Eigen::VectorXd reach = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < n; ++k) reach = goal + pm.p_matrix * reach;
  return reach.minCoeff() > kProperTol;
}

Vec cost_to_go(const SspInstance& inst, const Policy& pi) {
  if (!is_proper(inst, pi)) fail(Errc::ImproperPolicy, "cost_to_go requires a proper policy");
  const PolicyMatrices pm = policy_matrices(inst, pi);
  const int n = inst.num_states;
  const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - pm.p_matrix;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) fail(Errc::SingularSystem, "I - P_pi is singular");
  const Eigen::VectorXd x = lu.solve(pm.c_vector);
  return Vec(x.data(), x.data() + n);
}

double spectral_radius(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) fail(Errc::InvalidArgument, "spectral_radius needs a square matrix");
  if (!m.allFinite()) fail(Errc::InvalidArgument, "spectral_radius needs finite entries");
  const auto n = m.rows();
  if (n == 0) return 0.0;
  if (n == 1) return std::abs(m(0, 0));
  if (n == 2) {
    const double tr = m(0, 0) + m(1, 1);
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const std::complex<double> root = std::sqrt(std::complex<double>(tr * tr / 4.0 - det, 0.0));
    const std::complex<double> half(tr / 2.0, 0.0);
    return std::max(std::abs(half + root), std::abs(half - root));
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  if (es.info() != Eigen::Success) fail(Errc::NonConvergence, "eigenvalue solver did not converge");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Vec with_goal(const Vec& row) {
  Vec out = row;
  out.push_back(std::max(0.0, 1.0 - sum_of(row)));
  return out;
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

StepOutcome simulate_step(const SspInstance& inst, int s, int k, Rng& rng) {
  const Vec& row = inst.trans[s][k];
  const double u = uniform01(rng);
  double acc = 0.0;
  for (int t = 0; t < inst.num_states; ++t) {
    acc += row[t];
    if (u < acc) return {t, inst.cost[s][k]};
  }
  return {-1, inst.cost[s][k]};
}

std::vector<Policy> enumerate_policies(const SspInstance& inst) {
  std::vector<Policy> out;
  Policy pi(inst.num_states, 0);
  for (;;) {
    out.push_back(pi);
    int s = inst.num_states - 1;
    while (s >= 0 && ++pi[s] == inst.num_actions(s)) pi[s--] = 0;
    if (s < 0) break;
  }
  return out;
}

}  // namespace ssp

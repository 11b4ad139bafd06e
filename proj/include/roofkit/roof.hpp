#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "roofkit/hermitian.hpp"
#include "roofkit/subalgebra.hpp"

namespace roofkit {

using State = PureState<double>;
using Density = DensityMatrix<double>;
using Hermitian = HermitianMatrix<double>;

inline constexpr double kDefaultWeightFloor = 1e-8;

/// Weighted list of pure states, sum_j p_j |psi_j><psi_j|.
///
/// Weights must be positive, at least `weight_floor`, and sum to one within
/// 1e-9 (they are renormalized exactly). The length is capped at d^2.
class Ensemble {
 public:
  Ensemble(std::vector<double> weights, std::vector<State> states, double weight_floor = kDefaultWeightFloor);

  /// As above, and additionally checks that the mixture reproduces `target`
  /// within `tol` in max-entry norm.
  Ensemble(std::vector<double> weights, std::vector<State> states, const Density& target, double tol = 1e-9,
           double weight_floor = kDefaultWeightFloor);

  std::size_t size() const { return weights_.size(); }
  Eigen::Index dim() const { return states_.front().dim(); }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<State>& states() const { return states_; }

 private:
  std::vector<double> weights_;
  std::vector<State> states_;
};

Eigen::MatrixXcd mix_matrix(const Ensemble& e);
Density mix(const Ensemble& e);

/// sum_j p_j * tilde_entropy(psi_j).
double ensemble_objective(const Ensemble& e);

/// Decomposition of `d` generated by an m x k isometry acting on the
/// eigen-ensemble of the support (k = rank). Rows whose weight falls below
/// `weight_floor` are dropped and the rest renormalized.
Ensemble ensembles_from_isometry(const Density& d, const Eigen::MatrixXcd& w,
                                 double weight_floor = kDefaultWeightFloor);

struct OptimizerConfig {
  std::uint64_t seed = 0;
  int restarts = 32;
  int max_iters = 2000;
  int m = 0;  // ensemble length; 0 selects d^2
  double tol = 1e-10;
  int stall_window = 50;
  double weight_floor = kDefaultWeightFloor;
  bool real_only = false;
  int threads = 0;  // 0 = ROOFKIT_THREADS or hardware concurrency
  int escape_trials = 2;
  double escape_scale = 1e-2;
  double cluster_tol = 1e-6;
  double state_tol = 1e-3;
};

struct RoofResult {
  double value = 0;
  Ensemble ensemble;
  bool converged = false;
  int restarts_used = 0;
  std::vector<double> objective_history;
};

/// Running tally over every ensemble returned by convex_roof, concave_roof and
/// analyze_roof in this process.
struct LengthAudit {
  std::uint64_t ensembles = 0;
  std::uint64_t over_rank_squared = 0;
  std::uint64_t over_dim_squared = 0;
};

LengthAudit length_audit();
void reset_length_audit();

/// R(d) = inf sum p_j tilde_entropy(psi_j) by multistart descent over isometries.
RoofResult convex_roof(const Density& d, const OptimizerConfig& cfg = {});

/// sup of the same functional.
RoofResult concave_roof(const Density& d, const OptimizerConfig& cfg = {});

/// H = tilde_entropy(d) - R(d).
double subalgebra_entropy(const Density& d, const OptimizerConfig& cfg = {});

/// Carathéodory reduction: moves weight along null directions of the
/// projector map until the states' projectors are linearly independent on
/// the support (at most rank^2 of them). Never increases the objective when
/// `minimize` is true, never decreases it otherwise.
Ensemble compact_ensemble(const Ensemble& e, const Density& target, bool minimize = true,
                          double weight_floor = kDefaultWeightFloor);

/// Affine functional l(rho) = Tr(A rho), constant folded into A.
struct SupportFunctional {
  Hermitian op;
};

struct SupportCheck {
  double max_violation = 0;  // max over samples of Tr(A rho) - tilde_entropy(rho)
  int samples = 0;
  bool below_on_pure = false;
  std::optional<double> touch_gap;  // |Tr(A D) - R(D)| when R(D) was supplied
  bool supports = false;             // below everywhere sampled and touches at D
};

SupportCheck check_support_functional(const SupportFunctional& a, const Density& d, int samples,
                                      std::uint64_t seed, std::optional<double> roof_value = std::nullopt,
                                      double tolerance = 1e-8, double touch_tolerance = 1e-6);

/// Least-squares fit of A from the stationarity conditions
/// A psi = diag(-ln|psi_i|^2) psi at each given state (components with
/// |psi_i|^2 below 1e-12 impose nothing). Minimum-norm solution, then
/// lowered by `complement_shift` on the orthogonal complement of the states,
/// where the conditions leave A free.
SupportFunctional fit_support_functional(const std::vector<State>& touching, double complement_shift = 100.0);

struct Facet {
  std::vector<State> generators;
  std::vector<SupportFunctional> functionals;
};

struct RoofAnalysis {
  RoofResult roof;
  Facet facet;
};

/// One multistart run producing both the roof value and the facet built from
/// every restart within cluster_tol of the best.
RoofAnalysis analyze_roof(const Density& d, const OptimizerConfig& cfg = {});

Facet facet_of(const Density& d, const OptimizerConfig& cfg = {});

}  // namespace roofkit

#pragma once

#include <array>
#include <optional>
#include <vector>

#include "roofkit/roof.hpp"

namespace roofkit {

/// Real permutation-invariant state (1/d) I + z (J - I).
struct SymmetricState {
  int d = 0;
  double z = 0;
  double a = 0;  // sqrt(1 + z d (d-1)), the common component sum of optimal vectors
  double r = 0;  // sqrt(1 - a^2/d)

  Density density() const;
};

double symmetric_z_min(int d);
double symmetric_z_max(int d);

SymmetricState symmetric_state(int d, double z);

struct SphereParams {
  double a = 0;
  double r = 0;
};

SphereParams sphere_params(int d, double z);

/// Overlap <phi, phi_perp> = 1 - 2 r^2 of two antipodal points on the circle.
double antipode_overlap(double r);

/// Unit real vector with prescribed component sum.
class RealAnsatzVector {
 public:
  RealAnsatzVector() = default;
  RealAnsatzVector(Eigen::VectorXd phi, double a, double tol = 1e-12);

  const Eigen::VectorXd& components() const { return phi_; }
  double sum() const { return phi_.sum(); }

 private:
  Eigen::VectorXd phi_;
};

/// The d states sqrt(d) sqrt(D) e_j, weight 1/d each.
Ensemble triangle_decomposition(const SymmetricState& s);

/// Objective of one triangle state; equals the triangle ensemble's objective.
double triangle_objective(const SymmetricState& s);

// d = 3 circle geometry. phi(theta) = (a/sqrt 3) u + r (cos theta e + sin theta f)
// with u = (1,1,1)/sqrt 3, e = (1,-1,0)/sqrt 2, f = (1,1,-2)/sqrt 6. The triangle
// vertex with the first component largest sits at theta = pi/6; the others at
// 5pi/6 and 3pi/2. Adding 2pi/3 to theta cycles components 1 -> 2 -> 3.

inline constexpr double kTriangleVertex = 0.52359877559829887;  // pi/6

Eigen::Vector3d circle_point(double z, double theta);
double circle_objective(double z, double theta);

/// Central second difference of circle_objective in theta.
double circle_second_derivative(double z, double theta, double h = 1e-4);

struct MinimaCensus {
  int count = 0;
  std::vector<double> angles;  // grid angles of strict local minima
};

/// Local minima of theta -> circle_objective on a periodic grid.
MinimaCensus minima_census(double z, int grid = 720);

struct Bifurcation {
  double z_star = 0;
  double lo = 0;  // final bracket, second derivative negative at lo
  double hi = 0;  // and positive at hi
  int bisections = 0;
};

/// Locates where the triangle vertex turns from a local minimum (above) into
/// a local maximum (below). The bracket is sampled on `grid` points, then
/// bisected until its width is at most refine_tol.
Bifurcation bifurcation_scan(double z_lo, double z_hi, int grid = 64, double refine_tol = 1e-6);

struct HexagonConfig {
  int grid = 720;
  double angle_tol = 1e-10;
};

struct Hexagon {
  double delta = 0;  // offset of the minima from each triangle vertex
  // Ordered 1a, 1b, 2a, 2b, 3a, 3b; ka = vertex_k - delta, kb = vertex_k + delta.
  std::array<State, 6> states;
  Ensemble triad_a;
  Ensemble triad_b;
  double objective_a = 0;
  double objective_b = 0;
  std::array<int, 6> swap12_image{};  // index of U12 * states[n] in states, -1 if none
  bool pattern_ok = false;            // 1a<->2b, 1b<->2a, 3a<->3b
};

/// The two cyclic triads of circle minima below the bifurcation.
Hexagon hexagon_ensemble(double z, const HexagonConfig& cfg = {});

struct AnsatzConfig {
  int grid = 720;
  double angle_tol = 1e-10;
};

struct AnsatzResult {
  double value = 0;
  RealAnsatzVector vector;
  std::array<int, 3> pattern{};  // multiplicities of the distinct values, zeros for unused slots
  double best_two_value = 0;     // +inf when no two-value vector exists
  double best_three_value = 0;   // +inf when d < 3
  bool two_value_optimal = false;
};

/// Minimizes tilde_entropy over unit real vectors with component sum a whose
/// components take at most three distinct values.
AnsatzResult ansatz_minimize(int d, double z, const AnsatzConfig& cfg = {});

/// Smallest eigenvalue of the Lagrangian Hessian of sum s(phi_k^2) restricted
/// to the tangent space {v : v.phi = 0, sum v = 0}. Needs all phi_k nonzero.
double projected_hessian_min_eigenvalue(const Eigen::VectorXd& phi);

}  // namespace roofkit

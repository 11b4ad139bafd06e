#include "roofkit/symmetric.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace roofkit {

namespace {

constexpr double kPi = std::numbers::pi;

inline double s_sq(double x) {
  const double q = x * x;
  return q > 0 ? -q * std::log(q) : 0.0;
}

void check_z(int d, double z) {
  if (d < 2) throw Error(ErrorKind::OutOfRange, "dimension must be at least 2");
  const double lo = symmetric_z_min(d);
  const double hi = symmetric_z_max(d);
  if (!(z >= lo - 1e-15 && z <= hi + 1e-15)) {
    throw Error(ErrorKind::OutOfRange, "z = " + std::to_string(z) + " outside [" + std::to_string(lo) + ", " +
                                           std::to_string(hi) + "]");
  }
}

template <typename F>
double golden_min(F&& f, double lo, double hi, double tol) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

// Periodic local minima of f on `grid` equally spaced angles.
template <typename F>
std::vector<double> grid_minima(F&& f, int grid) {
  std::vector<double> vals(grid);
  for (int i = 0; i < grid; ++i) vals[i] = f(2 * kPi * i / grid);
  std::vector<double> out;
  for (int i = 0; i < grid; ++i) {
    const double prev = vals[(i + grid - 1) % grid];
    const double next = vals[(i + 1) % grid];
    if (vals[i] < prev && vals[i] < next) out.push_back(2 * kPi * i / grid);
  }
  return out;
}

State real_state(const Eigen::VectorXd& v) { return State(Eigen::VectorXcd(v.cast<std::complex<double>>())); }

}  // namespace

double symmetric_z_min(int d) { return -1.0 / (d * (d - 1.0)); }
double symmetric_z_max(int d) { return 1.0 / d; }

Density SymmetricState::density() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Constant(d, d, z);
  m.diagonal().setConstant(1.0 / d);
  return Density(m);
}

SphereParams sphere_params(int d, double z) {
  check_z(d, z);
  const double a = std::sqrt(std::max(0.0, 1 + z * d * (d - 1)));
  const double r = std::sqrt(std::max(0.0, (d - 1) * (1 - z * d) / d));
  return {a, r};
}

SymmetricState symmetric_state(int d, double z) {
  const auto p = sphere_params(d, z);
  return {d, z, p.a, p.r};
}

double antipode_overlap(double r) { return 1 - 2 * r * r; }

RealAnsatzVector::RealAnsatzVector(Eigen::VectorXd phi, double a, double tol) : phi_(std::move(phi)) {
  if (std::abs(phi_.squaredNorm() - 1) > tol) throw Error(ErrorKind::DomainError, "ansatz vector not unit");
  if (std::abs(phi_.sum() - a) > tol) throw Error(ErrorKind::DomainError, "ansatz vector has wrong sum");
}

Ensemble triangle_decomposition(const SymmetricState& s) {
  if (s.z <= symmetric_z_min(s.d) + 1e-15) {
    throw Error(ErrorKind::OutOfRange, "triangle decomposition needs a full-rank symmetric state");
  }
  const Density rho = s.density();
  const Eigen::MatrixXcd root = psd_sqrt(rho).matrix();
  std::vector<double> w(s.d, 1.0 / s.d);
  std::vector<State> states;
  for (int j = 0; j < s.d; ++j) states.emplace_back(Eigen::VectorXcd(root.col(j)));
  return Ensemble(std::move(w), std::move(states), rho, 1e-10);
}

double triangle_objective(const SymmetricState& s) {
  return ensemble_objective(triangle_decomposition(s));
}

Eigen::Vector3d circle_point(double z, double theta) {
  const auto p = sphere_params(3, z);
  const Eigen::Vector3d u = Eigen::Vector3d::Constant(1 / std::sqrt(3.0));
  const Eigen::Vector3d e = Eigen::Vector3d(1, -1, 0) / std::sqrt(2.0);
  const Eigen::Vector3d f = Eigen::Vector3d(1, 1, -2) / std::sqrt(6.0);
  return (p.a / std::sqrt(3.0)) * u + p.r * (std::cos(theta) * e + std::sin(theta) * f);
}

double circle_objective(double z, double theta) {
  const Eigen::Vector3d phi = circle_point(z, theta);
  return s_sq(phi(0)) + s_sq(phi(1)) + s_sq(phi(2));
}

double circle_second_derivative(double z, double theta, double h) {
  return (circle_objective(z, theta + h) - 2 * circle_objective(z, theta) + circle_objective(z, theta - h)) /
         (h * h);
}

MinimaCensus minima_census(double z, int grid) {
  check_z(3, z);
  MinimaCensus out;
  out.angles = grid_minima([&](double t) { return circle_objective(z, t); }, grid);
  out.count = static_cast<int>(out.angles.size());
  return out;
}

Bifurcation bifurcation_scan(double z_lo, double z_hi, int grid, double refine_tol) {
  if (!(z_lo > symmetric_z_min(3) && z_hi < symmetric_z_max(3) && z_lo < z_hi)) {
    throw Error(ErrorKind::OutOfRange, "scan bracket must lie inside (-1/6, 1/3)");
  }
  grid = std::max(grid, 2);
  const auto curvature = [](double z) { return circle_second_derivative(z, kTriangleVertex); };
  std::optional<std::pair<double, double>> bracket;
  double prev_z = z_lo;
  double prev_c = curvature(z_lo);
  for (int i = 1; i < grid; ++i) {
    const double z = z_lo + (z_hi - z_lo) * i / (grid - 1);
    const double c = curvature(z);
    if (prev_c < 0 && c > 0) bracket = {prev_z, z};
    prev_z = z;
    prev_c = c;
  }
  if (!bracket) throw Error(ErrorKind::NoSignChange, "vertex curvature does not change sign in the bracket");
  Bifurcation out{0, bracket->first, bracket->second, 0};
  while (out.hi - out.lo > refine_tol) {
    const double mid = 0.5 * (out.lo + out.hi);
    if (curvature(mid) < 0) out.lo = mid;
    else out.hi = mid;
    ++out.bisections;
  }
  out.z_star = 0.5 * (out.lo + out.hi);
  return out;
}

Hexagon hexagon_ensemble(double z, const HexagonConfig& cfg) {
  const MinimaCensus census = minima_census(z, cfg.grid);
  if (census.count != 6) {
    throw Error(ErrorKind::NotHexagonRegime, "circle has " + std::to_string(census.count) + " minima at z = " +
                                                 std::to_string(z) + ", not 6");
  }
  const double step = 2 * kPi / cfg.grid;
  std::optional<double> seed_angle;
  for (double t : census.angles) {
    if (t > kTriangleVertex && t < kPi / 2) seed_angle = t;
  }
  if (!seed_angle) throw Error(ErrorKind::NotHexagonRegime, "no minimum beside the first triangle vertex");
  const double lo = std::max(kTriangleVertex, *seed_angle - step);
  const double hi = std::min(kPi / 2, *seed_angle + step);
  const double theta = golden_min([&](double t) { return circle_objective(z, t); }, lo, hi, cfg.angle_tol);
  const double delta = theta - kTriangleVertex;

  const std::array<double, 3> vertices{kTriangleVertex, 5 * kPi / 6, 3 * kPi / 2};
  std::array<Eigen::Vector3d, 6> vecs;
  for (int k = 0; k < 3; ++k) {
    vecs[2 * k] = circle_point(z, vertices[k] - delta);
    vecs[2 * k + 1] = circle_point(z, vertices[k] + delta);
  }
  std::array<State, 6> states;
  for (int n = 0; n < 6; ++n) states[n] = real_state(vecs[n]);

  const Density target = symmetric_state(3, z).density();
  const std::vector<double> third(3, 1.0 / 3);
  Ensemble triad_a(third, {states[0], states[2], states[4]}, target, 1e-9);
  Ensemble triad_b(third, {states[1], states[3], states[5]}, target, 1e-9);
  const double obj_a = ensemble_objective(triad_a);
  const double obj_b = ensemble_objective(triad_b);

  std::array<int, 6> image{};
  for (int n = 0; n < 6; ++n) {
    Eigen::Vector3d swapped = vecs[n];
    std::swap(swapped(0), swapped(1));
    const State s = real_state(swapped);
    image[n] = -1;
    for (int m = 0; m < 6; ++m) {
      if (trace_distance(s, states[m]) < 1e-8) {
        image[n] = m;
        break;
      }
    }
  }
  // 1a(0)<->2b(3), 1b(1)<->2a(2), 3a(4)<->3b(5)
  const std::array<int, 6> expected{3, 2, 1, 0, 5, 4};
  return Hexagon{delta,  states, std::move(triad_a), std::move(triad_b), obj_a, obj_b, image,
                 image == expected};
}

namespace {

struct PatternBest {
  double value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd weighted;  // w_i = sqrt(m_i) v_i
};

double pattern_objective(const std::vector<int>& m, const Eigen::VectorXd& w) {
  double f = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double v = w(i) / std::sqrt(static_cast<double>(m[i]));
    f += m[i] * s_sq(v);
  }
  return f;
}

// Orthonormal basis of the complement of c in R^n (n = c.size()).
Eigen::MatrixXd complement_basis(const Eigen::VectorXd& c) {
  const Eigen::Index n = c.size();
  Eigen::MatrixXd a(n, n);
  a.col(0) = c.normalized();
  a.rightCols(n - 1) = Eigen::MatrixXd::Identity(n, n).leftCols(n - 1);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  return q.rightCols(n - 1);
}

PatternBest minimize_pattern(const std::vector<int>& m, double a, double r, const AnsatzConfig& cfg) {
  const int d = std::accumulate(m.begin(), m.end(), 0);
  Eigen::VectorXd c(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) c(i) = std::sqrt(static_cast<double>(m[i]));
  const Eigen::VectorXd centre = (a / d) * c;
  PatternBest best;
  const auto consider = [&](const Eigen::VectorXd& w) {
    const double f = pattern_objective(m, w);
    if (f < best.value) {
      best.value = f;
      best.weighted = w;
    }
  };
  if (m.size() == 1) {
    if (r < 1e-12) consider(centre);
    return best;
  }
  const Eigen::MatrixXd basis = complement_basis(c);
  if (m.size() == 2) {
    consider(centre + r * basis.col(0));
    consider(centre - r * basis.col(0));
    return best;
  }
  const auto at = [&](double t) -> Eigen::VectorXd {
    return centre + r * (std::cos(t) * basis.col(0) + std::sin(t) * basis.col(1));
  };
  const auto f = [&](double t) { return pattern_objective(m, at(t)); };
  const double step = 2 * kPi / cfg.grid;
  for (double t : grid_minima(f, cfg.grid)) consider(at(golden_min(f, t - step, t + step, cfg.angle_tol)));
  if (best.weighted.size() == 0) consider(at(0));
  return best;
}

}  // namespace

AnsatzResult ansatz_minimize(int d, double z, const AnsatzConfig& cfg) {
  if (d < 3) throw Error(ErrorKind::OutOfRange, "ansatz needs d >= 3");
  const SymmetricState s = symmetric_state(d, z);
  AnsatzResult out;
  out.best_two_value = std::numeric_limits<double>::infinity();
  out.best_three_value = std::numeric_limits<double>::infinity();
  std::vector<int> best_pattern;
  PatternBest best;

  const auto take = [&](const std::vector<int>& m, const PatternBest& pb, double& bucket) {
    bucket = std::min(bucket, pb.value);
    if (pb.value < best.value) {
      best = pb;
      best_pattern = m;
    }
  };
  double one_value = std::numeric_limits<double>::infinity();
  take({d}, minimize_pattern({d}, s.a, s.r, cfg), one_value);
  for (int m1 = d - 1; m1 >= (d + 1) / 2; --m1) {
    const std::vector<int> m{m1, d - m1};
    take(m, minimize_pattern(m, s.a, s.r, cfg), out.best_two_value);
  }
  for (int m1 = d - 2; m1 >= 1; --m1) {
    for (int m2 = std::min(m1, d - m1 - 1); m2 >= 1; --m2) {
      const int m3 = d - m1 - m2;
      if (m3 < 1 || m3 > m2) continue;
      const std::vector<int> m{m1, m2, m3};
      take(m, minimize_pattern(m, s.a, s.r, cfg), out.best_three_value);
    }
  }
  out.best_two_value = std::min(out.best_two_value, one_value);
  out.two_value_optimal = out.best_two_value <= out.best_three_value + 1e-9;

  // Expand to a full vector, largest values first, merging coincident values.
  std::vector<std::pair<double, int>> groups;
  for (std::size_t i = 0; i < best_pattern.size(); ++i) {
    groups.emplace_back(best.weighted(i) / std::sqrt(static_cast<double>(best_pattern[i])), best_pattern[i]);
  }
  std::sort(groups.begin(), groups.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  std::vector<std::pair<double, int>> merged;
  for (const auto& g : groups) {
    if (!merged.empty() && std::abs(merged.back().first - g.first) < 1e-9) merged.back().second += g.second;
    else merged.push_back(g);
  }
  Eigen::VectorXd phi(d);
  int pos = 0;
  for (std::size_t g = 0; g < merged.size(); ++g) {
    out.pattern[g] = merged[g].second;
    for (int k = 0; k < merged[g].second; ++k) phi(pos++) = merged[g].first;
  }
  out.value = best.value;
  out.vector = RealAnsatzVector(phi, s.a, 1e-10);
  return out;
}

double projected_hessian_min_eigenvalue(const Eigen::VectorXd& phi) {
  const Eigen::Index d = phi.size();
  Eigen::VectorXd grad(d), curv(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const double lq = std::log(phi(k) * phi(k));
    grad(k) = -2 * phi(k) * (lq + 1);
    curv(k) = -2 * lq - 6;
  }
  Eigen::MatrixXd cons(d, 2);
  cons.col(0) = 2 * phi;
  cons.col(1) = Eigen::VectorXd::Ones(d);
  const Eigen::Vector2d mult = cons.colPivHouseholderQr().solve(grad);
  const Eigen::VectorXd hess_diag = curv.array() - 2 * mult(0);

  Eigen::MatrixXd frame(d, d);
  frame.leftCols(2) = cons;
  frame.rightCols(d - 2) = Eigen::MatrixXd::Identity(d, d).leftCols(d - 2);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(frame);
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd t = q.rightCols(d - 2);
  const Eigen::MatrixXd h = t.transpose() * hess_diag.asDiagonal() * t;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  return solver.eigenvalues().minCoeff();
}

}  // namespace roofkit

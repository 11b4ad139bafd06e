#include "roofkit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "roofkit/parallel.hpp"
#include "roofkit/symmetric.hpp"

namespace roofkit {

namespace {

double xlogx_neg(double x) { return x > 0 ? -x * std::log(x) : 0.0; }

// Contribution of one unnormalized ensemble member: sum_i s(|v_i|^2) - s(|v|^2).
double member_term(const Eigen::RowVectorXcd& v) {
  double p = 0;
  double f = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double x = std::norm(v(i));
    p += x;
    f += xlogx_neg(x);
  }
  return f - xlogx_neg(p);
}

double polish(Eigen::MatrixXcd& u, int sweeps) {
  const Eigen::Index m = u.rows();
  std::vector<double> terms(m);
  for (Eigen::Index j = 0; j < m; ++j) terms[j] = member_term(u.row(j));
  double step = 0.3;
  const std::complex<double> phases[2] = {{1, 0}, {0, 1}};
  for (int sweep = 0; sweep < sweeps && step > 1e-10; ++sweep) {
    bool improved = false;
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = a + 1; b < m; ++b) {
        for (const double angle : {step, -step}) {
          const double c = std::cos(angle);
          const double s = std::sin(angle);
          for (const auto& ph : phases) {
            const Eigen::RowVectorXcd ra = c * u.row(a) + s * ph * u.row(b);
            const Eigen::RowVectorXcd rb = -s * std::conj(ph) * u.row(a) + c * u.row(b);
            const double ta = member_term(ra);
            const double tb = member_term(rb);
            if (ta + tb < terms[a] + terms[b] - 1e-15) {
              u.row(a) = ra;
              u.row(b) = rb;
              terms[a] = ta;
              terms[b] = tb;
              improved = true;
            }
          }
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return std::accumulate(terms.begin(), terms.end(), 0.0);
}

}  // namespace

double brute_force_roof(const Density& d, int m, int budget, std::uint64_t seed, int threads, int sweeps) {
  const int k = rank_of(d);
  const Eigen::Index dim = d.dim();
  if (m < k || m > dim * dim) throw Error(ErrorKind::DomainError, "oracle ensemble length out of range");
  Eigen::MatrixXcd amp_t(k, dim);  // row l = sqrt(lambda_l) v_l^T
  for (int l = 0; l < k; ++l) {
    const Eigen::Index idx = dim - 1 - l;
    amp_t.row(l) = std::sqrt(d.eigenvalues()(idx)) * d.eigenvectors().col(idx).transpose();
  }
  std::vector<double> best(std::max(budget, 1));
  parallel_for(best.size(), threads, [&](std::size_t n) {
    Rng rng = make_rng(seed, n);
    Eigen::MatrixXcd u = random_isometry(m, k, rng) * amp_t;
    best[n] = polish(u, sweeps);
  });
  return *std::min_element(best.begin(), best.end());
}

Lemma6Instance sample_lemma6_instance(int d, Rng& rng) {
  if (d < 2) throw Error(ErrorKind::OutOfRange, "instances need d >= 2");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (d == 2) {
    const Transposition t(2, 0, 1);
    // Every two-dimensional swap-invariant state is reached by a real psi.
    for (;;) {
      const double angle = std::numbers::pi * unit(rng);
      const State psi(Eigen::VectorXcd(Eigen::Vector2cd(std::cos(angle), std::sin(angle))));
      const Eigen::MatrixXcd p = psi.projector();
      const Density rho(Eigen::MatrixXcd(0.5 * (p + t.unitary() * p * t.unitary())));
      if (rank_of(rho) == 2 && rho.eigenvalues()(0) > 1e-3) return {rho, t, tilde_entropy(psi)};
    }
  }

  // Global minimizer of the circle objective near the first triangle vertex,
  // with z kept where the triangle itself is the optimal decomposition.
  const double z = -0.12 + unit(rng) * 0.36;
  const double lo = -std::numbers::pi / 6;
  const double hi = std::numbers::pi / 2;
  const int grid = 240;
  double theta = lo;
  double best = std::numeric_limits<double>::infinity();
  for (int n = 0; n <= grid; ++n) {
    const double t = lo + (hi - lo) * n / grid;
    const double f = circle_objective(z, t);
    if (f < best) {
      best = f;
      theta = t;
    }
  }
  double a = std::max(lo, theta - (hi - lo) / grid);
  double b = std::min(hi, theta + (hi - lo) / grid);
  const double g = (std::sqrt(5.0) - 1) / 2;
  while (b - a > 1e-11) {
    const double x1 = b - g * (b - a);
    const double x2 = a + g * (b - a);
    if (circle_objective(z, x1) < circle_objective(z, x2)) b = x2;
    else a = x1;
  }
  const Eigen::Vector3d phi = circle_point(z, 0.5 * (a + b));
  Eigen::Vector3d swapped = phi;
  std::swap(swapped(0), swapped(1));
  const Eigen::Matrix3d d3 = 0.5 * (phi * phi.transpose() + swapped * swapped.transpose());

  std::vector<Eigen::Index> slots(d);
  std::iota(slots.begin(), slots.end(), 0);
  std::shuffle(slots.begin(), slots.end(), rng);
  std::array<double, 3> alpha{};
  alpha[0] = 2 * std::numbers::pi * unit(rng);
  alpha[1] = alpha[0];
  alpha[2] = 2 * std::numbers::pi * unit(rng);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m(slots[r], slots[c]) = d3(r, c) * std::polar(1.0, alpha[r] - alpha[c]);
  }
  const Transposition t(d, slots[0], slots[1]);
  double expected = 0;
  for (int i = 0; i < 3; ++i) expected += entropy_term(phi(i) * phi(i));
  return {Density(m), t, expected};
}

Density sample_swap_invariant_support(int d, Rng& rng) {
  if (d < 3) throw Error(ErrorKind::OutOfRange, "the symmetric subspace needs d >= 3 for rank two");
  Eigen::MatrixXcd g = gaussian_matrix(d, 2, rng);
  g.row(1) = g.row(0);
  Eigen::MatrixXcd m = g * g.adjoint();
  m /= m.trace().real();
  return Density(m);
}

Density sample_state(int d, int rank, Rng& rng, bool real_only) { return random_density(d, rank, rng, real_only); }

bool OracleReport::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.pass; });
}

}  // namespace roofkit

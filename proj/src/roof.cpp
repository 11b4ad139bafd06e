#include "roofkit/roof.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "roofkit/random.hpp"

namespace roofkit {

namespace {

void validate_ensemble(std::vector<double>& weights, const std::vector<State>& states, double weight_floor) {
  if (weights.empty() || weights.size() != states.size()) {
    throw Error(ErrorKind::InvalidEnsemble, "weights and states must be non-empty and of equal length");
  }
  const Eigen::Index d = states.front().dim();
  for (const auto& s : states) {
    if (s.dim() != d) throw Error(ErrorKind::InvalidEnsemble, "states of different dimension");
  }
  if (weights.size() > static_cast<std::size_t>(d * d)) {
    throw Error(ErrorKind::InvalidEnsemble, "ensemble longer than d^2");
  }
  double total = 0;
  for (double w : weights) {
    if (!(w > 0) || w < weight_floor) {
      throw Error(ErrorKind::InvalidEnsemble, "weight " + std::to_string(w) + " below floor");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorKind::InvalidEnsemble, "weights sum to " + std::to_string(total));
  }
  for (double& w : weights) w /= total;
}

}  // namespace

Ensemble::Ensemble(std::vector<double> weights, std::vector<State> states, double weight_floor)
    : weights_(std::move(weights)), states_(std::move(states)) {
  validate_ensemble(weights_, states_, weight_floor);
}

Ensemble::Ensemble(std::vector<double> weights, std::vector<State> states, const Density& target, double tol,
                   double weight_floor)
    : Ensemble(std::move(weights), std::move(states), weight_floor) {
  if (target.dim() != dim()) throw Error(ErrorKind::InvalidEnsemble, "target dimension mismatch");
  const double err = max_abs_entry(mix_matrix(*this) - target.matrix());
  if (!(err <= tol)) {
    throw Error(ErrorKind::InvalidEnsemble, "mixture misses target by " + std::to_string(err));
  }
}

Eigen::MatrixXcd mix_matrix(const Ensemble& e) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(e.dim(), e.dim());
  for (std::size_t j = 0; j < e.size(); ++j) {
    const auto& v = e.states()[j].vector();
    out.noalias() += e.weights()[j] * (v * v.adjoint());
  }
  return out;
}

Density mix(const Ensemble& e) { return Density(mix_matrix(e)); }

double ensemble_objective(const Ensemble& e) {
  double total = 0;
  for (std::size_t j = 0; j < e.size(); ++j) total += e.weights()[j] * tilde_entropy(e.states()[j]);
  return total;
}

Ensemble ensembles_from_isometry(const Density& d, const Eigen::MatrixXcd& w, double weight_floor) {
  const int k = rank_of(d);
  if (w.cols() != k) {
    throw Error(ErrorKind::NotIsometry, "isometry has " + std::to_string(w.cols()) + " columns, rank is " +
                                            std::to_string(k));
  }
  if (w.rows() > d.dim() * d.dim()) throw Error(ErrorKind::NotIsometry, "more rows than d^2");
  const double defect = max_abs_entry(w.adjoint() * w - Eigen::MatrixXcd::Identity(k, k));
  if (!(defect <= 1e-8)) throw Error(ErrorKind::NotIsometry, "W^H W deviates by " + std::to_string(defect));

  const Eigen::Index dim = d.dim();
  Eigen::MatrixXcd amplitudes(dim, k);  // column l = sqrt(lambda_l) v_l
  for (int l = 0; l < k; ++l) {
    const Eigen::Index idx = dim - 1 - l;
    amplitudes.col(l) = std::sqrt(d.eigenvalues()(idx)) * d.eigenvectors().col(idx);
  }
  const Eigen::MatrixXcd u = w * amplitudes.transpose();  // row j = u_j^T

  std::vector<double> weights;
  std::vector<State> states;
  double kept = 0;
  for (Eigen::Index j = 0; j < u.rows(); ++j) {
    const double p = u.row(j).squaredNorm();
    if (p < weight_floor) continue;
    weights.push_back(p);
    states.emplace_back(Eigen::VectorXcd(u.row(j).transpose()));
    kept += p;
  }
  for (double& p : weights) p /= kept;
  return Ensemble(std::move(weights), std::move(states), weight_floor);
}

Ensemble compact_ensemble(const Ensemble& e, const Density& target, bool minimize, double weight_floor) {
  const Eigen::MatrixXcd basis = support_basis(target);
  const Eigen::Index k = basis.cols();
  const Eigen::Index coords = k * k;

  std::vector<double> p = e.weights();
  std::vector<State> states = e.states();
  std::vector<double> values(states.size());
  for (std::size_t j = 0; j < states.size(); ++j) values[j] = tilde_entropy(states[j]);

  const auto projector_coords = [&](const State& s) {
    const Eigen::VectorXcd c = basis.adjoint() * s.vector();
    Eigen::VectorXd out(coords);
    Eigen::Index n = 0;
    for (Eigen::Index a = 0; a < k; ++a) {
      out(n++) = std::norm(c(a));
      for (Eigen::Index b = a + 1; b < k; ++b) {
        const std::complex<double> z = c(a) * std::conj(c(b));
        out(n++) = std::sqrt(2.0) * z.real();
        out(n++) = std::sqrt(2.0) * z.imag();
      }
    }
    return out;
  };

  while (states.size() > 1) {
    const Eigen::Index m = static_cast<Eigen::Index>(states.size());
    Eigen::MatrixXd a(coords, m);
    for (Eigen::Index j = 0; j < m; ++j) a.col(j) = projector_coords(states[j]);

    Eigen::VectorXd null;
    if (m > coords) {
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      null = lu.kernel().col(0);
    } else {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
      const Eigen::VectorXd sv = svd.singularValues();
      if (sv(m - 1) > 1e-10 * std::max(1.0, sv(0))) break;
      null = svd.matrixV().col(m - 1);
    }
    if (null.cwiseAbs().maxCoeff() <= 0) break;

    double slope = 0;
    for (Eigen::Index j = 0; j < m; ++j) slope += null(j) * values[j];
    // Step p -> p - t * null; choose the sign so the objective moves the right way.
    if ((minimize && slope < 0) || (!minimize && slope > 0)) null = -null;

    double t = std::numeric_limits<double>::infinity();
    Eigen::Index hit = -1;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (null(j) > 1e-14 && p[j] / null(j) < t) {
        t = p[j] / null(j);
        hit = j;
      }
    }
    if (hit < 0) {
      null = -null;
      for (Eigen::Index j = 0; j < m; ++j) {
        if (null(j) > 1e-14 && p[j] / null(j) < t) {
          t = p[j] / null(j);
          hit = j;
        }
      }
      if (hit < 0) break;
    }
    std::vector<double> next_p;
    std::vector<State> next_s;
    std::vector<double> next_v;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double w = (j == hit) ? 0.0 : p[j] - t * null(j);
      if (w > 1e-15) {
        next_p.push_back(w);
        next_s.push_back(states[j]);
        next_v.push_back(values[j]);
      }
    }
    p = std::move(next_p);
    states = std::move(next_s);
    values = std::move(next_v);
  }

  std::vector<double> kept_p;
  std::vector<State> kept_s;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] >= weight_floor) {
      kept_p.push_back(p[j]);
      kept_s.push_back(states[j]);
    }
  }
  const double total = std::accumulate(kept_p.begin(), kept_p.end(), 0.0);
  for (double& w : kept_p) w /= total;
  return Ensemble(std::move(kept_p), std::move(kept_s), weight_floor);
}

double subalgebra_entropy(const Density& d, const OptimizerConfig& cfg) {
  const double h = tilde_entropy(d) - convex_roof(d, cfg).value;
  return std::max(0.0, h);
}

SupportCheck check_support_functional(const SupportFunctional& a, const Density& d, int samples,
                                      std::uint64_t seed, std::optional<double> roof_value, double tolerance,
                                      double touch_tolerance) {
  SupportCheck out;
  out.samples = samples;
  out.max_violation = -std::numeric_limits<double>::infinity();
  Rng rng = make_rng(seed, 0);
  const Eigen::MatrixXcd& op = a.op.matrix();
  for (int n = 0; n < samples; ++n) {
    const State psi = random_pure_state(d.dim(), rng);
    const double expect = psi.vector().dot(op * psi.vector()).real();
    out.max_violation = std::max(out.max_violation, expect - tilde_entropy(psi));
  }
  // The basis states are where tilde_entropy vanishes; always include them.
  for (Eigen::Index i = 0; i < d.dim(); ++i) out.max_violation = std::max(out.max_violation, op(i, i).real());
  out.below_on_pure = out.max_violation <= tolerance;
  if (roof_value) {
    const double expect = (op * d.matrix()).trace().real();
    out.touch_gap = std::abs(expect - *roof_value);
  }
  out.supports = out.below_on_pure && out.touch_gap && *out.touch_gap <= touch_tolerance;
  return out;
}

SupportFunctional fit_support_functional(const std::vector<State>& touching, double complement_shift) {
  if (touching.empty()) throw Error(ErrorKind::DomainError, "need at least one touching state");
  const Eigen::Index d = touching.front().dim();
  // Parameters: d real diagonal entries, then (re, im) of each upper entry.
  const Eigen::Index params = d * d;
  const auto param_matrix = [&](Eigen::Index q) {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(d, d);
    if (q < d) {
      b(q, q) = 1;
      return b;
    }
    Eigen::Index n = d;
    for (Eigen::Index r = 0; r < d; ++r) {
      for (Eigen::Index c = r + 1; c < d; ++c) {
        if (n == q) {
          b(r, c) = 1;
          b(c, r) = 1;
          return b;
        }
        if (n + 1 == q) {
          b(r, c) = std::complex<double>(0, 1);
          b(c, r) = std::complex<double>(0, -1);
          return b;
        }
        n += 2;
      }
    }
    return b;
  };

  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  for (const auto& s : touching) {
    const Eigen::VectorXcd& psi = s.vector();
    std::vector<Eigen::VectorXcd> images(params);
    for (Eigen::Index q = 0; q < params; ++q) images[q] = param_matrix(q) * psi;
    for (Eigen::Index i = 0; i < d; ++i) {
      const double x = std::norm(psi(i));
      if (x < 1e-12) continue;
      const std::complex<double> target = -std::log(x) * psi(i);
      Eigen::VectorXd re(params), im(params);
      for (Eigen::Index q = 0; q < params; ++q) {
        re(q) = images[q](i).real();
        im(q) = images[q](i).imag();
      }
      rows.push_back(re);
      rhs.push_back(target.real());
      rows.push_back(im);
      rhs.push_back(target.imag());
    }
  }
  if (rows.empty()) return {Hermitian::zero(d)};
  Eigen::MatrixXd a(rows.size(), params);
  Eigen::VectorXd b(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    a.row(r) = rows[r].transpose();
    b(r) = rhs[r];
  }
  const Eigen::VectorXd x = a.completeOrthogonalDecomposition().solve(b);
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index q = 0; q < params; ++q) op += x(q) * param_matrix(q);

  // The block on the complement of the touching states is unconstrained.
  Eigen::MatrixXcd span(d, touching.size());
  for (std::size_t j = 0; j < touching.size(); ++j) span.col(j) = touching[j].vector();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(span, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  Eigen::Index k = 0;
  while (k < sv.size() && sv(k) > 1e-8 * sv(0)) ++k;
  const Eigen::MatrixXcd outside = svd.matrixU().rightCols(d - k);
  op -= complement_shift * (outside * outside.adjoint());
  return {Hermitian(Eigen::MatrixXcd(0.5 * (op + op.adjoint())))};
}

Facet facet_of(const Density& d, const OptimizerConfig& cfg) { return analyze_roof(d, cfg).facet; }

}  // namespace roofkit

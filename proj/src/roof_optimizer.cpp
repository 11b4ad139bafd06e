// Multistart descent over m x k isometries W. The ensemble generated by W has
// unnormalized members u_j = sum_l W_jl sqrt(lambda_l) v_l, and with
// x_ji = |u_j(i)|^2, p_j = sum_i x_ji the objective is
//
//   F(W) = sum_j p_j tilde_entropy(u_j / |u_j|) = sum_j [ sum_i s(x_ji) - s(p_j) ].
//
// Its Wirtinger gradient with respect to conj(u_j(i)) is (ln p_j - ln x_ji) u_j(i).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include "roofkit/parallel.hpp"
#include "roofkit/random.hpp"
#include "roofkit/roof.hpp"

namespace roofkit {

namespace {

using Mat = Eigen::MatrixXcd;

constexpr double kLogClamp = 1e-12;

std::atomic<std::uint64_t> audit_ensembles{0};
std::atomic<std::uint64_t> audit_over_rank{0};
std::atomic<std::uint64_t> audit_over_dim{0};

void audit(const Ensemble& e, int rank) {
  audit_ensembles.fetch_add(1);
  const auto n = static_cast<std::uint64_t>(e.size());
  if (n > static_cast<std::uint64_t>(rank) * rank) audit_over_rank.fetch_add(1);
  if (n > static_cast<std::uint64_t>(e.dim() * e.dim())) audit_over_dim.fetch_add(1);
}

struct Problem {
  Mat amplitudes_t;  // k x d, row l = sqrt(lambda_l) v_l^T
  Mat amplitudes_c;  // d x k, conj of the transpose of the above
  double sense = 1;  // +1 minimize F, -1 maximize F
  bool real_only = false;
};

inline double s_term(double x) { return x > 0 ? -x * std::log(x) : 0.0; }

double objective(const Problem& pb, const Mat& w, Mat& u) {
  u.noalias() = w * pb.amplitudes_t;
  double f = 0;
  for (Eigen::Index j = 0; j < u.rows(); ++j) {
    double p = 0;
    for (Eigen::Index i = 0; i < u.cols(); ++i) {
      const double x = std::norm(u(j, i));
      p += x;
      f += s_term(x);
    }
    f -= s_term(p);
  }
  return pb.sense * f;
}

// Riemannian gradient at W given u = W * amplitudes_t.
Mat riemannian_gradient(const Problem& pb, const Mat& w, const Mat& u) {
  Mat gu(u.rows(), u.cols());
  for (Eigen::Index j = 0; j < u.rows(); ++j) {
    const double p = u.row(j).squaredNorm();
    const double lp = std::log(std::max(p, kLogClamp));
    for (Eigen::Index i = 0; i < u.cols(); ++i) {
      const double x = std::norm(u(j, i));
      gu(j, i) = (lp - std::log(std::max(x, kLogClamp))) * u(j, i);
    }
  }
  Mat g = (2.0 * pb.sense) * (gu * pb.amplitudes_c);
  if (pb.real_only) g = g.real().cast<std::complex<double>>();
  const Mat wg = w.adjoint() * g;
  return g - w * (0.5 * (wg + wg.adjoint()));
}

double real_inner(const Mat& a, const Mat& b) { return (a.adjoint() * b).trace().real(); }

struct Outcome {
  Mat w;
  double value = 0;  // in minimization sense (sense * F)
  bool converged = false;
  std::vector<double> history;  // sense * F
};

// Armijo-backtracked gradient descent with Barzilai-Borwein trial steps.
// Appends accepted values to `history`; returns the iterations spent.
int descend(const Problem& pb, Mat& w, double& value, std::vector<double>& history, int max_iters,
            const OptimizerConfig& cfg, bool& converged) {
  Mat u;
  value = objective(pb, w, u);
  Mat grad = riemannian_gradient(pb, w, u);
  Mat w_prev, grad_prev;
  double alpha = 0.5;
  const std::size_t base = history.size();
  history.push_back(value);
  converged = false;
  int it = 0;
  for (; it < max_iters; ++it) {
    const double gnorm2 = grad.squaredNorm();
    if (gnorm2 < 1e-28) {
      converged = true;
      break;
    }
    if (it > 0) {
      const Mat sdir = w - w_prev;
      const Mat ydir = grad - grad_prev;
      const double sy = real_inner(sdir, ydir);
      if (sy > 1e-300) alpha = std::clamp(sdir.squaredNorm() / sy, 1e-8, 1e3);
      else alpha = std::min(alpha * 4.0, 1e3);
    }
    bool accepted = false;
    Mat trial;
    double trial_value = 0;
    for (int bt = 0; bt < 50; ++bt) {
      trial = orthonormalize(w - alpha * grad);
      if (pb.real_only) trial = trial.real().cast<std::complex<double>>();
      trial_value = objective(pb, trial, u);
      if (trial_value <= value - 1e-4 * alpha * gnorm2) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      converged = true;
      break;
    }
    if (trial_value > value + 1e-6) {
      throw Error(ErrorKind::OptimizerDiverged, "objective increased between accepted steps");
    }
    w_prev = std::move(w);
    grad_prev = std::move(grad);
    w = std::move(trial);
    value = trial_value;
    grad = riemannian_gradient(pb, w, u);
    history.push_back(value);
    const std::size_t n = history.size() - base;
    if (n > static_cast<std::size_t>(cfg.stall_window) &&
        history[history.size() - 1 - cfg.stall_window] - value < cfg.tol) {
      converged = true;
      ++it;
      break;
    }
  }
  return it;
}

Outcome run_restart(const Problem& pb, Mat w0, const OptimizerConfig& cfg, Rng& rng) {
  Outcome out;
  out.w = std::move(w0);
  int budget = cfg.max_iters;
  budget -= descend(pb, out.w, out.value, out.history, budget, cfg, out.converged);
  for (int e = 0; e < cfg.escape_trials && budget > 0; ++e) {
    Mat kick = gaussian_matrix(out.w.rows(), out.w.cols(), rng, pb.real_only);
    Mat trial = orthonormalize(out.w + cfg.escape_scale * kick);
    if (pb.real_only) trial = trial.real().cast<std::complex<double>>();
    std::vector<double> scratch;
    double trial_value = 0;
    bool trial_converged = false;
    budget -= descend(pb, trial, trial_value, scratch, budget, cfg, trial_converged);
    if (trial_value < out.value - cfg.tol) {
      out.w = std::move(trial);
      out.value = trial_value;
      out.converged = trial_converged;
      out.history.push_back(trial_value);
    } else {
      break;
    }
  }
  return out;
}

struct RawEnsemble {
  std::vector<double> weights;
  std::vector<State> states;
};

RawEnsemble raw_ensemble(const Problem& pb, const Mat& w) {
  const Mat u = w * pb.amplitudes_t;
  RawEnsemble out;
  for (Eigen::Index j = 0; j < u.rows(); ++j) {
    const double p = u.row(j).squaredNorm();
    if (p < 1e-300) continue;
    out.weights.push_back(p);
    out.states.emplace_back(Eigen::VectorXcd(u.row(j).transpose()));
  }
  return out;
}

struct MultiStart {
  Problem problem;
  std::vector<Outcome> outcomes;
  std::size_t best = 0;
};

MultiStart multistart(const Density& d, const OptimizerConfig& cfg, double sense) {
  const int k = rank_of(d);
  const Eigen::Index dim = d.dim();
  const Eigen::Index m = cfg.m > 0 ? cfg.m : dim * dim;
  if (m < k) throw Error(ErrorKind::DomainError, "ensemble length below rank");
  if (m > dim * dim) throw Error(ErrorKind::DomainError, "ensemble length above d^2");

  if (cfg.real_only && max_abs_entry(d.matrix().imag()) > 1e-12) {
    throw Error(ErrorKind::DomainError, "real-restricted optimization needs a real state");
  }

  MultiStart ms;
  ms.problem.sense = sense;
  ms.problem.real_only = cfg.real_only;
  Eigen::MatrixXcd vecs(dim, k);
  Eigen::VectorXd lams(k);
  if (cfg.real_only) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> real_solver(d.matrix().real());
    for (int l = 0; l < k; ++l) {
      vecs.col(l) = real_solver.eigenvectors().col(dim - 1 - l).cast<std::complex<double>>();
      lams(l) = std::max(0.0, real_solver.eigenvalues()(dim - 1 - l));
    }
  } else {
    for (int l = 0; l < k; ++l) {
      vecs.col(l) = d.eigenvectors().col(dim - 1 - l);
      lams(l) = d.eigenvalues()(dim - 1 - l);
    }
  }
  Eigen::MatrixXcd amp(dim, k);
  for (int l = 0; l < k; ++l) amp.col(l) = std::sqrt(lams(l)) * vecs.col(l);
  ms.problem.amplitudes_t = amp.transpose();
  ms.problem.amplitudes_c = amp.conjugate();

  const int restarts = std::max(1, cfg.restarts);
  ms.outcomes.resize(restarts);
  parallel_for(restarts, cfg.threads, [&](std::size_t r) {
    Rng rng = make_rng(cfg.seed, r);
    Mat w0;
    if (r == 0) {
      w0 = Mat::Zero(m, k);
      w0.topRows(k) = Mat::Identity(k, k);
    } else {
      w0 = random_isometry(m, k, rng, cfg.real_only);
    }
    ms.outcomes[r] = run_restart(ms.problem, std::move(w0), cfg, rng);
  });
  for (std::size_t r = 1; r < ms.outcomes.size(); ++r) {
    if (ms.outcomes[r].value < ms.outcomes[ms.best].value) ms.best = r;
  }
  return ms;
}

RoofResult finish(const Density& d, const MultiStart& ms, const OptimizerConfig& cfg, bool minimize) {
  const Outcome& best = ms.outcomes[ms.best];
  RawEnsemble raw = raw_ensemble(ms.problem, best.w);
  double total = 0;
  for (double p : raw.weights) total += p;
  for (double& p : raw.weights) p /= total;
  const Ensemble full(std::move(raw.weights), std::move(raw.states), 0.0 + 1e-300);
  Ensemble compact = compact_ensemble(full, d, minimize, cfg.weight_floor);
  const double value = ensemble_objective(compact);
  audit(compact, rank_of(d));

  std::vector<double> history;
  history.reserve(best.history.size() + 1);
  for (double v : best.history) history.push_back(ms.problem.sense * v);
  history.push_back(value);
  return RoofResult{value, std::move(compact), best.converged, static_cast<int>(ms.outcomes.size()),
                    std::move(history)};
}

RoofResult pure_result(const Density& d) {
  const State psi(Eigen::VectorXcd(d.eigenvectors().col(d.dim() - 1)));
  Ensemble e({1.0}, {psi});
  audit(e, 1);
  const double v = tilde_entropy(psi);
  return RoofResult{v, std::move(e), true, 0, {v}};
}

// Greedy clustering by trace distance; heavier states seed clusters first.
std::vector<State> deduplicate(std::vector<std::pair<double, State>> candidates, double state_tol) {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<State> reps;
  for (const auto& [w, s] : candidates) {
    const bool seen = std::any_of(reps.begin(), reps.end(),
                                  [&](const State& r) { return trace_distance(r, s) < state_tol; });
    if (!seen) reps.push_back(s);
  }
  std::sort(reps.begin(), reps.end(), [](const State& a, const State& b) {
    const auto& va = a.vector();
    const auto& vb = b.vector();
    for (Eigen::Index i = 0; i < va.size(); ++i) {
      if (va(i).real() != vb(i).real()) return va(i).real() > vb(i).real();
      if (va(i).imag() != vb(i).imag()) return va(i).imag() > vb(i).imag();
    }
    return false;
  });
  return reps;
}

}  // namespace

LengthAudit length_audit() {
  return {audit_ensembles.load(), audit_over_rank.load(), audit_over_dim.load()};
}

void reset_length_audit() {
  audit_ensembles = 0;
  audit_over_rank = 0;
  audit_over_dim = 0;
}

RoofResult convex_roof(const Density& d, const OptimizerConfig& cfg) {
  if (rank_of(d) <= 1) return pure_result(d);
  return finish(d, multistart(d, cfg, 1.0), cfg, true);
}

RoofResult concave_roof(const Density& d, const OptimizerConfig& cfg) {
  if (rank_of(d) <= 1) return pure_result(d);
  return finish(d, multistart(d, cfg, -1.0), cfg, false);
}

RoofAnalysis analyze_roof(const Density& d, const OptimizerConfig& cfg) {
  if (rank_of(d) <= 1) {
    RoofResult r = pure_result(d);
    Facet f{{r.ensemble.states().front()}, {fit_support_functional({r.ensemble.states().front()})}};
    return {std::move(r), std::move(f)};
  }
  const MultiStart ms = multistart(d, cfg, 1.0);
  RoofResult roof = finish(d, ms, cfg, true);

  std::vector<std::pair<double, State>> candidates;
  const double best_value = ms.outcomes[ms.best].value;
  for (const Outcome& o : ms.outcomes) {
    if (o.value > best_value + cfg.cluster_tol) continue;
    RawEnsemble raw = raw_ensemble(ms.problem, o.w);
    for (std::size_t j = 0; j < raw.states.size(); ++j) {
      if (raw.weights[j] >= cfg.weight_floor) candidates.emplace_back(raw.weights[j], raw.states[j]);
    }
  }
  Facet facet;
  facet.generators = deduplicate(std::move(candidates), cfg.state_tol);
  facet.functionals.push_back(fit_support_functional(facet.generators));
  return {std::move(roof), std::move(facet)};
}

}  // namespace roofkit

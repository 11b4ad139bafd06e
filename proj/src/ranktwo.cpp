#include "roofkit/ranktwo.hpp"

#include <cmath>

#include "roofkit/oracle.hpp"

namespace roofkit {

namespace {

double s_of(double x) { return entropy_term(std::clamp(x, 0.0, 1.0)); }

void require_rank_two(const Density& d) {
  const int k = rank_of(d);
  if (k != 2) throw Error(ErrorKind::RankMismatch, "state has rank " + std::to_string(k) + ", expected 2");
}

State top_eigenvector(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  return State(Eigen::VectorXcd(solver.eigenvectors().col(m.rows() - 1)));
}

}  // namespace

Transposition::Transposition(Eigen::Index d, Eigen::Index i, Eigen::Index j) : d_(d), i_(i), j_(j) {
  if (i_ > j_) std::swap(i_, j_);
  if (i_ < 0 || j_ >= d_ || i_ == j_) {
    throw Error(ErrorKind::OutOfRange, "transposition (" + std::to_string(i) + "," + std::to_string(j) +
                                           ") invalid in dimension " + std::to_string(d));
  }
  u_ = Eigen::MatrixXcd::Identity(d_, d_);
  u_(i_, i_) = 0;
  u_(j_, j_) = 0;
  u_(i_, j_) = 1;
  u_(j_, i_) = 1;
}

Hermitian rank2_support(const Density& d) {
  require_rank_two(d);
  const double purity = d.purity();
  if (purity >= 1 - 1e-12) throw Error(ErrorKind::DegenerateTrace, "Tr D^2 is 1; the state is pure");
  const Eigen::MatrixXcd& m = d.matrix();
  return Hermitian(Eigen::MatrixXcd(2.0 * (m - m * m) / (1 - purity)));
}

PauliFrame pauli_frame(const Hermitian& q, const Transposition& t) {
  const Eigen::MatrixXcd& qm = q.matrix();
  const Eigen::MatrixXcd& u = t.unitary();
  if (qm.rows() != t.dim()) throw Error(ErrorKind::DomainError, "support and transposition differ in dimension");
  if (commutator_defect(qm, u) > 1e-9) throw Error(ErrorKind::NotSymmetric, "support does not commute with U");
  const Eigen::Index i = t.first();
  const Eigen::Index j = t.second();
  const double y2 = qm(i, i).real() * qm(j, j).real() - std::norm(qm(i, j));
  const double y = std::sqrt(std::max(0.0, y2));
  if (!(y > 1e-10)) {
    throw Error(ErrorKind::DegenerateFrame, "P_i and P_j coincide on the support (y = " + std::to_string(y) + ")");
  }
  Eigen::MatrixXcd diff = Eigen::MatrixXcd::Zero(t.dim(), t.dim());
  diff(i, i) = 1;
  diff(j, j) = -1;
  return {Hermitian(Eigen::MatrixXcd(qm * diff * qm / y), 1e-8), Hermitian(Eigen::MatrixXcd(u * qm), 1e-8), y};
}

Rank2Solution rank2_roof(const Density& d, const Transposition& t) {
  require_rank_two(d);
  if (d.dim() != t.dim()) throw Error(ErrorKind::DomainError, "state and transposition differ in dimension");
  const Eigen::MatrixXcd& m = d.matrix();
  const double defect = commutator_defect(m, t.unitary());
  if (defect > kCommutatorTol) {
    throw Error(ErrorKind::NotSymmetric, "[D, U] = " + std::to_string(defect) + " exceeds 1e-10");
  }
  Rank2Solution out;
  out.q = rank2_support(d);
  PauliFrame frame = pauli_frame(out.q, t);
  out.sigma1 = std::move(frame.sigma1);
  out.sigma3 = std::move(frame.sigma3);
  out.y = frame.y;
  out.x3 = (m * out.sigma3.matrix()).trace().real();

  const Eigen::Index i = t.first();
  const Eigen::Index j = t.second();
  const double dii = m(i, i).real();
  const double quarter = std::max(0.0, dii * m(j, j).real() - std::norm(m(i, j)));
  out.x1 = 2 * std::sqrt(quarter) / out.y;
  const double half = 0.5 * out.x1 * out.y;

  double rest = 0;
  for (Eigen::Index k = 0; k < d.dim(); ++k) {
    if (k != i && k != j) rest += s_of(m(k, k).real());
  }
  out.r_value = s_of(dii + half) + s_of(dii - half) + rest;
  out.h_value = 2 * s_of(dii) - s_of(dii + half) - s_of(dii - half);

  const double x1_pair = std::sqrt(std::max(0.0, 1 - out.x3 * out.x3));
  const Eigen::MatrixXcd rho = m + 0.5 * x1_pair * out.sigma1.matrix();
  const Eigen::MatrixXcd& u = t.unitary();
  out.optimal_pair = {top_eigenvector(rho), top_eigenvector(u * rho * u)};
  return out;
}

Lemma6Check lemma6_check(const Density& d, const Transposition& t, const Lemma6Config& cfg) {
  require_rank_two(d);
  Lemma6Check out;
  out.commutes = commutator_defect(d.matrix(), t.unitary()) <= kCommutatorTol;
  if (!out.commutes) {
    out.failed = "state does not commute with the transposition";
    return out;
  }
  try {
    const Rank2Solution sol = rank2_roof(d, t);
    out.rotates_support = true;
    out.closed_form = sol.r_value;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateFrame) throw;
    out.failed = "transposition acts as a multiple of the identity on the support";
    return out;
  }
  out.oracle = brute_force_roof(d, 4, cfg.budget, cfg.seed, cfg.threads);
  out.confirmed = out.closed_form <= out.oracle + cfg.cross_tol;
  if (!out.confirmed) out.failed = "a decomposition beats the length-two candidate";
  return out;
}

bool lemma6_applicable(const Density& d, const Transposition& t, const Lemma6Config& cfg) {
  return lemma6_check(d, t, cfg).applicable();
}

}  // namespace roofkit

#pragma once

#include <cmath>
#include <string>

#include "roofkit/hermitian.hpp"

// The commutative subalgebra is always the diagonal algebra of the standard
// basis. Other maximal commutative subalgebras are reached by conjugating the
// input with the unitary that maps their minimal projectors to |j><j|.

namespace roofkit {

/// Diagonal of a state in the standard basis.
template <typename Scalar>
struct ProbabilityVector {
  RVector<Scalar> p;

  Eigen::Index dim() const { return p.size(); }
  Scalar operator[](Eigen::Index i) const { return p(i); }
};

/// s(x) = -x ln x with s(0) = 0.
template <typename Scalar>
Scalar entropy_term(Scalar x) {
  if (x < Scalar(-1e-12) || x > Scalar(1) + Scalar(1e-9) || std::isnan(x)) {
    throw Error(ErrorKind::DomainError, "entropy_term argument " + std::to_string(x) + " outside [0,1]");
  }
  if (x <= Scalar(0)) return Scalar(0);
  return -x * std::log(x);
}

template <typename Scalar>
ProbabilityVector<Scalar> reduce(const DensityMatrix<Scalar>& d) {
  return {d.matrix().diagonal().real()};
}

template <typename Scalar>
Scalar shannon_entropy(const ProbabilityVector<Scalar>& p) {
  Scalar h = 0;
  for (Eigen::Index i = 0; i < p.dim(); ++i) h += entropy_term(p[i]);
  return h;
}

/// Entropy of the restriction to the diagonal algebra, in nats.
template <typename Scalar>
Scalar tilde_entropy(const DensityMatrix<Scalar>& d) {
  return shannon_entropy(reduce(d));
}

template <typename Scalar>
Scalar tilde_entropy(const PureState<Scalar>& psi) {
  Scalar h = 0;
  for (Eigen::Index i = 0; i < psi.dim(); ++i) h += entropy_term(std::norm(psi.vector()(i)));
  return h;
}

template <typename Scalar>
Scalar von_neumann_entropy(const DensityMatrix<Scalar>& d) {
  Scalar h = 0;
  for (Eigen::Index i = 0; i < d.dim(); ++i) h += entropy_term(d.eigenvalues()(i));
  return h;
}

}  // namespace roofkit

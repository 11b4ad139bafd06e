#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

#include "roofkit/errors.hpp"

namespace roofkit {

template <typename Scalar>
using Complex = std::complex<Scalar>;
template <typename Scalar>
using CMatrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using CVector = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using RVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Library-wide tolerances. Every module uses these unless a signature takes
// an explicit override.
namespace tol {
inline constexpr double hermitian_construct = 1e-12;
inline constexpr double hermitian_validate = 1e-9;
inline constexpr double trace_validate = 1e-9;
inline constexpr double eigen_clamp = 1e-10;
inline constexpr double negative_eigen = 1e-9;
inline constexpr double rank = 1e-9;
inline constexpr double phase_cutoff = 1e-12;
}  // namespace tol

template <typename Derived>
auto max_abs_entry(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? typename Derived::RealScalar(0) : m.cwiseAbs().maxCoeff();
}

template <typename Derived>
auto hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  return max_abs_entry(m - m.adjoint());
}

/// Rotate `v` so its first component with modulus above the cutoff is real
/// and positive.
template <typename Scalar>
void apply_phase_convention(Eigen::Ref<CVector<Scalar>> v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const Scalar mag = std::abs(v(i));
    if (mag > Scalar(tol::phase_cutoff)) {
      v *= std::conj(v(i)) / mag;
      v(i) = Complex<Scalar>(mag, 0);
      return;
    }
  }
}

/// Dense complex Hermitian matrix. Construction validates the Hermitian
/// defect and then symmetrizes exactly.
template <typename Scalar>
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  explicit HermitianMatrix(const CMatrix<Scalar>& m, Scalar validate_tol = Scalar(tol::hermitian_validate)) {
    if (m.rows() != m.cols() || m.rows() == 0) {
      throw Error(ErrorKind::NonHermitianInput, "matrix must be square and non-empty");
    }
    const Scalar defect = hermiticity_defect(m);
    if (!(defect <= validate_tol)) {
      throw Error(ErrorKind::NonHermitianInput,
                  "hermiticity defect " + std::to_string(defect) + " exceeds tolerance");
    }
    m_ = (m + m.adjoint()) * Scalar(0.5);
  }

  static HermitianMatrix zero(Eigen::Index d) { return HermitianMatrix(CMatrix<Scalar>::Zero(d, d)); }
  static HermitianMatrix identity(Eigen::Index d) { return HermitianMatrix(CMatrix<Scalar>::Identity(d, d)); }

  Eigen::Index dim() const { return m_.rows(); }
  const CMatrix<Scalar>& matrix() const { return m_; }
  Complex<Scalar> operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  CMatrix<Scalar> m_;
};

template <typename Scalar>
struct EigenSystem {
  RVector<Scalar> values;   // ascending
  CMatrix<Scalar> vectors;  // orthonormal columns
};

namespace detail {

template <typename Scalar>
std::pair<Eigen::Index, Scalar> leading_component(const CVector<Scalar>& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const Scalar mag = std::abs(v(i));
    if (mag > Scalar(tol::phase_cutoff)) return {i, mag};
  }
  return {v.size(), Scalar(0)};
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix with ascending eigenvalues.
/// Eigenvectors follow the phase convention; inside a degenerate cluster
/// (gap below 1e-12) columns are ordered by the index of their leading
/// component, then by decreasing modulus of that component.
template <typename Scalar>
EigenSystem<Scalar> eigh(const HermitianMatrix<Scalar>& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::NonHermitianInput, "eigendecomposition did not converge");
  }
  EigenSystem<Scalar> out{solver.eigenvalues(), solver.eigenvectors()};
  const Eigen::Index d = out.values.size();
  for (Eigen::Index c = 0; c < d; ++c) apply_phase_convention<Scalar>(out.vectors.col(c));

  Eigen::Index start = 0;
  while (start < d) {
    Eigen::Index end = start + 1;
    while (end < d && out.values(end) - out.values(end - 1) < Scalar(1e-12)) ++end;
    if (end - start > 1) {
      std::vector<Eigen::Index> order(end - start);
      std::iota(order.begin(), order.end(), start);
      std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        const auto la = detail::leading_component<Scalar>(out.vectors.col(a));
        const auto lb = detail::leading_component<Scalar>(out.vectors.col(b));
        if (la.first != lb.first) return la.first < lb.first;
        return la.second > lb.second;
      });
      CMatrix<Scalar> block(d, end - start);
      for (std::size_t k = 0; k < order.size(); ++k) block.col(k) = out.vectors.col(order[k]);
      out.vectors.middleCols(start, end - start) = block;
    }
    start = end;
  }
  return out;
}

/// Unit-norm state vector. The global phase is fixed by the phase convention.
template <typename Scalar>
class PureState {
 public:
  PureState() = default;

  explicit PureState(CVector<Scalar> v) : v_(std::move(v)) {
    const Scalar n = v_.norm();
    if (!(n > Scalar(1e-300))) throw Error(ErrorKind::DomainError, "zero vector is not a state");
    v_ /= n;
    apply_phase_convention<Scalar>(v_);
  }

  static PureState basis(Eigen::Index d, Eigen::Index k) {
    CVector<Scalar> v = CVector<Scalar>::Zero(d);
    v(k) = 1;
    return PureState(v);
  }

  Eigen::Index dim() const { return v_.size(); }
  const CVector<Scalar>& vector() const { return v_; }
  CMatrix<Scalar> projector() const { return v_ * v_.adjoint(); }

 private:
  CVector<Scalar> v_;
};

/// |<a|b>|^2 for two pure states.
template <typename Scalar>
Scalar fidelity(const PureState<Scalar>& a, const PureState<Scalar>& b) {
  return std::norm(a.vector().dot(b.vector()));
}

/// Trace distance between two pure states, sqrt(1 - |<a|b>|^2).
template <typename Scalar>
Scalar trace_distance(const PureState<Scalar>& a, const PureState<Scalar>& b) {
  return std::sqrt(std::max(Scalar(0), Scalar(1) - fidelity(a, b)));
}

/// Positive semidefinite, unit-trace Hermitian matrix with its cached
/// eigensystem. Eigenvalues in [-1e-10, 0) are clamped to zero; anything more
/// negative is rejected. A trace within 1e-9 of one is accepted and then
/// normalized exactly.
template <typename Scalar>
class DensityMatrix {
 public:
  DensityMatrix() = default;

  explicit DensityMatrix(const HermitianMatrix<Scalar>& h) {
    const Scalar tr = h.matrix().trace().real();
    if (!(std::abs(tr - Scalar(1)) <= Scalar(tol::trace_validate))) {
      throw Error(ErrorKind::InvalidTrace, "trace " + std::to_string(tr) + " differs from 1");
    }
    h_ = HermitianMatrix<Scalar>(h.matrix() / tr);
    eig_ = eigh(h_);
    for (Eigen::Index i = 0; i < eig_.values.size(); ++i) {
      Scalar& lam = eig_.values(i);
      if (lam < Scalar(-tol::eigen_clamp)) {
        throw Error(ErrorKind::NegativeEigenvalue,
                    "eigenvalue " + std::to_string(lam) + " below -1e-10 (not positive semidefinite)");
      }
      if (lam < 0) lam = 0;
    }
  }

  explicit DensityMatrix(const CMatrix<Scalar>& m) : DensityMatrix(HermitianMatrix<Scalar>(m)) {}

  static DensityMatrix pure(const PureState<Scalar>& psi) { return DensityMatrix(psi.projector()); }
  static DensityMatrix maximally_mixed(Eigen::Index d) {
    return DensityMatrix(CMatrix<Scalar>(CMatrix<Scalar>::Identity(d, d) / Scalar(d)));
  }
  static DensityMatrix diagonal(const RVector<Scalar>& p) {
    return DensityMatrix(CMatrix<Scalar>(p.template cast<Complex<Scalar>>().asDiagonal()));
  }

  Eigen::Index dim() const { return h_.dim(); }
  const CMatrix<Scalar>& matrix() const { return h_.matrix(); }
  const HermitianMatrix<Scalar>& hermitian() const { return h_; }
  const RVector<Scalar>& eigenvalues() const { return eig_.values; }
  const CMatrix<Scalar>& eigenvectors() const { return eig_.vectors; }
  Scalar purity() const { return h_.matrix().cwiseAbs2().sum(); }

 private:
  HermitianMatrix<Scalar> h_;
  EigenSystem<Scalar> eig_;
};

namespace detail {

template <typename Scalar>
HermitianMatrix<Scalar> sqrt_from_eigen(const EigenSystem<Scalar>& e) {
  RVector<Scalar> roots = e.values.cwiseMax(Scalar(0)).cwiseSqrt();
  return HermitianMatrix<Scalar>(e.vectors * roots.template cast<Complex<Scalar>>().asDiagonal() *
                                 e.vectors.adjoint());
}

}  // namespace detail

/// Positive square root of a PSD Hermitian matrix. Eigenvalues in
/// [-1e-9, 0) are treated as zero.
template <typename Scalar>
HermitianMatrix<Scalar> psd_sqrt(const HermitianMatrix<Scalar>& h) {
  const auto e = eigh(h);
  if (e.values.size() > 0 && e.values.minCoeff() < Scalar(-tol::negative_eigen)) {
    throw Error(ErrorKind::NegativeEigenvalue, "matrix has eigenvalue " + std::to_string(e.values.minCoeff()));
  }
  return detail::sqrt_from_eigen(e);
}

template <typename Scalar>
HermitianMatrix<Scalar> psd_sqrt(const DensityMatrix<Scalar>& d) {
  return detail::sqrt_from_eigen(EigenSystem<Scalar>{d.eigenvalues(), d.eigenvectors()});
}

template <typename Scalar>
int rank_of(const DensityMatrix<Scalar>& d, Scalar rank_tol = Scalar(tol::rank)) {
  return static_cast<int>((d.eigenvalues().array() > rank_tol).count());
}

/// Orthonormal basis (columns) of the support: eigenvectors with eigenvalue
/// above `rank_tol`, in descending eigenvalue order.
template <typename Scalar>
CMatrix<Scalar> support_basis(const DensityMatrix<Scalar>& d, Scalar rank_tol = Scalar(tol::rank)) {
  const int k = rank_of(d, rank_tol);
  CMatrix<Scalar> basis(d.dim(), k);
  for (int c = 0; c < k; ++c) basis.col(c) = d.eigenvectors().col(d.dim() - 1 - c);
  return basis;
}

template <typename Scalar>
HermitianMatrix<Scalar> support_projector(const DensityMatrix<Scalar>& d, Scalar rank_tol = Scalar(tol::rank)) {
  const CMatrix<Scalar> basis = support_basis(d, rank_tol);
  return HermitianMatrix<Scalar>(basis * basis.adjoint());
}

/// Commutator defect max|AB - BA|.
template <typename DerivedA, typename DerivedB>
auto commutator_defect(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return max_abs_entry(a * b - b * a);
}

}  // namespace roofkit

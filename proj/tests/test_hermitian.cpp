#include <gtest/gtest.h>

#include <atomic>

#include "roofkit/hermitian.hpp"
#include "roofkit/parallel.hpp"
#include "roofkit/random.hpp"

namespace roofkit {
namespace {

using Mat = Eigen::MatrixXcd;

TEST(HermitianMatrix, RejectsNonHermitian) {
  Mat m = Mat::Identity(2, 2);
  m(0, 1) = 0.5;
  EXPECT_THROW(HermitianMatrix<double>{m}, Error);
  try {
    HermitianMatrix<double>{m};
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonHermitianInput);
  }
}

TEST(HermitianMatrix, SymmetrizesSmallDefect) {
  Mat m = Mat::Identity(2, 2);
  m(0, 1) = {0.25, 1e-11};
  m(1, 0) = {0.25, 0};
  const HermitianMatrix<double> h(m);
  EXPECT_EQ(hermiticity_defect(h.matrix()), 0.0);
}

TEST(Eigh, AscendingAndReconstructs) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat g = gaussian_matrix(4, 4, rng);
    const HermitianMatrix<double> h(Mat(g + g.adjoint()));
    const auto e = eigh(h);
    for (Eigen::Index i = 1; i < 4; ++i) EXPECT_LE(e.values(i - 1), e.values(i));
    const Mat back = e.vectors * e.values.cast<std::complex<double>>().asDiagonal() * e.vectors.adjoint();
    EXPECT_LT(max_abs_entry(back - h.matrix()), 1e-12);
    EXPECT_LT(max_abs_entry(e.vectors.adjoint() * e.vectors - Mat::Identity(4, 4)), 1e-12);
  }
}

TEST(Eigh, PhaseConvention) {
  Rng rng(4);
  const Mat g = gaussian_matrix(3, 3, rng);
  const auto e = eigh(HermitianMatrix<double>(Mat(g + g.adjoint())));
  for (Eigen::Index c = 0; c < 3; ++c) {
    EXPECT_EQ(e.vectors(0, c).imag(), 0.0);
    EXPECT_GT(e.vectors(0, c).real(), 0.0);
  }
}

TEST(DensityMatrix, TraceValidation) {
  const Mat m = Mat::Identity(2, 2) * 0.6;
  try {
    DensityMatrix<double>{m};
    FAIL() << "trace 1.2 accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidTrace);
  }
  const DensityMatrix<double> ok(Mat(Mat::Identity(2, 2) * (0.5 + 1e-10)));
  EXPECT_NEAR(ok.matrix().trace().real(), 1.0, 1e-15);
}

TEST(DensityMatrix, NegativeEigenvalues) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 1.1;
  m(1, 1) = -0.1;
  try {
    DensityMatrix<double>{m};
    FAIL() << "negative eigenvalue accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NegativeEigenvalue);
  }
  m(0, 0) = 1 + 5e-11;
  m(1, 1) = -5e-11;
  const DensityMatrix<double> clamped(m);
  EXPECT_EQ(clamped.eigenvalues()(0), 0.0);
}

TEST(DensityMatrix, Constructors) {
  const auto mm = DensityMatrix<double>::maximally_mixed(4);
  EXPECT_NEAR(mm.purity(), 0.25, 1e-15);
  const auto diag = DensityMatrix<double>::diagonal(Eigen::Vector3d(0.5, 0.3, 0.2));
  EXPECT_NEAR(diag.matrix()(1, 1).real(), 0.3, 1e-15);
  const auto pure = DensityMatrix<double>::pure(PureState<double>::basis(3, 2));
  EXPECT_EQ(rank_of(pure), 1);
}

TEST(PsdSqrt, SquaresBack) {
  Rng rng(5);
  for (int k = 1; k <= 4; ++k) {
    const auto rho = random_density(4, k, rng);
    const Mat r = psd_sqrt(rho).matrix();
    EXPECT_LT(max_abs_entry(r * r - rho.matrix()), 1e-12);
  }
  Mat neg = Mat::Identity(2, 2);
  neg(1, 1) = -0.5;
  EXPECT_THROW(psd_sqrt(HermitianMatrix<double>(neg)), Error);
}

TEST(Support, ProjectorMatchesRank) {
  Rng rng(6);
  for (int k = 1; k <= 5; ++k) {
    const auto rho = random_density(5, k, rng);
    EXPECT_EQ(rank_of(rho), k);
    const Mat p = support_projector(rho).matrix();
    EXPECT_LT(max_abs_entry(p * p - p), 1e-12);
    EXPECT_NEAR(p.trace().real(), k, 1e-12);
    EXPECT_LT(max_abs_entry(p * rho.matrix() - rho.matrix()), 1e-12);
  }
}

TEST(PureState, NormalizesAndFixesPhase) {
  Eigen::VectorXcd v(2);
  v << std::complex<double>(0, 3), 4;
  const PureState<double> psi(v);
  EXPECT_NEAR(psi.vector().norm(), 1.0, 1e-15);
  EXPECT_NEAR(psi.vector()(0).real(), 0.6, 1e-15);
  EXPECT_EQ(psi.vector()(0).imag(), 0.0);
  EXPECT_THROW(PureState<double>(Eigen::VectorXcd::Zero(2)), Error);
}

TEST(PureState, FidelityAndDistance) {
  const auto a = PureState<double>::basis(2, 0);
  Eigen::VectorXcd v(2);
  v << 1, 1;
  const PureState<double> b(v);
  EXPECT_NEAR(fidelity(a, b), 0.5, 1e-15);
  EXPECT_NEAR(trace_distance(a, b), std::sqrt(0.5), 1e-15);
  EXPECT_EQ(trace_distance(a, a), 0.0);
}

TEST(Random, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(0, 0), derive_seed(0, 1));
  EXPECT_NE(derive_seed(0, 0), derive_seed(1, 0));
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
}

TEST(Random, IsometryColumnsOrthonormal) {
  Rng rng(9);
  const Mat w = random_isometry(9, 3, rng);
  EXPECT_LT(max_abs_entry(w.adjoint() * w - Mat::Identity(3, 3)), 1e-12);
}

TEST(Parallel, ScheduleIndependentAndRethrows) {
  std::vector<double> serial(64), threaded(64);
  const auto work = [](std::size_t i) {
    Rng rng = make_rng(11, i);
    return std::normal_distribution<double>()(rng);
  };
  parallel_for(64, 1, [&](std::size_t i) { serial[i] = work(i); });
  parallel_for(64, 4, [&](std::size_t i) { threaded[i] = work(i); });
  EXPECT_EQ(serial, threaded);
  EXPECT_THROW(parallel_for(8, 3,
                            [](std::size_t i) {
                              if (i == 5) throw Error(ErrorKind::DomainError, "boom");
                            }),
               Error);
}

}  // namespace
}  // namespace roofkit

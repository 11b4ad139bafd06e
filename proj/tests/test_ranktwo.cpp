#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "reference.hpp"
#include "roofkit/oracle.hpp"
#include "roofkit/random.hpp"
#include "roofkit/ranktwo.hpp"

namespace roofkit {
namespace {

using Mat = Eigen::MatrixXcd;

Density diag(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const double c : v) x(i++) = c;
  return Density::diagonal(x);
}

Mat dmat(double a, double b, double c) { return Eigen::Vector3cd(a, b, c).asDiagonal(); }

Density symmetrized(const State& psi, const Transposition& t) {
  const Mat p = psi.projector();
  return Density(Mat(0.5 * (p + t.unitary() * p * t.unitary())));
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::DomainError;
}

TEST(Transposition, Properties) {
  const Transposition t(4, 1, 3);
  const Mat& u = t.unitary();
  EXPECT_LT(max_abs_entry(u - u.adjoint()), 1e-15);
  EXPECT_LT(max_abs_entry(u * u - Mat::Identity(4, 4)), 1e-15);
  const Mat p1 = State::basis(4, 1).projector(), p3 = State::basis(4, 3).projector();
  const Mat p0 = State::basis(4, 0).projector();
  EXPECT_LT(max_abs_entry(u * p1 * u - p3), 1e-15);
  EXPECT_LT(max_abs_entry(u * p0 * u - p0), 1e-15);
  EXPECT_THROW(Transposition(3, 1, 1), Error);
  EXPECT_THROW(Transposition(3, 0, 3), Error);
}

TEST(Rank2Support, Examples) {
  EXPECT_LT(max_abs_entry(rank2_support(diag({0.5, 0.5, 0})).matrix() - dmat(1, 1, 0)), 1e-14);
  EXPECT_LT(max_abs_entry(rank2_support(diag({0.75, 0.25})).matrix() - Mat::Identity(2, 2)), 1e-14);
  Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const Density d = random_density(3 + trial % 3, 2, rng);
    EXPECT_LT(max_abs_entry(rank2_support(d).matrix() - support_projector(d).matrix()), 1e-9);
  }
}

TEST(Rank2Support, Errors) {
  EXPECT_EQ(kind_of([] { rank2_support(Density::maximally_mixed(3)); }), ErrorKind::RankMismatch);
  EXPECT_EQ(kind_of([] { rank2_support(Density::pure(State::basis(3, 0))); }), ErrorKind::RankMismatch);
}

TEST(PauliFrame, TwoDimensionalBlock) {
  const Transposition t(3, 0, 1);
  const PauliFrame f = pauli_frame(rank2_support(diag({0.5, 0.5, 0})), t);
  // Tr(P1 Q) Tr(P2 Q) - Tr(P1 Q P2 Q) = 1 for Q = diag(1,1,0).
  EXPECT_NEAR(f.y, 1.0, 1e-15);
  EXPECT_LT(max_abs_entry(f.sigma1.matrix() - dmat(1, -1, 0)), 1e-15);
  Mat swap_block = Mat::Zero(3, 3);
  swap_block(0, 1) = swap_block(1, 0) = 1;
  EXPECT_LT(max_abs_entry(f.sigma3.matrix() - swap_block), 1e-15);
}

TEST(PauliFrame, Errors) {
  const Transposition t(3, 0, 1);
  // Support spanned by (e1+e2)/sqrt2 and e3: U is the identity there.
  Mat q = Mat::Zero(3, 3);
  q(0, 0) = q(0, 1) = q(1, 0) = q(1, 1) = 0.5;
  q(2, 2) = 1;
  EXPECT_EQ(kind_of([&] { pauli_frame(Hermitian(q), t); }), ErrorKind::DegenerateFrame);
  EXPECT_EQ(kind_of([&] { pauli_frame(Hermitian(dmat(1, 0, 1)), t); }), ErrorKind::NotSymmetric);
}

TEST(Rank2Roof, BasisPair) {
  const Rank2Solution s = rank2_roof(diag({0.5, 0.5, 0}), Transposition(3, 0, 1));
  EXPECT_NEAR(s.r_value, 0.0, 1e-15);
  EXPECT_NEAR(s.x1, 1.0, 1e-15);
  EXPECT_NEAR(s.x3, 0.0, 1e-15);
  EXPECT_NEAR(s.h_value, std::log(2.0), 1e-15);
  EXPECT_NEAR(tilde_entropy(s.optimal_pair.first), 0.0, 1e-14);
}

TEST(Rank2Roof, QubitExample) {
  const double c = std::cos(std::numbers::pi / 8), sn = std::sin(std::numbers::pi / 8);
  const Transposition t(2, 0, 1);
  const Density d = symmetrized(State(Eigen::VectorXcd(Eigen::Vector2cd(c, sn))), t);
  const Rank2Solution s = rank2_roof(d, t);
  EXPECT_NEAR(s.x1 * s.y, std::cos(std::numbers::pi / 4), 1e-12);
  EXPECT_NEAR(s.r_value, reference::s(c * c) + reference::s(sn * sn), 1e-12);
  EXPECT_NEAR(s.r_value, 0.4164955, 1e-6);
}

TEST(Rank2Roof, Errors) {
  const Transposition t(3, 0, 1);
  EXPECT_EQ(kind_of([&] { rank2_roof(diag({0.5, 0, 0.5}), t); }), ErrorKind::NotSymmetric);
  EXPECT_EQ(kind_of([&] { rank2_roof(Density::maximally_mixed(3), t); }), ErrorKind::RankMismatch);
  EXPECT_EQ(kind_of([&] { rank2_roof(diag({0.5, 0.5}), t); }), ErrorKind::DomainError);
}

TEST(Rank2Roof, FrameIdentitiesOnInstances) {
  Rng rng(2);
  for (int d = 2; d <= 6; ++d) {
    for (int trial = 0; trial < 4; ++trial) {
      const auto inst = sample_lemma6_instance(d, rng);
      const Rank2Solution s = rank2_roof(inst.state, inst.swap);
      const Mat& q = s.q.matrix();
      const Mat& s1 = s.sigma1.matrix();
      const Mat& s3 = s.sigma3.matrix();
      const Mat& u = inst.swap.unitary();
      EXPECT_LT(max_abs_entry(s1 * s1 - q), 1e-10);
      EXPECT_LT(max_abs_entry(s3 * s3 - q), 1e-10);
      EXPECT_LT(max_abs_entry(s1 * s3 + s3 * s1), 1e-10);
      EXPECT_LT(max_abs_entry(s1 * u + u * s1), 1e-10);
      EXPECT_LT(std::abs((s1 * s3).trace()), 1e-10);
      EXPECT_NEAR(s.x1 * s.x1 + s.x3 * s.x3, 1.0, 1e-9);
      EXPECT_NEAR(s.r_value, inst.expected_roof, 1e-8);
      EXPECT_NEAR(s.r_value + s.h_value, tilde_entropy(inst.state), 1e-10);
      // The pair mixes back to D and both members attain the roof.
      const Mat mixed = 0.5 * (s.optimal_pair.first.projector() + s.optimal_pair.second.projector());
      EXPECT_LT(max_abs_entry(mixed - inst.state.matrix()), 1e-8);
      EXPECT_NEAR(tilde_entropy(s.optimal_pair.first), s.r_value, 1e-8);
    }
  }
}

TEST(Rank2Roof, MatchesIndependentSearch) {
  Rng rng(3);
  const auto inst = sample_lemma6_instance(4, rng);
  EXPECT_NEAR(rank2_roof(inst.state, inst.swap).r_value, brute_force_roof(inst.state, 4, 400, 11), 1e-4);
}

TEST(Lemma6, Applicability) {
  Lemma6Config cfg;
  cfg.budget = 200;
  EXPECT_TRUE(lemma6_applicable(diag({0.5, 0.5, 0}), Transposition(3, 0, 1), cfg));
  const auto off = lemma6_check(diag({0.5, 0, 0.5}), Transposition(3, 0, 1), cfg);
  EXPECT_FALSE(off.applicable());
  EXPECT_FALSE(off.commutes);
  Rng rng(4);
  const Density inv = sample_swap_invariant_support(3, rng);
  const auto chk = lemma6_check(inv, Transposition(3, 0, 1), cfg);
  EXPECT_TRUE(chk.commutes);
  EXPECT_FALSE(chk.rotates_support);
  EXPECT_FALSE(chk.applicable());
  const auto inst = sample_lemma6_instance(3, rng);
  const auto ok = lemma6_check(inst.state, inst.swap, cfg);
  EXPECT_TRUE(ok.applicable()) << ok.failed;
  EXPECT_NEAR(ok.closed_form, ok.oracle, 1e-4);
}

}  // namespace
}  // namespace roofkit

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "reference.hpp"
#include "roofkit/oracle.hpp"
#include "roofkit/random.hpp"
#include "roofkit/roof.hpp"
#include "roofkit/symmetric.hpp"

namespace roofkit {
namespace {

using Mat = Eigen::MatrixXcd;
using cd = std::complex<double>;

OptimizerConfig quick(std::uint64_t seed = 0) {
  OptimizerConfig c;
  c.seed = seed;
  c.restarts = 12;
  return c;
}

State ket(std::initializer_list<cd> v) {
  Eigen::VectorXcd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const cd c : v) x(i++) = c;
  return State(x);
}

Density diag(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const double c : v) x(i++) = c;
  return Density::diagonal(x);
}

TEST(Ensemble, Validation) {
  const State e1 = State::basis(2, 0), e2 = State::basis(2, 1);
  EXPECT_THROW(Ensemble({0.5, 0.6}, {e1, e2}), Error);
  EXPECT_THROW(Ensemble({1.0, 0.0}, {e1, e2}), Error);
  EXPECT_THROW(Ensemble({0.5, 0.5}, {e1, State::basis(3, 0)}), Error);
  EXPECT_THROW(Ensemble({0.5, 0.5}, {e1, e2}, diag({0.9, 0.1})), Error);
  EXPECT_NO_THROW(Ensemble({0.5, 0.5}, {e1, e2}, Density::maximally_mixed(2)));
}

TEST(Mix, Examples) {
  const Ensemble single({1.0}, {State::basis(3, 0)});
  EXPECT_LT(max_abs_entry(mix_matrix(single) - State::basis(3, 0).projector()), 1e-15);
  const Ensemble two({0.5, 0.5}, {State::basis(3, 0), State::basis(3, 1)});
  EXPECT_LT(max_abs_entry(mix_matrix(two) - diag({0.5, 0.5, 0}).matrix()), 1e-15);
  const Ensemble tri = triangle_decomposition(symmetric_state(3, 0.0));
  EXPECT_LT(max_abs_entry(mix_matrix(tri) - Mat::Identity(3, 3) / 3.0), 1e-14);
}

TEST(EnsemblesFromIsometry, IdentityGivesEigenEnsemble) {
  const Density d = diag({0.2, 0.8});
  const Ensemble e = ensembles_from_isometry(d, Mat::Identity(2, 2));
  ASSERT_EQ(e.size(), 2u);
  EXPECT_NEAR(e.weights()[0] + e.weights()[1], 1.0, 1e-15);
  EXPECT_LT(max_abs_entry(mix_matrix(e) - d.matrix()), 1e-14);
  for (const State& s : e.states()) EXPECT_NEAR(tilde_entropy(s), 0.0, 1e-14);
}

TEST(EnsemblesFromIsometry, Hadamard) {
  Mat w(2, 2);
  w << 1, 1, 1, -1;
  w /= std::sqrt(2.0);
  const Ensemble e = ensembles_from_isometry(Density::maximally_mixed(2), w);
  ASSERT_EQ(e.size(), 2u);
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_NEAR(e.weights()[j], 0.5, 1e-15);
    EXPECT_NEAR(tilde_entropy(e.states()[j]), std::log(2.0), 1e-14);
  }
  EXPECT_NEAR(fidelity(e.states()[0], e.states()[1]), 0.0, 1e-15);
}

TEST(EnsemblesFromIsometry, RandomReconstructs) {
  Rng rng(17);
  const Density d = symmetric_state(3, 0.1).density();
  for (int trial = 0; trial < 10; ++trial) {
    const Ensemble e = ensembles_from_isometry(d, random_isometry(9, 3, rng));
    EXPECT_LT(max_abs_entry(mix_matrix(e) - d.matrix()), 1e-10);
  }
}

TEST(ConvexRoof, PureState) {
  Rng rng(2);
  const State psi = random_pure_state(4, rng);
  const auto r = convex_roof(Density::pure(psi), quick());
  EXPECT_NEAR(r.value, tilde_entropy(psi), 1e-12);
  EXPECT_EQ(r.ensemble.size(), 1u);
}

TEST(ConvexRoof, MaximallyMixedIsZero) {
  for (int d = 2; d <= 5; ++d) {
    const auto r = convex_roof(Density::maximally_mixed(d), quick());
    EXPECT_LT(r.value, 1e-9) << d;
    EXPECT_NEAR(r.value, ensemble_objective(r.ensemble), 1e-10);
  }
}

TEST(ConvexRoof, ValueMatchesOwnEnsemble) {
  Rng rng(8);
  for (int trial = 0; trial < 6; ++trial) {
    const Density rho = random_density(2 + trial % 3, 2, rng);
    const auto r = convex_roof(rho, quick(trial));
    EXPECT_NEAR(r.value, ensemble_objective(r.ensemble), 1e-10);
    EXPECT_LT(max_abs_entry(mix_matrix(r.ensemble) - rho.matrix()), 1e-9);
    EXPECT_LE(static_cast<int>(r.ensemble.size()), rank_of(rho) * rank_of(rho));
  }
}

TEST(ConvexRoof, BelowTildeEntropyAndIndependentSearch) {
  Rng rng(9);
  for (int trial = 0; trial < 4; ++trial) {
    const Density rho = random_density(3, 3, rng);
    const double r = convex_roof(rho, quick(trial)).value;
    EXPECT_LE(r, tilde_entropy(rho) + 1e-12);
    EXPECT_LE(r, brute_force_roof(rho, 9, 200, trial) + 1e-7);
  }
}

TEST(ConvexRoof, DeterministicForSeed) {
  Rng rng(10);
  const Density rho = random_density(3, 3, rng);
  OptimizerConfig a = quick(5), b = quick(5);
  a.threads = 1;
  b.threads = 3;
  const auto ra = convex_roof(rho, a), rb = convex_roof(rho, b);
  EXPECT_EQ(ra.value, rb.value);
  EXPECT_EQ(ra.ensemble.weights(), rb.ensemble.weights());
}

TEST(ConvexRoof, MidpointConvexity) {
  Rng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const Density a = random_density(3, 2, rng), b = random_density(3, 3, rng);
    const Density mid(Mat(0.5 * (a.matrix() + b.matrix())));
    const auto c = quick(trial);
    EXPECT_LE(convex_roof(mid, c).value, 0.5 * convex_roof(a, c).value + 0.5 * convex_roof(b, c).value + 1e-6);
  }
}

TEST(ConcaveRoof, Examples) {
  EXPECT_NEAR(concave_roof(Density::maximally_mixed(3), quick()).value, std::log(3.0), 1e-8);
  EXPECT_NEAR(concave_roof(diag({0.5, 0.5, 0}), quick()).value, std::log(2.0), 1e-8);
  const State psi = ket({0.6, cd(0, 0.8)});
  EXPECT_NEAR(concave_roof(Density::pure(psi), quick()).value, tilde_entropy(psi), 1e-12);
}

TEST(ConcaveRoof, FourierEnsembleAttainsLogD) {
  const int d = 3;
  std::vector<State> states;
  for (int k = 0; k < d; ++k) {
    Eigen::VectorXcd v(d);
    for (int j = 0; j < d; ++j) v(j) = std::polar(1.0, 2 * std::numbers::pi * j * k / d);
    states.emplace_back(v);
  }
  const Ensemble fourier(std::vector<double>(d, 1.0 / d), states, Density::maximally_mixed(d));
  EXPECT_NEAR(ensemble_objective(fourier), std::log(3.0), 1e-14);
}

TEST(RoofSandwich, InfBelowSup) {
  Rng rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const Density rho = random_density(3, 1 + trial % 3, rng);
    const auto c = quick(trial);
    const double lo = convex_roof(rho, c).value, hi = concave_roof(rho, c).value;
    EXPECT_LE(lo, hi + 1e-10);
    EXPECT_LE(hi, tilde_entropy(rho) + 1e-10);
  }
}

TEST(SubalgebraEntropy, Anchors) {
  for (int d = 2; d <= 4; ++d)
    EXPECT_NEAR(subalgebra_entropy(Density::maximally_mixed(d), quick()), std::log(d), 1e-9);
  Rng rng(13);
  EXPECT_LE(subalgebra_entropy(Density::pure(random_pure_state(3, rng)), quick()), 1e-8);
  EXPECT_GT(subalgebra_entropy(random_density(3, 2, rng), quick()), 1e-3);
}

TEST(CompactEnsemble, ReducesToRankSquared) {
  Rng rng(14);
  const Density rho = random_density(3, 2, rng);
  // Nine-member decomposition of a rank-two state; the compacted one needs at most four.
  const Ensemble wide = ensembles_from_isometry(rho, random_isometry(9, 2, rng));
  ASSERT_GT(wide.size(), 4u);
  const Ensemble small = compact_ensemble(wide, rho);
  EXPECT_LE(small.size(), 4u);
  EXPECT_LE(ensemble_objective(small), ensemble_objective(wide) + 1e-12);
  EXPECT_LT(max_abs_entry(mix_matrix(small) - rho.matrix()), 1e-9);
  const Ensemble big = compact_ensemble(wide, rho, false);
  EXPECT_GE(ensemble_objective(big), ensemble_objective(wide) - 1e-12);
}

TEST(LengthAudit, CountsReturnedEnsembles) {
  reset_length_audit();
  Rng rng(15);
  convex_roof(random_density(3, 2, rng), quick());
  const auto audit = length_audit();
  EXPECT_EQ(audit.ensembles, 1u);
  EXPECT_EQ(audit.over_rank_squared, 0u);
}

TEST(SupportFunctional, TrivialFunctionals) {
  const Density mm = Density::maximally_mixed(3);
  const SupportFunctional zero{Hermitian(Mat::Zero(3, 3))};
  EXPECT_TRUE(check_support_functional(zero, mm, 500, 1).below_on_pure);
  const SupportFunctional neg{Hermitian(Mat(-0.7 * Mat::Identity(3, 3)))};
  const auto chk = check_support_functional(neg, mm, 500, 1, 0.0);
  EXPECT_TRUE(chk.below_on_pure);
  EXPECT_FALSE(chk.supports);  // it does not touch R(I/3) = 0
}

TEST(SupportFunctional, FittedOnRankTwoSymmetricState) {
  Rng rng(16);
  const auto inst = sample_lemma6_instance(3, rng);
  const auto a = analyze_roof(inst.state, quick());
  ASSERT_FALSE(a.facet.functionals.empty());
  const auto chk = check_support_functional(a.facet.functionals[0], inst.state, 10000, 3, a.roof.value);
  EXPECT_LE(chk.max_violation, 1e-6);
  EXPECT_TRUE(chk.supports);
}

TEST(Facet, PureStateIsItself) {
  const State psi = ket({0.6, 0.8, 0});
  const Facet f = facet_of(Density::pure(psi), quick());
  ASSERT_EQ(f.generators.size(), 1u);
  EXPECT_LT(trace_distance(f.generators[0], psi), 1e-12);
}

TEST(Facet, RankTwoSymmetricInstanceHasSwappedPair) {
  Rng rng(18);
  for (int d : {3, 4}) {
    const auto inst = sample_lemma6_instance(d, rng);
    const Facet f = facet_of(inst.state, quick());
    ASSERT_EQ(f.generators.size(), 2u) << d;
    const State image(Eigen::VectorXcd(inst.swap.unitary() * f.generators[0].vector()));
    EXPECT_LT(trace_distance(image, f.generators[1]), 1e-3);
  }
}

TEST(Facet, TriangleRegimeHasThreeStates) {
  const Facet f = facet_of(symmetric_state(3, 0.1).density(), quick());
  EXPECT_EQ(f.generators.size(), 3u);
}

// Over decompositions of length three the hexagon's two triads are both optimal.
TEST(Facet, ShortDecompositionsBelowBifurcationFormHexagon) {
  OptimizerConfig c = quick();
  c.m = 3;
  c.restarts = 24;
  const Density d = symmetric_state(3, -0.16).density();
  const auto a = analyze_roof(d, c);
  EXPECT_EQ(a.facet.generators.size(), 6u);
  EXPECT_NEAR(a.roof.value, hexagon_ensemble(-0.16).objective_a, 1e-8);
}

TEST(Facet, AffineAlongGeneratorSegments) {
  Rng rng(19);
  const Density rho = random_density(3, 2, rng);
  const auto c = quick();
  const Facet f = facet_of(rho, c);
  ASSERT_GE(f.generators.size(), 2u);
  for (std::size_t i = 0; i + 1 < f.generators.size(); ++i) {
    const State& a = f.generators[i];
    const State& b = f.generators[i + 1];
    const Density mid(Mat(0.3 * a.projector() + 0.7 * b.projector()));
    EXPECT_NEAR(convex_roof(mid, c).value, 0.3 * tilde_entropy(a) + 0.7 * tilde_entropy(b), 1e-6);
  }
}

// Explicit decomposition of the symmetric state at z = 0.3: the uniform
// vector with weight 0.4 plus the three permutations of (1,1,2)/sqrt 6 with
// weight 0.2 each. It beats the triangle, so the triangle is not optimal there.
TEST(SymmetricFamily, TriangleBeatenNearUpperEndpoint) {
  const double z = 0.3;
  std::vector<State> states{ket({1, 1, 1})};
  std::vector<double> weights{0.4};
  for (int k = 0; k < 3; ++k) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(3);
    v(k) = 2;
    states.emplace_back(v);
    weights.push_back(0.2);
  }
  const Density d = symmetric_state(3, z).density();
  const Ensemble e(weights, states, d, 1e-12);
  const double explicit_value = 0.4 * std::log(3.0) + 0.6 * reference::tilde_entropy({1, 1, 2});
  EXPECT_NEAR(ensemble_objective(e), explicit_value, 1e-14);
  EXPECT_LT(explicit_value, reference::triangle_objective(3, z) - 2e-4);
  EXPECT_LE(convex_roof(d, quick()).value, explicit_value + 1e-9);
}

TEST(SymmetricFamily, UnrestrictedRoofVersusShortDecompositions) {
  const auto c = quick();
  // Equality where the triangle is optimal.
  for (double z : {-0.12, 0.0, 0.1, 0.2, 0.25})
    EXPECT_NEAR(convex_roof(symmetric_state(3, z).density(), c).value, reference::triangle_objective(3, z), 1e-6)
        << z;
  // Below the hexagon for z near the lower endpoint; the engine's ensemble is its own certificate.
  const Density d = symmetric_state(3, -0.16).density();
  const auto r = convex_roof(d, c);
  EXPECT_LT(max_abs_entry(mix_matrix(r.ensemble) - d.matrix()), 1e-9);
  EXPECT_LT(ensemble_objective(r.ensemble), hexagon_ensemble(-0.16).objective_a - 1e-3);
}

}  // namespace
}  // namespace roofkit

#pragma once

#include <string>
#include <utility>

#include "roofkit/roof.hpp"

namespace roofkit {

/// Permutation unitary swapping basis vectors i and j (0-based, i < j).
class Transposition {
 public:
  Transposition(Eigen::Index d, Eigen::Index i, Eigen::Index j);

  Eigen::Index dim() const { return d_; }
  Eigen::Index first() const { return i_; }
  Eigen::Index second() const { return j_; }
  const Eigen::MatrixXcd& unitary() const { return u_; }

 private:
  Eigen::Index d_;
  Eigen::Index i_;
  Eigen::Index j_;
  Eigen::MatrixXcd u_;
};

inline constexpr double kCommutatorTol = 1e-10;

struct Rank2Solution {
  Hermitian q;       // support projector
  Hermitian sigma1;  // Q (P_i - P_j) Q / y
  Hermitian sigma3;  // U Q
  double x1 = 0;
  double x3 = 0;
  double y = 0;
  double r_value = 0;
  double h_value = 0;
  std::pair<State, State> optimal_pair;  // rho and U rho U
};

/// Q = 2 (D - D^2) / (1 - Tr D^2).
Hermitian rank2_support(const Density& d);

struct PauliFrame {
  Hermitian sigma1;
  Hermitian sigma3;
  double y = 0;
};

PauliFrame pauli_frame(const Hermitian& q, const Transposition& t);

/// Closed-form roof of a rank-two state commuting with the transposition.
/// Assumes the optimal decomposition has length two; lemma6_check certifies it.
Rank2Solution rank2_roof(const Density& d, const Transposition& t);

struct Lemma6Config {
  std::uint64_t seed = 0;
  int budget = 1000;
  double cross_tol = 1e-4;
  int threads = 0;
};

struct Lemma6Check {
  bool commutes = false;
  bool rotates_support = false;  // U is not +-1 on the support
  bool confirmed = false;        // the closed-form pair is not beaten by the oracle
  double closed_form = 0;
  double oracle = 0;
  std::string failed;  // first failed condition, empty when applicable

  bool applicable() const { return commutes && rotates_support && confirmed; }
};

Lemma6Check lemma6_check(const Density& d, const Transposition& t, const Lemma6Config& cfg = {});
bool lemma6_applicable(const Density& d, const Transposition& t, const Lemma6Config& cfg = {});

}  // namespace roofkit

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roofkit/random.hpp"
#include "roofkit/ranktwo.hpp"
#include "roofkit/roof.hpp"

namespace roofkit {

/// Minimum of the ensemble objective over `budget` random m x rank isometries,
/// each polished by up to `sweeps` coordinate-descent sweeps of Givens moves
/// between pairs of ensemble members. Sample n uses derive_seed(seed, n), so a
/// larger budget never returns a larger value. An upper bound on R.
double brute_force_roof(const Density& d, int m, int budget, std::uint64_t seed, int threads = 0,
                        int sweeps = 200);

/// Rank-two state commuting with `swap` whose optimal decomposition is known
/// to have length two: half the sum of an optimal pure state of a symmetric
/// d = 3 state and its image under a transposition, embedded in dimension d.
struct Lemma6Instance {
  Density state;
  Transposition swap;
  double expected_roof = 0;  // tilde entropy of either member of the optimal pair
};

Lemma6Instance sample_lemma6_instance(int d, Rng& rng);

/// Rank-two state supported on the symmetric subspace of the swap (0, 1).
Density sample_swap_invariant_support(int d, Rng& rng);

/// Mixed state of the requested rank, real when asked.
Density sample_state(int d, int rank, Rng& rng, bool real_only = false);

struct OracleCheck {
  std::string name;
  bool pass = false;
  double gap = 0;        // worst observed deviation
  double tolerance = 0;  // allowed deviation
  int samples = 0;
};

struct OracleReport {
  std::string tag;
  std::uint64_t seed = 0;
  int samples = 0;
  double target = 0;  // value under test at the worst sample
  double oracle = 0;  // reference value at that sample
  double gap = 0;     // |target - oracle|
  std::vector<OracleCheck> checks;

  bool pass() const;
};

struct VerifyConfig {
  OptimizerConfig roof = [] {
    OptimizerConfig c;
    c.restarts = 12;
    return c;
  }();
  int oracle_budget = 1000;
  int instances = 0;  // 0 uses the suite's own default
};

inline const std::vector<std::string>& lemma_tags() {
  static const std::vector<std::string> tags{"L1", "L4", "L5", "L6", "A3", "A5", "TRP", "RELS1"};
  return tags;
}

/// Runs the property suite registered under `tag`; UnknownTag otherwise.
OracleReport verify_lemma(const std::string& tag, const VerifyConfig& cfg, std::uint64_t seed);

}  // namespace roofkit

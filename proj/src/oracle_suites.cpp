#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "roofkit/oracle.hpp"
#include "roofkit/symmetric.hpp"

namespace roofkit {

namespace {

// Accumulates the worst deviation seen for one named check.
class Tally {
 public:
  Tally(std::string name, double tolerance) : check_{std::move(name), true, 0.0, tolerance, 0} {}

  // Deviation must stay at or below the tolerance.
  void bounded(double deviation) {
    ++check_.samples;
    check_.gap = std::max(check_.gap, deviation);
    if (!(deviation <= check_.tolerance)) check_.pass = false;
  }

  // Value must strictly exceed the tolerance; gap records the smallest value.
  void above(double value) {
    if (check_.samples++ == 0) check_.gap = value;
    check_.gap = std::min(check_.gap, value);
    if (!(value > check_.tolerance)) check_.pass = false;
  }

  const OracleCheck& check() const { return check_; }

 private:
  OracleCheck check_;
};

struct Worst {
  double target = 0;
  double oracle = 0;
  double gap = -1;

  void see(double t, double o) {
    const double g = std::abs(t - o);
    if (g > gap) {
      target = t;
      oracle = o;
      gap = g;
    }
  }
};

int count_or(int requested, int fallback) { return requested > 0 ? requested : fallback; }

OptimizerConfig seeded(const VerifyConfig& cfg, std::uint64_t seed, std::uint64_t stream) {
  OptimizerConfig c = cfg.roof;
  c.seed = derive_seed(seed, stream);
  return c;
}

OracleReport finish(std::string tag, std::uint64_t seed, int samples, const Worst& worst,
                    std::initializer_list<const Tally*> tallies) {
  OracleReport r;
  r.tag = std::move(tag);
  r.seed = seed;
  r.samples = samples;
  r.target = worst.target;
  r.oracle = worst.oracle;
  r.gap = std::max(0.0, worst.gap);
  for (const Tally* t : tallies) r.checks.push_back(t->check());
  return r;
}

OracleReport suite_l1(const VerifyConfig& cfg, std::uint64_t seed) {
  const int n = count_or(cfg.instances, 20);
  Rng rng = make_rng(seed, 1);
  Tally rank_bound("length <= rank^2", 0);
  Tally dim_bound("length <= d^2", 0);
  Tally mixes("mixture reproduces state", 1e-9);
  Worst worst;
  for (int s = 0; s < n; ++s) {
    const int d = 2 + s % 3;
    const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(d));
    const Density rho = sample_state(d, k, rng);
    const RoofResult r = convex_roof(rho, seeded(cfg, seed, s));
    const int rank = rank_of(rho);
    const double len = static_cast<double>(r.ensemble.size());
    rank_bound.bounded(std::max(0.0, len - rank * rank));
    dim_bound.bounded(std::max(0.0, len - d * d));
    mixes.bounded(max_abs_entry(mix_matrix(r.ensemble) - rho.matrix()));
    worst.see(len, rank * rank);
  }
  return finish("L1", seed, n, worst, {&rank_bound, &dim_bound, &mixes});
}

OracleReport suite_l4(const VerifyConfig& cfg, std::uint64_t seed) {
  const int n = count_or(cfg.instances, 100);
  Rng rng = make_rng(seed, 4);
  Tally mixed("H > 1e-3 on mixed states", 1e-3);
  Tally pure("H <= 1e-8 on pure states", 1e-8);
  Worst worst;
  for (int s = 0; s < n; ++s) {
    const int d = 2 + s % 3;
    const int k = 2 + static_cast<int>(rng() % static_cast<unsigned>(d - 1));
    const Density rho = sample_state(d, k, rng);
    const double h = subalgebra_entropy(rho, seeded(cfg, seed, s));
    mixed.above(h);
    worst.see(h, 0);
  }
  for (int s = 0; s < std::max(1, n / 5); ++s) {
    const int d = 2 + s % 5;
    const Density rho = Density::pure(random_pure_state(d, rng));
    pure.bounded(subalgebra_entropy(rho, seeded(cfg, seed, n + s)));
  }
  return finish("L4", seed, n, worst, {&mixed, &pure});
}

OracleReport suite_l5(const VerifyConfig& cfg, std::uint64_t seed) {
  const int n = count_or(cfg.instances, 20);
  Rng rng = make_rng(seed, 5);
  Tally match("real-restricted R matches R", 1e-5);
  Worst worst;
  for (int s = 0; s < n; ++s) {
    const int d = 2 + s % 3;
    const Density rho = sample_state(d, d, rng, true);
    OptimizerConfig c = seeded(cfg, seed, s);
    const double full = convex_roof(rho, c).value;
    c.real_only = true;
    const double real = convex_roof(rho, c).value;
    match.bounded(std::abs(real - full));
    worst.see(real, full);
  }
  return finish("L5", seed, n, worst, {&match});
}

void frame_identities(const Rank2Solution& sol, const Density& rho, const Transposition& t, Tally& frame,
                      Tally& pair) {
  const Eigen::MatrixXcd& q = sol.q.matrix();
  const Eigen::MatrixXcd& s1 = sol.sigma1.matrix();
  const Eigen::MatrixXcd& s3 = sol.sigma3.matrix();
  frame.bounded(max_abs_entry(s1 * s1 - q));
  frame.bounded(max_abs_entry(s3 * s3 - q));
  frame.bounded(max_abs_entry(s1 * s3 + s3 * s1));
  frame.bounded(max_abs_entry(s1 * t.unitary() + t.unitary() * s1));
  frame.bounded(std::abs(sol.x1 * sol.x1 + sol.x3 * sol.x3 - 1));
  const Eigen::MatrixXcd mixed = 0.5 * (sol.optimal_pair.first.projector() + sol.optimal_pair.second.projector());
  pair.bounded(max_abs_entry(mixed - rho.matrix()));
  pair.bounded(std::abs(tilde_entropy(rho) - sol.r_value - sol.h_value));
}

OracleReport suite_l6(const VerifyConfig& cfg, std::uint64_t seed) {
  const int n = count_or(cfg.instances, 10);
  Rng rng = make_rng(seed, 6);
  Tally vs_oracle("closed form vs brute force", 1e-4);
  Tally vs_engine("closed form vs convex roof", 1e-4);
  Tally frame("Pauli frame identities", 1e-10);
  Tally pair("optimal pair mixes to the state", 1e-10);
  Tally negative("swap-invariant support rejected", 0);
  Worst worst;
  for (int s = 0; s < n; ++s) {
    const int d = 2 + s % 5;
    const Lemma6Instance inst = sample_lemma6_instance(d, rng);
    const Rank2Solution sol = rank2_roof(inst.state, inst.swap);
    const double oracle = brute_force_roof(inst.state, 4, cfg.oracle_budget, derive_seed(seed, s), cfg.roof.threads);
    const double engine = convex_roof(inst.state, seeded(cfg, seed, s)).value;
    vs_oracle.bounded(std::abs(sol.r_value - oracle));
    vs_engine.bounded(std::abs(sol.r_value - engine));
    frame_identities(sol, inst.state, inst.swap, frame, pair);
    worst.see(sol.r_value, oracle);
  }
  const Density sym = sample_swap_invariant_support(3, rng);
  Lemma6Config lc;
  lc.seed = seed;
  lc.budget = cfg.oracle_budget;
  lc.threads = cfg.roof.threads;
  negative.bounded(lemma6_applicable(sym, Transposition(3, 0, 1), lc) ? 1 : 0);
  return finish("L6", seed, n, worst, {&vs_oracle, &vs_engine, &frame, &pair, &negative});
}

OracleReport suite_a3(const VerifyConfig& cfg, std::uint64_t seed) {
  const int n = count_or(cfg.instances, 20);
  Rng rng = make_rng(seed, 3);
  Tally order("convex roof <= concave roof", 1e-10);
  Tally ceiling("concave roof <= tilde entropy", 1e-10);
  Tally pure("roofs coincide on pure states", 1e-10);
  Worst worst;
  for (int s = 0; s < n; ++s) {
    const int d = 2 + s % 3;
    const Density rho = sample_state(d, d, rng);
    const OptimizerConfig c = seeded(cfg, seed, s);
    const double lo = convex_roof(rho, c).value;
    const double hi = concave_roof(rho, c).value;
    order.bounded(std::max(0.0, lo - hi));
    ceiling.bounded(std::max(0.0, hi - tilde_entropy(rho)));
    worst.see(lo, hi);
  }
  for (int s = 0; s < std::max(1, n / 2); ++s) {
    const int d = 2 + s % 4;
    const Density rho = Density::pure(random_pure_state(d, rng));
    const OptimizerConfig c = seeded(cfg, seed, n + s);
    pure.bounded(std::abs(concave_roof(rho, c).value - convex_roof(rho, c).value));
  }
  return finish("A3", seed, n, worst, {&order, &ceiling, &pure});
}

OracleReport suite_a5(const VerifyConfig& cfg, std::uint64_t seed) {
  const int n = count_or(cfg.instances, 10);
  Rng rng = make_rng(seed, 55);
  Tally coincide("roofs coincide only where R equals tilde entropy", 1e-8);
  Tally segments("R affine on facet segments", 1e-6);
  Worst worst;
  int triggered = 0;
  for (int s = 0; s < n; ++s) {
    const int d = 2 + s % 3;
    const bool pure = s % 2 == 0;
    const Density rho = pure ? Density::pure(random_pure_state(d, rng)) : sample_state(d, d, rng);
    const OptimizerConfig c = seeded(cfg, seed, s);
    const double lo = convex_roof(rho, c).value;
    const double hi = concave_roof(rho, c).value;
    if (std::abs(hi - lo) <= 1e-8) {
      ++triggered;
      // The face of a point where the roofs meet is the point itself.
      coincide.bounded(std::abs(lo - tilde_entropy(rho)) + (rank_of(rho) == 1 ? 0 : 1));
      continue;
    }
    const RoofAnalysis a = analyze_roof(rho, c);
    const auto& gens = a.facet.generators;
    for (std::size_t i = 0; i < gens.size(); ++i) {
      for (std::size_t j = i + 1; j < gens.size(); ++j) {
        for (const double t : {0.25, 0.5, 0.75}) {
          const Density mid(Eigen::MatrixXcd((1 - t) * gens[i].projector() + t * gens[j].projector()));
          const double affine = (1 - t) * tilde_entropy(gens[i]) + t * tilde_entropy(gens[j]);
          const double r = convex_roof(mid, c).value;
          segments.bounded(std::abs(r - affine));
          worst.see(r, affine);
        }
      }
    }
  }
  if (triggered == 0) coincide.bounded(0);
  return finish("A5", seed, n, worst, {&coincide, &segments});
}

OracleReport suite_trp(const VerifyConfig& cfg, std::uint64_t seed) {
  const int n = count_or(cfg.instances, 50);
  Tally identity("1 - 2 r^2 = 2 a^2 / d - 1", 1e-12);
  Tally radius("r^2 = 1 - a^2 / d", 1e-12);
  Worst worst;
  for (int d = 3; d <= 6; ++d) {
    const double lo = symmetric_z_min(d);
    const double hi = symmetric_z_max(d);
    for (int s = 0; s < n; ++s) {
      const double z = lo + (hi - lo) * s / (n - 1);
      const SphereParams p = sphere_params(d, z);
      const double lhs = antipode_overlap(p.r);
      const double rhs = 2 * p.a * p.a / d - 1;
      identity.bounded(std::abs(lhs - rhs));
      radius.bounded(std::abs(p.r * p.r - (1 - p.a * p.a / d)));
      worst.see(lhs, rhs);
    }
  }
  return finish("TRP", seed, n, worst, {&identity, &radius});
}

OracleReport suite_rels1(const VerifyConfig& cfg, std::uint64_t seed) {
  const int n = count_or(cfg.instances, 50);
  Tally purity("Tr D^2 = 1/d + d(d-1) z^2", 1e-12);
  Tally overlap("Tr(D_rho D) = Tr D^2 on triangle and hexagon states", 1e-8);
  Worst worst;
  for (int d = 3; d <= 5; ++d) {
    const double lo = symmetric_z_min(d);
    const double hi = symmetric_z_max(d);
    for (int s = 1; s < n - 1; ++s) {
      const double z = lo + (hi - lo) * s / (n - 1);
      const SymmetricState st = symmetric_state(d, z);
      const Density rho = st.density();
      const double p = rho.purity();
      const double expected = 1.0 / d + d * (d - 1) * z * z;
      purity.bounded(std::abs(p - expected));
      worst.see(p, expected);
      const Ensemble tri = triangle_decomposition(st);
      std::vector<State> states = tri.states();
      if (d == 3 && minima_census(z).count == 6) {
        const Hexagon h = hexagon_ensemble(z);
        states.assign(h.states.begin(), h.states.end());
      }
      for (const State& psi : states) {
        overlap.bounded(std::abs(psi.vector().dot(rho.matrix() * psi.vector()).real() - p));
      }
    }
  }
  return finish("RELS1", seed, n, worst, {&purity, &overlap});
}

}  // namespace

OracleReport verify_lemma(const std::string& tag, const VerifyConfig& cfg, std::uint64_t seed) {
  using Suite = std::function<OracleReport(const VerifyConfig&, std::uint64_t)>;
  static const std::map<std::string, Suite> suites{
      {"L1", suite_l1},   {"L4", suite_l4},   {"L5", suite_l5},   {"L6", suite_l6},
      {"A3", suite_a3},   {"A5", suite_a5},   {"TRP", suite_trp}, {"RELS1", suite_rels1},
  };
  const auto it = suites.find(tag);
  if (it == suites.end()) throw Error(ErrorKind::UnknownTag, "unknown lemma tag '" + tag + "'");
  return it->second(cfg, seed);
}

}  // namespace roofkit

#pragma once

// Reference values computed without the library's entropy, roof or
// symmetric-family code paths.

#include <cmath>
#include <complex>
#include <vector>

namespace reference {

inline double s(double x) { return x > 0 ? -x * std::log(x) : 0.0; }

inline double tilde_entropy(const std::vector<std::complex<double>>& psi) {
  double norm = 0;
  for (const auto& c : psi) norm += std::norm(c);
  double h = 0;
  for (const auto& c : psi) h += s(std::norm(c) / norm);
  return h;
}

// First triangle state sqrt(d) sqrt(D) e_1 of the symmetric state with
// off-diagonal z, from the two-eigenvalue spectral form of D.
inline std::vector<double> triangle_state(int d, double z) {
  const double lam_all = 1.0 / d + (d - 1) * z;  // on (1,...,1)
  const double lam_perp = 1.0 / d - z;           // on its complement
  const double ra = std::sqrt(lam_all);
  const double rp = std::sqrt(lam_perp);
  std::vector<double> v(d, std::sqrt(double(d)) * (ra - rp) / d);
  v[0] = std::sqrt(double(d)) * (ra / d + rp * (1 - 1.0 / d));
  return v;
}

inline double triangle_objective(int d, double z) {
  double h = 0;
  for (double c : triangle_state(d, z)) h += s(c * c);
  return h;
}

}  // namespace reference

#pragma once

#include "solver.hpp"

namespace nessq {

// The reported quantities of one steady state. flux_12 is the energy
// current carried by the exchange coupling; it is tied to the coherence by
// construction: flux_12 = -4 xi Im(rho32).
struct SteadyReport {
  std::array<double, 4> populations{};
  complexd rho32{};
  double coherence_abs = 0.0;
  double flux_12 = 0.0;
  double positivity_min_eig = 0.0;
  double residual = 0.0;
};

inline SteadyReport report(const Mat4& rho, const SystemParams& p,
                           double residual = 0.0) {
  SteadyReport r;
  for (int i = 0; i < 4; ++i) r.populations[i] = rho(i, i).real();
  r.rho32 = rho(2, 1);
  r.coherence_abs = std::abs(r.rho32);
  r.flux_12 = -(4.0 * p.xi * r.rho32.imag());
  Eigen::SelfAdjointEigenSolver<Mat4> es(0.5 * (rho + rho.adjoint()));
  r.positivity_min_eig = es.eigenvalues().minCoeff();
  r.residual = residual;
  return r;
}

inline SteadyReport report(const SteadySolution& sol, const SystemParams& p) {
  return report(sol.rho, p, sol.residual);
}

struct SecularCheck {
  bool pass = true;
  std::array<double, 4> deltas{};  // computed population minus closed-form value
};

// The secular separate-baths steady state is diagonal with populations in
// detailed-balance form:
//   rho11 = ab_hi ab_lo / z,  rho22 = ab_hi em_lo / z,
//   rho33 = em_hi ab_lo / z,  rho44 = em_hi em_lo / z,
// with z = (em_hi + ab_hi)(em_lo + ab_lo). Compares a solver result
// against that form.
inline SecularCheck verify_secular_closed_form(const SecularCoefficients& k,
                                               const Mat4& rho, double tol = 1e-10) {
  const double z = (k.em_hi + k.ab_hi) * (k.em_lo + k.ab_lo);
  const std::array<double, 4> want = {k.ab_hi * k.ab_lo / z, k.ab_hi * k.em_lo / z,
                                      k.em_hi * k.ab_lo / z, k.em_hi * k.em_lo / z};
  SecularCheck c;
  for (int i = 0; i < 4; ++i) {
    c.deltas[i] = rho(i, i).real() - want[i];
    if (!(std::abs(c.deltas[i]) <= tol)) c.pass = false;
  }
  return c;
}

}  // namespace nessq

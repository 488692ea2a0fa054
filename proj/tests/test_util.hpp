#pragma once

#include <random>

#include <nessq/observables.hpp>

namespace testutil {

struct Draw {
  nessq::SystemParams params;
  double ta = 0.0;
  double tb = 0.0;
};

// Random valid parameter set: frequencies well inside the validity region,
// detuning of either sign, temperatures from cold to hot.
inline Draw draw_params(std::mt19937& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (;;) {
    const double omega = 10.0 + 40.0 * u01(rng);
    const double xi = 0.5 + 4.5 * u01(rng);
    const double delta = -20.0 + 40.0 * u01(rng);
    const double ta = 100.0 * u01(rng);
    const double tb = 100.0 * u01(rng);
    if (omega <= 0.5 * std::hypot(delta, 2.0 * xi) + 1e-6) continue;
    return {{omega + 0.5 * delta, omega - 0.5 * delta, xi}, ta, tb};
  }
}

inline nessq::BathSetup bath_for(const Draw& d, char case_label) {
  return {d.ta, d.tb, 1.0, nessq::channels_for_case(case_label)};
}

// Random Hermitian unit-trace matrix, a generic test state.
inline nessq::Mat4 random_state(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  nessq::Mat4 m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = nessq::complexd(u(rng), u(rng));
  nessq::Mat4 rho = m * m.adjoint();  // positive by construction
  return rho / rho.trace().real();
}

}  // namespace testutil

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace nessq {

using complexd = std::complex<double>;
using Mat4 = Eigen::Matrix4cd;
using Vec16 = Eigen::Matrix<complexd, 16, 1>;
using SuperOp = Eigen::Matrix<complexd, 16, 16>;

// Column-stacked matrix <-> vector maps used throughout: superoperators act
// on vec(rho) with rho stacked column by column.
inline Vec16 to_vec(const Mat4& m) { return Eigen::Map<const Vec16>(m.data()); }
inline Mat4 from_vec(const Vec16& v) { return Eigen::Map<const Mat4>(v.data()); }

namespace detail {
inline std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}
}  // namespace detail

// Two two-level atoms with an excitation-exchange coupling,
//   H = (omega1/2) sz1 + (omega2/2) sz2 + xi (s1+ s2- + s1- s2+),
// in the product basis {|ee>, |eg>, |ge>, |gg>}. Energies and temperatures
// are all in the same units as the damping rate.
struct SystemParams {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double xi = 0.0;

  double omega() const { return 0.5 * (omega1 + omega2); }  // mean frequency
  double delta() const { return omega1 - omega2; }          // detuning
};

inline void validate(const SystemParams& p) {
  if (!std::isfinite(p.omega1) || !std::isfinite(p.omega2) || !std::isfinite(p.xi))
    throw std::invalid_argument("system parameters must be finite");
  if (!(p.xi > 0.0))
    throw std::invalid_argument("exchange coupling xi must be positive");
  const double half_split = 0.5 * std::hypot(p.delta(), 2.0 * p.xi);
  if (!(p.omega() > half_split))
    throw std::invalid_argument(
        "mean frequency too small: omega1*omega2 must exceed xi^2 so both "
        "dressed transition energies stay positive");
}

// Eigenbasis of the coupled pair. Levels are ordered top down,
// lambda[0] >= lambda[1] > lambda[2] >= lambda[3]; vectors.col(l) is the
// corresponding eigenvector in the product basis. theta is the mixing angle
// of the single-excitation doublet, kept in (0, pi) so the doublet vectors
// vary continuously through resonance and each column keeps its eigenvalue.
struct EigenStructure {
  double omega = 0.0;
  double delta = 0.0;
  double theta = 0.0;
  std::array<double, 4> lambda{};
  Mat4 vectors = Mat4::Zero();
  double eps1 = 0.0;   // transition energy of 1<->3 and 2<->4
  double eps2 = 0.0;   // transition energy of 1<->2 and 3<->4
  double eps12 = 0.0;  // eps1 - eps2, the splitting between the two bands
};

inline Mat4 hamiltonian(const SystemParams& p) {
  Mat4 h = Mat4::Zero();
  h(0, 0) = p.omega();
  h(1, 1) = 0.5 * p.delta();
  h(2, 2) = -0.5 * p.delta();
  h(3, 3) = -p.omega();
  h(1, 2) = p.xi;
  h(2, 1) = p.xi;
  return h;
}

inline EigenStructure eigensystem(const SystemParams& p) {
  validate(p);
  EigenStructure e;
  e.omega = p.omega();
  e.delta = p.delta();
  e.theta = std::atan2(2.0 * p.xi, e.delta);
  const double lam2 = 0.5 * std::hypot(e.delta, 2.0 * p.xi);
  e.lambda = {e.omega, lam2, -lam2, -e.omega};
  const double c = std::cos(0.5 * e.theta);
  const double s = std::sin(0.5 * e.theta);
  e.vectors(0, 0) = 1.0;
  e.vectors(1, 1) = c;
  e.vectors(2, 1) = s;
  e.vectors(1, 2) = -s;
  e.vectors(2, 2) = c;
  e.vectors(3, 3) = 1.0;
  e.eps1 = e.omega + lam2;
  e.eps2 = e.omega - lam2;
  e.eps12 = e.eps1 - e.eps2;
  return e;
}

// Mean occupation of a bath mode at energy eps > 0. T = 0 is allowed and
// gives 0; so does a T small enough to overflow the exponent.
inline double thermal_occupation(double eps, double temperature) {
  if (!(eps > 0.0))
    throw std::invalid_argument("thermal_occupation: energy must be positive");
  if (!(temperature >= 0.0))
    throw std::invalid_argument("thermal_occupation: temperature must be nonnegative");
  if (temperature == 0.0) return 0.0;
  return 1.0 / std::expm1(eps / temperature);
}

}  // namespace nessq

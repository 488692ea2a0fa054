#pragma once

#include <string>
#include <utility>
#include <vector>

#include "generator.hpp"

namespace nessq {

// Solve tolerances. Rank: singular values below kNullRankTol * s_max count
// as stationary. Residual: a computed steady state must satisfy
// ||L(rho)|| <= kResidualTol * ||L||. Positivity: band-mixing generators are
// not completely positive, so eigenvalues down to -kPositivityTol pass.
inline constexpr double kNullRankTol = 1e-10;
inline constexpr double kResidualTol = 1e-11;
inline constexpr double kHermTol = 1e-10;
inline constexpr double kPositivityTol = 1e-8;

struct SteadySolution {
  Mat4 rho = Mat4::Zero();
  double residual = 0.0;        // ||L(rho)||_F after the solve
  double min_eigenvalue = 0.0;  // smallest eigenvalue of rho
};

// Thrown when the stationary subspace is not one-dimensional; carries the
// computed dimension and an orthonormal basis of the subspace.
class DegenerateSteadyState : public std::runtime_error {
 public:
  DegenerateSteadyState(int dim, std::vector<Mat4> vecs)
      : std::runtime_error("steady state is not unique: null space has dimension " +
                           std::to_string(dim)),
        null_dimension(dim),
        basis(std::move(vecs)) {}

  int null_dimension;
  std::vector<Mat4> basis;
};

// Orthonormal basis of the generator's stationary subspace. The vectors are
// raw null vectors of the action matrix, not normalized density matrices.
inline std::vector<Mat4> steady_family(const Generator& g,
                                       double rank_tol = kNullRankTol) {
  Eigen::JacobiSVD<SuperOp> svd(g.action, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  std::vector<Mat4> basis;
  for (int i = 0; i < 16; ++i)
    if (sv(i) <= rank_tol * sv(0)) basis.push_back(from_vec(svd.matrixV().col(i)));
  return basis;
}

namespace detail {

inline void check_physical(SteadySolution& out, const Generator& g) {
  out.residual = (g.action * to_vec(out.rho)).norm();
  if (out.residual > kResidualTol * g.action.norm())
    throw std::runtime_error("stationarity residual " + short_num(out.residual) +
                             " exceeds tolerance; the generator is suspect");
  Eigen::SelfAdjointEigenSolver<Mat4> es(out.rho);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  if (out.min_eigenvalue < -kPositivityTol)
    throw std::runtime_error("steady state has eigenvalue " +
                             short_num(out.min_eigenvalue) +
                             " below the positivity tolerance");
}

}  // namespace detail

// The unique steady state of the generator. The rank of the action matrix is
// checked first; the solve replaces one row of the stationarity system with
// the trace constraint.
inline SteadySolution steady_state(const Generator& g) {
  Eigen::JacobiSVD<SuperOp> svd(g.action, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int dim = 0;
  for (int i = 0; i < 16; ++i)
    if (sv(i) <= kNullRankTol * sv(0)) ++dim;
  if (dim != 1) {
    std::vector<Mat4> basis;
    for (int i = 0; i < 16; ++i)
      if (sv(i) <= kNullRankTol * sv(0)) basis.push_back(from_vec(svd.matrixV().col(i)));
    throw DegenerateSteadyState(dim, std::move(basis));
  }

  SuperOp a = g.action;
  a.row(0).setZero();
  for (int k : {0, 5, 10, 15}) a(0, k) = 1.0;
  Vec16 b = Vec16::Zero();
  b(0) = 1.0;
  const Vec16 x = a.partialPivLu().solve(b);
  const Mat4 raw = from_vec(x);

  const double herm_err = (raw - raw.adjoint()).norm();
  if (herm_err > kHermTol)
    throw std::runtime_error("steady state came out non-Hermitian (asymmetry " +
                             detail::short_num(herm_err) +
                             "); the generator construction is suspect");

  SteadySolution out;
  out.rho = 0.5 * (raw + raw.adjoint());
  detail::check_physical(out, g);
  return out;
}

// Infinite-time limit of rho0 under the generator flow. Well defined also
// for a degenerate stationary subspace: rho0 is projected onto it along the
// decaying directions (oblique projector from the right and left null
// bases). For a unique steady state this returns it regardless of rho0.
inline SteadySolution asymptotic_state(const Generator& g, const Mat4& rho0) {
  Eigen::JacobiSVD<SuperOp> svd(g.action, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int dim = 0;
  for (int i = 0; i < 16; ++i)
    if (sv(i) <= kNullRankTol * sv(0)) ++dim;
  if (dim == 0) throw std::runtime_error("generator has no stationary direction");

  Eigen::MatrixXcd rnull(16, dim), wnull(16, dim);
  int k = 0;
  for (int i = 0; i < 16; ++i) {
    if (sv(i) <= kNullRankTol * sv(0)) {
      rnull.col(k) = svd.matrixV().col(i);
      wnull.col(k) = svd.matrixU().col(i);
      ++k;
    }
  }

  Eigen::FullPivLU<Eigen::MatrixXcd> core(wnull.adjoint() * rnull);
  if (!core.isInvertible())
    throw std::runtime_error("stationary subspace is defective; no projector exists");
  const Vec16 x = rnull * core.solve(wnull.adjoint() * to_vec(rho0));

  const Mat4 raw = from_vec(x);
  SteadySolution out;
  out.rho = 0.5 * (raw + raw.adjoint());
  const double tr = out.rho.trace().real();
  if (std::abs(tr - 1.0) > 1e-6)
    throw std::runtime_error("projected state lost its trace (" +
                             detail::short_num(tr) + "); generator is suspect");
  out.rho /= tr;
  detail::check_physical(out, g);
  return out;
}

struct EvolveStats {
  double trace_drift = 0.0;
  double herm_drift = 0.0;
  bool renormalized = false;
};

// Fixed-step classical Runge-Kutta integration of d rho/dt = L(rho), the
// independent oracle for the algebraic steady states. The complex system is
// unfolded to a real 32-dimensional one so the hot loop is a real matvec.
// Trace drift beyond 1e-9 is renormalized away and reported through stats;
// drift large enough to signal step instability throws.
inline Mat4 evolve(const Generator& g, const Mat4& rho0, double t_final, double dt,
                   EvolveStats* stats = nullptr) {
  if (!(dt > 0.0)) throw std::invalid_argument("evolve: dt must be positive");
  if (!(t_final >= 0.0)) throw std::invalid_argument("evolve: t_final must be nonnegative");

  using RVec = Eigen::Matrix<double, 32, 1>;
  using RMat = Eigen::Matrix<double, 32, 32>;
  RMat a;
  a << g.action.real(), -g.action.imag(), g.action.imag(), g.action.real();
  RVec x;
  x << to_vec(rho0).real(), to_vec(rho0).imag();

  const long steps = std::lround(t_final / dt);
  RVec k1, k2, k3, k4, tmp;
  for (long i = 0; i < steps; ++i) {
    k1.noalias() = a * x;
    tmp = x + (0.5 * dt) * k1;
    k2.noalias() = a * tmp;
    tmp = x + (0.5 * dt) * k2;
    k3.noalias() = a * tmp;
    tmp = x + dt * k3;
    k4.noalias() = a * tmp;
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  Vec16 v;
  for (int i = 0; i < 16; ++i) v(i) = complexd(x(i), x(16 + i));
  Mat4 rho = from_vec(v);
  if (!rho.allFinite())
    throw std::runtime_error("evolve: integration diverged; reduce dt");

  EvolveStats st;
  st.trace_drift = std::abs(rho.trace().real() - (rho0.trace().real())) +
                   std::abs(rho.trace().imag());
  st.herm_drift = (rho - rho.adjoint()).norm();
  if (st.trace_drift > 1e-3 || st.herm_drift > 1e-3)
    throw std::runtime_error("evolve: trace or Hermiticity drift signals an unstable step size (drift " +
                             detail::short_num(std::max(st.trace_drift, st.herm_drift)) + ")");
  if (st.trace_drift > 1e-9 && rho0.trace().real() != 0.0) {
    rho *= rho0.trace().real() / rho.trace().real();
    st.renormalized = true;
  }
  if (stats) *stats = st;
  return rho;
}

// Reduced equation of motion of the separate-baths wiring on the vector
// [rho11, rho22, rho33, rho44, rho32, rho23]: these six entries close on
// themselves because every other coherence decouples from them.
struct ReducedSystem {
  Eigen::Matrix<complexd, 6, 6> m = Eigen::Matrix<complexd, 6, 6>::Zero();
  complexd mu{};  // decay-plus-precession scalar acting on the coherence pair
};

inline ReducedSystem reduced_system_case_a(const SecularCoefficients& k,
                                           const NonSecularCoefficients& d,
                                           const EigenStructure& e) {
  const double g1 = k.em_hi, g2 = k.ab_hi, g3 = k.em_lo, g4 = k.ab_lo;
  const double dp24 = d.diff_ab_hi + d.diff_ab_lo;  // paired absorption asymmetries
  const double dm32 = d.diff_em_lo - d.diff_ab_hi;
  const double dm14 = d.diff_em_hi - d.diff_ab_lo;
  const double dp13 = d.diff_em_hi + d.diff_em_lo;  // paired emission asymmetries
  ReducedSystem rs;
  rs.mu = complexd(-(g1 + g2) - (g3 + g4), e.eps12);
  rs.m << -2.0 * (g1 + g3), 2.0 * g4, 2.0 * g2, 0.0, dp24, dp24,
      2.0 * g3, -2.0 * (g1 + g4), 0.0, 2.0 * g2, dm32, dm32,
      2.0 * g1, 0.0, -2.0 * (g2 + g3), 2.0 * g4, dm14, dm14,
      0.0, 2.0 * g1, 2.0 * g3, -2.0 * (g2 + g4), -dp13, -dp13,
      dp13, dm14, dm32, -dp24, rs.mu, 0.0,
      dp13, dm14, dm32, -dp24, 0.0, std::conj(rs.mu);
  return rs;
}

// Steady state from the reduced 6x6 system, embedded back into the full
// matrix shape (all other coherences are zero in this wiring).
inline Mat4 reduced_steady_state_case_a(const SecularCoefficients& k,
                                        const NonSecularCoefficients& d,
                                        const EigenStructure& e) {
  const ReducedSystem rs = reduced_system_case_a(k, d, e);
  Eigen::Matrix<complexd, 6, 6> a = rs.m;
  a.row(0) << 1.0, 1.0, 1.0, 1.0, 0.0, 0.0;
  Eigen::Matrix<complexd, 6, 1> b = Eigen::Matrix<complexd, 6, 1>::Zero();
  b(0) = 1.0;
  const Eigen::Matrix<complexd, 6, 1> x = a.partialPivLu().solve(b);
  if (std::abs(x(5) - std::conj(x(4))) > 1e-10)
    throw std::runtime_error("reduced solve lost the conjugate-pair structure");
  Mat4 rho = Mat4::Zero();
  for (int i = 0; i < 4; ++i) rho(i, i) = x(i).real();
  rho(2, 1) = x(4);
  rho(1, 2) = std::conj(x(4));
  return rho;
}

}  // namespace nessq

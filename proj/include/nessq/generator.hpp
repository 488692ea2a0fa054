#pragma once

#include <array>

#include "model.hpp"

namespace nessq {

// Coupling weights between the atoms and the two baths. The four named
// wirings: A couples each atom to its own bath, B additionally attaches
// atom 2 to bath a, C additionally attaches atom 1 to bath b, D attaches
// both atoms to both baths.
struct Channels {
  double atom1_bath_a = 0.0;
  double atom1_bath_b = 0.0;
  double atom2_bath_a = 0.0;
  double atom2_bath_b = 0.0;
};

inline Channels channels_for_case(char label) {
  switch (label) {
    case 'A': case 'a': return {1.0, 0.0, 0.0, 1.0};
    case 'B': case 'b': return {1.0, 0.0, 1.0, 1.0};
    case 'C': case 'c': return {1.0, 1.0, 0.0, 1.0};
    case 'D': case 'd': return {1.0, 1.0, 1.0, 1.0};
    default:
      throw std::invalid_argument("unknown coupling case (use A, B, C or D)");
  }
}

struct BathSetup {
  double temp_a = 0.0;
  double temp_b = 0.0;
  double gamma = 1.0;  // flat spectral density: one damping rate for all channels
  Channels channels{};
};

inline void validate(const BathSetup& b) {
  if (!std::isfinite(b.temp_a) || !std::isfinite(b.temp_b) || !std::isfinite(b.gamma))
    throw std::invalid_argument("bath parameters must be finite");
  if (!(b.temp_a >= 0.0) || !(b.temp_b >= 0.0))
    throw std::invalid_argument("bath temperatures must be nonnegative");
  if (!(b.gamma > 0.0))
    throw std::invalid_argument("damping rate gamma must be positive");
  const Channels& c = b.channels;
  if (!std::isfinite(c.atom1_bath_a) || !std::isfinite(c.atom1_bath_b) ||
      !std::isfinite(c.atom2_bath_a) || !std::isfinite(c.atom2_bath_b))
    throw std::invalid_argument("channel weights must be finite");
}

// Emission/absorption rate pair of one bath at one transition energy.
struct RatePair {
  double em = 0.0;
  double ab = 0.0;
};

inline RatePair rates(double eps, double temperature, double gamma) {
  const double n = thermal_occupation(eps, temperature);
  return {gamma * (n + 1.0), gamma * n};
}

// Both baths' rates at one transition energy.
struct RateCoefficients {
  RatePair a;
  RatePair b;
};

inline RateCoefficients rate_coefficients(const BathSetup& baths, double eps) {
  return {rates(eps, baths.temp_a, baths.gamma), rates(eps, baths.temp_b, baths.gamma)};
}

// Superoperator building blocks, all matrices on column-stacked rho.

// rho -> a rho b
inline SuperOp sandwich_op(const Mat4& a, const Mat4& b) {
  SuperOp s;
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i)
      for (int l = 0; l < 4; ++l)
        for (int k = 0; k < 4; ++k)
          s(4 * j + i, 4 * l + k) = a(i, k) * b(l, j);
  return s;
}

inline SuperOp left_op(const Mat4& a) { return sandwich_op(a, Mat4::Identity()); }
inline SuperOp right_op(const Mat4& b) { return sandwich_op(Mat4::Identity(), b); }

// Hermitian-conjugate companion: the superoperator rho -> (s(rho^+))^+.
// On vec indices this is the transpose permutation around a conjugation.
inline SuperOp hc_op(const SuperOp& s) {
  auto swap_rc = [](int k) { return 4 * (k % 4) + k / 4; };
  SuperOp out;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      out(i, j) = std::conj(s(swap_rc(i), swap_rc(j)));
  return out;
}

// Damping channel with the factor-2 normalization:
// rho -> 2 x rho x^+ - x^+ x rho - rho x^+ x.
inline SuperOp damping_op(const Mat4& x) {
  const Mat4 xx = x.adjoint() * x;
  return 2.0 * sandwich_op(x, x.adjoint()) - left_op(xx) - right_op(xx);
}

// |i><j| between dressed levels, 0-based.
inline Mat4 transition(int i, int j) {
  Mat4 m = Mat4::Zero();
  m(i, j) = 1.0;
  return m;
}

// Per-bath weights of the four dressed transitions {12, 13, 24, 34}: the
// doublet mixing spreads each atom's coupling over both frequency bands.
inline std::array<double, 4> transition_weights(const EigenStructure& e,
                                                double atom1, double atom2) {
  const double c = std::cos(0.5 * e.theta);
  const double s = std::sin(0.5 * e.theta);
  return {atom1 * s + atom2 * c, atom1 * c - atom2 * s,
          atom1 * c + atom2 * s, -atom1 * s + atom2 * c};
}

struct GeneratorOptions {
  bool secular = false;               // drop the band-mixing (cross-frequency) terms
  bool allow_decoupled_bath = false;  // accept a bath whose channel weights are all zero
};

// The full evolution generator: d/dt vec(rho) = action * vec(rho), written
// in the dressed basis.
struct Generator {
  SuperOp action = SuperOp::Zero();
  SystemParams params;
  BathSetup baths;
  EigenStructure eig;
  bool secular = false;

  Mat4 apply(const Mat4& rho) const {
    const Vec16 v = action * to_vec(rho);
    return from_vec(v);
  }
};

namespace detail {

inline SuperOp hamiltonian_part(const EigenStructure& e) {
  Mat4 hd = Mat4::Zero();
  for (int i = 0; i < 4; ++i) hd(i, i) = e.lambda[i];
  return complexd(0.0, -1.0) * (left_op(hd) - right_op(hd));
}

}  // namespace detail

// Weak-coupling generator for an arbitrary wiring, assembled transition pair
// by transition pair from the bath correlation rates. With secular set, only
// pairs within one frequency band are kept.
inline Generator build_generator(const SystemParams& p, const BathSetup& baths,
                                 GeneratorOptions opts = {}) {
  validate(p);
  validate(baths);
  if (!opts.allow_decoupled_bath) {
    const Channels& c = baths.channels;
    if (c.atom1_bath_a == 0.0 && c.atom2_bath_a == 0.0)
      throw std::invalid_argument(
          "bath a couples to neither atom; set allow_decoupled_bath to accept");
    if (c.atom1_bath_b == 0.0 && c.atom2_bath_b == 0.0)
      throw std::invalid_argument(
          "bath b couples to neither atom; set allow_decoupled_bath to accept");
  }

  Generator g;
  g.params = p;
  g.baths = baths;
  g.eig = eigensystem(p);
  g.secular = opts.secular;

  const EigenStructure& e = g.eig;
  g.action = detail::hamiltonian_part(e);

  // the four dressed transitions, their energies, and their frequency band
  const std::array<Mat4, 4> tau = {transition(0, 1), transition(0, 2),
                                   transition(1, 3), transition(2, 3)};
  const std::array<double, 4> energy = {e.eps2, e.eps1, e.eps1, e.eps2};
  const std::array<int, 4> band = {0, 1, 1, 0};

  struct BathRef {
    double temp;
    std::array<double, 4> d;
  };
  const std::array<BathRef, 2> bath_list = {
      BathRef{baths.temp_a,
              transition_weights(e, baths.channels.atom1_bath_a, baths.channels.atom2_bath_a)},
      BathRef{baths.temp_b,
              transition_weights(e, baths.channels.atom1_bath_b, baths.channels.atom2_bath_b)}};

  for (const BathRef& bath : bath_list) {
    for (int u = 0; u < 4; ++u) {
      for (int v = 0; v < 4; ++v) {
        if (opts.secular && band[u] != band[v]) continue;
        const double w = bath.d[u] * bath.d[v];
        if (w == 0.0) continue;
        const RatePair ru = rates(energy[u], bath.temp, baths.gamma);
        const RatePair rv = rates(energy[v], bath.temp, baths.gamma);
        const Mat4& tu = tau[u];
        const Mat4& tv = tau[v];
        const Mat4 up_pair = tu * tv.adjoint();
        const Mat4 down_pair = tu.adjoint() * tv;
        g.action += w * (-rv.em * left_op(up_pair) - ru.em * right_op(up_pair) +
                         (ru.ab + rv.ab) * sandwich_op(tu, tv.adjoint()) -
                         rv.ab * left_op(down_pair) - ru.ab * right_op(down_pair) +
                         (ru.em + rv.em) * sandwich_op(tu.adjoint(), tv));
      }
    }
  }
  return g;
}

// Closed-form rate tables for the two wirings whose generators are also
// assembled term by term below. They serve as independent fixtures for the
// generic builder and expose the rates the reduced 6x6 system is built from.
//
// Naming: hi/lo refer to the two transition bands (energies eps1/eps2),
// em/ab to emission and absorption.

// Separate-baths wiring. cross_* weight the coherence-transfer sandwiches
// within one band; diff_*/sum_* are the band-mixing rates carrying the
// bath asymmetry and the bath total.
struct SecularCoefficients {
  double em_hi = 0, ab_hi = 0, em_lo = 0, ab_lo = 0;
  double cross_em_hi = 0, cross_ab_hi = 0, cross_em_lo = 0, cross_ab_lo = 0;
};

struct NonSecularCoefficients {
  double diff_em_hi = 0, diff_ab_hi = 0, diff_em_lo = 0, diff_ab_lo = 0;
  double sum_em_hi = 0, sum_ab_hi = 0, sum_em_lo = 0, sum_ab_lo = 0;
};

inline SecularCoefficients secular_coefficients_case_a(const EigenStructure& e,
                                                       const BathSetup& baths) {
  const double c2 = std::pow(std::cos(0.5 * e.theta), 2);
  const double s2 = std::pow(std::sin(0.5 * e.theta), 2);
  const RateCoefficients hi = rate_coefficients(baths, e.eps1);
  const RateCoefficients lo = rate_coefficients(baths, e.eps2);
  SecularCoefficients k;
  k.em_hi = c2 * hi.a.em + s2 * hi.b.em;
  k.ab_hi = c2 * hi.a.ab + s2 * hi.b.ab;
  k.em_lo = s2 * lo.a.em + c2 * lo.b.em;
  k.ab_lo = s2 * lo.a.ab + c2 * lo.b.ab;
  k.cross_em_hi = c2 * hi.a.em - s2 * hi.b.em;
  k.cross_ab_hi = c2 * hi.a.ab - s2 * hi.b.ab;
  k.cross_em_lo = -s2 * lo.a.em + c2 * lo.b.em;
  k.cross_ab_lo = -s2 * lo.a.ab + c2 * lo.b.ab;
  return k;
}

inline NonSecularCoefficients nonsecular_coefficients_case_a(const EigenStructure& e,
                                                             const BathSetup& baths) {
  const double sc = std::sin(0.5 * e.theta) * std::cos(0.5 * e.theta);
  const RateCoefficients hi = rate_coefficients(baths, e.eps1);
  const RateCoefficients lo = rate_coefficients(baths, e.eps2);
  NonSecularCoefficients k;
  k.diff_em_hi = sc * (hi.a.em - hi.b.em);
  k.diff_ab_hi = sc * (hi.a.ab - hi.b.ab);
  k.diff_em_lo = sc * (lo.a.em - lo.b.em);
  k.diff_ab_lo = sc * (lo.a.ab - lo.b.ab);
  k.sum_em_hi = sc * (hi.a.em + hi.b.em);
  k.sum_ab_hi = sc * (hi.a.ab + hi.b.ab);
  k.sum_em_lo = sc * (lo.a.em + lo.b.em);
  k.sum_ab_lo = sc * (lo.a.ab + lo.b.ab);
  return k;
}

// Shared-bath wiring (bath b attached to both atoms): every directed
// transition damps at its own rate and sixteen band-mixing terms appear.
// Array order matches the assembly in case_b_generator.
struct CaseBCoefficients {
  std::array<double, 8> damp{};   // dissipators on {31, 13, 43, 34, 42, 24, 21, 12}
  std::array<double, 4> cross{};  // sandwiches {(42,13), (24,31), (21,34), (12,43)}
  std::array<double, 16> mixed{};
};

inline CaseBCoefficients coefficients_case_b(const EigenStructure& e,
                                             const BathSetup& baths) {
  const double c = std::cos(0.5 * e.theta);
  const double s = std::sin(0.5 * e.theta);
  const double cm = (c - s) * (c - s);
  const double cp = (c + s) * (c + s);
  const double cms = c * c - s * s;
  const double sc = s * c;
  const RateCoefficients hi = rate_coefficients(baths, e.eps1);
  const RateCoefficients lo = rate_coefficients(baths, e.eps2);
  CaseBCoefficients k;
  k.damp = {cm * hi.a.em + s * s * hi.b.em, cm * hi.a.ab + s * s * hi.b.ab,
            cm * lo.a.em + c * c * lo.b.em, cm * lo.a.ab + c * c * lo.b.ab,
            cp * hi.a.em + s * s * hi.b.em, cp * hi.a.ab + s * s * hi.b.ab,
            cp * lo.a.em + c * c * lo.b.em, cp * lo.a.ab + c * c * lo.b.ab};
  k.cross = {cms * hi.a.em - s * s * hi.b.em, cms * hi.a.ab - s * s * hi.b.ab,
             cms * lo.a.em + c * c * lo.b.em, cms * lo.a.ab + c * c * lo.b.ab};
  k.mixed = {cms * hi.a.em - sc * hi.b.em,  // on 31 rho 12
             cms * hi.a.em + sc * hi.b.em,  // on 42 rho 34 minus left 32
             cms * hi.a.ab + sc * hi.b.ab,  // on 34 rho 42
             cms * hi.a.ab - sc * hi.b.ab,  // on 12 rho 31 minus right 32
             cms * lo.a.em - sc * lo.b.em,  // on 21 rho 13
             cms * lo.a.em + sc * lo.b.em,  // on 43 rho 24 minus left 23
             cms * lo.a.ab + sc * lo.b.ab,  // on 24 rho 43
             cms * lo.a.ab - sc * lo.b.ab,  // on 13 rho 21 minus right 23
             cp * hi.a.em + sc * hi.b.em,   // on 42 rho 12
             cm * hi.a.em - sc * hi.b.em,   // on 31 rho 34
             cp * hi.a.ab + sc * hi.b.ab,   // on 12 rho 42
             cm * hi.a.ab - sc * hi.b.ab,   // on 34 rho 31
             cp * lo.a.em + sc * lo.b.em,   // on 21 rho 24
             cm * lo.a.em - sc * lo.b.em,   // on 43 rho 13
             cp * lo.a.ab + sc * lo.b.ab,   // on 24 rho 21
             cm * lo.a.ab - sc * lo.b.ab};  // on 13 rho 43
  return k;
}

namespace detail {

inline void require_channels(const Channels& got, char label, const char* who) {
  const Channels want = channels_for_case(label);
  if (got.atom1_bath_a != want.atom1_bath_a || got.atom1_bath_b != want.atom1_bath_b ||
      got.atom2_bath_a != want.atom2_bath_a || got.atom2_bath_b != want.atom2_bath_b)
    throw std::invalid_argument(std::string(who) + ": bath wiring does not match this closed form");
}

}  // namespace detail

// Term-by-term closed form of the separate-baths generator. Kept alongside
// the generic builder as an independently derived fixture.
inline Generator case_a_generator(const SystemParams& p, const BathSetup& baths,
                                  bool secular) {
  validate(p);
  validate(baths);
  detail::require_channels(baths.channels, 'A', "case_a_generator");

  Generator g;
  g.params = p;
  g.baths = baths;
  g.eig = eigensystem(p);
  g.secular = secular;

  auto t = [](int i, int j) { return transition(i - 1, j - 1); };
  const SecularCoefficients k = secular_coefficients_case_a(g.eig, baths);

  SuperOp l = detail::hamiltonian_part(g.eig);
  l += k.em_hi * (damping_op(t(3, 1)) + damping_op(t(4, 2)));
  l += k.ab_hi * (damping_op(t(1, 3)) + damping_op(t(2, 4)));
  l += k.em_lo * (damping_op(t(2, 1)) + damping_op(t(4, 3)));
  l += k.ab_lo * (damping_op(t(1, 2)) + damping_op(t(3, 4)));
  const SuperOp crossed =
      2.0 * (k.cross_em_hi * sandwich_op(t(4, 2), t(1, 3)) +
             k.cross_ab_hi * sandwich_op(t(2, 4), t(3, 1)) +
             k.cross_em_lo * sandwich_op(t(2, 1), t(3, 4)) +
             k.cross_ab_lo * sandwich_op(t(1, 2), t(4, 3)));
  l += crossed + hc_op(crossed);

  if (!secular) {
    const NonSecularCoefficients d = nonsecular_coefficients_case_a(g.eig, baths);
    const SuperOp r =
        d.diff_em_hi * (left_op(t(3, 2)) + sandwich_op(t(3, 1), t(1, 2)) -
                        sandwich_op(t(4, 2), t(3, 4))) +
        d.diff_ab_hi * (sandwich_op(t(1, 2), t(3, 1)) - right_op(t(3, 2)) -
                        sandwich_op(t(3, 4), t(4, 2))) +
        d.diff_em_lo * (left_op(t(2, 3)) + sandwich_op(t(2, 1), t(1, 3)) -
                        sandwich_op(t(4, 3), t(2, 4))) +
        d.diff_ab_lo * (sandwich_op(t(1, 3), t(2, 1)) - right_op(t(2, 3)) -
                        sandwich_op(t(2, 4), t(4, 3))) +
        d.sum_em_hi * (sandwich_op(t(4, 2), t(1, 2)) - sandwich_op(t(3, 1), t(3, 4))) +
        d.sum_ab_hi * (sandwich_op(t(1, 2), t(4, 2)) - sandwich_op(t(3, 4), t(3, 1))) +
        d.sum_em_lo * (sandwich_op(t(2, 1), t(2, 4)) - sandwich_op(t(4, 3), t(1, 3))) +
        d.sum_ab_lo * (sandwich_op(t(2, 4), t(2, 1)) - sandwich_op(t(1, 3), t(4, 3)));
    l += r + hc_op(r);
  }
  g.action = l;
  return g;
}

// Term-by-term closed form of the shared-bath generator (atom 2 coupled to
// both baths), same role as case_a_generator.
inline Generator case_b_generator(const SystemParams& p, const BathSetup& baths,
                                  bool secular) {
  validate(p);
  validate(baths);
  detail::require_channels(baths.channels, 'B', "case_b_generator");

  Generator g;
  g.params = p;
  g.baths = baths;
  g.eig = eigensystem(p);
  g.secular = secular;

  auto t = [](int i, int j) { return transition(i - 1, j - 1); };
  const CaseBCoefficients k = coefficients_case_b(g.eig, baths);

  SuperOp l = detail::hamiltonian_part(g.eig);
  l += k.damp[0] * damping_op(t(3, 1)) + k.damp[1] * damping_op(t(1, 3));
  l += k.damp[2] * damping_op(t(4, 3)) + k.damp[3] * damping_op(t(3, 4));
  l += k.damp[4] * damping_op(t(4, 2)) + k.damp[5] * damping_op(t(2, 4));
  l += k.damp[6] * damping_op(t(2, 1)) + k.damp[7] * damping_op(t(1, 2));
  const SuperOp crossed =
      2.0 * (k.cross[0] * sandwich_op(t(4, 2), t(1, 3)) +
             k.cross[1] * sandwich_op(t(2, 4), t(3, 1)) +
             k.cross[2] * sandwich_op(t(2, 1), t(3, 4)) +
             k.cross[3] * sandwich_op(t(1, 2), t(4, 3)));
  l += crossed + hc_op(crossed);

  if (!secular) {
    const std::array<double, 16>& m = k.mixed;
    const SuperOp r =
        m[0] * sandwich_op(t(3, 1), t(1, 2)) +
        m[1] * (sandwich_op(t(4, 2), t(3, 4)) - left_op(t(3, 2))) +
        m[2] * sandwich_op(t(3, 4), t(4, 2)) +
        m[3] * (sandwich_op(t(1, 2), t(3, 1)) - right_op(t(3, 2))) +
        m[4] * sandwich_op(t(2, 1), t(1, 3)) +
        m[5] * (sandwich_op(t(4, 3), t(2, 4)) - left_op(t(2, 3))) +
        m[6] * sandwich_op(t(2, 4), t(4, 3)) +
        m[7] * (sandwich_op(t(1, 3), t(2, 1)) - right_op(t(2, 3))) +
        m[8] * sandwich_op(t(4, 2), t(1, 2)) +
        m[9] * sandwich_op(t(3, 1), t(3, 4)) +
        m[10] * sandwich_op(t(1, 2), t(4, 2)) +
        m[11] * sandwich_op(t(3, 4), t(3, 1)) +
        m[12] * sandwich_op(t(2, 1), t(2, 4)) +
        m[13] * sandwich_op(t(4, 3), t(1, 3)) +
        m[14] * sandwich_op(t(2, 4), t(2, 1)) +
        m[15] * sandwich_op(t(1, 3), t(4, 3));
    l += r + hc_op(r);
  }
  g.action = l;
  return g;
}

}  // namespace nessq

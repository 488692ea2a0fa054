#pragma once

#include <atomic>
#include <charconv>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <thread>
#include <vector>

#include "observables.hpp"

namespace nessq {

// Grid axes a sweep can run over. Temperatures resolve per point as
// temp_a = ta and temp_b = ta + delta_t.
enum class SweepAxis { ta, delta_t, delta };

inline const char* axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::ta: return "ta";
    case SweepAxis::delta_t: return "delta_t";
    default: return "delta";
  }
}

struct AxisSpec {
  SweepAxis axis = SweepAxis::ta;
  double min = 0.0;
  double max = 0.0;
  int steps = 0;  // number of grid points, endpoints included

  double value(int i) const { return min + (max - min) * i / (steps - 1); }
};

// Which observable columns get filled; the CSV column layout itself is fixed.
enum OutputField : unsigned {
  kOutCoherence = 1u << 0,
  kOutRho32Re = 1u << 1,
  kOutRho32Im = 1u << 2,
  kOutPopulations = 1u << 3,
  kOutFlux = 1u << 4,
  kOutAll = (1u << 5) - 1,
};

// One resolved run: a point evaluation when no axis is set, a scan or a
// two-axis map otherwise. Unset scalars are NaN until validation fills or
// rejects them.
struct RunConfig {
  Channels channels = channels_for_case('A');
  bool secular = false;
  double omega = std::numeric_limits<double>::quiet_NaN();
  double xi = std::numeric_limits<double>::quiet_NaN();
  double delta = 0.0;
  double ta = std::numeric_limits<double>::quiet_NaN();
  double tb = std::numeric_limits<double>::quiet_NaN();
  double delta_t = std::numeric_limits<double>::quiet_NaN();
  std::optional<AxisSpec> axis1;
  std::optional<AxisSpec> axis2;
  unsigned outputs = kOutAll;
  int threads = 1;
};

namespace detail {

inline bool is_set(double v) { return !std::isnan(v); }

inline double parse_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw std::invalid_argument(what + ": not a number: '" + text + "'");
  return v;
}

inline long parse_long(const std::string& text, const std::string& what) {
  long v = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw std::invalid_argument(what + ": not an integer: '" + text + "'");
  return v;
}

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  return parts;
}

inline std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  size_t e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

}  // namespace detail

// Axis spec strings look like "delta_t:0:100:201".
inline AxisSpec parse_axis(const std::string& text) {
  const auto parts = detail::split(text, ':');
  if (parts.size() != 4)
    throw std::invalid_argument("axis spec must be NAME:MIN:MAX:STEPS, got '" + text + "'");
  AxisSpec a;
  if (parts[0] == "ta") a.axis = SweepAxis::ta;
  else if (parts[0] == "delta_t") a.axis = SweepAxis::delta_t;
  else if (parts[0] == "delta") a.axis = SweepAxis::delta;
  else throw std::invalid_argument("axis name must be ta, delta_t or delta, got '" + parts[0] + "'");
  a.min = detail::parse_double(parts[1], "axis min");
  a.max = detail::parse_double(parts[2], "axis max");
  a.steps = static_cast<int>(detail::parse_long(parts[3], "axis steps"));
  return a;
}

inline unsigned parse_outputs(const std::string& text) {
  unsigned mask = 0;
  for (const std::string& raw : detail::split(text, ',')) {
    const std::string name = detail::trim(raw);
    if (name == "coherence_abs") mask |= kOutCoherence;
    else if (name == "rho32_re") mask |= kOutRho32Re;
    else if (name == "rho32_im") mask |= kOutRho32Im;
    else if (name == "populations") mask |= kOutPopulations;
    else if (name == "flux") mask |= kOutFlux;
    else throw std::invalid_argument("unknown output field '" + name + "'");
  }
  return mask;
}

// Flat key = value config files; '#' starts a comment, blank lines are
// skipped. Returns pairs in file order so later keys override earlier ones.
inline std::vector<std::pair<std::string, std::string>> parse_config_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": empty key");
    pairs.emplace_back(key, value);
  }
  return pairs;
}

inline bool parse_on_off(const std::string& value, const std::string& what) {
  if (value == "on" || value == "true" || value == "1") return true;
  if (value == "off" || value == "false" || value == "0") return false;
  throw std::invalid_argument(what + ": expected on or off, got '" + value + "'");
}

// Applies one config key to a run. CLI flags reuse this so files and flags
// accept the same names.
inline void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "case") {
    if (value.size() != 1) throw std::invalid_argument("case must be one letter A-D");
    cfg.channels = channels_for_case(value[0]);
  } else if (key == "secular") {
    cfg.secular = parse_on_off(value, "secular");
  } else if (key == "omega") {
    cfg.omega = detail::parse_double(value, "omega");
  } else if (key == "xi") {
    cfg.xi = detail::parse_double(value, "xi");
  } else if (key == "delta") {
    cfg.delta = detail::parse_double(value, "delta");
  } else if (key == "ta") {
    cfg.ta = detail::parse_double(value, "ta");
  } else if (key == "tb") {
    cfg.tb = detail::parse_double(value, "tb");
  } else if (key == "delta_t") {
    cfg.delta_t = detail::parse_double(value, "delta_t");
  } else if (key == "axis1") {
    cfg.axis1 = parse_axis(value);
  } else if (key == "axis2") {
    cfg.axis2 = parse_axis(value);
  } else if (key == "outputs") {
    cfg.outputs = parse_outputs(value);
  } else if (key == "threads") {
    cfg.threads = static_cast<int>(detail::parse_long(value, "threads"));
  } else if (key == "atom1_bath_a") {
    cfg.channels.atom1_bath_a = detail::parse_double(value, key);
  } else if (key == "atom1_bath_b") {
    cfg.channels.atom1_bath_b = detail::parse_double(value, key);
  } else if (key == "atom2_bath_a") {
    cfg.channels.atom2_bath_a = detail::parse_double(value, key);
  } else if (key == "atom2_bath_b") {
    cfg.channels.atom2_bath_b = detail::parse_double(value, key);
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

namespace detail {

inline const AxisSpec* find_axis(const RunConfig& cfg, SweepAxis which) {
  if (cfg.axis1 && cfg.axis1->axis == which) return &*cfg.axis1;
  if (cfg.axis2 && cfg.axis2->axis == which) return &*cfg.axis2;
  return nullptr;
}

inline bool axis_covers(const RunConfig& cfg, SweepAxis which) {
  return find_axis(cfg, which) != nullptr;
}

}  // namespace detail

// Shared validation for point and sweep runs. Throws with the violated rule
// named; on success the config is normalized (tb folded into delta_t).
inline void validate_run(RunConfig& cfg, bool sweep_mode) {
  using detail::is_set;
  if (!is_set(cfg.omega)) throw std::invalid_argument("omega is required");
  if (!is_set(cfg.xi)) throw std::invalid_argument("xi is required");
  if (cfg.threads < 1 || cfg.threads > 256)
    throw std::invalid_argument("threads must be between 1 and 256");

  if (!sweep_mode && (cfg.axis1 || cfg.axis2))
    throw std::invalid_argument("a point run takes no axes");
  if (sweep_mode && !cfg.axis1)
    throw std::invalid_argument("a sweep needs axis1 (and optionally axis2)");
  if (cfg.axis2 && !cfg.axis1)
    throw std::invalid_argument("axis2 given without axis1");

  for (const auto& ax : {cfg.axis1, cfg.axis2}) {
    if (!ax) continue;
    if (ax->steps < 2) throw std::invalid_argument("axis steps must be at least 2");
    if (!(ax->min < ax->max)) throw std::invalid_argument("axis min must be below max");
  }
  if (cfg.axis1 && cfg.axis2 && cfg.axis1->axis == cfg.axis2->axis)
    throw std::invalid_argument("axis1 and axis2 must sweep different parameters");

  if (is_set(cfg.tb) && is_set(cfg.delta_t))
    throw std::invalid_argument("set either tb or delta_t, not both");
  if (is_set(cfg.tb)) {
    if (detail::axis_covers(cfg, SweepAxis::ta) || detail::axis_covers(cfg, SweepAxis::delta_t))
      throw std::invalid_argument("tb fixes both temperatures; use delta_t with a temperature axis");
    if (!is_set(cfg.ta)) throw std::invalid_argument("tb given but ta missing");
    cfg.delta_t = cfg.tb - cfg.ta;
    cfg.tb = std::numeric_limits<double>::quiet_NaN();
  }

  if (!detail::axis_covers(cfg, SweepAxis::ta) && !is_set(cfg.ta))
    throw std::invalid_argument("ta is required (fixed value or axis)");
  if (!detail::axis_covers(cfg, SweepAxis::delta_t) && !is_set(cfg.delta_t))
    throw std::invalid_argument("delta_t (or tb) is required, fixed or as an axis");

  // temperatures must be nonnegative across the whole grid; both resolve
  // linearly from the axes, so the axis minima bound them
  const AxisSpec* ta_axis = detail::find_axis(cfg, SweepAxis::ta);
  const AxisSpec* dt_axis = detail::find_axis(cfg, SweepAxis::delta_t);
  const double ta_min = ta_axis ? ta_axis->min : cfg.ta;
  const double dt_min = dt_axis ? dt_axis->min : cfg.delta_t;
  if (ta_min < 0.0)
    throw std::invalid_argument("temperature ta must be nonnegative at every grid point");
  if (ta_min + dt_min < 0.0)
    throw std::invalid_argument("resolved tb = ta + delta_t must be nonnegative at every grid point");
}

// One evaluated grid point. ok means the numeric columns are valid; a
// degenerate stationary subspace is handled (not failed) by reporting the
// infinite-time limit of the maximally mixed state, marked in note.
struct RowResult {
  std::optional<double> axis1;
  std::optional<double> axis2;
  SteadyReport rep{};
  bool ok = false;
  int degenerate_dim = 0;
  std::string note;
};

inline RowResult evaluate_point(const RunConfig& cfg, std::optional<double> a1,
                                std::optional<double> a2) {
  RowResult row;
  row.axis1 = a1;
  row.axis2 = a2;

  double ta = cfg.ta, dt = cfg.delta_t, delta = cfg.delta;
  auto take = [&](const AxisSpec& ax, double v) {
    switch (ax.axis) {
      case SweepAxis::ta: ta = v; break;
      case SweepAxis::delta_t: dt = v; break;
      case SweepAxis::delta: delta = v; break;
    }
  };
  if (cfg.axis1 && a1) take(*cfg.axis1, *a1);
  if (cfg.axis2 && a2) take(*cfg.axis2, *a2);

  const SystemParams params{cfg.omega + 0.5 * delta, cfg.omega - 0.5 * delta, cfg.xi};
  const BathSetup baths{ta, ta + dt, 1.0, cfg.channels};
  try {
    const Generator gen = build_generator(params, baths, {cfg.secular, false});
    try {
      const SteadySolution sol = steady_state(gen);
      row.rep = report(sol, params);
      row.ok = true;
    } catch (const DegenerateSteadyState& e) {
      const SteadySolution lim = asymptotic_state(gen, Mat4::Identity() / 4.0);
      row.rep = report(lim, params);
      row.ok = true;
      row.degenerate_dim = e.null_dimension;
      row.note = "degenerate(dim=" + std::to_string(e.null_dimension) + ")";
    }
  } catch (const std::exception& e) {
    row.ok = false;
    row.note = e.what();
    for (char& ch : row.note)
      if (ch == ',' || ch == '\n') ch = ';';
  }
  return row;
}

inline constexpr const char* kCsvHeader =
    "axis1,axis2,rho11,rho22,rho33,rho44,rho32_re,rho32_im,coherence_abs,"
    "flux12,residual,min_eig,error";

// 12 significant digits, locale independent.
inline std::string format_sig(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

inline void write_row(std::ostream& os, const RowResult& row, unsigned outputs) {
  auto cell = [&os](bool filled, double v) {
    os << ',';
    if (filled) os << format_sig(v);
  };
  if (row.axis1) os << format_sig(*row.axis1);
  os << ',';
  if (row.axis2) os << format_sig(*row.axis2);
  const bool ok = row.ok;
  for (int i = 0; i < 4; ++i)
    cell(ok && (outputs & kOutPopulations), row.rep.populations[i]);
  cell(ok && (outputs & kOutRho32Re), row.rep.rho32.real());
  cell(ok && (outputs & kOutRho32Im), row.rep.rho32.imag());
  cell(ok && (outputs & kOutCoherence), row.rep.coherence_abs);
  cell(ok && (outputs & kOutFlux), row.rep.flux_12);
  cell(ok, row.rep.residual);
  cell(ok, row.rep.positivity_min_eig);
  os << ',' << row.note << '\n';
}

struct SweepSummary {
  long points = 0;
  long failures = 0;
  long degenerate = 0;
};

// Evaluates the grid (axis2 fastest), buffering rows so the emitted CSV is
// byte-identical for any thread count.
inline SweepSummary run_sweep(const RunConfig& cfg_in, std::ostream& os) {
  RunConfig cfg = cfg_in;
  validate_run(cfg, true);

  const int n1 = cfg.axis1->steps;
  const int n2 = cfg.axis2 ? cfg.axis2->steps : 1;
  const long total = static_cast<long>(n1) * n2;
  std::vector<RowResult> rows(total);

  std::atomic<long> next{0};
  auto worker = [&]() {
    for (;;) {
      const long idx = next.fetch_add(1);
      if (idx >= total) return;
      const int i1 = static_cast<int>(idx / n2);
      const int i2 = static_cast<int>(idx % n2);
      const std::optional<double> a2 =
          cfg.axis2 ? std::optional<double>(cfg.axis2->value(i2)) : std::nullopt;
      rows[idx] = evaluate_point(cfg, cfg.axis1->value(i1), a2);
    }
  };
  const int workers = static_cast<int>(std::min<long>(cfg.threads, total));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  os << kCsvHeader << '\n';
  SweepSummary sum;
  sum.points = total;
  for (const RowResult& row : rows) {
    write_row(os, row, cfg.outputs);
    if (!row.ok) ++sum.failures;
    if (row.degenerate_dim > 0) ++sum.degenerate;
  }
  return sum;
}

// Single-point evaluation: emits the header plus one row.
inline RowResult run_point(const RunConfig& cfg_in, std::ostream& os) {
  RunConfig cfg = cfg_in;
  validate_run(cfg, false);
  const RowResult row = evaluate_point(cfg, std::nullopt, std::nullopt);
  os << kCsvHeader << '\n';
  write_row(os, row, cfg.outputs);
  return row;
}

}  // namespace nessq

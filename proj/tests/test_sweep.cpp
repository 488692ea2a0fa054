#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nessq/sweep.hpp>

using namespace nessq;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\n') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == '\n') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

RunConfig base_point() {
  RunConfig cfg;
  cfg.omega = 30.0;
  cfg.xi = 2.0;
  cfg.ta = 10.0;
  cfg.delta_t = 50.0;
  return cfg;
}

}  // namespace

TEST_CASE("axis specs parse and reject malformed input", "[sweep]") {
  const AxisSpec a = parse_axis("delta_t:0:100:201");
  CHECK(a.axis == SweepAxis::delta_t);
  CHECK(a.min == 0.0);
  CHECK(a.max == 100.0);
  CHECK(a.steps == 201);
  CHECK(a.value(0) == 0.0);
  CHECK(a.value(200) == 100.0);
  CHECK_THAT(a.value(100), WithinAbs(50.0, 1e-12));

  CHECK(parse_axis("ta:0.5:20:40").axis == SweepAxis::ta);
  CHECK(parse_axis("delta:-20:20:81").axis == SweepAxis::delta);

  CHECK_THROWS_AS(parse_axis("delta_t:0:100"), std::invalid_argument);
  CHECK_THROWS_AS(parse_axis("delta_t:0:100:201:5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_axis("temp:0:100:201"), std::invalid_argument);
  CHECK_THROWS_AS(parse_axis("ta:zero:100:201"), std::invalid_argument);
  CHECK_THROWS_AS(parse_axis("ta:0:100:many"), std::invalid_argument);
}

TEST_CASE("output selections parse by name", "[sweep]") {
  CHECK(parse_outputs("coherence_abs") == kOutCoherence);
  CHECK(parse_outputs("rho32_re,rho32_im") == (kOutRho32Re | kOutRho32Im));
  CHECK(parse_outputs("populations, flux") == (kOutPopulations | kOutFlux));
  CHECK_THROWS_AS(parse_outputs("entropy"), std::invalid_argument);
}

TEST_CASE("config files parse in order with comments stripped", "[sweep]") {
  const std::string path = "sweep_test_config.cfg";
  {
    std::ofstream out(path);
    out << "# scan setup\n"
        << "case = B\n"
        << "omega = 30\n"
        << "omega = 25   # later keys win\n"
        << "\n"
        << "axis1 = delta_t:0:100:11\n";
  }
  const auto pairs = parse_config_file(path);
  REQUIRE(pairs.size() == 4);
  CHECK(pairs[0] == std::pair<std::string, std::string>{"case", "B"});
  CHECK(pairs[2].second == "25");
  CHECK(pairs[3].first == "axis1");

  RunConfig cfg;
  for (const auto& [k, v] : pairs) apply_key(cfg, k, v);
  CHECK(cfg.omega == 25.0);
  CHECK(cfg.channels.atom2_bath_a == 1.0);  // the B wiring
  REQUIRE(cfg.axis1.has_value());
  CHECK(cfg.axis1->steps == 11);
  std::remove(path.c_str());

  {
    std::ofstream out(path);
    out << "omega 30\n";
  }
  CHECK_THROWS_WITH(parse_config_file(path), ContainsSubstring(":1"));
  std::remove(path.c_str());

  CHECK_THROWS_AS(parse_config_file("no_such_file.cfg"), std::invalid_argument);
}

TEST_CASE("config keys cover the run parameters", "[sweep]") {
  RunConfig cfg;
  apply_key(cfg, "secular", "on");
  CHECK(cfg.secular);
  apply_key(cfg, "secular", "off");
  CHECK_FALSE(cfg.secular);
  apply_key(cfg, "xi", "2.5");
  CHECK(cfg.xi == 2.5);
  apply_key(cfg, "atom1_bath_b", "0.7");
  CHECK(cfg.channels.atom1_bath_b == 0.7);
  apply_key(cfg, "threads", "4");
  CHECK(cfg.threads == 4);
  apply_key(cfg, "outputs", "flux");
  CHECK(cfg.outputs == kOutFlux);

  CHECK_THROWS_AS(apply_key(cfg, "svd_tol", "1e-10"), std::invalid_argument);
  CHECK_THROWS_AS(apply_key(cfg, "secular", "maybe"), std::invalid_argument);
  CHECK_THROWS_AS(apply_key(cfg, "case", "E"), std::invalid_argument);
  CHECK_THROWS_AS(apply_key(cfg, "case", "AB"), std::invalid_argument);
}

TEST_CASE("run validation names the violated rule", "[sweep]") {
  auto expect_reject = [](RunConfig cfg, bool sweep, const std::string& phrase) {
    CHECK_THROWS_WITH(validate_run(cfg, sweep), ContainsSubstring(phrase));
  };

  RunConfig missing;
  expect_reject(missing, false, "omega is required");

  RunConfig cfg = base_point();
  CHECK_NOTHROW(validate_run(cfg, false));

  RunConfig no_xi = base_point();
  no_xi.xi = std::numeric_limits<double>::quiet_NaN();
  expect_reject(no_xi, false, "xi is required");

  RunConfig no_temp = base_point();
  no_temp.ta = std::numeric_limits<double>::quiet_NaN();
  expect_reject(no_temp, false, "ta is required");

  RunConfig both = base_point();
  both.tb = 60.0;
  expect_reject(both, false, "not both");

  RunConfig folded = base_point();
  folded.delta_t = std::numeric_limits<double>::quiet_NaN();
  folded.tb = 60.0;
  CHECK_NOTHROW(validate_run(folded, false));
  CHECK(folded.delta_t == 50.0);
  CHECK(std::isnan(folded.tb));

  RunConfig pointless = base_point();
  pointless.axis1 = parse_axis("delta:0:10:5");
  expect_reject(pointless, false, "takes no axes");
  expect_reject(base_point(), true, "needs axis1");

  RunConfig two = base_point();
  two.axis1 = parse_axis("delta:0:10:5");
  two.axis2 = parse_axis("delta:0:10:5");
  expect_reject(two, true, "different parameters");

  RunConfig one_step = base_point();
  one_step.axis1 = parse_axis("delta:0:10:1");
  expect_reject(one_step, true, "at least 2");

  RunConfig inverted = base_point();
  inverted.axis1 = parse_axis("delta:10:0:5");
  expect_reject(inverted, true, "min must be below max");

  RunConfig cold = base_point();
  cold.ta = -1.0;
  expect_reject(cold, false, "ta must be nonnegative");

  RunConfig colder = base_point();
  colder.axis1 = parse_axis("delta_t:-20:0:5");
  colder.ta = 5.0;
  expect_reject(colder, true, "tb = ta + delta_t");

  RunConfig fixed_tb = base_point();
  fixed_tb.delta_t = std::numeric_limits<double>::quiet_NaN();
  fixed_tb.tb = 60.0;
  fixed_tb.axis1 = parse_axis("ta:1:20:5");
  fixed_tb.ta = std::numeric_limits<double>::quiet_NaN();
  expect_reject(fixed_tb, true, "tb fixes both");

  RunConfig threads = base_point();
  threads.threads = 0;
  expect_reject(threads, false, "threads");
}

TEST_CASE("point runs emit one checked row under the fixed header", "[sweep]") {
  std::ostringstream out;
  const RowResult row = run_point(base_point(), out);
  REQUIRE(row.ok);

  const auto lines = lines_of(out.str());
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] ==
        "axis1,axis2,rho11,rho22,rho33,rho44,rho32_re,rho32_im,coherence_abs,"
        "flux12,residual,min_eig,error");

  const auto cells = split_csv(lines[1]);
  REQUIRE(cells.size() == 13);
  CHECK(cells[0].empty());  // no axes on a point run
  CHECK(cells[1].empty());
  CHECK(cells[12].empty());  // no error

  // the row must be the library answer, formatted and nothing else
  const SystemParams p{30.0, 30.0, 2.0};
  const BathSetup baths{10.0, 60.0, 1.0, channels_for_case('A')};
  const SteadyReport want = report(steady_state(build_generator(p, baths, {})), p);
  CHECK(cells[2] == format_sig(want.populations[0]));
  CHECK(cells[6] == format_sig(want.rho32.real()));
  CHECK(cells[7] == format_sig(want.rho32.imag()));
  CHECK(cells[8] == format_sig(want.coherence_abs));
  CHECK(cells[9] == format_sig(want.flux_12));
}

TEST_CASE("restricted outputs leave the other columns empty", "[sweep]") {
  RunConfig cfg = base_point();
  cfg.outputs = kOutCoherence;
  std::ostringstream out;
  run_point(cfg, out);
  const auto cells = split_csv(lines_of(out.str())[1]);
  REQUIRE(cells.size() == 13);
  CHECK(cells[2].empty());   // populations off
  CHECK(cells[6].empty());   // rho32 parts off
  CHECK_FALSE(cells[8].empty());   // coherence on
  CHECK(cells[9].empty());   // flux off
  CHECK_FALSE(cells[10].empty());  // residual always reported
  CHECK_FALSE(cells[11].empty());
}

TEST_CASE("sweeps are deterministic for any thread count", "[sweep]") {
  RunConfig cfg = base_point();
  cfg.delta_t = std::numeric_limits<double>::quiet_NaN();
  cfg.axis1 = parse_axis("delta_t:0:100:5");
  cfg.axis2 = parse_axis("ta:2:18:4");

  auto render = [&](int threads) {
    RunConfig c = cfg;
    c.threads = threads;
    std::ostringstream out;
    const SweepSummary sum = run_sweep(c, out);
    CHECK(sum.points == 20);
    CHECK(sum.failures == 0);
    return out.str();
  };

  const std::string single = render(1);
  CHECK(render(1) == single);  // repeatable
  CHECK(render(4) == single);  // and independent of the worker count
  CHECK(render(3) == single);

  const auto lines = lines_of(single);
  REQUIRE(lines.size() == 21);
  // axis2 varies fastest within a block of fixed axis1
  const auto first = split_csv(lines[1]);
  const auto second = split_csv(lines[2]);
  CHECK(first[0] == second[0]);
  CHECK(first[1] != second[1]);
}

TEST_CASE("grid values do not depend on the grid around them", "[sweep]") {
  // the same (axis1, axis2) point must produce identical bytes in a coarse
  // and a fine sweep covering it
  RunConfig coarse = base_point();
  coarse.delta_t = std::numeric_limits<double>::quiet_NaN();
  coarse.axis1 = parse_axis("delta_t:0:100:3");
  RunConfig fine = coarse;
  fine.axis1 = parse_axis("delta_t:0:100:5");

  std::ostringstream a, b;
  run_sweep(coarse, a);
  run_sweep(fine, b);
  const auto coarse_lines = lines_of(a.str());
  const auto fine_lines = lines_of(b.str());
  CHECK(coarse_lines[1] == fine_lines[1]);  // delta_t = 0
  CHECK(coarse_lines[2] == fine_lines[3]);  // delta_t = 50
  CHECK(coarse_lines[3] == fine_lines[5]);  // delta_t = 100
}

TEST_CASE("degenerate grid points are reported, not failed", "[sweep]") {
  RunConfig cfg = base_point();
  cfg.channels = channels_for_case('D');
  cfg.delta = 0.0;

  std::ostringstream out;
  const RowResult row = run_point(cfg, out);
  CHECK(row.ok);
  CHECK(row.degenerate_dim == 2);
  CHECK(row.note == "degenerate(dim=2)");

  const auto cells = split_csv(lines_of(out.str())[1]);
  REQUIRE(cells.size() == 13);
  CHECK(cells[12] == "degenerate(dim=2)");
  CHECK_FALSE(cells[2].empty());  // the limit state is still reported
  CHECK_THAT(detail::parse_double(cells[8], "coherence"), WithinAbs(0.0, 1e-10));

  // in a sweep the point is counted separately from failures
  RunConfig sweep = cfg;
  sweep.delta_t = std::numeric_limits<double>::quiet_NaN();
  sweep.axis1 = parse_axis("delta_t:40:60:3");
  std::ostringstream sout;
  const SweepSummary sum = run_sweep(sweep, sout);
  CHECK(sum.points == 3);
  CHECK(sum.failures == 0);
  CHECK(sum.degenerate == 3);
}

TEST_CASE("invalid grid points fail their row only", "[sweep]") {
  RunConfig cfg = base_point();
  cfg.delta_t = std::numeric_limits<double>::quiet_NaN();
  // omega = 30, xi = 2: delta beyond sqrt(4 omega^2 - 4 xi^2) ~ 59.9 is invalid
  cfg.axis1 = parse_axis("delta:50:70:3");
  std::ostringstream out;
  cfg.delta_t = 50.0;
  const SweepSummary sum = run_sweep(cfg, out);
  CHECK(sum.points == 3);
  CHECK(sum.failures == 2);

  const auto lines = lines_of(out.str());
  const auto bad = split_csv(lines[3]);
  CHECK(bad[2].empty());          // no numbers for a failed point
  CHECK_FALSE(bad[12].empty());   // but a reason
  CHECK(bad[12].find("mean frequency") != std::string::npos);
}

TEST_CASE("numbers render with twelve significant digits", "[sweep]") {
  CHECK(format_sig(0.0) == "0");
  CHECK(format_sig(1.0) == "1");
  CHECK(format_sig(-2.5) == "-2.5");
  CHECK(format_sig(0.110236097065911) == "0.110236097066");
  CHECK(format_sig(1.0 / 3.0) == "0.333333333333");
  CHECK(format_sig(2.5e-17) == "2.5e-17");
  CHECK(format_sig(123456789012345.0) == "1.23456789012e+14");
}


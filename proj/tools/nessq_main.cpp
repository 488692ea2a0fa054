#include <array>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <nessq/sweep.hpp>

namespace {

// One flag per config key, so a command line and a config file can express
// exactly the same runs. Values stay strings here; apply_key does the
// parsing and complains uniformly for both sources.
struct FlagTable {
  static constexpr int kCount = 12;
  static constexpr std::array<const char*, kCount> kFlags = {
      "--case", "--secular", "--omega",   "--xi",      "--delta", "--ta",
      "--tb",   "--delta-t", "--axis1",   "--axis2",   "--outputs", "--threads"};
  static constexpr std::array<const char*, kCount> kKeys = {
      "case", "secular", "omega",   "xi",      "delta", "ta",
      "tb",   "delta_t", "axis1",   "axis2",   "outputs", "threads"};

  std::string config_path;
  std::string out_path;
  std::array<std::string, kCount> values{};
  std::array<CLI::Option*, kCount> options{};

  bool given(const std::string& key) const {
    for (int i = 0; i < kCount; ++i)
      if (key == kKeys[i]) return options[i] != nullptr && options[i]->count() > 0;
    return false;
  }
};

void attach(CLI::App* cmd, FlagTable& f) {
  static constexpr std::array<const char*, FlagTable::kCount> kHelp = {
      "bath wiring preset A-D (A couples each atom to its own bath)",
      "on|off: drop or keep the band-mixing terms of the generator",
      "mean atomic frequency (omega1 + omega2) / 2",
      "excitation exchange coupling between the atoms",
      "detuning omega1 - omega2",
      "temperature of bath a",
      "temperature of bath b (alternative to --delta-t)",
      "temperature bias tb - ta",
      "sweep axis as NAME:MIN:MAX:STEPS with NAME one of ta, delta_t, delta",
      "optional second (fastest-varying) sweep axis, same format",
      "comma list of populations, rho32_re, rho32_im, coherence_abs, flux",
      "worker threads for sweep evaluation"};

  cmd->add_option("--config", f.config_path,
                  "key = value file applied before any flags");
  cmd->add_option("--out", f.out_path,
                  "write the CSV to this file instead of stdout ('-' forces stdout)");
  for (int i = 0; i < FlagTable::kCount; ++i)
    f.options[i] = cmd->add_option(FlagTable::kFlags[i], f.values[i], kHelp[i]);
}

int execute(const FlagTable& f, bool sweep_mode) {
  nessq::RunConfig cfg;
  std::string out_path;
  if (!f.config_path.empty()) {
    for (const auto& [key, value] : nessq::parse_config_file(f.config_path)) {
      if (key == "out") {  // output destination lives here, not in the run
        out_path = value;
        continue;
      }
      nessq::apply_key(cfg, key, value);
    }
  }

  // flags win over the file; choosing one temperature style on the command
  // line releases the other one a config file may have fixed
  constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
  if (f.given("tb") && !f.given("delta_t")) cfg.delta_t = kUnset;
  if (f.given("delta_t") && !f.given("tb")) cfg.tb = kUnset;
  for (int i = 0; i < FlagTable::kCount; ++i)
    if (f.options[i]->count() > 0)
      nessq::apply_key(cfg, FlagTable::kKeys[i], f.values[i]);

  if (!f.out_path.empty()) out_path = f.out_path;
  if (out_path == "-") out_path.clear();

  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file)
      throw std::invalid_argument("cannot open output file '" + out_path + "'");
    os = &file;
  }

  if (sweep_mode) {
    const nessq::SweepSummary sum = nessq::run_sweep(cfg, *os);
    std::cerr << "sweep: " << sum.points << " points, " << sum.failures
              << " failures, " << sum.degenerate << " degenerate\n";
    return sum.failures == sum.points ? 3 : 0;
  }
  const nessq::RowResult row = nessq::run_point(cfg, *os);
  if (!row.ok) {
    std::cerr << "point failed: " << row.note << '\n';
    return 3;
  }
  if (!row.note.empty()) std::cerr << "note: " << row.note << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"steady states of two exchange-coupled atoms held between two heat baths"};
  app.require_subcommand(1);
  CLI::App* point = app.add_subcommand("point", "evaluate a single parameter point");
  CLI::App* sweep = app.add_subcommand("sweep", "evaluate a one- or two-axis grid");
  FlagTable fp, fs;
  attach(point, fp);
  attach(sweep, fs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;  // help exits clean, usage mistakes do not
  }

  try {
    return execute(sweep->parsed() ? fs : fp, sweep->parsed());
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

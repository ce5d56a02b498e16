#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "timerev/discrete_modes.hpp"
#include "timerev/errors.hpp"
#include "timerev/experiment.hpp"

namespace {

using nlohmann::json;

constexpr int kOk = 0;
constexpr int kConfig = 2;
constexpr int kNumeric = 3;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw timerev::ConfigError("cannot open config file " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw timerev::ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw timerev::ConfigError("cannot write " + path.string());
  out << text;
}

std::string micron(const json& v) {
  if (!v.is_number()) return "n/a";
  return fmt::format("{:.4g} um", v.get<double>() * 1e6);
}

void print_human(const json& s, std::ostream& os) {
  os << "experiment: " << s.value("experiment", "?");
  if (s.contains("mode")) os << " (" << s["mode"].get<std::string>() << ")";
  os << ", " << s.value("rows", 0) << " rows\n";
  if (s.contains("audit")) {
    const json& a = s["audit"];
    os << fmt::format("N={} trials={} seed={}: max ratio deviation {:.3e} (tolerance {:.1e}) {}\n",
                      a["N"].get<std::size_t>(), a["trials"].get<std::size_t>(), a["seed"].get<std::uint64_t>(),
                      a["max_ratio_dev"].get<double>(), a["tolerance"].get<double>(),
                      a["pass"].get<bool>() ? "PASS" : "FAIL");
    return;
  }
  if (s.contains("theory"))
    os << "expected periods: two-photon " << micron(s["theory"]["two_photon_period"]) << ", classical "
       << micron(s["theory"]["classical_period"]) << "\n";
  for (const auto& [name, c] : s["curves"].items()) {
    os << "  " << name << ":";
    if (c.contains("period")) os << " period " << micron(c["period"]);
    if (c.contains("fwhm")) os << " FWHM " << micron(c["fwhm"]);
    if (c["peak_position"].is_number()) os << ", peak at " << micron(c["peak_position"]);
    os << "\n";
  }
  if (s.contains("max_deviation")) os << fmt::format("max forward/reversed deviation: {:.3e}\n", s["max_deviation"].get<double>());
}

int simulate(const std::string& config_path, bool raw, const std::string& out_override) {
  const timerev::ExperimentConfig cfg = timerev::parse_config(load_json(config_path));
  const timerev::RunResult result = timerev::run(cfg, {raw});
  const std::string out = out_override.empty() ? cfg.output : out_override;
  if (out.empty()) {
    std::cout << result.csv;
    print_human(result.summary, std::cerr);
  } else {
    std::filesystem::path csv_path(out);
    std::filesystem::path summary_path = csv_path;
    summary_path.replace_extension(".summary.json");
    write_file(csv_path, result.csv);
    write_file(summary_path, result.summary.dump(2) + "\n");
    print_human(result.summary, std::cout);
    std::cout << "wrote " << csv_path.string() << " and " << summary_path.string() << "\n";
  }
  return result.audit_failed ? kNumeric : kOk;
}

int audit(std::size_t n, std::size_t trials, std::uint64_t seed) {
  const timerev::AuditReport report = timerev::time_reversal_audit(n, trials, seed);
  std::cout << json(report).dump(2) << "\n";
  return report.pass ? kOk : kNumeric;
}

int validate(const std::string& config_path) {
  const auto diags = timerev::validate(load_json(config_path));
  if (diags.empty()) {
    std::cout << "ok\n";
    return kOk;
  }
  for (const auto& d : diags) std::cout << d.field << ": " << d.message << "\n";
  return kConfig;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-photon interference and time-reversed optics simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  bool raw = false;
  auto* sim = app.add_subcommand("simulate", "run an experiment config, write CSV and JSON summary");
  sim->add_option("--config", config_path, "JSON config (lengths in meters)")->required();
  sim->add_flag("--raw", raw, "keep unnormalized values");
  sim->add_option("--out", out_path, "CSV path; the summary goes next to it as .summary.json");

  std::size_t n = 0, trials = 0;
  std::uint64_t seed = 0;
  auto* aud = app.add_subcommand("audit", "random forward/reversed identity audit over N discrete modes");
  aud->add_option("--n", n, "number of modes")->required();
  aud->add_option("--trials", trials, "random instances")->required();
  aud->add_option("--seed", seed, "base seed")->required();

  auto* val = app.add_subcommand("validate", "list config problems");
  val->add_option("--config", config_path, "JSON config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  try {
    if (*sim) return simulate(config_path, raw, out_path);
    if (*aud) return audit(n, trials, seed);
    if (*val) return validate(config_path);
  } catch (const timerev::SamplingError& e) {
    std::cerr << "sampling error: " << e.what() << "\n";
    return kNumeric;
  } catch (const timerev::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumeric;
  } catch (const timerev::ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumeric;
  } catch (const timerev::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kOk;
}

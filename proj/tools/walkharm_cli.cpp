// walkharm command line: `analyze` runs a JSON config, `verify` runs a
// named check suite. Exit status: 0 pass, 1 computation failure or failed
// check, 2 invalid input.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "walkharm/errors.hpp"
#include "walkharm/report.hpp"

namespace {

using walkharm::Json;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kInvalid = 2;

void emit(const Json& report, const std::string& out_path) {
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << text;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw walkharm::ValidationError("config: cannot read '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw walkharm::ValidationError(std::string("config: malformed JSON: ") + e.what());
  }
}

int analyze(const std::string& path, const std::string& out, const std::string& csv, std::optional<double> tol,
            bool no_exact) {
  Json raw = read_json(path);
  if (raw.is_object() && (tol || no_exact)) {
    auto& opts = raw["options"];
    if (opts.is_null()) opts = Json::object();
    if (tol) opts["tol"] = *tol;
    if (no_exact) opts["exact"] = false;
  }
  const auto config = walkharm::parse_config(raw);
  const auto result = walkharm::run_analysis(config);
  emit(result.report, out);
  if (!csv.empty()) walkharm::write_csv(result, csv);

  const auto& results = result.report.at("results");
  if (results.contains("verify") && results.at("verify").at("pass") == false) {
    std::cerr << "verification failed: " << results.at("verify").at("failures").get<std::size_t>()
              << " check(s)\n";
    return kFailed;
  }
  return kOk;
}

int verify(const std::string& suite, std::uint64_t seed, const std::string& out) {
  const auto report = walkharm::run_suite(suite, seed);
  emit(walkharm::to_json(report, seed), out);
  if (!out.empty()) std::cout << report.summary();
  std::cerr << suite << ": " << report.records.size() << " checks, " << report.failures() << " failed\n";
  return report.pass() ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Harmonic and anti-harmonic functions of random walks on groups"};
  app.require_subcommand(1);

  std::string config_path, analyze_out, csv_dir;
  std::optional<double> tol;
  bool no_exact = false;
  auto* analyze_cmd = app.add_subcommand("analyze", "Run the tasks of a JSON analysis config");
  analyze_cmd->add_option("config", config_path, "Config JSON file")->required();
  analyze_cmd->add_option("--out", analyze_out, "Write the report here instead of stdout");
  analyze_cmd->add_option("--csv", csv_dir, "Directory for eigenvalues.csv and decay.csv");
  analyze_cmd->add_option("--tol", tol, "Override options.tol");
  analyze_cmd->add_flag("--no-exact", no_exact, "Use floating point even for rational weights");

  std::string suite, verify_out;
  std::uint64_t seed = 0;
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
  verify_cmd->add_option("suite", suite, "all, theorems, foguel, revuz, stirling or examples")->required();
  verify_cmd->add_option("--seed", seed, "Seed for the random fixtures");
  verify_cmd->add_option("--out", verify_out, "Write the JSON report here; the text summary goes to stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*analyze_cmd) return analyze(config_path, analyze_out, csv_dir, tol, no_exact);
    return verify(suite, seed, verify_out);
  } catch (const walkharm::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "computation failed: " << e.what() << "\n";
    return kFailed;
  }
}

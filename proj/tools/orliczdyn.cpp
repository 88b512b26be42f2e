// orliczdyn: command-line front end for the criteria, lab and probe commands.

#include "orliczdyn.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string csv;
  std::string vector;
  std::optional<std::uint64_t> seed;
  unsigned jobs = orliczdyn::default_jobs();
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "run configuration (JSON)")->required();
  sub->add_option("--out", f.out, "report path; defaults to the config's output field, else stdout");
  sub->add_option("--csv", f.csv, "write the series as CSV to this path");
  sub->add_option("--seed", f.seed, "seed for randomized probes (overrides the config)");
  sub->add_option("--jobs", f.jobs, std::string("worker threads (default from ") + orliczdyn::kJobsEnvVar + ")")
      ->check(CLI::PositiveNumber);
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw orliczdyn::Error("cannot write '" + path + "'");
  out << text;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamics of weighted translations on discrete-group Orlicz spaces"};
  app.set_version_flag("--version", orliczdyn::kToolVersion);
  app.require_subcommand(1);

  Flags flags;
  auto* check = app.add_subcommand("check", "run the obstruction scan and a property checker");
  auto* simulate = app.add_subcommand("simulate", "build witness or periodic vectors and measure them");
  auto* norm = app.add_subcommand("norm", "Luxemburg norm of a finitely supported vector");
  auto* probe = app.add_subcommand("probe-young", "Delta-2 probe and complementary-function table");
  for (auto* sub : {check, simulate, norm, probe}) add_common(sub, flags);
  norm->add_option("--vector", flags.vector, "vector file: [[element, value], ...]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : orliczdyn::kExitError;
  }

  try {
    const auto cfg = orliczdyn::load_config(flags.config);
    orliczdyn::CommandOptions opt;
    opt.jobs = flags.jobs;
    opt.seed = flags.seed;
    if (!flags.vector.empty()) opt.vector_path = flags.vector;

    orliczdyn::CommandResult res;
    if (check->parsed()) res = orliczdyn::cmd_check(cfg, opt);
    else if (simulate->parsed()) res = orliczdyn::cmd_simulate(cfg, opt);
    else if (norm->parsed()) res = orliczdyn::cmd_norm(cfg, opt);
    else res = orliczdyn::cmd_probe_young(cfg, opt);

    const std::string text = res.report.dump(2) + "\n";
    const std::string out_path = !flags.out.empty() ? flags.out : cfg.output;
    if (out_path.empty()) {
      std::cout << text;
    } else {
      write_file(out_path, text);
      std::cout << res.summary << "\n";
    }
    if (!flags.csv.empty()) write_file(flags.csv, res.csv);
    return res.exit_code;
  } catch (const orliczdyn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return orliczdyn::kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return orliczdyn::kExitError;
  }
}

// Command-line front end: parse a problem description, run the pipeline at
// a requested truncation, export matrices and verification reports.

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "config.hpp"
#include "moprl/errors.hpp"
#include "runner.hpp"

namespace {

struct CommonFlags {
  std::string backend;
  unsigned precision = 0;
  long N = 0;
  std::string out;
  double tol = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--backend", f.backend, "rational | float")
      ->check(CLI::IsMember({"rational", "float"}));
  cmd->add_option("--precision", f.precision, "float precision in bits");
  cmd->add_option("--N", f.N, "truncation size");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--tol", f.tol, "override every check tolerance");
}

void apply_common(moprl::cli::Config& cfg, const CommonFlags& f) {
  if (f.backend == "rational") cfg.backend = moprl::cli::Backend::Rational;
  if (f.backend == "float") cfg.backend = moprl::cli::Backend::Float;
  if (f.precision) cfg.precision_bits = f.precision;
  if (f.N) cfg.N = f.N;
  if (!f.out.empty()) cfg.out_dir = f.out;
  if (f.tol != 0) cfg.tol_global = f.tol;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixed-type multiple orthogonal polynomials via Gauss-Borel factorization"};
  app.require_subcommand(1);

  std::string run_config, describe_config, export_config;
  std::string export_what, export_format = "txt";
  int export_digits = -1;
  CommonFlags run_flags, describe_flags, export_flags;

  CLI::App* run_cmd = app.add_subcommand("run", "build the pipeline and verify the identities");
  run_cmd->add_option("config", run_config, "problem description file")->required();
  add_common(run_cmd, run_flags);

  CLI::App* describe_cmd =
      app.add_subcommand("describe", "print index combinatorics without computing moments");
  describe_cmd->add_option("config", describe_config, "problem description file")->required();
  add_common(describe_cmd, describe_flags);

  CLI::App* export_cmd = app.add_subcommand("export", "write one matrix to disk");
  export_cmd->add_option("config", export_config, "problem description file")->required();
  export_cmd->add_option("--what", export_what, "g | S | Sbar | J")
      ->required()
      ->check(CLI::IsMember({"g", "S", "Sbar", "J"}));
  export_cmd->add_option("--format", export_format, "csv | txt")
      ->check(CLI::IsMember({"csv", "txt"}));
  export_cmd->add_option("--digits", export_digits, "fixed decimal digits for csv");
  add_common(export_cmd, export_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      auto cfg = moprl::cli::parse_config_file(run_config);
      apply_common(cfg, run_flags);
      return moprl::cli::run(cfg, std::cout);
    }
    if (describe_cmd->parsed()) {
      auto cfg = moprl::cli::parse_config_file(describe_config);
      apply_common(cfg, describe_flags);
      return moprl::cli::describe(cfg, std::cout);
    }
    auto cfg = moprl::cli::parse_config_file(export_config);
    apply_common(cfg, export_flags);
    return moprl::cli::export_matrix(cfg, export_what, export_format, export_digits, std::cout);
  } catch (const moprl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

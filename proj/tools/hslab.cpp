// hslab: self-duality and variation experiments on planar model charts.
//
//   hslab <solve|decay|stokes|ray|bessel> --config <path> --out <dir> [--quiet]

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "hslab/cli.hpp"
#include "hslab/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Self-duality / complex-variation laboratory"};
  app.set_version_flag("--version", std::string(hslab::cli::kVersion));
  std::string subcommand, config_path, out_dir;
  bool quiet = false;
  app.add_option("subcommand", subcommand, "solve, decay, stokes, ray or bessel")
      ->required()
      ->check(CLI::IsMember({"solve", "decay", "stokes", "ray", "bessel"}));
  app.add_option("--config", config_path, "configuration file")->required();
  app.add_option("--out", out_dir, "output directory")->required();
  app.add_flag("--quiet", quiet, "suppress the report echo and diagnostics");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : hslab::cli::kConfig;
  }

  std::ifstream f(config_path);
  if (!f) {
    if (!quiet) std::cerr << "cannot read config " << config_path << "\n";
    return hslab::cli::kConfig;
  }
  std::stringstream buf;
  buf << f.rdbuf();
  hslab::cli::RunSpec spec;
  try {
    spec = hslab::cli::parse_config(buf.str());
  } catch (const hslab::Error& e) {
    if (!quiet) std::cerr << config_path << ": " << e.what() << "\n";
    return hslab::cli::kConfig;
  }
  return hslab::cli::run(subcommand, spec, out_dir, quiet);
}

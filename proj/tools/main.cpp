// invlag: decide, verify, and construct invariant Lagrangians for invariant
// second-order systems on Lie groups, working at the reduced Lie-algebra level.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "invlag/commands.hpp"

namespace {

struct GlobalArgs {
  std::string file;
  std::string json_out;
  invlag::CommandOptions opts;
};

void add_common(CLI::App* cmd, GlobalArgs& args) {
  cmd->add_option("file", args.file, "problem file")->required();
  cmd->add_option("--json", args.json_out, "write the JSON report to this path");
}

int finish(const invlag::CommandResult& res, const GlobalArgs& args) {
  std::string text = res.report.dump(2);
  if (!args.json_out.empty()) {
    std::ofstream out(args.json_out);
    out << text << "\n";
  }
  std::cout << text << "\n";
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invariant-Lagrangian toolkit for reduced second-order systems on Lie groups"};
  app.require_subcommand(1);

  GlobalArgs args;
  std::uint64_t seed = 7;
  int samples = 64;
  double tol = 1e-9;
  auto* seed_opt = app.add_option("--seed", seed, "sampling seed (default 7)");
  auto* samples_opt = app.add_option("--samples", samples, "sample count (default 64)");
  app.add_option("--tol", tol, "relative tolerance for identity tests (default 1e-9)");

  auto* validate = app.add_subcommand("validate", "check structure constants");
  add_common(validate, args);

  auto* cohomology = app.add_subcommand("cohomology", "print (dim H^1, dim H^2)");
  add_common(cohomology, args);

  auto* helmholtz = app.add_subcommand("helmholtz", "reduced Helmholtz conditions");
  add_common(helmholtz, args);
  std::string ansatz = "given";
  helmholtz->add_option("--ansatz", ansatz, "given | constant | poly:D (default given)");

  auto* obstruct = app.add_subcommand("obstruct", "cohomological obstruction pipeline");
  add_common(obstruct, args);
  std::string obstruct_ansatz = "given";
  obstruct->add_option("--ansatz", obstruct_ansatz,
                       "given | constant | poly:D (default given)");

  auto* integrate = app.add_subcommand("integrate", "integrate the reduced dynamics");
  add_common(integrate, args);
  bool with_reconstruction = false;
  std::string csv_out;
  integrate->add_flag("--reconstruct", with_reconstruction,
                      "also integrate g^-1 g' = w(t) in the matrix representation");
  integrate->add_option("--csv", csv_out, "write the trajectory CSV to this path");

  CLI11_PARSE(app, argc, argv);

  args.opts.seed = seed;
  args.opts.samples = samples;
  args.opts.tol = tol;
  args.opts.seed_overrides_file = seed_opt->count() > 0;
  args.opts.samples_overrides_file = samples_opt->count() > 0;

  std::string command = app.get_subcommands().front()->get_name();
  if (command == "obstruct") ansatz = obstruct_ansatz;
  invlag::CommandResult res =
      invlag::run_command(command, args.file, args.opts, ansatz, with_reconstruction);
  if (command == "integrate" && !csv_out.empty() && !res.csv.empty()) {
    std::ofstream out(csv_out);
    out << res.csv;
  }
  return finish(res, args);
}

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "wittdiff/jobspec.hpp"

int main(int argc, char** argv) {
  CLI::App app{"wittdiff: exact arithmetic for schemes over length-2 Witt vectors --\n"
               "total p-differentials, Frobenius-lift search, and Cech classes"};

  std::string input_path;
  std::string command;
  std::string json_path;
  wittdiff::JobOptions opts;

  app.add_option("--input", input_path, "path to the scheme description (JSON)");
  app.add_option("--command", command,
                 "one of: omega | lift | kappa | di | compare | gm | axioms")
      ->required();
  app.add_option("--degree-bound", opts.degree_bound, "splitting search degree bound");
  app.add_option("--window", opts.window, "Cech truncation window");
  app.add_option("--json", json_path, "write the machine-readable report to this path");
  app.add_option("--seed", opts.seed, "seed for the randomized property suites");

  CLI11_PARSE(app, argc, argv);

  if (command != "axioms" && input_path.empty()) {
    std::cerr << "error: --input is required for command '" << command << "'\n";
    return 1;
  }

  wittdiff::Report rep = wittdiff::run_job_file(input_path, command, opts);
  std::cout << rep.text;
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    if (!out) {
      std::cerr << "error: cannot write " << json_path << "\n";
      return 1;
    }
    out << rep.machine.dump(2) << "\n";
  }
  return rep.exit_code;
}

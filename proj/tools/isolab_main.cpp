#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "isolab/run.hpp"

namespace {

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("failed writing output file '" + path + "'");
}

void add_common(CLI::App* cmd, isolab::RunConfig& cfg) {
  cmd->add_option("--group", cfg.group, "group spec: F<k> | Z[^d] | Zmod<m>[^d] | (A) x (B)");
  cmd->add_option("--gens", cfg.gens, "generating words, comma separated (uppercase = inverse)");
  cmd->add_option("--out", cfg.out, "output path ('-' = stdout)");
  cmd->add_option("--seed", cfg.seed, "rng seed");
  cmd->add_option("--jobs", cfg.jobs, "worker threads where a module supports them");
  cmd->add_flag("--assert", cfg.assert_upgrade, "promote informational checks to asserted");
  cmd->add_flag("--timestamp", cfg.with_timestamp, "include a wall-clock timestamp in the report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"isolab: isoperimetric constants, spanning forests and finite relation models"};
  app.require_subcommand(1);

  isolab::RunConfig cfg;

  CLI::App* ball = app.add_subcommand("ball", "construct and serialize a Cayley ball");
  add_common(ball, cfg);
  ball->add_option("--radius", cfg.radius, "ball radius");

  CLI::App* cheeger = app.add_subcommand("cheeger", "exact minimum boundary ratio in a ball");
  add_common(cheeger, cfg);
  cheeger->add_option("--radius", cfg.radius, "ball radius");
  cheeger->add_option("--max-size", cfg.max_size, "largest subset size searched");
  bool exact = false;
  cheeger->add_flag("--exact", exact, "exact rational search (the only engine; accepted for scripts)");

  CLI::App* profile = app.add_subcommand("profile", "boundary ratios of the balls B(1..r)");
  add_common(profile, cfg);
  profile->add_option("--radius", cfg.radius, "largest profiled radius");
  std::string csv_path;
  profile->add_option("--csv", csv_path, "write CSV to this path");

  CLI::App* forest = app.add_subcommand("forest", "uniform spanning forest degree statistics");
  add_common(forest, cfg);
  forest->add_option("--radius", cfg.radius, "ball radius");
  forest->add_option("--mode", cfg.mode, "free | wired");
  forest->add_option("--samples", cfg.samples, "number of forest samples");

  CLI::App* betti = app.add_subcommand("betti", "harmonic center-trace sweep");
  add_common(betti, cfg);
  betti->add_option("--radius", cfg.radius, "single radius (if no sweep)");
  betti->add_option("--sweep", cfg.sweep, "radius range lo:hi");
  double target_value = 0;
  CLI::Option* target_opt = betti->add_option("--target", target_value, "trace convergence target");
  betti->add_option("--target-tol", cfg.target_tol, "tolerance for --target");

  CLI::App* relsim = app.add_subcommand("relsim", "finite models of measured equivalence relations");
  relsim->require_subcommand(1);

  CLI::App* hzero = relsim->add_subcommand("hzero", "cost-(1+eps) graphing with vanishing witness ratio");
  add_common(hzero, cfg);
  hzero->add_option("--N", cfg.N, "number of atoms");
  hzero->add_option("--n", cfg.n, "witness segment length");
  hzero->add_option("--eps", cfg.eps, "extra cost, decimal or fraction");

  CLI::App* main_check = relsim->add_subcommand("main-check", "treeing cost vs witness ratio");
  add_common(main_check, cfg);
  main_check->add_option("--N", cfg.N, "number of atoms");
  main_check->add_option("--n", cfg.n, "cycle witness powers (cycle scenario)");
  main_check->add_option("--scenario", cfg.scenario, "random | cycle");
  main_check->add_option("--trials", cfg.trials, "number of random trials");

  CLI::App* compress = relsim->add_subcommand("compress", "witness transfer to a super-relation");
  add_common(compress, cfg);
  compress->add_option("--N", cfg.N, "number of atoms in X");
  compress->add_option("--y", cfg.y_size, "size of Y (default N/2)");
  compress->add_option("--n", cfg.n, "parts of X minus Y");
  compress->add_option("--k", cfg.k, "witness count (default 5)");
  compress->add_option("--delta", cfg.delta, "part measure (default (N-y)/(nN))");

  CLI11_PARSE(app, argc, argv);

  try {
    for (CLI::App* sub : app.get_subcommands()) {
      cfg.command = sub->get_name();
      if (cfg.command == "relsim") cfg.subcommand = sub->get_subcommands().at(0)->get_name();
    }
    if (cfg.command == "betti" && target_opt->count() > 0) cfg.target = target_value;
    if (cfg.command == "profile" && !csv_path.empty()) {
      cfg.format = "csv";
      cfg.out = csv_path;
    }

    isolab::Report report = isolab::run(cfg);
    write_output(isolab::emit(report, cfg), cfg.out);
    if (!report.all_asserted_passed()) {
      std::cerr << "isolab: asserted check failed" << std::endl;
      return 1;
    }
    return 0;
  } catch (const std::exception& ex) {
    std::cerr << "isolab: " << ex.what() << std::endl;
    return 2;
  }
}

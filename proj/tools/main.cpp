#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cli.hpp"

namespace {

void add_data_options(CLI::App& cmd, dcor::cli::RunConfig& cfg) {
  cmd.add_option("-i,--input", cfg.input, "CSV file")->required();
  cmd.add_option("-x,--x", cfg.x_cols, "X columns: indices, a..b ranges or names")->required();
  cmd.add_option("-y,--y", cfg.y_cols, "Y columns: indices, a..b ranges or names")->required();
}

void add_format_option(CLI::App& cmd, dcor::cli::RunConfig& cfg) {
  cmd.add_option("--format", cfg.format, "Output format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, dcor::cli::OutputFormat>{{"tsv", dcor::cli::OutputFormat::tsv},
                                                         {"json", dcor::cli::OutputFormat::json}},
          CLI::ignore_case));
  cmd.add_option("-o,--output", cfg.output, "Write the report to a file");
}

void add_study_options(CLI::App& cmd, dcor::cli::RunConfig& cfg) {
  cmd.add_option("--preset", cfg.preset, "Experiment preset, e.g. table1a or example1a-n50")
      ->required();
  cmd.add_option("--n", cfg.n_grid, "Sample sizes (overrides the preset grid)")->delimiter(',');
  cmd.add_option("--num-tests", cfg.num_tests, "Datasets per sample size (default 2000)");
  cmd.add_flag("--full-scale", cfg.full_scale, "Use 10000 datasets per sample size");
  cmd.add_option("--tests", cfg.tests, "Comma list of V, VA, W, T, S");
  cmd.add_option("--alpha", cfg.alpha, "Significance level");
  cmd.add_option("--replicates", cfg.replicates, "Permutation replicates");
  cmd.add_option("--seed", cfg.seed, "Master seed (default $DCOR_SEED or 2007)");
  cmd.add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
  cmd.add_option("--layout", cfg.layout, "Table layout")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, dcor::cli::TableLayout>{
              {"wide", dcor::cli::TableLayout::wide}, {"long", dcor::cli::TableLayout::long_form}},
          CLI::ignore_case));
  cmd.add_option("--t-divisor", cfg.t_divisor, "t construction for mvt_cross")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, dcor::TDivisor>{{"per-coordinate", dcor::TDivisor::per_coordinate},
                                                {"shared", dcor::TDivisor::shared}},
          CLI::ignore_case));
  add_format_option(cmd, cfg);
}

}  // namespace

int main(int argc, char** argv) {
  dcor::cli::RunConfig cfg;
  cfg.seed = dcor::cli::default_seed();

  CLI::App app{"Distance covariance, distance correlation and independence tests"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dcor 0.1.0");

  auto* stat = app.add_subcommand("stat", "Sample distance covariance and correlation");
  add_data_options(*stat, cfg);
  stat->add_option("--alpha-exponent", cfg.alpha_exponent, "Distance exponent in (0, 2]");
  stat->add_flag("--affine", cfg.affine, "Affine invariant version (whitened samples)");
  add_format_option(*stat, cfg);

  auto* test = app.add_subcommand("test", "Test independence of X and Y");
  add_data_options(*test, cfg);
  test->add_option("--method", cfg.method,
                   "dcov-perm, dcov-asymptotic, wilks, spearman or sign");
  test->add_option("--alpha", cfg.alpha, "Significance level");
  test->add_option("--replicates", cfg.replicates, "Permutation replicates");
  test->add_option("--seed", cfg.seed, "Seed (default $DCOR_SEED or 2007)");
  test->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
  test->add_flag("--exit-on-reject", cfg.exit_on_reject, "Exit with status 2 on rejection");
  add_format_option(*test, cfg);

  auto* type1 = app.add_subcommand("type1", "Empirical Type I error study");
  add_study_options(*type1, cfg);
  auto* power = app.add_subcommand("power", "Empirical power study");
  add_study_options(*power, cfg);

  auto* curve = app.add_subcommand("normal-curve", "Bivariate normal R^2 against rho");
  curve->add_option("--rho", cfg.rho_grid, "Explicit rho values")->delimiter(',');
  curve->add_option("--step", cfg.rho_step, "Grid step on [0, 1]");
  add_format_option(*curve, cfg);

  auto* gen = app.add_subcommand("generate", "Write a simulated sample pair as CSV");
  gen->add_option("--alternative", cfg.alternative,
                  "mvn_cross, mvt_cross, mult_noise or log_square");
  gen->add_option("--n", cfg.n, "Sample size");
  gen->add_option("--p", cfg.p, "Dimension of X");
  gen->add_option("--q", cfg.q, "Dimension of Y");
  gen->add_option("--rho", cfg.rho, "Cross correlation");
  gen->add_option("--df", cfg.df, "t degrees of freedom");
  gen->add_option("--seed", cfg.seed, "Seed (default $DCOR_SEED or 2007)");
  gen->add_option("--t-divisor", cfg.t_divisor, "t construction for mvt_cross")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, dcor::TDivisor>{{"per-coordinate", dcor::TDivisor::per_coordinate},
                                                {"shared", dcor::TDivisor::shared}},
          CLI::ignore_case));
  gen->add_option("-o,--output", cfg.output, "Write the CSV to a file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  return dcor::cli::run(cfg, std::cout, std::cerr);
}

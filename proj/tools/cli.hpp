#pragma once

// Command implementations behind the `dcor` executable. Each command writes
// its report to `out`, diagnostics to `err`, and returns the process exit
// code: 0 success, 1 error, 2 rejection when exit_on_reject is set.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dcor/distance.hpp"
#include "dcor/simulation.hpp"

namespace dcor::cli {

enum class OutputFormat { tsv, json };
enum class TableLayout { wide, long_form };

struct RunConfig {
  std::string subcommand;
  std::string input;
  std::string x_cols;
  std::string y_cols;
  double alpha = 0.1;
  std::string method = "dcov-perm";
  std::optional<std::size_t> replicates;
  double alpha_exponent = 1.0;
  bool affine = false;
  std::uint64_t seed = 2007;
  OutputFormat format = OutputFormat::tsv;
  std::string output;  // empty: stdout
  bool exit_on_reject = false;

  // Study commands.
  std::string preset;
  std::vector<std::size_t> n_grid;  // empty: preset grid
  std::optional<std::size_t> num_tests;
  bool full_scale = false;
  std::string tests;  // comma list; empty: preset tests
  TableLayout layout = TableLayout::wide;
  unsigned workers = 1;
  std::optional<TDivisor> t_divisor;

  // normal-curve.
  std::vector<double> rho_grid;
  double rho_step = 0.05;

  // generate.
  std::string alternative = "mult_noise";
  std::size_t n = 100;
  std::size_t p = 5;
  std::size_t q = 5;
  double rho = 0.0;
  double df = 1.0;
};

// Default seed: $DCOR_SEED when set and numeric, otherwise 2007.
std::uint64_t default_seed();

struct IngestResult {
  SampleMatrix x;
  SampleMatrix y;
  std::size_t dropped_rows = 0;
  bool has_header = false;
  std::vector<std::string> x_names;
  std::vector<std::string> y_names;
};

// Column selectors are comma lists of half-open index ranges "a..b", single
// indices, or header names. Rows with a missing value (empty, NA, NaN, ".")
// in a selected column are dropped. The header is detected when the first
// row has a non-numeric entry in a selected column.
IngestResult ingest_csv(const std::string& path, const std::string& x_cols,
                        const std::string& y_cols);
IngestResult ingest_csv(std::istream& in, const std::string& x_cols, const std::string& y_cols);

// CSV with header x1..xp, y1..yq and round-trip precision.
void write_csv(std::ostream& out, const SampleMatrix& x, const SampleMatrix& y);

// Maps "V", "VA", "W", "T", "S" or full method names to a test.
std::optional<TestMethod> parse_test_name(const std::string& name);
std::string test_label(TestMethod method);

int cmd_stat(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_test(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_type1(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_power(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_normal_curve(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_generate(const RunConfig& config, std::ostream& out, std::ostream& err);

// Dispatches on config.subcommand, honoring config.output.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace dcor::cli

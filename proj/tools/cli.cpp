#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dcor/classical.hpp"
#include "dcor/dcov.hpp"
#include "dcor/errors.hpp"
#include "dcor/inference.hpp"
#include "dcor/normal_theory.hpp"
#include "dcor/rng.hpp"

namespace dcor::cli {

using nlohmann::json;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("DCOR_SEED")) {
    std::uint64_t value = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec == std::errc() && ptr == end && ptr != env) return value;
  }
  return 2007;
}

// ---- CSV ingestion -------------------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(field));
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(trim(field));
  return fields;
}

bool is_missing(const std::string& cell) {
  return cell.empty() || cell == "NA" || cell == "NaN" || cell == "nan" || cell == "." ||
         cell == "N/A";
}

std::optional<double> parse_number(const std::string& cell) {
  std::string_view s = cell;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

struct SelectorToken {
  std::optional<std::size_t> index;
  std::string name;
};

// Expands "0..2,5,name" into tokens; ranges are half-open.
std::vector<SelectorToken> parse_selector(const std::string& spec, const char* which) {
  std::vector<SelectorToken> tokens;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto dots = item.find("..");
    std::size_t lo = 0;
    std::size_t hi = 0;
    if (dots != std::string::npos) {
      const std::string a = item.substr(0, dots);
      const std::string b = item.substr(dots + 2);
      const auto ra = std::from_chars(a.data(), a.data() + a.size(), lo);
      const auto rb = std::from_chars(b.data(), b.data() + b.size(), hi);
      if (ra.ec != std::errc() || rb.ec != std::errc() || ra.ptr != a.data() + a.size() ||
          rb.ptr != b.data() + b.size() || a.empty() || b.empty() || hi <= lo) {
        throw ConfigError(std::string(which) + " column range '" + item +
                          "' must look like a..b with a < b");
      }
      for (std::size_t i = lo; i < hi; ++i) tokens.push_back({i, {}});
      continue;
    }
    const auto r = std::from_chars(item.data(), item.data() + item.size(), lo);
    if (r.ec == std::errc() && r.ptr == item.data() + item.size()) {
      tokens.push_back({lo, {}});
    } else {
      tokens.push_back({std::nullopt, item});
    }
  }
  if (tokens.empty()) throw ConfigError(std::string(which) + " column selection is empty");
  return tokens;
}

std::vector<std::size_t> resolve(const std::vector<SelectorToken>& tokens,
                                 const std::vector<std::string>& header, bool has_header,
                                 const char* which) {
  std::vector<std::size_t> out;
  for (const auto& t : tokens) {
    if (t.index) {
      out.push_back(*t.index);
      continue;
    }
    if (!has_header) {
      throw ConfigError(std::string(which) + " column '" + t.name +
                        "' selected by name but the file has no header row");
    }
    const auto it = std::find(header.begin(), header.end(), t.name);
    if (it == header.end()) {
      throw ConfigError(std::string(which) + " column '" + t.name + "' not found in header");
    }
    out.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  return out;
}

}  // namespace

IngestResult ingest_csv(std::istream& in, const std::string& x_cols, const std::string& y_cols) {
  const auto x_tokens = parse_selector(x_cols, "x");
  const auto y_tokens = parse_selector(y_cols, "y");

  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      line.erase(0, 3);
    }
    if (trim(line).empty()) continue;
    rows.push_back(split_csv_line(line));
    line_numbers.push_back(line_no);
  }
  if (rows.empty()) throw InputError("input has no rows");

  const bool named = std::any_of(x_tokens.begin(), x_tokens.end(),
                                 [](const auto& t) { return !t.index; }) ||
                     std::any_of(y_tokens.begin(), y_tokens.end(),
                                 [](const auto& t) { return !t.index; });
  bool has_header = named;
  if (!has_header) {
    for (const auto* tokens : {&x_tokens, &y_tokens}) {
      for (const auto& t : *tokens) {
        if (*t.index < rows[0].size()) {
          const std::string& cell = rows[0][*t.index];
          if (!is_missing(cell) && !parse_number(cell)) has_header = true;
        }
      }
    }
  }
  const std::vector<std::string> header = has_header ? rows[0] : std::vector<std::string>{};
  const auto xi = resolve(x_tokens, header, has_header, "x");
  const auto yi = resolve(y_tokens, header, has_header, "y");

  std::set<std::size_t> xs(xi.begin(), xi.end());
  for (std::size_t c : yi) {
    if (xs.count(c)) {
      throw ConfigError("x and y column selections overlap at column " + std::to_string(c));
    }
  }

  auto column_label = [&](std::size_t c) {
    std::ostringstream s;
    s << "column " << c;
    if (has_header && c < header.size()) s << " ('" << header[c] << "')";
    return s.str();
  };

  std::vector<double> xv;
  std::vector<double> yv;
  std::size_t kept = 0;
  std::size_t dropped = 0;
  for (std::size_t r = has_header ? 1 : 0; r < rows.size(); ++r) {
    const auto& row = rows[r];
    std::vector<double> xr;
    std::vector<double> yr;
    bool missing = false;
    auto read = [&](const std::vector<std::size_t>& cols, std::vector<double>& dst) {
      for (std::size_t c : cols) {
        if (c >= row.size()) {
          std::ostringstream msg;
          msg << "line " << line_numbers[r] << ": " << column_label(c)
              << " is beyond the end of the row (" << row.size() << " fields)";
          throw InputError(msg.str());
        }
        const std::string& cell = row[c];
        if (is_missing(cell)) {
          missing = true;
          continue;
        }
        const auto v = parse_number(cell);
        if (!v) {
          std::ostringstream msg;
          msg << "line " << line_numbers[r] << ", " << column_label(c) << ": cannot parse '"
              << cell << "' as a number";
          throw InputError(msg.str());
        }
        dst.push_back(*v);
      }
    };
    read(xi, xr);
    read(yi, yr);
    if (missing) {
      ++dropped;
      continue;
    }
    xv.insert(xv.end(), xr.begin(), xr.end());
    yv.insert(yv.end(), yr.begin(), yr.end());
    ++kept;
  }
  if (kept == 0) throw InputError("no complete rows remain after dropping missing values");

  IngestResult result{SampleMatrix(kept, xi.size(), std::move(xv)),
                      SampleMatrix(kept, yi.size(), std::move(yv)),
                      dropped,
                      has_header,
                      {},
                      {}};
  for (std::size_t c : xi) result.x_names.push_back(has_header ? header[c] : std::to_string(c));
  for (std::size_t c : yi) result.y_names.push_back(has_header ? header[c] : std::to_string(c));
  return result;
}

IngestResult ingest_csv(const std::string& path, const std::string& x_cols,
                        const std::string& y_cols) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  return ingest_csv(in, x_cols, y_cols);
}

void write_csv(std::ostream& out, const SampleMatrix& x, const SampleMatrix& y) {
  if (x.n() != y.n()) throw InputError("write_csv: samples have different sizes");
  for (std::size_t j = 0; j < x.d(); ++j) out << (j ? "," : "") << "x" << j + 1;
  for (std::size_t j = 0; j < y.d(); ++j) out << ",y" << j + 1;
  out << '\n';
  const auto old = out.precision(std::numeric_limits<double>::max_digits10);
  for (std::size_t k = 0; k < x.n(); ++k) {
    for (std::size_t j = 0; j < x.d(); ++j) out << (j ? "," : "") << x(k, j);
    for (std::size_t j = 0; j < y.d(); ++j) out << ',' << y(k, j);
    out << '\n';
  }
  out.precision(old);
}

// ---- shared output helpers ---------------------------------------------------------

namespace {

// Ordered key/value echo of the configuration.
using Echo = std::vector<std::pair<std::string, json>>;

std::string format_number(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

std::string cell_text(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_number()) return v.dump();
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// 10 significant digits in JSON output as well.
json rounded(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::stod(format_number(v));
}

void write_table(std::ostream& out, OutputFormat format, const Echo& echo,
                 const std::vector<std::string>& columns, const std::vector<std::vector<json>>& rows,
                 const char* rows_key = "rows") {
  if (format == OutputFormat::json) {
    json doc;
    json cfg = json::object();
    for (const auto& [k, v] : echo) cfg[k] = v;
    doc["config"] = cfg;
    json arr = json::array();
    for (const auto& row : rows) {
      json obj = json::object();
      for (std::size_t c = 0; c < columns.size(); ++c) obj[columns[c]] = row[c];
      arr.push_back(obj);
    }
    doc[rows_key] = arr;
    out << doc.dump(2) << '\n';
    return;
  }
  for (const auto& [k, v] : echo) out << "# " << k << '=' << cell_text(v) << '\n';
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "\t" : "") << columns[c];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "\t" : "") << cell_text(row[c]);
    out << '\n';
  }
}

void validate_common(const RunConfig& config) {
  if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
    std::ostringstream msg;
    msg << "alpha must lie in (0, 1), got " << config.alpha;
    throw ConfigError(msg.str());
  }
  if (!(config.alpha_exponent > 0.0 && config.alpha_exponent <= 2.0)) {
    std::ostringstream msg;
    msg << "alpha-exponent must lie in (0, 2], got " << config.alpha_exponent;
    throw ConfigError(msg.str());
  }
  if (config.replicates && *config.replicates < 1) {
    throw ConfigError("replicates must be >= 1");
  }
}

IngestResult load(const RunConfig& config, std::ostream& err) {
  if (config.input.empty()) throw ConfigError("--input is required");
  if (config.x_cols.empty() || config.y_cols.empty()) {
    throw ConfigError("--x and --y column selections are required");
  }
  IngestResult data = ingest_csv(config.input, config.x_cols, config.y_cols);
  if (data.dropped_rows > 0) {
    err << "warning: dropped " << data.dropped_rows << " row(s) with missing values\n";
  }
  return data;
}

Echo data_echo(const RunConfig& config, const IngestResult& data) {
  return {{"command", config.subcommand},
          {"input", config.input},
          {"x_cols", config.x_cols},
          {"y_cols", config.y_cols},
          {"n", data.x.n()},
          {"p", data.x.d()},
          {"q", data.y.d()},
          {"dropped_rows", data.dropped_rows}};
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

std::optional<TestMethod> parse_test_name(const std::string& name) {
  if (name == "V" || name == "dcov-perm" || name == "dcov_perm") return TestMethod::permutation;
  if (name == "VA" || name == "dcov-asymptotic" || name == "dcov_asymptotic") {
    return TestMethod::asymptotic;
  }
  if (name == "W" || name == "wilks") return TestMethod::wilks;
  if (name == "T" || name == "sign") return TestMethod::sign;
  if (name == "S" || name == "spearman") return TestMethod::spearman;
  return std::nullopt;
}

std::string test_label(TestMethod method) {
  switch (method) {
    case TestMethod::permutation: return "V";
    case TestMethod::asymptotic: return "VA";
    case TestMethod::wilks: return "W";
    case TestMethod::sign: return "T";
    case TestMethod::spearman: return "S";
  }
  return "?";
}

// ---- commands --------------------------------------------------------------------

int cmd_stat(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate_common(config);
    const IngestResult data = load(config, err);
    if (config.affine && config.alpha_exponent != 1.0) {
      throw ConfigError("--affine uses exponent 1; drop --alpha-exponent");
    }
    const DcovResult r = config.affine ? affine_dcor(data.x, data.y)
                                       : dcov_stats(data.x, data.y, config.alpha_exponent);
    Echo echo = data_echo(config, data);
    echo.emplace_back("alpha_exponent", config.alpha_exponent);
    echo.emplace_back("affine", config.affine);
    const std::vector<std::string> columns{"n", "alpha_exponent", "v2_xy", "v2_x", "v2_y",
                                           "r2",  "dcor",           "s1",    "s2",   "s3"};
    write_table(out, config.format, echo, columns,
                {{r.n, rounded(r.alpha), rounded(r.v2_xy), rounded(r.v2_x), rounded(r.v2_y),
                  rounded(r.r2), rounded(r.dcor()), rounded(r.s1), rounded(r.s2),
                  rounded(r.s3)}});
    return 0;
  });
}

int cmd_test(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate_common(config);
    const auto method = parse_test_name(config.method);
    if (!method) throw ConfigError("unknown test method '" + config.method + "'");
    const IngestResult data = load(config, err);

    TestResult result;
    switch (*method) {
      case TestMethod::permutation: {
        PermutationOptions opt;
        opt.alpha = config.alpha;
        opt.replicates = config.replicates;
        opt.seed = config.seed;
        opt.workers = config.workers;
        result = permutation_test(data.x, data.y, opt);
        break;
      }
      case TestMethod::asymptotic:
        result = asymptotic_test(data.x, data.y, config.alpha);
        break;
      default:
        result = classical_test(*method, data.x, data.y, config.alpha);
        break;
    }
    const DcovResult stats = dcov_stats(data.x, data.y, 1.0);

    Echo echo = data_echo(config, data);
    echo.emplace_back("method", std::string(to_string(*method)));
    echo.emplace_back("alpha", config.alpha);
    echo.emplace_back("seed", config.seed);
    if (config.replicates) echo.emplace_back("replicates", *config.replicates);

    const std::vector<std::string> columns{"method",    "statistic", "p_value", "threshold",
                                           "reject",    "r2",        "n",       "replicates",
                                           "seed"};
    const std::vector<json> row{
        std::string(to_string(result.method)),
        rounded(result.statistic),
        result.p_value ? rounded(*result.p_value) : json(nullptr),
        result.threshold ? rounded(*result.threshold) : json(nullptr),
        result.reject,
        rounded(stats.r2),
        data.x.n(),
        result.replicates ? json(result.replicates) : json(nullptr),
        result.seed ? json(*result.seed) : json(nullptr)};

    if (config.format == OutputFormat::json) {
      json doc = json::object();
      json cfg = json::object();
      for (const auto& [k, v] : echo) cfg[k] = v;
      doc["config"] = cfg;
      for (std::size_t c = 0; c < columns.size(); ++c) doc[columns[c]] = row[c];
      out << doc.dump(2) << '\n';
    } else {
      write_table(out, config.format, echo, columns, {row});
    }
    return result.reject && config.exit_on_reject ? 2 : 0;
  });
}

namespace {

int run_study_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate_common(config);
    if (config.preset.empty()) throw ConfigError("--preset is required");
    const auto preset = find_preset(config.preset);
    if (!preset) throw ConfigError("unknown preset '" + config.preset + "'");

    StudyConfig study;
    study.alternative = preset->alternative;
    if (config.t_divisor) study.alternative.divisor = *config.t_divisor;
    study.n_grid = config.n_grid.empty() ? preset->n_grid : config.n_grid;
    study.tests = preset->tests;
    if (!config.tests.empty()) {
      study.tests.clear();
      std::stringstream ss(config.tests);
      std::string item;
      while (std::getline(ss, item, ',')) {
        const auto m = parse_test_name(trim(item));
        if (!m) throw ConfigError("unknown test '" + item + "'");
        study.tests.push_back(*m);
      }
    }
    study.alpha = config.alpha;
    study.num_tests = config.num_tests.value_or(config.full_scale ? 10000 : 2000);
    study.seed = config.seed;
    study.replicates = config.replicates;
    study.workers = config.workers;

    const PowerStudyReport report = run_study(study);

    std::string grid;
    for (std::size_t i = 0; i < study.n_grid.size(); ++i) {
      grid += (i ? "," : "") + std::to_string(study.n_grid[i]);
    }
    std::string tests;
    for (std::size_t i = 0; i < study.tests.size(); ++i) {
      tests += (i ? "," : "") + test_label(study.tests[i]);
    }
    Echo echo{{"command", config.subcommand},
              {"preset", preset->name},
              {"description", preset->description},
              {"alternative", std::string(to_string(study.alternative.kind))},
              {"p", study.alternative.p},
              {"q", study.alternative.q},
              {"rho", study.alternative.rho},
              {"df", study.alternative.df},
              {"t_divisor", study.alternative.divisor == TDivisor::shared ? "shared"
                                                                          : "per-coordinate"},
              {"n_grid", grid},
              {"tests", tests},
              {"alpha", study.alpha},
              {"num_tests", study.num_tests},
              {"seed", study.seed}};
    if (study.replicates) echo.emplace_back("replicates", *study.replicates);

    std::vector<std::vector<json>> rows;
    std::vector<std::string> columns;
    if (config.layout == TableLayout::long_form) {
      columns = {"n", "test", "rejection_rate", "mc_std_error", "num_tests", "replicates"};
      for (const auto& r : report.rows) {
        rows.push_back({r.n, test_label(r.test), rounded(r.rejection_rate),
                        rounded(r.mc_std_error), r.num_tests,
                        r.replicates ? json(r.replicates) : json(nullptr)});
      }
    } else {
      columns = {"n", "B"};
      for (auto t : study.tests) {
        columns.push_back(test_label(t));
        columns.push_back(test_label(t) + "_se");
      }
      for (std::size_t n : study.n_grid) {
        std::vector<json> row{n, study.replicates.value_or(auto_replicates(n))};
        for (auto t : study.tests) {
          const auto& r = report.row(n, t);
          row.push_back(rounded(r.rejection_rate));
          row.push_back(rounded(r.mc_std_error));
        }
        rows.push_back(std::move(row));
      }
    }
    write_table(out, config.format, echo, columns, rows);
    return 0;
  });
}

}  // namespace

int cmd_type1(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return run_study_command(config, out, err);
}

int cmd_power(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return run_study_command(config, out, err);
}

int cmd_normal_curve(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<double> grid = config.rho_grid;
    if (grid.empty()) {
      if (!(config.rho_step > 0.0 && config.rho_step <= 1.0)) {
        throw ConfigError("--step must lie in (0, 1]");
      }
      const auto steps = static_cast<std::size_t>(std::llround(1.0 / config.rho_step));
      for (std::size_t i = 0; i <= steps; ++i) {
        grid.push_back(std::min(1.0, static_cast<double>(i) * config.rho_step));
      }
      if (grid.back() < 1.0) grid.push_back(1.0);
    }
    Echo echo{{"command", config.subcommand}, {"points", grid.size()}};
    std::vector<std::vector<json>> rows;
    for (double rho : grid) {
      const NormalCurvePoint pt = normal_curve_point(rho);
      rows.push_back({rounded(rho), rounded(rho * rho), rounded(pt.r2), rounded(pt.v2)});
    }
    write_table(out, config.format, echo, {"rho", "rho2", "r2", "v2"}, rows);
    return 0;
  });
}

int cmd_generate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto kind = parse_alternative_kind(config.alternative);
    if (!kind) throw ConfigError("unknown alternative '" + config.alternative + "'");
    AlternativeSpec spec;
    spec.kind = *kind;
    spec.p = config.p;
    spec.q = (*kind == AlternativeKind::mult_noise || *kind == AlternativeKind::log_square)
                 ? config.p
                 : config.q;
    spec.rho = config.rho;
    spec.df = config.df;
    if (config.t_divisor) spec.divisor = *config.t_divisor;
    Rng rng = rng_stream(config.seed, std::uint64_t{0});
    const SamplePair data = gen_alternative(spec, config.n, rng);
    write_csv(out, data.x, data.y);
    return 0;
  });
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  std::ofstream file;
  std::ostream* target = &out;
  if (!config.output.empty()) {
    file.open(config.output);
    if (!file) {
      err << "error: cannot open output file '" << config.output << "'\n";
      return 1;
    }
    target = &file;
  }
  const std::string& cmd = config.subcommand;
  if (cmd == "stat") return cmd_stat(config, *target, err);
  if (cmd == "test") return cmd_test(config, *target, err);
  if (cmd == "type1") return cmd_type1(config, *target, err);
  if (cmd == "power") return cmd_power(config, *target, err);
  if (cmd == "normal-curve") return cmd_normal_curve(config, *target, err);
  if (cmd == "generate") return cmd_generate(config, *target, err);
  err << "error: unknown subcommand '" << cmd << "'\n";
  return 1;
}

}  // namespace dcor::cli

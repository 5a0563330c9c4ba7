#include "opmean/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "opmean/errors.hpp"
#include "opmean/inequalities.hpp"
#include "opmean/matrix_io.hpp"
#include "opmean/mean.hpp"
#include "opmean/mean_spec.hpp"
#include "opmean/trials.hpp"

namespace opmean {

namespace {

struct Options {
  std::string mean_spec;
  std::string a_path;
  std::string b_path;
  std::optional<std::uint64_t> seed;
  int trials = 200;
  std::string dims = "1..8";
  std::vector<std::string> tols;
  std::vector<std::string> suites;
  std::string out_path;
  std::string format = "json";
};

std::uint64_t parse_seed(const std::string& text, const char* what) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InvalidArgument(std::string(what) + " must be an unsigned integer, got \"" + text + "\"");
  }
  return value;
}

int parse_int(const std::string& text, const char* what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InvalidArgument(std::string(what) + ": expected an integer, got \"" + text + "\"");
  }
  return value;
}

void parse_dims(const std::string& text, TrialConfig& config) {
  const auto sep = text.find("..");
  if (sep == std::string::npos) {
    config.dim_lo = config.dim_hi = parse_int(text, "--dims");
  } else {
    config.dim_lo = parse_int(text.substr(0, sep), "--dims");
    config.dim_hi = parse_int(text.substr(sep + 2), "--dims");
  }
}

void parse_tolerance(const std::string& item, Tolerances& tol) {
  const auto eq = item.find('=');
  if (eq == std::string::npos) throw InvalidArgument("--tol expects NAME=VALUE, got \"" + item + "\"");
  const std::string value = item.substr(eq + 1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) {
    throw InvalidArgument("--tol " + item.substr(0, eq) + ": \"" + value + "\" is not a number");
  }
  tol.set(item.substr(0, eq), v);
}

void emit(const Options& opt, const std::string& text, std::ostream& out) {
  if (opt.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(opt.out_path, std::ios::binary);
  if (!file) throw InvalidArgument("cannot open " + opt.out_path + " for writing");
  file << text;
  if (!file) throw InvalidArgument("failed writing " + opt.out_path);
}

void check_format(const Options& opt) {
  if (opt.format != "json" && opt.format != "csv") {
    throw InvalidArgument("--format must be json or csv");
  }
}

int cmd_mean(const Options& opt, std::ostream& out) {
  check_format(opt);
  const RepresentingFunction f = parse_mean_spec(opt.mean_spec);
  const HermitianMatrix a = read_matrix_file(opt.a_path);
  const HermitianMatrix b = read_matrix_file(opt.b_path);
  const HermitianMatrix result = evaluate_mean(f, a, b);
  if (opt.format == "json") {
    emit(opt, matrix_to_json(result).dump() + "\n", out);
  } else {
    std::string text;
    char buf[64];
    for (int i = 0; i < result.dim(); ++i) {
      for (int j = 0; j < result.dim(); ++j) {
        const Complex z = result(i, j);
        std::snprintf(buf, sizeof buf, "%s%.17g%+.17gi", j ? "," : "", z.real(), z.imag());
        text += buf;
      }
      text += "\n";
    }
    emit(opt, text, out);
  }
  return kExitSuccess;
}

TrialConfig make_config(const Options& opt) {
  TrialConfig config;
  if (opt.seed) {
    config.seed = *opt.seed;
  } else if (const char* env = std::getenv("OPMEAN_SEED")) {
    config.seed = parse_seed(env, "OPMEAN_SEED");
  }
  config.trials = opt.trials;
  parse_dims(opt.dims, config);
  for (const auto& t : opt.tols) parse_tolerance(t, config.tol);
  if (!opt.suites.empty()) config.suites = opt.suites;
  if (!opt.mean_spec.empty()) config.mean_spec = opt.mean_spec;
  config.validate();
  return config;
}

int report_exit(const TrialReport& report) {
  if (report.numerical_errors > 0) return kExitNumerical;
  return report.failures > 0 ? kExitCheckFailure : kExitSuccess;
}

int cmd_verify(const Options& opt, std::ostream& out, std::ostream& err) {
  check_format(opt);
  const TrialConfig config = make_config(opt);
  const TrialReport report = run_trials_parallel(config);
  emit(opt, opt.format == "json" ? report.jsonl() : report.summary_csv(), out);
  if (report.failures > 0) {
    err << "verify: " << report.failures << " failing checks";
    if (report.numerical_errors > 0) err << " (" << report.numerical_errors << " numerical)";
    err << "\n";
  }
  return report_exit(report);
}

int cmd_example33(Options opt, std::ostream& out) {
  check_format(opt);
  opt.suites = {"example33"};
  TrialConfig config;
  config.suites = opt.suites;
  config.trials = 1;
  const TrialReport report = run_trials_serial(config);
  emit(opt, opt.format == "json" ? report.jsonl() : report.summary_csv(), out);
  return report_exit(report);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kubo-Ando operator means and complement-mean inequality checks"};
  app.require_subcommand(1);
  Options opt;

  auto* mean = app.add_subcommand("mean", "Evaluate A sigma B for a mean specification");
  mean->add_option("--mean", opt.mean_spec, "arithmetic:MU | geometric:MU | harmonic:MU | "
                                            "measure:FILE | barbour2:(2t)^r:r=R")
      ->required();
  mean->add_option("--a", opt.a_path, "Matrix JSON file for A")->required();
  mean->add_option("--b", opt.b_path, "Matrix JSON file for B")->required();
  mean->add_option("--out", opt.out_path, "Write the result here instead of stdout");
  mean->add_option("--format", opt.format, "json or csv");

  auto* verify = app.add_subcommand("verify", "Run seeded identity and inequality suites");
  std::string seed_text;
  verify->add_option("--seed", seed_text, "Master seed (default 20250101 or $OPMEAN_SEED)");
  verify->add_option("--trials", opt.trials, "Trials per suite");
  verify->add_option("--dims", opt.dims, "Dimension range LO..HI");
  verify->add_option("--tol", opt.tols, "Tolerance override NAME=VALUE")->delimiter(',');
  verify->add_option("--suite", opt.suites, "Suites to run")->delimiter(',');
  verify->add_option("--mean", opt.mean_spec, "Use this mean in every trial");
  verify->add_option("--out", opt.out_path, "Write the report here instead of stdout");
  verify->add_option("--format", opt.format, "json (JSON lines) or csv (summary)");

  auto* example = app.add_subcommand("example33", "Reproduce the 2x2 counterexample");
  example->add_option("--out", opt.out_path, "Write the report here instead of stdout");
  example->add_option("--format", opt.format, "json or csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitInputError;
  }

  try {
    if (!seed_text.empty()) opt.seed = parse_seed(seed_text, "--seed");
    if (*mean) return cmd_mean(opt, out);
    if (*verify) return cmd_verify(opt, out, err);
    return cmd_example33(opt, out);
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const NotPositiveDefinite& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const PreconditionViolated& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const LinearMean& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const DomainError& e) {
    err << "precondition violated: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const Error& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace opmean

// Command-line entry point: reproduce the full random-pair significance study,
// or run the t-test / critical-separation calculators on user data.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sigsim/image.hpp"
#include "sigsim/report.hpp"
#include "sigsim/simulation.hpp"
#include "sigsim/version.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_bad_args = 2;
constexpr int exit_io = 3;
constexpr int exit_numeric = 4;

// Reports are committed atomically: written beside the target, renamed on success.
void write_file_atomic(const fs::path& path, const std::string& contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw sigsim::IoError("cannot open " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw sigsim::IoError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_pgm_atomic(const sigsim::GrayImage& image, const fs::path& path) {
  const fs::path tmp = path.string() + ".tmp";
  sigsim::write_pgm_file(image, tmp);
  fs::rename(tmp, path);
}

std::vector<double> read_value_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw sigsim::IoError("cannot open " + path.string());
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue; // blank lines ignored
    const auto end = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(begin, end - begin + 1);
    try {
      std::size_t consumed = 0;
      const double v = std::stod(token, &consumed);
      if (consumed != token.size()) throw std::invalid_argument(token);
      values.push_back(v);
    } catch (const std::exception&) {
      throw std::invalid_argument(path.string() + ": unparsable value '" + token + "'");
    }
  }
  if (values.size() < 2)
    throw std::invalid_argument(path.string() + ": needs at least two values");
  return values;
}

struct RunOptions {
  sigsim::SimulationConfig config;
  std::string test_name = "pooled";
  std::string out_dir = "out";
  bool no_images = false;
  unsigned threads = 0;
};

int cmd_run(const RunOptions& options) {
  sigsim::SimulationConfig config = options.config;
  config.test_kind =
      options.test_name == "welch" ? sigsim::TestKind::welch : sigsim::TestKind::pooled;
  sigsim::validate_config(config);

  const auto report = sigsim::run_study(config, options.threads);

  const fs::path out_dir(options.out_dir);
  fs::create_directories(out_dir);
  write_file_atomic(out_dir / "report.csv", sigsim::report_csv(report));
  const std::string markdown = sigsim::report_markdown(report);
  write_file_atomic(out_dir / "report.md", markdown);

  if (!options.no_images) {
    const sigsim::RenderScale scale{config.gen_mean, 3.0 * config.gen_sd};
    for (std::size_t i = 0; i < report.summaries.size(); ++i) {
      const auto& summary = report.summaries[i];
      if (!summary.selected_trial) continue;
      const auto [a, b] = sigsim::regenerate_pair(config, i, *summary.selected_trial);
      const auto left = sigsim::render_group(a, summary.width, summary.height, scale);
      const auto right = sigsim::render_group(b, summary.width, summary.height, scale);
      const std::string stem = "size_" + std::to_string(summary.size);
      write_pgm_atomic(left, out_dir / (stem + "_left.pgm"));
      write_pgm_atomic(right, out_dir / (stem + "_right.pgm"));
      write_pgm_atomic(sigsim::compose_pair(left, right, 4), out_dir / (stem + "_pair.pgm"));
    }
  }

  std::cout << markdown;
  return exit_ok;
}

int cmd_ttest(const std::string& file_a, const std::string& file_b, double alpha,
              const std::string& test_name) {
  const auto a = read_value_file(file_a);
  const auto b = read_value_file(file_b);
  const auto outcome = test_name == "welch" ? sigsim::welch_t_test(a, b, alpha)
                                            : sigsim::pooled_t_test(a, b, alpha);
  std::cout << sigsim::ttest_csv_line(outcome);
  return exit_ok;
}

int cmd_critical(const std::vector<long long>& sizes, double sd, double alpha) {
  if (sizes.empty()) throw std::invalid_argument("critical: size list must be nonempty");
  std::cout << sigsim::critical_csv(sizes, sd, alpha);
  return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo lab for near-threshold two-sample significance"};
  app.set_version_flag("--version", std::string("sigsim ") + sigsim::version);
  app.require_subcommand(1);

  RunOptions run_options;
  auto* run = app.add_subcommand("run", "run the full study and write reports and figures");
  run->add_option("--sizes", run_options.config.sizes,
                  "comma-separated group sizes (perfect squares >= 4)")
      ->delimiter(',');
  run->add_option("--trials", run_options.config.trials_per_size, "trials per size");
  run->add_option("--alpha", run_options.config.alpha, "significance threshold");
  run->add_option("--seed", run_options.config.master_seed, "master seed");
  run->add_option("--mean", run_options.config.gen_mean, "generator mean");
  run->add_option("--sd", run_options.config.gen_sd, "generator standard deviation");
  run->add_option("--out", run_options.out_dir, "output directory");
  run->add_option("--test", run_options.test_name, "test variant")
      ->check(CLI::IsMember({"pooled", "welch"}));
  run->add_option("--threads", run_options.threads, "worker cap (0 = hardware)");
  run->add_flag("--no-images", run_options.no_images, "skip figure output");

  std::string file_a, file_b;
  double ttest_alpha = 0.05;
  std::string ttest_name = "pooled";
  auto* ttest = app.add_subcommand("ttest", "two-sample t test on newline-separated value files");
  ttest->add_option("file_a", file_a, "first group file")->required();
  ttest->add_option("file_b", file_b, "second group file")->required();
  ttest->add_option("--alpha", ttest_alpha, "confidence level for the interval");
  ttest->add_option("--test", ttest_name, "test variant")
      ->check(CLI::IsMember({"pooled", "welch"}));

  std::vector<long long> critical_sizes = {4, 16, 64, 256, 1024, 4096, 16384, 65536, 262144};
  double critical_sd = 1.0;
  double critical_alpha = 0.05;
  auto* critical =
      app.add_subcommand("critical", "mean separation sitting exactly at the threshold");
  critical->add_option("--sizes", critical_sizes, "comma-separated group sizes")->delimiter(',');
  critical->add_option("--sd", critical_sd, "common standard deviation");
  critical->add_option("--alpha", critical_alpha, "significance threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_bad_args;
  }

  try {
    if (run->parsed()) return cmd_run(run_options);
    if (ttest->parsed()) return cmd_ttest(file_a, file_b, ttest_alpha, ttest_name);
    if (critical->parsed()) return cmd_critical(critical_sizes, critical_sd, critical_alpha);
  } catch (const sigsim::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return exit_io;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return exit_io;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_bad_args;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_bad_args;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return exit_numeric;
  }
  return exit_bad_args;
}

// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Heavy criteria reuse a single default CLI run (r1) and one shared batch of
// twenty seeded studies.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "sigsim/image.hpp"
#include "sigsim/report.hpp"
#include "sigsim/simulation.hpp"
#include "sigsim/special_functions.hpp"
#include "support/quadrature.hpp"
#include "support/stats.hpp"

namespace fs = std::filesystem;
using namespace sigsim;

namespace {

int failures = 0;

void report_line(int index, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s  criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", index, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

int run_cli(const std::string& args) {
  const std::string command = std::string(SIGSIM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct Row {
  long long size = 0;
  long long n_significant = 0;
  std::optional<long long> selected_trial;
  std::optional<double> selected_p;
};

std::vector<Row> parse_report_csv(const fs::path& path) {
  std::ifstream in(path);
  std::vector<Row> rows;
  std::string line;
  std::getline(in, line); // header
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    while (fields.size() < 8) fields.emplace_back();
    Row row;
    row.size = std::stoll(fields[0]);
    row.n_significant = std::stoll(fields[5]);
    if (!fields[6].empty()) row.selected_trial = std::stoll(fields[6]);
    if (!fields[7].empty()) row.selected_p = std::stod(fields[7]);
    rows.push_back(row);
  }
  return rows;
}

bool same_output_trees(const fs::path& a, const fs::path& b, std::string& mismatch) {
  std::vector<fs::path> names;
  for (const auto& entry : fs::directory_iterator(a)) names.push_back(entry.path().filename());
  std::sort(names.begin(), names.end());
  for (const auto& name : names) {
    if (!fs::exists(b / name)) {
      mismatch = name.string() + " missing";
      return false;
    }
    if (read_bytes(a / name) != read_bytes(b / name)) {
      mismatch = name.string() + " differs";
      return false;
    }
  }
  return true;
}

} // namespace

int main() {
  const fs::path work = fs::temp_directory_path() / "sigsim_acceptance";
  fs::remove_all(work);
  fs::create_directories(work);

  const SimulationConfig defaults; // 9 sizes x 1000 trials, alpha 0.05, seed 42

  // ---- criterion 1: default run inside 2 minutes, counts in the binomial band
  const fs::path r1 = work / "r1";
  const auto start = std::chrono::steady_clock::now();
  const int r1_exit = run_cli("run --out " + r1.string());
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto rows = parse_report_csv(r1 / "report.csv");
  {
    bool pass = r1_exit == 0 && elapsed < 120.0 && rows.size() == 9;
    long long lo = 1000, hi = 0;
    for (const Row& row : rows) {
      lo = std::min(lo, row.n_significant);
      hi = std::max(hi, row.n_significant);
      if (row.n_significant < 29 || row.n_significant > 71) pass = false;
    }
    char detail[160];
    std::snprintf(detail, sizeof detail, "run took %.1f s, counts span [%lld, %lld] within [29, 71]",
                  elapsed, lo, hi);
    report_line(1, "significant-count band on the default run", pass, detail);
  }

  // shared batch for criteria 2 and 3: twenty master seeds, default config
  std::vector<RunReport> seeded;
  for (Seed master = 1; master <= 20; ++master) {
    SimulationConfig config = defaults;
    config.master_seed = master;
    seeded.push_back(run_study(config, 0));
  }

  // ---- criterion 2: per-size mean significant count across 20 seeds
  {
    bool pass = true;
    double worst_low = 100.0, worst_high = 0.0;
    for (std::size_t size_index = 0; size_index < defaults.sizes.size(); ++size_index) {
      double total = 0.0;
      for (const RunReport& report : seeded)
        total += static_cast<double>(report.summaries[size_index].n_significant);
      const double mean = total / static_cast<double>(seeded.size());
      worst_low = std::min(worst_low, mean);
      worst_high = std::max(worst_high, mean);
      if (mean < 44.0 || mean > 56.0) pass = false;
    }
    char detail[160];
    std::snprintf(detail, sizeof detail, "per-size means span [%.2f, %.2f] within [44, 56]",
                  worst_low, worst_high);
    report_line(2, "expected significant count across seeds", pass, detail);
  }

  // ---- criterion 3: near-threshold selection
  {
    bool strict_ok = true;
    long long rows_total = 0, rows_near = 0;
    for (const RunReport& report : seeded) {
      for (const SizeSummary& summary : report.summaries) {
        ++rows_total;
        if (summary.n_significant >= 1) {
          if (!summary.selected_p || !(*summary.selected_p < 0.05)) strict_ok = false;
          if (summary.selected_p && *summary.selected_p >= 0.045) ++rows_near;
        }
      }
    }
    const double near_fraction =
        static_cast<double>(rows_near) / static_cast<double>(rows_total);
    const bool pass = strict_ok && near_fraction >= 0.95;
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "all selected p < 0.05 strictly: %s; selected p >= 0.045 in %.1f%% of %lld rows",
                  strict_ok ? "yes" : "NO", 100.0 * near_fraction, rows_total);
    report_line(3, "near-threshold selection", pass, detail);
  }

  // ---- criterion 4: numerics against the quadrature oracle
  {
    double worst_cdf = 0.0, worst_round = 0.0, worst_closed = 0.0;
    for (double df : {1.0, 2.0, 4.0, 30.0, 1000.0})
      for (double t = -8.0; t <= 8.0; t += 0.25)
        worst_cdf = std::max(worst_cdf, std::fabs(student_t_cdf(t, df)
                                                  - testsupport::t_cdf_by_quadrature(t, df)));
    for (double df : {1.0, 2.0, 4.0, 30.0, 1000.0, 262142.0})
      for (double p : {1e-6, 1e-4, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 1 - 1e-4, 1 - 1e-6})
        worst_round =
            std::max(worst_round, std::fabs(student_t_cdf(student_t_quantile(p, df), df) - p));
    for (double t = -12.0; t <= 12.0; t += 0.25)
      worst_closed = std::max(worst_closed, std::fabs(student_t_cdf(t, 1.0) - (0.5 + std::atan(t) / std::numbers::pi)));
    for (double x = 0.0; x <= 1.0; x += 0.01)
      worst_closed = std::max(worst_closed, std::fabs(reg_inc_beta(x, 1.0, 1.0) - x));
    const bool pass = worst_cdf < 1e-10 && worst_round < 1e-10 && worst_closed < 1e-12;
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "cdf vs quadrature %.2e (<1e-10), round trip %.2e (<1e-10), closed forms %.2e (<1e-12)",
                  worst_cdf, worst_round, worst_closed);
    report_line(4, "numerics vs oracle", pass, detail);
  }

  // ---- criterion 5: null p-value uniformity and CI coverage at size 256
  {
    SimulationConfig config = defaults;
    config.sizes = {256};
    config.trials_per_size = 10000;
    config.master_seed = 5150;
    std::vector<double> ps;
    long long covered = 0;
    for (long long trial = 0; trial < config.trials_per_size; ++trial) {
      const auto [a, b] = regenerate_pair(config, 0, trial);
      const auto outcome = pooled_t_test(a, b, 0.05);
      ps.push_back(outcome.p);
      if (outcome.ci_low <= 0.0 && 0.0 <= outcome.ci_high) ++covered;
    }
    const double ks = testsupport::ks_distance_uniform(ps);
    const double coverage = static_cast<double>(covered) / static_cast<double>(ps.size());
    const bool pass = ks < 0.02 && coverage >= 0.94 && coverage <= 0.96;
    char detail[160];
    std::snprintf(detail, sizeof detail, "KS %.4f (<0.02), CI coverage %.3f within 0.95 +- 0.01",
                  ks, coverage);
    report_line(5, "null p-value uniformity and CI coverage", pass, detail);
  }

  // ---- criterion 6: separation shrinkage law
  {
    const double limit = 1.959964 * std::sqrt(2.0);
    double worst_rel = 0.0;
    for (long long n : {100000LL, 200000LL, 1000000LL}) {
      const double scaled =
          critical_separation(n, 1.0, 0.05) * std::sqrt(static_cast<double>(n));
      worst_rel = std::max(worst_rel, std::fabs(scaled - limit) / limit);
    }
    const double ratio = critical_separation(1024, 1.0, 0.05) / critical_separation(4, 1.0, 0.05);
    const bool pass = worst_rel < 0.005 && ratio < 0.07;
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "delta*sqrt(n) off the limit by %.3f%% (<0.5%%), delta(1024)/delta(4) = %.4f (<0.07)",
                  100.0 * worst_rel, ratio);
    report_line(6, "separation-shrinkage law", pass, detail);
  }

  // ---- criterion 7: byte determinism across reruns and worker counts
  {
    const fs::path r2 = work / "r2";
    const fs::path r3 = work / "r3";
    const int e2 = run_cli("run --out " + r2.string());
    const int e3 = run_cli("run --threads 1 --out " + r3.string());
    std::string mismatch;
    bool pass = e2 == 0 && e3 == 0;
    if (pass) pass = same_output_trees(r1, r2, mismatch);
    if (pass) pass = same_output_trees(r1, r3, mismatch);
    report_line(7, "byte-identical reruns and thread independence", pass,
                pass ? "report.csv and all PGM files identical" : mismatch);
  }

  // ---- criterion 8: figure reproduction (shrinking visual separation)
  {
    const RenderScale scale{defaults.gen_mean, 3.0 * defaults.gen_sd};
    const double quant_step = 2.0 * scale.half_range / 255.0;
    bool pass = rows.size() == 9;
    std::string detail;
    for (std::size_t i = 0; i < rows.size() && pass; ++i) {
      const Row& row = rows[i];
      if (row.size > 64 && row.size < 65536) continue;
      if (!row.selected_trial) {
        pass = false;
        detail = "size " + std::to_string(row.size) + " has no selected pair";
        break;
      }
      const auto [a, b] = regenerate_pair(defaults, i, *row.selected_trial);
      if (row.size <= 64) {
        const double diff = std::fabs(summarize(a).mean - summarize(b).mean);
        if (!(diff > 0.5 * quant_step * 10.0)) {
          pass = false;
          detail = "size " + std::to_string(row.size) + " separation too small";
        }
      } else {
        const int side = square_side(row.size);
        const auto left = render_group(a, side, side, scale);
        const auto right = render_group(b, side, side, scale);
        double mean_left = 0.0, mean_right = 0.0;
        for (auto px : left.pixels) mean_left += px;
        for (auto px : right.pixels) mean_right += px;
        mean_left /= static_cast<double>(left.pixels.size());
        mean_right /= static_cast<double>(right.pixels.size());
        if (!(std::fabs(mean_left - mean_right) < 1.0)) {
          pass = false;
          detail = "size " + std::to_string(row.size) + " still visibly separated";
        }
      }
    }
    if (pass)
      detail = "sizes 4/16/64 visibly separated, sizes >= 65536 within one gray level";
    report_line(8, "figure reproduction", pass, detail);
  }

  // ---- criterion 9: pinned goldens replay on this platform
  {
    bool pass = true;
    std::string detail = "pinned CSV and PGM goldens replay byte-exactly";
    const std::vector<std::string> names = {"report.csv", "size_4_pair.pgm", "size_16_pair.pgm",
                                            "size_64_pair.pgm", "size_256_pair.pgm"};
    for (const auto& name : names) {
      const auto golden = read_bytes(fs::path(SIGSIM_GOLDEN_DIR) / name);
      const auto fresh = read_bytes(r1 / name);
      if (golden.empty() || golden != fresh) {
        pass = false;
        detail = name + (golden.empty() ? " golden missing" : " differs from golden");
        break;
      }
    }
    report_line(9, "golden files replay", pass, detail);
  }

  fs::remove_all(work);
  std::printf("%s\n", failures == 0 ? "acceptance: all criteria passed"
                                    : "acceptance: FAILURES present");
  return failures == 0 ? 0 : 1;
}

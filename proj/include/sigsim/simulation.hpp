#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "sigsim/errors.hpp"
#include "sigsim/random.hpp"
#include "sigsim/t_test.hpp"
#include "sigsim/version.hpp"

namespace sigsim {

struct SimulationConfig {
  std::vector<long long> sizes = {4, 16, 64, 256, 1024, 4096, 16384, 65536, 262144};
  long long trials_per_size = 1000;
  double alpha = 0.05;
  Seed master_seed = 42;
  double gen_mean = 0.0;
  double gen_sd = 1.0;
  TestKind test_kind = TestKind::pooled;
};

// Side length if size is a perfect square, 0 otherwise.
inline int square_side(long long size) {
  if (size < 0) return 0;
  const long long w = std::llround(std::sqrt(static_cast<double>(size)));
  return w * w == size ? static_cast<int>(w) : 0;
}

inline void validate_config(const SimulationConfig& config) {
  if (config.sizes.empty()) throw std::invalid_argument("config: sizes must be nonempty");
  for (long long s : config.sizes)
    if (s < 4 || square_side(s) == 0)
      throw std::invalid_argument("config: every size must be a perfect square >= 4");
  if (config.trials_per_size < 1)
    throw std::invalid_argument("config: trials_per_size must be >= 1");
  if (!(config.alpha > 0.0 && config.alpha < 1.0))
    throw std::invalid_argument("config: alpha must be in (0,1)");
  if (!(config.gen_sd > 0.0)) throw std::invalid_argument("config: gen_sd must be > 0");
}

struct TrialRecord {
  long long trial_index = 0;
  double p = 1.0;
  double t = 0.0;
};

struct SizeSummary {
  long long size = 0;
  int width = 0;
  int height = 0;
  long long n_trials = 0;
  long long n_significant = 0;
  double expected_significant = 0.0;
  std::optional<long long> selected_trial;
  std::optional<double> selected_p;
};

struct RunReport {
  SimulationConfig config;
  std::vector<SizeSummary> summaries;
  std::string tool_version;
};

namespace detail {

inline void check_indices(const SimulationConfig& config, std::size_t size_index,
                          long long trial_index) {
  if (size_index >= config.sizes.size())
    throw std::invalid_argument("size_index out of range");
  if (trial_index < 0 || trial_index >= config.trials_per_size)
    throw std::invalid_argument("trial_index out of range");
}

} // namespace detail

// One Monte Carlo trial: two fresh groups from derived streams, one t test.
// Samples are not retained; regenerate_pair rebuilds them bit-exactly.
inline TrialRecord run_trial(const SimulationConfig& config, std::size_t size_index,
                             long long trial_index) {
  detail::check_indices(config, size_index, trial_index);
  const long long n = config.sizes[size_index];
  GroupMoments moments[2];
  for (std::uint32_t group = 0; group < 2; ++group) {
    Rng rng(derive_stream(config.master_seed,
                          {static_cast<std::uint32_t>(size_index),
                           static_cast<std::uint64_t>(trial_index), group}));
    MomentAccumulator acc;
    for (long long i = 0; i < n; ++i) acc.add(rng.next_normal(config.gen_mean, config.gen_sd));
    moments[group] = {acc.mean(), acc.variance(), acc.count()};
  }
  const TTestOutcome outcome =
      t_test_from_moments(config.test_kind, moments[0], moments[1], config.alpha);
  return {trial_index, outcome.p, outcome.t};
}

// Count of records with p strictly below alpha; ties at alpha do not count.
inline long long count_significant(std::span<const TrialRecord> records, double alpha) {
  long long n = 0;
  for (const TrialRecord& r : records)
    if (r.p < alpha) ++n;
  return n;
}

// Trial index of the record maximizing p subject to p < alpha; ties broken by
// lowest trial index. Order-independent over the record list.
inline std::optional<long long> select_threshold_pair(std::span<const TrialRecord> records,
                                                      double alpha) {
  std::optional<long long> best_trial;
  double best_p = -1.0;
  for (const TrialRecord& r : records) {
    if (!(r.p < alpha)) continue;
    if (r.p > best_p || (r.p == best_p && r.trial_index < *best_trial)) {
      best_p = r.p;
      best_trial = r.trial_index;
    }
  }
  return best_trial;
}

// Rebuild the exact sample vectors a trial consumed (two-pass design: the
// statistics pass retains nothing, imaging regenerates only selected pairs).
inline std::pair<SampleGroup, SampleGroup> regenerate_pair(const SimulationConfig& config,
                                                           std::size_t size_index,
                                                           long long trial_index) {
  detail::check_indices(config, size_index, trial_index);
  const long long n = config.sizes[size_index];
  std::pair<SampleGroup, SampleGroup> pair;
  for (std::uint32_t group = 0; group < 2; ++group) {
    Rng rng(derive_stream(config.master_seed,
                          {static_cast<std::uint32_t>(size_index),
                           static_cast<std::uint64_t>(trial_index), group}));
    SampleGroup& g = group == 0 ? pair.first : pair.second;
    g.reserve(static_cast<std::size_t>(n));
    for (long long i = 0; i < n; ++i) g.push_back(rng.next_normal(config.gen_mean, config.gen_sd));
  }
  return pair;
}

// Full study. Trials are embarrassingly parallel; each record slot is a pure
// function of (master seed, key), so any worker count yields identical output.
inline RunReport run_study(const SimulationConfig& config, unsigned threads = 0) {
  validate_config(config);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());

  RunReport report;
  report.config = config;
  report.tool_version = version;

  for (std::size_t size_index = 0; size_index < config.sizes.size(); ++size_index) {
    const long long trials = config.trials_per_size;
    std::vector<TrialRecord> records(static_cast<std::size_t>(trials));

    std::atomic<long long> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const long long chunk = config.sizes[size_index] >= 4096 ? 1 : 64;

    auto worker = [&] {
      for (;;) {
        const long long begin = next.fetch_add(chunk, std::memory_order_relaxed);
        if (begin >= trials) return;
        const long long end = std::min(trials, begin + chunk);
        for (long long trial = begin; trial < end; ++trial) {
          try {
            records[static_cast<std::size_t>(trial)] = run_trial(config, size_index, trial);
          } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) {
              first_error = std::make_exception_ptr(NumericError(
                  "size " + std::to_string(config.sizes[size_index]) + ", trial "
                  + std::to_string(trial) + ": " + e.what()));
            }
            next.store(trials, std::memory_order_relaxed); // stop claiming work
            return;
          }
        }
      }
    };

    const unsigned extra = std::min<unsigned>(threads, static_cast<unsigned>(
                               std::min<long long>(trials, 64))) - 1;
    std::vector<std::thread> pool;
    pool.reserve(extra);
    for (unsigned i = 0; i < extra; ++i) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);

    SizeSummary summary;
    summary.size = config.sizes[size_index];
    summary.width = summary.height = square_side(summary.size);
    summary.n_trials = trials;
    summary.n_significant = count_significant(records, config.alpha);
    summary.expected_significant = config.alpha * static_cast<double>(trials);
    if (auto selected = select_threshold_pair(records, config.alpha)) {
      summary.selected_trial = *selected;
      summary.selected_p = records[static_cast<std::size_t>(*selected)].p;
    }
    report.summaries.push_back(summary);
  }
  return report;
}

} // namespace sigsim

#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "sigsim/simulation.hpp"
#include "sigsim/t_test.hpp"

namespace sigsim {

namespace detail {

inline std::string format_double(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

} // namespace detail

// Size label in the WxH=N form, e.g. "512x512=262144".
inline std::string size_label(const SizeSummary& s) {
  return std::to_string(s.width) + "x" + std::to_string(s.height) + "=" + std::to_string(s.size);
}

inline std::string config_line(const SimulationConfig& config) {
  std::string sizes;
  for (std::size_t i = 0; i < config.sizes.size(); ++i) {
    if (i) sizes += ",";
    sizes += std::to_string(config.sizes[i]);
  }
  return "sizes=" + sizes + " trials=" + std::to_string(config.trials_per_size)
         + " alpha=" + detail::format_double(config.alpha, "%g")
         + " seed=" + std::to_string(config.master_seed)
         + " mean=" + detail::format_double(config.gen_mean, "%g")
         + " sd=" + detail::format_double(config.gen_sd, "%g")
         + " test=" + (config.test_kind == TestKind::pooled ? "pooled" : "welch");
}

// CSV report: fixed header, rows in configured size order, full-precision
// p-values, selected-pair absence as empty fields.
inline std::string report_csv(const RunReport& report) {
  std::string out = "size,width,height,trials,alpha,n_significant,selected_trial,selected_p\n";
  for (const SizeSummary& s : report.summaries) {
    out += std::to_string(s.size) + "," + std::to_string(s.width) + ","
           + std::to_string(s.height) + "," + std::to_string(s.n_trials) + ","
           + detail::format_double(report.config.alpha, "%g") + ","
           + std::to_string(s.n_significant) + ","
           + (s.selected_trial ? std::to_string(*s.selected_trial) : "") + ","
           + (s.selected_p ? detail::format_double(*s.selected_p, "%.17g") : "") + "\n";
  }
  return out;
}

// Markdown summary table with the selected trial index for auditability;
// p-values shown to 4 decimals, absence as an em dash.
inline std::string report_markdown(const RunReport& report) {
  const std::string alpha = detail::format_double(report.config.alpha, "%g");
  std::string out = config_line(report.config) + "\n\n";
  out += "| Random Distribution Size | P-value of Pair Presented | Number of Random Cases with p < "
         + alpha + " | Selected Trial |\n";
  out += "|---|---|---|---|\n";
  for (const SizeSummary& s : report.summaries) {
    out += "| " + size_label(s) + " | "
           + (s.selected_p ? detail::format_double(*s.selected_p, "%.4f") : "—") + " | "
           + std::to_string(s.n_significant) + "/" + std::to_string(s.n_trials) + " | "
           + (s.selected_trial ? std::to_string(*s.selected_trial) : "—") + " |\n";
  }
  return out;
}

// CSV line for a single test outcome: t,df,p,mean_diff,cohen_d,ci_low,ci_high.
inline std::string ttest_csv_line(const TTestOutcome& o) {
  return detail::format_double(o.t, "%.17g") + "," + detail::format_double(o.df, "%.17g") + ","
         + detail::format_double(o.p, "%.17g") + ","
         + detail::format_double(o.mean_diff, "%.17g") + ","
         + detail::format_double(o.cohen_d, "%.17g") + ","
         + detail::format_double(o.ci_low, "%.17g") + ","
         + detail::format_double(o.ci_high, "%.17g") + "\n";
}

// CSV table of critical separations over the requested group sizes.
inline std::string critical_csv(const std::vector<long long>& sizes, double sd, double alpha) {
  std::string out = "n,delta\n";
  for (long long n : sizes)
    out += std::to_string(n) + "," + detail::format_double(critical_separation(n, sd, alpha), "%.17g") + "\n";
  return out;
}

} // namespace sigsim

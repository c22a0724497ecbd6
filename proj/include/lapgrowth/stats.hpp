#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace lapgrowth {

/// One named scalar measurement.
struct Measurement {
  std::string name;
  double value = 0;
  double stderr_ = 0;  // 0 for exact / deterministic quantities
  std::int64_t samples = 1;
};

/// Uniform output of estimators and shape checks: a list of measurements, an
/// overall verdict and free-form notes (e.g. "HEURISTIC").
class StatsReport {
 public:
  explicit StatsReport(std::string title = {}) : title_(std::move(title)) {}

  const std::string& title() const { return title_; }
  void add(std::string name, double value, double stderr_ = 0, std::int64_t samples = 1);
  void note(std::string text) { notes_.push_back(std::move(text)); }
  /// Records a failed check; passed() turns false.
  void fail(std::string why);

  bool has(const std::string& name) const;
  /// Value of the named measurement; throws std::out_of_range if absent.
  double get(const std::string& name) const;
  const std::vector<Measurement>& entries() const { return entries_; }
  const std::vector<std::string>& notes() const { return notes_; }
  const std::vector<std::string>& failures() const { return failures_; }
  bool passed() const { return failures_.empty(); }

  /// CSV with header "name,value,stderr,samples"; values printed with 17
  /// significant digits so the file is reproducible bit-for-bit.
  void write_csv(std::ostream& os) const;
  void print(std::ostream& os) const;

 private:
  std::string title_;
  std::vector<Measurement> entries_;
  std::vector<std::string> notes_;
  std::vector<std::string> failures_;
};

/// Monte-Carlo estimate with sample standard error and an optional exact target.
struct EstimateResult {
  std::string name;
  double value = 0;
  double stderr_ = 0;
  std::int64_t samples = 0;
  std::optional<double> target;

  /// (value - target) / stderr, or 0 when there is no target or stderr is 0.
  double z_score() const;
  bool within(double allowance) const { return !target || std::abs(value - *target) <= allowance; }
};

/// Mean and standard error (sample sd / sqrt(n)) of the data.
EstimateResult mean_estimate(std::string name, std::span<const double> xs, std::optional<double> target = {});

/// CSV with the frozen column order name,value,stderr,samples,target,z_score.
void write_estimates_csv(std::ostream& os, std::span<const EstimateResult> rows);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

/// 17-significant-digit decimal form (round-trips exactly).
std::string format_double(double v);

}  // namespace lapgrowth

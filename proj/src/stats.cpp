#include "lapgrowth/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace lapgrowth {

void StatsReport::add(std::string name, double value, double stderr_, std::int64_t samples) {
  entries_.push_back({std::move(name), value, stderr_, samples});
}

void StatsReport::fail(std::string why) { failures_.push_back(std::move(why)); }

bool StatsReport::has(const std::string& name) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const Measurement& m) { return m.name == name; });
}

double StatsReport::get(const std::string& name) const {
  for (const auto& m : entries_)
    if (m.name == name) return m.value;
  throw std::out_of_range("StatsReport '" + title_ + "': no measurement named " + name);
}

void StatsReport::write_csv(std::ostream& os) const {
  os << "name,value,stderr,samples\n";
  for (const auto& m : entries_)
    os << m.name << ',' << format_double(m.value) << ',' << format_double(m.stderr_) << ',' << m.samples << '\n';
}

void StatsReport::print(std::ostream& os) const {
  os << "== " << title_ << (passed() ? " [ok]" : " [FAILED]") << '\n';
  for (const auto& m : entries_) {
    os << "  " << m.name << " = " << format_double(m.value);
    if (m.stderr_ > 0) os << " +/- " << format_double(m.stderr_);
    if (m.samples > 1) os << "  (n=" << m.samples << ")";
    os << '\n';
  }
  for (const auto& n : notes_) os << "  note: " << n << '\n';
  for (const auto& f : failures_) os << "  FAIL: " << f << '\n';
}

double EstimateResult::z_score() const {
  if (!target || stderr_ <= 0) return 0;
  return (value - *target) / stderr_;
}

EstimateResult mean_estimate(std::string name, std::span<const double> xs, std::optional<double> target) {
  EstimateResult r;
  r.name = std::move(name);
  r.samples = static_cast<std::int64_t>(xs.size());
  r.target = target;
  if (xs.empty()) return r;
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  r.value = mean;
  if (xs.size() > 1) r.stderr_ = std::sqrt(ss / static_cast<double>(xs.size() - 1)) / std::sqrt(static_cast<double>(xs.size()));
  return r;
}

void write_estimates_csv(std::ostream& os, std::span<const EstimateResult> rows) {
  os << "name,value,stderr,samples,target,z_score\n";
  for (const auto& r : rows) {
    os << r.name << ',' << format_double(r.value) << ',' << format_double(r.stderr_) << ',' << r.samples << ','
       << (r.target ? format_double(*r.target) : std::string()) << ',' << format_double(r.z_score()) << '\n';
  }
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 paired points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace lapgrowth

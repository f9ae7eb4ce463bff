#include "morandim/interval_set.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string>

#include "morandim/error.hpp"
#include "morandim/format.hpp"

namespace morandim {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, std::size_t line) {
  const std::string t = trim(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
    throw RangeError("interval CSV line " + std::to_string(line) + ": bad number '" + t + "'");
  }
  return v;
}

}  // namespace

IntervalSet::IntervalSet(std::vector<Interval> intervals, double resolution)
    : intervals_(std::move(intervals)) {
  double longest = 0.0;
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const auto& iv = intervals_[i];
    if (!(iv.lo <= iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
      throw RangeError("interval " + std::to_string(i) + " needs finite lo <= hi");
    }
    if (i > 0 && !(intervals_[i - 1].hi <= iv.lo)) {
      throw RangeError("intervals must be sorted and non-overlapping (at index " +
                       std::to_string(i) + ")");
    }
    longest = std::max(longest, iv.length());
    if (iv.hi > iv.lo) points_only_ = false;
    if (!components_.empty() && components_.back().hi == iv.lo) {
      components_.back().hi = iv.hi;
    } else {
      components_.push_back(iv);
    }
  }
  resolution_ = resolution >= 0.0 ? resolution : longest;
}

IntervalSet IntervalSet::from_points(std::vector<double> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<Interval> out;
  out.reserve(points.size());
  for (double p : points) out.push_back({p, p});
  return IntervalSet(std::move(out), 0.0);
}

std::size_t IntervalSet::component_of(double x) const {
  // first component with hi >= x
  const auto it = std::lower_bound(components_.begin(), components_.end(), x,
                                   [](const Interval& c, double v) { return c.hi < v; });
  if (it == components_.end() || it->lo > x) return components_.size();
  return static_cast<std::size_t>(std::distance(components_.begin(), it));
}

bool IntervalSet::contains(double x) const { return component_of(x) < components_.size(); }

IntervalSet clip(const IntervalSet& set, double lo, double hi) {
  std::vector<Interval> out;
  for (const auto& iv : set.intervals()) {
    if (iv.hi < lo || iv.lo > hi) continue;
    out.push_back({std::max(iv.lo, lo), std::min(iv.hi, hi)});
  }
  return IntervalSet(std::move(out), set.resolution());
}

IntervalSet read_intervals_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "lo,hi") {
    throw RangeError("interval CSV must start with the header 'lo,hi'");
  }
  std::vector<Interval> rows;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (trim(line).empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw RangeError("interval CSV line " + std::to_string(number) + ": expected 'lo,hi'");
    }
    const double lo = parse_double(line.substr(0, comma), number);
    const double hi = parse_double(line.substr(comma + 1), number);
    if (!rows.empty() && lo < rows.back().hi) {
      throw RangeError("interval CSV line " + std::to_string(number) +
                       ": rows must be in ascending order");
    }
    rows.push_back({lo, hi});
  }
  return IntervalSet(std::move(rows));
}

void write_intervals_csv(std::ostream& out, const IntervalSet& set) {
  out << "lo,hi\n";
  for (const auto& iv : set.intervals()) {
    out << format_number(iv.lo, 17) << ',' << format_number(iv.hi, 17) << '\n';
  }
}

}  // namespace morandim

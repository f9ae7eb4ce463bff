#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace morandim {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;  // hi == lo encodes a point
  double length() const { return hi - lo; }
};

// Sorted union of closed intervals and points on the line. Neighbours may
// share an endpoint (touching placement); they never overlap.
class IntervalSet {
 public:
  IntervalSet() = default;
  // Throws RangeError unless lo <= hi and hi_i <= lo_{i+1} throughout.
  explicit IntervalSet(std::vector<Interval> intervals, double resolution = -1.0);
  static IntervalSet from_points(std::vector<double> points);

  std::span<const Interval> intervals() const { return intervals_; }
  // Maximal connected pieces: touching intervals merged.
  std::span<const Interval> components() const { return components_; }
  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }
  double min() const { return intervals_.front().lo; }
  double max() const { return intervals_.back().hi; }
  double diameter() const { return empty() ? 0.0 : max() - min(); }
  bool points_only() const { return points_only_; }
  bool contains(double x) const;
  // Index of the component containing x, or components().size() if none.
  std::size_t component_of(double x) const;
  // Length of the longest stored interval unless set explicitly: the finest
  // scale at which this truncation stands in for the limit set.
  double resolution() const { return resolution_; }

 private:
  std::vector<Interval> intervals_;
  std::vector<Interval> components_;
  double resolution_ = 0.0;
  bool points_only_ = true;
};

// E intersected with [lo, hi].
IntervalSet clip(const IntervalSet& set, double lo, double hi);

// Two-column "lo,hi" CSV with a header row; import rejects unsorted rows.
IntervalSet read_intervals_csv(std::istream& in);
void write_intervals_csv(std::ostream& out, const IntervalSet& set);

}  // namespace morandim

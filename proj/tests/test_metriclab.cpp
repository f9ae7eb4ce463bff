#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "morandim/error.hpp"
#include "morandim/interval_set.hpp"
#include "morandim/metriclab.hpp"
#include "morandim/presets.hpp"

#include "oracles.hpp"

using namespace morandim;
using namespace oracle;

namespace {

bool same(const IntervalSet& s, const std::vector<Interval>& want) {
  if (s.size() != want.size()) return false;
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (std::abs(s.intervals()[i].lo - want[i].lo) > 1e-15) return false;
    if (std::abs(s.intervals()[i].hi - want[i].hi) > 1e-15) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("interval sets") {
  CHECK_THROWS_AS(IntervalSet({{0.0, 0.5}, {0.4, 1.0}}), RangeError);
  CHECK_THROWS_AS(IntervalSet({{0.5, 0.4}}), RangeError);
  const IntervalSet touching({{0.0, 0.25}, {0.25, 0.5}, {0.75, 0.75}});
  CHECK(touching.components().size() == 2);
  CHECK(touching.resolution() == 0.25);
  CHECK_FALSE(touching.points_only());
  CHECK(touching.contains(0.3));
  CHECK_FALSE(touching.contains(0.6));
  CHECK(touching.component_of(0.75) == 1);
  CHECK(touching.component_of(0.6) == 2);
  const auto pts = IntervalSet::from_points({0.5, 0.0, 1.0});
  CHECK(pts.points_only());
  CHECK(pts.min() == 0.0);
  CHECK(pts.diameter() == 1.0);
  CHECK(same(clip(touching, 0.1, 0.3), {{0.1, 0.25}, {0.25, 0.3}}));
}

TEST_CASE("interval CSV round trip") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1e-3);
  std::vector<Interval> iv;
  double at = -2.0;
  for (int i = 0; i < 200; ++i) {
    const double lo = at + u(rng);
    const double hi = i % 3 == 0 ? lo : lo + u(rng) * 1e-7;
    iv.push_back({lo, hi});
    at = hi;
  }
  const IntervalSet s(iv);
  std::stringstream buf;
  write_intervals_csv(buf, s);
  const auto back = read_intervals_csv(buf);
  REQUIRE(back.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(back.intervals()[i].lo == s.intervals()[i].lo);
    CHECK(back.intervals()[i].hi == s.intervals()[i].hi);
  }
  std::istringstream no_header("0,1\n");
  CHECK_THROWS_AS(read_intervals_csv(no_header), RangeError);
  std::istringstream unsorted("lo,hi\n0.5,0.6\n0,0.1\n");
  CHECK_THROWS_AS(read_intervals_csv(unsorted), RangeError);
  std::istringstream junk("lo,hi\n0,1x\n");
  CHECK_THROWS_AS(read_intervals_csv(junk), RangeError);
}

TEST_CASE("realize") {
  CHECK(same(realize(presets::constant(2, 0.25), 1), {{0, 0.25}, {0.75, 1}}));
  CHECK(same(realize(presets::constant(2, 0.25, Placement::touching_left), 1),
             {{0, 0.25}, {0.25, 0.5}}));
  CHECK(same(realize(presets::constant(3, 0.2), 1), {{0, 0.2}, {0.4, 0.6}, {0.8, 1}}));
  const auto d2 = realize(presets::constant(2, 0.25), 2);
  CHECK(same(d2, {{0, 1.0 / 16}, {3.0 / 16, 0.25}, {0.75, 13.0 / 16}, {15.0 / 16, 1}}));
  CHECK(realize(presets::constant(2, 0.25), 0).size() == 1);
  CHECK_THROWS_AS(realize(presets::constant(2, 0.25), 10, 512), ResourceError);
  CHECK_THROWS_AS(realize(presets::constant(2, 0.6), 2), ValidationError);

  MoranSpec shifted = presets::constant(2, 0.25);
  shifted.interval = {2.0, 6.0};
  CHECK(same(realize(shifted, 1), {{2, 3}, {5, 6}}));

  CHECK(realization_depth(presets::constant(2, 0.25), 1.0 / 32) == 4);
  CHECK(realization_depth(presets::constant(2, 0.25), 0.5) == 2);
}

TEST_CASE("realized lengths follow the construction") {
  const auto spec = presets::example5(2);
  const auto s = realize(spec, 12);
  CHECK(s.size() == 4096);
  double prod = 1.0;
  for (std::size_t k = 1; k <= 12; ++k) prod *= eval_ratio(std::get<SequenceRule>(spec.ratio), k);
  for (const auto& i : s.intervals()) CHECK(i.length() == doctest::Approx(prod).epsilon(1e-12));
  CHECK(s.min() == 0.0);
  CHECK(s.max() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("Example 1 points") {
  const Example1 ex(0.5, 5000);
  CHECK(ex.a(1) == doctest::Approx(1 - std::pow(2.0, -0.5)).epsilon(1e-14));
  CHECK(ex.a(1) == doctest::Approx(0.29289).epsilon(1e-4));
  CHECK(ex.a(2) == doctest::Approx(ex.a(1) * (1 - std::pow(3.0, -0.5))).epsilon(1e-14));
  CHECK(ex.a(2) == doctest::Approx(0.12377).epsilon(1e-4));
  for (std::size_t k = 0; k + 1 < ex.k_max(); ++k) {
    REQUIRE(ex.gap(k + 1) < ex.gap(k));
    CHECK(ex.gap(k) == doctest::Approx(ex.a(k) - ex.a(k + 1)).epsilon(1e-9));
  }
  const auto s = example1_set(0.5, 100);
  CHECK(s.size() == 102);
  CHECK(s.points_only());
  CHECK(s.min() == 0.0);
  CHECK(s.max() == 1.0);
  CHECK(s.resolution() == doctest::Approx(Example1(0.5, 100).a(100)));
}

TEST_CASE("Example 1 scale function psi") {
  const Example1 ex(0.5, 5000);
  CHECK(ex.psi(ex.a(3)) == doctest::Approx((ex.a(3) - ex.a(4)) / 2).epsilon(1e-12));
  CHECK(ex.bracket(ex.a(3)) == 3);
  CHECK(ex.bracket(0.5) == 1);
  CHECK_THROWS_AS(ex.psi(1.0), RangeError);
  CHECK_THROWS_AS(ex.psi(ex.a(5000) / 2), RangeError);
  // 100 radii evenly spaced in log r over [a_5000, 1)
  double prev = 0.0;
  const double lo = ex.log_a(5000);
  for (int i = 0; i < 100; ++i) {
    const double r = std::exp(lo + (0.0 - lo) * i / 100.0);
    const double p = ex.psi(r);
    CHECK(p < r);
    CHECK(p > 0.0);
    CHECK(p >= prev);
    prev = p;
  }
  CHECK(psi_example1(0.5, ex.a(10)) == ex.psi(ex.a(10)));
}

TEST_CASE("Example 1 estimates trend monotonically over the last tenth of k") {
  const Example1 ex(0.5, 5000);
  double p1 = 1e300;
  double p2 = 1e300;
  double p3 = 1e300;
  for (std::size_t k = 4500; k <= 5000; ++k) {
    const double la = ex.log_a(k);
    const double e1 = std::abs(la / ex.log_a(k - 1) - 1.0);
    const double e2 = std::log(double(k)) / -la;
    const double e3 = std::abs((std::log(ex.gap(k)) - std::log(2.0)) / la - 1.0);
    CHECK(e1 < p1);
    CHECK(e2 < p2);
    CHECK(e3 < p3);
    p1 = e1;
    p2 = e2;
    p3 = e3;
  }
  CHECK(p1 < 1e-3);
  CHECK(p2 < 0.1);
  CHECK(p3 < 0.05);
}

TEST_CASE("UD failure level") {
  const Example1 ex(0.5, 1000);
  // (k + 2)^{-1/2} <= 1/30 first holds at k = 898
  CHECK(ex.ud_failure_level(0.1) == 898);
  const auto s = ex.set();
  const double x = ex.a(898);
  const auto w = ud_witness(s, x, x / 2, 0.1);
  CHECK_FALSE(w.pass);
  CHECK(w.threshold == doctest::Approx(0.1 * x / 2));
  CHECK_FALSE(brute_gap_cut(s, x, x / 2, 0.1 * x / 2));
}

TEST_CASE("min_cover examples") {
  CHECK(min_cover(IntervalSet({{0, 1}}), 0.25) == 2);
  CHECK(min_cover(realize(presets::constant(2, 0.25), 2), 1.0 / 32) == 4);
  CHECK(min_cover(IntervalSet::from_points({0.3}), 1e-9) == 1);
  CHECK(min_cover(IntervalSet({{0, 1}}), 0.1) == 5);
  CHECK(min_cover_window(IntervalSet({{0, 1}}), 0.1, 0.25, 0.55) == 2);
}

TEST_CASE("min_cover equals exhaustive search on 200 random point sets") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> size(1, 12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> pts(size(rng));
    for (auto& p : pts) p = u(rng);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    const double r = 0.02 + 0.2 * u(rng);
    CHECK(min_cover(IntervalSet::from_points(pts), r) == exhaustive_cover(pts, r));
  }
}

TEST_CASE("n_r_R examples") {
  CHECK(n_r_R(IntervalSet({{0, 1}}), 1.0 / 8, 0.5).count == 4);
  CHECK(n_r_R(IntervalSet::from_points({0.0}), 0.1, 0.5).count == 1);
  const auto pts = IntervalSet::from_points({0, 0.1, 0.2, 0.3, 1.0});
  CHECK(n_r_R(pts, 0.01, 0.15).count == 4);
}

TEST_CASE("n_r_R equals a dense grid scan on 50 random dyadic sets") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> rj(1, 6);
  std::uniform_int_distribution<int> Rj(4, 32);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = random_dyadic(rng);
    const double r = rj(rng) / 128.0;
    double R = Rj(rng) / 64.0;
    if (R <= r) R = r + 1.0 / 64;
    std::size_t scan = 0;
    // window centres on the lattice / 4
    for (int i = -4 * 64 - 1; i <= 8 * 64 + 1; ++i) {
      const double x = i / 256.0;
      scan = std::max(scan, greedy_cover(clip_list(s, x - R, x + R), r));
    }
    const auto got = n_r_R(s, r, R);
    CHECK(got.stride == 1);
    CHECK(got.count == scan);
    CHECK(greedy_cover(clip_list(s, got.center - R, got.center + R), r) == got.count);
  }
}

TEST_CASE("point fast path agrees with the interval enumeration") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> pts(40);
    for (auto& p : pts) p = u(rng);
    std::sort(pts.begin(), pts.end());
    const auto s = IntervalSet::from_points(pts);
    const double r = 0.005 + 0.05 * u(rng);
    const double R = r * (2 + 10 * u(rng));
    std::size_t scan = 0;
    for (double x : pts) {
      for (double c : {x - R, x, x + R}) {
        scan = std::max(scan, greedy_cover(clip_list(s, c - R, c + R), r));
      }
    }
    CHECK(n_r_R(s, r, R).count == scan);
    PointCoverIndex idx(pts, r);
    CHECK(idx.max_window(R).count == scan);
  }
}

TEST_CASE("N_{r,R} is monotone in r and R") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = random_dyadic(rng);
    std::size_t prev = 0;
    for (double R : {0.05, 0.1, 0.2, 0.3, 0.5}) {
      const auto n = n_r_R(s, 0.01, R).count;
      CHECK(n >= prev);
      prev = n;
    }
    prev = std::numeric_limits<std::size_t>::max();
    for (double r : {0.002, 0.005, 0.01, 0.03, 0.08}) {
      const auto n = n_r_R(s, r, 0.2).count;
      CHECK(n <= prev);
      prev = n;
    }
  }
}

TEST_CASE("uniform Cantor sandwich for N_{r,R}") {
  const std::size_t q = 6;
  const auto spec = presets::constant(2, 0.25);
  const auto upper_set = realize(spec, q);
  std::vector<double> ends;
  for (const auto& i : upper_set.intervals()) {
    ends.push_back(i.lo);
    ends.push_back(i.hi);
  }
  const auto lower_set = IntervalSet::from_points(ends);
  const double r = std::pow(4.0, -double(q));
  for (std::size_t p = 1; p < q; ++p) {
    const double R = std::pow(4.0, -double(p));
    const double count = std::pow(2.0, double(q - p));
    CHECK(double(n_r_R(upper_set, r, R).count) <= 3 * count);
    CHECK(double(n_r_R(lower_set, r, R).count) >= count / 4);
  }
}

TEST_CASE("empirical h") {
  SUBCASE("depth-5 uniform Cantor") {
    const auto s = realize(presets::constant(2, 0.25), 5);
    const std::vector<double> r_grid{1.0 / 4, 1.0 / 16, 1.0 / 64};
    const std::vector<double> ladder{1.0 / 4, 1.0 / 16, 1.0 / 64, 1.0 / 256, 1.0 / 1024};
    const auto h = empirical_h(s, 0.2, r_grid, ladder);
    CHECK(std::abs(h.value - 0.5) <= 0.1);
    CHECK(h.rows[h.argmax].log_ratio == h.value);
    for (const auto& row : h.rows) {
      CHECK(row.R >= std::pow(row.r, 0.8) * (1 - 1e-12));
      CHECK(row.R < s.diameter());
    }
  }
  SUBCASE("the unit interval") {
    const auto s = realize(presets::constant(2, 0.5, Placement::touching_left), 12);
    CHECK(s.components().size() == 1);
    const std::vector<double> r_grid{1.0 / 64, 1.0 / 256};
    // R on construction scales; off them ceil(R / r) inflates small ratios
    std::vector<double> ladder;
    for (int j = 1; j <= 12; ++j) ladder.push_back(std::ldexp(1.0, -j));
    const auto h = empirical_h(s, 0.2, r_grid, ladder);
    CHECK(std::abs(h.value - 1.0) <= 0.05);
  }
  SUBCASE("resolution guard") {
    const auto s = realize(presets::constant(2, 0.25), 3);
    const std::vector<double> r_grid{1.0 / 64};
    CHECK_THROWS_AS(empirical_h(s, 0.2, r_grid), RangeError);
  }
  CHECK(geometric_ladder(0.01, 1.0, 2).size() == 4);
}

TEST_CASE("gap witnesses") {
  const auto cantor = realize(presets::constant(2, 0.25), 1);
  const auto w = ud_witness(cantor, 0.0, 0.4, 0.5);
  CHECK(w.pass);
  REQUIRE(w.right_cut.has_value());
  CHECK(w.right_cut->lo == 0.25);
  CHECK(w.right_cut->hi == 0.75);
  CHECK(w.part_lo == 0.0);
  CHECK(w.part_hi == 0.25);
  CHECK(recheck_witness(cantor, w));

  const auto pts = IntervalSet::from_points({0.0, 0.6, 1.0});
  const auto iso = ud_witness(pts, 0.6, 0.3, 0.9);
  CHECK(iso.pass);
  CHECK(iso.part_lo == 0.6);
  CHECK(iso.part_hi == 0.6);
  CHECK(recheck_witness(pts, iso));

  CHECK_FALSE(ud_witness(IntervalSet({{0, 1}}), 0.5, 0.2, 0.1).pass);
  CHECK_THROWS_AS(ud_witness(cantor, 0.5, 0.2, 0.1), RangeError);

  auto forged = w;
  forged.part_hi = 1.0;  // no longer inside B(x, r)
  CHECK_FALSE(recheck_witness(cantor, forged));
}

TEST_CASE("gap-cut search agrees with brute force; passes re-check literally") {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t passes = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = random_dyadic(rng);
    const auto xs = sample_points(s, 1000);
    const double x = xs[static_cast<std::size_t>(u(rng) * double(xs.size())) % xs.size()];
    const double r = 0.02 + 0.5 * u(rng);
    const double th = r * (0.05 + 0.9 * u(rng));
    const auto w = gap_witness(s, x, r, th);
    CHECK(w.pass == brute_gap_cut(s, x, r, th));
    if (w.pass) {
      ++passes;
      CHECK(recheck_witness(s, w));
      CHECK(w.separation >= th);
    }
  }
  CHECK(passes > 30);
}

TEST_CASE("QUD and UD checks") {
  SUBCASE("Example 1 passes QUD with its psi and fails UD") {
    const Example1 ex(0.5, 2000);
    const auto s = ex.set();
    std::vector<double> r_grid;
    for (double r = 0.5; r > ex.a(1500); r /= 10) r_grid.push_back(r);
    const auto q = qud_check(s, [&](double r) { return ex.psi(r); }, r_grid);
    CHECK(q.all_pass());
    CHECK(q.samples == r_grid.size() * s.size());
    const auto u = ud_check(s, 0.1, r_grid);
    CHECK_FALSE(u.all_pass());
  }
  SUBCASE("uniform Cantor at construction scales") {
    const auto s = realize(presets::constant(2, 0.25), 6);
    const std::vector<double> r_grid{1.0, 0.25, 1.0 / 16, 1.0 / 64};
    CHECK(qud_check(s, [](double r) { return r / 8; }, r_grid).all_pass());
    CHECK(ud_check(s, 0.2, r_grid).all_pass());
  }
  SUBCASE("a connected set fails") {
    const auto s = realize(presets::constant(2, 0.5, Placement::touching_left), 6);
    const std::vector<double> r_grid{0.25, 0.1};
    const auto q = qud_check(s, [](double r) { return r / 8; }, r_grid);
    CHECK(q.passed == 0);
    CHECK(ud_check(s, 0.2, r_grid).passed == 0);
  }
  SUBCASE("guards") {
    const auto s = realize(presets::constant(2, 0.25), 3);
    const std::vector<double> bad_r{2.0};
    CHECK_THROWS_AS(ud_check(s, 0.2, bad_r), RangeError);
    const std::vector<double> r_grid{0.25};
    CHECK_THROWS_AS(qud_check(s, [](double r) { return r; }, r_grid), RangeError);
  }
}

TEST_CASE("sample points") {
  const auto s = realize(presets::constant(2, 0.25), 4);
  CHECK(sample_points(s, 100000).size() == 32);
  const auto thin = sample_points(s, 10);
  CHECK(thin.size() <= 10);
  CHECK(std::is_sorted(thin.begin(), thin.end()));
  for (double x : thin) CHECK(s.contains(x));
}

#pragma once

// Formula engines for the dimensions of Moran sets, all driven by window
// exponents s_{p,q} = log(n_p...n_q) / -log(c_p...c_q) read off a PrefixTable.
//
// Limits are replaced by finite surrogates: a limsup over q becomes the max
// over the tail window q in [K/2, K], and `drift` compares that against the
// window [K/4, K/2]. Reported values are the grid entry at the most
// permissive parameter, never an extrapolation.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "morandim/prefix_table.hpp"
#include "morandim/seqspec.hpp"

namespace morandim {

inline constexpr double kDefaultDeltaGrid[] = {0.2, 0.1, 0.05, 0.02};
inline constexpr double kDefaultEtaGrid[] = {0.2, 0.1, 0.05};
inline constexpr std::size_t kDefaultMGrid[] = {4, 8, 16, 32};

struct DimEstimate {
  double value = 0.0;
  std::vector<double> grid;
  std::vector<double> per_grid;
  std::size_t depth = 0;
  double drift = 0.0;
  bool monotone_ok = true;
  std::size_t q_stride = 1;
  std::vector<std::string> warnings;
};

struct BoxEstimate {
  double lower = 0.0;  // min s_{1,k}, k in [K/2, K]: the dim_H surrogate
  double upper = 0.0;  // max s_{1,k}: the upper box surrogate
  double lower_drift = 0.0;
  double upper_drift = 0.0;
  std::size_t depth = 0;
};

struct WindowOptions {
  std::size_t q_stride = 0;  // 0 selects ceil(K / 4096)
};

std::size_t default_q_stride(std::size_t depth);

// Throws RangeError unless 1 <= p <= q <= K.
double s_pq(const PrefixTable& table, std::size_t p, std::size_t q);

// Requires K >= 16.
BoxEstimate box_hausdorff(const PrefixTable& table);

// Largest p <= q with log(c_p...c_q) / log(c_1...c_q) > delta (strict).
std::size_t l_q_delta(const PrefixTable& table, std::size_t q, double delta);

// max over sampled q in [K/2, K] of max_{p <= l_q_delta} s_{p,q}. Requires K >= 16.
double h_delta(const PrefixTable& table, double delta, WindowOptions options = {});

// delta_grid strictly decreasing inside (0, 1).
DimEstimate quasi_assouad(const PrefixTable& table, std::span<const double> delta_grid,
                          WindowOptions options = {});

// Same windows with p <= q (1 - eta); eta_grid strictly decreasing inside (0, 1).
DimEstimate quasi_assouad_eta(const PrefixTable& table, std::span<const double> eta_grid,
                              WindowOptions options = {});

// sup_k s_{k+1,k+m} for each m; value at the largest m. max(m_grid) <= K/2.
DimEstimate assouad_llmx(const PrefixTable& table, std::span<const std::size_t> m_grid);

// Root s of prod_i sum_j c_{i,j}^s = 1 over the given levels, by bisection on
// the log of the product. `levels[i]` are the child ratios of one level.
double pressure_root(std::span<const std::vector<double>> levels, double tol = 1e-12,
                     int max_iterations = 200);

struct GeneralOptions {
  std::size_t q_stride = 0;  // 0 selects ceil(K / 4096)
  std::size_t p_stride = 1;
  double tol = 1e-12;
};

// Per-child analogue of quasi_assouad_eta with s_{p,q} the pressure root.
DimEstimate quasi_assouad_general(const MoranSpec& spec, std::span<const double> eta_grid,
                                  std::size_t depth, GeneralOptions options = {});

// g_E(r) = log(n_1...n_k) / -log(c_1...c_k) for c_1...c_k <= r/|J| < c_1...c_{k-1}.
// Throws DepthError when r/|J| is below c_1...c_K.
double scale_function(const PrefixTable& table, double r, double length);
double scale_function_log(const PrefixTable& table, double log_r, double length);

// Geometric radius grid in natural-log units, from log_r_max down to
// log_r_min (inclusive), `per_decade` points per factor of ten.
std::vector<double> log_radius_grid(double log_r_max, double log_r_min, int per_decade);

struct EquivReport {
  std::vector<double> log_r;
  std::vector<double> g_a;
  std::vector<double> g_b;
  std::vector<double> ratio;
  std::size_t tail_from = 0;  // index of the first tail point
  double tail_max_deviation = 0.0;
  double tolerance = 0.05;
  bool equivalent = false;
};

struct EquivOptions {
  double tolerance = 0.05;
  std::size_t tail_points = 10;  // one decade of the grid
};

EquivReport equiv_ratio(const PrefixTable& a, double length_a, const PrefixTable& b,
                        double length_b, std::span<const double> log_r_grid,
                        EquivOptions options = {});

}  // namespace morandim

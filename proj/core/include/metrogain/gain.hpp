#pragma once

#include <optional>
#include <span>
#include <vector>

#include "metrogain/bath.hpp"
#include "metrogain/opttime.hpp"
#include "metrogain/qfi.hpp"

namespace metrogain {

// Optimised GHZ-vs-separable comparison at fixed N and per-round overheads.
struct GainResult {
  double r = 0.0;  // (delta omega_sep / delta omega_ent)^2
  double tau_opt_sep = 0.0;
  double tau_opt_ent = 0.0;
  double f_sep = 0.0;
  double f_ent = 0.0;
  double round_sep = 0.0;  // tau_tilde_sep + tau_opt_sep
  double round_ent = 0.0;
  OptimalTime opt_sep;
  OptimalTime opt_ent;

  // The definition of r, [f_ent / round_ent] / [f_sep / round_sep]; gain()
  // computes r through the expanded product form instead.
  double ratio_of_rates() const { return (f_ent / round_ent) / (f_sep / round_sep); }
};

GainResult gain(const BathModel& model, int n, double tau_tilde_sep, double tau_tilde_ent);

/// N ((1 - x_ent) / (1 - x_sep))^2 with x = tau_tilde / t_c.
double gain_isolated(int n, double x_sep, double x_ent);

/// tau_tilde_ent at which r = 1. Closed forms for the isolated and Markovian
/// probes; bisection otherwise, with NoThresholdError if r - 1 keeps one sign
/// on [0, 1e4 t_c].
double threshold_ent_time(const BathModel& model, int n, double tau_tilde_sep);

struct Precision {
  double delta_omega = 0.0;
  double tau_opt = 0.0;
  double rounds = 0.0;  // nu = T / (tau_tilde + tau_opt)
  // nu < 10: the Cramer-Rao bound is not expected to be attainable.
  bool few_rounds = false;
};

Precision precision_opt(const BathModel& model, int n, ProbeKind kind, double tau_tilde, double total_time);

enum class ScalingKind { Constant, Logarithmic, SquareRoot, Linear };

std::string_view to_string(ScalingKind kind) noexcept;

// N-dependence of the entangled overhead, x_ent(N), relative to x_sep = base.
struct ScalingLaw {
  ScalingKind kind = ScalingKind::Constant;
  double base = 0.0;
};

double scaling_law_eval(const ScalingLaw& law, int n);

inline constexpr int kDefaultSearchMax = 1'000'000;

/// Largest N with r(N) > 1 (floored at 1); nullopt if r > 1 still holds at
/// n_search_max. Infeasible isolated timings count as r <= 1.
std::optional<int> n_cutoff(const BathModel& model, const ScalingLaw& law, double tau_tilde_sep,
                            int n_search_max = kDefaultSearchMax);

struct GainOptimum {
  int n_max = 1;
  double r_max = 0.0;
};

/// argmax_N r(N) over [1, n_search_max], ties to the smaller N.
GainOptimum n_max_gain(const BathModel& model, const ScalingLaw& law, double tau_tilde_sep,
                       int n_search_max = kDefaultSearchMax);

struct MonotonicityViolation {
  std::size_t index = 0;  // pair (index, index + 1)
  double x_lo = 0.0;
  double x_hi = 0.0;
  double r_lo = 0.0;
  double r_hi = 0.0;
};

inline constexpr double kMonotonicityTieTol = 1e-12;

/// Adjacent grid pairs (in x_ent = tau_tilde_ent / t_c) where r does not
/// decrease.
std::vector<MonotonicityViolation> monotonicity_scan(const BathModel& model, int n, double tau_tilde_sep,
                                                     std::span<const double> x_ent_grid);

}  // namespace metrogain

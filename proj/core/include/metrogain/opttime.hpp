#pragma once

#include <array>
#include <complex>
#include <optional>

#include "metrogain/bath.hpp"

namespace metrogain {

// Per-round timing. tau_tilde is everything in a round except sensing.
class TimingConfig {
 public:
  // Throws DomainError on negative times, InfeasibleError if total_time does
  // not exceed tau_prep + tau_meas.
  TimingConfig(double tau_prep, double tau_meas, std::optional<double> total_time = std::nullopt);

  double tau_prep() const noexcept { return tau_prep_; }
  double tau_meas() const noexcept { return tau_meas_; }
  double tau_tilde() const noexcept { return tau_prep_ + tau_meas_; }
  const std::optional<double>& total_time() const noexcept { return total_time_; }

  // nu = T / (tau_tilde + tau) rounds fit into the budget.
  std::optional<double> rounds(double tau) const;

 private:
  double tau_prep_;
  double tau_meas_;
  std::optional<double> total_time_;
};

enum class OptimizerMethod { Isolated, ClosedForm, Numeric };

struct OptimalTime {
  double tau_opt = 0.0;
  // tau^2 e^{-2 n_eff Gamma(tau)} / (tau_tilde + tau) at tau_opt. The QFI rate
  // F / (tau_tilde + tau) is N times this for the separable probe and N^2
  // times this for the GHZ probe.
  double objective = 0.0;
  // stationarity_residual at tau_opt; 0 for the isolated probe, whose optimum
  // sits on the coherence-time cap rather than at a stationary point.
  double residual = 0.0;
  OptimizerMethod method = OptimizerMethod::ClosedForm;
  // More than one sign change of the residual was seen while bracketing.
  bool multimodal = false;
};

inline constexpr double kDefaultOptimizerTol = 1e-10;

/// tau_opt = t_c - tau_tilde. Throws InfeasibleError when tau_tilde >= t_c.
OptimalTime tau_opt_isolated(double t_c, double tau_tilde);

/// Closed form for Gamma = gamma tau; n_eff = 1 for the separable probe,
/// n_eff = N for the GHZ probe.
OptimalTime tau_opt_markov(double gamma, double tau_tilde, double n_eff);

/// Cardano roots of 4 n_eff eta tau^2 (tau_tilde + tau) = tau + 2 tau_tilde,
/// all three, in branch order k = 0, 1, 2 (w = e^{2 pi i k / 3} C).
std::array<std::complex<double>, 3> nonmarkov_cubic_roots(double eta, double tau_tilde, double n_eff);

/// Closed form for Gamma = eta tau^2 via the cubic stationarity condition.
/// Throws BranchError when the selected root is not real and positive.
OptimalTime tau_opt_nonmarkov(double eta, double tau_tilde, double n_eff);

/// Bracketed golden-section maximisation of
/// g(tau) = tau^2 e^{-2 n_eff Gamma(tau)} / (tau_tilde + tau),
/// refined by bisection on the stationarity residual. Any dephasing model;
/// throws UnsupportedModelError for the isolated probe.
OptimalTime tau_opt_numeric(const BathModel& model, double tau_tilde, double n_eff,
                            double tol = kDefaultOptimizerTol);

/// Upper end B of the numeric search interval (0, B]: B = t_c 2^k, the first
/// doubling with g(B) < g(B/2).
double numeric_bracket(const BathModel& model, double tau_tilde, double n_eff);

/// 2 n_eff tau Gamma'(tau) - 1 - tau_tilde / (tau_tilde + tau). Zero at the
/// interior optimum, negative below it, positive above.
double stationarity_residual(const BathModel& model, double tau_tilde, double n_eff, double tau);

/// log g(tau) for tau > 0.
double log_rate_objective(const BathModel& model, double tau_tilde, double n_eff, double tau);

/// Best available optimiser for the model: isolated cap, Markovian or
/// non-Markovian closed form (falling back to the numeric solver if the cubic
/// branch fails), numeric for the Ohmic bath.
OptimalTime optimal_time(const BathModel& model, double tau_tilde, double n_eff);

}  // namespace metrogain

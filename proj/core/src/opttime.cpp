#include "metrogain/opttime.hpp"

#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <string>

#include "metrogain/error.hpp"

namespace metrogain {
namespace {

constexpr double kBranchImagTol = 1e-9;
constexpr int kResidualSamples = 64;

void require_nonnegative_time(double t, const char* name) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw DomainError(std::string(name) + " must be finite and >= 0, got " + std::to_string(t));
  }
}

void require_rate(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be finite and > 0, got " + std::to_string(v));
  }
}

void require_n_eff(double n_eff) {
  if (!(n_eff >= 1.0) || !std::isfinite(n_eff)) {
    throw DomainError("n_eff must be >= 1, got " + std::to_string(n_eff));
  }
}

double rate_objective(double tau, double tau_tilde, double n_eff, double gamma_value) {
  return tau * tau * std::exp(-2.0 * n_eff * gamma_value) / (tau_tilde + tau);
}

// Smallest B = t_c * 2^k with g(B) < g(B/2); the maximum then lies in (0, B).
double expand_bracket(const BathModel& model, double tau_tilde, double n_eff) {
  const double t_c = coherence_time(model);
  const double limit = std::ldexp(t_c, 60);
  double hi = t_c;
  while (!(log_rate_objective(model, tau_tilde, n_eff, hi) <
           log_rate_objective(model, tau_tilde, n_eff, 0.5 * hi))) {
    hi *= 2.0;
    if (hi > limit) {
      throw SolverError("optimal sensing time bracket diverged beyond 2^60 * t_c");
    }
  }
  return hi;
}

int residual_sign_changes(const BathModel& model, double tau_tilde, double n_eff, double hi) {
  const double lo = hi * 1e-12;
  const double step = std::log(hi / lo) / (kResidualSamples - 1);
  int changes = 0;
  double prev = stationarity_residual(model, tau_tilde, n_eff, lo);
  for (int k = 1; k < kResidualSamples; ++k) {
    const double cur = stationarity_residual(model, tau_tilde, n_eff, lo * std::exp(step * k));
    if ((prev < 0.0) != (cur < 0.0)) ++changes;
    prev = cur;
  }
  return changes;
}

}  // namespace

TimingConfig::TimingConfig(double tau_prep, double tau_meas, std::optional<double> total_time)
    : tau_prep_(tau_prep), tau_meas_(tau_meas), total_time_(total_time) {
  require_nonnegative_time(tau_prep, "tau_prep");
  require_nonnegative_time(tau_meas, "tau_meas");
  if (total_time_) {
    if (!std::isfinite(*total_time_)) throw DomainError("total time must be finite");
    if (!(*total_time_ > tau_tilde())) {
      throw InfeasibleError("total time " + std::to_string(*total_time_) +
                            " does not exceed tau_prep + tau_meas = " + std::to_string(tau_tilde()));
    }
  }
}

std::optional<double> TimingConfig::rounds(double tau) const {
  if (!total_time_) return std::nullopt;
  return *total_time_ / (tau_tilde() + tau);
}

double stationarity_residual(const BathModel& model, double tau_tilde, double n_eff, double tau) {
  if (!(tau > 0.0)) throw DomainError("stationarity residual needs tau > 0, got " + std::to_string(tau));
  require_nonnegative_time(tau_tilde, "tau_tilde");
  return 2.0 * n_eff * tau * decay_exponent_derivative(model, tau) - 1.0 - tau_tilde / (tau_tilde + tau);
}

double log_rate_objective(const BathModel& model, double tau_tilde, double n_eff, double tau) {
  return 2.0 * std::log(tau) - 2.0 * n_eff * decay_exponent(model, tau) - std::log(tau_tilde + tau);
}

OptimalTime tau_opt_isolated(double t_c, double tau_tilde) {
  require_rate(t_c, "t_c");
  require_nonnegative_time(tau_tilde, "tau_tilde");
  if (tau_tilde >= t_c) {
    throw InfeasibleError("preparation + readout time " + std::to_string(tau_tilde) +
                          " leaves no sensing time within t_c = " + std::to_string(t_c));
  }
  OptimalTime out;
  out.tau_opt = t_c - tau_tilde;
  out.objective = out.tau_opt * out.tau_opt / t_c;
  out.method = OptimizerMethod::Isolated;
  return out;
}

OptimalTime tau_opt_markov(double gamma, double tau_tilde, double n_eff) {
  require_rate(gamma, "gamma");
  require_nonnegative_time(tau_tilde, "tau_tilde");
  require_n_eff(n_eff);
  // p - h + sqrt((h + p)^2 + 4 h p) with p = 1/(4 n gamma), h = tau_tilde/2,
  // rewritten so that no two terms cancel.
  const double p = 1.0 / (4.0 * n_eff * gamma);
  const double h = 0.5 * tau_tilde;
  const double s = std::sqrt((h + p) * (h + p) + 4.0 * h * p);
  OptimalTime out;
  out.tau_opt = p + p * (p + 6.0 * h) / (s + h);
  out.objective = rate_objective(out.tau_opt, tau_tilde, n_eff, gamma * out.tau_opt);
  out.residual = stationarity_residual(BathModel::markovian(gamma), tau_tilde, n_eff, out.tau_opt);
  out.method = OptimizerMethod::ClosedForm;
  return out;
}

std::array<std::complex<double>, 3> nonmarkov_cubic_roots(double eta, double tau_tilde, double n_eff) {
  require_rate(eta, "eta");
  require_nonnegative_time(tau_tilde, "tau_tilde");
  require_n_eff(n_eff);
  using cd = std::complex<double>;
  const double u = 1.0 / (n_eff * eta);
  const double t = tau_tilde;
  const double t2 = t * t;
  const double d0 = t2 + 0.75 * u;
  const double h = t * (t2 - 45.0 / 8.0 * u);
  // h^2 - d0^3, expanded so the t^6 terms cancel exactly.
  const double disc = u * (-13.5 * t2 * t2 + u * (1917.0 / 64.0 * t2 - 27.0 / 64.0 * u));
  const double d0_cubed = d0 * d0 * d0;

  cd c3;
  if (disc < 0.0) {
    c3 = cd(h, std::sqrt(-disc));
  } else if (h >= 0.0) {
    c3 = cd(h + std::sqrt(disc), 0.0);
  } else {
    // h + sqrt(disc) = d0^3 / (h - sqrt(disc)) without cancellation.
    c3 = cd(d0_cubed / (h - std::sqrt(disc)), 0.0);
  }
  const cd c = std::pow(c3, 1.0 / 3.0);

  std::array<cd, 3> roots{};
  for (int k = 0; k < 3; ++k) {
    const cd w = std::polar(1.0, 2.0 * std::numbers::pi * k / 3.0) * c;
    roots[k] = -(t + w + d0 / w) / 3.0;
  }
  return roots;
}

OptimalTime tau_opt_nonmarkov(double eta, double tau_tilde, double n_eff) {
  const auto roots = nonmarkov_cubic_roots(eta, tau_tilde, n_eff);
  const std::complex<double> root = roots[1];
  if (!(root.real() > 0.0) || std::abs(root.imag()) > kBranchImagTol * root.real()) {
    throw BranchError("cubic branch gave tau = (" + std::to_string(root.real()) + ", " +
                          std::to_string(root.imag()) + "i), not a positive real optimum",
                      roots);
  }

  // Newton polish on 4 n eta tau^2 (tau_tilde + tau) - tau - 2 tau_tilde.
  const double ne4 = 4.0 * n_eff * eta;
  double tau = root.real();
  for (int it = 0; it < 4; ++it) {
    const double f = ne4 * tau * tau * (tau_tilde + tau) - tau - 2.0 * tau_tilde;
    const double df = ne4 * tau * (3.0 * tau + 2.0 * tau_tilde) - 1.0;
    if (!(df > 0.0)) break;
    const double step = f / df;
    tau -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * tau) break;
  }
  if (!(std::abs(tau - root.real()) <= 1e-6 * root.real())) {
    throw BranchError("cubic root polish moved tau from " + std::to_string(root.real()) + " to " +
                          std::to_string(tau),
                      roots);
  }

  const BathModel model = BathModel::non_markovian(eta);
  OptimalTime out;
  out.tau_opt = tau;
  out.objective = rate_objective(tau, tau_tilde, n_eff, eta * tau * tau);
  out.residual = stationarity_residual(model, tau_tilde, n_eff, tau);
  out.method = OptimizerMethod::ClosedForm;
  return out;
}

OptimalTime tau_opt_numeric(const BathModel& model, double tau_tilde, double n_eff, double tol) {
  if (!model.has_dephasing()) {
    throw UnsupportedModelError(
        "the isolated probe has no interior optimum; use tau_opt_isolated with the coherence-time cap");
  }
  require_nonnegative_time(tau_tilde, "tau_tilde");
  require_n_eff(n_eff);
  if (!(tol > 0.0)) throw DomainError("optimizer tolerance must be > 0");

  const auto logg = [&](double tau) { return log_rate_objective(model, tau_tilde, n_eff, tau); };
  const auto resid = [&](double tau) { return stationarity_residual(model, tau_tilde, n_eff, tau); };

  const double bracket_hi = expand_bracket(model, tau_tilde, n_eff);

  // Golden-section on log g down to a relative width well above sqrt(eps),
  // where comparisons of g values stop being meaningful.
  const double golden_tol = std::max(tol, 1e-6);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0;
  double b = bracket_hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = logg(c);
  double fd = logg(d);
  for (int it = 0; it < 400 && (b - a) > golden_tol * 0.5 * (a + b); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = logg(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = logg(d);
    }
  }

  // The residual is negative below the optimum and positive above it.
  double lo = a > 0.0 ? a : 0.5 * c;
  double hi = b;
  for (int it = 0; it < 200 && !(resid(lo) < 0.0); ++it) lo *= 0.5;
  for (int it = 0; it < 200 && !(resid(hi) > 0.0); ++it) hi *= 2.0;
  if (!(resid(lo) < 0.0) || !(resid(hi) > 0.0)) {
    throw SolverError("stationarity residual does not change sign around the golden-section optimum");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double r = resid(mid);
    if (r == 0.0) {
      lo = hi = mid;
      break;
    }
    (r < 0.0 ? lo : hi) = mid;
  }

  OptimalTime out;
  out.tau_opt = 0.5 * (lo + hi);
  out.objective = rate_objective(out.tau_opt, tau_tilde, n_eff, decay_exponent(model, out.tau_opt));
  out.residual = resid(out.tau_opt);
  out.method = OptimizerMethod::Numeric;
  out.multimodal = residual_sign_changes(model, tau_tilde, n_eff, bracket_hi) > 1;
  return out;
}

double numeric_bracket(const BathModel& model, double tau_tilde, double n_eff) {
  if (!model.has_dephasing()) {
    throw UnsupportedModelError("the isolated probe has no interior optimum to bracket");
  }
  require_nonnegative_time(tau_tilde, "tau_tilde");
  require_n_eff(n_eff);
  return expand_bracket(model, tau_tilde, n_eff);
}

OptimalTime optimal_time(const BathModel& model, double tau_tilde, double n_eff) {
  switch (model.kind()) {
    case BathKind::Isolated: return tau_opt_isolated(model.as<IsolatedBath>().t_c, tau_tilde);
    case BathKind::Markovian: return tau_opt_markov(model.as<MarkovianBath>().gamma, tau_tilde, n_eff);
    case BathKind::NonMarkovian:
      try {
        return tau_opt_nonmarkov(model.as<NonMarkovianBath>().eta, tau_tilde, n_eff);
      } catch (const BranchError& e) {
        std::clog << "metrogain: " << e.what() << "; falling back to numeric optimizer\n";
        return tau_opt_numeric(model, tau_tilde, n_eff);
      }
    case BathKind::Ohmic: return tau_opt_numeric(model, tau_tilde, n_eff);
  }
  throw UnsupportedModelError("unknown bath model");
}

}  // namespace metrogain

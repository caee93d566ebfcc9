#include "metrogain/bath.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "metrogain/error.hpp"

namespace metrogain {
namespace {

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw DomainError(std::string(name) + " must be finite and > 0, got " + std::to_string(value));
  }
}

void require_time(double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw DomainError("sensing time must be finite and >= 0, got " + std::to_string(tau));
  }
}

// coth(x) - 1/x, the derivative of log_sinhc.
double log_sinhc_derivative(double x) {
  if (x < 1e-4) return x / 3.0 - x * x * x / 45.0;
  return 1.0 / std::tanh(x) - 1.0 / x;
}

double ohmic_exponent(const OhmicBath& b, double tau) {
  if (tau == 0.0) return 0.0;
  const double wt = b.omega_c * tau;
  const double x = std::numbers::pi * tau / b.beta;
  return 0.5 * b.alpha * std::log1p(wt * wt) + b.alpha * log_sinhc(x);
}

double ohmic_exponent_derivative(const OhmicBath& b, double tau) {
  if (tau == 0.0) return 0.0;
  const double wc2 = b.omega_c * b.omega_c;
  const double rate = std::numbers::pi / b.beta;
  return b.alpha * wc2 * tau / (1.0 + wc2 * tau * tau) +
         b.alpha * rate * log_sinhc_derivative(rate * tau);
}

double ohmic_coherence_time(const OhmicBath& b) {
  // Gamma is increasing, so bisect Gamma(t) - 1 geometrically.
  double lo = 1e-12 * b.beta;
  double hi = 1e12 * b.beta;
  if (ohmic_exponent(b, lo) >= 1.0) return lo;
  if (ohmic_exponent(b, hi) < 1.0) {
    throw DomainError("Ohmic coupling too weak: Gamma stays below 1 up to 1e12*beta");
  }
  while (hi - lo > 1e-12 * hi) {
    const double mid = std::sqrt(lo * hi);
    if (ohmic_exponent(b, mid) < 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::string_view to_string(BathKind kind) noexcept {
  switch (kind) {
    case BathKind::Isolated: return "isolated";
    case BathKind::Markovian: return "markovian";
    case BathKind::NonMarkovian: return "non_markovian";
    case BathKind::Ohmic: return "ohmic";
  }
  return "unknown";
}

BathModel BathModel::isolated(double t_c) {
  require_positive(t_c, "t_c");
  return BathModel(IsolatedBath{t_c});
}

BathModel BathModel::markovian(double gamma) {
  require_positive(gamma, "gamma");
  return BathModel(MarkovianBath{gamma});
}

BathModel BathModel::non_markovian(double eta) {
  require_positive(eta, "eta");
  return BathModel(NonMarkovianBath{eta});
}

BathModel BathModel::ohmic(double alpha, double omega_c, double beta) {
  require_positive(alpha, "alpha");
  require_positive(omega_c, "omega_c");
  require_positive(beta, "beta");
  return BathModel(OhmicBath{alpha, omega_c, beta});
}

double log_sinhc(double x) {
  x = std::abs(x);
  if (x < 1e-4) {
    const double x2 = x * x;
    return x2 / 6.0 - x2 * x2 / 180.0;
  }
  if (x > 20.0) {
    return x + std::log1p(-std::exp(-2.0 * x)) - std::numbers::ln2 - std::log(x);
  }
  return std::log(std::sinh(x) / x);
}

double decay_exponent(const BathModel& model, double tau) {
  require_time(tau);
  switch (model.kind()) {
    case BathKind::Isolated: return 0.0;
    case BathKind::Markovian: return model.as<MarkovianBath>().gamma * tau;
    case BathKind::NonMarkovian: return model.as<NonMarkovianBath>().eta * tau * tau;
    case BathKind::Ohmic: return ohmic_exponent(model.as<OhmicBath>(), tau);
  }
  return 0.0;
}

double decay_exponent_derivative(const BathModel& model, double tau) {
  require_time(tau);
  switch (model.kind()) {
    case BathKind::Isolated: return 0.0;
    case BathKind::Markovian: return model.as<MarkovianBath>().gamma;
    case BathKind::NonMarkovian: return 2.0 * model.as<NonMarkovianBath>().eta * tau;
    case BathKind::Ohmic: return ohmic_exponent_derivative(model.as<OhmicBath>(), tau);
  }
  return 0.0;
}

double coherence_time(const BathModel& model) {
  switch (model.kind()) {
    case BathKind::Isolated: return model.as<IsolatedBath>().t_c;
    case BathKind::Markovian: return 1.0 / model.as<MarkovianBath>().gamma;
    case BathKind::NonMarkovian: return 1.0 / std::sqrt(model.as<NonMarkovianBath>().eta);
    case BathKind::Ohmic: return ohmic_coherence_time(model.as<OhmicBath>());
  }
  return 0.0;
}

LimitRates ohmic_limit_rates(double alpha, double beta, double omega_c) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw DomainError("alpha must be finite and >= 0");
  }
  require_positive(beta, "beta");
  require_positive(omega_c, "omega_c");
  return {alpha * std::numbers::pi / beta, 0.5 * alpha * omega_c * omega_c};
}

}  // namespace metrogain

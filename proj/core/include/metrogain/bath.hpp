#pragma once

#include <string_view>
#include <variant>

namespace metrogain {

// Dephasing laws for a single probe spin. Times are in seconds, rates in 1/s,
// and the Ohmic bath uses hbar = k_B = 1 so beta is a time.
struct IsolatedBath {
  double t_c;  // per-round cap on prepare + sense + readout
  friend bool operator==(const IsolatedBath&, const IsolatedBath&) = default;
};

struct MarkovianBath {
  double gamma;  // Gamma(tau) = gamma * tau
  friend bool operator==(const MarkovianBath&, const MarkovianBath&) = default;
};

struct NonMarkovianBath {
  double eta;  // Gamma(tau) = eta * tau^2
  friend bool operator==(const NonMarkovianBath&, const NonMarkovianBath&) = default;
};

struct OhmicBath {
  double alpha;    // dimensionless coupling
  double omega_c;  // spectral cutoff, rad/s
  double beta;     // inverse temperature
  friend bool operator==(const OhmicBath&, const OhmicBath&) = default;
};

enum class BathKind { Isolated, Markovian, NonMarkovian, Ohmic };

std::string_view to_string(BathKind kind) noexcept;

class BathModel {
 public:
  using Params = std::variant<IsolatedBath, MarkovianBath, NonMarkovianBath, OhmicBath>;

  // Factories validate: every parameter the kind uses must be finite and > 0.
  static BathModel isolated(double t_c);
  static BathModel markovian(double gamma);
  static BathModel non_markovian(double eta);
  static BathModel ohmic(double alpha, double omega_c, double beta);

  BathKind kind() const noexcept { return static_cast<BathKind>(params_.index()); }
  const Params& params() const noexcept { return params_; }

  template <typename T>
  const T& as() const {
    return std::get<T>(params_);
  }

  bool has_dephasing() const noexcept { return kind() != BathKind::Isolated; }

  friend bool operator==(const BathModel&, const BathModel&) = default;

 private:
  explicit BathModel(Params p) : params_(p) {}
  Params params_;
};

/// Decay exponent Gamma(tau) of the single-spin coherence,
/// rho_01 -> e^{-Gamma(tau)} rho_01. Throws DomainError for tau < 0.
double decay_exponent(const BathModel& model, double tau);

/// dGamma/dtau. The Ohmic derivative at tau = 0 is its analytic limit, 0.
double decay_exponent_derivative(const BathModel& model, double tau);

/// t_c: the configured cap (isolated), 1/gamma, 1/sqrt(eta), or for the Ohmic
/// bath the first time at which Gamma reaches 1.
double coherence_time(const BathModel& model);

struct LimitRates {
  double gamma;  // alpha pi / beta, long-time / high-temperature limit
  double eta;    // alpha omega_c^2 / 2, short-time / low-cutoff limit
};

LimitRates ohmic_limit_rates(double alpha, double beta, double omega_c);

/// ln(sinh(x)/x) for x >= 0, stable from x = 0 up to x ~ 1e300.
double log_sinhc(double x);

}  // namespace metrogain

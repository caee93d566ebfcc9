#include "metrogain/gain.hpp"

#include <cmath>
#include <string>

#include "metrogain/error.hpp"

namespace metrogain {
namespace {

constexpr double kThresholdSpan = 1e4;  // bisection bracket in units of t_c
constexpr int kPersistAfterPeak = 10;

void require_n(int n) {
  if (n < 1) throw DomainError("particle count must be >= 1, got " + std::to_string(n));
}

void require_overhead(double t, const char* name) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw DomainError(std::string(name) + " must be finite and >= 0, got " + std::to_string(t));
  }
}

// r(N) for a scaling law, with infeasible isolated timings reported as 0.
double scaled_gain(const BathModel& model, const ScalingLaw& law, double tau_tilde_sep, double t_c, int n) {
  try {
    return gain(model, n, tau_tilde_sep, scaling_law_eval(law, n) * t_c).r;
  } catch (const InfeasibleError&) {
    return 0.0;
  }
}

struct ScanSummary {
  int last_above = 0;  // largest N seen with r > 1, 0 if none
  int best_n = 1;
  double best_r = 0.0;
  bool above_at_end = false;  // r > 1 at n_search_max
};

// Linear scan in N, stopping once r <= 1 has held for kPersistAfterPeak
// consecutive N past the running maximum.
ScanSummary scan_particle_numbers(const BathModel& model, const ScalingLaw& law, double tau_tilde_sep,
                                  int n_search_max) {
  require_overhead(tau_tilde_sep, "tau_tilde_sep");
  const double t_c = coherence_time(model);
  ScanSummary s;
  int below_run = 0;
  for (int n = 1; n <= n_search_max; ++n) {
    const double r = scaled_gain(model, law, tau_tilde_sep, t_c, n);
    if (r > s.best_r) {
      s.best_r = r;
      s.best_n = n;
    }
    if (r > 1.0) {
      s.last_above = n;
      below_run = 0;
    } else {
      ++below_run;
    }
    if (n == n_search_max) s.above_at_end = r > 1.0;
    if (below_run >= kPersistAfterPeak && n > s.best_n) break;
  }
  return s;
}

double bisect_threshold(const BathModel& model, int n, double tau_tilde_sep) {
  const double t_c = coherence_time(model);
  const auto excess = [&](double tau_tilde_ent) { return gain(model, n, tau_tilde_sep, tau_tilde_ent).r - 1.0; };

  const double at_zero = excess(0.0);
  if (at_zero == 0.0) return 0.0;
  if (at_zero < 0.0) {
    throw NoThresholdError("r < 1 already at tau_tilde_ent = 0; the GHZ probe never wins",
                           NoThresholdError::Side::AlwaysBelow);
  }
  double lo = 0.0;
  double hi = t_c;
  while (excess(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > kThresholdSpan * t_c) {
      if (excess(kThresholdSpan * t_c) > 0.0) {
        throw NoThresholdError("r > 1 for every tau_tilde_ent up to 1e4 t_c",
                               NoThresholdError::Side::AlwaysAbove);
      }
      hi = kThresholdSpan * t_c;
      break;
    }
  }
  for (int it = 0; it < 400 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double e = excess(mid);
    if (e == 0.0) return mid;
    (e > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

GainResult gain(const BathModel& model, int n, double tau_tilde_sep, double tau_tilde_ent) {
  require_n(n);
  require_overhead(tau_tilde_sep, "tau_tilde_sep");
  require_overhead(tau_tilde_ent, "tau_tilde_ent");
  const double nn = static_cast<double>(n);

  GainResult g;
  g.opt_sep = optimal_time(model, tau_tilde_sep, 1.0);
  g.opt_ent = optimal_time(model, tau_tilde_ent, nn);
  g.tau_opt_sep = g.opt_sep.tau_opt;
  g.tau_opt_ent = g.opt_ent.tau_opt;
  g.round_sep = tau_tilde_sep + g.tau_opt_sep;
  g.round_ent = tau_tilde_ent + g.tau_opt_ent;
  g.f_sep = qfi_separable(n, g.tau_opt_sep, model);
  g.f_ent = qfi_ghz(n, g.tau_opt_ent, model);

  const double time_ratio = g.tau_opt_ent / g.tau_opt_sep;
  g.r = nn * (g.round_sep / g.round_ent) * time_ratio * time_ratio *
        std::exp(-2.0 * nn * decay_exponent(model, g.tau_opt_ent) + 2.0 * decay_exponent(model, g.tau_opt_sep));
  return g;
}

double gain_isolated(int n, double x_sep, double x_ent) {
  require_n(n);
  require_overhead(x_sep, "x_sep");
  require_overhead(x_ent, "x_ent");
  if (x_sep >= 1.0 || x_ent >= 1.0) {
    throw InfeasibleError("tau_tilde / t_c must be < 1 for the isolated probe");
  }
  const double ratio = (1.0 - x_ent) / (1.0 - x_sep);
  return n * ratio * ratio;
}

double threshold_ent_time(const BathModel& model, int n, double tau_tilde_sep) {
  require_n(n);
  require_overhead(tau_tilde_sep, "tau_tilde_sep");
  switch (model.kind()) {
    case BathKind::Isolated: {
      const double t_c = model.as<IsolatedBath>().t_c;
      if (tau_tilde_sep >= t_c) {
        throw InfeasibleError("tau_tilde_sep " + std::to_string(tau_tilde_sep) + " >= t_c");
      }
      return t_c * (1.0 - (1.0 - tau_tilde_sep / t_c) / std::sqrt(static_cast<double>(n)));
    }
    case BathKind::Markovian: return tau_tilde_sep / n;
    case BathKind::NonMarkovian:
    case BathKind::Ohmic: return bisect_threshold(model, n, tau_tilde_sep);
  }
  throw UnsupportedModelError("unknown bath model");
}

Precision precision_opt(const BathModel& model, int n, ProbeKind kind, double tau_tilde, double total_time) {
  require_n(n);
  if (!(total_time > 0.0) || !std::isfinite(total_time)) {
    throw DomainError("total time must be finite and > 0, got " + std::to_string(total_time));
  }
  const double n_eff = kind == ProbeKind::Ghz ? static_cast<double>(n) : 1.0;
  const OptimalTime opt = optimal_time(model, tau_tilde, n_eff);
  const double round = tau_tilde + opt.tau_opt;
  const double f = qfi_closed_form(kind, n, opt.tau_opt, model);

  Precision p;
  p.tau_opt = opt.tau_opt;
  p.delta_omega = 1.0 / std::sqrt(total_time * f / round);
  p.rounds = total_time / round;
  p.few_rounds = p.rounds < 10.0;
  return p;
}

std::string_view to_string(ScalingKind kind) noexcept {
  switch (kind) {
    case ScalingKind::Constant: return "constant";
    case ScalingKind::Logarithmic: return "log";
    case ScalingKind::SquareRoot: return "sqrt";
    case ScalingKind::Linear: return "linear";
  }
  return "unknown";
}

double scaling_law_eval(const ScalingLaw& law, int n) {
  require_n(n);
  const double nn = static_cast<double>(n);
  switch (law.kind) {
    case ScalingKind::Constant: return law.base;
    case ScalingKind::Logarithmic: return (1.0 + std::log2(nn)) * law.base;
    case ScalingKind::SquareRoot: return std::sqrt(nn) * law.base;
    case ScalingKind::Linear: return nn * law.base;
  }
  return law.base;
}

std::optional<int> n_cutoff(const BathModel& model, const ScalingLaw& law, double tau_tilde_sep,
                            int n_search_max) {
  if (n_search_max < 2) throw DomainError("n_search_max must be >= 2");
  const ScanSummary s = scan_particle_numbers(model, law, tau_tilde_sep, n_search_max);
  if (s.above_at_end) return std::nullopt;
  return std::max(s.last_above, 1);
}

GainOptimum n_max_gain(const BathModel& model, const ScalingLaw& law, double tau_tilde_sep, int n_search_max) {
  if (n_search_max < 1) throw DomainError("n_search_max must be >= 1");
  const ScanSummary s = scan_particle_numbers(model, law, tau_tilde_sep, n_search_max);
  return {s.best_n, s.best_r};
}

std::vector<MonotonicityViolation> monotonicity_scan(const BathModel& model, int n, double tau_tilde_sep,
                                                     std::span<const double> x_ent_grid) {
  if (x_ent_grid.size() < 2) throw DomainError("monotonicity grid needs at least 2 points");
  for (std::size_t i = 0; i + 1 < x_ent_grid.size(); ++i) {
    if (!(x_ent_grid[i] < x_ent_grid[i + 1]) || !(x_ent_grid[i] >= 0.0)) {
      throw DomainError("monotonicity grid must be non-negative and strictly increasing");
    }
  }
  const double t_c = coherence_time(model);
  std::vector<double> r(x_ent_grid.size());
  for (std::size_t i = 0; i < x_ent_grid.size(); ++i) {
    r[i] = gain(model, n, tau_tilde_sep, x_ent_grid[i] * t_c).r;
  }
  std::vector<MonotonicityViolation> out;
  for (std::size_t i = 0; i + 1 < r.size(); ++i) {
    if (r[i + 1] - r[i] > kMonotonicityTieTol * std::abs(r[i])) {
      out.push_back({i, x_ent_grid[i], x_ent_grid[i + 1], r[i], r[i + 1]});
    }
  }
  return out;
}

}  // namespace metrogain

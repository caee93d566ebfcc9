#include <cmath>
#include <vector>

#include "doctest.h"
#include "metrogain/error.hpp"
#include "metrogain/opttime.hpp"

using namespace metrogain;

namespace {

double rate(const BathModel& m, double tt, double n_eff, double tau) {
  return std::exp(log_rate_objective(m, tt, n_eff, tau));
}

// tau_tilde values 0, 0.1 t_c, t_c.
std::vector<double> overheads(const BathModel& m) {
  const double tc = coherence_time(m);
  return {0.0, 0.1 * tc, tc};
}

}  // namespace

TEST_CASE("isolated optimum sits on the coherence cap") {
  CHECK(tau_opt_isolated(1.0, 0.2).tau_opt == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(tau_opt_isolated(1.0, 0.0).tau_opt == 1.0);
  CHECK_THROWS_AS(tau_opt_isolated(1.0, 1.0), InfeasibleError);
  CHECK_THROWS_AS(tau_opt_isolated(1.0, 1.2), InfeasibleError);
}

TEST_CASE("timing config") {
  const TimingConfig t(0.1, 0.05, 10.0);
  CHECK(t.tau_tilde() == doctest::Approx(0.15));
  CHECK(*t.rounds(0.85) == doctest::Approx(10.0));
  CHECK_FALSE(TimingConfig(0.1, 0.1).rounds(1.0).has_value());
  CHECK_THROWS_AS(TimingConfig(-0.1, 0.0), DomainError);
  CHECK_THROWS_AS(TimingConfig(0.1, 0.1, 0.2), InfeasibleError);
}

TEST_CASE("Markovian closed form") {
  CHECK(tau_opt_markov(1.0, 0.0, 1.0).tau_opt == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(tau_opt_markov(1.0, 0.0, 10.0).tau_opt == doctest::Approx(0.05).epsilon(1e-15));
  const OptimalTime o = tau_opt_markov(1.0, 0.3, 4.0);
  CHECK(std::abs(stationarity_residual(BathModel::markovian(1.0), 0.3, 4.0, o.tau_opt)) < 1e-12);
  CHECK_THROWS_AS(tau_opt_markov(0.0, 0.1, 1.0), DomainError);

  // Direct transcription of the textbook expression, checked where it is well conditioned.
  for (double tt : {0.0, 0.05, 0.3, 2.0}) {
    for (double n : {1.0, 3.0, 40.0}) {
      const double g = 1.7;
      const double a = 1.0 / (4.0 * n * g);
      const double direct = a + std::sqrt((tt / 2 + a) * (tt / 2 + a) + tt / (2 * n * g)) - tt / 2;
      CHECK(tau_opt_markov(g, tt, n).tau_opt == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("Markovian GHZ optimum shrinks with N") {
  double prev = tau_opt_markov(1.0, 0.2, 1.0).tau_opt;
  for (double n : {10.0, 1e3, 1e6}) {
    const double t = tau_opt_markov(1.0, 0.2, n).tau_opt;
    CHECK(t < prev);
    prev = t;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("non-Markovian closed form") {
  CHECK(tau_opt_nonmarkov(1.0, 0.0, 1.0).tau_opt == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(tau_opt_nonmarkov(1.0, 0.0, 4.0).tau_opt == doctest::Approx(0.25).epsilon(1e-14));

  const OptimalTime closed = tau_opt_nonmarkov(2.0, 0.4, 8.0);
  const OptimalTime numeric = tau_opt_numeric(BathModel::non_markovian(2.0), 0.4, 8.0, 1e-10);
  CHECK(closed.tau_opt == doctest::Approx(numeric.tau_opt).epsilon(1e-8));
  CHECK(std::abs(closed.residual) < 1e-10);
}

TEST_CASE("cubic branch: selected root is real and positive, the others are not") {
  for (double eta : {0.01, 1.0, 300.0}) {
    for (double x : {0.0, 0.01, 0.5, 2.0, 40.0}) {
      for (double n : {1.0, 7.0, 1e4}) {
        const double tt = x / std::sqrt(eta);
        const auto roots = nonmarkov_cubic_roots(eta, tt, n);
        CHECK(roots[1].real() > 0.0);
        CHECK(std::abs(roots[1].imag()) <= 1e-9 * roots[1].real());
        for (int k : {0, 2}) {
          const bool positive_real = roots[k].real() > 1e-9 * roots[1].real() &&
                                     std::abs(roots[k].imag()) < 1e-9 * roots[k].real();
          CHECK_FALSE(positive_real);
        }
      }
    }
  }
}

TEST_CASE("numeric optimizer") {
  const OptimalTime m = tau_opt_numeric(BathModel::markovian(1.0), 0.3, 4.0, 1e-8);
  CHECK(m.tau_opt == doctest::Approx(tau_opt_markov(1.0, 0.3, 4.0).tau_opt).epsilon(1e-8));
  CHECK(m.method == OptimizerMethod::Numeric);

  CHECK(std::abs(tau_opt_numeric(BathModel::non_markovian(1.0), 0.0, 1.0, 1e-8).tau_opt - 0.5) <= 5e-9);

  const BathModel ohm = BathModel::ohmic(0.05, 20.0, 0.5);
  const OptimalTime o = tau_opt_numeric(ohm, 0.1, 3.0);
  CHECK(std::abs(stationarity_residual(ohm, 0.1, 3.0, o.tau_opt)) < 1e-8);
  CHECK_FALSE(o.multimodal);

  CHECK_THROWS_AS(tau_opt_numeric(BathModel::isolated(1.0), 0.1, 1.0), UnsupportedModelError);
  CHECK_THROWS_AS(tau_opt_numeric(ohm, 0.1, 1.0, 0.0), DomainError);
}

TEST_CASE("stationarity residual") {
  CHECK(stationarity_residual(BathModel::markovian(1.0), 0.0, 1.0, 0.5) == doctest::Approx(0.0));
  CHECK(stationarity_residual(BathModel::non_markovian(1.0), 0.0, 1.0, 0.25) == doctest::Approx(-0.75));
  CHECK_THROWS_AS(stationarity_residual(BathModel::markovian(1.0), 0.0, 1.0, 0.0), DomainError);

  for (const BathModel& m : {BathModel::markovian(2.0), BathModel::non_markovian(0.5), BathModel::ohmic(0.05, 20.0, 0.5)}) {
    const double hi = numeric_bracket(m, 0.1, 5.0);
    CHECK(stationarity_residual(m, 0.1, 5.0, hi * 1e-9) < 0.0);
    CHECK(stationarity_residual(m, 0.1, 5.0, hi) > 0.0);
  }
}

TEST_CASE("optimum is a stationary interior maximum for every dephasing model") {
  const std::vector<BathModel> models = {BathModel::markovian(0.7), BathModel::non_markovian(3.0),
                                         BathModel::ohmic(0.05, 20.0, 0.5), BathModel::ohmic(0.2, 3.0, 2.0)};
  for (const auto& m : models) {
    for (double tt : overheads(m)) {
      for (double n : {1.0, 10.0}) {
        const OptimalTime o = optimal_time(m, tt, n);
        CAPTURE(to_string(m.kind()));
        CAPTURE(tt);
        CHECK(std::abs(o.residual) <= 1e-10);
        const double best = rate(m, tt, n, o.tau_opt);
        CHECK(rate(m, tt, n, o.tau_opt * (1 + 1e-4)) < best);
        CHECK(rate(m, tt, n, o.tau_opt * (1 - 1e-4)) < best);
      }
    }
  }
}

TEST_CASE("closed forms agree with the numeric optimizer on a 5x5x3 grid") {
  for (double rate_param : {0.1, 0.5, 1.0, 4.0, 20.0}) {
    for (double x : {0.0, 0.05, 0.3, 1.0, 5.0}) {
      for (double n : {1.0, 10.0, 1000.0}) {
        const BathModel markov = BathModel::markovian(rate_param);
        const double tt_m = x * coherence_time(markov);
        CHECK(tau_opt_markov(rate_param, tt_m, n).tau_opt ==
              doctest::Approx(tau_opt_numeric(markov, tt_m, n).tau_opt).epsilon(1e-8));

        const BathModel nm = BathModel::non_markovian(rate_param);
        const double tt_n = x * coherence_time(nm);
        CHECK(tau_opt_nonmarkov(rate_param, tt_n, n).tau_opt ==
              doctest::Approx(tau_opt_numeric(nm, tt_n, n).tau_opt).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("dispatcher picks the method by model") {
  CHECK(optimal_time(BathModel::isolated(1.0), 0.2, 5.0).method == OptimizerMethod::Isolated);
  CHECK(optimal_time(BathModel::markovian(1.0), 0.2, 5.0).method == OptimizerMethod::ClosedForm);
  CHECK(optimal_time(BathModel::non_markovian(1.0), 0.2, 5.0).method == OptimizerMethod::ClosedForm);
  CHECK(optimal_time(BathModel::ohmic(0.1, 5.0, 1.0), 0.2, 5.0).method == OptimizerMethod::Numeric);
}

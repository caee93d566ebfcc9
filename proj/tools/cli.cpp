#include "cli.hpp"

#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "metrogain/bath.hpp"
#include "metrogain/error.hpp"
#include "metrogain/format.hpp"
#include "metrogain/gain.hpp"
#include "metrogain/opttime.hpp"
#include "metrogain/qfi.hpp"
#include "metrogain/sweep.hpp"

namespace metrogain::cli {
namespace {

using Value = std::variant<std::monostate, double, long long, bool, std::string>;

// Ordered key/value report rendered either as key=value lines or as one JSON object.
class Report {
 public:
  void add(std::string key, Value v) { entries_.emplace_back(std::move(key), std::move(v)); }

  void render(std::ostream& out, bool as_json) const {
    if (as_json) {
      nlohmann::ordered_json j = nlohmann::ordered_json::object();
      for (const auto& [key, v] : entries_) {
        std::visit(
            [&](const auto& x) {
              using T = std::decay_t<decltype(x)>;
              if constexpr (std::is_same_v<T, std::monostate>) {
                j[key] = nullptr;
              } else if constexpr (std::is_same_v<T, double>) {
                j[key] = printed_value(x);
              } else {
                j[key] = x;
              }
            },
            v);
      }
      out << j.dump() << '\n';
      return;
    }
    for (const auto& [key, v] : entries_) {
      out << key << '=';
      std::visit(
          [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
              out << "none";
            } else if constexpr (std::is_same_v<T, double>) {
              out << format_number(x);
            } else if constexpr (std::is_same_v<T, bool>) {
              out << (x ? "true" : "false");
            } else {
              out << x;
            }
          },
          v);
      out << '\n';
    }
  }

 private:
  std::vector<std::pair<std::string, Value>> entries_;
};

struct ModelOptions {
  std::string kind;
  std::optional<double> t_c, gamma, eta, alpha, omega_c, beta;

  void attach(CLI::App* cmd) {
    cmd->add_option("--model", kind, "Bath model: isolated, markovian, non-markovian, ohmic")
        ->required()
        ->check(CLI::IsMember({"isolated", "markovian", "non-markovian", "non_markovian", "ohmic"}));
    cmd->add_option("--tc", t_c, "Coherence time cap (isolated)");
    cmd->add_option("--gamma", gamma, "Markovian dephasing rate");
    cmd->add_option("--eta", eta, "Non-Markovian coefficient");
    cmd->add_option("--alpha", alpha, "Ohmic coupling");
    cmd->add_option("--omega-c", omega_c, "Ohmic cutoff frequency");
    cmd->add_option("--beta", beta, "Inverse bath temperature");
  }

  BathModel build() const {
    const auto need = [&](const std::optional<double>& v, const char* flag) {
      if (!v) throw ValidationError(std::string("--model ") + kind + " requires " + flag);
      return *v;
    };
    try {
      if (kind == "isolated") return BathModel::isolated(need(t_c, "--tc"));
      if (kind == "markovian") return BathModel::markovian(need(gamma, "--gamma"));
      if (kind == "ohmic") {
        return BathModel::ohmic(need(alpha, "--alpha"), need(omega_c, "--omega-c"), need(beta, "--beta"));
      }
      return BathModel::non_markovian(need(eta, "--eta"));
    } catch (const DomainError& e) {
      throw ValidationError(e.what());
    }
  }
};

std::string_view method_name(OptimizerMethod m) {
  switch (m) {
    case OptimizerMethod::Isolated: return "isolated-cap";
    case OptimizerMethod::ClosedForm: return "closed-form";
    case OptimizerMethod::Numeric: return "numeric";
  }
  return "unknown";
}

ScalingKind parse_law(const std::string& s) {
  if (s == "constant") return ScalingKind::Constant;
  if (s == "log") return ScalingKind::Logarithmic;
  if (s == "sqrt") return ScalingKind::SquareRoot;
  return ScalingKind::Linear;
}

void add_optimum(Report& rep, const std::string& suffix, const OptimalTime& opt) {
  rep.add("tau_opt_" + suffix, opt.tau_opt);
  rep.add("objective_" + suffix, opt.objective);
  rep.add("residual_" + suffix, opt.residual);
  rep.add("method_" + suffix, std::string(method_name(opt.method)));
  if (opt.multimodal) rep.add("multimodal_" + suffix, true);
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"metrogain: GHZ vs separable frequency estimation with preparation and readout overheads"};
  app.require_subcommand(1);
  app.fallthrough();
  bool as_json = false;
  app.add_flag("--json", as_json, "Print a single JSON document instead of key=value lines");

  // bath
  ModelOptions bath_model;
  std::optional<double> bath_tau;
  auto* bath_cmd = app.add_subcommand("bath", "Decay exponent, its derivative, coherence time, limit rates");
  bath_model.attach(bath_cmd);
  bath_cmd->add_option("--tau", bath_tau, "Sensing time at which to evaluate Gamma");

  // qfi
  ModelOptions qfi_model;
  int qfi_n = 1;
  double qfi_tau = 0.0;
  double qfi_omega = 0.0;
  bool qfi_brute = false;
  auto* qfi_cmd = app.add_subcommand("qfi", "Quantum Fisher information of both probes");
  qfi_model.attach(qfi_cmd);
  qfi_cmd->add_option("--n", qfi_n, "Particle number")->required()->check(CLI::PositiveNumber);
  qfi_cmd->add_option("--tau", qfi_tau, "Sensing time")->required();
  qfi_cmd->add_option("--omega", qfi_omega, "Frequency used for the brute-force state");
  qfi_cmd->add_flag("--brute-force", qfi_brute, "Also evaluate the eigendecomposition reference (n <= 12)");

  // tau-opt
  ModelOptions opt_model;
  int opt_n = 1;
  double opt_ttilde = 0.0;
  std::optional<double> opt_ttilde_sep, opt_ttilde_ent, opt_total;
  auto* opt_cmd = app.add_subcommand("tau-opt", "Optimal sensing times for both probes");
  opt_model.attach(opt_cmd);
  opt_cmd->add_option("--n", opt_n, "Particle number")->check(CLI::PositiveNumber);
  opt_cmd->add_option("--ttilde", opt_ttilde, "Preparation + readout time for both probes");
  opt_cmd->add_option("--ttilde-sep", opt_ttilde_sep, "Override for the separable probe");
  opt_cmd->add_option("--ttilde-ent", opt_ttilde_ent, "Override for the GHZ probe");
  opt_cmd->add_option("--total-time", opt_total, "Total budget T; also prints optimal precisions");

  // gain
  ModelOptions gain_model;
  int gain_n = 1;
  double gain_tts = 0.0;
  double gain_tte = 0.0;
  auto* gain_cmd = app.add_subcommand("gain", "Metrological gain r and its ingredients");
  gain_model.attach(gain_cmd);
  gain_cmd->add_option("--n", gain_n, "Particle number")->required()->check(CLI::PositiveNumber);
  gain_cmd->add_option("--ttilde-sep", gain_tts, "Separable preparation + readout time");
  gain_cmd->add_option("--ttilde-ent", gain_tte, "GHZ preparation + readout time");

  // threshold
  ModelOptions thr_model;
  int thr_n = 2;
  double thr_tts = 0.0;
  auto* thr_cmd = app.add_subcommand("threshold", "GHZ overhead at which r = 1");
  thr_model.attach(thr_cmd);
  thr_cmd->add_option("--n", thr_n, "Particle number")->required()->check(CLI::PositiveNumber);
  thr_cmd->add_option("--ttilde-sep", thr_tts, "Separable preparation + readout time");

  // cutoff
  ModelOptions cut_model;
  std::string cut_law = "linear";
  double cut_base = 0.0;
  std::optional<double> cut_tts;
  int cut_max = kDefaultSearchMax;
  auto* cut_cmd = app.add_subcommand("cutoff", "N_cutoff and N_max under a scaling law for the GHZ overhead");
  cut_model.attach(cut_cmd);
  cut_cmd->add_option("--law", cut_law, "constant, log, sqrt or linear")
      ->check(CLI::IsMember({"constant", "log", "sqrt", "linear"}));
  cut_cmd->add_option("--base", cut_base, "x_sep = tau_tilde_sep / t_c that the law scales")->required();
  cut_cmd->add_option("--ttilde-sep", cut_tts, "Separable overhead (default base * t_c)");
  cut_cmd->add_option("--n-search-max", cut_max, "Largest N scanned")->check(CLI::Range(2, 1'000'000'000));

  // sweep
  std::string sweep_config;
  std::optional<std::string> sweep_output, sweep_format;
  unsigned sweep_threads = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate r on a grid from a JSON config");
  sweep_cmd->add_option("--config", sweep_config, "Sweep config file")->required();
  sweep_cmd->add_option("--output", sweep_output, "Override output.path ('-' for stdout)");
  sweep_cmd->add_option("--format", sweep_format, "Override output.format")->check(CLI::IsMember({"csv", "json"}));
  sweep_cmd->add_option("--threads", sweep_threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    Report rep;
    if (*bath_cmd) {
      const BathModel m = bath_model.build();
      rep.add("model", std::string(to_string(m.kind())));
      rep.add("t_c", coherence_time(m));
      if (bath_tau) {
        rep.add("tau", *bath_tau);
        rep.add("gamma_value", decay_exponent(m, *bath_tau));
        rep.add("gamma_derivative", decay_exponent_derivative(m, *bath_tau));
      }
      if (m.kind() == BathKind::Ohmic) {
        const auto& p = m.as<OhmicBath>();
        const LimitRates lim = ohmic_limit_rates(p.alpha, p.beta, p.omega_c);
        rep.add("markovian_gamma", lim.gamma);
        rep.add("non_markovian_eta", lim.eta);
      }
    } else if (*qfi_cmd) {
      const BathModel m = qfi_model.build();
      rep.add("n", static_cast<long long>(qfi_n));
      rep.add("tau", qfi_tau);
      rep.add("f_sep", qfi_separable(qfi_n, qfi_tau, m));
      rep.add("f_ent", qfi_ghz(qfi_n, qfi_tau, m));
      if (qfi_brute) {
        rep.add("f_sep_brute_force", qfi_brute_force({qfi_n, ProbeKind::Separable}, m, qfi_tau, qfi_omega));
        rep.add("f_ent_brute_force", qfi_brute_force({qfi_n, ProbeKind::Ghz}, m, qfi_tau, qfi_omega));
      }
    } else if (*opt_cmd) {
      const BathModel m = opt_model.build();
      const double tts = opt_ttilde_sep.value_or(opt_ttilde);
      const double tte = opt_ttilde_ent.value_or(opt_ttilde);
      const OptimalTime sep = optimal_time(m, tts, 1.0);
      const OptimalTime ent = optimal_time(m, tte, static_cast<double>(opt_n));
      rep.add("n", static_cast<long long>(opt_n));
      add_optimum(rep, "sep", sep);
      add_optimum(rep, "ent", ent);
      if (opt_total) {
        const Precision ps = precision_opt(m, opt_n, ProbeKind::Separable, tts, *opt_total);
        const Precision pe = precision_opt(m, opt_n, ProbeKind::Ghz, tte, *opt_total);
        rep.add("delta_omega_sep", ps.delta_omega);
        rep.add("delta_omega_ent", pe.delta_omega);
        rep.add("rounds_sep", ps.rounds);
        rep.add("rounds_ent", pe.rounds);
        if (ps.few_rounds || pe.few_rounds) rep.add("warning", std::string("fewer than 10 rounds fit in T"));
      }
    } else if (*gain_cmd) {
      const BathModel m = gain_model.build();
      const GainResult g = gain(m, gain_n, gain_tts, gain_tte);
      rep.add("r", g.r);
      rep.add("tau_opt_sep", g.tau_opt_sep);
      rep.add("tau_opt_ent", g.tau_opt_ent);
      rep.add("f_sep", g.f_sep);
      rep.add("f_ent", g.f_ent);
      rep.add("round_sep", g.round_sep);
      rep.add("round_ent", g.round_ent);
    } else if (*thr_cmd) {
      const BathModel m = thr_model.build();
      const double theta = threshold_ent_time(m, thr_n, thr_tts);
      rep.add("ttilde_ent_threshold", theta);
      rep.add("x_ent_threshold", theta / coherence_time(m));
    } else if (*cut_cmd) {
      const BathModel m = cut_model.build();
      const ScalingLaw law{parse_law(cut_law), cut_base};
      const double tts = cut_tts.value_or(cut_base * coherence_time(m));
      const std::optional<int> cutoff = n_cutoff(m, law, tts, cut_max);
      const GainOptimum best = n_max_gain(m, law, tts, cut_max);
      rep.add("law", std::string(to_string(law.kind)));
      rep.add("n_cutoff", cutoff ? Value(static_cast<long long>(*cutoff)) : Value(std::monostate{}));
      rep.add("n_max", static_cast<long long>(best.n_max));
      rep.add("r_max", best.r_max);
    } else if (*sweep_cmd) {
      SweepConfig cfg = load_sweep_config(sweep_config);
      if (sweep_output) {
        cfg.output.path = *sweep_output == "-" ? std::nullopt : std::optional<std::filesystem::path>(*sweep_output);
      }
      if (sweep_format) cfg.output.format = *sweep_format == "json" ? OutputFormat::Json : OutputFormat::Csv;
      const std::vector<SweepRow> rows = run_sweep(cfg, sweep_threads);
      if (!cfg.output.path) {
        cfg.output.format == OutputFormat::Csv ? write_csv(out, rows) : write_json(out, rows);
        return kOk;
      }
      write_sweep_output(cfg, rows);
      rep.add("rows", static_cast<long long>(rows.size()));
      rep.add("path", cfg.output.path->string());
    }
    rep.render(out, as_json);
    return kOk;
  } catch (const InfeasibleError& e) {
    err << "infeasible timing: " << e.what() << '\n';
    return kInfeasible;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const Error& e) {
    err << "invalid input: " << e.what() << '\n';
    return kConfigError;
  }
}

}  // namespace metrogain::cli

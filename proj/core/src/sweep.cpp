#include "metrogain/sweep.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <mutex>
#include <thread>

#include "json.hpp"
#include "metrogain/error.hpp"
#include "metrogain/format.hpp"

namespace metrogain {
namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ValidationError(field + ": " + what);
}

const json& require_key(const json& obj, const std::string& key, const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing");
  return *it;
}

void reject_unknown_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) fail(path + "." + key, "unknown field");
  }
}

double get_number(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require_key(obj, key, path);
  if (!v.is_number()) fail(path + "." + key, "expected a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require_key(obj, key, path);
  if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
  return v.get<int>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& path) {
  const json& v = require_key(obj, key, path);
  if (!v.is_string()) fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

BathModel bath_from(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const std::string kind = get_string(j, "kind", path);
  try {
    if (kind == "isolated") {
      reject_unknown_keys(j, {"kind", "t_c"}, path);
      return BathModel::isolated(get_number(j, "t_c", path));
    }
    if (kind == "markovian") {
      reject_unknown_keys(j, {"kind", "gamma"}, path);
      return BathModel::markovian(get_number(j, "gamma", path));
    }
    if (kind == "non_markovian" || kind == "non-markovian") {
      reject_unknown_keys(j, {"kind", "eta"}, path);
      return BathModel::non_markovian(get_number(j, "eta", path));
    }
    if (kind == "ohmic") {
      reject_unknown_keys(j, {"kind", "alpha", "omega_c", "beta"}, path);
      return BathModel::ohmic(get_number(j, "alpha", path), get_number(j, "omega_c", path),
                              get_number(j, "beta", path));
    }
  } catch (const DomainError& e) {
    fail(path, e.what());
  }
  fail(path + ".kind", "unknown bath kind '" + kind + "'");
}

json bath_json(const BathModel& m) {
  json j;
  j["kind"] = std::string(to_string(m.kind()));
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, IsolatedBath>) {
          j["t_c"] = p.t_c;
        } else if constexpr (std::is_same_v<T, MarkovianBath>) {
          j["gamma"] = p.gamma;
        } else if constexpr (std::is_same_v<T, NonMarkovianBath>) {
          j["eta"] = p.eta;
        } else {
          j["alpha"] = p.alpha;
          j["omega_c"] = p.omega_c;
          j["beta"] = p.beta;
        }
      },
      m.params());
  return j;
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

SweepVariable variable_from(const std::string& s, const std::string& path) {
  if (s == "x_ent") return SweepVariable::XEnt;
  if (s == "x_sep") return SweepVariable::XSep;
  if (s == "n") return SweepVariable::N;
  fail(path, "unknown variable '" + s + "' (expected x_ent, x_sep or n)");
}

SweepAxis axis_from(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  reject_unknown_keys(j, {"variable", "min", "max", "points", "spacing"}, path);
  SweepAxis a;
  a.variable = variable_from(get_string(j, "variable", path), path + ".variable");
  a.min = get_number(j, "min", path);
  a.max = get_number(j, "max", path);
  a.points = get_int(j, "points", path);
  if (j.contains("spacing")) {
    const std::string s = get_string(j, "spacing", path);
    if (s == "linear") {
      a.spacing = Spacing::Linear;
    } else if (s == "log") {
      a.spacing = Spacing::Log;
    } else {
      fail(path + ".spacing", "expected 'linear' or 'log'");
    }
  }
  return a;
}

std::string optional_number(const std::optional<GainResult>& g, double GainResult::*field) {
  return g ? format_number((*g).*field) : std::string();
}

void evaluate_row(const SweepConfig& config, double t_c, SweepRow& row) {
  try {
    row.result = gain(config.model, row.n, row.x_sep * t_c, row.x_ent * t_c);
    row.feasible = true;
  } catch (const InfeasibleError&) {
    row.result.reset();
    row.feasible = false;
  }
}

}  // namespace

std::string_view to_string(SweepVariable v) noexcept {
  switch (v) {
    case SweepVariable::XEnt: return "x_ent";
    case SweepVariable::XSep: return "x_sep";
    case SweepVariable::N: return "n";
  }
  return "unknown";
}

std::vector<double> SweepAxis::values() const {
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
    double v = spacing == Spacing::Linear ? min + t * (max - min) : min * std::pow(max / min, t);
    if (i == points - 1) v = max;
    if (variable == SweepVariable::N) v = std::round(v);
    out[static_cast<std::size_t>(i)] = v;
  }
  return out;
}

void SweepConfig::validate() const {
  if (axes.empty() || axes.size() > 2) fail("axes", "expected one or two axes");
  if (axes.size() == 2 && axes[0].variable == axes[1].variable) fail("axes[1].variable", "duplicates axes[0]");
  bool swept[3] = {false, false, false};
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const SweepAxis& a = axes[i];
    const std::string path = "axes[" + std::to_string(i) + "]";
    swept[static_cast<int>(a.variable)] = true;
    if (a.points < 2) fail(path + ".points", "must be >= 2");
    if (!std::isfinite(a.min) || !std::isfinite(a.max) || !(a.min < a.max)) {
      fail(path, "need finite min < max");
    }
    if (a.min < 0.0) fail(path + ".min", "must be >= 0");
    if (a.spacing == Spacing::Log && !(a.min > 0.0)) fail(path + ".min", "log spacing needs min > 0");
    if (a.variable == SweepVariable::N && a.min < 1.0) fail(path + ".min", "particle number must be >= 1");
  }
  const auto check_fixed = [&](SweepVariable v, bool present, const char* name) {
    const bool is_swept = swept[static_cast<int>(v)];
    if (is_swept && present) fail(std::string("fixed.") + name, "variable is also swept");
    if (!is_swept && !present) fail(std::string("fixed.") + name, "missing value for unswept variable");
  };
  check_fixed(SweepVariable::XEnt, fixed.x_ent.has_value(), "x_ent");
  check_fixed(SweepVariable::XSep, fixed.x_sep.has_value(), "x_sep");
  check_fixed(SweepVariable::N, fixed.n.has_value(), "n");
  if (fixed.x_ent && !(*fixed.x_ent >= 0.0)) fail("fixed.x_ent", "must be >= 0");
  if (fixed.x_sep && !(*fixed.x_sep >= 0.0)) fail("fixed.x_sep", "must be >= 0");
  if (fixed.n && *fixed.n < 1) fail("fixed.n", "must be >= 1");
}

std::vector<SweepRow> run_sweep(const SweepConfig& config, unsigned threads) {
  config.validate();
  const double t_c = coherence_time(config.model);

  std::vector<std::vector<double>> grids;
  for (const auto& a : config.axes) grids.push_back(a.values());
  const std::size_t outer = grids[0].size();
  const std::size_t inner = grids.size() == 2 ? grids[1].size() : 1;

  std::vector<SweepRow> rows(outer * inner);
  for (std::size_t i = 0; i < outer; ++i) {
    for (std::size_t k = 0; k < inner; ++k) {
      SweepRow& row = rows[i * inner + k];
      row.x_ent = config.fixed.x_ent.value_or(0.0);
      row.x_sep = config.fixed.x_sep.value_or(0.0);
      row.n = config.fixed.n.value_or(1);
      const auto assign = [&row](SweepVariable v, double value) {
        switch (v) {
          case SweepVariable::XEnt: row.x_ent = value; break;
          case SweepVariable::XSep: row.x_sep = value; break;
          case SweepVariable::N: row.n = static_cast<int>(value); break;
        }
      };
      assign(config.axes[0].variable, grids[0][i]);
      if (grids.size() == 2) assign(config.axes[1].variable, grids[1][k]);
    }
  }

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, rows.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < rows.size() && !failed; i = next++) {
      try {
        evaluate_row(config, t_c, rows[i]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        failed = true;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (first_error) std::rethrow_exception(first_error);
  return rows;
}

SweepConfig parse_sweep_config(std::string_view json_text) {
  const json j = parse_text(json_text);
  if (!j.is_object()) fail("config", "expected a JSON object");
  reject_unknown_keys(j, {"model", "axes", "fixed", "output"}, "config");

  SweepConfig cfg{bath_from(require_key(j, "model", "config"), "model"), {}, {}, {}};

  const json& axes = require_key(j, "axes", "config");
  if (!axes.is_array()) fail("axes", "expected an array");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    cfg.axes.push_back(axis_from(axes[i], "axes[" + std::to_string(i) + "]"));
  }

  if (j.contains("fixed")) {
    const json& f = j["fixed"];
    if (!f.is_object()) fail("fixed", "expected an object");
    reject_unknown_keys(f, {"x_ent", "x_sep", "n"}, "fixed");
    if (f.contains("x_ent")) cfg.fixed.x_ent = get_number(f, "x_ent", "fixed");
    if (f.contains("x_sep")) cfg.fixed.x_sep = get_number(f, "x_sep", "fixed");
    if (f.contains("n")) cfg.fixed.n = get_int(f, "n", "fixed");
  }

  if (j.contains("output")) {
    const json& o = j["output"];
    if (!o.is_object()) fail("output", "expected an object");
    reject_unknown_keys(o, {"format", "path"}, "output");
    if (o.contains("format")) {
      const std::string f = get_string(o, "format", "output");
      if (f == "csv") {
        cfg.output.format = OutputFormat::Csv;
      } else if (f == "json") {
        cfg.output.format = OutputFormat::Json;
      } else {
        fail("output.format", "expected 'csv' or 'json'");
      }
    }
    if (o.contains("path")) cfg.output.path = get_string(o, "path", "output");
  }

  cfg.validate();
  return cfg;
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  try {
    return parse_sweep_config(text.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string bath_to_json(const BathModel& model) { return bath_json(model).dump(); }

BathModel bath_from_json(std::string_view json_text) { return bath_from(parse_text(json_text), "model"); }

void write_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << kCsvHeader << '\n';
  for (const SweepRow& row : rows) {
    out << format_number(row.x_ent) << ',' << format_number(row.x_sep) << ',' << row.n << ','
        << optional_number(row.result, &GainResult::r) << ','
        << optional_number(row.result, &GainResult::tau_opt_sep) << ','
        << optional_number(row.result, &GainResult::tau_opt_ent) << ','
        << optional_number(row.result, &GainResult::f_sep) << ','
        << optional_number(row.result, &GainResult::f_ent) << ',' << (row.feasible ? "true" : "false") << '\n';
  }
}

void write_json(std::ostream& out, std::span<const SweepRow> rows) {
  json arr = json::array();
  for (const SweepRow& row : rows) {
    json j;
    j["x_ent"] = printed_value(row.x_ent);
    j["x_sep"] = printed_value(row.x_sep);
    j["n"] = row.n;
    j["feasible"] = row.feasible;
    if (row.result) {
      j["r"] = printed_value(row.result->r);
      j["tau_opt_sep"] = printed_value(row.result->tau_opt_sep);
      j["tau_opt_ent"] = printed_value(row.result->tau_opt_ent);
      j["f_sep"] = printed_value(row.result->f_sep);
      j["f_ent"] = printed_value(row.result->f_ent);
    } else {
      j["r"] = nullptr;
    }
    arr.push_back(std::move(j));
  }
  out << arr.dump(2) << '\n';
}

void write_sweep_output(const SweepConfig& config, std::span<const SweepRow> rows) {
  if (!config.output.path) throw ValidationError("output.path: missing");
  std::ofstream out(*config.output.path, std::ios::binary);
  if (!out) throw ValidationError("output.path: cannot open '" + config.output.path->string() + "' for writing");
  if (config.output.format == OutputFormat::Csv) {
    write_csv(out, rows);
  } else {
    write_json(out, rows);
  }
  out.flush();
  if (!out) throw ValidationError("output.path: write to '" + config.output.path->string() + "' failed");
}

}  // namespace metrogain

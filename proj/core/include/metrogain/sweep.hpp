#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metrogain/bath.hpp"
#include "metrogain/gain.hpp"

namespace metrogain {

// Swept coordinates: x = tau_tilde / t_c for each probe, and the particle number.
enum class SweepVariable { XEnt, XSep, N };
enum class Spacing { Linear, Log };
enum class OutputFormat { Csv, Json };

std::string_view to_string(SweepVariable v) noexcept;

struct SweepAxis {
  SweepVariable variable = SweepVariable::XEnt;
  double min = 0.0;
  double max = 1.0;
  int points = 2;
  Spacing spacing = Spacing::Linear;

  // Grid values; N axes are rounded to the nearest integer (duplicates kept).
  std::vector<double> values() const;
};

struct FixedValues {
  std::optional<double> x_ent;
  std::optional<double> x_sep;
  std::optional<int> n;
};

struct OutputSpec {
  OutputFormat format = OutputFormat::Csv;
  std::optional<std::filesystem::path> path;
};

struct SweepConfig {
  BathModel model;
  std::vector<SweepAxis> axes;  // one or two; axes[0] is the outer loop
  FixedValues fixed;
  OutputSpec output;

  // Throws ValidationError naming the offending field.
  void validate() const;
};

struct SweepRow {
  double x_ent = 0.0;
  double x_sep = 0.0;
  int n = 1;
  bool feasible = true;  // false for isolated timings with tau_tilde >= t_c
  std::optional<GainResult> result;
};

/// Row-major evaluation of gain() over the grid. threads = 0 uses the
/// hardware concurrency; output order is independent of the thread count.
std::vector<SweepRow> run_sweep(const SweepConfig& config, unsigned threads = 0);

/// Parse and validate a JSON config with keys {model, axes, fixed, output}.
SweepConfig parse_sweep_config(std::string_view json_text);
SweepConfig load_sweep_config(const std::filesystem::path& path);

/// {"kind": "isolated", "t_c": ...}, {"kind": "markovian", "gamma": ...},
/// {"kind": "non_markovian", "eta": ...},
/// {"kind": "ohmic", "alpha": ..., "omega_c": ..., "beta": ...}
std::string bath_to_json(const BathModel& model);
BathModel bath_from_json(std::string_view json_text);

inline constexpr std::string_view kCsvHeader = "x_ent,x_sep,n,r,tau_opt_sep,tau_opt_ent,f_sep,f_ent,feasible";

void write_csv(std::ostream& out, std::span<const SweepRow> rows);
void write_json(std::ostream& out, std::span<const SweepRow> rows);

/// Writes rows to config.output.path in config.output.format; throws
/// ValidationError if the path cannot be opened.
void write_sweep_output(const SweepConfig& config, std::span<const SweepRow> rows);

}  // namespace metrogain

// Command dispatch and CSV output for the spdc_etalon tool.
//
// Every output file starts with `#` header lines (tool version, command and
// the fully resolved config as one-line JSON), then one column-name row, then
// data. Numbers use 9 significant digits; masked pixels are written as nan.
#pragma once

#include <spdc/config.hpp>
#include <spdc/errors.hpp>
#include <spdc/spectra.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace spdc {

inline constexpr const char* version = "0.1.0";

inline constexpr int exit_ok = 0;
inline constexpr int exit_failure = 1;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_numerical_error = 3;

/// Command-line overrides applied on top of the config file.
struct RunOptions {
  std::optional<Model> model;
  std::optional<std::string> scheme;  ///< ff/bb/fb/bf, or forward/backward/forward_backward for detection
  std::optional<std::string> out;
  int threads = 1;
};

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"spectrum", "compare", "gain-curve", "transmission", "detection"};
  return names;
}

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace detail {

inline double degrees(double rad) { return rad * (180.0 / std::numbers::pi); }

class CsvWriter {
public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}

  void comment(const std::string& line) { os_ << "# " << line << '\n'; }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << '\n';
  }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << format_number(values[i]);
    os_ << '\n';
  }

private:
  std::ostream& os_;
};

inline void write_preamble(CsvWriter& w, const std::string& command, const RunConfig& c) {
  w.comment(std::string("spdc-etalon ") + version);
  w.comment("command: " + command);
  w.comment("config: " + serialize_config(c));
}

inline std::vector<Scheme> selected_schemes(const RunConfig& c, const RunOptions& o) {
  if (!o.scheme || *o.scheme == "all") return c.schemes;
  return {detail::parse_scheme(*o.scheme, "--scheme")};
}

inline std::vector<DetectionScheme> selected_detection(const RunOptions& o) {
  if (!o.scheme || *o.scheme == "all")
    return {DetectionScheme::forward, DetectionScheme::backward, DetectionScheme::forward_backward};
  for (auto s : {DetectionScheme::forward, DetectionScheme::backward, DetectionScheme::forward_backward})
    if (*o.scheme == to_string(s)) return {s};
  throw ConfigError("--scheme", "unknown detection scheme '" + *o.scheme +
                                    "' (expected forward, backward or forward_backward)");
}

inline std::string masked_summary(const std::vector<PixelStatus>& status) {
  std::size_t counts[7] = {};
  for (PixelStatus s : status) ++counts[static_cast<int>(s)];
  std::string out = "masked_pixels: " + std::to_string(status.size() - counts[0]);
  for (int k = 1; k < 7; ++k)
    if (counts[k]) out += " " + std::string(to_string(static_cast<PixelStatus>(k))) + "=" + std::to_string(counts[k]);
  return out;
}

inline double cell(const SpectrumGrid& g, Scheme s, std::size_t idx) {
  return g.valid(idx) ? g.scheme(s)[idx] : std::nan("");
}

inline void write_spectrum(std::ostream& os, const RunConfig& c, const RunOptions& o) {
  const auto schemes = selected_schemes(c, o);
  const auto grid = frequency_angular_spectrum(SweepContext(make_setup(c)), make_axes(c), c.model, o.threads,
                                               c.normalization);
  CsvWriter w(os);
  write_preamble(w, "spectrum", c);
  w.comment(masked_summary(grid.status));
  std::vector<std::string> names{"wavelength_nm", "angle_deg"};
  for (Scheme s : schemes) names.push_back(to_string(s));
  w.row(names);
  for (std::size_t i = 0; i < grid.signal_wavelengths_nm.size(); ++i)
    for (std::size_t j = 0; j < grid.internal_angles_rad.size(); ++j) {
      const std::size_t idx = grid.index(i, j);
      std::vector<double> row{grid.signal_wavelengths_nm[i], degrees(grid.internal_angles_rad[j])};
      for (Scheme s : schemes) row.push_back(cell(grid, s, idx));
      w.row(row);
    }
}

struct CompareSummary {
  Scheme scheme;
  double r_squared;
  double max_deviation;
};

inline std::vector<CompareSummary> write_compare(std::ostream& os, const RunConfig& c, const RunOptions& o) {
  const auto schemes = selected_schemes(c, o);
  const SweepContext ctx(make_setup(c));
  const auto axes = make_axes(c);
  const auto simple = frequency_angular_spectrum(ctx, axes, Model::simplified, o.threads, c.normalization);
  const auto rig = frequency_angular_spectrum(ctx, axes, Model::rigorous, o.threads, c.normalization);

  std::vector<CompareSummary> summary;
  for (Scheme s : schemes) {
    double r2 = std::nan("");
    try {
      r2 = r_squared(simple, rig, s);
    } catch (const UndefinedStatisticError&) {
    }
    summary.push_back({s, r2, max_abs_deviation(simple, rig, s)});
  }

  CsvWriter w(os);
  write_preamble(w, "compare", c);
  w.comment("simplified " + masked_summary(simple.status));
  w.comment("rigorous " + masked_summary(rig.status));
  for (const auto& m : summary)
    w.comment("r_squared " + std::string(to_string(m.scheme)) + ": " + format_number(m.r_squared) +
              " max_deviation: " + format_number(m.max_deviation));
  std::vector<std::string> names{"wavelength_nm", "angle_deg"};
  for (Scheme s : schemes) {
    names.push_back(std::string("simplified_") + to_string(s));
    names.push_back(std::string("rigorous_") + to_string(s));
  }
  w.row(names);
  for (std::size_t i = 0; i < axes.wavelengths_nm.size(); ++i)
    for (std::size_t j = 0; j < axes.angles_rad.size(); ++j) {
      const std::size_t idx = simple.index(i, j);
      std::vector<double> row{axes.wavelengths_nm[i], degrees(axes.angles_rad[j])};
      for (Scheme s : schemes) {
        row.push_back(cell(simple, s, idx));
        row.push_back(cell(rig, s, idx));
      }
      w.row(row);
    }
  return summary;
}

inline void write_gain_curve(std::ostream& os, const RunConfig& c, const RunOptions& o) {
  const auto curve = gain_and_agreement_curve(make_setup(c), c.angle_rad.values(), c.gain_betas, o.threads);
  CsvWriter w(os);
  write_preamble(w, "gain-curve", c);
  w.comment("degenerate signal wavelength_nm: " + format_number(2.0 * c.pump.wavelength_nm));
  w.row(std::vector<std::string>{"beta_plus", "beta_normalized", "re_gamma_plus", "r_squared"});
  for (const auto& p : curve) w.row({p.beta_plus, p.beta_normalized, p.re_gamma_plus, p.r_squared});
}

inline void write_transmission(std::ostream& os, const RunConfig& c, const RunOptions& o) {
  const auto axes = make_axes(c);
  std::vector<PixelStatus> status;
  const auto t = transmission_grid(make_stack(c), axes, c.polarization, &status, o.threads);
  CsvWriter w(os);
  write_preamble(w, "transmission", c);
  w.comment(masked_summary(status));
  w.row(std::vector<std::string>{"wavelength_nm", "angle_deg", "transmission"});
  for (std::size_t i = 0; i < axes.wavelengths_nm.size(); ++i)
    for (std::size_t j = 0; j < axes.angles_rad.size(); ++j) {
      const std::size_t idx = i * axes.angles_rad.size() + j;
      w.row({axes.wavelengths_nm[i], degrees(axes.angles_rad[j]),
             status[idx] == PixelStatus::ok ? t[idx] : std::nan("")});
    }
}

inline void write_detection(std::ostream& os, const RunConfig& c, const RunOptions& o) {
  const auto schemes = selected_detection(o);
  const EnvelopeModel env = c.envelope.value_or(EnvelopeModel{});
  const auto d = detection_spectra(make_setup(c), c.wavelength_nm.values(), env, c.efficiency_ratio, o.threads);
  CsvWriter w(os);
  write_preamble(w, "detection", c);
  w.comment(masked_summary(d.status));
  std::vector<std::string> names{"wavelength_nm"};
  for (auto s : schemes) names.push_back(to_string(s));
  w.row(names);
  for (std::size_t i = 0; i < d.wavelengths_nm.size(); ++i) {
    std::vector<double> row{d.wavelengths_nm[i]};
    for (auto s : schemes) row.push_back(d.status[i] == PixelStatus::ok ? d.rates(s)[i] : std::nan(""));
    w.row(row);
  }
}

}  // namespace detail

/// Runs one command and writes its CSV to `options.out` (or config.output).
/// The file is written under a temporary name and renamed on success, so a
/// failed run leaves no partial output. Returns the process exit code;
/// diagnostics go to `err`, summaries to `log`.
inline int run(const std::string& command, RunConfig config, const RunOptions& options, std::ostream& log,
               std::ostream& err) {
  namespace fs = std::filesystem;
  if (options.model) config.model = *options.model;
  if (options.out) config.output = *options.out;
  const fs::path target = config.output;
  fs::path partial = target;
  partial += ".partial";

  auto fail = [&](int code, const std::string& what) {
    std::error_code ec;
    fs::remove(partial, ec);
    err << "spdc_etalon " << command << ": " << what << '\n';
    return code;
  };

  try {
    if (std::find(commands().begin(), commands().end(), command) == commands().end())
      throw ConfigError("command", "unknown command '" + command + "'");
    if (options.threads < 1) throw ConfigError("--threads", "must be >= 1");
    std::ofstream file(partial, std::ios::binary | std::ios::trunc);
    if (!file) return fail(exit_failure, "cannot open '" + partial.string() + "' for writing");

    if (command == "spectrum") {
      detail::write_spectrum(file, config, options);
    } else if (command == "compare") {
      for (const auto& s : detail::write_compare(file, config, options))
        log << "r_squared " << to_string(s.scheme) << " " << format_number(s.r_squared) << " max_deviation "
            << format_number(s.max_deviation) << '\n';
    } else if (command == "gain-curve") {
      detail::write_gain_curve(file, config, options);
    } else if (command == "transmission") {
      detail::write_transmission(file, config, options);
    } else {
      detail::write_detection(file, config, options);
    }
    file.close();
    if (!file) return fail(exit_failure, "write to '" + partial.string() + "' failed");
    fs::rename(partial, target);
    log << "wrote " << target.string() << '\n';
    return exit_ok;
  } catch (const ConfigError& e) {
    return fail(exit_config_error, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(exit_config_error, e.what());
  } catch (const NumericalError& e) {
    return fail(exit_numerical_error, e.what());
  } catch (const std::exception& e) {
    return fail(exit_failure, e.what());
  }
}

/// Reads and parses a config file, then runs the command.
inline int run_file(const std::string& command, const std::string& config_path, const RunOptions& options,
                    std::ostream& log, std::ostream& err) {
  std::ifstream in(config_path);
  if (!in) {
    err << "spdc_etalon: cannot read config '" << config_path << "'\n";
    return exit_config_error;
  }
  std::ostringstream text;
  text << in.rdbuf();
  RunConfig config;
  try {
    config = parse_config(text.str());
  } catch (const ConfigError& e) {
    err << "spdc_etalon: " << config_path << ": " << e.what() << '\n';
    return exit_config_error;
  }
  return run(command, std::move(config), options, log, err);
}

}  // namespace spdc

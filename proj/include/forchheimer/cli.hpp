#pragma once

/**
 * @file cli.hpp
 * @brief Command-line front end for convergence studies.
 */

#include "forchheimer/errors.hpp"
#include "forchheimer/law.hpp"
#include "forchheimer/verification.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace forchheimer::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 2,
  kNumerical = 3,
  kIo = 4,
};

enum class ReportFormat { csv, markdown };

struct RunOptions {
  std::string law_text = "1:0,1:1";
  ForchheimerLaw law = ForchheimerLaw::two_term();
  std::vector<int> meshes{4, 8, 16, 32, 64, 128, 256};
  StudyConfig study;
  ReportFormat format = ReportFormat::markdown;
  std::string out;  // empty: standard output
};

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Owns the CLI11 parser so that help and parse errors can be rendered by the caller.
class CommandLine {
public:
  CommandLine() : app_("Expanded mixed finite elements for generalized Forchheimer flow") {
    app_.set_config("--config", "", "Read options from a key=value file");
    app_.add_option("--law", law_, "Forchheimer law as a_i:alpha_i pairs, e.g. 1:0,1:1");
    app_.add_option("--mesh", meshes_, "Comma-separated mesh subdivisions")->delimiter(',');
    app_.add_option("--dt", dt_, "Time step: a number, or h2 for min(cap, h^2)");
    app_.add_option("--dt-cap", dt_cap_, "Upper bound on the h2 time step");
    app_.add_option("--T", t_final_, "Final time");
    app_.add_option("--tol", tol_, "Picard tolerance on successive gradient iterates");
    app_.add_option("--max-picard", max_picard_, "Picard iteration cap per step");
    app_.add_option("--format", format_, "Report format")->check(CLI::IsMember({"csv", "markdown"}));
    app_.add_option("--out", out_, "Report path (default: standard output)");
    app_.add_option("--linear-solver", linear_, "condensed or monolithic")
        ->check(CLI::IsMember({"condensed", "monolithic"}));
  }

  /// Throws CLI::ParseError for syntax problems and UsageError for invalid values.
  RunOptions parse(int argc, const char* const* argv) {
    app_.parse(argc, argv);
    return build();
  }

  RunOptions parse(std::vector<std::string> args) {
    std::vector<const char*> argv{"forchheimer"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return parse(static_cast<int>(argv.size()), argv.data());
  }

  int exit(const CLI::Error& e, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    const int code = app_.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  std::string help() const { return app_.help(); }

private:
  RunOptions build() const {
    RunOptions options;
    options.law_text = law_;
    try {
      options.law = parse_law(law_);
    } catch (const DomainError& e) {
      throw UsageError(std::string("--law: ") + e.what());
    }
    options.meshes = meshes_;
    if (options.meshes.empty()) throw UsageError("--mesh: at least one mesh size is required");
    for (std::size_t i = 0; i < options.meshes.size(); ++i) {
      if (options.meshes[i] < 1) throw UsageError("--mesh: sizes must be positive");
      if (i > 0 && options.meshes[i] <= options.meshes[i - 1])
        throw UsageError("--mesh: sizes must be strictly increasing");
    }
    if (dt_ != "h2") {
      double value = 0.0;
      std::size_t used = 0;
      try {
        value = std::stod(dt_, &used);
      } catch (const std::logic_error&) {
        used = 0;
      }
      if (used != dt_.size() || !(value > 0.0))
        throw UsageError("--dt: expected a positive number or h2, got '" + dt_ + "'");
      options.study.dt_policy.fixed = value;
    }
    if (!(dt_cap_ > 0.0)) throw UsageError("--dt-cap must be positive");
    options.study.dt_policy.cap = dt_cap_;
    if (!(t_final_ > 0.0)) throw UsageError("--T must be positive");
    options.study.t_final = t_final_;
    if (!(tol_ > 0.0)) throw UsageError("--tol must be positive");
    options.study.picard_tol = tol_;
    if (max_picard_ < 1) throw UsageError("--max-picard must be at least 1");
    options.study.picard_max = max_picard_;
    options.study.linear_solver =
        linear_ == "monolithic" ? LinearSolverKind::monolithic : LinearSolverKind::condensed;
    options.format = format_ == "csv" ? ReportFormat::csv : ReportFormat::markdown;
    options.out = out_;
    return options;
  }

  CLI::App app_;
  std::string law_ = "1:0,1:1";
  std::vector<int> meshes_{4, 8, 16, 32, 64, 128, 256};
  std::string dt_ = "h2";
  double dt_cap_ = 1e-2;
  double t_final_ = 1.0;
  double tol_ = 1e-6;
  int max_picard_ = 50;
  std::string format_ = "markdown";
  std::string out_;
  std::string linear_ = "condensed";
};

inline void write_report(std::ostream& os, const ConvergenceReport& report, ReportFormat format) {
  if (format == ReportFormat::csv)
    write_csv(os, report);
  else
    write_markdown(os, report);
}

/// Runs the study described by @p options. Progress and the summary go to @p log.
inline int run(const RunOptions& options, std::ostream& stdout_stream, std::ostream& log) {
  std::ofstream file;
  if (!options.out.empty()) {
    file.open(options.out, std::ios::out | std::ios::trunc);
    if (!file) {
      log << "error: cannot open '" << options.out << "' for writing\n";
      return kIo;
    }
  }
  ConvergenceReport report;
  try {
    report = convergence_study(options.law, options.meshes, options.study, [&](const ConvergenceRow& r) {
      log << "n=" << r.n << " dt=" << r.dt << " steps=" << r.steps << " err_p=" << r.errors.p
          << " err_s=" << r.errors.s << " err_u=" << r.errors.u << " picard_avg=" << r.picard_avg
          << '\n';
    });
  } catch (const NumericalError& e) {
    log << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const DomainError& e) {
    log << "error: " << e.what() << '\n';
    return kUsage;
  }

  std::ostream& os = options.out.empty() ? stdout_stream : file;
  write_report(os, report, options.format);
  os.flush();
  if (!os) {
    log << "error: failed writing report\n";
    return kIo;
  }
  const auto& last = report.rows.back();
  log << "final rates (p, s, u): ";
  if (report.rows.size() < 2)
    log << "n/a (single mesh)\n";
  else
    log << last.rate_p << ", " << last.rate_s << ", " << last.rate_u << '\n';
  return kSuccess;
}

}  // namespace forchheimer::cli

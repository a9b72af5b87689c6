#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bellfilter/error.hpp"
#include "bellfilter/filter.hpp"
#include "bellfilter/vertesi.hpp"

namespace bellfilter::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitStatFail = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

inline constexpr const char* kVersion = "0.1.0";

// Numerical failures exit 3, everything else 2.
int exit_code_for(const Error& e);

enum class Family { Werner, Rho1, Rho2 };
enum class Computation { Chsh, ChshFiltered, Vertesi, VertesiFiltered };

Family parse_family(const std::string& name);
Computation parse_computation(const std::string& name);
std::string to_string(Computation c);

DensityMatrix make_family_state(Family family, double p, double r);

struct SweepSpec {
  Family family = Family::Werner;
  double r = 0.0;  // rho1 only
  double start = 0.0;
  double stop = 1.0;
  int steps = 2;
  Computation computation = Computation::Chsh;
  OptimizerOptions optimizer;
  VertesiSearchOptions search;
  bool onset = true;
  double onset_tolerance = 1e-4;
};

/// Throws InvalidInput when steps < 2 or start >= stop.
void validate_sweep(const SweepSpec& spec);

struct SweepRow {
  double param = 0.0;
  double value = 0.0;
  bool violating = false;
  std::vector<double> extra;
};

std::vector<std::string> extra_columns(Computation c);

/// Evaluates one computation at one parameter value.
SweepRow evaluate_point(const SweepSpec& spec, double param);

/// Bisects a violation predicate on [lo, hi] (whose endpoints must disagree)
/// down to an interval of width tol; returns its midpoint.
double bisect_onset(const std::function<bool(double)>& violating, double lo, double hi,
                    double tol);

struct SweepOutput {
  std::vector<SweepRow> rows;
  std::optional<double> onset;
};

/// Evaluates the sweep; if rows change violation status, the first change is
/// refined by bisection.
SweepOutput run_sweep(const SweepSpec& spec);

/// CSV: header `param,value,violating,<extras>`, one row per step, 12
/// significant digits, then `# onset=<value|none>` when requested.
void write_sweep_csv(const SweepSpec& spec, const SweepOutput& out, std::ostream& os);

/// Full command line entry point; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bellfilter::cli

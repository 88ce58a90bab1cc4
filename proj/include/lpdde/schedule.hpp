#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace lpdde {

/// One row of a geometric-schedule experiment: the size of the input
/// perturbation, the measured output quantity, their ratio, and an optional
/// analytic bound on the output (NaN when none applies).
struct ScheduleRow {
  double input = 0.0;
  double output = 0.0;
  double ratio = 0.0;
  double bound = std::numeric_limits<double>::quiet_NaN();
};

/// Verdict on "this sequence tends to zero" over a finite schedule.
struct DecayCertificate {
  /// Every value is below the exactness threshold.
  bool exact = false;
  /// The second half of the sequence is non-increasing (up to rounding).
  bool monotoneTail = false;
  double initial = 0.0;
  double final = 0.0;
  /// exact, or monotoneTail with final <= factor * initial.
  bool passed = false;
};

DecayCertificate certifyDecay(std::span<const double> values,
                              double exactThreshold = 1e-10,
                              double factor = 1e-3);

/// Rows ordered by decreasing input size.
struct ScheduleTable {
  std::vector<ScheduleRow> rows;

  std::vector<double> inputs() const;
  std::vector<double> outputs() const;
  std::vector<double> ratios() const;

  /// Decay of the ratios output/input; exact when every output is below
  /// `exactThreshold`. This is the o(||h||) certificate.
  DecayCertificate certifyRatios(double exactThreshold = 1e-10,
                                 double factor = 1e-3) const;
  /// Decay of the outputs themselves (continuity certificate).
  DecayCertificate certifyOutputs(double exactThreshold = 1e-10,
                                  double factor = 1e-3) const;
  /// Smallest bound - output over rows that carry a bound (+inf if none).
  double worstBoundSlack() const;
};

using RemainderTable = ScheduleTable;

}  // namespace lpdde

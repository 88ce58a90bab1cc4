#include "lpdde/schedule.hpp"

#include <algorithm>

namespace lpdde {

DecayCertificate certifyDecay(std::span<const double> values,
                              double exactThreshold, double factor) {
  DecayCertificate cert;
  if (values.empty()) {
    cert.exact = cert.passed = true;
    return cert;
  }
  cert.initial = values.front();
  cert.final = values.back();
  cert.exact = std::all_of(values.begin(), values.end(), [&](double v) {
    return std::abs(v) <= exactThreshold;
  });
  cert.monotoneTail = true;
  for (std::size_t i = values.size() / 2; i + 1 < values.size(); ++i) {
    const double slack = 1e-9 * values[i] + 1e-14 * std::abs(cert.initial);
    if (values[i + 1] > values[i] + slack) {
      cert.monotoneTail = false;
    }
  }
  cert.passed =
      cert.exact || (cert.monotoneTail && cert.final <= factor * cert.initial);
  return cert;
}

std::vector<double> ScheduleTable::inputs() const {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r.input);
  return out;
}

std::vector<double> ScheduleTable::outputs() const {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r.output);
  return out;
}

std::vector<double> ScheduleTable::ratios() const {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r.ratio);
  return out;
}

DecayCertificate ScheduleTable::certifyRatios(double exactThreshold,
                                              double factor) const {
  const auto outs = outputs();
  DecayCertificate cert = certifyDecay(ratios(), 0.0, factor);
  cert.exact = std::all_of(outs.begin(), outs.end(), [&](double v) {
    return std::abs(v) <= exactThreshold;
  });
  cert.passed = cert.exact || cert.passed;
  return cert;
}

DecayCertificate ScheduleTable::certifyOutputs(double exactThreshold,
                                               double factor) const {
  return certifyDecay(outputs(), exactThreshold, factor);
}

double ScheduleTable::worstBoundSlack() const {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    if (!std::isnan(r.bound)) {
      worst = std::min(worst, r.bound - r.output);
    }
  }
  return worst;
}

}  // namespace lpdde

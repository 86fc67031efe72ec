// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace uvnlos {

enum class Status { ok, empty_overlap, zero_contribution };

std::string to_string(Status s);

/// 10 log10(Q_t / Q_r); +inf when nothing arrives.
inline double pathloss_db(double q_t, double q_r) {
  if (!(q_r > 0.0)) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(q_t / q_r);
}

struct PathLossResult {
  std::string model;
  double q_t{0.0};
  double q_r_sca{0.0};
  double q_r_ref{0.0};
  double q_r{0.0};
  double pathloss_db{std::numeric_limits<double>::infinity()};
  double error_estimate_db{0.0};
  Status status{Status::ok};
  std::map<std::string, double> diagnostics;
};

}  // namespace uvnlos

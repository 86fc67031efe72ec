// SPDX-License-Identifier: Apache-2.0
#include "uvnlos/atmosphere.hpp"

#include <cmath>

#include "uvnlos/error.hpp"

namespace uvnlos::atmosphere {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void validate(const Atmosphere& atm) {
  auto nonneg = [](double v, const char* field) {
    if (!(std::isfinite(v) && v >= 0.0)) throw DomainError(field, "must be a non-negative coefficient");
  };
  nonneg(atm.ks_ray, "ks_ray");
  nonneg(atm.ks_mie, "ks_mie");
  nonneg(atm.ka, "ka");
  if (!(std::isfinite(atm.gamma) && atm.gamma >= 0.0)) throw DomainError("gamma", "must be non-negative");
  if (!(std::abs(atm.g) < 1.0)) throw DomainError("g", "must satisfy |g| < 1");
  if (!(atm.f >= 0.0 && atm.f <= 1.0)) throw DomainError("f", "must lie in [0, 1]");
}

Extinction extinction(const Atmosphere& atm) {
  const double ks = atm.ks_ray + atm.ks_mie;
  return {ks, ks + atm.ka};
}

double rayleigh_phase(double gamma, double mu) {
  return 3.0 * (1.0 + 3.0 * gamma + (1.0 - gamma) * mu * mu) / (16.0 * kPi * (1.0 + 2.0 * gamma));
}

double mie_phase(double g, double f, double mu) {
  const double g2 = g * g;
  const double hg = std::pow(1.0 + g2 - 2.0 * g * mu, -1.5);
  const double back = f * (3.0 * mu * mu - 1.0) / (2.0 * std::pow(1.0 + g2, 1.5));
  return (1.0 - g2) / (4.0 * kPi) * (hg + back);
}

double phase_function(const Atmosphere& atm, double mu) {
  const double ks = atm.ks_ray + atm.ks_mie;
  if (ks == 0.0) return 0.0;
  return (atm.ks_ray * rayleigh_phase(atm.gamma, mu) + atm.ks_mie * mie_phase(atm.g, atm.f, mu)) / ks;
}

}  // namespace uvnlos::atmosphere

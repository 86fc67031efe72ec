// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace uvnlos::atmosphere {

/// Scattering/absorption coefficients in km^-1, phase parameters dimensionless.
struct Atmosphere {
  double ks_ray{0.0};
  double ks_mie{0.0};
  double ka{0.0};
  double gamma{0.0};  ///< Rayleigh depolarisation
  double g{0.0};      ///< Mie asymmetry
  double f{0.0};      ///< Mie backscatter weight

  bool operator==(const Atmosphere&) const = default;
};

/// Extinction split, km^-1.
struct Extinction {
  double ks{0.0};
  double ke{0.0};
};

/// Throws DomainError on a negative coefficient, |g| >= 1 or f outside [0, 1].
void validate(const Atmosphere& atm);

Extinction extinction(const Atmosphere& atm);

inline constexpr double per_metre(double per_km) { return per_km * 1e-3; }

/// Phase functions of the scattering-angle cosine, normalised over 4 pi sr.
double rayleigh_phase(double gamma, double mu);
double mie_phase(double g, double f, double mu);
double phase_function(const Atmosphere& atm, double mu);

}  // namespace uvnlos::atmosphere

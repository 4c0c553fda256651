#pragma once

#include <map>
#include <string>

#include "dvarint/fieldtheory.hpp"
#include "dvarint/mechanics.hpp"

namespace dvarint {

/// Named model with its parameter map. Unknown names and missing required
/// parameters are rejected by the factories.
struct ModelSpec {
  std::string name;
  std::map<std::string, double> parameters;

  double param_or(const std::string& key, double fallback) const;
};

struct MechanicsModel {
  DiscreteLagrangian lagrangian;
  HamiltonianSystem hamiltonian;
};

struct FieldModel {
  /// Set for scalar wave-type models (nonlinear_wave).
  std::optional<DiscreteFieldLagrangian> lagrangian;
  /// Set for Bridges-form models (sine_gordon_bridges, linear_wave_bridges).
  std::optional<HamiltonianPDESystem> pde;
};

/// Mechanics benchmark systems: harmonic (V = ½ω₀²q², parameter omega0),
/// pendulum (V = -cos q), quartic (V = ¼q⁴). The Lagrangian and Hamiltonian
/// are the discrete Legendre transforms of one another.
MechanicsModel make_mechanics(const ModelSpec& spec);

/// Field benchmark systems: nonlinear_wave (scalar, parameters
/// potential ∈ {quadratic, cosine} via "cosine" flag and "mass"),
/// sine_gordon_bridges, linear_wave_bridges.
FieldModel make_field(const ModelSpec& spec);

/// Static sine-Gordon kink u(x) = 4 atan(exp((x - x0)/sqrt(1 - c^2)))
/// travelling at speed c.
double sine_gordon_kink(double x, double x0, double c);

}  // namespace dvarint

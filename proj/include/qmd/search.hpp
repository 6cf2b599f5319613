#pragma once

// Derivative-free search helpers shared by the solvers and the oracles.

#include <cstddef>
#include <functional>
#include <vector>

#include "qmd/linalg.hpp"

namespace qmd {

struct ScalarMin {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section minimization on [a, b] until the bracket is below tol.
ScalarMin golden_section_min(const std::function<double(double)>& f, double a, double b, double tol);

/// cos(polar/2)|0> + e^{i azimuth} sin(polar/2)|1>.
Ket bloch_ket(double polar, double azimuth);
/// Bloch angles of a qubit ket, polar in [0, pi], azimuth in (-pi, pi].
void bloch_angles(const Ket& v, double& polar, double& azimuth);

struct SpherePoint {
  double polar = 0.0;
  double azimuth = 0.0;
  double value = 0.0;
  Ket ket() const { return bloch_ket(polar, azimuth); }
};

struct SphereSearchOptions {
  double grid_step_deg = 1.0;
  double final_step = 1e-10;  ///< refinement stops below this angular step (radians)
  std::size_t candidates = 8;  ///< grid local optima refined
};

/// Maximizes f over pure qubit states: full angular grid, then compass
/// refinement of the best grid-local maxima. Among values within 1e-12 of
/// the best, the smallest polar angle wins, then the azimuth nearest 0.
SpherePoint sphere_maximize(const std::function<double(const Ket&)>& f,
                            const SphereSearchOptions& opt = {});
SpherePoint sphere_minimize(const std::function<double(const Ket&)>& f,
                            const SphereSearchOptions& opt = {});

struct CompassResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
};

/// Coordinate compass search maximizing f. Each round polls +-step along every
/// coordinate until no poll improves, then multiplies the step by shrink.
CompassResult compass_maximize(const std::function<double(const std::vector<double>&)>& f,
                               std::vector<double> x0, double step, double shrink, std::size_t rounds,
                               std::size_t max_polls_per_round = 100000);

}  // namespace qmd

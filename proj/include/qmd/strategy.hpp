#pragma once

// Figures of merit and state-discrimination POVMs shared by the solvers and
// the oracles.

#include <string>
#include <vector>

#include "qmd/linalg.hpp"
#include "qmd/measurements.hpp"

namespace qmd {

inline const std::string kConcludeM = "M";
inline const std::string kConcludeN = "N";

struct Mode {
  enum class Kind { MinError, Unambiguous, FixedFailure };
  Kind kind = Kind::MinError;
  double p_f = 0.0;  ///< target, FixedFailure only

  static Mode min_error() { return {Kind::MinError, 0.0}; }
  static Mode unambiguous() { return {Kind::Unambiguous, 0.0}; }
  static Mode fixed_failure(double p_f) { return {Kind::FixedFailure, p_f}; }
};

const char* to_string(Mode::Kind kind);
/// Parses "min-error", "unambiguous" or "fixed-failure".
Mode::Kind parse_mode(const std::string& s);

/// A POVM whose effects are labelled with conclusions (possibly "fail").
struct StatePovm {
  std::vector<std::string> conclusions;
  std::vector<HermitianOperator> effects;

  std::size_t dim() const { return effects.empty() ? 0 : effects.front().dim(); }
  /// Validated Povm view (throws PovmError if the effects are not a POVM).
  Povm as_povm() const;
  const HermitianOperator& effect(const std::string& label) const;
};

/// Labels "M1", ..., "Mm" used for families of more than two devices.
std::vector<std::string> device_labels(std::size_t m);

}  // namespace qmd

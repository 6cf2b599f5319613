#include "qmd/strategy.hpp"

#include <algorithm>

namespace qmd {

const char* to_string(Mode::Kind kind) {
  switch (kind) {
    case Mode::Kind::MinError:
      return "min-error";
    case Mode::Kind::Unambiguous:
      return "unambiguous";
    case Mode::Kind::FixedFailure:
      return "fixed-failure";
  }
  return "unknown";
}

Mode::Kind parse_mode(const std::string& s) {
  if (s == "min-error") return Mode::Kind::MinError;
  if (s == "unambiguous") return Mode::Kind::Unambiguous;
  if (s == "fixed-failure") return Mode::Kind::FixedFailure;
  throw InvalidArgument("unknown mode '" + s + "' (expected min-error, unambiguous or fixed-failure)");
}

Povm StatePovm::as_povm() const { return validate_povm(effects); }

const HermitianOperator& StatePovm::effect(const std::string& label) const {
  const auto it = std::find(conclusions.begin(), conclusions.end(), label);
  if (it == conclusions.end()) throw InvalidArgument("StatePovm: unknown conclusion " + label);
  return effects.at(static_cast<std::size_t>(it - conclusions.begin()));
}

std::vector<std::string> device_labels(std::size_t m) {
  std::vector<std::string> out;
  for (std::size_t l = 1; l <= m; ++l) out.push_back("M" + std::to_string(l));
  return out;
}

}  // namespace qmd

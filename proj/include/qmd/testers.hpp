#pragma once

// Testers (process POVMs): blocks H_j^(c) >= 0 with sum_c H_j^(c) = rho for
// every device outcome j. Probabilities p(c|M) = sum_j tr(H_j^(c) M_j).

#include <cstddef>
#include <string>
#include <vector>

#include "qmd/linalg.hpp"
#include "qmd/measurements.hpp"

namespace qmd {

inline const std::string kFail = "fail";
inline constexpr double kTesterTol = 1e-9;

class Tester {
 public:
  Tester() = default;
  /// blocks[j][c] pairs device outcome j with conclusions[c]. Throws if a
  /// block is not PSD, the normalizations differ between outcomes, or the
  /// common normalization does not have unit trace.
  Tester(std::vector<std::string> conclusions, std::vector<std::vector<HermitianOperator>> blocks,
         double tol = kTesterTol);

  std::size_t outcomes() const noexcept { return blocks_.size(); }
  std::size_t dim() const noexcept { return normalization_.dim(); }
  const std::vector<std::string>& conclusions() const noexcept { return conclusions_; }
  const HermitianOperator& block(std::size_t j, std::size_t c) const { return blocks_.at(j).at(c); }
  const std::vector<std::vector<HermitianOperator>>& blocks() const noexcept { return blocks_; }
  const HermitianOperator& normalization() const noexcept { return normalization_; }
  /// Throws InvalidArgument for an unknown label.
  std::size_t conclusion_index(const std::string& label) const;
  bool has_conclusion(const std::string& label) const;

 private:
  std::vector<std::string> conclusions_;
  std::vector<std::vector<HermitianOperator>> blocks_;
  HermitianOperator normalization_;
};

/// p(c|m) for one conclusion.
double conditional_prob(const Tester& t, const Povm& m, const std::string& c);
/// p(c|m) for every conclusion, in tester order.
std::vector<double> conditional_distribution(const Tester& t, const Povm& m);

struct Hypothesis {
  Povm device;
  double prior = 0.0;
  std::string label;  ///< the conclusion that counts as correct
};

struct DiscriminationReport {
  double p_s = 0.0;
  double p_e = 0.0;
  double p_f = 0.0;
  std::vector<std::string> hypotheses;
  std::vector<std::string> conclusions;
  std::vector<std::vector<double>> table;  ///< table[i][c] = p(c | hypothesis i)
};

DiscriminationReport performance(const Tester& t, const std::vector<Hypothesis>& hypotheses);

/// Keeps the diagonal blocks of operators T_c on C^n (x) C^d. Requires
/// sum_c T_c = I_n (x) rho within tol.
Tester symmetrize(const std::vector<HermitianOperator>& raw, const std::vector<std::string>& conclusions,
                  const HermitianOperator& rho, std::size_t n, double tol = kTesterTol);

/// Choi-form operators T_c = sum_j |j><j| (x) H_j^(c).
std::vector<HermitianOperator> block_form(const Tester& t);

/// tr(T_c choi(m)^T): the Choi-form evaluation of one conclusion.
double choi_form_prob(const HermitianOperator& tc, const Povm& m);

struct ProtocolBranch {
  Povm ancilla_measurement;              ///< measurement on the ancilla after device outcome j
  std::vector<std::string> conclusion_of;  ///< conclusion per ancilla outcome
};

/// Tester realized by a probe on C^d (x) C^a, the unknown device acting on the
/// first factor and branches[j] applied to the ancilla after outcome j.
Tester tester_from_protocol(const Ket& probe, std::size_t d, std::size_t a,
                            const std::vector<ProtocolBranch>& branches,
                            const std::vector<std::string>& conclusions);

/// H_j^(c) = q[j][c] probe.
Tester simple_tester(const HermitianOperator& probe, const std::vector<std::string>& conclusions,
                     const std::vector<std::vector<double>>& q);

/// lambda a + (1 - lambda) b; both must share conclusions and shape.
Tester mix(const Tester& a, const Tester& b, double lambda);

}  // namespace qmd

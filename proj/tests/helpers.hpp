#pragma once

#include <random>
#include <string>

#include "qmd/linalg.hpp"
#include "qmd/measurements.hpp"

namespace qmd::test {

inline std::string data_path(const std::string& name) { return std::string(QMD_TEST_DATA) + "/" + name; }

inline Ket random_ket(std::mt19937_64& g, std::size_t d) {
  std::normal_distribution<double> n;
  Ket v(d);
  for (auto& z : v) z = {n(g), n(g)};
  return normalized(v);
}

inline ComplexMatrix random_matrix(std::mt19937_64& g, std::size_t r, std::size_t c) {
  std::normal_distribution<double> n;
  ComplexMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < c; ++k) m(i, k) = {n(g), n(g)};
  return m;
}

inline HermitianOperator random_density(std::mt19937_64& g, std::size_t d) {
  const ComplexMatrix a = random_matrix(g, d, d);
  HermitianOperator s = hermitian_part(a * a.adjoint());
  return s * (1.0 / s.trace());
}

// Random n-outcome POVM: S^{-1/2} A_j S^{-1/2} with S = sum_j A_j.
inline Povm random_povm(std::mt19937_64& g, std::size_t d, std::size_t n) {
  std::vector<HermitianOperator> raw;
  HermitianOperator sum = HermitianOperator::zero(d);
  for (std::size_t j = 0; j < n; ++j) {
    const ComplexMatrix a = random_matrix(g, d, d);
    raw.push_back(hermitian_part(a * a.adjoint()));
    sum += raw.back();
  }
  const auto eig = hermitian_eig(sum);
  ComplexMatrix w(d, d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c)
        w(r, c) += eig.vectors(r, k) * std::conj(eig.vectors(c, k)) / std::sqrt(eig.values[k]);
  std::vector<HermitianOperator> effects;
  for (const auto& e : raw) effects.push_back(congruence(w, e));
  return validate_povm(effects);
}

}  // namespace qmd::test

#pragma once

#include "high_precision.hpp"

#include <vector>

namespace bmv::detail {

struct PreciseBranches {
  mpfr_prec_t bits = 0;
  int n = 0;
  int nodes_count = 0;
  std::vector<hp::Complex> nodes;   // zeta_k
  std::vector<hp::Complex> values;  // values[j * nodes_count + k] = lambda_j(zeta_k)

  const hp::Complex& value(int j, int k) const {
    return values[static_cast<std::size_t>(j) * nodes_count + k];
  }
};

}  // namespace bmv::detail

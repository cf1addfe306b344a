#pragma once

#include "cbandit/linsem.hpp"

namespace fixture {

// Five-node example: chain 0 -> 1, diamond 1 -> {2, 3} -> 4.
inline cbandit::Matrix example_graph() {
  cbandit::Matrix b = cbandit::Matrix::Zero(5, 5);
  b(0, 1) = 1.2;
  b(1, 2) = 2.3;
  b(1, 3) = 1.5;
  b(2, 4) = 0.8;
  b(3, 4) = -1.1;
  return b;
}

inline cbandit::Matrix chain3() {
  cbandit::Matrix b = cbandit::Matrix::Zero(3, 3);
  b(0, 1) = 1.2;
  b(1, 2) = 2.3;
  return b;
}

inline cbandit::CausalBandit unit_noise(const cbandit::Matrix& b_obs, const cbandit::Matrix& b_int) {
  const auto n = b_obs.rows();
  return cbandit::CausalBandit(b_obs, b_int, cbandit::Vector::Ones(n), cbandit::Vector::Ones(n));
}

}  // namespace fixture

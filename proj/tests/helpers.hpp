#pragma once

#include <cmath>
#include <string>
#include <utility>

#include "ctcog/error.hpp"
#include "ctcog/linalg.hpp"
#include "ctcog/rng.hpp"

namespace testutil {

inline std::string fixture(const std::string& name) {
  return std::string(CTCOG_FIXTURE_DIR) + "/" + name;
}

// True when fn() raises ctcog::Error with exactly the expected code.
template <typename Fn>
bool raises(ctcog::Errc code, Fn&& fn) {
  try {
    fn();
  } catch (const ctcog::Error& e) {
    return e.code() == code;
  } catch (...) {
    return false;
  }
  return false;
}

inline ctcog::la::vec random_unit(ctcog::SplitMix64& rng, std::size_t dim) {
  ctcog::la::vec v(dim);
  for (auto& a : v)
    a = ctcog::la::cplx(rng.next_double() - 0.5, rng.next_double() - 0.5);
  return ctcog::la::normalized(v);
}

inline bool mat_approx(const ctcog::la::mat& a, const ctcog::la::mat& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) return false;
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (std::abs(a[i][j] - b[i][j]) > tol) return false;
  }
  return true;
}

}  // namespace testutil

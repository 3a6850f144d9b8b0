#pragma once

#include <algorithm>
#include <cmath>
#include <functional>

#include "forkrate/errors.hpp"

namespace testutil {

// True iff f() throws forkrate::Error carrying exactly the expected code.
inline bool raises(forkrate::errc expected, const std::function<void()>& f) {
  try {
    f();
  } catch (const forkrate::Error& e) {
    return e.code() == expected;
  } catch (...) {
    return false;
  }
  return false;
}

inline double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(1.0, std::fabs(want));
}

}  // namespace testutil

#pragma once

#include <gtest/gtest.h>

#include "irskg/error.hpp"

namespace irskg::testing {

// Runs `f` and returns the code of the irskg::Error it throws.
template <typename F>
Errc error_code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected irskg::Error";
  return Errc::IoFailure;
}

}  // namespace irskg::testing

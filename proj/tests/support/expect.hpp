#pragma once

#include <gtest/gtest.h>

#include "semiflat/error.hpp"

namespace semiflat::testing {

/// Runs fn and reports whether it threw semiflat::Error with the given code.
template <class F>
::testing::AssertionResult throws_code(ErrorCode code, F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    if (e.code() == code) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << "threw " << e.what();
  }
  return ::testing::AssertionFailure() << "did not throw " << to_string(code);
}

}  // namespace semiflat::testing

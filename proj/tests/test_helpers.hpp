#pragma once

#include <doctest.h>

#include "escrate/errors.hpp"

// Runs `expr` and checks that it throws escrate::Error of the given kind.
#define CHECK_ERROR_KIND(expr, expected_kind)                          \
  do {                                                                 \
    bool escrate_thrown_ = false;                                      \
    try {                                                              \
      (void)(expr);                                                    \
    } catch (const escrate::Error& e) {                                \
      escrate_thrown_ = true;                                          \
      CHECK_MESSAGE(e.kind() == (expected_kind), e.what());            \
    }                                                                  \
    CHECK_MESSAGE(escrate_thrown_, "expected an escrate::Error");      \
  } while (0)

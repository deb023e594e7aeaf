// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "doctest.h"
#include "neurorep/error.hpp"

#define CHECK_THROWS_KIND(expr, error_kind)                               \
  do {                                                                    \
    bool neurorep_thrown_ = false;                                        \
    try {                                                                 \
      (void)(expr);                                                       \
    } catch (const ::neurorep::Error& e) {                                \
      neurorep_thrown_ = true;                                            \
      CHECK_MESSAGE(e.kind() == (error_kind), "unexpected kind: ", e.what()); \
    }                                                                     \
    CHECK_MESSAGE(neurorep_thrown_, "expected neurorep::Error from " #expr); \
  } while (false)

inline std::string test_data(const std::string& name) { return std::string(NEUROREP_TEST_DATA_DIR) + "/" + name; }

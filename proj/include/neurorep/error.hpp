// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace neurorep {

enum class ErrorKind {
  schema,           // missing column / malformed table layout
  ambiguity,        // duplicate keys where a unique key is required
  validation,       // value outside its legal range
  format,           // unreadable or unsupported file content
  degenerate_input, // e.g. constant volume, zero vector
  ordering,         // stage applied before its domain precondition holds
  bounds,           // index or count out of range
  dimension,        // shape mismatch
  numeric,          // non-finite values
  input,            // empty / missing inputs
  config,           // invalid configuration
  render,           // template expansion broke an invariant
  io,               // filesystem failure
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  // what() without the kind prefix
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

// CLI exit code: 1 validation failure, 2 input/format error, 3 internal error.
int exit_code_for(ErrorKind kind);

}  // namespace neurorep

// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "neurorep/error.hpp"

namespace neurorep {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::schema: return "schema";
    case ErrorKind::ambiguity: return "ambiguity";
    case ErrorKind::validation: return "validation";
    case ErrorKind::format: return "format";
    case ErrorKind::degenerate_input: return "degenerate-input";
    case ErrorKind::ordering: return "ordering";
    case ErrorKind::bounds: return "bounds";
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::numeric: return "numeric";
    case ErrorKind::input: return "input";
    case ErrorKind::config: return "config";
    case ErrorKind::render: return "render";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " error: " + message), kind_(kind), message_(message) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::validation:
    case ErrorKind::render:
      return 1;
    case ErrorKind::schema:
    case ErrorKind::ambiguity:
    case ErrorKind::format:
    case ErrorKind::degenerate_input:
    case ErrorKind::ordering:
    case ErrorKind::bounds:
    case ErrorKind::input:
    case ErrorKind::config:
    case ErrorKind::io:
      return 2;
    case ErrorKind::dimension:
    case ErrorKind::numeric:
      return 3;
  }
  return 3;
}

}  // namespace neurorep

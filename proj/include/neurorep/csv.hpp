// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace neurorep::csv {

using Row = std::vector<std::string>;

// RFC-4180 reader: quoted fields, doubled quotes, embedded separators and
// newlines, CRLF or LF line endings. Blank lines are skipped.
std::vector<Row> parse(std::istream& in, char sep = ',');
std::vector<Row> parse(std::string_view text, char sep = ',');

// Quotes the field only when it contains a separator, quote or newline.
std::string escape(std::string_view field, char sep = ',');
std::string join(const Row& row, char sep = ',');

}  // namespace neurorep::csv

// SPDX-FileCopyrightText: (c) 2026 The neurorep Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

namespace neurorep::metrics {

// Porter (1980) suffix-stripping stemmer, following the rule set of the
// author's reference C implementation (including its "bli"->"ble" and
// "logi"->"log" step-2 rules). Expects a lowercase word; words of two
// letters or fewer are returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace neurorep::metrics

// SPDX-FileCopyrightText: 2026 blobfield authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace blobfield {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitValidation = 2;

/// Runs one subcommand (sample, render, edit, fit, gradcheck, serve).
/// `args` excludes the program name. Diagnostics go to `err` as
/// `error: kind=<Kind> path=<path> message=<text>`.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace blobfield

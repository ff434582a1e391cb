// Copyright 2026 The medsumm-kit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace medsumm {

/// Malformed or inconsistent user input: bad files, bad records, bad flags.
/// The CLI maps this family to its input-error exit code.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An internal consistency check failed (non-finite loss, failed self-check).
/// The CLI maps this family to its check-failure exit code.
class CheckError : public std::runtime_error {
 public:
  explicit CheckError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace medsumm

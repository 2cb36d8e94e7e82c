// Copyright 2026 The hvsolve Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace hvs
{

// Mirrors hvs_status in hvsolve.h; keep the numeric values in sync.
enum class ErrorCode
{
  InvalidArgument = 1,
  Parse = 2,
  MissingSlot = 3,
  NonFinite = 4,
  Version = 5,
  Integrity = 6,
  GenerationFailed = 7,
  Numerical = 8,
  Io = 9,
};

class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string &what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace hvs

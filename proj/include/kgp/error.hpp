// SPDX-License-Identifier: Apache-2.0

#ifndef KGP_ERROR_HPP
#define KGP_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace kgp
{

enum class ErrorKind
{
  InvalidArgument,
  SpectrumCollision,
  TruncationMismatch,
  AliasedGrid,
  NonPositiveAmplitude,
  MaxIterations,
  LinearSolveBreakdown,
  NotInRange,
  NotKernel,
  InvalidConfig,
  Io
};

std::string_view to_string(ErrorKind kind);

// All library failures are reported through this type; the kind is stable and is what
// callers (and the CLI exit-code mapping) switch on.
class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string &message);

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

}  // namespace kgp

#endif  // KGP_ERROR_HPP

// SPDX-License-Identifier: Apache-2.0

#include "kgp/error.hpp"

namespace kgp
{

std::string_view to_string(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::InvalidArgument:
      return "InvalidArgument";
    case ErrorKind::SpectrumCollision:
      return "SpectrumCollision";
    case ErrorKind::TruncationMismatch:
      return "TruncationMismatch";
    case ErrorKind::AliasedGrid:
      return "AliasedGrid";
    case ErrorKind::NonPositiveAmplitude:
      return "NonPositiveAmplitude";
    case ErrorKind::MaxIterations:
      return "MaxIterations";
    case ErrorKind::LinearSolveBreakdown:
      return "LinearSolveBreakdown";
    case ErrorKind::NotInRange:
      return "NotInRange";
    case ErrorKind::NotKernel:
      return "NotKernel";
    case ErrorKind::InvalidConfig:
      return "InvalidConfig";
    case ErrorKind::Io:
      return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string &message)
  : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind)
{
}

}  // namespace kgp

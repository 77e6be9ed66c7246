#include "harment/error.hpp"

#include <fmt/format.h>

namespace harment {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::IllConditionedRoots: return "IllConditionedRoots";
    case ErrorKind::BadPartition: return "BadPartition";
    case ErrorKind::SpectrumBelowOne: return "SpectrumBelowOne";
    case ErrorKind::InsufficientDecayData: return "InsufficientDecayData";
    case ErrorKind::NumericalIntegrity: return "NumericalIntegrity";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message,
             std::optional<std::size_t> mode_index)
    : std::runtime_error(fmt::format("{}: {}", to_string(kind), message)),
      kind_(kind),
      mode_index_(mode_index) {}

bool is_spec_error(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::NotSymmetric:
    case ErrorKind::NotPositive:
    case ErrorKind::TooLarge:
    case ErrorKind::BadPartition:
      return true;
    default:
      return false;
  }
}

}  // namespace harment

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace harment {

enum class ErrorKind {
  InvalidArgument,
  NotSymmetric,
  NotPositive,
  TooLarge,
  IllConditionedRoots,
  BadPartition,
  SpectrumBelowOne,
  InsufficientDecayData,
  NumericalIntegrity,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Library-wide exception. `kind()` drives the CLI exit-code contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> mode_index = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }

  /// Offending circulant mode for NotPositive errors.
  std::optional<std::size_t> mode_index() const noexcept { return mode_index_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> mode_index_;
};

/// True for errors caused by invalid coupling input (as opposed to
/// a numerical-integrity failure downstream).
bool is_spec_error(ErrorKind kind) noexcept;

}  // namespace harment

#include "harment/tolerances.hpp"

#include <cmath>

#include <fmt/format.h>

#include "harment/error.hpp"

namespace harment {

void Tolerances::set(std::string_view name, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorKind::InvalidArgument,
                fmt::format("tolerance '{}' must be positive and finite", name));
  }
  if (name == "positivity") {
    positivity = value;
  } else if (name == "root") {
    root = value;
  } else if (name == "mu_floor") {
    mu_floor = value;
  } else if (name == "identity_agreement") {
    identity_agreement = value;
  } else if (name == "imaginary_residue") {
    imaginary_residue = value;
  } else if (name == "dense_cap") {
    dense_cap = static_cast<std::size_t>(value);
  } else {
    throw Error(ErrorKind::InvalidArgument, fmt::format("unknown tolerance '{}'", name));
  }
}

std::vector<std::string> Tolerances::names() {
  return {"positivity", "root", "mu_floor", "identity_agreement", "imaginary_residue",
          "dense_cap"};
}

}  // namespace harment

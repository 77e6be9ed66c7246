#pragma once

#include <complex>
#include <span>
#include <vector>

#include "harment/lattice.hpp"

namespace harment::detail {

/// (1/ΠN_i) Σ_j values_j exp(-2πi j·k/N) for every lag k, evaluated axis by
/// axis. Phases are reduced in integers so the twiddle table is exact.
std::vector<std::complex<double>> normalized_dft(const Lattice& lattice,
                                                 std::span<const double> values);

}  // namespace harment::detail

#include "circulant_transform.hpp"

#include <cmath>
#include <numbers>

namespace harment::detail {

namespace {

void transform_axis(std::vector<std::complex<double>>& data, std::span<const std::size_t> extents,
                    std::size_t axis) {
  const std::size_t n = extents[axis];
  std::size_t inner = 1;
  for (std::size_t a = axis + 1; a < extents.size(); ++a) inner *= extents[a];
  const std::size_t outer = data.size() / (n * inner);

  std::vector<std::complex<double>> twiddle(n);
  for (std::size_t p = 0; p < n; ++p) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(p) / static_cast<double>(n);
    twiddle[p] = {std::cos(angle), std::sin(angle)};
  }

  std::vector<std::complex<double>> line(n);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      const std::size_t base = o * n * inner + i;
      for (std::size_t j = 0; j < n; ++j) line[j] = data[base + j * inner];
      for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc = 0.0;
        std::size_t phase = 0;
        for (std::size_t j = 0; j < n; ++j) {
          acc += line[j] * twiddle[phase];
          phase += k;
          if (phase >= n) phase -= n;
        }
        data[base + k * inner] = acc;
      }
    }
  }
}

}  // namespace

std::vector<std::complex<double>> normalized_dft(const Lattice& lattice,
                                                 std::span<const double> values) {
  std::vector<std::complex<double>> data(values.begin(), values.end());
  const auto extents = lattice.extents();
  for (std::size_t axis = 0; axis < extents.size(); ++axis) {
    transform_axis(data, extents, axis);
  }
  const double scale = 1.0 / static_cast<double>(lattice.site_count());
  for (auto& v : data) v *= scale;
  return data;
}

}  // namespace harment::detail

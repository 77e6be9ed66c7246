#include "harment/kernel.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "circulant_transform.hpp"
#include "harment/error.hpp"

namespace harment {

CirculantKernel build_kernel(const CouplingSpec& spec, const Tolerances& tolerances) {
  CirculantKernel kernel;
  kernel.spec_ = spec;
  const auto lambda = spec.eigenvalues();
  std::vector<double> root(lambda.size()), inv_root(lambda.size());
  double log_det = 0.0;
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    if (!(lambda[j] > 0.0)) {
      throw Error(ErrorKind::NotPositive, fmt::format("λ_{} = {} is not positive", j, lambda[j]),
                  j);
    }
    root[j] = std::sqrt(lambda[j]);
    inv_root[j] = 1.0 / root[j];
    log_det += 0.5 * std::log(lambda[j]);
  }
  kernel.log_det_sqrt_ = log_det;

  const auto& lattice = spec.lattice();
  auto take_real = [&](const std::vector<std::complex<double>>& values, const char* name) {
    double peak = 0.0, residue = 0.0;
    std::vector<double> out(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
      out[k] = values[k].real();
      peak = std::max(peak, std::abs(out[k]));
      residue = std::max(residue, std::abs(values[k].imag()));
    }
    if (residue > tolerances.imaginary_residue * std::max(1.0, peak)) {
      throw Error(ErrorKind::NumericalIntegrity,
                  fmt::format("{} row has imaginary residue {:.3g}", name, residue));
    }
    // Make row[k] == row[-k] exactly so gathered blocks are exactly symmetric.
    for (std::size_t k = 0; k < out.size(); ++k) {
      const std::size_t partner = lattice.negated(k);
      if (partner > k) out[k] = out[partner] = 0.5 * (out[k] + out[partner]);
    }
    return out;
  };
  kernel.sqrt_row_ = take_real(detail::normalized_dft(lattice, root), "V^{1/2}");
  kernel.inv_sqrt_row_ = take_real(detail::normalized_dft(lattice, inv_root), "V^{-1/2}");
  return kernel;
}

std::vector<DecayPoint> kernel_row_decay(const CirculantKernel& kernel) {
  if (kernel.spec().dimension() != 1) {
    throw Error(ErrorKind::InvalidArgument, "kernel_row_decay requires a 1D kernel");
  }
  const std::size_t n = kernel.spec().site_count();
  std::vector<DecayPoint> out;
  const auto row = kernel.inv_sqrt_row();
  for (std::size_t lag = 1; lag <= (n - 1) / 2; ++lag) {
    out.push_back({lag, std::abs(row[lag])});
  }
  return out;
}

std::size_t Partition::site_count() const {
  std::size_t count = 1;
  for (auto e : extents) count *= e;
  return count;
}

void validate_partition(const Lattice& lattice, const Partition& partition) {
  if (partition.extents.size() != static_cast<std::size_t>(lattice.dimension())) {
    throw Error(ErrorKind::BadPartition, "partition dimension does not match the lattice");
  }
  for (std::size_t axis = 0; axis < partition.extents.size(); ++axis) {
    if (partition.extents[axis] == 0 || partition.extents[axis] > lattice.extents()[axis]) {
      throw Error(ErrorKind::BadPartition,
                  fmt::format("block extent {} on axis {} outside [1, {}]",
                              partition.extents[axis], axis, lattice.extents()[axis]));
    }
  }
  if (partition.site_count() >= lattice.site_count()) {
    throw Error(ErrorKind::BadPartition, "block covers the whole lattice");
  }
}

std::vector<std::size_t> inner_sites(const Lattice& lattice, const Partition& partition) {
  validate_partition(lattice, partition);
  const Lattice block(partition.extents);
  std::vector<std::size_t> sites(block.site_count());
  for (std::size_t s = 0; s < block.site_count(); ++s) {
    sites[s] = lattice.index(block.coordinates(s));
  }
  return sites;
}

std::vector<std::size_t> outer_sites(const Lattice& lattice, const Partition& partition) {
  validate_partition(lattice, partition);
  std::vector<std::size_t> sites;
  sites.reserve(lattice.site_count() - partition.site_count());
  for (std::size_t s = 0; s < lattice.site_count(); ++s) {
    const auto coords = lattice.coordinates(s);
    bool inside = true;
    for (std::size_t axis = 0; axis < coords.size(); ++axis) {
      inside = inside && coords[axis] < partition.extents[axis];
    }
    if (!inside) sites.push_back(s);
  }
  return sites;
}

Eigen::MatrixXd gather_block(const Lattice& lattice, std::span<const double> row,
                             std::span<const std::size_t> rows,
                             std::span<const std::size_t> cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t p = 0; p < rows.size(); ++p) {
    for (std::size_t q = 0; q < cols.size(); ++q) {
      m(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) =
          row[lattice.lag_index(rows[p], cols[q])];
    }
  }
  return m;
}

PartitionBlocks extract_blocks(const CirculantKernel& kernel, const Partition& partition) {
  const auto& lattice = kernel.lattice();
  const auto inner = inner_sites(lattice, partition);
  const auto outer = outer_sites(lattice, partition);
  PartitionBlocks blocks;
  blocks.partition = partition;
  blocks.a = gather_block(lattice, kernel.inv_sqrt_row(), inner, inner);
  blocks.b = gather_block(lattice, kernel.inv_sqrt_row(), inner, outer);
  blocks.c = gather_block(lattice, kernel.inv_sqrt_row(), outer, outer);
  blocks.d = gather_block(lattice, kernel.sqrt_row(), inner, inner);
  blocks.e = gather_block(lattice, kernel.sqrt_row(), inner, outer);
  blocks.f = gather_block(lattice, kernel.sqrt_row(), outer, outer);
  return blocks;
}

PartitionBlocks extract_blocks(const CirculantKernel& kernel, std::size_t n1) {
  return extract_blocks(kernel, Partition::block(n1));
}

InnerBlocks extract_inner_blocks(const CirculantKernel& kernel, const Partition& partition) {
  const auto& lattice = kernel.lattice();
  const auto inner = inner_sites(lattice, partition);
  return {gather_block(lattice, kernel.inv_sqrt_row(), inner, inner),
          gather_block(lattice, kernel.sqrt_row(), inner, inner)};
}

}  // namespace harment

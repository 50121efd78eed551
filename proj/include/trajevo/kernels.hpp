#pragma once

// Inner loops of network evaluation. Every kernel has a scalar reference
// version and, where the CPU allows, an AVX2 version chosen at runtime.
// The AVX2 versions keep the per-row summation order of the scalar ones, so
// results agree bit-for-bit, not merely within a tolerance.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace trajevo::kernels {

inline constexpr std::size_t kLanes = 4;

/// Sparse weighted-sum table, rows grouped by kLanes. Inside a group the
/// entries are interleaved: entry k of lane l sits at begin[g] + k*kLanes + l.
/// Rows shorter than the longest row of their group are padded with weight
/// +0.0 and index 0; adding the padding product never changes a sum that
/// starts at +0.0.
struct LaneTable {
  std::size_t rows = 0;
  std::vector<std::uint32_t> group_begin;  // groups + 1 offsets
  std::vector<std::uint32_t> row_length;   // padded to a multiple of kLanes
  std::vector<std::int32_t> index;
  std::vector<double> weight;

  std::size_t groups() const { return group_begin.empty() ? 0 : group_begin.size() - 1; }
};

struct RowEntry {
  std::int32_t index;
  double weight;
};

/// Builds a LaneTable from per-row entry lists (entry order is preserved).
LaneTable build_lane_table(const std::vector<std::vector<RowEntry>>& rows);

/// out[r] = sum_k weight[r,k] * signal[index[r,k]], accumulated in entry order.
using WeightedSumsFn = void (*)(const LaneTable&, std::span<const double> signal, std::span<double> out);
/// activation[i] = tau[i] * drive[i] + (1 - tau[i]) * activation[i]
using LeakyBlendFn = void (*)(std::span<const double> tau, std::span<const double> drive,
                              std::span<double> activation);

struct KernelSet {
  std::string_view name;
  WeightedSumsFn weighted_sums;
  LeakyBlendFn leaky_blend;
};

void weighted_sums_scalar(const LaneTable& t, std::span<const double> signal, std::span<double> out);
void leaky_blend_scalar(std::span<const double> tau, std::span<const double> drive, std::span<double> activation);

const KernelSet& scalar_kernels();
/// nullptr when the build or the CPU lacks AVX2.
const KernelSet* avx2_kernels();

/// Best available set. TRAJEVO_KERNELS=scalar in the environment forces the
/// scalar set.
const KernelSet& active_kernels();

}  // namespace trajevo::kernels

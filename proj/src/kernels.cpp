#include <algorithm>
#include <cstdlib>
#include <string_view>

#include "trajevo/kernels.hpp"

namespace trajevo::kernels {

LaneTable build_lane_table(const std::vector<std::vector<RowEntry>>& rows) {
  LaneTable t;
  t.rows = rows.size();
  const std::size_t groups = (rows.size() + kLanes - 1) / kLanes;
  t.row_length.assign(groups * kLanes, 0);
  t.group_begin.assign(groups + 1, 0);
  std::size_t offset = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    t.group_begin[g] = static_cast<std::uint32_t>(offset);
    std::size_t longest = 0;
    for (std::size_t l = 0; l < kLanes; ++l) {
      const std::size_t r = g * kLanes + l;
      if (r < rows.size()) {
        t.row_length[r] = static_cast<std::uint32_t>(rows[r].size());
        longest = std::max(longest, rows[r].size());
      }
    }
    offset += longest * kLanes;
  }
  t.group_begin[groups] = static_cast<std::uint32_t>(offset);
  t.index.assign(offset, 0);
  t.weight.assign(offset, 0.0);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t g = r / kLanes;
    const std::size_t l = r % kLanes;
    for (std::size_t k = 0; k < rows[r].size(); ++k) {
      const std::size_t at = t.group_begin[g] + k * kLanes + l;
      t.index[at] = rows[r][k].index;
      t.weight[at] = rows[r][k].weight;
    }
  }
  return t;
}

void weighted_sums_scalar(const LaneTable& t, std::span<const double> signal, std::span<double> out) {
  for (std::size_t r = 0; r < t.rows; ++r) {
    const std::size_t base = t.group_begin[r / kLanes] + r % kLanes;
    double acc = 0.0;
    for (std::size_t k = 0; k < t.row_length[r]; ++k) {
      const std::size_t at = base + k * kLanes;
      acc = acc + t.weight[at] * signal[static_cast<std::size_t>(t.index[at])];
    }
    out[r] = acc;
  }
}

void leaky_blend_scalar(std::span<const double> tau, std::span<const double> drive,
                        std::span<double> activation) {
  for (std::size_t i = 0; i < activation.size(); ++i)
    activation[i] = tau[i] * drive[i] + (1.0 - tau[i]) * activation[i];
}

const KernelSet& scalar_kernels() {
  static const KernelSet set{"scalar", &weighted_sums_scalar, &leaky_blend_scalar};
  return set;
}

const KernelSet& active_kernels() {
  static const KernelSet& chosen = [&]() -> const KernelSet& {
    if (const char* env = std::getenv("TRAJEVO_KERNELS"); env && std::string_view(env) == "scalar")
      return scalar_kernels();
    if (const KernelSet* avx = avx2_kernels()) return *avx;
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace trajevo::kernels

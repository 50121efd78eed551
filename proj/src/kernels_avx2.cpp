#include "trajevo/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#define TRAJEVO_HAVE_AVX2_BUILD 1
#include <immintrin.h>
#else
#define TRAJEVO_HAVE_AVX2_BUILD 0
#endif

namespace trajevo::kernels {

#if TRAJEVO_HAVE_AVX2_BUILD

namespace {

// One lane per row: lanes accumulate their own row in entry order, so each
// sum is formed exactly as in weighted_sums_scalar.
__attribute__((target("avx2"))) void weighted_sums_avx2(const LaneTable& t, std::span<const double> signal,
                                                        std::span<double> out) {
  static_assert(kLanes == 4);
  const double* sig = signal.data();
  const std::size_t groups = t.groups();
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t begin = t.group_begin[g];
    const std::size_t longest = (t.group_begin[g + 1] - begin) / kLanes;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < longest; ++k) {
      const std::size_t at = begin + k * kLanes;
      const __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(t.index.data() + at));
      const __m256d x = _mm256_i32gather_pd(sig, idx, 8);
      const __m256d w = _mm256_loadu_pd(t.weight.data() + at);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(w, x));
    }
    const std::size_t row0 = g * kLanes;
    if (row0 + kLanes <= t.rows) {
      _mm256_storeu_pd(out.data() + row0, acc);
    } else {
      alignas(32) double tmp[kLanes];
      _mm256_store_pd(tmp, acc);
      for (std::size_t l = 0; row0 + l < t.rows; ++l) out[row0 + l] = tmp[l];
    }
  }
}

__attribute__((target("avx2"))) void leaky_blend_avx2(std::span<const double> tau, std::span<const double> drive,
                                                      std::span<double> activation) {
  const std::size_t n = activation.size();
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = _mm256_loadu_pd(tau.data() + i);
    const __m256d d = _mm256_loadu_pd(drive.data() + i);
    const __m256d a = _mm256_loadu_pd(activation.data() + i);
    const __m256d r = _mm256_add_pd(_mm256_mul_pd(t, d), _mm256_mul_pd(_mm256_sub_pd(one, t), a));
    _mm256_storeu_pd(activation.data() + i, r);
  }
  for (; i < n; ++i) activation[i] = tau[i] * drive[i] + (1.0 - tau[i]) * activation[i];
}

}  // namespace

const KernelSet* avx2_kernels() {
  static const bool supported = __builtin_cpu_supports("avx2");
  static const KernelSet set{"avx2", &weighted_sums_avx2, &leaky_blend_avx2};
  return supported ? &set : nullptr;
}

#else

const KernelSet* avx2_kernels() { return nullptr; }

#endif

}  // namespace trajevo::kernels

#pragma once

#include <cstddef>

namespace ogs {

/// Sliding K-point sums of a non-negative sequence without subtractions.
///
///   out[m * out_stride] = sum_{j=0}^{K-1} in(m + offset + j),  m in [0, count)
///
/// where in(t) = get(t) for t in [0, in_len) and zero elsewhere. The output
/// is split into blocks of K: the first sample of a block is the block total,
/// every other sample is a suffix sum of its block plus a prefix sum of the
/// next block. Each output is a sum of at most K terms accumulated from zero,
/// about two additions per sample independent of K, and there is no
/// running-sum drift.
///
/// get must not read from out. offset may be negative (zero padding on the
/// left).
template <typename Real, typename Get>
void window_sum(Get&& get, std::ptrdiff_t in_len, std::ptrdiff_t offset,
                std::ptrdiff_t K, Real* out, std::ptrdiff_t count,
                std::ptrdiff_t out_stride = 1) {
  auto at = [&](std::ptrdiff_t t) -> Real {
    return (t >= 0 && t < in_len) ? Real(get(t)) : Real(0);
  };
  if (K == 1) {
    for (std::ptrdiff_t m = 0; m < count; ++m)
      out[m * out_stride] = Real(0) + at(m + offset);
    return;
  }
  for (std::ptrdiff_t B = 0; B < count; B += K) {
    // Suffix sums of in(B+offset .. B+offset+K-1), written at their start.
    Real acc = 0;
    for (std::ptrdiff_t m = B + K - 1; m >= B; --m) {
      acc += at(m + offset);
      if (m < count) out[m * out_stride] = acc;
    }
    // Prefix sums of the following block complete the windows that straddle.
    Real pre = 0;
    for (std::ptrdiff_t t = 1; t < K && B + t < count; ++t) {
      pre += at(B + K + t - 1 + offset);
      out[(B + t) * out_stride] += pre;
    }
  }
}

}  // namespace ogs

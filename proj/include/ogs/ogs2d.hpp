#pragma once

#include "ogs/grid.hpp"
#include "ogs/ogs.hpp"

namespace ogs {

/// Overlapping group shrinkage of a 2D array with K1 x K2 rectangular groups
/// (K1 along rows, K2 along columns), zero-extended on all four borders.
/// Same update as the 1D algorithm; the group energies and the back sums r
/// are separable box sums computed one axis at a time with window_sum. The
/// convexity bound uses K1 K2.
template <typename T>
OgsResult2D<T> ogs_denoise_2d(const Grid<T>& y, const OgsConfig& cfg);

/// F(x) with group starts over [-(K1-1), N1-1] x [-(K2-1), N2-1]. Direct
/// evaluation, O(N1 N2 K1 K2).
template <typename T>
double ogs_cost_2d(const Grid<T>& y, const Grid<T>& x, const OgsConfig& cfg);

}  // namespace ogs

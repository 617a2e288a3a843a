#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <string>

#include "ogs/ogs.hpp"

namespace ogs::detail {

struct UpdateStats {
  std::size_t support = 0;
  double change_sq = 0.0;
  double prev_norm_sq = 0.0;
};

/// x(i) <- y(i) / (1 + lambda r(i)) on the support {x(i) != 0}; samples at
/// or below eps are dropped from it. Shared by the 1D and 2D drivers so both
/// produce identical arithmetic.
template <typename T>
UpdateStats mm_update(std::span<const T> y, std::span<T> x, const double* r,
                      double lambda, double eps) {
  UpdateStats st;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const T old = x[i];
    if (old == T{}) continue;
    const double ri = r[i];
    if (!(ri > 0.0) || !std::isfinite(ri))
      throw InvariantError("OGS reweighting term r(" + std::to_string(i) +
                           ") = " + std::to_string(ri) +
                           " for a sample in the support");
    T next = y[i] / (1.0 + lambda * ri);
    if (std::abs(next) <= eps) next = T{};
    else ++st.support;
    st.change_sq += std::norm(next - old);
    st.prev_norm_sq += std::norm(old);
    x[i] = next;
  }
  return st;
}

template <typename T>
double data_term(std::span<const T> y, std::span<const T> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += std::norm(y[i] - x[i]);
  return 0.5 * s;
}

inline bool converged(const UpdateStats& st, double tol) {
  return tol > 0.0 && st.change_sq <= tol * tol * st.prev_norm_sq;
}

}  // namespace ogs::detail

#pragma once

#include <cstddef>
#include <string>

#include "ogs/penalty.hpp"

namespace ogs {

/// Rectangular group extent. k1 runs along rows (spectral axis), k2 along
/// columns (temporal axis). A 1D group of length K is {1, K}.
struct GroupShape {
  std::size_t k1 = 1;
  std::size_t k2 = 1;

  std::size_t cardinality() const { return k1 * k2; }
  bool is_1d() const { return k1 == 1; }

  /// "K1xK2", also for 1D shapes ("1x5").
  std::string to_string() const;

  /// Parses "5" (1D, = 1x5) or "2x8". Throws std::invalid_argument.
  static GroupShape parse(const std::string& text);

  friend bool operator==(const GroupShape&, const GroupShape&) = default;
};

struct OgsOptions {
  int iterations = 25;
  /// Support floor: samples with |x| <= epsilon leave the support for good.
  double epsilon = 1e-16;
  /// Optional early stop on ||x_{k+1} - x_k|| / ||x_k|| < tolerance; 0 = off.
  double tolerance = 0.0;
  /// Evaluate the cost after every iteration. Costs one extra pass.
  bool track_cost = true;
};

/// Validated OGS parameters. The penalty parameter must keep the total cost
/// strictly convex: a < 1/(K1 K2 lambda) for log, atan and rat.
class OgsConfig {
 public:
  OgsConfig(double lambda, GroupShape shape, Penalty penalty,
            OgsOptions options = {});

  /// a = beta / (K1 K2 lambda), see penalty_from_fraction.
  static OgsConfig from_fraction(double lambda, GroupShape shape,
                                 PenaltyKind kind, double beta,
                                 OgsOptions options = {});

  double lambda() const { return lambda_; }
  const GroupShape& shape() const { return shape_; }
  const Penalty& penalty() const { return penalty_; }
  const OgsOptions& options() const { return options_; }

  /// The same problem for data multiplied by c: lambda -> c lambda,
  /// a -> a / c. The estimate scales exactly by c.
  OgsConfig scaled(double c) const;

  OgsConfig with_options(OgsOptions options) const;

 private:
  double lambda_;
  GroupShape shape_;
  Penalty penalty_;
  OgsOptions options_;
};

}  // namespace ogs

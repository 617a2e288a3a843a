#include "ogs/config.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ogs {

std::string GroupShape::to_string() const {
  std::ostringstream os;
  os << k1 << "x" << k2;
  return os.str();
}

GroupShape GroupShape::parse(const std::string& text) {
  auto parse_dim = [&](const std::string& s) -> std::size_t {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != s.size() || v < 1)
      throw std::invalid_argument("bad group shape '" + text + "'");
    return static_cast<std::size_t>(v);
  };
  const auto x = text.find('x');
  if (x == std::string::npos) return {1, parse_dim(text)};
  return {parse_dim(text.substr(0, x)), parse_dim(text.substr(x + 1))};
}

OgsConfig::OgsConfig(double lambda, GroupShape shape, Penalty penalty,
                     OgsOptions options)
    : lambda_(lambda), shape_(shape), penalty_(penalty), options_(options) {
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_))
    throw std::invalid_argument("lambda must be finite and > 0");
  if (shape_.k1 == 0 || shape_.k2 == 0)
    throw std::invalid_argument("group extents must be >= 1");
  if (options_.iterations < 1)
    throw std::invalid_argument("iterations must be >= 1");
  if (!(options_.epsilon > 0.0))
    throw std::invalid_argument("epsilon must be > 0");
  if (!(options_.tolerance >= 0.0))
    throw std::invalid_argument("tolerance must be >= 0");
  if (!is_strictly_convex(penalty_, lambda_, shape_.cardinality())) {
    std::ostringstream os;
    os << "penalty " << penalty_.describe() << " breaks strict convexity for"
       << " lambda=" << lambda_ << ", K=" << shape_.to_string()
       << ": need a < " << max_convex_a(lambda_, shape_.cardinality());
    throw std::invalid_argument(os.str());
  }
}

OgsConfig OgsConfig::from_fraction(double lambda, GroupShape shape,
                                   PenaltyKind kind, double beta,
                                   OgsOptions options) {
  return {lambda, shape,
          penalty_from_fraction(kind, beta, lambda, shape.cardinality()),
          options};
}

OgsConfig OgsConfig::scaled(double c) const {
  if (!(c > 0.0) || !std::isfinite(c))
    throw std::invalid_argument("scale factor must be finite and > 0");
  Penalty p = penalty_.kind() == PenaltyKind::abs
                  ? penalty_
                  : Penalty(penalty_.kind(), penalty_.a() / c);
  return {lambda_ * c, shape_, p, options_};
}

OgsConfig OgsConfig::with_options(OgsOptions options) const {
  return {lambda_, shape_, penalty_, options};
}

}  // namespace ogs

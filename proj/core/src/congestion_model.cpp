#include "congest/congestion_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "congest/error.hpp"

namespace congest {

std::string_view to_string(CongestionMode mode) {
  return mode == CongestionMode::kSocialCost ? "social_cost" : "equilibrium";
}

CongestionMode parse_congestion_mode(std::string_view name) {
  if (name == "social_cost" || name == "social" || name == "SocialCost") {
    return CongestionMode::kSocialCost;
  }
  if (name == "equilibrium" || name == "Equilibrium") {
    return CongestionMode::kEquilibrium;
  }
  throw Error(ErrorKind::kInvalidArgument,
              "unknown congestion mode '" + std::string(name) + "'");
}

CongestionModel::CongestionModel(double q, double a, double c0,
                                 CongestionMode mode)
    : q_(q), a_(a), c0_(c0), mode_(mode) {
  if (!(q > 1.0) || !std::isfinite(q)) {
    throw Error(ErrorKind::kInvalidArgument, "q must exceed 1");
  }
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw Error(ErrorKind::kInvalidArgument, "a must be positive");
  }
  if (!(c0 >= 0.0) || !std::isfinite(c0)) {
    throw Error(ErrorKind::kInvalidArgument, "c0 must be nonnegative");
  }
  k_ = mode == CongestionMode::kSocialCost ? a : a / q;
}

namespace {

void require_density(double z) {
  if (!(z >= 0.0)) {
    throw Error(ErrorKind::kNegativeDensity, "density must be nonnegative");
  }
}

}  // namespace

double CongestionModel::g(double z) const {
  require_density(z);
  return a_ * std::pow(z, q_ - 1.0) + c0_;
}

double CongestionModel::h(double z) const {
  require_density(z);
  return k_ * std::pow(z, q_) + c0_ * z;
}

double CongestionModel::h_prime(double z) const {
  require_density(z);
  return k_ * q_ * std::pow(z, q_ - 1.0) + c0_;
}

double CongestionModel::density_for_metric(double xi) const {
  if (!(xi >= 0.0)) {
    throw Error(ErrorKind::kNegativeMetric, "metric must be nonnegative");
  }
  if (xi <= c0_) return 0.0;
  return std::pow((xi - c0_) / (k_ * q_), 1.0 / (q_ - 1.0));
}

double CongestionModel::h_conj(double xi) const {
  const double z = density_for_metric(xi);
  if (z == 0.0) return 0.0;
  // At the maximizer xi - c0 = k q z^(q-1), so xi z - H(z) = k (q-1) z^q.
  return k_ * (q_ - 1.0) * std::pow(z, q_);
}

GrowthBounds CongestionModel::g_bounds() const {
  return {a_, std::max(a_, c0_)};
}

GrowthBounds CongestionModel::h_bounds() const {
  // c0 z <= c0 (z^q + 1) for all z >= 0.
  return {k_, k_ + c0_};
}

}  // namespace congest

#pragma once

#include <string_view>

namespace congest {

enum class CongestionMode {
  // H(z) = z g(z): minimizers are system optima.
  kSocialCost,
  // H(z) = integral of g over [0, z]: minimizers are Wardrop equilibria.
  kEquilibrium,
};

std::string_view to_string(CongestionMode mode);
CongestionMode parse_congestion_mode(std::string_view name);

struct GrowthBounds {
  double lower = 0.0;  // lower * z^q <= H(z)
  double upper = 0.0;  // H(z) <= upper * (z^q + 1)
};

// Congestion g(z) = a z^(q-1) + c0 and the integrand H it induces.
// In both modes H(z) = k z^q + c0 z with k = a (social cost) or a/q
// (equilibrium), so H, H' and the Fenchel conjugate H* are closed-form.
class CongestionModel {
 public:
  CongestionModel(double q, double a, double c0, CongestionMode mode);

  double q() const { return q_; }
  double a() const { return a_; }
  double c0() const { return c0_; }
  CongestionMode mode() const { return mode_; }
  // q* = q / (q - 1).
  double conjugate_exponent() const { return q_ / (q_ - 1.0); }

  double g(double z) const;
  double h(double z) const;
  double h_prime(double z) const;
  // H*(xi) = sup_{z >= 0} (xi z - H(z)).
  double h_conj(double xi) const;
  // Smallest maximizer of xi z - H(z), i.e. (H')^{-1}(xi) clamped at 0.
  double density_for_metric(double xi) const;

  // The continuum cost theory needs q < 2; the discrete problem does not.
  bool outside_continuum_theory() const { return q_ >= 2.0; }

  GrowthBounds g_bounds() const;
  GrowthBounds h_bounds() const;

 private:
  double q_;
  double a_;
  double c0_;
  CongestionMode mode_;
  double k_;  // coefficient of z^q in H
};

}  // namespace congest

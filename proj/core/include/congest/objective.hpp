#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "congest/congestion_model.hpp"
#include "congest/network.hpp"

namespace congest {

// How edge flows are turned into the densities the integrand sees.
enum class Discretization {
  // Each edge splits its mass-length l_e f_e evenly between its endpoint
  // cells: rho_c = sum_{e ~ c} l_e f_e / (2 A_c). Objective sum_c A_c H(rho_c).
  // Its gradient with respect to f_e is l_e (H'(rho_u) + H'(rho_v)) / 2, the
  // node-averaged edge metric.
  kCell,
  // Each edge is an independent corridor of area l_e w_e carrying density
  // f_e / w_e. Objective sum_e l_e w_e H(f_e / w_e); edge metric H'(f_e/w_e).
  kEdge,
};

std::string_view to_string(Discretization d);
Discretization parse_discretization(std::string_view name);

// xi = H'(density) on the objective's units (cells or edges), together with
// the per-edge values used to price paths.
struct MetricField {
  std::vector<double> unit;
  std::vector<double> edge;
};

// The discretized congestion functional sum_k A_k H(z_k), where the unit
// densities z are linear in the edge flows.
class Objective {
 public:
  Objective(const Network& net, const CongestionModel& model,
            Discretization discretization);

  Discretization discretization() const { return discretization_; }
  const CongestionModel& model() const { return model_; }
  std::size_t num_units() const { return areas_.size(); }
  double unit_area(std::size_t k) const { return areas_[k]; }

  std::vector<double> densities(std::span<const double> edge_flow) const;
  double value(std::span<const double> edge_flow) const;
  MetricField metric(std::span<const double> edge_flow) const;
  // sum_k A_k H*(xi_k).
  double conjugate_term(const MetricField& xi) const;

  // d/dtheta of value(f + theta (g - f)), given unit densities of f and g.
  double slope(std::span<const double> z_from, std::span<const double> z_to,
               double theta) const;

 private:
  const Network* net_;
  CongestionModel model_;
  Discretization discretization_;
  std::vector<double> areas_;
};

}  // namespace congest

#include "congest/objective.hpp"

#include <algorithm>
#include <string>

#include "congest/error.hpp"
#include "congest/path_flow.hpp"

namespace congest {

std::string_view to_string(Discretization d) {
  return d == Discretization::kCell ? "cell" : "edge";
}

Discretization parse_discretization(std::string_view name) {
  if (name == "cell") return Discretization::kCell;
  if (name == "edge") return Discretization::kEdge;
  throw Error(ErrorKind::kInvalidArgument,
              "unknown discretization '" + std::string(name) + "'");
}

Objective::Objective(const Network& net, const CongestionModel& model,
                     Discretization discretization)
    : net_(&net), model_(model), discretization_(discretization) {
  if (discretization_ == Discretization::kCell) {
    areas_.assign(net.areas().begin(), net.areas().end());
  } else {
    areas_.reserve(net.num_edges());
    for (const Edge& e : net.edges()) areas_.push_back(e.length * e.width);
  }
}

std::vector<double> Objective::densities(
    std::span<const double> edge_flow) const {
  if (edge_flow.size() != net_->num_edges()) {
    throw Error(ErrorKind::kInvalidArgument, "one flow value per edge expected");
  }
  std::vector<double> z(areas_.size(), 0.0);
  if (discretization_ == Discretization::kCell) {
    for (std::size_t e = 0; e < edge_flow.size(); ++e) {
      const Edge& edge = net_->edge(static_cast<EdgeId>(e));
      const double half = 0.5 * edge.length * edge_flow[e];
      z[edge.u] += half;
      z[edge.v] += half;
    }
    for (std::size_t k = 0; k < z.size(); ++k) z[k] /= areas_[k];
  } else {
    for (std::size_t e = 0; e < edge_flow.size(); ++e) {
      z[e] = edge_flow[e] / net_->edge(static_cast<EdgeId>(e)).width;
    }
  }
  return z;
}

double Objective::value(std::span<const double> edge_flow) const {
  const auto z = densities(edge_flow);
  double sum = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) sum += areas_[k] * model_.h(z[k]);
  return sum;
}

MetricField Objective::metric(std::span<const double> edge_flow) const {
  const auto z = densities(edge_flow);
  MetricField xi;
  xi.unit.resize(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) xi.unit[k] = model_.h_prime(z[k]);
  if (discretization_ == Discretization::kCell) {
    xi.edge = edge_metric_from_nodes(*net_, xi.unit);
  } else {
    xi.edge = xi.unit;
  }
  return xi;
}

double Objective::conjugate_term(const MetricField& xi) const {
  if (xi.unit.size() != areas_.size()) {
    throw Error(ErrorKind::kInvalidArgument, "metric does not match objective");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < areas_.size(); ++k) {
    sum += areas_[k] * model_.h_conj(xi.unit[k]);
  }
  return sum;
}

double Objective::slope(std::span<const double> z_from,
                        std::span<const double> z_to, double theta) const {
  double sum = 0.0;
  for (std::size_t k = 0; k < areas_.size(); ++k) {
    const double d = z_to[k] - z_from[k];
    if (d == 0.0) continue;
    const double z = std::max(0.0, z_from[k] + theta * d);
    sum += areas_[k] * model_.h_prime(z) * d;
  }
  return sum;
}

}  // namespace congest

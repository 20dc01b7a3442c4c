#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "congest/congestion_model.hpp"
#include "congest/grid.hpp"
#include "congest/measures.hpp"
#include "congest/network.hpp"
#include "congest/objective.hpp"
#include "congest/solver.hpp"

namespace congest::cli {

struct DomainSpec {
  enum class Kind { kGrid, kGraph };
  enum class Mask { kFull, kRectangle, kPolygon };

  Kind kind = Kind::kGrid;
  Rect bounds{0.0, 0.0, 1.0, 1.0};
  int resolution = 2;
  Mask mask = Mask::kFull;
  Rect mask_rect{};
  std::vector<Point> polygon;
  // Graph domains only.
  std::vector<Point> positions;
  std::vector<double> areas;
  std::vector<Edge> edges;
};

struct MeasureSpec {
  enum class Generator { kSegment, kUniform, kGaussian, kPoints, kCsv, kNodes };

  Generator generator = Generator::kPoints;
  Point from{};
  Point to{};
  Point center{};
  double sigma = 0.0;
  std::vector<std::pair<Point, double>> points;
  std::vector<std::pair<NodeId, double>> nodes;
  std::filesystem::path csv;
};

struct OutputSpec {
  std::filesystem::path dir = "out";
  bool intensity = true;
  bool flows = true;
  bool paths = true;
  bool plan = true;
  bool svg = false;
  bool costs = false;
  bool holder = false;
};

struct RunConfig {
  DomainSpec domain;
  MeasureSpec mu0;
  MeasureSpec mu1;
  double q = 1.5;
  double a = 1.0;
  double c0 = 0.05;
  CongestionMode mode = CongestionMode::kEquilibrium;
  // Unset: cell on grids, edge on graphs.
  std::optional<Discretization> discretization;
  SolverConfig solver;
  std::optional<std::filesystem::path> fixed_plan;
  OutputSpec output;
  double check_tol = 1e-2;
};

// Builds a config from a JSON tree. Relative file paths are resolved against
// `base_dir`. Errors are ConfigError with the offending dotted key first.
RunConfig parse_config(const nlohmann::json& tree,
                       const std::filesystem::path& base_dir);

// INI-style text: `[section]` headers and `key = value` lines, where keys may
// be dotted and values are JSON literals or bare strings.
nlohmann::json parse_ini(std::string_view text);

// Reads JSON (first non-blank character `{`) or INI-style text.
RunConfig load_config(const std::filesystem::path& file);

// The network of a run together with the grid it came from, if any.
class RunDomain {
 public:
  explicit RunDomain(GridDomain grid);
  explicit RunDomain(Network network);

  const Network& network() const;
  const GridDomain* grid() const { return grid_ ? &*grid_ : nullptr; }

  // Grid: node_at. Graph: the node at `p` (within 1e-9 of its scale).
  NodeId locate(Point p) const;

 private:
  std::optional<GridDomain> grid_;
  std::optional<Network> network_;
};

RunDomain build_domain(const DomainSpec& spec);
DiscreteMeasure build_measure(const RunDomain& domain, const MeasureSpec& spec,
                              std::string_view key);
CongestionModel build_model(const RunConfig& config);
Problem build_problem(const RunConfig& config, const RunDomain& domain);

}  // namespace congest::cli

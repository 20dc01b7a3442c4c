#include "congest/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "congest/cli/artifacts.hpp"
#include "congest/cli/format.hpp"
#include "congest/error.hpp"

namespace congest::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& message) {
  throw Error(ErrorKind::kConfig, key + ": " + message);
}

// A JSON object read under a dotted key prefix.
class Section {
 public:
  Section(const json* node, std::string prefix)
      : node_(node), prefix_(std::move(prefix)) {
    if (node_ && !node_->is_object()) fail(prefix_, "expected an object");
  }

  std::string key(std::string_view name) const {
    return prefix_.empty() ? std::string(name)
                           : prefix_ + "." + std::string(name);
  }

  bool has(std::string_view name) const {
    return node_ && node_->contains(std::string(name));
  }

  const json& at(std::string_view name) const {
    if (!has(name)) fail(key(name), "missing required key");
    return node_->at(std::string(name));
  }

  Section child(std::string_view name) const {
    return Section(has(name) ? &at(name) : nullptr, key(name));
  }

  double number(std::string_view name) const {
    const json& v = at(name);
    if (!v.is_number()) fail(key(name), "expected a number");
    return v.get<double>();
  }
  double number(std::string_view name, double fallback) const {
    return has(name) ? number(name) : fallback;
  }

  long long integer(std::string_view name) const {
    const json& v = at(name);
    if (!v.is_number_integer()) fail(key(name), "expected an integer");
    return v.get<long long>();
  }

  bool boolean(std::string_view name, bool fallback) const {
    if (!has(name)) return fallback;
    const json& v = at(name);
    if (!v.is_boolean()) fail(key(name), "expected true or false");
    return v.get<bool>();
  }

  std::string string(std::string_view name) const {
    const json& v = at(name);
    if (!v.is_string()) fail(key(name), "expected a string");
    return v.get<std::string>();
  }
  std::string string(std::string_view name, std::string fallback) const {
    return has(name) ? string(name) : fallback;
  }

  std::vector<double> numbers(std::string_view name, std::size_t count) const {
    return numbers_of(at(name), key(name), count);
  }

  static std::vector<double> numbers_of(const json& v, const std::string& key,
                                        std::size_t count) {
    if (!v.is_array() || v.size() != count) {
      fail(key, "expected an array of " + std::to_string(count) + " numbers");
    }
    std::vector<double> out;
    for (const json& x : v) {
      if (!x.is_number()) fail(key, "expected numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  void allow_only(std::initializer_list<std::string_view> names) const {
    if (!node_) return;
    for (const auto& [k, v] : node_->items()) {
      if (std::find(names.begin(), names.end(), k) == names.end()) {
        fail(key(k), "unknown key");
      }
    }
  }

 private:
  const json* node_;
  std::string prefix_;
};

Point point_of(const json& v, const std::string& key) {
  const auto xy = Section::numbers_of(v, key, 2);
  return {xy[0], xy[1]};
}

Rect rect_of(const Section& s, std::string_view name) {
  const auto r = s.numbers(name, 4);
  if (!(r[0] < r[2]) || !(r[1] < r[3])) {
    fail(s.key(name), "expected [x0, y0, x1, y1] with x0 < x1 and y0 < y1");
  }
  return {r[0], r[1], r[2], r[3]};
}

fs::path existing_file(const Section& s, std::string_view name,
                       const fs::path& base_dir) {
  fs::path p = s.string(name);
  if (p.is_relative()) p = base_dir / p;
  if (!fs::is_regular_file(p)) fail(s.key(name), "file not found: " + p.string());
  return p;
}

DomainSpec parse_domain(const Section& s) {
  DomainSpec d;
  const std::string type = s.string("type", "grid");
  if (type == "grid") {
    s.allow_only({"type", "bounds", "resolution", "mask"});
    d.kind = DomainSpec::Kind::kGrid;
    d.bounds = rect_of(s, "bounds");
    const long long res = s.integer("resolution");
    if (res < 2) fail(s.key("resolution"), "resolution must be at least 2");
    if (res > 1 << 14) fail(s.key("resolution"), "resolution is too large");
    d.resolution = static_cast<int>(res);
    const Section mask = s.child("mask");
    const std::string mask_type =
        s.has("mask") ? mask.string("type", "full") : "full";
    if (mask_type == "full") {
      mask.allow_only({"type"});
      d.mask = DomainSpec::Mask::kFull;
    } else if (mask_type == "rectangle") {
      mask.allow_only({"type", "rect"});
      d.mask = DomainSpec::Mask::kRectangle;
      d.mask_rect = rect_of(mask, "rect");
    } else if (mask_type == "polygon") {
      mask.allow_only({"type", "vertices"});
      d.mask = DomainSpec::Mask::kPolygon;
      const json& vs = mask.at("vertices");
      if (!vs.is_array() || vs.size() < 3) {
        fail(mask.key("vertices"), "expected at least 3 [x, y] vertices");
      }
      for (const json& v : vs) d.polygon.push_back(point_of(v, mask.key("vertices")));
    } else {
      fail(mask.key("type"), "unknown mask '" + mask_type + "'");
    }
  } else if (type == "graph") {
    s.allow_only({"type", "nodes", "edges"});
    d.kind = DomainSpec::Kind::kGraph;
    const json& nodes = s.at("nodes");
    if (!nodes.is_array() || nodes.empty()) fail(s.key("nodes"), "expected a nonempty array");
    for (const json& n : nodes) {
      const auto v = Section::numbers_of(n, s.key("nodes"), 3);
      if (!(v[2] > 0.0)) fail(s.key("nodes"), "node areas must be positive");
      d.positions.push_back({v[0], v[1]});
      d.areas.push_back(v[2]);
    }
    const json& edges = s.at("edges");
    if (!edges.is_array()) fail(s.key("edges"), "expected an array");
    for (const json& e : edges) {
      if (!e.is_array() || (e.size() != 2 && e.size() != 4)) {
        fail(s.key("edges"), "expected [u, v] or [u, v, length, width]");
      }
      if (!e[0].is_number_integer() || !e[1].is_number_integer()) {
        fail(s.key("edges"), "edge endpoints must be node ids");
      }
      const auto u = e[0].get<long long>();
      const auto v = e[1].get<long long>();
      const auto n = static_cast<long long>(d.positions.size());
      if (u < 0 || v < 0 || u >= n || v >= n) {
        fail(s.key("edges"), "edge endpoint out of range");
      }
      Edge edge{static_cast<NodeId>(u), static_cast<NodeId>(v), 0.0, 1.0};
      if (e.size() == 4) {
        const auto lw = Section::numbers_of(json::array({e[2], e[3]}), s.key("edges"), 2);
        edge.length = lw[0];
        edge.width = lw[1];
      } else {
        edge.length = distance(d.positions[edge.u], d.positions[edge.v]);
      }
      d.edges.push_back(edge);
    }
  } else {
    fail(s.key("type"), "unknown domain type '" + type + "'");
  }
  return d;
}

MeasureSpec parse_measure(const Section& s, const fs::path& base_dir) {
  MeasureSpec m;
  const std::string type = s.string("type");
  if (type == "segment") {
    s.allow_only({"type", "from", "to"});
    m.generator = MeasureSpec::Generator::kSegment;
    m.from = point_of(s.at("from"), s.key("from"));
    m.to = point_of(s.at("to"), s.key("to"));
  } else if (type == "uniform") {
    s.allow_only({"type"});
    m.generator = MeasureSpec::Generator::kUniform;
  } else if (type == "gaussian") {
    s.allow_only({"type", "center", "sigma"});
    m.generator = MeasureSpec::Generator::kGaussian;
    m.center = point_of(s.at("center"), s.key("center"));
    m.sigma = s.number("sigma");
    if (!(m.sigma > 0.0)) fail(s.key("sigma"), "sigma must be positive");
  } else if (type == "points") {
    s.allow_only({"type", "atoms"});
    m.generator = MeasureSpec::Generator::kPoints;
    const json& atoms = s.at("atoms");
    if (!atoms.is_array() || atoms.empty()) fail(s.key("atoms"), "expected a nonempty array");
    for (const json& a : atoms) {
      const auto v = Section::numbers_of(a, s.key("atoms"), 3);
      if (!(v[2] > 0.0)) fail(s.key("atoms"), "atom masses must be positive");
      m.points.push_back({{v[0], v[1]}, v[2]});
    }
  } else if (type == "nodes") {
    s.allow_only({"type", "atoms"});
    m.generator = MeasureSpec::Generator::kNodes;
    const json& atoms = s.at("atoms");
    if (!atoms.is_array() || atoms.empty()) fail(s.key("atoms"), "expected a nonempty array");
    for (const json& a : atoms) {
      if (!a.is_array() || a.size() != 2 || !a[0].is_number_integer() ||
          !a[1].is_number()) {
        fail(s.key("atoms"), "expected [node_id, mass]");
      }
      const double mass = a[1].get<double>();
      if (!(mass > 0.0)) fail(s.key("atoms"), "atom masses must be positive");
      m.nodes.push_back({a[0].get<NodeId>(), mass});
    }
  } else if (type == "csv") {
    s.allow_only({"type", "path"});
    m.generator = MeasureSpec::Generator::kCsv;
    m.csv = existing_file(s, "path", base_dir);
  } else {
    fail(s.key("type"), "unknown generator '" + type + "'");
  }
  return m;
}

}  // namespace

RunConfig parse_config(const json& tree, const fs::path& base_dir) {
  const Section root(&tree, "");
  root.allow_only({"domain", "mu0", "mu1", "congestion", "discretization",
                   "solver", "fixed_plan", "output", "check"});
  for (const char* required : {"domain", "mu0", "mu1"}) {
    if (!root.has(required)) fail(required, "missing required key");
  }
  RunConfig c;
  c.domain = parse_domain(root.child("domain"));
  c.mu0 = parse_measure(root.child("mu0"), base_dir);
  c.mu1 = parse_measure(root.child("mu1"), base_dir);

  const Section cong = root.child("congestion");
  cong.allow_only({"q", "a", "c0", "mode"});
  c.q = cong.number("q", c.q);
  c.a = cong.number("a", c.a);
  c.c0 = cong.number("c0", c.c0);
  if (!(c.q > 1.0)) fail(cong.key("q"), "q must exceed 1");
  if (!(c.a > 0.0)) fail(cong.key("a"), "a must be positive");
  if (!(c.c0 >= 0.0)) fail(cong.key("c0"), "c0 must be nonnegative");
  if (cong.has("mode")) {
    try {
      c.mode = parse_congestion_mode(cong.string("mode"));
    } catch (const Error& e) {
      fail(cong.key("mode"), e.what());
    }
  }

  if (root.has("discretization")) {
    try {
      c.discretization = parse_discretization(root.string("discretization"));
    } catch (const Error& e) {
      fail("discretization", e.what());
    }
  }

  const Section solver = root.child("solver");
  solver.allow_only({"max_iters", "gap_tol", "line_search_tol",
                     "path_prune_mass", "seed", "inner_sweeps",
                     "equilibrate_sweeps"});
  if (solver.has("max_iters")) {
    const long long n = solver.integer("max_iters");
    if (n < 1 || n > 100000000) fail(solver.key("max_iters"), "max_iters must be positive");
    c.solver.max_iters = static_cast<int>(n);
  }
  const auto positive = [&](std::string_view name, double& field) {
    field = solver.number(name, field);
    if (!(field > 0.0)) fail(solver.key(name), std::string(name) + " must be positive");
  };
  positive("gap_tol", c.solver.gap_tol);
  positive("line_search_tol", c.solver.line_search_tol);
  positive("path_prune_mass", c.solver.path_prune_mass);
  for (const auto& [name, field] :
       {std::pair{"inner_sweeps", &c.solver.inner_sweeps},
        std::pair{"equilibrate_sweeps", &c.solver.equilibrate_sweeps}}) {
    if (!solver.has(name)) continue;
    const long long n = solver.integer(name);
    if (n < 0 || n > 1000000) fail(solver.key(name), "sweep count must be nonnegative");
    *field = static_cast<int>(n);
  }
  if (solver.has("seed")) {
    const long long seed = solver.integer("seed");
    if (seed < 0) fail(solver.key("seed"), "seed must be nonnegative");
    c.solver.seed = static_cast<std::uint64_t>(seed);
  }

  if (root.has("fixed_plan")) c.fixed_plan = existing_file(root, "fixed_plan", base_dir);

  const Section out = root.child("output");
  out.allow_only({"dir", "intensity", "flows", "paths", "plan", "svg", "costs",
                  "holder"});
  c.output.dir = out.string("dir", "out");
  if (c.output.dir.is_relative()) c.output.dir = base_dir / c.output.dir;
  c.output.intensity = out.boolean("intensity", c.output.intensity);
  c.output.flows = out.boolean("flows", c.output.flows);
  c.output.paths = out.boolean("paths", c.output.paths);
  c.output.plan = out.boolean("plan", c.output.plan);
  c.output.svg = out.boolean("svg", c.output.svg);
  c.output.costs = out.boolean("costs", c.output.costs);
  c.output.holder = out.boolean("holder", c.output.holder);

  const Section check = root.child("check");
  check.allow_only({"tol"});
  c.check_tol = check.number("tol", c.check_tol);
  if (!(c.check_tol > 0.0)) fail(check.key("tol"), "tol must be positive");

  if (c.domain.kind == DomainSpec::Kind::kGraph) {
    for (const auto* m : {&c.mu0, &c.mu1}) {
      const auto g = m->generator;
      if (g == MeasureSpec::Generator::kSegment ||
          g == MeasureSpec::Generator::kUniform ||
          g == MeasureSpec::Generator::kGaussian) {
        fail(m == &c.mu0 ? "mu0.type" : "mu1.type",
             "generator needs a grid domain");
      }
    }
  }
  return c;
}

namespace {

// Drops a trailing `# ...` or `; ...` comment that follows whitespace and
// sits outside a double-quoted string.
std::string_view strip_comment(std::string_view v) {
  bool quoted = false;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (v[k] == '"' && (k == 0 || v[k - 1] != '\\')) quoted = !quoted;
    if (!quoted && (v[k] == '#' || v[k] == ';') && k > 0 &&
        (v[k - 1] == ' ' || v[k - 1] == '\t')) {
      return trim(v.substr(0, k));
    }
  }
  return v;
}

}  // namespace

json parse_ini(std::string_view text) {
  json tree = json::object();
  std::string section;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view t = trim(line);
    if (t.empty() || t.front() == '#' || t.front() == ';') continue;
    const std::string where = "line " + std::to_string(lineno);
    if (t.front() == '[') {
      if (t.back() != ']') fail(where, "unterminated section header");
      section = std::string(trim(t.substr(1, t.size() - 2)));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) fail(where, "expected key = value");
    const std::string_view name = trim(t.substr(0, eq));
    const std::string_view raw = strip_comment(trim(t.substr(eq + 1)));
    if (name.empty()) fail(where, "empty key");
    std::string dotted = section.empty() ? std::string(name)
                                         : section + "." + std::string(name);
    std::string pointer;
    std::size_t start = 0;
    while (true) {
      const auto dot = dotted.find('.', start);
      pointer += "/" + dotted.substr(start, dot - start);
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = std::string(raw);
    try {
      tree[json::json_pointer(pointer)] = std::move(value);
    } catch (const json::exception&) {
      fail(dotted, "conflicts with an earlier key");
    }
  }
  return tree;
}

RunConfig load_config(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::kIO, "cannot read config " + file.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  json tree;
  if (first != std::string::npos && text[first] == '{') {
    try {
      tree = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::kConfig, file.string() + ": " + e.what());
    }
  } else {
    tree = parse_ini(text);
  }
  return parse_config(tree, file.parent_path());
}

RunDomain::RunDomain(GridDomain grid) : grid_(std::move(grid)) {}
RunDomain::RunDomain(Network network) : network_(std::move(network)) {}

const Network& RunDomain::network() const {
  return grid_ ? grid_->network() : *network_;
}

NodeId RunDomain::locate(Point p) const {
  if (grid_) return grid_->node_at(p);
  const NodeId n = network_->nearest_node(p);
  double scale = 1.0;
  for (const Point& q : network_->positions()) {
    scale = std::max({scale, std::abs(q.x), std::abs(q.y)});
  }
  if (distance(network_->position(n), p) > 1e-9 * scale) {
    throw Error(ErrorKind::kOutsideDomain,
                "no graph node at (" + format_double(p.x) + ", " +
                    format_double(p.y) + ")");
  }
  return n;
}

RunDomain build_domain(const DomainSpec& spec) {
  if (spec.kind == DomainSpec::Kind::kGraph) {
    return RunDomain(Network(spec.positions, spec.areas, spec.edges));
  }
  CellMask mask;
  switch (spec.mask) {
    case DomainSpec::Mask::kFull:
      break;
    case DomainSpec::Mask::kRectangle:
      mask = rectangle_mask(spec.mask_rect);
      break;
    case DomainSpec::Mask::kPolygon:
      mask = polygon_mask(spec.polygon);
      break;
  }
  return RunDomain(build_grid(spec.bounds, spec.resolution, mask));
}

DiscreteMeasure build_measure(const RunDomain& domain, const MeasureSpec& spec,
                              std::string_view key) {
  using G = MeasureSpec::Generator;
  const GridDomain* grid = domain.grid();
  switch (spec.generator) {
    case G::kSegment:
      return segment_measure(*grid, spec.from, spec.to);
    case G::kUniform:
      return uniform_measure(*grid);
    case G::kGaussian:
      return gaussian_measure(*grid, spec.center, spec.sigma);
    case G::kPoints: {
      DiscreteMeasure m;
      for (const auto& [p, mass] : spec.points) m.add(domain.locate(p), mass);
      return m;
    }
    case G::kNodes: {
      DiscreteMeasure m;
      for (const auto& [n, mass] : spec.nodes) {
        if (!domain.network().contains(n)) {
          fail(std::string(key) + ".atoms", "unknown node " + std::to_string(n));
        }
        m.add(n, mass);
      }
      return m;
    }
    case G::kCsv: {
      std::ifstream in(spec.csv);
      if (!in) throw Error(ErrorKind::kIO, "cannot read " + spec.csv.string());
      return read_measure_csv(in, domain);
    }
  }
  throw Error(ErrorKind::kInternal, "unhandled measure generator");
}

CongestionModel build_model(const RunConfig& config) {
  return CongestionModel(config.q, config.a, config.c0, config.mode);
}

Problem build_problem(const RunConfig& config, const RunDomain& domain) {
  const Discretization disc = config.discretization.value_or(
      domain.grid() ? Discretization::kCell : Discretization::kEdge);
  std::optional<TransportPlan> plan;
  if (config.fixed_plan) plan = load_plan_csv(*config.fixed_plan, domain);
  return Problem{domain.network(), build_measure(domain, config.mu0, "mu0"),
                 build_measure(domain, config.mu1, "mu1"), build_model(config),
                 disc, std::move(plan)};
}

}  // namespace congest::cli

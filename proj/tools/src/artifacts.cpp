#include "congest/cli/artifacts.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "congest/cli/config.hpp"
#include "congest/cli/format.hpp"
#include "congest/error.hpp"

namespace congest::cli {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool is_number(std::string_view s) {
  try {
    parse_double(s, "");
    return true;
  } catch (const Error&) {
    return false;
  }
}

// Numeric CSV rows with exactly `columns` fields; an optional header line is
// skipped.
std::vector<std::vector<double>> read_rows(std::istream& in, std::size_t columns,
                                           std::string_view what) {
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (rows.empty() && lineno == 1 && !is_number(fields.front())) continue;
    const std::string where = std::string(what) + " line " + std::to_string(lineno);
    if (fields.size() != columns) {
      throw Error(ErrorKind::kIO, where + ": expected " + std::to_string(columns) +
                                      " fields");
    }
    std::vector<double> row;
    for (auto f : fields) row.push_back(parse_double(f, where));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string coords(const Network& net, NodeId n) {
  const Point p = net.position(n);
  return format_double(p.x) + "," + format_double(p.y);
}

}  // namespace

void write_intensity_csv(std::ostream& out, const RunDomain& domain,
                         const IntensityField& field) {
  const Network& net = domain.network();
  const auto density = cell_density(net, field);
  out << "cell_i,cell_j,density\n";
  for (NodeId n = 0; n < static_cast<NodeId>(net.num_nodes()); ++n) {
    const CellIndex c = domain.grid() ? domain.grid()->cell_of(n) : CellIndex{n, 0};
    out << c.i << ',' << c.j << ',' << format_double(density[n]) << '\n';
  }
}

void write_flows_csv(std::ostream& out, const Network& net,
                     const IntensityField& field) {
  out << "u_x,u_y,v_x,v_y,flow\n";
  for (EdgeId e = 0; e < static_cast<EdgeId>(net.num_edges()); ++e) {
    if (field.edge_flow[e] == 0.0) continue;
    const Edge& edge = net.edge(e);
    out << coords(net, edge.u) << ',' << coords(net, edge.v) << ','
        << format_double(field.edge_flow[e]) << '\n';
  }
}

void write_plan_csv(std::ostream& out, const Network& net,
                    const TransportPlan& plan) {
  out << "sx,sy,tx,ty,mass\n";
  for (const PlanEntry& e : plan.entries()) {
    out << coords(net, e.source) << ',' << coords(net, e.target) << ','
        << format_double(e.mass) << '\n';
  }
}

TransportPlan read_plan_csv(std::istream& in, const RunDomain& domain) {
  std::map<std::pair<NodeId, NodeId>, double> merged;
  for (const auto& r : read_rows(in, 5, "plan")) {
    const NodeId s = domain.locate({r[0], r[1]});
    const NodeId t = domain.locate({r[2], r[3]});
    merged[{s, t}] += r[4];
  }
  std::vector<PlanEntry> entries;
  for (const auto& [key, mass] : merged) {
    entries.push_back({key.first, key.second, mass});
  }
  if (entries.empty()) throw Error(ErrorKind::kIO, "plan file has no entries");
  return TransportPlan(std::move(entries));
}

void write_paths(std::ostream& out, const Network& net, const PathFlow& flow) {
  for (const WeightedPath& p : flow.entries()) {
    out << format_double(p.mass);
    for (NodeId n : p.nodes) out << "; " << coords(net, n);
    out << '\n';
  }
}

PathFlow read_paths(std::istream& in, const RunDomain& domain) {
  PathFlow flow;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::string where = "paths line " + std::to_string(lineno);
    const auto fields = split(line, ';');
    if (fields.size() < 2) throw Error(ErrorKind::kIO, where + ": expected mass and nodes");
    const double mass = parse_double(fields[0], where);
    GridPath nodes;
    for (std::size_t k = 1; k < fields.size(); ++k) {
      const auto xy = split(fields[k], ',');
      if (xy.size() != 2) throw Error(ErrorKind::kIO, where + ": expected x,y");
      nodes.push_back(domain.locate({parse_double(xy[0], where),
                                     parse_double(xy[1], where)}));
    }
    validate_path(domain.network(), nodes);
    flow.add(std::move(nodes), mass);
  }
  if (flow.empty()) throw Error(ErrorKind::kIO, "paths file has no entries");
  return flow;
}

DiscreteMeasure read_measure_csv(std::istream& in, const RunDomain& domain) {
  DiscreteMeasure m;
  for (const auto& r : read_rows(in, 3, "measure")) {
    m.add(domain.locate({r[0], r[1]}), r[2]);
  }
  return m;
}

void write_costs_csv(std::ostream& out, const CostTable& table,
                     std::size_t num_nodes) {
  out << "source_id,node_id,cost\n";
  for (NodeId s : table.sources()) {
    for (NodeId n = 0; n < static_cast<NodeId>(num_nodes); ++n) {
      out << s << ',' << n << ',' << format_double(table.cost(s, n)) << '\n';
    }
  }
}

void write_convergence_jsonl(std::ostream& out,
                             const std::vector<IterationRecord>& history) {
  for (const IterationRecord& r : history) {
    const nlohmann::json rec = {{"iter", r.iter},         {"primal", r.primal},
                                {"dual", r.dual},         {"best_dual", r.best_dual},
                                {"gap", r.gap},           {"theta", r.theta},
                                {"mk_value", r.mk_value}};
    out << rec.dump() << '\n';
  }
}

TransportPlan load_plan_csv(const std::filesystem::path& file,
                            const RunDomain& domain) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::kIO, "cannot read " + file.string());
  return read_plan_csv(in, domain);
}

PathFlow load_paths(const std::filesystem::path& file, const RunDomain& domain) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::kIO, "cannot read " + file.string());
  return read_paths(in, domain);
}

}  // namespace congest::cli

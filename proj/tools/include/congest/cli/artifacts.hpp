#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "congest/geodesics.hpp"
#include "congest/measures.hpp"
#include "congest/path_flow.hpp"
#include "congest/solver.hpp"

namespace congest::cli {

class RunDomain;

// Node coordinates throughout; readers map them back with RunDomain::locate.

// cell_i,cell_j,density. Graph domains write node id and 0.
void write_intensity_csv(std::ostream& out, const RunDomain& domain,
                         const IntensityField& field);
// u_x,u_y,v_x,v_y,flow for edges carrying flow.
void write_flows_csv(std::ostream& out, const Network& net,
                     const IntensityField& field);
void write_plan_csv(std::ostream& out, const Network& net,
                    const TransportPlan& plan);
TransportPlan read_plan_csv(std::istream& in, const RunDomain& domain);
// One line per path: `mass; x0,y0; x1,y1; ...`.
void write_paths(std::ostream& out, const Network& net, const PathFlow& flow);
PathFlow read_paths(std::istream& in, const RunDomain& domain);
// node_x,node_y,mass.
DiscreteMeasure read_measure_csv(std::istream& in, const RunDomain& domain);
// source_id,node_id,cost.
void write_costs_csv(std::ostream& out, const CostTable& table,
                     std::size_t num_nodes);
void write_convergence_jsonl(std::ostream& out,
                             const std::vector<IterationRecord>& history);

TransportPlan load_plan_csv(const std::filesystem::path& file,
                            const RunDomain& domain);
PathFlow load_paths(const std::filesystem::path& file, const RunDomain& domain);

}  // namespace congest::cli

#pragma once

#include <iosfwd>

#include "congest/grid.hpp"
#include "congest/path_flow.hpp"

namespace congest::cli {

// Heatmap of cell densities with the heaviest `max_paths` paths overlaid.
void write_density_svg(std::ostream& out, const GridDomain& grid,
                       const IntensityField& field, const PathFlow& flow,
                       int max_paths = 20);

}  // namespace congest::cli

#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "nct/config.hpp"
#include "nct/grid.hpp"
#include "nct/monte_carlo.hpp"

namespace nct {

/// 17 significant digits; round-trips every double.
std::string format_double(double v);

/// "# nct <command>", then schema version, seed, and resolved config hash.
void write_header(std::ostream& out, const RunDocument& doc, std::string_view command);

/// Cell indices, centres, and one column per named field.
void write_field_csv(std::ostream& out, const SpatialGrid& grid, const std::vector<std::string>& names,
                     const std::vector<const std::vector<double>*>& fields);

/// Per-cell φ, F̂, their batch errors, and ψ per μ-bin when tallied.
void write_tally_csv(std::ostream& out, const TallyGrid& tally);

}  // namespace nct

#include "nct/report.hpp"

#include <cstdio>

namespace nct {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_header(std::ostream& out, const RunDocument& doc, std::string_view command) {
  out << "# nct " << command << "\n"
      << "# schema_version=" << doc.schema_version << "\n"
      << "# seed=" << doc.seed << "\n"
      << "# config_hash=" << doc.hash_hex() << "\n";
}

namespace {

void cell_prefix(std::ostream& out, const SpatialGrid& grid, std::size_t idx) {
  const auto ijk = grid.unravel(idx);
  const Vec3 x = grid.center(idx);
  out << ijk[0] << ',' << ijk[1] << ',' << ijk[2] << ',' << format_double(x.x) << ','
      << format_double(x.y) << ',' << format_double(x.z);
}

}  // namespace

void write_field_csv(std::ostream& out, const SpatialGrid& grid, const std::vector<std::string>& names,
                     const std::vector<const std::vector<double>*>& fields) {
  out << "ix,iy,iz,x,y,z";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) {
    cell_prefix(out, grid, i);
    for (const auto* f : fields) out << ',' << format_double((*f)[i]);
    out << '\n';
  }
}

void write_tally_csv(std::ostream& out, const TallyGrid& tally) {
  const auto& grid = tally.grid();
  const int nb = tally.mu_bins();
  out << "ix,iy,iz,x,y,z,phi,phi_err,collision_density,collision_density_err";
  for (int b = 0; b < nb; ++b) out << ",psi_" << b << ",psi_" << b << "_err";
  out << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) {
    cell_prefix(out, grid, i);
    const auto& p = tally.phi()[i];
    const auto& c = tally.collision_density()[i];
    out << ',' << format_double(p.mean) << ',' << format_double(p.error) << ',' << format_double(c.mean)
        << ',' << format_double(c.error);
    for (int b = 0; b < nb; ++b) {
      const auto& e = tally.psi()[i * nb + b];
      out << ',' << format_double(e.mean) << ',' << format_double(e.error);
    }
    out << '\n';
  }
}

}  // namespace nct

#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "catbranch/contour.hpp"
#include "catbranch/paths.hpp"
#include "catbranch/points.hpp"
#include "catbranch/rtree.hpp"

namespace catbranch {

// Header `roots=<ids comma separated> height_cap=<value|none>`, then per node
// `node_id parent_id birth death child_ids...`. Doubles use %.17g (inf spelled `inf`).
void write_forest(std::ostream& os, const FamilyForest& f);
FamilyForest read_forest(std::istream& is);

// Header `speed=<sigma>`, then `u e` per breakpoint.
void write_excursion(std::ostream& os, const Excursion& e);
Excursion read_excursion(std::istream& is);

// `# t=.. spacing=.. zero_marks=..`, `ell,h,separator`, rows.
void write_point_process(std::ostream& os, const GenealogicalPointProcess& p);
GenealogicalPointProcess read_point_process(std::istream& is);

// `t,value` rows.
void write_mass_path(std::ostream& os, const MassPath& p);
MassPath read_mass_path(std::istream& is);

// `# dt=.. seed=.. horizon=.. absorbed_index=..`, `t,value` rows.
void write_diffusion_path(std::ostream& os, const DiffusionPath& p);
DiffusionPath read_diffusion_path(std::istream& is);

// Flat key=value file; '#' starts a comment. Duplicate keys: last wins.
std::map<std::string, std::string> read_key_values(std::istream& is);

std::string format_double(double v);
double parse_double(const std::string& s);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace catbranch

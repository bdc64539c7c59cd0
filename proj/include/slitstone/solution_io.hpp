#pragma once

// SLITSTONE-SOL v1: plain-text persistence of discrete solutions. A header of
// "key value" lines, then ny rows of nx nodal values (row j = 0 first), then
// one row of 0/1 active flags. Numbers are written with 17 significant digits
// so a write/read round trip is bit-exact.

#include <iosfwd>
#include <string>

#include "slitstone/vi_solver.hpp"

namespace slitstone {

inline constexpr const char* kSolutionMagic = "SLITSTONE-SOL v1";

void write_solution(std::ostream& os, const DiscreteSolution& sol);
void write_solution_file(const std::string& path, const DiscreteSolution& sol);

DiscreteSolution read_solution(std::istream& is);
DiscreteSolution read_solution_file(const std::string& path);

// %.17g formatting shared by every serializer in the project.
std::string format_g17(double x);

}  // namespace slitstone

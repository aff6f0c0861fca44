#pragma once

#include <filesystem>
#include <iosfwd>

#include "bebplan/sparse_mip.hpp"

namespace bebplan {

// Free-format MPS. Integer columns sit between INTORG/INTEND markers, every
// column gets explicit bounds, and the objective constant is written as the
// negated RHS of the objective row (the usual convention).
void write_mps(std::ostream& out, const SparseMip& mip);
void write_mps(const std::filesystem::path& path, const SparseMip& mip);

// Reads free-format MPS including the bound types UP, LO, FX, MI, PL, BV, LI,
// UI and FR. Row families are recovered from the row name prefix when they
// match the builder's naming, otherwise they are Custom. Throws MpsParse.
SparseMip read_mps(std::istream& in);
SparseMip read_mps(const std::filesystem::path& path);

}  // namespace bebplan

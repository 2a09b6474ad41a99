#pragma once

#include <iosfwd>
#include <string>

#include "dihedral/chain.hpp"

namespace dihedral {

// Chain JSON:
//   {"vertices": [[x,y,z], ...], "allowed_overlaps": [[i,j], ...]}
// allowed_overlaps is optional and defaults to empty.
Chain read_chain_json(std::istream& in);
Chain read_chain_file(const std::string& path);

std::string chain_to_json(const Chain& c, int indent = 2);
void write_chain_file(const Chain& c, const std::string& path);

}  // namespace dihedral

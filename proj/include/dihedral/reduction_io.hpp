#pragma once

#include <iosfwd>
#include <string>

#include "dihedral/reduction.hpp"

namespace dihedral {

// Sets file: {"A": [ints], "B": [ints], "C": [ints]} or {"S": [ints]}.
// A single set is interpreted as A = B = C = S; wasSingleSet reports which
// form was read. Throws std::invalid_argument on malformed input.
ThreeSumInstance read_sets_json(std::istream& in, bool* wasSingleSet = nullptr);
ThreeSumInstance read_sets_file(const std::string& path, bool* wasSingleSet = nullptr);

std::string sets_to_json(const ThreeSumInstance& inst, int indent = 2);

// Schema-versioned transcript dump; the answer field is a triple or null.
std::string transcript_to_json(const ReductionTranscript& t, int indent = 2);

}  // namespace dihedral

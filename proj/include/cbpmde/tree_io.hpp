#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "cbpmde/tree.hpp"

namespace cbpmde {

// Family-tree CSV: one row per generation,
//   generation,Z,phi,k:count,k:count,...
// with only the nonzero offspring-count buckets listed; the terminal row
// carries just generation and Z.
void write_tree_csv(std::ostream& out, const FamilyTree& tree);
std::string tree_to_csv(const FamilyTree& tree);

// Parse error messages name the offending 1-based line.
struct TreeParseError : std::runtime_error {
    int line;
    TreeParseError(int line_number, const std::string& what);
};

FamilyTree parse_tree_csv(std::istream& in);
FamilyTree parse_tree_csv_string(const std::string& text);

}  // namespace cbpmde

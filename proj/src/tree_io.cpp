#include "cbpmde/tree_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace cbpmde {

TreeParseError::TreeParseError(int line_number, const std::string& what)
    : std::runtime_error("line " + std::to_string(line_number) + ": " + what),
      line(line_number) {}

void write_tree_csv(std::ostream& out, const FamilyTree& tree) {
    out << "generation,Z,phi,counts\n";
    for (std::size_t l = 0; l < tree.generations(); ++l) {
        out << l << ',' << tree.z[l] << ',' << tree.phi[l];
        for (std::size_t k = 0; k < tree.counts[l].size(); ++k) {
            if (tree.counts[l][k] != 0) out << ',' << k << ':' << tree.counts[l][k];
        }
        out << '\n';
    }
    out << tree.generations() << ',' << tree.z.back() << '\n';
}

std::string tree_to_csv(const FamilyTree& tree) {
    std::ostringstream os;
    write_tree_csv(os, tree);
    return os.str();
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::int64_t parse_int(const std::string& field, int line, const char* what) {
    std::int64_t value = 0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw TreeParseError(line, std::string("malformed ") + what + " '" + field + "'");
    return value;
}

}  // namespace

FamilyTree parse_tree_csv(std::istream& in) {
    std::string line;
    int lineno = 0;

    if (!std::getline(in, line)) throw TreeParseError(1, "missing header");
    ++lineno;
    if (split(line, ',').size() < 3 || split(line, ',')[0] != "generation")
        throw TreeParseError(lineno, "expected 'generation,Z,phi,counts' header");

    FamilyTree tree;
    bool saw_terminal = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (saw_terminal) throw TreeParseError(lineno, "data after the terminal row");
        const auto fields = split(line, ',');
        const std::int64_t gen = parse_int(fields[0], lineno, "generation");
        if (gen != static_cast<std::int64_t>(tree.phi.size()))
            throw TreeParseError(lineno, "generations out of order");
        if (fields.size() < 2) throw TreeParseError(lineno, "missing Z column");
        const std::int64_t z = parse_int(fields[1], lineno, "Z");

        if (fields.size() == 2) {  // terminal row
            tree.z.push_back(z);
            saw_terminal = true;
            continue;
        }

        const std::int64_t phi = parse_int(fields[2], lineno, "phi");
        std::vector<std::int64_t> row;
        for (std::size_t i = 3; i < fields.size(); ++i) {
            const auto pair = split(fields[i], ':');
            if (pair.size() != 2)
                throw TreeParseError(lineno, "malformed k:count pair '" + fields[i] + "'");
            const std::int64_t k = parse_int(pair[0], lineno, "offspring count k");
            const std::int64_t count = parse_int(pair[1], lineno, "count");
            if (k < 0) throw TreeParseError(lineno, "negative offspring count");
            if (k >= static_cast<std::int64_t>(row.size()))
                row.resize(static_cast<std::size_t>(k) + 1, 0);
            row[static_cast<std::size_t>(k)] = count;
        }
        tree.z.push_back(z);
        tree.phi.push_back(phi);
        tree.counts.push_back(std::move(row));
    }
    if (!saw_terminal) throw TreeParseError(lineno + 1, "missing terminal row");
    if (!tree.is_valid()) throw TreeParseError(lineno, "family-tree bookkeeping violated");
    return tree;
}

FamilyTree parse_tree_csv_string(const std::string& text) {
    std::istringstream is(text);
    return parse_tree_csv(is);
}

}  // namespace cbpmde

#pragma once

// Points CSV: one point per row, d coordinate columns then the weight.
// Fields are decimals or a/b fractions and are read exactly. Blank lines
// and lines starting with '#' are skipped; a first row whose leading field
// is not a number is taken as a header.

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ppart/points.hpp"
#include "ppart/ranges.hpp"

namespace ppart {

// Throws ParseError with "line N" locations.
WeightedPointSet read_points_csv(std::istream& in);
WeightedPointSet read_points_csv_file(const std::string& path);
void write_points_csv(std::ostream& out, const WeightedPointSet& P, bool header = true);

// A JSON array of ranges, or an object {"ranges": [...]}.
std::vector<SemialgebraicRange> ranges_from_json(const nlohmann::json& j);
std::vector<SemialgebraicRange> read_ranges_file(const std::string& path);
nlohmann::json ranges_to_json(const std::vector<SemialgebraicRange>& ranges);

// Whole-file JSON parse; ParseError carries the byte offset.
nlohmann::json read_json_file(const std::string& path);

}  // namespace ppart

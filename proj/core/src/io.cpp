#include "ppart/io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ppart/errors.hpp"

namespace ppart {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

}  // namespace

WeightedPointSet read_points_csv(std::istream& in) {
  WeightedPointSet P;
  std::string line;
  std::size_t line_no = 0;
  bool first_row = true;
  int dim = -1;
  RationalPoint p;
  while (std::getline(in, line)) {
    ++line_no;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto fields = split_fields(line);
    const std::string where = "line " + std::to_string(line_no);
    if (first_row) {
      first_row = false;
      try {
        (void)parse_rational(fields.front());
      } catch (const ParseError&) {
        continue;  // header
      }
    }
    if (fields.size() < 2) throw ParseError("need at least one coordinate and a weight", where);
    if (dim < 0) {
      dim = static_cast<int>(fields.size()) - 1;
      P = WeightedPointSet(dim);
    } else if (static_cast<int>(fields.size()) != dim + 1) {
      throw ParseError("expected " + std::to_string(dim + 1) + " fields, found " + std::to_string(fields.size()), where);
    }
    p.resize(static_cast<std::size_t>(dim));
    try {
      for (int v = 0; v < dim; ++v) p[static_cast<std::size_t>(v)] = parse_rational(fields[static_cast<std::size_t>(v)]);
      const Rational w = parse_rational(fields.back());
      if (sgn(w) < 0) throw ParseError("negative weight");
      P.add(p, w);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), where);
    }
  }
  if (dim < 0) throw ParseError("no points found");
  return P;
}

WeightedPointSet read_points_csv_file(const std::string& path) {
  auto in = open_or_throw(path);
  try {
    return read_points_csv(in);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), path);
  }
}

void write_points_csv(std::ostream& out, const WeightedPointSet& P, bool header) {
  if (header) {
    for (int v = 0; v < P.dimension(); ++v) out << 'x' << (v + 1) << ',';
    out << "weight\n";
  }
  for (std::size_t i = 0; i < P.size(); ++i) {
    for (const auto& c : P.point(i)) out << to_decimal_string(c) << ',';
    out << to_decimal_string(P.weight(i)) << '\n';
  }
}

std::vector<SemialgebraicRange> ranges_from_json(const nlohmann::json& j) {
  const nlohmann::json* arr = &j;
  if (j.is_object()) {
    if (!j.contains("ranges")) throw ParseError("expected an array of ranges or an object with \"ranges\"");
    arr = &j.at("ranges");
  }
  if (!arr->is_array()) throw ParseError("\"ranges\" must be an array");
  std::vector<SemialgebraicRange> out;
  out.reserve(arr->size());
  for (std::size_t i = 0; i < arr->size(); ++i) {
    try {
      out.push_back(range_from_json((*arr)[i]));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), "$.ranges[" + std::to_string(i) + "]");
    }
  }
  return out;
}

std::vector<SemialgebraicRange> read_ranges_file(const std::string& path) {
  try {
    return ranges_from_json(read_json_file(path));
  } catch (const ParseError& e) {
    throw ParseError(e.what(), path);
  }
}

nlohmann::json ranges_to_json(const std::vector<SemialgebraicRange>& ranges) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : ranges) arr.push_back(to_json(r));
  return {{"ranges", std::move(arr)}};
}

nlohmann::json read_json_file(const std::string& path) {
  auto in = open_or_throw(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(e.what(), path + ": byte " + std::to_string(e.byte));
  }
}

}  // namespace ppart

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "bbl/bbl.hpp"
#include "bbl/finsler.hpp"
#include "bbl/grid.hpp"
#include "bbl/ot.hpp"
#include "bbl/polygon.hpp"
#include "bbl/sets.hpp"

namespace bbl::io {

using json = nlohmann::json;

inline constexpr const char* kSchema = "bbl-lab/1";

// Command-line set literal:
//   box:x0,...,x1,...   lower corner then upper corner (1 to 3 dimensions)
//   disk:cx,cy,r        euclidean disc
//   ball:rho,phi,r      geodesic ball about from_polar(rho, phi) on a curved plane
//   file:path           CSV grid file with a JSON header next to it
struct SetLiteral {
  enum class Kind { box, disk, ball, file };
  Kind kind = Kind::box;
  std::vector<double> args;
  std::string path;
  std::string text;
};

SetLiteral parse_set_literal(const std::string& text);
DiscreteSet rasterize(const SetLiteral& lit, const GridPtr& grid);
// axis-aligned bounds of a euclidean literal: lo then hi, one entry per axis
void literal_bounds(const SetLiteral& lit, std::vector<double>& lo, std::vector<double>& hi);

// Grid header {schema, space:{kind,n,k}, chart, h, origin, counts[, rho_max]}.
json grid_header(const Grid& G);
GridPtr grid_from_header(const json& j);

struct GridFile {
  GridPtr grid;
  std::vector<double> values;
};

// "x.csv" -> "x.json"
std::string header_path(const std::string& csv_path);
// The CSV is the flat cell array in grid order, counts[0] values per line.
GridFile read_grid_csv(const std::string& csv_path);
GridFile parse_grid_csv(std::istream& csv, const json& header);
void write_grid_csv(const std::string& csv_path, const Grid& G, const std::vector<double>& values);

json read_json_file(const std::string& path);
// parse with line/column diagnostics
json parse_json(const std::string& text);

json space_json(const ModelSpace& M);
ModelSpace space_from_json(const json& j);
json point_json(const Point& x);
Point point_from_json(const ModelSpace& M, const json& j);
json polygon_json(const Polygon& P);
json cloud_json(const WeightedCloud& c);
WeightedCloud cloud_from_json(const json& j);
json plan_json(const TransportPlan& plan);
json report_json(const DeficitReport& r);
json diagnostics_json(const EqualityDiagnostics& d);
json dubuc_fit_json(const DubucFit& f);
json quantitative_bm_json(const QuantitativeBM& q);
json distorted_bm_json(const DistortedBM& d);
json minkowski_bm_json(const MinkowskiBM& b);
json homothety_json(const HomothetyTest& t);

// doubles with 17 significant digits, non-finite values as strings
std::string format_double(double x);
std::string dump(const json& j, int indent = 2);

}  // namespace bbl::io

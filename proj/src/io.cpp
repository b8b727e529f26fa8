#include "bbl/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "bbl/errors.hpp"

namespace bbl::io {

namespace {

std::vector<double> parse_numbers(const std::string& text, std::size_t offset) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    std::string tok = text.substr(pos, end - pos);
    std::size_t used = 0;
    double v = 0;
    bool ok = !tok.empty();
    if (ok) {
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        ok = false;
      }
    }
    if (!ok || used != tok.size()) throw ParseError("bad number '" + tok + "'", 1, static_cast<int>(offset + pos + 1));
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void dump_rec(std::ostringstream& os, const json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{" << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << "," << nl;
        first = false;
        os << pad << json(it.key()).dump() << (indent > 0 ? ": " : ":");
        dump_rec(os, it.value(), indent, depth + 1);
      }
      os << nl << close << "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // arrays of scalars stay on one line
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      os << "[";
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << (flat ? ", " : ",");
        if (!flat) os << nl << pad;
        first = false;
        dump_rec(os, e, indent, depth + 1);
      }
      if (!flat) os << nl << close;
      os << "]";
      return;
    }
    case json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace

SetLiteral parse_set_literal(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ParseError("set literal needs a kind prefix (box:, disk:, ball:, file:)", 1, 1);
  SetLiteral lit;
  lit.text = text;
  const std::string kind = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  if (kind == "file") {
    if (rest.empty()) throw ParseError("file: literal needs a path", 1, static_cast<int>(colon + 2));
    lit.kind = SetLiteral::Kind::file;
    lit.path = rest;
    return lit;
  }
  lit.args = parse_numbers(rest, colon + 1);
  if (kind == "box") {
    lit.kind = SetLiteral::Kind::box;
    if (lit.args.size() % 2 != 0 || lit.args.empty() || lit.args.size() > 6)
      throw ParseError("box: expects lower and upper corners in 1 to 3 dimensions", 1, static_cast<int>(colon + 2));
    const std::size_t n = lit.args.size() / 2;
    for (std::size_t d = 0; d < n; ++d)
      if (!(lit.args[d] < lit.args[n + d])) throw ParseError("box: lower corner must be below upper corner", 1, static_cast<int>(colon + 2));
  } else if (kind == "disk" || kind == "ball") {
    lit.kind = kind == "disk" ? SetLiteral::Kind::disk : SetLiteral::Kind::ball;
    if (lit.args.size() != 3) throw ParseError(kind + ": expects three numbers", 1, static_cast<int>(colon + 2));
    if (!(lit.args[2] > 0)) throw ParseError(kind + ": radius must be positive", 1, static_cast<int>(colon + 2));
  } else {
    throw ParseError("unknown set kind '" + kind + "'", 1, 1);
  }
  return lit;
}

void literal_bounds(const SetLiteral& lit, std::vector<double>& lo, std::vector<double>& hi) {
  switch (lit.kind) {
    case SetLiteral::Kind::box: {
      const std::size_t n = lit.args.size() / 2;
      lo.assign(lit.args.begin(), lit.args.begin() + static_cast<long>(n));
      hi.assign(lit.args.begin() + static_cast<long>(n), lit.args.end());
      return;
    }
    case SetLiteral::Kind::disk:
      lo = {lit.args[0] - lit.args[2], lit.args[1] - lit.args[2]};
      hi = {lit.args[0] + lit.args[2], lit.args[1] + lit.args[2]};
      return;
    default:
      throw UnsupportedError("bounds are only defined for box: and disk: literals");
  }
}

DiscreteSet rasterize(const SetLiteral& lit, const GridPtr& grid) {
  const ModelSpace& M = grid->space();
  switch (lit.kind) {
    case SetLiteral::Kind::box: {
      const std::size_t n = lit.args.size() / 2;
      if (M.kind() != SpaceKind::euclidean || static_cast<int>(n) != M.n())
        throw DomainError("box literal does not match the grid dimension");
      return box_set(grid, std::vector<double>(lit.args.begin(), lit.args.begin() + static_cast<long>(n)),
                     std::vector<double>(lit.args.begin() + static_cast<long>(n), lit.args.end()));
    }
    case SetLiteral::Kind::disk:
      if (M.kind() != SpaceKind::euclidean || M.n() != 2) throw DomainError("disk literal needs a euclidean plane");
      return ball_set(grid, M.euclidean_point({lit.args[0], lit.args[1]}), lit.args[2]);
    case SetLiteral::Kind::ball:
      if (M.kind() == SpaceKind::euclidean) {
        const double r = lit.args[0], phi = lit.args[1];
        return ball_set(grid, M.euclidean_point({r * std::cos(phi), r * std::sin(phi)}), lit.args[2]);
      }
      return ball_set(grid, M.from_polar(lit.args[0], lit.args[1]), lit.args[2]);
    case SetLiteral::Kind::file: {
      const GridFile f = read_grid_csv(lit.path);
      if (!f.grid->same_layout(*grid)) throw DomainError("grid of " + lit.path + " differs from the working grid");
      std::vector<std::uint8_t> mask(f.values.size());
      for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = f.values[i] != 0;
      return DiscreteSet::from_mask(grid, std::move(mask));
    }
  }
  throw DomainError("unreachable set literal");
}

json space_json(const ModelSpace& M) { return {{"kind", to_string(M.kind())}, {"n", M.n()}, {"k", M.k()}}; }

ModelSpace space_from_json(const json& j) {
  try {
    const SpaceKind kind = space_kind_from_string(j.at("kind").get<std::string>());
    const int n = j.at("n").get<int>();
    const double k = j.contains("k") ? j.at("k").get<double>()
                                     : (kind == SpaceKind::sphere ? 1.0 : kind == SpaceKind::hyperbolic ? -1.0 : 0.0);
    return ModelSpace::make(kind, n, k);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad space description: ") + e.what(), 0, 0);
  }
}

json grid_header(const Grid& G) {
  json j;
  j["schema"] = kSchema;
  j["space"] = space_json(G.space());
  j["h"] = G.h();
  const int D = G.index_dims();
  j["counts"] = std::vector<int>(G.counts().begin(), G.counts().begin() + D);
  switch (G.chart()) {
    case Grid::Chart::tensor:
      j["chart"] = "tensor";
      j["origin"] = std::vector<double>(G.origin().begin(), G.origin().begin() + D);
      break;
    case Grid::Chart::latlon: j["chart"] = "latlon"; break;
    case Grid::Chart::polar:
      j["chart"] = "polar";
      j["rho_max"] = G.rho_max();
      break;
  }
  return j;
}

GridPtr grid_from_header(const json& j) {
  try {
    const ModelSpace M = space_from_json(j.at("space"));
    const std::string chart = j.value("chart", std::string("tensor"));
    const auto counts = j.at("counts").get<std::vector<int>>();
    if (chart == "tensor") {
      const auto origin = j.at("origin").get<std::vector<double>>();
      const int n = M.n();
      if (static_cast<int>(counts.size()) != n || static_cast<int>(origin.size()) != n)
        throw ParseError("counts/origin do not match the dimension", 0, 0);
      std::array<double, 3> o{0, 0, 0};
      std::array<int, 3> c{1, 1, 1};
      for (int d = 0; d < n; ++d) {
        o[d] = origin[d];
        c[d] = counts[d];
      }
      return Grid::euclidean(n, o, j.at("h").get<double>(), c);
    }
    if (counts.size() != 2) throw ParseError("curved grids need two counts", 0, 0);
    if (chart == "latlon") return Grid::sphere(M, counts[0], counts[1]);
    if (chart == "polar") return Grid::hyperbolic_polar(M, j.at("rho_max").get<double>(), counts[0], counts[1]);
    throw ParseError("unknown chart '" + chart + "'", 0, 0);
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad grid header: ") + e.what(), 0, 0);
  }
}

std::string header_path(const std::string& csv_path) {
  const auto dot = csv_path.find_last_of('.');
  const auto slash = csv_path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return csv_path + ".json";
  return csv_path.substr(0, dot) + ".json";
}

GridFile parse_grid_csv(std::istream& csv, const json& header) {
  GridFile out;
  out.grid = grid_from_header(header);
  const std::size_t width = static_cast<std::size_t>(out.grid->counts()[0]);
  const std::size_t rows = out.grid->size() / width;
  out.values.reserve(out.grid->size());
  std::string line;
  int lineno = 0;
  std::size_t row = 0;
  while (std::getline(csv, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (row == rows) throw ParseError("more rows than the header declares", lineno, 1);
    std::size_t pos = 0, count = 0;
    while (true) {
      std::size_t end = line.find(',', pos);
      if (end == std::string::npos) end = line.size();
      const char* b = line.data() + pos;
      const char* e = line.data() + end;
      while (b < e && (*b == ' ' || *b == '\t')) ++b;
      while (e > b && (e[-1] == ' ' || e[-1] == '\t')) --e;
      double v = 0;
      auto [p, ec] = std::from_chars(b, e, v);
      if (ec != std::errc() || p != e || b == e)
        throw ParseError("bad number '" + std::string(b, e) + "'", lineno, static_cast<int>(pos + 1));
      if (!(v >= 0) || !std::isfinite(v)) throw ParseError("values must be finite and >= 0", lineno, static_cast<int>(pos + 1));
      out.values.push_back(v);
      ++count;
      if (end == line.size()) break;
      pos = end + 1;
    }
    if (count != width)
      throw ParseError("expected " + std::to_string(width) + " values, found " + std::to_string(count), lineno, 1);
    ++row;
  }
  if (row != rows)
    throw ParseError("expected " + std::to_string(rows) + " rows, found " + std::to_string(row), lineno + 1, 1);
  return out;
}

GridFile read_grid_csv(const std::string& csv_path) {
  const json header = read_json_file(header_path(csv_path));
  std::ifstream in(csv_path);
  if (!in) throw DomainError("cannot open " + csv_path);
  try {
    return parse_grid_csv(in, header);
  } catch (const ParseError& e) {
    throw ParseError(csv_path + ": " + e.message(), e.line(), e.column());
  }
}

void write_grid_csv(const std::string& csv_path, const Grid& G, const std::vector<double>& values) {
  if (values.size() != G.size()) throw DomainError("value count does not match the grid");
  std::ofstream out(csv_path);
  if (!out) throw DomainError("cannot write " + csv_path);
  const std::size_t width = static_cast<std::size_t>(G.counts()[0]);
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << format_double(values[i]) << ((i + 1) % width == 0 ? "\n" : ",");
  }
  std::ofstream hdr(header_path(csv_path));
  if (!hdr) throw DomainError("cannot write " + header_path(csv_path));
  hdr << dump(grid_header(G)) << "\n";
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ParseError(e.what(), line, col);
  }
}

json read_json_file(const std::string& path) {
  const std::string text = read_text(path);
  try {
    return parse_json(text);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.message(), e.line(), e.column());
  }
}

json point_json(const Point& x) { return std::vector<double>(x.c.begin(), x.c.begin() + x.dim); }

Point point_from_json(const ModelSpace& M, const json& j) {
  if (!j.is_array() || static_cast<int>(j.size()) != M.ambient_dim())
    throw ParseError("point must be an array of " + std::to_string(M.ambient_dim()) + " numbers", 0, 0);
  Point x;
  x.dim = M.ambient_dim();
  for (int d = 0; d < x.dim; ++d) x[d] = j[static_cast<std::size_t>(d)].get<double>();
  if (M.kind() != SpaceKind::euclidean) {
    if (!M.contains(x, 1e-9)) throw DomainError("point does not lie on the model");
    x = M.normalize(x);
  }
  return x;
}

json polygon_json(const Polygon& P) {
  json a = json::array();
  for (const auto& v : P.v) a.push_back({v[0], v[1]});
  return a;
}

json cloud_json(const WeightedCloud& c) {
  json pts = json::array();
  for (const auto& x : c.points) pts.push_back(point_json(x));
  return {{"space", space_json(c.space)}, {"points", pts}, {"masses", c.masses}};
}

WeightedCloud cloud_from_json(const json& j) {
  try {
    WeightedCloud c;
    c.space = space_from_json(j.at("space"));
    for (const auto& p : j.at("points")) c.points.push_back(point_from_json(c.space, p));
    if (j.contains("masses")) {
      c.masses = j.at("masses").get<std::vector<double>>();
      if (c.masses.size() != c.points.size()) throw ParseError("masses and points differ in length", 0, 0);
      for (double m : c.masses)
        if (!(m > 0)) throw DomainError("cloud masses must be positive");
      return normalized(std::move(c));
    }
    return uniform_cloud(c.space, std::move(c.points));
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad cloud: ") + e.what(), 0, 0);
  }
}

json plan_json(const TransportPlan& plan) {
  json cp = json::array();
  for (const auto& c : plan.couplings) cp.push_back({{"i", c.i}, {"j", c.j}, {"mass", c.mass}});
  return {{"schema", kSchema},
          {"space", space_json(plan.source.space)},
          {"source_size", plan.source.size()},
          {"target_size", plan.target.size()},
          {"cost", plan.cost},
          {"marginal_violation", plan.marginal_violation()},
          {"couplings", cp}};
}

json diagnostics_json(const EqualityDiagnostics& d) {
  json j = {{"support", d.support}, {"jacobian", d.jacobian}, {"ratio", d.ratio}, {"max_residual", d.max_residual()}};
  if (d.lower_endpoint) j["mass_balance"] = d.mass_balance;
  return j;
}

json report_json(const DeficitReport& r) {
  json j = {{"schema", kSchema},
            {"deficit", r.deficit},
            {"lower_bound", r.lower_bound},
            {"margin", r.margin},
            {"discretization_error", r.discretization_error},
            {"h", r.h},
            {"calibrated_c", r.calibrated_c},
            {"bound_holds", r.bound_holds}};
  if (r.diagnostics) j["diagnostics"] = diagnostics_json(*r.diagnostics);
  return j;
}

json dubuc_fit_json(const DubucFit& f) {
  return {{"schema", kSchema},       {"c0", f.c0},
          {"x0", f.x0},              {"t", f.t},
          {"convexity", f.convexity}, {"support_g", f.support_g},
          {"support_h", f.support_h}, {"function_g", f.function_g},
          {"function_h", f.function_h}, {"concavity", f.concavity},
          {"ok", f.ok}};
}

json quantitative_bm_json(const QuantitativeBM& q) {
  json j = {{"schema", kSchema},
            {"deficit", q.deficit},
            {"bound", q.bound},
            {"discretization_error", q.discretization_error},
            {"holds", q.holds},
            {"measure_a", q.measure_a},
            {"measure_b", q.measure_b},
            {"measure_z", q.measure_z}};
  if (q.closed_form_bound) j["closed_form_bound"] = *q.closed_form_bound;
  return j;
}

json distorted_bm_json(const DistortedBM& d) {
  json j = {{"schema", kSchema}, {"theta", d.theta}, {"void", d.void_inequality}};
  if (!d.void_inequality) {
    j["lhs"] = d.lhs;
    j["rhs"] = d.rhs;
    j["deficit"] = d.deficit;
    j["tol"] = d.tol;
    j["holds"] = d.holds;
  }
  return j;
}

json minkowski_bm_json(const MinkowskiBM& b) {
  return {{"lhs", b.lhs},       {"rhs", b.rhs},       {"deficit", b.deficit}, {"tol", b.tol},
          {"area_a", b.area_a}, {"area_b", b.area_b}, {"area_z", b.area_z}};
}

json homothety_json(const HomothetyTest& t) {
  return {{"translate", t.translate}, {"residual", t.residual}, {"shift", {t.shift[0], t.shift[1]}}};
}

std::string format_double(double x) {
  if (std::isnan(x)) return "\"nan\"";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump(const json& j, int indent) {
  std::ostringstream os;
  dump_rec(os, j, indent, 0);
  return os.str();
}

}  // namespace bbl::io

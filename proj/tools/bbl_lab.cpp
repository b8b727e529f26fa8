// bbl_lab: command-line front end.
//
//   bbl_lab gap sweep [--samples N] [--seed S] [--out file.csv]
//   bbl_lab ot solve --exact|--entropic (--mu c.json --nu c.json | --A set --B set)
//   bbl_lab bbl deficit|bound|diagnose --f set --g set [--h set] --s S --p P
//   bbl_lab bbl dubuc-fit --f set --g set --h set --s S --p P
//   bbl_lab bbl bm --A set --B set --s S --p P [--grid]
//   bbl_lab bbl distorted-bm --space sphere|hyperbolic --A ball:... --B ball:... --s S
//   bbl_lab finsler balls --norm randers|matsumoto|euclidean [--svg out.svg]
//
// Exit codes: 0 success, 2 inequality violated beyond tolerance, 1 usage or domain error.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "bbl/bbl.hpp"
#include "bbl/errors.hpp"
#include "bbl/finsler.hpp"
#include "bbl/gap.hpp"
#include "bbl/io.hpp"
#include "bbl/ot.hpp"

using namespace bbl;
using io::json;

namespace {

constexpr int kViolation = 2;

struct Common {
  std::string out;
  std::string space = "euclidean";
  double k = 0;
  double spacing = 1.0 / 64;
  int resolution = 160;
};

void emit(const Common& c, const std::string& text) {
  if (c.out.empty() || c.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw DomainError("cannot write " + c.out);
  f << text;
}

void emit_json(const Common& c, const json& j) { emit(c, io::dump(j) + "\n"); }

double parse_angle(const std::string& text) {
  std::string t = text;
  bool deg = false;
  if (t.size() > 3 && t.compare(t.size() - 3, 3, "deg") == 0) {
    deg = true;
    t.resize(t.size() - 3);
  }
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != t.size()) throw ParseError("bad angle '" + text + "'", 1, 1);
  return deg ? v * std::numbers::pi / 180 : v;
}

std::vector<double> parse_list(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size()) throw ParseError(std::string("bad number in ") + what, 1, 1);
    out.push_back(v);
  }
  if (out.size() != expected) throw ParseError(std::string(what) + " expects " + std::to_string(expected) + " numbers", 1, 1);
  return out;
}

// Working grid for a list of literals: a file literal fixes it; otherwise a
// padded bounding grid (euclidean) or a chart grid (curved).
GridPtr working_grid(const Common& c, const std::vector<io::SetLiteral>& lits) {
  for (const auto& l : lits)
    if (l.kind == io::SetLiteral::Kind::file) return io::read_grid_csv(l.path).grid;
  const SpaceKind kind = space_kind_from_string(c.space);
  if (kind == SpaceKind::euclidean) {
    std::vector<double> lo, hi;
    for (const auto& l : lits) {
      std::vector<double> a, b;
      io::literal_bounds(l, a, b);
      if (lo.empty()) {
        lo = a;
        hi = b;
      } else {
        if (a.size() != lo.size()) throw DomainError("set literals disagree on the dimension");
        for (std::size_t d = 0; d < a.size(); ++d) {
          lo[d] = std::min(lo[d], a[d]);
          hi[d] = std::max(hi[d], b[d]);
        }
      }
    }
    if (lo.empty()) throw DomainError("no sets given");
    if (!(c.spacing > 0)) throw DomainError("--spacing must be positive");
    const int n = static_cast<int>(lo.size());
    std::array<double, 3> origin{0, 0, 0};
    std::array<int, 3> counts{1, 1, 1};
    for (int d = 0; d < n; ++d) {
      origin[d] = lo[d] - 2 * c.spacing;
      counts[d] = static_cast<int>(std::ceil((hi[d] - lo[d]) / c.spacing - 1e-9)) + 4;
    }
    return Grid::euclidean(n, origin, c.spacing, counts);
  }
  const double k = c.k != 0 ? c.k : (kind == SpaceKind::sphere ? 1.0 : -1.0);
  const ModelSpace M = ModelSpace::make(kind, 2, k);
  if (c.resolution < 8) throw DomainError("--resolution must be at least 8");
  if (kind == SpaceKind::sphere) return Grid::sphere(M, c.resolution, 2 * c.resolution);
  double rho = 0;
  for (const auto& l : lits) {
    if (l.kind != io::SetLiteral::Kind::ball) throw DomainError("hyperbolic sets must be ball: literals");
    rho = std::max(rho, l.args[0] + l.args[2]);
  }
  rho = rho * 1.05 + 0.05;
  return Grid::hyperbolic_polar(M, rho, c.resolution, 4 * c.resolution);
}

GridDensity density_from(const io::SetLiteral& l, const GridPtr& grid) {
  if (l.kind == io::SetLiteral::Kind::file) {
    io::GridFile f = io::read_grid_csv(l.path);
    if (!f.grid->same_layout(*grid)) throw DomainError("grid of " + l.path + " differs from the working grid");
    return GridDensity(grid, std::move(f.values));
  }
  return indicator(io::rasterize(l, grid));
}

TransportPlan plan_between(const GridDensity& f, const GridDensity& g, bool entropic, double epsilon,
                           double* blur) {
  *blur = 0;
  if (!entropic) return solve_exact(f.normalized_cloud(), g.normalized_cloud());
  SinkhornOptions opt;
  opt.epsilon = epsilon;
  *blur = std::sqrt(epsilon);
  if (f.grid().chart() == Grid::Chart::tensor) {
    std::vector<double> mu(f.grid().size()), nu(f.grid().size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
      mu[i] = f.value(i) * f.grid().volume(i) / f.mass();
      nu[i] = g.value(i) * g.grid().volume(i) / g.mass();
    }
    return solve_entropic_grid(f.grid(), mu, nu, opt).plan;
  }
  return solve_entropic(f.normalized_cloud(), g.normalized_cloud(), opt).plan;
}

void add_common(CLI::App* cmd, Common& c, bool with_space) {
  cmd->add_option("--out", c.out, "output file (default stdout)");
  cmd->add_option("--spacing", c.spacing, "euclidean grid spacing for set literals");
  if (with_space) {
    cmd->add_option("--space", c.space, "euclidean | sphere | hyperbolic")
        ->check(CLI::IsMember({"euclidean", "sphere", "hyperbolic"}));
    cmd->add_option("--k", c.k, "curvature (default +1 or -1)");
    cmd->add_option("--resolution", c.resolution, "curved grid: colatitude or radial cell count");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Borell-Brascamp-Lieb laboratory"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);
  int code = 0;

  // gap
  auto* gap_cmd = app.add_subcommand("gap", "gap function tools")->require_subcommand(1);
  Common gc;
  long samples = 100000;
  unsigned long seed = 7;
  auto* sweep = gap_cmd->add_subcommand("sweep", "random quantitative Holder checks as CSV");
  sweep->add_option("--samples", samples)->check(CLI::PositiveNumber);
  sweep->add_option("--seed", seed);
  sweep->add_option("--out", gc.out);
  sweep->callback([&] {
    std::mt19937_64 rng(seed);
    std::ostringstream os;
    os << "s,p,n,a,b,c,d,G,lhs,rhs,slack,pass\n";
    long violations = 0;
    for (long i = 0; i < samples; ++i) {
      const GapInput in = sample_gap_input(rng);
      const CheckResult r = quantitative_holder_check(in);
      if (!r.pass) ++violations;
      os << io::format_double(in.s) << ',' << in.p.str() << ',' << in.n << ',' << io::format_double(in.a) << ','
         << io::format_double(in.b) << ',' << io::format_double(in.c) << ',' << io::format_double(in.d) << ','
         << io::format_double(gap(in)) << ',' << io::format_double(r.lhs) << ',' << io::format_double(r.rhs) << ','
         << io::format_double(r.slack) << ',' << (r.pass ? 1 : 0) << '\n';
    }
    emit(gc, os.str());
    if (violations > 0) {
      std::cerr << violations << " violations\n";
      code = kViolation;
    }
  });

  // ot
  auto* ot_cmd = app.add_subcommand("ot", "optimal transport")->require_subcommand(1);
  Common oc;
  bool exact = false, entropic = false;
  std::string mu_path, nu_path, ot_a, ot_b;
  double epsilon = 1e-3;
  auto* solve = ot_cmd->add_subcommand("solve", "solve a transport problem, cost d^2/2");
  add_common(solve, oc, true);
  auto* fe = solve->add_flag("--exact", exact, "transportation simplex");
  auto* fn = solve->add_flag("--entropic", entropic, "log-domain Sinkhorn");
  fe->excludes(fn);
  solve->add_option("--mu", mu_path, "source cloud JSON");
  solve->add_option("--nu", nu_path, "target cloud JSON");
  solve->add_option("--A", ot_a, "source set literal");
  solve->add_option("--B", ot_b, "target set literal");
  solve->add_option("--epsilon", epsilon)->check(CLI::PositiveNumber);
  solve->callback([&] {
    if (!exact && !entropic) throw CLI::ValidationError("ot solve", "one of --exact or --entropic is required");
    WeightedCloud mu, nu;
    if (!mu_path.empty() || !nu_path.empty()) {
      if (mu_path.empty() || nu_path.empty()) throw CLI::ValidationError("ot solve", "--mu and --nu go together");
      mu = io::cloud_from_json(io::read_json_file(mu_path));
      nu = io::cloud_from_json(io::read_json_file(nu_path));
    } else {
      if (ot_a.empty() || ot_b.empty()) throw CLI::ValidationError("ot solve", "give --mu/--nu or --A/--B");
      const auto la = io::parse_set_literal(ot_a), lb = io::parse_set_literal(ot_b);
      const GridPtr grid = working_grid(oc, {la, lb});
      mu = indicator_cloud(io::rasterize(la, grid));
      nu = indicator_cloud(io::rasterize(lb, grid));
    }
    json j;
    if (exact) {
      j = io::plan_json(solve_exact(mu, nu));
    } else {
      SinkhornOptions opt;
      opt.epsilon = epsilon;
      const EntropicResult r = solve_entropic(mu, nu, opt);
      j = io::plan_json(r.plan);
      j["sinkhorn"] = {{"iterations", r.report.iterations},
                       {"marginal_violation", r.report.marginal_violation},
                       {"converged", r.report.converged},
                       {"epsilon", r.report.epsilon}};
    }
    emit_json(oc, j);
  });

  // bbl
  auto* bbl_cmd = app.add_subcommand("bbl", "Borell-Brascamp-Lieb deficits")->require_subcommand(1);
  Common bc;
  std::string f_lit, g_lit, h_lit, a_lit, b_lit, p_text = "0";
  double s = 0.5;
  bool use_entropic = false, force_grid = false;
  unsigned long fit_seed = 1;

  auto density_cmd = [&](const std::string& name, const std::string& help) {
    auto* cmd = bbl_cmd->add_subcommand(name, help);
    add_common(cmd, bc, true);
    cmd->add_option("--f", f_lit, "density f (set literal or file:)")->required();
    cmd->add_option("--g", g_lit, "density g")->required();
    cmd->add_option("--h", h_lit, "density h (default: smallest admissible h)");
    cmd->add_option("--s", s)->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--p", p_text, "exponent: number, a/b, -1/n, inf");
    cmd->add_flag("--entropic", use_entropic, "use entropic transport");
    cmd->add_option("--epsilon", epsilon)->check(CLI::PositiveNumber);
    return cmd;
  };

  struct Triple {
    GridDensity f, g, h;
    Exponent p;
  };
  auto load_triple = [&]() {
    std::vector<io::SetLiteral> lits{io::parse_set_literal(f_lit), io::parse_set_literal(g_lit)};
    if (!h_lit.empty()) lits.push_back(io::parse_set_literal(h_lit));
    const GridPtr grid = working_grid(bc, lits);
    Triple t;
    t.p = Exponent::parse(p_text, grid->space().n());
    t.f = density_from(lits[0], grid);
    t.g = density_from(lits[1], grid);
    t.h = h_lit.empty() ? admissible_h(t.f, t.g, s, t.p) : density_from(lits[2], grid);
    return t;
  };

  auto* deficit_cmd = density_cmd("deficit", "normalized deficit of (f, g, h)");
  deficit_cmd->callback([&] {
    const Triple t = load_triple();
    const double d = deficit(t.f, t.g, t.h, s, t.p);
    const double err = discretization_error({&t.f, &t.g, &t.h});
    emit_json(bc, {{"schema", io::kSchema}, {"deficit", d}, {"discretization_error", err}});
    if (d < -err) code = kViolation;
  });
  auto report_cb = [&](bool diag) {
    const Triple t = load_triple();
    double blur = 0;
    const TransportPlan plan = plan_between(t.f, t.g, use_entropic, epsilon, &blur);
    const DeficitReport r = deficit_report(t.f, t.g, t.h, s, t.p, plan, blur, diag);
    emit_json(bc, io::report_json(r));
    if (!r.bound_holds) code = kViolation;
  };
  density_cmd("bound", "deficit against the gap-integral lower bound")->callback([&] { report_cb(false); });
  density_cmd("diagnose", "lower bound plus equality diagnostics")->callback([&] { report_cb(true); });

  auto* fit_cmd = density_cmd("dubuc-fit", "fit the homothetic normal form");
  fit_cmd->add_option("--seed", fit_seed);
  fit_cmd->callback([&] {
    if (h_lit.empty()) throw CLI::ValidationError("dubuc-fit", "--h is required");
    const Triple t = load_triple();
    emit_json(bc, io::dubuc_fit_json(dubuc_fit(t.f, t.g, t.h, s, t.p, static_cast<unsigned>(fit_seed))));
  });

  auto* bm_cmd = bbl_cmd->add_subcommand("bm", "quantitative Brunn-Minkowski");
  add_common(bm_cmd, bc, false);
  bm_cmd->add_option("--A", a_lit)->required();
  bm_cmd->add_option("--B", b_lit)->required();
  bm_cmd->add_option("--s", s)->check(CLI::Range(0.0, 1.0));
  bm_cmd->add_option("--p", p_text);
  bm_cmd->add_flag("--grid", force_grid, "rasterize boxes instead of the closed form");
  bm_cmd->callback([&] {
    const auto la = io::parse_set_literal(a_lit), lb = io::parse_set_literal(b_lit);
    QuantitativeBM q;
    json j;
    if (!force_grid && la.kind == io::SetLiteral::Kind::box && lb.kind == io::SetLiteral::Kind::box) {
      if (la.args.size() != lb.args.size()) throw DomainError("boxes of different dimension");
      const std::size_t n = la.args.size() / 2;
      auto half = [n](const std::vector<double>& v, bool upper) {
        return std::vector<double>(v.begin() + static_cast<long>(upper ? n : 0),
                                   v.begin() + static_cast<long>(upper ? 2 * n : n));
      };
      const Exponent p = Exponent::parse(p_text, static_cast<int>(n));
      q = quantitative_bm_boxes(half(la.args, false), half(la.args, true), half(lb.args, false),
                                half(lb.args, true), s, p);
      j = io::quantitative_bm_json(q);
      j["method"] = "closed-form";
    } else {
      const GridPtr grid = working_grid(bc, {la, lb});
      const Exponent p = Exponent::parse(p_text, grid->space().n());
      q = quantitative_bm(io::rasterize(la, grid), io::rasterize(lb, grid), s, p);
      j = io::quantitative_bm_json(q);
      j["method"] = "grid";
      j["h"] = grid->h();
    }
    emit_json(bc, j);
    if (!q.holds) code = kViolation;
  });

  auto* dbm_cmd = bbl_cmd->add_subcommand("distorted-bm", "curvature-distorted Brunn-Minkowski");
  add_common(dbm_cmd, bc, true);
  dbm_cmd->add_option("--A", a_lit)->required();
  dbm_cmd->add_option("--B", b_lit)->required();
  dbm_cmd->add_option("--s", s)->check(CLI::Range(0.0, 1.0));
  dbm_cmd->callback([&] {
    const auto la = io::parse_set_literal(a_lit), lb = io::parse_set_literal(b_lit);
    const GridPtr grid = working_grid(bc, {la, lb});
    const DistortedBM d = distorted_bm(io::rasterize(la, grid), io::rasterize(lb, grid), s);
    json j = io::distorted_bm_json(d);
    j["space"] = io::space_json(grid->space());
    j["h"] = grid->h();
    emit_json(bc, j);
    if (!d.void_inequality && !d.holds) code = kViolation;
  });

  // finsler
  auto* fin_cmd = app.add_subcommand("finsler", "Minkowski planes")->require_subcommand(1);
  Common fc;
  std::string norm = "randers", alpha_text = "35deg", svg_path, q_text = "5,-1,-1,1", b_text = "0.2,0.5";
  double speed = 6, gravity = MinkowskiNorm::kGravity, radius = 1, s_fin = 0.5;
  int m = kDefaultBallSamples;
  auto* balls = fin_cmd->add_subcommand("balls", "forward and backward balls of equal radius");
  balls->add_option("--out", fc.out);
  balls->add_option("--norm", norm)->check(CLI::IsMember({"randers", "matsumoto", "euclidean"}));
  balls->add_option("--Q", q_text, "randers matrix, row-major a,b,c,d");
  balls->add_option("--b", b_text, "randers drift b1,b2");
  balls->add_option("--alpha", alpha_text, "slope angle, radians or NNdeg");
  balls->add_option("--v", speed)->check(CLI::PositiveNumber);
  balls->add_option("--gravity", gravity);
  balls->add_option("--r", radius)->check(CLI::PositiveNumber);
  balls->add_option("--s", s_fin)->check(CLI::Range(0.0, 1.0));
  balls->add_option("--m", m)->check(CLI::Range(16, 1 << 20));
  balls->add_option("--svg", svg_path, "write both balls as SVG");
  balls->callback([&] {
    MinkowskiNorm F = MinkowskiNorm::scaled_euclidean(speed);
    if (norm == "randers") {
      const auto q = parse_list(q_text, 4, "--Q");
      const auto b = parse_list(b_text, 2, "--b");
      F = MinkowskiNorm::randers({q[0], q[1], q[2], q[3]}, {b[0], b[1]});
    } else if (norm == "matsumoto") {
      F = MinkowskiNorm::matsumoto(parse_angle(alpha_text), speed, gravity);
    }
    const Vec2 o{0, 0};
    const Polygon fwd = forward_ball(F, o, radius, m);
    const Polygon bwd = backward_ball(F, o, radius, m);
    const MinkowskiBM bm = minkowski_bm_deficit(F, o, radius, o, radius, s_fin, m);
    const HomothetyTest ht = homothety_test(F, o, radius, o, radius, m);
    json j = {{"schema", io::kSchema},           {"norm", F.describe()},
              {"m", m},                          {"radius", radius},
              {"bm", io::minkowski_bm_json(bm)}, {"homothety", io::homothety_json(ht)},
              {"forward", io::polygon_json(fwd)}, {"backward", io::polygon_json(bwd)}};
    if (!svg_path.empty()) {
      std::ofstream f(svg_path);
      if (!f) throw DomainError("cannot write " + svg_path);
      write_svg(f, {{F.describe(), fwd, bwd}});
      j["svg"] = svg_path;
    }
    emit_json(fc, j);
    if (bm.deficit < -bm.tol) code = kViolation;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "parse error at line " << e.line() << ", column " << e.column() << ": " << e.message() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return code;
}

#include "nibbled/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "nibbled/billiard.hpp"
#include "nibbled/criterion.hpp"
#include "nibbled/errors.hpp"
#include "nibbled/flatten.hpp"
#include "nibbled/flow.hpp"
#include "nibbled/io_json.hpp"
#include "nibbled/svg.hpp"
#include "nibbled/table.hpp"

namespace nibbled {
namespace {

constexpr double kDirection = std::numbers::pi / 4.0;
constexpr int kMaxReturnCrossings = 100000;

enum class Command {
  None,
  Validate,
  Render,
  Flatten,
  Surface,
  Criterion,
  Recurrence,
  Birkhoff,
  Trace,
};

struct RunConfig {
  Command command = Command::None;
  std::string table_path;
  std::string out_path;
  std::string interval = "auto";
  std::string format;
  int grid = 0;
  int samples = 0;
  long n = 10000;
  double horizon = 0.0;
  unsigned long long seed = 1;
  // Connection detection tolerance; fixed at the module default, and an
  // override could only ever tighten it.
  double connection_tol = 1e-12;
};

std::string csv_num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::mt19937_64 rng_for(unsigned long long seed, unsigned long long tag1,
                        unsigned long long tag2) {
  std::seed_seq seq{static_cast<unsigned>(seed), static_cast<unsigned>(seed >> 32),
                    static_cast<unsigned>(tag1), static_cast<unsigned>(tag2)};
  return std::mt19937_64(seq);
}

double unit_double(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail_domain(ErrorCode::UsageError, "cannot read input file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void deliver(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.out_path, std::ios::binary);
  if (!f) fail_domain(ErrorCode::UsageError, "cannot open output file: " + cfg.out_path);
  f << text;
}

void require_format(const RunConfig& cfg, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (cfg.format == a) return;
  std::string list;
  for (const char* a : allowed) {
    if (!list.empty()) list += ", ";
    list += a;
  }
  fail_domain(ErrorCode::UsageError,
              "unsupported output format \"" + cfg.format + "\" (choose from: " + list + ")");
}

std::vector<int> select_intervals(const ParameterPartition& part, const std::string& spec) {
  const int count = static_cast<int>(part.intervals.size());
  if (spec == "auto") {
    std::vector<int> all(count);
    for (int i = 0; i < count; ++i) all[i] = i;
    return all;
  }
  size_t pos = 0;
  int index = -1;
  try {
    index = std::stoi(spec, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != spec.size())
    fail_domain(ErrorCode::UsageError,
                "--interval expects an index or \"auto\", got \"" + spec + "\"");
  if (index < 0 || index >= count)
    fail_domain(ErrorCode::UsageError,
                "interval index " + std::to_string(index) + " out of range [0, " +
                    std::to_string(count - 1) + "]");
  return {index};
}

double midpoint(const Interval& J) { return 0.5 * (J.lo + J.hi); }

// ------------------------------------------------------------------ flatten

std::vector<std::vector<Vec2>> flattened_overlay(const NibbledEllipse& table, double s,
                                                 double ell_value,
                                                 const PhysicalTrajectory& traj) {
  std::vector<std::vector<Vec2>> overlays;
  std::vector<Vec2> current;
  Vec2 last{0.0, 0.0};
  const double jump = 0.75 * ell_value;
  for (const TrajectorySegment& seg : traj.segments) {
    for (int i = 0; i <= 32; ++i) {
      const Vec2 p = seg.start + (seg.end - seg.start) * (i / 32.0);
      Vec2 z;
      try {
        z = flatten_point(table, s, p);
      } catch (const Error&) {
        if (current.size() > 1) overlays.push_back(std::move(current));
        current.clear();
        continue;
      }
      if (!current.empty() && (z - last).norm() > jump) {
        if (current.size() > 1) overlays.push_back(std::move(current));
        current.clear();
      }
      current.push_back(z);
      last = z;
    }
  }
  if (current.size() > 1) overlays.push_back(std::move(current));
  return overlays;
}

// Boundary start tangent to the caustic s, pointing into the table.
BilliardState sample_tangent_start(const NibbledEllipse& table, double s,
                                   std::mt19937_64& rng) {
  const ConicFamily& fam = table.family();
  const std::vector<BoundaryArc> arcs = table.boundary_arcs();
  for (int attempt = 0; attempt < 400; ++attempt) {
    const BoundaryArc& arc = arcs[static_cast<size_t>(unit_double(rng) * arcs.size()) %
                                  arcs.size()];
    const double u = arc.lo + (arc.hi - arc.lo) * (0.02 + 0.96 * unit_double(rng));
    EllipticCoords ec;
    if (arc.is_tread) {
      ec.lambda1 = u;
      ec.lambda2 = arc.conic;
    } else {
      ec.lambda1 = arc.conic;
      ec.lambda2 = u;
    }
    Vec2 p;
    try {
      p = from_elliptic(fam, ec, quadrant_sx(arc.q), quadrant_sy(arc.q));
    } catch (const Error&) {
      continue;
    }
    std::vector<Vec2> dirs;
    try {
      dirs = tangent_directions(fam, p, s);
    } catch (const Error&) {
      continue;
    }
    for (Vec2 d : dirs)
      for (Vec2 cand : {d, d * -1.0})
        if (table.contains(p + cand * 1e-7) && !table.contains(p - cand * 1e-7))
          return {p, cand};
  }
  fail_domain(ErrorCode::DomainViolation,
              "no boundary start tangent to the requested caustic was found");
}

void cmd_flatten(const RunConfig& cfg, const NibbledEllipse& table, std::ostream& out) {
  require_format(cfg, {"json", "svg"});
  const int grid = cfg.grid > 0 ? cfg.grid : 1;
  ParameterPartition part = interval_partition(table);
  const std::vector<int> chosen = select_intervals(part, cfg.interval);

  std::vector<FlattenedSystem> systems;
  for (int idx : chosen) {
    const Interval& J = part.intervals[idx];
    for (int j = 0; j < grid; ++j) {
      const double s = J.lo + (J.hi - J.lo) * (j + 0.5) / grid;
      systems.push_back(build_flat_polygon(table, s));
    }
  }

  if (cfg.format == "json") {
    deliver(cfg, out, flat_systems_json(systems));
    return;
  }
  if (systems.size() != 1)
    fail_domain(ErrorCode::UsageError,
                "svg output renders one flattened polygon; select a single interval and "
                "--grid 1");
  const FlattenedSystem& sys = systems.front();
  std::vector<std::vector<Vec2>> overlays;
  if (cfg.horizon > 0.0) {
    std::mt19937_64 rng = rng_for(cfg.seed, static_cast<unsigned long long>(chosen[0]), 7);
    const BilliardState start = sample_tangent_start(table, sys.s, rng);
    const PhysicalTrajectory traj = billiard_trace(table, start, cfg.horizon);
    overlays = flattened_overlay(table, sys.s, sys.ell, traj);
  }
  deliver(cfg, out, svg_flat(sys, overlays));
}

// ------------------------------------------------------------------ surface

void cmd_surface(const RunConfig& cfg, const NibbledEllipse& table, std::ostream& out) {
  require_format(cfg, {"json"});
  ParameterPartition part = interval_partition(table);
  const std::vector<int> chosen = select_intervals(part, cfg.interval);
  std::vector<SurfaceReport> reports;
  for (int idx : chosen) {
    const double s = midpoint(part.intervals[idx]);
    const FlattenedSystem sys = build_flat_polygon(table, s);
    for (size_t c = 0; c < sys.components.size(); ++c) {
      SurfaceReport rep{s, idx, static_cast<int>(c),
                        unfold(sys.components[c].polygon), {}};
      rep.tables = enumerate_DBE(rep.surface);
      reports.push_back(std::move(rep));
    }
  }
  deliver(cfg, out, surface_reports_json(reports));
}

// ---------------------------------------------------------------- criterion

void cmd_criterion(const RunConfig& cfg, const NibbledEllipse& table, std::ostream& out) {
  require_format(cfg, {"json", "csv"});
  const int grid = cfg.grid > 0 ? cfg.grid : 100;
  ParameterPartition part = interval_partition(table);
  const std::vector<int> chosen = select_intervals(part, cfg.interval);
  std::vector<CriterionReport> reports;
  reports.reserve(chosen.size());
  for (int idx : chosen)
    reports.push_back(verify_mainsurf(table, part.intervals[idx], grid));

  if (cfg.format == "json") {
    deliver(cfg, out, criterion_reports_json(reports));
    return;
  }
  std::ostringstream os;
  os << "interval,s,wronskian,wronskian_err,x_min,x_max,y_min,y_max\n";
  for (size_t r = 0; r < reports.size(); ++r) {
    for (const CriterionRow& row : reports[r].rows) {
      double xmin = std::nan(""), xmax = std::nan("");
      for (size_t i = 1; i < row.x_brackets.size(); ++i) {
        const double v = row.x_brackets[i].value;
        if (std::isnan(xmin) || v < xmin) xmin = v;
        if (std::isnan(xmax) || v > xmax) xmax = v;
      }
      double ymin = std::nan(""), ymax = std::nan("");
      for (const Quad& q : row.y_brackets) {
        if (std::isnan(ymin) || q.value < ymin) ymin = q.value;
        if (std::isnan(ymax) || q.value > ymax) ymax = q.value;
      }
      os << chosen[r] << ',' << csv_num(row.s) << ',';
      if (row.failed) {
        os << "nan,nan,nan,nan,nan,nan\n";
        continue;
      }
      os << csv_num(row.wron.value) << ',' << csv_num(row.wron.err) << ','
         << csv_num(xmin) << ',' << csv_num(xmax) << ',' << csv_num(ymin) << ','
         << csv_num(ymax) << '\n';
    }
  }
  deliver(cfg, out, os.str());
}

// --------------------------------------------------------------- recurrence

void cmd_recurrence(const RunConfig& cfg, const NibbledEllipse& table, std::ostream& out) {
  require_format(cfg, {"csv"});
  const int samples = cfg.samples > 0 ? cfg.samples : 20;
  if (cfg.n < 10) fail_domain(ErrorCode::UsageError, "--n must be at least 10");
  ParameterPartition part = interval_partition(table);
  const std::vector<int> chosen = select_intervals(part, cfg.interval);

  std::ostringstream os;
  os << "interval,component,s,min_tail,argmin_n,connection\n";
  for (int idx : chosen) {
    const Interval& J = part.intervals[idx];
    std::mt19937_64 rng = rng_for(cfg.seed, static_cast<unsigned long long>(idx), 1);
    const double margin = 1e-3 * (J.hi - J.lo);
    for (int j = 0; j < samples; ++j) {
      const double s = J.lo + margin + (J.hi - J.lo - 2.0 * margin) * unit_double(rng);
      const FlattenedSystem sys = build_flat_polygon(table, s);
      for (size_t c = 0; c < sys.components.size(); ++c) {
        const TranslationSurface M = unfold(sys.components[c].polygon);
        const Transversal I = make_transversal(M, 0);
        const ReturnSystem ret = first_return_iet(M, I, kDirection, kMaxReturnCrossings);
        const RecurrenceDiagnostic diag =
            recurrence_diagnostic(ret.iet, cfg.n, cfg.n / 2);
        os << idx << ',' << c << ',' << csv_num(s) << ',' << csv_num(diag.min_tail)
           << ',' << diag.argmin_n << ',' << (diag.connection_found ? 1 : 0) << '\n';
      }
    }
  }
  deliver(cfg, out, os.str());
}

// ----------------------------------------------------------------- birkhoff

struct SampledBox {
  BirkhoffBox box;
  double area = 0.0;
};

SampledBox sample_box(const TranslationSurface& M, std::mt19937_64& rng) {
  const auto& polys = M.polygons();
  const int p = static_cast<int>(unit_double(rng) * polys.size()) %
                static_cast<int>(polys.size());
  const UnfoldedPolygon& P = polys[p];
  const int k = P.k();
  const int step = static_cast<int>(unit_double(rng) * k) % k;
  const double xlo = step == 0 ? 0.0 : P.profile.xs[step - 1];
  const double xhi = P.profile.xs[step];
  const double yhi = P.profile.ys[step];
  const double w = xhi - xlo;
  const double u0 = xlo + w * (0.10 + 0.35 * unit_double(rng));
  const double u1 = xhi - w * (0.10 + 0.35 * unit_double(rng));
  const double v0 = yhi * (0.10 + 0.35 * unit_double(rng));
  const double v1 = yhi - yhi * (0.10 + 0.35 * unit_double(rng));
  const Vec2 a = apply_gamma(P.gamma, {u0, v0});
  const Vec2 b = apply_gamma(P.gamma, {u1, v1});
  SampledBox sb;
  sb.box = {p, std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x),
            std::max(a.y, b.y)};
  sb.area = (sb.box.x1 - sb.box.x0) * (sb.box.y1 - sb.box.y0);
  return sb;
}

std::pair<int, Vec2> sample_start(const TranslationSurface& M, std::mt19937_64& rng) {
  const auto& polys = M.polygons();
  const int p = static_cast<int>(unit_double(rng) * polys.size()) %
                static_cast<int>(polys.size());
  const UnfoldedPolygon& P = polys[p];
  const int k = P.k();
  const int step = static_cast<int>(unit_double(rng) * k) % k;
  const double xlo = step == 0 ? 0.0 : P.profile.xs[step - 1];
  const double xhi = P.profile.xs[step];
  const double yhi = P.profile.ys[step];
  const double u = xlo + (xhi - xlo) * (0.05 + 0.9 * unit_double(rng));
  const double v = yhi * (0.05 + 0.9 * unit_double(rng));
  return {p, apply_gamma(P.gamma, {u, v})};
}

void cmd_birkhoff(const RunConfig& cfg, const NibbledEllipse& table, std::ostream& out) {
  require_format(cfg, {"csv"});
  const int starts = cfg.samples > 0 ? cfg.samples : 5;
  const int nboxes = cfg.grid > 0 ? cfg.grid : 10;
  ParameterPartition part = interval_partition(table);
  const std::vector<int> chosen = select_intervals(part, cfg.interval);

  std::ostringstream os;
  os << "interval,component,s,start,elapsed,box,poly,x0,y0,x1,y1,area_fraction,"
        "fraction\n";
  for (int idx : chosen) {
    const double s = midpoint(part.intervals[idx]);
    const FlattenedSystem sys = build_flat_polygon(table, s);
    for (size_t c = 0; c < sys.components.size(); ++c) {
      const TranslationSurface M = unfold(sys.components[c].polygon);
      std::mt19937_64 rng =
          rng_for(cfg.seed, static_cast<unsigned long long>(idx), 100 + c);
      std::vector<SampledBox> boxes;
      std::vector<BirkhoffBox> plain;
      for (int bi = 0; bi < nboxes; ++bi) {
        boxes.push_back(sample_box(M, rng));
        plain.push_back(boxes.back().box);
      }
      const double horizon = cfg.horizon > 0.0 ? cfg.horizon : 1e4 * diameter(M);
      for (int st = 0; st < starts; ++st) {
        const auto [poly, z] = sample_start(M, rng);
        const BirkhoffResult res =
            birkhoff_averages(M, plain, poly, z, kDirection, horizon);
        for (int bi = 0; bi < nboxes; ++bi) {
          const SampledBox& sb = boxes[bi];
          os << idx << ',' << c << ',' << csv_num(s) << ',' << st << ','
             << csv_num(res.elapsed) << ',' << bi << ',' << sb.box.poly << ','
             << csv_num(sb.box.x0) << ',' << csv_num(sb.box.y0) << ','
             << csv_num(sb.box.x1) << ',' << csv_num(sb.box.y1) << ','
             << csv_num(sb.area / M.area()) << ',' << csv_num(res.fractions[bi])
             << '\n';
        }
      }
    }
  }
  deliver(cfg, out, os.str());
}

// -------------------------------------------------------------------- trace

void cmd_trace(const RunConfig& cfg, const NibbledEllipse& table, std::ostream& out) {
  require_format(cfg, {"csv", "svg"});
  ParameterPartition part = interval_partition(table);
  const std::vector<int> chosen = select_intervals(part, cfg.interval);
  const double horizon = cfg.horizon > 0.0 ? cfg.horizon : 50.0 * table.diameter();

  if (cfg.format == "svg" && chosen.size() != 1)
    fail_domain(ErrorCode::UsageError,
                "svg output draws one trajectory; select a single interval");

  std::ostringstream os;
  if (cfg.format == "csv") os << "interval,segment,x0,y0,x1,y1,s\n";
  for (int idx : chosen) {
    const double s = midpoint(part.intervals[idx]);
    std::mt19937_64 rng = rng_for(cfg.seed, static_cast<unsigned long long>(idx), 3);
    const BilliardState start = sample_tangent_start(table, s, rng);
    const PhysicalTrajectory traj = billiard_trace(table, start, horizon);
    if (cfg.format == "csv") {
      for (size_t i = 0; i < traj.segments.size(); ++i) {
        const TrajectorySegment& seg = traj.segments[i];
        os << idx << ',' << i << ',' << csv_num(seg.start.x) << ','
           << csv_num(seg.start.y) << ',' << csv_num(seg.end.x) << ','
           << csv_num(seg.end.y) << ',' << csv_num(seg.s) << '\n';
      }
    } else {
      std::vector<Vec2> line;
      for (size_t i = 0; i < traj.segments.size(); ++i) {
        if (i == 0) line.push_back(traj.segments[i].start);
        line.push_back(traj.segments[i].end);
      }
      deliver(cfg, out, svg_table(table, {line}));
      return;
    }
  }
  deliver(cfg, out, os.str());
}

// ----------------------------------------------------------------- wiring

const char* kSynopsis =
    "usage: nibbled {table validate|table render|flatten|surface|criterion|"
    "recurrence|birkhoff|trace} [options]\n"
    "run 'nibbled --help' for the full option list\n";

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;

  CLI::App app{
      "nibbled: staircase billiard tables cut from confocal conics, their "
      "flattened translation surfaces, and unique ergodicity diagnostics"};
  app.require_subcommand(1);

  auto add_table = [&cfg](CLI::App* sub) {
    sub->add_option("--table", cfg.table_path, "table description JSON file")
        ->required();
    sub->add_option("--out", cfg.out_path, "write the report to this file");
  };
  auto add_interval = [&cfg](CLI::App* sub) {
    sub->add_option("--interval", cfg.interval,
                    "parameter interval index, or \"auto\" for all (default auto)");
  };
  auto add_format = [&cfg](CLI::App* sub, const char* def) {
    sub->add_option("--format", cfg.format, std::string("output format (default ") +
                                                 def + ")");
  };
  auto add_seed = [&cfg](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "random seed (default 1)");
  };

  CLI::App* table = app.add_subcommand("table", "table-level operations");
  table->require_subcommand(1);
  CLI::App* validate =
      table->add_subcommand("validate", "validate a table file and re-emit it in "
                                        "canonical JSON form");
  add_table(validate);

  CLI::App* render = table->add_subcommand("render", "draw the table boundary as SVG");
  add_table(render);

  CLI::App* flatten = app.add_subcommand(
      "flatten", "flatten caustic phase-space components to staircase polygons");
  add_table(flatten);
  add_interval(flatten);
  flatten->add_option("--grid", cfg.grid,
                      "caustic samples per interval (default 1, the midpoint)");
  flatten->add_option("--horizon", cfg.horizon,
                      "with --format svg: overlay a billiard trajectory of this length");
  add_seed(flatten);

  CLI::App* surface = app.add_subcommand(
      "surface", "unfold flattened components to translation surfaces and report "
                 "genus, singularities, and crossing tables");
  add_table(surface);
  add_interval(surface);

  CLI::App* criterion = app.add_subcommand(
      "criterion", "verify the linear independence determinant and bracket signs "
                   "over caustic parameter grids");
  criterion->footer("csv columns: interval,s,wronskian,wronskian_err,x_min,x_max,"
                    "y_min,y_max");
  add_table(criterion);
  add_interval(criterion);
  criterion->add_option("--grid", cfg.grid, "samples per interval (default 100)");

  CLI::App* recurrence = app.add_subcommand(
      "recurrence", "first-return interval exchange recurrence diagnostics at "
                    "random caustic parameters");
  recurrence->footer("csv columns: interval,component,s,min_tail,argmin_n,connection");
  add_table(recurrence);
  add_interval(recurrence);
  recurrence->add_option("--samples", cfg.samples,
                         "random caustic parameters per interval (default 20)");
  recurrence->add_option("--n", cfg.n,
                         "orbit horizon; the tail minimum runs over [n/2, n] "
                         "(default 10000)");
  add_seed(recurrence);

  CLI::App* birkhoff = app.add_subcommand(
      "birkhoff", "time averages of random box indicators along diagonal orbits");
  birkhoff->footer("csv columns: interval,component,s,start,elapsed,box,poly,x0,y0,"
                   "x1,y1,area_fraction,fraction");
  add_table(birkhoff);
  add_interval(birkhoff);
  birkhoff->add_option("--grid", cfg.grid, "boxes per surface (default 10)");
  birkhoff->add_option("--samples", cfg.samples, "starts per surface (default 5)");
  birkhoff->add_option("--horizon", cfg.horizon,
                       "flow time (default 1e4 times the surface diameter)");
  add_seed(birkhoff);

  CLI::App* trace = app.add_subcommand(
      "trace", "trace a billiard trajectory tangent to the interval's caustic");
  trace->footer("csv columns: interval,segment,x0,y0,x1,y1,s");
  add_table(trace);
  add_interval(trace);
  trace->add_option("--horizon", cfg.horizon,
                    "trajectory length (default 50 table diameters)");
  add_seed(trace);

  add_format(validate, "json");
  add_format(render, "svg");
  add_format(flatten, "json");
  add_format(surface, "json");
  add_format(criterion, "json");
  add_format(recurrence, "csv");
  add_format(birkhoff, "csv");
  add_format(trace, "csv");

  validate->callback([&cfg] { cfg.command = Command::Validate; });
  render->callback([&cfg] { cfg.command = Command::Render; });
  flatten->callback([&cfg] { cfg.command = Command::Flatten; });
  surface->callback([&cfg] { cfg.command = Command::Surface; });
  criterion->callback([&cfg] { cfg.command = Command::Criterion; });
  recurrence->callback([&cfg] { cfg.command = Command::Recurrence; });
  birkhoff->callback([&cfg] { cfg.command = Command::Birkhoff; });
  trace->callback([&cfg] { cfg.command = Command::Trace; });

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.push_back("nibbled");
  for (const std::string& a : args) argv_store.push_back(a);
  std::vector<char*> argv;
  for (std::string& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << kSynopsis;
    return 1;
  }

  if (cfg.format.empty()) {
    switch (cfg.command) {
      case Command::Render: cfg.format = "svg"; break;
      case Command::Recurrence:
      case Command::Birkhoff:
      case Command::Trace: cfg.format = "csv"; break;
      default: cfg.format = "json"; break;
    }
  }

  try {
    const NibbledEllipse table_obj = table_from_json(read_file(cfg.table_path));
    switch (cfg.command) {
      case Command::Validate:
        require_format(cfg, {"json"});
        deliver(cfg, out, table_to_json(table_obj));
        break;
      case Command::Render:
        require_format(cfg, {"svg"});
        deliver(cfg, out, svg_table(table_obj));
        break;
      case Command::Flatten:
        cmd_flatten(cfg, table_obj, out);
        break;
      case Command::Surface:
        cmd_surface(cfg, table_obj, out);
        break;
      case Command::Criterion:
        cmd_criterion(cfg, table_obj, out);
        break;
      case Command::Recurrence:
        cmd_recurrence(cfg, table_obj, out);
        break;
      case Command::Birkhoff:
        cmd_birkhoff(cfg, table_obj, out);
        break;
      case Command::Trace:
        cmd_trace(cfg, table_obj, out);
        break;
      case Command::None:
        err << kSynopsis;
        return 1;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::Domain ? 1 : 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace nibbled

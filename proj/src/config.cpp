#include "mfc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mfc {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " +
                              msg);
}

double to_double(const std::string& v, int line, const std::string& key) {
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    fail(line, "value of '" + key + "' is not a number: " + v);
  }
}

int to_int(const std::string& v, int line, const std::string& key) {
  try {
    size_t pos = 0;
    int d = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    fail(line, "value of '" + key + "' is not an integer: " + v);
  }
}

bool to_bool(const std::string& v, int line, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  fail(line, "value of '" + key + "' is not a boolean: " + v);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

/// Shortest round-trip decimal representation.
std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    std::string s = raw;
    size_t hash = s.find('#');
    if (hash != std::string::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section != "scenario" && section != "geometry" &&
          section != "cost" && section != "solver" && section != "output")
        fail(line, "unknown section [" + section + "]");
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos) fail(line, "expected key=value: " + s);
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (section.empty()) fail(line, "key outside any section: " + key);

    if (section == "scenario") {
      if (key == "name")
        cfg.scenario = val;
      else if (key == "m0_file")
        cfg.m0_file = val;
      else if (key == "ut_file")
        cfg.ut_file = val;
      else if (key == "normalize")
        cfg.normalize = to_bool(val, line, key);
      else
        fail(line, "unknown key '" + key + "' in [scenario]");
    } else if (section == "geometry") {
      if (key == "nh") {
        cfg.nh = to_int(val, line, key);
        if (cfg.nh < 2) fail(line, "nh must be at least 2");
      } else if (key == "nt") {
        cfg.nt = to_int(val, line, key);
        if (cfg.nt < 2) fail(line, "nt must be at least 2");
      } else if (key == "horizon") {
        cfg.horizon = to_double(val, line, key);
        if (!(cfg.horizon > 0)) fail(line, "horizon must be positive");
      } else if (key == "kind") {
        if (val == "periodic")
          cfg.kind = GeometryKind::Periodic;
        else if (val == "box")
          cfg.kind = GeometryKind::Box;
        else
          fail(line, "kind must be 'periodic' or 'box'");
      } else if (key == "obstacles") {
        std::vector<Rect> rects;
        for (const std::string& part : split(val, ';')) {
          if (part.empty()) continue;
          auto nums = split(part, ',');
          if (nums.size() != 4)
            fail(line, "obstacle needs x1min,x1max,x2min,x2max");
          Rect r{to_double(nums[0], line, key), to_double(nums[1], line, key),
                 to_double(nums[2], line, key), to_double(nums[3], line, key)};
          rects.push_back(r);
        }
        cfg.obstacles = rects;
      } else {
        fail(line, "unknown key '" + key + "' in [geometry]");
      }
    } else if (section == "cost") {
      if (key == "alpha") {
        double a = to_double(val, line, key);
        if (!(a >= 0 && a < 1)) fail(line, "alpha must be in [0,1)");
        cfg.alpha = a;
      } else if (key == "beta") {
        double b = to_double(val, line, key);
        if (!(b > 1 && b <= 2)) fail(line, "beta must be in (1,2]");
        cfg.beta = b;
      } else if (key == "lambda") {
        double l = to_double(val, line, key);
        if (!(l > 0)) fail(line, "lambda must be positive");
        cfg.lambda = l;
      } else if (key == "q") {
        double q = to_double(val, line, key);
        if (!(q > 1)) fail(line, "q must exceed 1");
        cfg.q = q;
      } else {
        fail(line, "unknown key '" + key + "' in [cost]");
      }
    } else if (section == "solver") {
      if (key == "r") {
        cfg.solver.r = to_double(val, line, key);
        if (!(cfg.solver.r > 0)) fail(line, "r must be positive");
      } else if (key == "max_iters") {
        cfg.solver.max_outer_iters = to_int(val, line, key);
        if (cfg.solver.max_outer_iters < 1)
          fail(line, "max_iters must be at least 1");
      } else if (key == "tol_hjb") {
        cfg.solver.stop_hjb_res = to_double(val, line, key);
      } else if (key == "tol_gap") {
        cfg.solver.stop_gap = to_double(val, line, key);
      } else if (key == "tol_dphi") {
        cfg.solver.stop_dphi = to_double(val, line, key);
      } else if (key == "tol_dm") {
        cfg.solver.stop_dm = to_double(val, line, key);
      } else if (key == "krylov_rel_tol") {
        cfg.solver.krylov.rel_tol = to_double(val, line, key);
      } else if (key == "krylov_abs_tol") {
        cfg.solver.krylov.abs_tol = to_double(val, line, key);
      } else if (key == "krylov_max_iters") {
        cfg.solver.krylov.max_iters = to_int(val, line, key);
      } else if (key == "jacobi") {
        cfg.solver.krylov.jacobi = to_bool(val, line, key);
      } else if (key == "threads") {
        cfg.solver.threads = to_int(val, line, key);
        if (cfg.solver.threads < 0) fail(line, "threads must be >= 0");
      } else {
        fail(line, "unknown key '" + key + "' in [solver]");
      }
    } else {  // output
      if (key == "dir") {
        cfg.output.dir = val;
      } else if (key == "snapshots") {
        cfg.output.snapshots.clear();
        for (const std::string& part : split(val, ','))
          if (!part.empty())
            cfg.output.snapshots.push_back(to_double(part, line, key));
      } else if (key == "record_every") {
        cfg.solver.record_every = to_int(val, line, key);
        if (cfg.solver.record_every < 1)
          fail(line, "record_every must be at least 1");
      } else {
        fail(line, "unknown key '" + key + "' in [output]");
      }
    }
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string render_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "[scenario]\n";
  if (!cfg.scenario.empty()) out << "name = " << cfg.scenario << "\n";
  if (!cfg.m0_file.empty()) out << "m0_file = " << cfg.m0_file << "\n";
  if (!cfg.ut_file.empty()) out << "ut_file = " << cfg.ut_file << "\n";
  out << "normalize = " << (cfg.normalize ? "true" : "false") << "\n";
  out << "\n[geometry]\n";
  out << "nh = " << cfg.nh << "\n";
  out << "nt = " << cfg.nt << "\n";
  out << "horizon = " << fmt(cfg.horizon) << "\n";
  if (cfg.kind)
    out << "kind = "
        << (*cfg.kind == GeometryKind::Periodic ? "periodic" : "box") << "\n";
  if (cfg.obstacles) {
    out << "obstacles = ";
    for (size_t k = 0; k < cfg.obstacles->size(); ++k) {
      const Rect& r = (*cfg.obstacles)[k];
      if (k) out << "; ";
      out << fmt(r.x1min) << "," << fmt(r.x1max) << "," << fmt(r.x2min) << ","
          << fmt(r.x2max);
    }
    out << "\n";
  }
  out << "\n[cost]\n";
  if (cfg.alpha) out << "alpha = " << fmt(*cfg.alpha) << "\n";
  if (cfg.beta) out << "beta = " << fmt(*cfg.beta) << "\n";
  if (cfg.lambda) out << "lambda = " << fmt(*cfg.lambda) << "\n";
  if (cfg.q) out << "q = " << fmt(*cfg.q) << "\n";
  out << "\n[solver]\n";
  out << "r = " << fmt(cfg.solver.r) << "\n";
  out << "max_iters = " << cfg.solver.max_outer_iters << "\n";
  out << "tol_hjb = " << fmt(cfg.solver.stop_hjb_res) << "\n";
  out << "tol_gap = " << fmt(cfg.solver.stop_gap) << "\n";
  out << "tol_dphi = " << fmt(cfg.solver.stop_dphi) << "\n";
  out << "tol_dm = " << fmt(cfg.solver.stop_dm) << "\n";
  out << "krylov_rel_tol = " << fmt(cfg.solver.krylov.rel_tol) << "\n";
  out << "krylov_abs_tol = " << fmt(cfg.solver.krylov.abs_tol) << "\n";
  out << "krylov_max_iters = " << cfg.solver.krylov.max_iters << "\n";
  out << "jacobi = " << (cfg.solver.krylov.jacobi ? "true" : "false") << "\n";
  out << "threads = " << cfg.solver.threads << "\n";
  out << "\n[output]\n";
  if (!cfg.output.dir.empty()) out << "dir = " << cfg.output.dir << "\n";
  if (!cfg.output.snapshots.empty()) {
    out << "snapshots = ";
    for (size_t k = 0; k < cfg.output.snapshots.size(); ++k) {
      if (k) out << ", ";
      out << fmt(cfg.output.snapshots[k]);
    }
    out << "\n";
  }
  out << "record_every = " << cfg.solver.record_every << "\n";
  return out.str();
}

namespace {

/// Gridded values, one row per j (x2 index), columns i (x1 index).
Eigen::VectorXd read_grid_csv(const std::string& path, const Geometry& geom) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open grid file: " + path);
  int side = geom.kind() == GeometryKind::Periodic ? geom.nh() : geom.nh() + 1;
  Eigen::MatrixXd vals(side, side);
  std::string line;
  int j = 0;
  while (std::getline(f, line)) {
    if (trim(line).empty()) continue;
    if (j >= side)
      throw std::runtime_error(path + ": more than " + std::to_string(side) +
                               " rows");
    auto parts = split(line, ',');
    if (static_cast<int>(parts.size()) != side)
      throw std::runtime_error(path + " row " + std::to_string(j + 1) +
                               ": expected " + std::to_string(side) +
                               " columns, got " + std::to_string(parts.size()));
    for (int i = 0; i < side; ++i) {
      try {
        vals(i, j) = std::stod(parts[i]);
      } catch (...) {
        throw std::runtime_error(path + " row " + std::to_string(j + 1) +
                                 ": bad number '" + parts[i] + "'");
      }
    }
    ++j;
  }
  if (j != side)
    throw std::runtime_error(path + ": expected " + std::to_string(side) +
                             " rows, got " + std::to_string(j));
  Eigen::VectorXd out(geom.num_nodes());
  for (int s = 0; s < geom.num_nodes(); ++s)
    out[s] = vals(geom.grid_i(s), geom.grid_j(s));
  return out;
}

}  // namespace

ResolvedRun resolve_run(const RunConfig& cfg) {
  const bool custom = !cfg.m0_file.empty() || !cfg.ut_file.empty();
  if (custom && !cfg.scenario.empty())
    throw std::invalid_argument(
        "config: give either a scenario name or m0_file/ut_file, not both");
  if (custom && (cfg.m0_file.empty() || cfg.ut_file.empty()))
    throw std::invalid_argument(
        "config: custom scenarios need both m0_file and ut_file");
  if (!custom && cfg.scenario.empty())
    throw std::invalid_argument(
        "config: [scenario] needs a name or m0_file/ut_file");

  GeometryKind kind;
  std::vector<Rect> obstacles;
  std::string name;
  Scenario sc;
  if (!custom) {
    sc = scenario_by_name(cfg.scenario);
    sc.normalize = cfg.normalize;
    name = sc.name;
    kind = cfg.kind.value_or(sc.kind);
    obstacles = cfg.obstacles.value_or(sc.obstacles);
  } else {
    name = "custom";
    kind = cfg.kind.value_or(GeometryKind::Periodic);
    obstacles = cfg.obstacles.value_or(std::vector<Rect>{});
  }
  if (kind == GeometryKind::Periodic && !obstacles.empty())
    throw std::invalid_argument(
        "config: obstacles require box geometry, not periodic");

  Geometry geom = kind == GeometryKind::Periodic
                      ? Geometry::periodic(cfg.nh, cfg.nt, cfg.horizon)
                      : Geometry::box(cfg.nh, cfg.nt, cfg.horizon, obstacles);

  DiscreteData data;
  if (!custom) {
    sc.kind = kind;
    data = discretize(sc, geom);
  } else {
    data.m0 = read_grid_csv(cfg.m0_file, geom);
    data.uT = read_grid_csv(cfg.ut_file, geom);
    if ((data.m0.array() < 0).any())
      throw std::invalid_argument(cfg.m0_file +
                                  ": initial density must be nonnegative");
    if (cfg.normalize) {
      double total = geom.h() * geom.h() * data.m0.sum();
      if (!(total > 0))
        throw std::invalid_argument(cfg.m0_file + ": density has no mass");
      data.m0 /= total;
    }
  }
  if (cfg.alpha) data.cost.alpha = *cfg.alpha;
  if (cfg.beta) data.cost.beta = *cfg.beta;
  if (cfg.lambda) data.cost.lambda = *cfg.lambda;
  if (cfg.q) data.cost.q_exp = *cfg.q;
  data.cost.validate();

  SolverConfig solver = cfg.solver;
  solver.validate();
  return ResolvedRun{std::move(geom), std::move(data), solver, cfg.output,
                     name};
}

std::string resolve_out_dir(const RunConfig& cfg, const RunOverrides& ov) {
  if (!ov.out_dir.empty()) return ov.out_dir;
  if (!cfg.output.dir.empty()) return cfg.output.dir;
  if (const char* env = std::getenv("MFC_OUT_DIR"); env && *env) return env;
  return ".";
}

int execute_run(const RunConfig& cfg, const RunOverrides& ov) {
  ResolvedRun run = resolve_run(cfg);
  if (ov.threads >= 0) run.solver.threads = ov.threads;
  RunReport report = solve(run.geom, run.data, run.solver);

  namespace fs = std::filesystem;
  fs::path dir = resolve_out_dir(cfg, ov);
  fs::create_directories(dir);

  {
    std::ofstream h(dir / "history.csv");
    h << "iter,hjb_l2,hjb_weighted,gap,dphi,dm,mass_min,mass_max,seconds\n";
    for (const IterationRecord& r : report.history) {
      h << r.iter << ',' << fmt(r.hjb_l2) << ',' << fmt(r.hjb_weighted) << ','
        << fmt(r.gap) << ',' << fmt(r.dphi) << ',' << fmt(r.dm) << ','
        << fmt(r.mass_min) << ',' << fmt(r.mass_max) << ',' << fmt(r.seconds)
        << '\n';
    }
  }

  const Geometry& g = run.geom;
  ScalarField m = assemble_density(report.state.sigma, run.data.m0);
  std::vector<double> wanted = run.output.snapshots;
  if (wanted.empty())
    for (int k = 0; k <= 4; ++k) wanted.push_back(g.horizon() * k / 4.0);
  std::vector<std::string> snap_notes;
  std::vector<int> written;
  for (double t : wanted) {
    int n = static_cast<int>(std::lround(t / g.dt()));
    n = std::max(0, std::min(g.nt(), n));
    double tn = n * g.dt();
    if (std::abs(tn - t) > 1e-12)
      snap_notes.push_back("requested snapshot t=" + fmt(t) +
                           " snapped to t=" + fmt(tn));
    if (std::find(written.begin(), written.end(), n) != written.end())
      continue;
    written.push_back(n);
    char name[64];
    std::snprintf(name, sizeof(name), "m_t%.3f.csv", tn);
    std::ofstream f(dir / name);
    f << "i,j,x1,x2,m,phi\n";
    for (int s = 0; s < g.num_nodes(); ++s) {
      f << g.grid_i(s) << ',' << g.grid_j(s) << ',' << fmt(g.x1(s)) << ','
        << fmt(g.x2(s)) << ',' << fmt(m.at(n, s)) << ','
        << fmt(report.state.phi.at(n, s)) << '\n';
    }
  }

  {
    std::ofstream s(dir / "summary.txt");
    s << "scenario: " << run.scenario_name << "\n";
    s << "grid: " << g.nh() << "x" << g.nh() << "x" << g.nt()
      << (g.kind() == GeometryKind::Periodic ? " periodic" : " box") << "\n";
    s << "r: " << fmt(run.solver.r) << "\n";
    s << "iterations: " << report.iterations << "\n";
    s << "converged: " << (report.converged ? "yes" : "no") << "\n";
    const char* reason = report.stop_reason == StopReason::Budget
                             ? "iteration budget"
                             : report.stop_reason == StopReason::HjbResidual
                                   ? "hjb residual threshold"
                                   : "gap and increment thresholds";
    s << "stop_reason: " << reason << "\n";
    if (!report.history.empty()) {
      const IterationRecord& last = report.history.back();
      s << "final_hjb_weighted: " << fmt(last.hjb_weighted) << "\n";
      s << "final_gap: " << fmt(last.gap) << "\n";
      s << "final_mass_range: [" << fmt(last.mass_min) << ", "
        << fmt(last.mass_max) << "]\n";
    }
    for (const std::string& note : snap_notes) s << "note: " << note << "\n";
  }

  return report.converged ? 0 : 2;
}

}  // namespace mfc

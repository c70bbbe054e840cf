// imcf-lab: experiment runner for the classical inverse mean curvature flow
// laboratory. Commands: build | flow | audit | sweep.
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "imcf/constructions.hpp"
#include "imcf/diagnostics.hpp"
#include "imcf/errors.hpp"
#include "imcf/flow.hpp"
#include "imcf/geometry.hpp"
#include "imcf/hull.hpp"
#include "imcf/io.hpp"
#include "imcf/svg.hpp"

namespace fs = std::filesystem;
using imcf::io::Json;
using namespace imcf;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- config --

Json load_config(const std::string& path) {
  if (path.empty()) return Json::object();
  std::string text;
  try {
    text = io::read_text(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config parse: ") + e.what());
  }
}

double num(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw ConfigError(std::string("key '") + key + "' must be a number");
  return j.at(key).get<double>();
}

long long inum(const Json& j, const char* key, long long fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw ConfigError(std::string("key '") + key + "' must be a number");
  return j.at(key).get<long long>();
}

// Fills every key the builder reads, so the echoed config is self-contained.
Json resolve_shape(const Json& sh) {
  const std::string name = sh.value("name", std::string());
  Json r;
  r["name"] = name;
  auto dv = [&](const char* k, double v) { r[k] = num(sh, k, v); };
  auto iv = [&](const char* k, long long v) { r[k] = inum(sh, k, v); };
  if (name == "circle") {
    dv("R", 1.0), iv("m", 512), dv("x0", 0.0), dv("y0", 0.0);
  } else if (name == "sphere") {
    dv("R", 1.0), iv("m", 512), dv("x0", 0.0);
  } else if (name == "ellipse") {
    dv("a", 1.0), dv("b", 0.7), iv("n", 2), iv("m", 512);
  } else if (name == "torus") {
    dv("a", 2.0), dv("b", 0.5), iv("m", 512);
  } else if (name == "capsule") {
    dv("r", 0.5), dv("L", 2.0), iv("m", 512);
  } else if (name == "bean") {
    iv("n", 2);
    iv("m", inum(sh, "n", 2) == 1 ? 512 : 1024);
  } else if (name == "dumbbell") {
    const std::string preset = sh.value("preset", std::string("default"));
    DumbbellSpec base;
    if (preset == "default")
      base = default_dumbbell();
    else if (preset == "bean")
      base = bean_dumbbell();
    else
      throw ConfigError("unknown dumbbell preset: " + preset);
    r["preset"] = preset;
    dv("R", base.R), dv("d", base.d), dv("r", base.r);
    dv("R_star", base.R_star), dv("junction_beta", base.junction_beta);
    dv("turn_margin", base.turn_margin);
    dv("eps_I_II", base.eps_I_II), dv("eps_II_III", base.eps_II_III);
    dv("eps_III_IV", base.eps_III_IV);
    iv("m", static_cast<long long>(base.m));
    r["auto_epsilon"] = sh.value("auto_epsilon", false);
  } else {
    throw ConfigError(name.empty() ? "no shape given (use --shape or config)"
                                   : "unknown shape: " + name);
  }
  return r;
}

DumbbellSpec dumbbell_from(const Json& r) {
  DumbbellSpec spec;
  spec.R = r.at("R");
  spec.d = r.at("d");
  spec.r = r.at("r");
  spec.R_star = r.at("R_star");
  spec.junction_beta = r.at("junction_beta");
  spec.turn_margin = r.at("turn_margin");
  spec.eps_I_II = r.at("eps_I_II");
  spec.eps_II_III = r.at("eps_II_III");
  spec.eps_III_IV = r.at("eps_III_IV");
  spec.m = r.at("m").get<std::size_t>();
  if (r.value("auto_epsilon", false)) spec = auto_epsilon(spec);
  return spec;
}

ProfileSurface build_shape(const Json& r) {
  const std::string name = r.at("name");
  const auto m = [&] { return r.at("m").get<std::size_t>(); };
  if (name == "circle")
    return build_circle(r.at("R"), m(), {r.at("x0"), r.at("y0")});
  if (name == "sphere") return build_sphere(r.at("R"), m(), r.at("x0"));
  if (name == "ellipse")
    return build_ellipse(r.at("a"), r.at("b"), r.at("n"), m());
  if (name == "torus") return build_torus(r.at("a"), r.at("b"), m());
  if (name == "capsule") return build_capsule(r.at("r"), r.at("L"), m());
  if (name == "bean") return build_bean(r.at("n"), m());
  if (name == "dumbbell") return build_dumbbell(dumbbell_from(r));
  throw ConfigError("unknown shape: " + name);
}

Json resolve_flow(const Json& f) {
  FlowConfig d;
  Json r;
  r["t_end"] = num(f, "t_end", d.t_end);
  r["cfl"] = num(f, "cfl", d.cfl);
  r["eps_H"] = num(f, "eps_H", d.eps_H);
  r["kappa_max"] = num(f, "kappa_max", d.kappa_max);
  r["resample_every"] = inum(f, "resample_every", d.resample_every);
  r["record_every"] = num(f, "record_every", d.record_every);
  r["m"] = inum(f, "m", 0);
  r["max_steps"] = inum(f, "max_steps", static_cast<long long>(d.max_steps));
  r["rk2"] = f.value("rk2", d.rk2);
  r["check_self_intersection"] =
      f.value("check_self_intersection", d.check_self_intersection);
  return r;
}

FlowConfig flow_from(const Json& r) {
  FlowConfig c;
  c.t_end = r.at("t_end");
  c.cfl = r.at("cfl");
  c.eps_H = r.at("eps_H");
  c.kappa_max = r.at("kappa_max");
  c.resample_every = r.at("resample_every");
  c.record_every = r.at("record_every");
  c.m = r.at("m").get<std::size_t>();
  c.max_steps = r.at("max_steps").get<std::size_t>();
  c.rk2 = r.at("rk2");
  c.check_self_intersection = r.at("check_self_intersection");
  return c;
}

// ----------------------------------------------------------------- shared --

double min_center_dist(const ProfileSurface& s, Vec2 c) {
  double d = 1e300;
  for (const Vec2& p : s.pts)
    d = std::min(d, s.n >= 2 ? std::hypot(p.x - c.x, p.y) : dist(p, c));
  return d;
}

double worst_area_law(const FlowTrajectory& tr) {
  const double A0 = tr.frames.front().diag.area;
  double worst = 0;
  for (const auto& fr : tr.frames)
    worst = std::max(worst,
                     std::abs(fr.diag.area / (std::exp(fr.t) * A0) - 1));
  return worst;
}

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_json(const fs::path& path, const Json& j) {
  io::write_text(path, j.dump(2) + "\n");
}

int event_exit_code(FlowEventKind kind) {
  switch (kind) {
    case FlowEventKind::Completed: return 0;
    case FlowEventKind::SingularityDetected: return 10;
    case FlowEventKind::SelfIntersection: return 11;
    case FlowEventKind::StoppedMaxSteps: return 12;
  }
  return 1;
}

// ------------------------------------------------------------------ build --

int cmd_build(const Json& cfg) {
  const Json shape = resolve_shape(cfg.value("shape", Json::object()));
  const fs::path out = cfg.value(
      "output_dir", "build-" + shape.at("name").get<std::string>());
  ProfileSurface s = build_shape(shape);
  fs::create_directories(out);
  io::write_profile_csv(out / "profile.csv", s);

  auto H = mean_curvature(s);
  DiameterInfo di = diameter_info(s);
  InradiusInfo ir = inradius_info(s);
  Json rep;
  rep["command"] = "build";
  rep["shape"] = shape;
  rep["seed"] = inum(cfg, "seed", 0);
  rep["n"] = s.n;
  rep["samples"] = s.sample_count();
  rep["h"] = s.h;
  Json meas;
  meas["area"] = area(s);
  meas["enclosed"] = enclosed_volume(s);
  meas["profile_length"] = total_length(s);
  meas["diam"] = di.value;
  meas["inradius"] = ir.value;
  meas["min_H"] = *std::min_element(H.begin(), H.end());
  meas["max_H"] = *std::max_element(H.begin(), H.end());
  rep["measures"] = meas;
  rep["t_star"] = t_star(s);
  rep["self_intersects"] = self_intersects(s).has_value();
  const bool convex = convex_certificate(s);
  rep["convex"] = convex;
  if (shape.at("name") == "dumbbell") {
    HullResult hull = audit_dumbbell_hull(dumbbell_from(shape));
    rep["outward_minimizing"] = hull.is_outward_minimizing;
    rep["hull_margin"] = hull.margin;
    rep["hull_clearance"] = hull.clearance;
  } else if (convex) {
    rep["outward_minimizing"] = true;
  } else {
    rep["outward_minimizing"] = nullptr;  // undetermined for this shape
  }
  rep["profile_csv"] = "profile.csv";
  write_json(out / "report.json", rep);
  std::printf("build %s: n=%d m=%zu area=%s diam=%s inradius=%s min_H=%s "
              "t*=%s -> %s\n",
              shape.at("name").get<std::string>().c_str(), s.n,
              s.sample_count(), fmt(meas["area"]).c_str(),
              fmt(di.value).c_str(), fmt(ir.value).c_str(),
              fmt(meas["min_H"]).c_str(), fmt(rep["t_star"]).c_str(),
              out.string().c_str());
  return 0;
}

// ------------------------------------------------------------------- flow --

struct FlowOutcome {
  FlowEventKind kind = FlowEventKind::Completed;
  double t_event = 0;
  std::string dir;
};

FlowOutcome do_flow(const Json& cfg) {
  const Json shape = resolve_shape(cfg.value("shape", Json::object()));
  const Json flow = resolve_flow(cfg.value("flow", Json::object()));
  const fs::path out = cfg.value(
      "output_dir", "run-" + shape.at("name").get<std::string>());
  ProfileSurface s0 = build_shape(shape);
  FlowTrajectory tr = run(s0, flow_from(flow));

  fs::create_directories(out / "frames");
  fs::create_directories(out / "snapshots");
  Json echo;
  echo["shape"] = shape;
  echo["flow"] = flow;
  echo["output_dir"] = out.string();
  echo["seed"] = inum(cfg, "seed", 0);
  write_json(out / "config.json", echo);

  const ProfileSurface& f0 = tr.frames.front().surface;
  InradiusInfo ir = inradius_info(f0);
  DiameterInfo di = diameter_info(f0);
  std::string jsonl;
  for (std::size_t i = 0; i < tr.frames.size(); ++i) {
    const FlowFrame& fr = tr.frames[i];
    char name[32];
    std::snprintf(name, sizeof name, "frame_%06zu.csv", i);
    io::write_profile_csv(out / "frames" / name, fr.surface);
    Json line;
    line["i"] = i;
    line["t"] = fr.t;
    line["area"] = fr.diag.area;
    line["min_H"] = fr.diag.min_H;
    line["max_H"] = fr.diag.max_H;
    line["embedded"] = fr.diag.embedded;
    line["csv"] = std::string("frames/") + name;
    jsonl += line.dump() + "\n";

    const double grow = std::exp(fr.t / fr.surface.n);
    svg::Scene scene;
    scene.curves.push_back(svg::profile_curve(fr.surface));
    scene.curves.back().mirror = fr.surface.n >= 2;
    scene.draw_axis = fr.surface.n >= 2;
    scene.circles.push_back({ir.center, ir.value * grow, "#2a9d3f", true});
    scene.circles.push_back(
        {di.midpoint(), di.value / 2 * grow, "#c23b3b", true});
    scene.title = "t = " + fmt(fr.t);
    std::snprintf(name, sizeof name, "snap_%06zu.svg", i);
    io::write_text(out / "snapshots" / name, svg::render(scene));
  }
  io::write_text(out / "trajectory.jsonl", jsonl);

  const double ts = t_star(f0);
  const FlowFrame& last = tr.frames.back();
  double rmin = 1e300, rmax = 0;
  for (const Vec2& p : last.surface.pts) {
    const double r = norm(p);
    rmin = std::min(rmin, r), rmax = std::max(rmax, r);
  }
  Json rep;
  rep["command"] = "flow";
  rep["config"] = echo;
  Json ev;
  ev["kind"] = to_string(tr.event.kind);
  ev["t_event"] = tr.event.t_event;
  ev["detail"] = tr.event.detail;
  rep["event"] = ev;
  rep["frames"] = tr.frames.size();
  rep["t_star"] = ts;
  rep["two_t_star"] = 2 * ts;
  Json fin;
  fin["t"] = last.t;
  fin["area"] = last.diag.area;
  fin["min_H"] = last.diag.min_H;
  fin["max_H"] = last.diag.max_H;
  fin["radius_from_origin_min"] = rmin;
  fin["radius_from_origin_max"] = rmax;
  rep["final"] = fin;
  rep["area_law_worst"] = worst_area_law(tr);
  std::string verdict;
  if (tr.event.kind == FlowEventKind::Completed) {
    verdict = "completed to t = " + fmt(last.t);
  } else {
    verdict = to_string(tr.event.kind) + " at t = " + fmt(tr.event.t_event) +
              (tr.event.t_event < 2 * ts ? " before" : " after") +
              " the 2 t* deadline = " + fmt(2 * ts);
  }
  rep["verdict"] = verdict;
  write_json(out / "report.json", rep);
  return {tr.event.kind, tr.event.t_event, out.string()};
}

int cmd_flow(const Json& cfg) {
  FlowOutcome oc = do_flow(cfg);
  std::printf("flow: %s at t = %s -> %s\n", to_string(oc.kind).c_str(),
              fmt(oc.t_event).c_str(), oc.dir.c_str());
  return event_exit_code(oc.kind);
}

// ------------------------------------------------------------------ audit --

FlowTrajectory load_run(const fs::path& dir) {
  if (!fs::exists(dir / "trajectory.jsonl"))
    throw MissingRun("no trajectory.jsonl under " + dir.string());
  const std::string text = io::read_text(dir / "trajectory.jsonl");
  FlowTrajectory tr;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    const std::string line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) continue;
    try {
      Json j = Json::parse(line);
      FlowFrame fr;
      fr.t = j.at("t");
      fr.surface =
          io::read_profile_csv(dir / j.at("csv").get<std::string>());
      auto H = mean_curvature(fr.surface);
      fr.diag.area = area(fr.surface);
      fr.diag.min_H = *std::min_element(H.begin(), H.end());
      fr.diag.max_H = *std::max_element(H.begin(), H.end());
      fr.diag.embedded = !self_intersects(fr.surface).has_value();
      tr.frames.push_back(std::move(fr));
    } catch (const MalformedFrame&) {
      throw;
    } catch (const std::exception& e) {
      throw MalformedFrame("frame " + std::to_string(tr.frames.size()) +
                           " in " + dir.string() + ": " + e.what());
    }
  }
  if (tr.frames.empty())
    throw MalformedFrame("empty trajectory in " + dir.string());
  return tr;
}

struct AuditRow {
  std::string name;
  bool pass = false;
  std::string detail;
  Json metrics;
};

AuditRow audit_area_growth(const FlowTrajectory& tr) {
  AuditRow row{"area-growth"};
  const double worst = worst_area_law(tr);
  row.pass = worst < 1e-3;
  row.detail = "worst |area/(e^t area0) - 1| = " + fmt(worst) + " (tol 1e-3)";
  row.metrics["worst"] = worst;
  return row;
}

AuditRow audit_containment(const FlowTrajectory& tr) {
  AuditRow row{"containment"};
  const ProfileSurface& s0 = tr.frames.front().surface;
  InradiusInfo ir = inradius_info(s0);
  DiameterInfo di = diameter_info(s0);
  ContainmentReport cr =
      containment_monitor(tr, ir.center, ir.value, di.midpoint(), di.value);
  row.pass = cr.max_inner_slack <= s0.h && cr.max_outer_slack <= s0.h;
  row.detail = "inner slack " + fmt(cr.max_inner_slack) + ", outer slack " +
               fmt(cr.max_outer_slack) + " (tol h = " + fmt(s0.h) + ")";
  row.metrics["max_inner_slack"] = cr.max_inner_slack;
  row.metrics["max_outer_slack"] = cr.max_outer_slack;
  if (cr.escape_time) row.metrics["escape_time"] = *cr.escape_time;
  return row;
}

AuditRow audit_star_time(const FlowTrajectory& tr) {
  AuditRow row{"star-time"};
  const double ts = t_star(tr.frames.front().surface);
  const double dt_frame =
      tr.frames.size() > 1 ? tr.frames[1].t - tr.frames[0].t : 0.01;
  auto tf = first_star_time(tr);
  row.pass = tf.has_value() && *tf <= ts + dt_frame;
  row.detail = "t_first = " + (tf ? fmt(*tf) : std::string("never")) +
               ", bound t* + dt = " + fmt(ts + dt_frame);
  row.metrics["t_star"] = ts;
  if (tf) row.metrics["t_first"] = *tf;
  return row;
}

AuditRow audit_gradient(const FlowTrajectory& tr) {
  AuditRow row{"gradient-estimate"};
  const ProfileSurface& s0 = tr.frames.front().surface;
  const Vec2 mid = diameter_info(s0).midpoint();
  const double ball = 0.5 * diameter(s0);
  std::vector<std::size_t> picks;
  for (std::size_t i = 0; i < tr.frames.size(); ++i)
    if (min_center_dist(tr.frames[i].surface, mid) >=
        ball + 2 * tr.frames[i].surface.h)
      picks.push_back(i);
  if (picks.size() > 8) {  // reflection profiling dominates; subsample
    std::vector<std::size_t> sub;
    for (std::size_t k = 0; k < 8; ++k)
      sub.push_back(picks[k * (picks.size() - 1) / 7]);
    picks = sub;
  }
  double worst = -1e300, allow = 0;
  for (std::size_t k : picks) {
    const ProfileSurface& s = tr.frames[k].surface;
    ReflectionProfile rp = reflection_profile(s, 16);
    GradientAudit ga = gradient_estimate_audit(s, rp.Lambda, mid, ball);
    worst = std::max(worst, ga.max_slack);
    allow = std::max(allow, 2 * s.h);
  }
  row.pass = picks.empty() || worst <= allow;
  row.detail = picks.empty()
                   ? "no frames outside B_{diam/2}; nothing to audit"
                   : "max slack " + fmt(worst) + " <= 2h = " + fmt(allow) +
                         " over " + std::to_string(picks.size()) + " frames";
  row.metrics["frames_audited"] = picks.size();
  if (!picks.empty()) row.metrics["max_slack"] = worst;
  return row;
}

AuditRow audit_admissibility(const FlowTrajectory& tr, long long seed,
                             long long extra_planes) {
  AuditRow row{"admissibility"};
  const ProfileSurface& s0 = tr.frames.front().surface;
  const double half_diam = 0.5 * diameter(s0);
  std::vector<Plane> grid;
  for (int k = 0; k < 16; ++k) {
    const double th = M_PI * k / 15.0;
    for (int j = 0; j < 8; ++j)
      grid.push_back({{std::cos(th), std::sin(th)},
                      (-0.6 + 1.2 * j / 7.0) * half_diam});
  }
  std::mt19937 rng(static_cast<std::uint32_t>(seed));
  std::uniform_real_distribution<double> uth(0.0, M_PI), ul(-0.6, 0.6);
  for (long long k = 0; k < extra_planes; ++k) {
    const double th = uth(rng);
    grid.push_back({{std::cos(th), std::sin(th)}, ul(rng) * half_diam});
  }
  std::size_t admissible = 0;
  double worst = 0;
  for (const Plane& pl : grid) {
    if (!is_admissible(s0, pl).admissible) continue;
    ++admissible;
    for (const auto& fr : tr.frames)
      worst = std::max(worst, is_admissible(fr.surface, pl).violation);
  }
  row.pass = admissible == 0 || worst < 2 * s0.h;
  row.detail = std::to_string(admissible) + "/" +
               std::to_string(grid.size()) +
               " planes initially admissible, worst violation " + fmt(worst) +
               " (tol 2h = " + fmt(2 * s0.h) + ")";
  row.metrics["planes_admissible"] = admissible;
  row.metrics["planes_total"] = grid.size();
  row.metrics["worst_violation"] = worst;
  return row;
}

AuditRow audit_avoidance(const FlowTrajectory& outer,
                         const FlowTrajectory& inner) {
  AuditRow row{"avoidance"};
  AvoidanceReport ar = avoidance_check(outer, inner);
  row.pass = ar.min_increment >= -1e-6 && ar.contained_all;
  row.detail = "min ell increment " + fmt(ar.min_increment) +
               " (tol -1e-6), contained " +
               (ar.contained_all ? "at all " : "FAILS among ") +
               std::to_string(ar.entries.size()) + " frames";
  row.metrics["min_increment"] = ar.min_increment;
  row.metrics["contained_all"] = ar.contained_all;
  row.metrics["frames"] = ar.entries.size();
  return row;
}

int cmd_audit(const Json& cfg) {
  const std::string run_dir = cfg.value("run", std::string());
  if (run_dir.empty()) throw ConfigError("audit needs a run (--run or key)");
  const std::string inner_dir = cfg.value("inner_run", std::string());
  std::vector<std::string> names;
  if (cfg.contains("audits"))
    names = cfg.at("audits").get<std::vector<std::string>>();
  if (names.empty()) {
    names = {"area-growth", "containment", "star-time", "gradient-estimate",
             "admissibility"};
    if (!inner_dir.empty()) names.push_back("avoidance");
  }
  const long long seed = inum(cfg, "seed", 0);
  const long long extra = inum(cfg, "extra_planes", 0);
  const fs::path out =
      cfg.value("output_dir", (fs::path(run_dir) / "audit").string());

  FlowTrajectory tr = load_run(run_dir);
  std::vector<AuditRow> rows;
  for (const std::string& name : names) {
    try {
      if (name == "area-growth") {
        rows.push_back(audit_area_growth(tr));
      } else if (name == "containment") {
        rows.push_back(audit_containment(tr));
      } else if (name == "star-time") {
        rows.push_back(audit_star_time(tr));
      } else if (name == "gradient-estimate") {
        rows.push_back(audit_gradient(tr));
      } else if (name == "admissibility") {
        rows.push_back(audit_admissibility(tr, seed, extra));
      } else if (name == "avoidance") {
        if (inner_dir.empty())
          throw ConfigError("avoidance audit needs --inner-run");
        rows.push_back(audit_avoidance(tr, load_run(inner_dir)));
      } else {
        throw ConfigError("unknown audit: " + name);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      rows.push_back({name, false, std::string("error: ") + e.what(), {}});
    }
  }

  bool all = true;
  Json rep;
  rep["command"] = "audit";
  rep["run"] = run_dir;
  if (!inner_dir.empty()) rep["inner_run"] = inner_dir;
  rep["seed"] = seed;
  rep["audits"] = Json::array();
  std::printf("%-20s %-6s %s\n", "audit", "pass", "detail");
  for (const AuditRow& row : rows) {
    all = all && row.pass;
    std::printf("%-20s %-6s %s\n", row.name.c_str(),
                row.pass ? "ok" : "FAIL", row.detail.c_str());
    Json jr;
    jr["name"] = row.name;
    jr["pass"] = row.pass;
    jr["detail"] = row.detail;
    jr["metrics"] = row.metrics;
    rep["audits"].push_back(jr);
  }
  rep["all_pass"] = all;
  fs::create_directories(out);
  write_json(out / "audit.json", rep);
  std::printf("-> %s\n", (out / "audit.json").string().c_str());
  return all ? 0 : 1;
}

// ------------------------------------------------------------------ sweep --

int sweep_threads() {
  if (const char* env = std::getenv("IMCF_LAB_THREADS")) {
    const int k = std::atoi(env);
    if (k >= 1) return k;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

int cmd_sweep(const Json& cfg, const std::string& out_flag) {
  if (!cfg.contains("runs") || !cfg.at("runs").is_array() ||
      cfg.at("runs").empty())
    throw ConfigError("sweep config needs a non-empty 'runs' array");
  const Json base = cfg.value("base", Json::object());
  const fs::path out = !out_flag.empty()
                           ? out_flag
                           : cfg.value("output_dir", std::string("sweep"));

  struct Item {
    std::string name;
    Json config;
    FlowOutcome outcome;
    std::string error;
  };
  std::vector<Item> items;
  for (const Json& row : cfg.at("runs")) {
    Item it;
    it.name = row.value("name",
                        "run-" + std::to_string(items.size()));
    Json patch = row;
    patch.erase("name");
    Json merged = base;
    merged.merge_patch(patch);
    merged["output_dir"] = (out / it.name).string();
    // resolve now so config errors surface before any worker starts
    merged["shape"] = resolve_shape(merged.value("shape", Json::object()));
    merged["flow"] = resolve_flow(merged.value("flow", Json::object()));
    it.config = merged;
    items.push_back(std::move(it));
  }

  const int workers =
      std::min<int>(sweep_threads(), static_cast<int>(items.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= items.size()) return;
      try {
        items[i].outcome = do_flow(items[i].config);
      } catch (const std::exception& e) {
        items[i].error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int k = 0; k < workers; ++k) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();

  bool any_error = false;
  Json rep;
  rep["command"] = "sweep";
  rep["workers"] = workers;
  rep["runs"] = Json::array();
  std::printf("%-16s %-22s %s\n", "run", "event", "t_event");
  for (const Item& it : items) {
    Json jr;
    jr["name"] = it.name;
    jr["output_dir"] = it.config.at("output_dir");
    if (it.error.empty()) {
      jr["event"] = to_string(it.outcome.kind);
      jr["t_event"] = it.outcome.t_event;
      std::printf("%-16s %-22s %s\n", it.name.c_str(),
                  to_string(it.outcome.kind).c_str(),
                  fmt(it.outcome.t_event).c_str());
    } else {
      any_error = true;
      jr["error"] = it.error;
      std::printf("%-16s %-22s %s\n", it.name.c_str(), "error",
                  it.error.c_str());
    }
    rep["runs"].push_back(jr);
  }
  fs::create_directories(out);
  write_json(out / "sweep.json", rep);
  std::printf("-> %s\n", (out / "sweep.json").string().c_str());
  return any_error ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"imcf-lab: classical inverse mean curvature flow laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir, shape_name, preset, run_dir, inner_run;
  std::vector<std::string> audit_names;
  long long m = 0, seed = 0, n = 0, extra_planes = 0;
  double t_end = 0, R = 0, a = 0, b = 0, r = 0, L = 0, d = 0;
  bool auto_eps = false;

  auto add_common = [&](CLI::App* c) {
    c->add_option("--config", config_path, "JSON config file");
    c->add_option("--out", out_dir, "output directory (overrides config)");
    c->add_option("--seed", seed, "seed for randomized test points");
  };
  auto add_shape = [&](CLI::App* c) {
    c->add_option("--shape", shape_name,
                  "circle|sphere|ellipse|torus|capsule|bean|dumbbell");
    c->add_option("--m", m, "profile sample count");
    c->add_option("--R", R, "radius (circle/sphere/dumbbell bells)");
    c->add_option("--a", a, "semi-axis / ring radius (ellipse, torus)");
    c->add_option("--b", b, "semi-axis / tube radius (ellipse, torus)");
    c->add_option("--r", r, "small radius (capsule, dumbbell neck)");
    c->add_option("--L", L, "cylinder length (capsule)");
    c->add_option("--d", d, "bell gap (dumbbell)");
    c->add_option("--n", n, "dimension 1|2 (ellipse, bean)");
    c->add_option("--preset", preset, "dumbbell preset: default|bean");
    c->add_flag("--auto-eps", auto_eps,
                "shrink dumbbell gluing widths until certificates pass");
  };

  CLI::App* cb = app.add_subcommand("build", "build a profile, report measures");
  add_common(cb), add_shape(cb);
  CLI::App* cf = app.add_subcommand("flow", "run a flow into a run directory");
  add_common(cf), add_shape(cf);
  cf->add_option("--t-end", t_end, "flow end time (overrides config)");
  CLI::App* ca = app.add_subcommand("audit", "audit a recorded run directory");
  add_common(ca);
  ca->add_option("--run", run_dir, "run directory to audit");
  ca->add_option("--inner-run", inner_run, "inner run for the avoidance audit");
  ca->add_option("--audits", audit_names,
                 "subset: area-growth containment star-time "
                 "gradient-estimate admissibility avoidance");
  ca->add_option("--extra-planes", extra_planes,
                 "extra seeded random planes for the admissibility grid");
  CLI::App* cs = app.add_subcommand("sweep", "run a config sweep in parallel");
  add_common(cs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    Json cfg = load_config(config_path);
    auto seen = [&](CLI::App* c, const char* f) { return c->count(f) > 0; };
    auto shape_flags = [&](CLI::App* c) {
      if (seen(c, "--shape")) cfg["shape"]["name"] = shape_name;
      if (seen(c, "--m")) cfg["shape"]["m"] = m;
      if (seen(c, "--R")) cfg["shape"]["R"] = R;
      if (seen(c, "--a")) cfg["shape"]["a"] = a;
      if (seen(c, "--b")) cfg["shape"]["b"] = b;
      if (seen(c, "--r")) cfg["shape"]["r"] = r;
      if (seen(c, "--L")) cfg["shape"]["L"] = L;
      if (seen(c, "--d")) cfg["shape"]["d"] = d;
      if (seen(c, "--n")) cfg["shape"]["n"] = n;
      if (seen(c, "--preset")) cfg["shape"]["preset"] = preset;
      if (seen(c, "--auto-eps")) cfg["shape"]["auto_epsilon"] = true;
    };
    if (cb->parsed()) {
      shape_flags(cb);
      if (seen(cb, "--out")) cfg["output_dir"] = out_dir;
      if (seen(cb, "--seed")) cfg["seed"] = seed;
      return cmd_build(cfg);
    }
    if (cf->parsed()) {
      shape_flags(cf);
      if (seen(cf, "--out")) cfg["output_dir"] = out_dir;
      if (seen(cf, "--seed")) cfg["seed"] = seed;
      if (seen(cf, "--t-end")) cfg["flow"]["t_end"] = t_end;
      return cmd_flow(cfg);
    }
    if (ca->parsed()) {
      if (seen(ca, "--run")) cfg["run"] = run_dir;
      if (seen(ca, "--inner-run")) cfg["inner_run"] = inner_run;
      if (!audit_names.empty()) cfg["audits"] = audit_names;
      if (seen(ca, "--out")) cfg["output_dir"] = out_dir;
      if (seen(ca, "--seed")) cfg["seed"] = seed;
      if (seen(ca, "--extra-planes")) cfg["extra_planes"] = extra_planes;
      return cmd_audit(cfg);
    }
    if (cs->parsed()) {
      if (config_path.empty())
        throw ConfigError("sweep needs --config with base + runs");
      if (seen(cs, "--seed")) cfg["seed"] = seed;
      return cmd_sweep(cfg, out_dir);
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const Json::exception& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

// Copyright 2026 The causal-ot Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "causal_ot/dynamics.hpp"
#include "causal_ot/hopflax.hpp"
#include "causal_ot/json_io.hpp"
#include "causal_ot/transport.hpp"

namespace causal_ot::cli {

namespace {

using io::json;

struct Options {
  std::string command;
  bool json = false;
  std::string out_dir;
  std::optional<double> tol;
  std::optional<std::size_t> grid;
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 1;
};

// CAUSAL_OT_LOG: 0/quiet, 1/info, 2/debug.
int log_level() {
  const char* v = std::getenv("CAUSAL_OT_LOG");
  if (!v) return 0;
  const std::string s(v);
  if (s == "debug" || s == "2") return 2;
  if (s == "info" || s == "1") return 1;
  return 0;
}

class Log {
 public:
  Log(std::ostream& err, int level) : err_(err), level_(level) {}
  void info(const std::string& m) const {
    if (level_ >= 1) err_ << "[info] " << m << '\n';
  }
  void debug(const std::string& m) const {
    if (level_ >= 2) err_ << "[debug] " << m << '\n';
  }

 private:
  std::ostream& err_;
  int level_;
};

class Failure : public Error {
 public:
  Failure(int code, const std::string& what) : Error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

template <typename T>
const T& need(const std::optional<T>& v, const char* what) {
  if (!v) throw Failure(kParseError, std::string("problem file has no \"") + what + "\" section");
  return *v;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

void write_file(const Options& o, const std::string& name, const std::string& body) {
  if (o.out_dir.empty()) return;
  std::filesystem::create_directories(o.out_dir);
  std::ofstream f(std::filesystem::path(o.out_dir) / name);
  if (!f) throw Failure(kParseError, "cannot write " + name + " in " + o.out_dir);
  f << body;
}

std::vector<double> grid_for(const Options& o, const io::Problem& p) {
  return uniform_grid(o.grid.value_or(p.grid.value_or(8)));
}

std::uint64_t seed_for(const Options& o, const io::Problem& p) {
  return o.seed.value_or(p.seed.value_or(1));
}

double tol_for(const Options& o, const io::Problem& p, double fallback) {
  return o.tol.value_or(p.tol.value_or(fallback));
}

struct Output {
  json report;
  std::string table;
  int code = kOk;
};

Output cmd_solve(const Options& o, const io::Problem& p, bool with_duality) {
  const auto& mu0 = need(p.mu0, "mu0");
  const auto& mu1 = need(p.mu1, "mu1");
  const auto& e = need(p.exponent, "p");
  const SolveResult r = solve_primal(p.model, mu0, mu1, e);
  Output out;
  std::optional<DualityReport> d;
  if (!r.infeasible()) d = duality_report(p.model, mu0, mu1, e, r, tol_for(o, p, 1e-9));
  const io::SolveReport rep = io::make_solve_report(r, d ? &*d : nullptr);
  out.report = io::to_json(rep);
  std::ostringstream t;
  t << "value  " << fmt(r.value) << "\nell_p  " << fmt(r.ell_p) << '\n';
  if (d) t << "gap    " << fmt(d->gap) << '\n';
  if (r.infeasible() || r.value == kNegInf) {
    t << "no admissible coupling";
    if (!r.cut.empty()) {
      t << "; violating source atoms:";
      for (auto i : r.cut) t << ' ' << i;
    }
    t << '\n';
    out.code = kInfeasible;
  }
  if (with_duality) {
    if (d) {
      out.report = io::to_json(*d);
      t << d->summary() << '\n';
      if (!d->ok()) out.code = kViolation;
    }
  }
  out.table = t.str();
  return out;
}

Output cmd_feasible(const Options&, const io::Problem& p) {
  const auto& mu0 = need(p.mu0, "mu0");
  const auto& mu1 = need(p.mu1, "mu1");
  const FeasibilityResult f = feasible(p.model, mu0, mu1);
  Output out;
  out.report = {{"feasible", f.feasible},
                {"flow", f.flow},
                {"cut", f.cut},
                {"cut_source_mass", f.cut_source_mass},
                {"cut_target_mass", f.cut_target_mass}};
  if (f.witness) out.report["witness"] = f.witness->matrix;
  std::ostringstream t;
  t << (f.feasible ? "feasible" : "infeasible") << "\nflow   " << fmt(f.flow) << '\n';
  if (!f.feasible) {
    t << "cut   ";
    for (auto i : f.cut) t << ' ' << i;
    t << "\nmass   " << fmt(f.cut_source_mass) << " > " << fmt(f.cut_target_mass) << '\n';
    out.code = kInfeasible;
  }
  out.table = t.str();
  return out;
}

Output cmd_interpolate(const Options& o, const io::Problem& p) {
  const auto& mu0 = need(p.mu0, "mu0");
  const auto& mu1 = need(p.mu1, "mu1");
  const auto& e = need(p.exponent, "p");
  const SolveResult r = solve_primal(p.model, mu0, mu1, e);
  Output out;
  if (r.infeasible()) {
    out.report = {{"value", "-inf"}};
    out.table = "no admissible coupling\n";
    out.code = kInfeasible;
    return out;
  }
  const Interpolation g = geodesic_path(p.model, *r.plan, grid_for(o, p));
  out.report = {{"path", io::to_json(p.model, g.path)}, {"lifted", io::to_json(p.model, g.lifted)}};
  write_file(o, "path.json", io::to_json(p.model, g.path).dump(2) + "\n");
  write_file(o, "lifted.json", io::to_json(p.model, g.lifted).dump(2) + "\n");
  std::ostringstream t;
  for (std::size_t k = 0; k < g.path.times.size(); ++k) {
    t << "t=" << fmt(g.path.times[k]) << ':';
    for (const auto& a : g.path.measures[k].atoms()) {
      t << ' ' << fmt(a.weight) << '@' << to_string(a.location);
    }
    t << '\n';
  }
  out.table = t.str();
  return out;
}

std::string bb_csv(const BBReport& r) {
  std::ostringstream c;
  c << std::setprecision(17) << "t,speed,integrand";
  for (const auto& test : r.cci.tests) c << ",residual_" << test.test;
  c << '\n';
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    c << r.times[k] << ',';
    if (k < r.speeds.size()) c << r.speeds[k];
    c << ',' << r.integrand[k];
    for (const auto& test : r.cci.tests) {
      c << ',';
      if (k < test.intervals.size()) c << test.intervals[k].residual;
    }
    c << '\n';
  }
  return c.str();
}

Output cmd_bb(const Options& o, const io::Problem& p) {
  const auto& mu0 = need(p.mu0, "mu0");
  const auto& mu1 = need(p.mu1, "mu1");
  const auto& e = need(p.exponent, "p");
  const auto battery = standard_battery(p.model.event_size() - 1, seed_for(o, p));
  const BBReport r = verify_benamou_brenier(p.model, mu0, mu1, e, grid_for(o, p), battery,
                                            tol_for(o, p, 1e-8));
  Output out;
  out.report = io::to_json(r);
  std::ostringstream t;
  t << "static   " << fmt(r.static_value) << "\ndynamic  " << fmt(r.dynamic_action)
    << "\ngap      " << fmt(r.gap) << "\nmerges   " << r.merges << "\ncci      "
    << (r.cci.ok() ? "ok" : "FAILED") << '\n';
  out.table = t.str();
  if (r.infeasible) {
    out.code = kInfeasible;
  } else {
    write_file(o, "bb_series.csv", bb_csv(r));
    if (!r.ok) out.code = kViolation;
  }
  return out;
}

Output cmd_hopflax(const Options& o, const io::Problem& p) {
  const auto& spec = need(p.field, "field");
  const auto& e = need(p.exponent, "p");
  const HopfLaxField field(p.model, spec.points, spec.interior, spec.f, spec.L, e, spec.times);
  const SemigroupReport sg = check_semigroup_properties(field, tol_for(o, p, 1e-9));
  const HJReport hj = check_hj_inequality(field, spec.h, spec.radii);

  std::ostringstream csv;
  csv << std::setprecision(17) << "t,y,Q,argmax,Lmax,st_a,hj_slack\n";
  for (const auto& r : hj.rows) {
    csv << r.t << ',' << r.y << ',' << r.q << ',' << r.argmax << ',' << r.lmax << ','
        << r.steepness_estimate << ',' << r.slack << '\n';
  }
  write_file(o, "hopflax.csv", csv.str());

  Output out;
  json failures = json::array();
  for (const auto& f : sg.failures) {
    failures.push_back({{"property", f.property},
                        {"t", f.t},
                        {"y", f.y == kNoPoint ? json(nullptr) : json(f.y)},
                        {"amount", io::number(f.amount)}});
  }
  out.report = {{"checks", sg.checks},
                {"ok", sg.ok()},
                {"failures", failures},
                {"lipschitz_constant", io::number(sg.lipschitz_constant)},
                {"lipschitz_ratio", io::number(sg.lipschitz_ratio)},
                {"hj", {{"step", hj.step},
                        {"rows", hj.rows.size()},
                        {"failures", hj.failures},
                        {"lower_bound_failures", hj.lower_bound_failures}}}};
  out.table = csv.str();
  if (!sg.ok()) out.code = kViolation;
  return out;
}

struct PathAndField {
  MeasurePath path;
  VelocitySeries velocity;
};

MeasurePath path_for(const Options& o, const io::Problem& p) {
  if (p.path) return *p.path;
  if (p.lifted) return marginal_path(*p.lifted);
  const SolveResult r = solve_primal(p.model, need(p.mu0, "mu0"), need(p.mu1, "mu1"),
                                     need(p.exponent, "p"));
  if (r.infeasible()) throw Failure(kInfeasible, "no admissible coupling between mu0 and mu1");
  return geodesic_path(p.model, *r.plan, grid_for(o, p)).path;
}

PathAndField cci_inputs(const Options& o, const io::Problem& p) {
  if (p.path && p.velocity) return {*p.path, *p.velocity};
  if (p.lifted) return {marginal_path(*p.lifted), barycentric_velocity(p.model, *p.lifted)};
  const Exponent e = p.exponent.value_or(Exponent::of(0.5));
  const SolveResult r = solve_primal(p.model, need(p.mu0, "mu0"), need(p.mu1, "mu1"), e);
  if (r.infeasible()) throw Failure(kInfeasible, "no admissible coupling between mu0 and mu1");
  const Interpolation g = geodesic_path(p.model, *r.plan, grid_for(o, p));
  return {g.path, barycentric_velocity(p.model, g.lifted)};
}

Output cmd_cci(const Options& o, const io::Problem& p) {
  const PathAndField in = cci_inputs(o, p);
  const auto battery = standard_battery(p.model.event_size() - 1, seed_for(o, p));
  const CCIReport r = check_cci(p.model, in.path, in.velocity, battery);
  Output out;
  out.report = io::to_json(r);
  std::ostringstream t;
  for (const auto& test : r.tests) {
    t << std::left << std::setw(16) << test.test << (test.ok ? "ok" : "FAILED") << "  worst slack "
      << fmt(test.worst) << (test.monotone ? "" : "  (Phi not monotone)") << '\n';
  }
  out.table = t.str();
  if (!r.ok()) out.code = kViolation;
  return out;
}

Output cmd_speed(const Options& o, const io::Problem& p) {
  const auto& e = need(p.exponent, "p");
  const MeasurePath path = path_for(o, p);
  Output out;
  json speeds = json::array();
  std::ostringstream csv;
  csv << std::setprecision(17) << "t0,t1,speed\n";
  for (std::size_t k = 0; k + 1 < path.times.size(); ++k) {
    double s = kNegInf;
    try {
      s = path_speed(p.model, path, e, k);
    } catch (const NotCausallyRelated&) {
      out.code = kInfeasible;
    }
    speeds.push_back(io::number(s));
    csv << path.times[k] << ',' << path.times[k + 1] << ',' << s << '\n';
  }
  const double action = path_action(p.model, path, e);
  out.report = {{"times", path.times}, {"speeds", speeds}, {"action", io::number(action)}};
  write_file(o, "speed.csv", csv.str());
  out.table = csv.str() + "action " + fmt(action) + "\n";
  return out;
}

Output dispatch(const Options& o, const io::Problem& p) {
  if (o.command == "solve") return cmd_solve(o, p, false);
  if (o.command == "dual") return cmd_solve(o, p, true);
  if (o.command == "feasible") return cmd_feasible(o, p);
  if (o.command == "interpolate") return cmd_interpolate(o, p);
  if (o.command == "bb") return cmd_bb(o, p);
  if (o.command == "hopflax") return cmd_hopflax(o, p);
  if (o.command == "cci-check") return cmd_cci(o, p);
  return cmd_speed(o, p);
}

struct Result {
  std::string out;
  std::string err;
  int code = kOk;
};

Result run_one(const Options& o, const std::string& file) {
  Result res;
  std::ostringstream err;
  const Log log(err, log_level());
  try {
    log.info("reading " + file);
    const io::Problem p = io::load_problem(file);
    log.debug("dispatching " + o.command);
    const Output out = dispatch(o, p);
    res.code = out.code;
    res.out = o.json ? out.report.dump(2) + "\n" : out.table;
    log.info(o.command + " finished with exit code " + std::to_string(out.code));
  } catch (const io::ParseError& e) {
    err << file << ':' << e.line() << ": " << e.message() << '\n';
    res.code = kParseError;
  } catch (const Failure& e) {
    err << file << ": " << e.what() << '\n';
    res.code = e.code();
  } catch (const PropertyViolation& e) {
    err << file << ": " << e.what() << '\n';
    res.code = kViolation;
  } catch (const CCIPrereqFailed& e) {
    err << file << ": " << e.what() << '\n';
    res.code = kViolation;
  } catch (const Error& e) {
    err << file << ": " << e.what() << '\n';
    res.code = kParseError;
  }
  res.err = err.str();
  return res;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lorentzian optimal transport on discrete measures"};
  Options o;
  std::vector<std::string> files;
  app.add_option("command", o.command, "Subcommand")
      ->required()
      ->check(CLI::IsMember(
          {"solve", "dual", "feasible", "interpolate", "bb", "hopflax", "cci-check", "speed"}));
  app.add_option("files", files, "Problem files")->required();
  app.add_flag("--json", o.json, "Print the report as JSON");
  app.add_option("--out-dir", o.out_dir, "Directory for CSV and JSON series");
  app.add_option("--tol", o.tol, "Tolerance override");
  app.add_option("--grid", o.grid, "Number of grid intervals")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "Seed for randomised test batteries");
  app.add_option("--jobs", o.jobs, "Problem files processed in parallel")->check(CLI::PositiveNumber);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }

  std::vector<Result> results(files.size());
  for (std::size_t start = 0; start < files.size(); start += o.jobs) {
    const std::size_t end = std::min(files.size(), start + o.jobs);
    std::vector<std::future<Result>> batch;
    for (std::size_t i = start; i < end; ++i) {
      batch.push_back(std::async(o.jobs > 1 ? std::launch::async : std::launch::deferred,
                                 run_one, std::cref(o), std::cref(files[i])));
    }
    for (std::size_t i = start; i < end; ++i) results[i] = batch[i - start].get();
  }
  int code = kOk;
  for (const auto& r : results) {
    out << r.out;
    err << r.err;
    code = std::max(code, r.code);
  }
  return code;
}

}  // namespace causal_ot::cli

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

#include "causal_ot/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace causal_ot::io {

namespace {

std::string child(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string child(const std::string& where, std::size_t i) {
  return where + "/" + std::to_string(i);
}

const json& field(const json& j, const std::string& where, const char* key) {
  if (!j.is_object()) throw SchemaError(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(where, std::string("missing \"") + key + "\"");
  return *it;
}

const json& array(const json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where, "expected an array");
  return j;
}

std::vector<double> numbers(const json& j, const std::string& where) {
  std::vector<double> out;
  for (std::size_t i = 0; i < array(j, where).size(); ++i) {
    out.push_back(to_number(j[i], child(where, i)));
  }
  return out;
}

// Runs `f`, re-anchoring library validation errors at `where`.
template <typename F>
auto anchored(const std::string& where, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(where, e.what());
  }
}

}  // namespace

json number(double v) {
  if (v == kNegInf) return "-inf";
  if (v == kPosInf) return "inf";
  if (std::isnan(v)) return "nan";
  return v;
}

double to_number(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "-inf") return kNegInf;
    if (s == "inf") return kPosInf;
  }
  throw SchemaError(where, "expected a number or \"-inf\"");
}

json to_json(const Event& e) { return e.coords; }

Event event_from_json(const json& j, const std::string& where) {
  const auto c = numbers(j, where);
  for (double v : c) {
    if (!std::isfinite(v)) throw SchemaError(where, "event coordinates must be finite");
  }
  if (c.empty()) throw SchemaError(where, "event needs coordinates");
  return Event(c);
}

json to_json(const SpacetimeModel& m) {
  if (m.is_minkowski()) return {{"type", "minkowski"}, {"dim", m.event_size() - 1}};
  const FiniteCausal& f = m.finite_space();
  json ell = json::array();
  for (const auto& row : f.ell()) {
    json r = json::array();
    for (double v : row) r.push_back(number(v));
    ell.push_back(r);
  }
  return {{"type", "finite"}, {"labels", f.labels()}, {"ell", ell}};
}

SpacetimeModel model_from_json(const json& j, const std::string& where) {
  const json& type = field(j, where, "type");
  if (type == "minkowski") {
    const json& dim = field(j, where, "dim");
    if (!dim.is_number_unsigned() || dim.get<std::size_t>() == 0) {
      throw SchemaError(child(where, "dim"), "expected a positive integer");
    }
    return SpacetimeModel::minkowski(dim.get<std::size_t>());
  }
  if (type == "finite") {
    const std::string ew = child(where, "ell");
    const json& ell = array(field(j, where, "ell"), ew);
    std::vector<std::vector<double>> m;
    for (std::size_t i = 0; i < ell.size(); ++i) m.push_back(numbers(ell[i], child(ew, i)));
    std::vector<std::string> labels;
    if (j.contains("labels")) {
      const std::string lw = child(where, "labels");
      for (std::size_t i = 0; i < array(j["labels"], lw).size(); ++i) {
        if (!j["labels"][i].is_string()) throw SchemaError(child(lw, i), "expected a string");
        labels.push_back(j["labels"][i].get<std::string>());
      }
    }
    return anchored(ew, [&] {
      return SpacetimeModel::finite(FiniteCausal(std::move(labels), std::move(m)));
    });
  }
  throw SchemaError(child(where, "type"), "expected \"minkowski\" or \"finite\"");
}

json to_json(const SpacetimeModel& m, const Location& loc) {
  if (const auto* e = std::get_if<Event>(&loc)) return to_json(*e);
  return m.finite_space().labels().at(std::get<Label>(loc).index);
}

Location location_from_json(const SpacetimeModel& m, const json& j, const std::string& where) {
  if (m.is_minkowski()) {
    Event e = event_from_json(j, where);
    anchored(where, [&] { m.validate(e); });
    return e;
  }
  if (j.is_string()) {
    return anchored(where, [&] { return Location{m.finite_space().find(j.get<std::string>())}; });
  }
  if (j.is_number_unsigned()) {
    Location l = Label{j.get<std::size_t>()};
    anchored(where, [&] { m.validate(l); });
    return l;
  }
  throw SchemaError(where, "expected a label name or index");
}

json to_json(const SpacetimeModel& m, const DiscreteMeasure& mu) {
  json atoms = json::array();
  for (const auto& a : mu.atoms()) atoms.push_back({{"x", to_json(m, a.location)}, {"w", a.weight}});
  return {{"atoms", atoms}};
}

DiscreteMeasure measure_from_json(const SpacetimeModel& m, const json& j,
                                  const std::string& where) {
  const std::string aw = child(where, "atoms");
  const json& atoms = array(field(j, where, "atoms"), aw);
  std::vector<Atom> out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const std::string w = child(aw, i);
    Location x = location_from_json(m, field(atoms[i], w, "x"), child(w, "x"));
    const double weight = to_number(field(atoms[i], w, "w"), child(w, "w"));
    out.push_back({std::move(x), weight});
  }
  return anchored(where, [&] { return DiscreteMeasure(std::move(out)); });
}

json to_json(const SpacetimeModel& m, const MeasurePath& path) {
  json ms = json::array();
  for (const auto& mu : path.measures) ms.push_back(to_json(m, mu));
  return {{"times", path.times}, {"measures", ms}};
}

MeasurePath path_from_json(const SpacetimeModel& m, const json& j, const std::string& where) {
  MeasurePath p;
  p.times = numbers(field(j, where, "times"), child(where, "times"));
  const std::string mw = child(where, "measures");
  const json& ms = array(field(j, where, "measures"), mw);
  for (std::size_t i = 0; i < ms.size(); ++i) {
    p.measures.push_back(measure_from_json(m, ms[i], child(mw, i)));
  }
  anchored(where, [&] { p.validate(m); });
  return p;
}

json to_json(const SpacetimeModel& m, const LiftedPlan& plan) {
  json curves = json::array();
  for (const auto& c : plan.curves) {
    json pts = json::array();
    for (const auto& x : c.points) pts.push_back(to_json(m, x));
    curves.push_back({{"points", pts}, {"w", c.weight}});
  }
  return {{"times", plan.times}, {"curves", curves}};
}

LiftedPlan lifted_from_json(const SpacetimeModel& m, const json& j, const std::string& where) {
  LiftedPlan plan;
  plan.times = numbers(field(j, where, "times"), child(where, "times"));
  const std::string cw = child(where, "curves");
  const json& curves = array(field(j, where, "curves"), cw);
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const std::string w = child(cw, c);
    WeightedCurve curve;
    curve.weight = to_number(field(curves[c], w, "w"), child(w, "w"));
    const std::string pw = child(w, "points");
    const json& pts = array(field(curves[c], w, "points"), pw);
    for (std::size_t k = 0; k < pts.size(); ++k) {
      curve.points.push_back(location_from_json(m, pts[k], child(pw, k)));
    }
    plan.curves.push_back(std::move(curve));
  }
  anchored(where, [&] { plan.validate(m); });
  return plan;
}

json to_json(const VelocitySeries& v) {
  json fields = json::array();
  for (const auto& f : v.fields) {
    json atoms = json::array();
    for (const auto& a : f) atoms.push_back({{"x", to_json(a.at)}, {"v", a.v}});
    fields.push_back(atoms);
  }
  return {{"times", v.times}, {"fields", fields}, {"merges", v.merges}};
}

VelocitySeries velocity_from_json(const SpacetimeModel& m, const json& j,
                                  const std::string& where) {
  VelocitySeries v;
  v.times = numbers(field(j, where, "times"), child(where, "times"));
  const std::string fw = child(where, "fields");
  const json& fields = array(field(j, where, "fields"), fw);
  for (std::size_t k = 0; k < fields.size(); ++k) {
    const std::string kw = child(fw, k);
    std::vector<VelocityAtom> atoms;
    for (std::size_t i = 0; i < array(fields[k], kw).size(); ++i) {
      const std::string w = child(kw, i);
      VelocityAtom a;
      a.at = std::get<Event>(location_from_json(m, field(fields[k][i], w, "x"), child(w, "x")));
      a.v = numbers(field(fields[k][i], w, "v"), child(w, "v"));
      if (a.v.size() != a.at.size()) throw SchemaError(child(w, "v"), "dimension mismatch");
      double s = 0.0;
      for (double c : a.v) s += c * c;
      a.speed_bound = std::sqrt(s);
      atoms.push_back(std::move(a));
    }
    v.fields.push_back(std::move(atoms));
  }
  return v;
}

SolveReport make_solve_report(const SolveResult& r, const DualityReport* duality) {
  SolveReport s;
  s.value = r.value;
  s.ell_p = r.ell_p;
  if (r.plan) s.plan = r.plan->matrix;
  if (r.potentials) {
    s.phi = r.potentials->phi;
    s.psi = r.potentials->psi;
  }
  s.gap = duality ? duality->gap : 0.0;
  return s;
}

json to_json(const SolveReport& r) {
  json phi = json::array(), psi = json::array();
  for (double v : r.phi) phi.push_back(number(v));
  for (double v : r.psi) psi.push_back(number(v));
  return {{"value", number(r.value)}, {"ell_p", number(r.ell_p)}, {"plan", r.plan},
          {"phi", phi},              {"psi", psi},               {"gap", number(r.gap)}};
}

SolveReport solve_report_from_json(const json& j) {
  SolveReport r;
  r.value = to_number(field(j, "", "value"), "/value");
  r.ell_p = to_number(field(j, "", "ell_p"), "/ell_p");
  const json& plan = array(field(j, "", "plan"), "/plan");
  for (std::size_t i = 0; i < plan.size(); ++i) r.plan.push_back(numbers(plan[i], child("/plan", i)));
  r.phi = numbers(field(j, "", "phi"), "/phi");
  r.psi = numbers(field(j, "", "psi"), "/psi");
  r.gap = to_number(field(j, "", "gap"), "/gap");
  return r;
}

json to_json(const CCIReport& r) {
  json tests = json::array();
  for (const auto& t : r.tests) {
    json res = json::array();
    for (const auto& iv : t.intervals) res.push_back(iv.residual);
    tests.push_back({{"test", t.test},
                     {"ok", t.ok},
                     {"monotone", t.monotone},
                     {"worst_slack", number(t.worst)},
                     {"residuals", res}});
  }
  return {{"ok", r.ok()}, {"failures", r.failures()}, {"tests", tests}};
}

json to_json(const BBReport& r) {
  json speeds = json::array(), integrand = json::array();
  for (double v : r.speeds) speeds.push_back(number(v));
  for (double v : r.integrand) integrand.push_back(number(v));
  return {{"static", number(r.static_value)},
          {"dynamic", number(r.dynamic_action)},
          {"path_action", number(r.path_action)},
          {"curvewise_action", number(r.curvewise_action)},
          {"gap", number(r.gap)},
          {"merges", r.merges},
          {"infeasible", r.infeasible},
          {"ok", r.ok},
          {"times", r.times},
          {"speeds", speeds},
          {"integrand", integrand},
          {"cci", to_json(r.cci)}};
}

json to_json(const DualityReport& r) {
  json steep = json::array();
  for (const auto& s : r.steepened) {
    steep.push_back({{"epsilon", s.epsilon},
                     {"dual", number(s.dual_value)},
                     {"shift", number(s.shift)},
                     {"bound", number(s.bound)},
                     {"ok", s.ok}});
  }
  return {{"primal", number(r.primal)},
          {"dual", number(r.dual)},
          {"transform_dual", number(r.transform_dual)},
          {"gap", number(r.gap)},
          {"max_feasibility_violation", number(r.max_feasibility_violation)},
          {"max_slackness_violation", number(r.max_slackness_violation)},
          {"time_bound", number(r.time_bound)},
          {"steepened", steep},
          {"ok", r.ok()}};
}

namespace {

// Minimal structural walk over text nlohmann already accepted.
class PointerScanner {
 public:
  explicit PointerScanner(const std::string& text) : s_(text) {}

  std::map<std::string, std::size_t> run() {
    skip();
    value("");
    return lines_;
  }

 private:
  void skip() {
    while (i_ < s_.size()) {
      const char c = s_[i_];
      if (c == '\n') {
        ++line_;
      } else if (c != ' ' && c != '\t' && c != '\r') {
        break;
      }
      ++i_;
    }
  }

  std::string string() {
    std::string out;
    ++i_;
    while (i_ < s_.size() && s_[i_] != '"') {
      if (s_[i_] == '\\') ++i_;
      if (i_ < s_.size()) out += s_[i_];
      ++i_;
    }
    ++i_;
    return out;
  }

  static std::string escape(const std::string& key) {
    std::string out;
    for (char c : key) {
      if (c == '~') {
        out += "~0";
      } else if (c == '/') {
        out += "~1";
      } else {
        out += c;
      }
    }
    return out;
  }

  void value(const std::string& ptr) {
    lines_[ptr] = line_;
    if (i_ >= s_.size()) return;
    const char c = s_[i_];
    if (c == '{') {
      ++i_;
      skip();
      while (i_ < s_.size() && s_[i_] != '}') {
        const std::string key = string();
        skip();
        ++i_;  // ':'
        skip();
        value(ptr + "/" + escape(key));
        skip();
        if (i_ < s_.size() && s_[i_] == ',') {
          ++i_;
          skip();
        }
      }
      ++i_;
    } else if (c == '[') {
      ++i_;
      skip();
      std::size_t k = 0;
      while (i_ < s_.size() && s_[i_] != ']') {
        value(ptr + "/" + std::to_string(k++));
        skip();
        if (i_ < s_.size() && s_[i_] == ',') {
          ++i_;
          skip();
        }
      }
      ++i_;
    } else if (c == '"') {
      string();
    } else {
      while (i_ < s_.size() && std::string(",]} \t\r\n").find(s_[i_]) == std::string::npos) ++i_;
    }
  }

  const std::string& s_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::map<std::string, std::size_t> lines_;
};

std::size_t line_for(const std::map<std::string, std::size_t>& lines, std::string ptr) {
  while (true) {
    const auto it = lines.find(ptr);
    if (it != lines.end()) return it->second;
    if (ptr.empty()) return 1;
    ptr.erase(ptr.rfind('/'));
  }
}

Problem problem_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("", "problem file must be a JSON object");
  Problem p;
  p.model = model_from_json(field(j, "", "spacetime"), "/spacetime");
  if (j.contains("p")) {
    const double v = to_number(j["p"], "/p");
    p.exponent = anchored("/p", [&] { return Exponent::of(v); });
  }
  if (j.contains("mu0")) p.mu0 = measure_from_json(p.model, j["mu0"], "/mu0");
  if (j.contains("mu1")) p.mu1 = measure_from_json(p.model, j["mu1"], "/mu1");
  if (j.contains("path")) p.path = path_from_json(p.model, j["path"], "/path");
  if (j.contains("lifted")) p.lifted = lifted_from_json(p.model, j["lifted"], "/lifted");
  if (j.contains("velocity")) p.velocity = velocity_from_json(p.model, j["velocity"], "/velocity");
  if (j.contains("grid")) {
    const json& n = field(j["grid"], "/grid", "n");
    if (!n.is_number_unsigned() || n.get<std::size_t>() == 0) {
      throw SchemaError("/grid/n", "expected a positive integer");
    }
    p.grid = n.get<std::size_t>();
  }
  if (j.contains("tol")) p.tol = to_number(j["tol"], "/tol");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw SchemaError("/seed", "expected an unsigned integer");
    p.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("field")) {
    const json& fj = j["field"];
    FieldSpec f;
    const json& pts = array(field(fj, "/field", "points"), "/field/points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      f.points.push_back(location_from_json(p.model, pts[i], child("/field/points", i)));
    }
    f.f = numbers(field(fj, "/field", "f"), "/field/f");
    if (f.f.size() != f.points.size()) throw SchemaError("/field/f", "one value per point");
    f.L = to_number(field(fj, "/field", "L"), "/field/L");
    f.times = numbers(field(fj, "/field", "times"), "/field/times");
    f.interior.assign(f.points.size(), true);
    if (fj.contains("interior")) {
      const json& in = array(fj["interior"], "/field/interior");
      if (in.size() != f.points.size()) throw SchemaError("/field/interior", "one flag per point");
      for (std::size_t i = 0; i < in.size(); ++i) {
        if (!in[i].is_boolean()) throw SchemaError(child("/field/interior", i), "expected a boolean");
        f.interior[i] = in[i].get<bool>();
      }
    }
    if (fj.contains("h")) f.h = to_number(fj["h"], "/field/h");
    f.radii = fj.contains("radii") ? numbers(fj["radii"], "/field/radii")
                                   : std::vector<double>{1.0, 0.5, 0.25};
    p.field = std::move(f);
  }
  return p;
}

}  // namespace

std::map<std::string, std::size_t> pointer_lines(const std::string& text) {
  return PointerScanner(text).run();
}

Problem parse_problem(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string msg = e.what();
    const auto pos = msg.find("syntax error");
    throw ParseError(line, col, pos == std::string::npos ? msg : msg.substr(pos));
  }
  try {
    return problem_from_json(j);
  } catch (const SchemaError& e) {
    throw ParseError(line_for(pointer_lines(text), e.pointer()), 0, e.what());
  }
}

Problem load_problem(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ParseError(0, 0, "cannot open " + file);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_problem(os.str());
}

}  // namespace causal_ot::io

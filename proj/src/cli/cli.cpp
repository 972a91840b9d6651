#include "liesym/cli/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "liesym/builder/symmetries.hpp"
#include "liesym/symexpr/parse.hpp"

namespace liesym::cli {

namespace {

using json = nlohmann::ordered_json;

std::string read_file(const std::string& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw SpecError(what + ": cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load_json(const std::string& path, const std::string& what) {
  const std::string text = read_file(path, what);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecError(what + ": malformed JSON: " + e.what());
  }
}

std::string text_of(const json& j, const std::string& field) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw SpecError(field + ": expected an expression string");
}

// Symbols a spec may reference, and values for declared constants.
struct Scope {
  std::set<std::string> allowed;
  AtomMap values;
  bool strict = true;

  void check(AtomId a, const std::string& field) const {
    const AtomInfo& info = atom_info(a);
    if (info.kind != AtomKind::Symbol) {
      for (AtomId arg : info.args) check(arg, field);
      if (info.kind == AtomKind::Function && !allowed.count(info.name))
        throw SpecError(field + ": undeclared function '" + info.name + "'");
      return;
    }
    if (!allowed.count(info.name)) throw SpecError(field + ": undeclared symbol '" + info.name + "'");
  }

  Expr expr(const json& j, const std::string& field) const { return expr_text(text_of(j, field), field); }

  Expr expr_text(const std::string& text, const std::string& field) const {
    Expr e;
    try {
      e = parse(text);
    } catch (const ParseError& pe) {
      throw SpecError(field + ": " + pe.what());
    } catch (const SymbolError& se) {
      throw SpecError(field + ": " + se.what());
    }
    if (strict)
      for (AtomId a : e.atoms()) check(a, field);
    return substitute(e, values);
  }
};

struct Spec {
  std::vector<std::string> names;
  Coordinates coords;
  std::string time = "t";
  Scope scope;
  std::optional<MetricField> metric;
  json pde;
};

ExprMatrix matrix_field(const Scope& s, const json& j, std::size_t n, const std::string& field) {
  if (!j.is_array() || j.size() != n) throw SpecError(field + ": expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  ExprMatrix m;
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) throw SpecError(field + "[" + std::to_string(i) + "]: expected " + std::to_string(n) + " entries");
    std::vector<Expr> row;
    for (std::size_t k = 0; k < n; ++k)
      row.push_back(s.expr(j[i][k], field + "[" + std::to_string(i) + "][" + std::to_string(k) + "]"));
    m.push_back(row);
  }
  return m;
}

std::vector<Expr> vector_field(const Scope& s, const json& j, std::size_t n, const std::string& field) {
  if (!j.is_array() || j.size() != n) throw SpecError(field + ": expected " + std::to_string(n) + " components");
  std::vector<Expr> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(s.expr(j[i], field + "[" + std::to_string(i) + "]"));
  return v;
}

Spec load_spec(const std::string& path, const std::string& what) {
  const json j = load_json(path, what);
  if (!j.is_object()) throw SpecError(what + ": expected a JSON object");
  Spec s;
  if (!j.contains("coordinates") || !j["coordinates"].is_array() || j["coordinates"].empty())
    throw SpecError("coordinates: expected a nonempty array of names");
  for (const auto& c : j["coordinates"]) {
    if (!c.is_string()) throw SpecError("coordinates: expected names");
    s.names.push_back(c.get<std::string>());
  }
  try {
    s.coords = Coordinates::of(s.names);
  } catch (const std::exception& e) {
    throw SpecError(std::string("coordinates: ") + e.what());
  }
  if (j.contains("time")) {
    if (!j["time"].is_string()) throw SpecError("time: expected a name");
    s.time = j["time"].get<std::string>();
  }
  for (const auto& n : s.names) s.scope.allowed.insert(n);
  s.scope.allowed.insert(s.time);
  s.scope.allowed.insert("u");
  if (j.contains("functions")) {
    if (!j["functions"].is_object()) throw SpecError("functions: expected an object");
    for (const auto& [name, args] : j["functions"].items()) {
      std::vector<std::string> a;
      if (!args.is_array()) throw SpecError("functions." + name + ": expected an argument list");
      for (const auto& x : args) {
        if (!x.is_string() || !s.scope.allowed.count(x.get<std::string>()))
          throw SpecError("functions." + name + ": arguments must be coordinates, the time or u");
        a.push_back(x.get<std::string>());
      }
      try {
        declare_function(name, a);
      } catch (const SymbolError& e) {
        throw SpecError("functions." + name + ": " + e.what());
      }
      s.scope.allowed.insert(name);
    }
  }
  if (j.contains("constants")) {
    if (!j["constants"].is_object()) throw SpecError("constants: expected an object");
    for (const auto& [name, val] : j["constants"].items()) s.scope.allowed.insert(name);
    for (const auto& [name, val] : j["constants"].items()) {
      if (val.is_null()) continue;
      Scope plain = s.scope;
      plain.values.clear();
      const Expr v = plain.expr(val, "constants." + name);
      if (!v.is_rational()) throw SpecError("constants." + name + ": value must be a rational number");
      s.scope.values[symbol(name)] = v;
    }
  }
  if (j.contains("metric")) {
    const json& m = j["metric"];
    const std::size_t n = s.names.size();
    try {
      if (m.contains("lower") == m.contains("upper")) throw SpecError("metric: give exactly one of lower or upper");
      if (m.contains("lower"))
        s.metric = MetricField::from_lower(s.coords, matrix_field(s.scope, m["lower"], n, "metric.lower"));
      else
        s.metric = MetricField::from_upper(s.coords, matrix_field(s.scope, m["upper"], n, "metric.upper"));
    } catch (const GeometryError& e) {
      throw SpecError(std::string("metric: ") + e.what());
    }
  }
  if (j.contains("pde")) {
    if (!j["pde"].is_object() || !j["pde"].contains("kind") || !j["pde"]["kind"].is_string())
      throw SpecError("pde: expected an object with a kind");
    s.pde = j["pde"];
  }
  return s;
}

const MetricField& need_metric(const Spec& s) {
  if (!s.metric) throw SpecError("metric: required for this command");
  return *s.metric;
}

int default_degree() {
  const char* env = std::getenv("LIESYM_DEGREE_DEFAULT");
  if (!env || !*env) return 2;
  try {
    std::size_t pos = 0;
    const int d = std::stoi(env, &pos);
    if (pos != std::string(env).size() || d < 0) throw std::invalid_argument("bad");
    return d;
  } catch (const std::exception&) {
    throw SpecError(std::string("LIESYM_DEGREE_DEFAULT: expected a nonnegative integer, got '") + env + "'");
  }
}

// ---- problems ---------------------------------------------------------------------

struct Problem {
  std::string kind;
  std::optional<PDEProblem> pde;
  // ODE kinds
  std::optional<MetricField> metric;
  std::vector<ForceTensor> forces;
};

Problem build_problem(const Spec& s) {
  if (s.pde.is_null()) throw SpecError("pde: required for this command");
  Problem p;
  p.kind = s.pde["kind"].get<std::string>();
  const std::size_t n = s.names.size();
  const json& d = s.pde;
  auto a_matrix = [&]() {
    if (d.contains("A")) return matrix_field(s.scope, d["A"], n, "pde.A");
    return need_metric(s).upper();
  };
  try {
    if (p.kind == "general") {
      p.pde = PDEProblem::general(JetSpace::make(s.coords.vars), a_matrix());
    } else if (p.kind == "linear") {
      if (!d.contains("B")) throw SpecError("pde.B: required for a linear problem");
      const Expr f = d.contains("f") ? s.scope.expr(d["f"], "pde.f") : Expr(0);
      p.pde = PDEProblem::linear(JetSpace::make(s.coords.vars), a_matrix(), vector_field(s.scope, d["B"], n, "pde.B"), f);
    } else if (p.kind == "heat") {
      const Expr q = d.contains("q") ? s.scope.expr(d["q"], "pde.q") : Expr(0);
      p.pde = heat_problem(need_metric(s), q, s.time);
    } else if (p.kind == "wave") {
      if (n != 2) throw SpecError("coordinates: the wave problem has two coordinates");
      if (!d.contains("c")) throw SpecError("pde.c: required for the wave problem");
      const Expr c = s.scope.expr(d["c"], "pde.c");
      if (c.is_zero()) throw SpecError("pde.c: vanishes identically");
      ExprMatrix a{{c * c, Expr(0)}, {Expr(0), Expr(-1)}};
      p.pde = PDEProblem::linear(JetSpace::make(s.coords.vars), a, {Expr(0), Expr(0)}, Expr(0));
    } else if (p.kind == "geodesic") {
      p.metric = need_metric(s);
      if (d.contains("force")) {
        std::vector<Expr> f = vector_field(s.scope, d["force"], n, "pde.force");
        for (auto& e : f) e = -e;
        if (!is_zero(f)) p.forces.push_back(ForceTensor::vector(f));
      }
    } else if (p.kind == "lagrangian") {
      p.metric = need_metric(s);
      const Expr v = d.contains("V") ? s.scope.expr(d["V"], "pde.V") : Expr(0);
      const auto grad = p.metric->gradient(v);
      if (!is_zero(grad)) p.forces.push_back(ForceTensor::vector(grad));
    } else {
      throw SpecError("pde.kind: unknown kind '" + p.kind + "'");
    }
  } catch (const ProblemError& e) {
    throw SpecError(std::string("pde: ") + e.what());
  }
  return p;
}

struct Generator {
  std::optional<GeneratorPDE> pde;
  std::optional<GeneratorODE> ode;
};

Generator load_generator(const std::string& path, const Spec& s, const Problem& p) {
  const json j = load_json(path, "generator");
  if (!j.is_object() || !j.contains("xi") || !j.contains("eta")) throw SpecError("generator: expected xi and eta");
  Scope loose = s.scope;
  loose.strict = false;
  Generator g;
  if (p.pde) {
    g.pde = GeneratorPDE{vector_field(loose, j["xi"], p.pde->jet.dim(), "generator.xi"), loose.expr(j["eta"], "generator.eta")};
  } else {
    g.ode = GeneratorODE{loose.expr(j["xi"], "generator.xi"), vector_field(loose, j["eta"], s.names.size(), "generator.eta")};
  }
  return g;
}

GeneratorODE generic_ode_generator(const OdeJet& jet) {
  std::vector<AtomId> args{jet.t};
  args.insert(args.end(), jet.x.begin(), jet.x.end());
  GeneratorODE g;
  g.xi = Expr::func(declare_function_unique("xi", args));
  for (AtomId x : jet.x) g.eta.push_back(Expr::func(declare_function_unique("eta_" + atom_info(x).name, args)));
  return g;
}

// ---- output -----------------------------------------------------------------------

json strings(const std::vector<Expr>& v) {
  json out = json::array();
  for (const Expr& e : v) out.push_back(e.to_string());
  return out;
}

std::string paren(const Expr& e) {
  const std::string s = e.to_string();
  return s.find_first_of("+- ") == std::string::npos ? s : "(" + s + ")";
}

std::string vector_text(const std::vector<Expr>& comps, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (comps[i].is_zero()) continue;
    if (!out.empty()) out += " + ";
    out += (comps[i] == Expr(1) ? std::string() : paren(comps[i]) + "*") + "d_" + names[i];
  }
  return out.empty() ? "0" : out;
}

std::vector<std::string> names_of(const std::vector<AtomId>& vars) {
  std::vector<std::string> out;
  for (AtomId a : vars) out.push_back(atom_info(a).name);
  return out;
}

std::string pde_generator_text(const GeneratorPDE& g, const std::vector<std::string>& names) {
  std::vector<Expr> comps = g.xi;
  comps.push_back(g.eta);
  std::vector<std::string> n = names;
  n.push_back("u");
  return vector_text(comps, n);
}

json generator_json(const GeneratorPDE& g) { return json{{"xi", strings(g.xi)}, {"eta", g.eta.to_string()}}; }

json element_json(const AlgebraElement& el) {
  json j;
  j["label"] = el.label;
  j["class"] = to_string(el.cls.tag);
  j["gradient"] = el.cls.gradient;
  j["psi"] = el.cls.conformal ? json(el.cls.psi.to_string()) : json(nullptr);
  j["potential"] = el.cls.potential ? json(el.cls.potential->to_string()) : json(nullptr);
  j["field"] = strings(el.field);
  return j;
}

std::string md_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else out += c;
  }
  return out;
}

struct MdTable {
  std::vector<std::string> head;
  std::vector<std::vector<std::string>> rows;

  void print(std::ostream& out) const {
    out << "|";
    for (const auto& h : head) out << " " << h << " |";
    out << "\n|";
    for (std::size_t i = 0; i < head.size(); ++i) out << "---|";
    out << "\n";
    for (const auto& r : rows) {
      out << "|";
      for (const auto& c : r) out << " " << md_escape(c) << " |";
      out << "\n";
    }
  }
};

// Euclidean catalog for matching coordinate names, otherwise the polynomial solver.
AlgebraBasis homothetic_algebra(const MetricField& g, int degree) {
  const std::size_t n = g.dim();
  if (names_of(g.coords().vars) == euclidean_names(n) && g.lower() == identity_matrix(n)) {
    AlgebraBasis cat = euclidean_catalog(n);
    std::vector<AlgebraElement> keep;
    for (auto& el : cat.elements)
      if (el.cls.is_kv() || el.cls.is_hv()) keep.push_back(el);
    cat.elements = keep;
    return cat;
  }
  return solve_homothetic(g, degree);
}

TimeAnsatz parse_ansatz(const std::string& text, int degree) {
  TimeAnsatz a;
  a.degree = degree;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, '+')) {
    if (tok == "exp") {
      a.exponential = true;
    } else if (tok == "b") {
      a.constant_b = true;
    } else if (tok.rfind("poly:", 0) == 0) {
      try {
        std::size_t pos = 0;
        a.degree = std::stoi(tok.substr(5), &pos);
        if (pos != tok.size() - 5 || a.degree < 0) throw std::invalid_argument("bad");
      } catch (const std::exception&) {
        throw SpecError("--ansatz: bad degree in '" + tok + "'");
      }
    } else {
      throw SpecError("--ansatz: expected poly:d, exp or b joined by '+', got '" + tok + "'");
    }
  }
  return a;
}

// ---- commands ---------------------------------------------------------------------

struct Options {
  std::string format = "json";
  std::string metric, problem, generator, flux, potential, space, extra, c, lambda = "solve", ansatz, desitter;
  int degree = -1;
  int euclidean = 0;
  int table = 0;
  bool no_enumerate = false;
};

void emit(std::ostream& out, const json& j) { out << j.dump(2) << "\n"; }

int cmd_collineations(const Options& o, std::ostream& out) {
  const Spec s = load_spec(o.metric, "metric");
  const MetricField& g = need_metric(s);
  const AlgebraBasis b = solve_homothetic(g, o.degree);
  if (o.format == "md") {
    out << "# Homothetic algebra (polynomial degree " << o.degree << ")\n\n";
    MdTable t{{"Label", "Class", "Gradient", "psi", "Vector"}, {}};
    for (const auto& el : b.elements)
      t.rows.push_back({el.label, to_string(el.cls.tag), el.cls.gradient ? "yes" : "no", el.cls.psi.to_string(),
                        vector_text(el.field, s.names)});
    t.print(out);
    out << "\nKVs: " << b.kv_count() << ", HVs: " << b.hv_count() << " (bounded ansatz; completeness not asserted)\n";
    return 0;
  }
  json j;
  j["command"] = "collineations";
  j["coordinates"] = s.names;
  j["degree"] = o.degree;
  j["complete"] = b.complete;
  j["kv"] = b.kv_count();
  j["hv"] = b.hv_count();
  j["elements"] = json::array();
  for (const auto& el : b.elements) j["elements"].push_back(element_json(el));
  emit(out, j);
  return 0;
}

std::string family(CollineationTag t) {
  switch (t) {
    case CollineationTag::KV:
    case CollineationTag::GradientKV: return "Killing vectors (KV)";
    case CollineationTag::HV:
    case CollineationTag::GradientHV: return "Homothetic vector (HV)";
    case CollineationTag::AC: return "Affine collineation (AC)";
    case CollineationTag::SPC: return "Special projective collineation (SPC)";
    case CollineationTag::PC: return "Projective collineation (PC)";
    case CollineationTag::SCKV: return "Special conformal Killing vector (SCKV)";
    case CollineationTag::ProperCKV: return "Conformal Killing vector (CKV)";
    case CollineationTag::None: break;
  }
  return "none";
}

int cmd_catalog(const Options& o, std::ostream& out) {
  AlgebraBasis b;
  std::string title;
  json j;
  j["command"] = "catalog";
  if (o.euclidean > 0) {
    b = euclidean_catalog(static_cast<std::size_t>(o.euclidean));
    title = "Collineations of Euclidean space E^" + std::to_string(o.euclidean);
    j["space"] = "euclidean";
    j["n"] = o.euclidean;
  } else if (!o.desitter.empty()) {
    Scope sc;
    sc.allowed = {"K"};
    const Expr k = sc.expr_text(o.desitter, "--desitter");
    if (k.is_zero()) throw SpecError("--desitter: K must be nonzero");
    b = desitter_catalog(k);
    title = "Killing vectors of de Sitter space, K = " + k.to_string();
    j["space"] = "desitter";
    j["K"] = k.to_string();
  } else {
    throw SpecError("catalog: give --euclidean n or --desitter K");
  }
  const auto names = names_of(b.coords.vars);
  std::vector<std::string> order;
  std::map<std::string, std::pair<std::vector<const AlgebraElement*>, std::vector<const AlgebraElement*>>> rows;
  for (const auto& el : b.elements) {
    const std::string f = family(el.cls.tag);
    if (!rows.count(f)) order.push_back(f);
    (el.cls.gradient ? rows[f].first : rows[f].second).push_back(&el);
  }
  if (o.format == "md") {
    out << "# " << title << "\n\n";
    MdTable t{{"Collineation", "Gradient", "Nongradient"}, {}};
    auto cell = [&](const std::vector<const AlgebraElement*>& els) {
      std::string s;
      for (const auto* el : els) s += (s.empty() ? "" : "; ") + el->label + " = " + vector_text(el->field, names);
      return s;
    };
    for (const auto& f : order) t.rows.push_back({f, cell(rows[f].first), cell(rows[f].second)});
    t.print(out);
    return 0;
  }
  j["coordinates"] = names;
  j["rows"] = json::array();
  for (const auto& f : order) {
    json r;
    r["collineation"] = f;
    r["gradient"] = json::array();
    r["nongradient"] = json::array();
    for (const auto* el : rows[f].first) r["gradient"].push_back(el->label);
    for (const auto* el : rows[f].second) r["nongradient"].push_back(el->label);
    j["rows"].push_back(r);
  }
  j["elements"] = json::array();
  for (const auto& el : b.elements) j["elements"].push_back(element_json(el));
  emit(out, j);
  return 0;
}

int cmd_determining(const Options& o, std::ostream& out) {
  const Spec s = load_spec(o.problem, "problem");
  const Problem p = build_problem(s);
  DeterminingSystem sys;
  if (p.pde) {
    GeneratorPDE x;
    if (!o.generator.empty())
      x = *load_generator(o.generator, s, p).pde;
    else
      x = p.pde->kind == PDEProblem::Kind::GeneralF ? generic_generator(p.pde->jet) : generic_linear_generator(p.pde->jet);
    if (o.lambda != "solve" && o.lambda != "opaque") throw SpecError("--lambda: expected solve or opaque");
    sys = p.pde->kind == PDEProblem::Kind::GeneralF
              ? determining_general(*p.pde, x)
              : determining_linear(*p.pde, x, o.lambda == "solve" ? LambdaMode::Solve : LambdaMode::Opaque);
  } else {
    const OdeJet jet = OdeJet::make(p.metric->coords(), s.time);
    const GeneratorODE x = o.generator.empty() ? generic_ode_generator(jet) : *load_generator(o.generator, s, p).ode;
    sys = determining_ode(jet, christoffel(*p.metric), p.forces, x);
  }
  if (o.format == "md") {
    out << "# Determining equations (" << p.kind << ")\n\n";
    if (sys.lambda) out << "lambda = " << sys.lambda->to_string() << "\n\n";
    MdTable t{{"Tag", "Source", "Residual"}, {}};
    for (const auto& e : sys.equations) t.rows.push_back({e.tag, e.source, e.residual.to_string()});
    t.print(out);
    return 0;
  }
  json j;
  j["command"] = "determining";
  j["kind"] = p.kind;
  j["lambda"] = sys.lambda ? json(sys.lambda->to_string()) : json(nullptr);
  j["vanishes"] = sys.vanishes();
  j["equations"] = json::array();
  for (const auto& e : sys.equations)
    j["equations"].push_back(json{{"tag", e.tag}, {"source", e.source}, {"residual", e.residual.to_string()}});
  emit(out, j);
  return 0;
}

int cmd_verify(const Options& o, std::ostream& out) {
  if (o.generator.empty()) throw SpecError("--generator: required");
  const Spec s = load_spec(o.problem, "problem");
  const Problem p = build_problem(s);
  const Generator g = load_generator(o.generator, s, p);
  json j;
  j["command"] = "verify";
  j["kind"] = p.kind;
  json res = json::array();
  if (p.pde) {
    const SymmetryCheck chk = verify_symmetry(*p.pde, *g.pde);
    j["is_symmetry"] = chk.is_symmetry;
    j["lambda"] = chk.lambda.to_string();
    for (const auto& [m, c] : chk.residuals) res.push_back(json{{"monomial", m}, {"coefficient", c.to_string()}});
  } else {
    const OdeJet jet = OdeJet::make(p.metric->coords(), s.time);
    const DeterminingSystem sys = determining_ode(jet, christoffel(*p.metric), p.forces, *g.ode);
    j["is_symmetry"] = sys.vanishes();
    j["lambda"] = nullptr;
    for (const auto* e : sys.nonzero()) res.push_back(json{{"monomial", e->source}, {"coefficient", e->residual.to_string()}});
  }
  j["residuals"] = res;
  if (o.format == "md") {
    out << "# Symmetry check (" << p.kind << ")\n\n";
    out << "is symmetry: " << (j["is_symmetry"].get<bool>() ? "yes" : "no") << "\n";
    if (!j["lambda"].is_null()) out << "lambda: " << j["lambda"].get<std::string>() << "\n";
    if (!res.empty()) {
      out << "\n";
      MdTable t{{"Monomial", "Coefficient"}, {}};
      for (const auto& r : res) t.rows.push_back({r["monomial"], r["coefficient"]});
      t.print(out);
    }
    return 0;
  }
  emit(out, j);
  return 0;
}

int cmd_heat_table(const Options& o, std::ostream& out) {
  const std::size_t n = static_cast<std::size_t>(o.table);
  const MetricField g = euclidean_metric(Coordinates::of(euclidean_names(n)));
  std::vector<std::string> names{"t"};
  for (const auto& s : euclidean_names(n)) names.push_back(s);
  json rows = json::array();
  MdTable t{{"q(u)", "Lie symmetry vector", "Side condition", "Verified"}, {}};
  for (FluxRow r : {FluxRow::Linear, FluxRow::Power, FluxRow::LogLinear, FluxRow::Exponential}) {
    const FluxTableRow row = flux_table_row(g, r, 2);
    const bool ok = verify_symmetry(heat_problem(g, row.q), row.generator).is_symmetry;
    rows.push_back(json{{"row", to_string(r)},
                        {"q", row.q.to_string()},
                        {"generator", generator_json(row.generator)},
                        {"side_condition", row.side_condition},
                        {"verified", ok}});
    t.rows.push_back({row.q.to_string(), pde_generator_text(row.generator, names), row.side_condition, ok ? "yes" : "no"});
  }
  if (o.format == "md") {
    out << "# Heat equation with flux q(u) on E^" << n << "\n\n";
    t.print(out);
    out << "\nY = S^{,i} = x^i d_i (psi = 1); K = x^1 is the gradient KV potential. Power row uses exponent 2.\n";
    return 0;
  }
  emit(out, json{{"command", "heat"}, {"table", n}, {"rows", rows}});
  return 0;
}

int cmd_heat(const Options& o, std::ostream& out) {
  if (o.table > 0) return cmd_heat_table(o, out);
  if (o.metric.empty()) throw SpecError("--metric: required");
  if (o.flux.empty()) throw SpecError("--flux: required");
  const Spec s = load_spec(o.metric, "metric");
  const MetricField& g = need_metric(s);
  if (s.time != "t") throw SpecError("time: the heat builder uses t");
  std::string qtext = read_file(o.flux, "flux");
  const Expr q = s.scope.expr_text(qtext, "flux");
  const AlgebraBasis b = homothetic_algebra(g, o.degree);
  std::optional<TimeAnsatz> ans;
  if (!o.ansatz.empty()) ans = parse_ansatz(o.ansatz, o.degree);
  std::vector<std::string> names{"t"};
  names.insert(names.end(), s.names.begin(), s.names.end());

  json items = json::array();
  MdTable t{{"q(u)", "Element", "Case", "Lie symmetry vector", "Constraint"}, {}};
  std::vector<VectorField> all;
  for (const auto& el : b.elements) {
    if (!el.cls.is_kv() && !el.cls.is_hv()) continue;
    if (el.cls.gradient && !el.cls.potential) continue;
    const HeatSymmetry h = el.cls.gradient ? heat_symmetry_gradient(g, *el.cls.potential, q)
                                           : heat_symmetry_nongradient(g, el.field, q);
    json it;
    it["element"] = el.label;
    it["case"] = h.case_tag;
    it["collineation"] = strings(el.field);
    it["generator"] = generator_json(h.generator);
    it["residual"] = h.residual.to_string();
    json cs = json::array();
    for (AtomId c : h.constants) cs.push_back(atom_info(c).name);
    it["constants"] = cs;
    json fs = h.time_functions;
    fs.push_back(h.b);
    if (h.time) fs.push_back(h.time->W);
    it["functions"] = fs;
    if (h.time) it["time_rule"] = "D[" + h.time->W + ",t] = " + h.time->T;
    std::string cell = pde_generator_text(h.generator, names);
    if (ans) {
      json sols = json::array();
      cell.clear();
      for (const auto& x : solve_heat_ansatz(g, h, *ans)) {
        sols.push_back(generator_json(x));
        VectorField f = x.xi;
        f.push_back(x.eta);
        all.push_back(f);
        cell += (cell.empty() ? "" : "; ") + pde_generator_text(x, names);
      }
      it["solutions"] = sols;
    }
    items.push_back(it);
    t.rows.push_back({q.to_string(), el.label, h.case_tag, cell, ans ? "solved" : h.residual.to_string() + " = 0"});
  }
  std::optional<std::size_t> dim;
  if (ans) {
    std::vector<AtomId> vars{symbol("t")};
    for (AtomId v : s.coords.vars) vars.push_back(v);
    vars.push_back(symbol("u"));
    Coordinates c;
    c.vars = vars;
    dim = span_dimension(all, c);
  }
  if (o.format == "md") {
    out << "# Heat equation symmetries, q(u) = " << q.to_string() << "\n\n";
    t.print(out);
    if (dim) out << "\nSolved generators span " << *dim << " dimensions (b = 0 unless the ansatz allows a constant b).\n";
    return 0;
  }
  json j;
  j["command"] = "heat";
  j["q"] = q.to_string();
  j["algebra_complete"] = b.complete;
  j["symmetries"] = items;
  j["solution_dimension"] = dim ? json(*dim) : json(nullptr);
  emit(out, j);
  return 0;
}

int cmd_noether(const Options& o, std::ostream& out) {
  if (o.metric.empty()) throw SpecError("--metric: required");
  if (o.potential.empty()) throw SpecError("--potential: required");
  const Spec s = load_spec(o.metric, "metric");
  const MetricField& g = need_metric(s);
  if (s.time != "t") throw SpecError("time: the Noether builder uses t");
  const Expr v = s.scope.expr_text(read_file(o.potential, "potential"), "potential");
  const AlgebraBasis b = homothetic_algebra(g, o.degree);
  const NoetherAlgebra alg = noether_algebra(g, b, v);
  std::vector<std::string> names{"t"};
  names.insert(names.end(), s.names.begin(), s.names.end());
  json items = json::array();
  MdTable t{{"Label", "Generator", "Gauge", "Integral", "Admitted", "dI/dt = 0"}, {}};
  for (const auto& r : alg.results) {
    const bool conserved = r.admitted && noether_integral_derivative(g, v, r).is_zero();
    json it;
    it["label"] = r.label;
    it["xi"] = r.generator.xi.to_string();
    it["eta"] = strings(r.generator.eta);
    it["gauge"] = r.gauge.to_string();
    it["residual"] = r.residual.to_string();
    it["integral"] = r.integral.to_string();
    it["admitted"] = r.admitted;
    it["psi"] = r.psi.to_string();
    it["m"] = r.m ? json(r.m->to_string()) : json(nullptr);
    it["time_rule"] = r.time ? json("D[" + r.time->T + ",t,t] = " + r.m->to_string() + "*" + r.time->T + ", D[" +
                                    r.time->W + ",t] = " + r.time->T)
                             : json(nullptr);
    it["integral_conserved"] = conserved;
    items.push_back(it);
    std::vector<Expr> comps{r.generator.xi};
    comps.insert(comps.end(), r.generator.eta.begin(), r.generator.eta.end());
    t.rows.push_back({r.label, vector_text(comps, names), r.gauge.to_string(), r.integral.to_string(),
                      r.admitted ? "yes" : "no (" + r.residual.to_string() + ")", conserved ? "yes" : "-"});
  }
  const std::string convention = "dimension counts d/dt; an opaque T(t) family counts as two";
  if (o.format == "md") {
    out << "# Noether point symmetries, V = " << v.to_string() << "\n\n";
    t.print(out);
    out << "\nDimension: " << alg.dimension << " (" << convention << ")\n";
    return 0;
  }
  json j;
  j["command"] = "noether";
  j["V"] = v.to_string();
  j["results"] = items;
  j["dimension"] = alg.dimension;
  j["convention"] = convention;
  emit(out, j);
  return 0;
}

int cmd_wave(const Options& o, std::ostream& out) {
  if (o.c.empty()) throw SpecError("--c: required");
  Scope sc;
  sc.allowed = {"x"};
  const Expr c = sc.expr_text(o.c, "--c");
  if (c.is_zero()) throw SpecError("--c: vanishes identically");
  std::vector<VectorField> extra;
  if (!o.extra.empty()) {
    const json j = load_json(o.extra, "extra");
    if (!j.is_array()) throw SpecError("extra: expected an array of vectors");
    Scope xy;
    xy.allowed = {"x", "y"};
    for (std::size_t k = 0; k < j.size(); ++k) extra.push_back(vector_field(xy, j[k], 2, "extra[" + std::to_string(k) + "]"));
  }
  const WaveSymmetries w = wave_symmetries(c, o.degree, extra);
  const std::vector<std::string> names{"x", "y"};
  if (o.format == "md") {
    out << "# Wave equation c^2 u_xx - u_yy = 0, c = " << c.to_string() << "\n\n";
    MdTable t{{"Label", "Generator", "lambda", "Verified"}, {}};
    for (const auto& g : w.generators)
      t.rows.push_back({g.label, pde_generator_text(g.generator, names), g.lambda.to_string(), g.verified ? "yes" : "no"});
    t.print(out);
    return 0;
  }
  json j;
  j["command"] = "wave";
  j["c"] = c.to_string();
  j["kv"] = w.algebra.kv_count();
  j["hv"] = w.algebra.hv_count();
  j["algebra"] = json::array();
  for (const auto& el : w.algebra.elements) j["algebra"].push_back(element_json(el));
  j["generators"] = json::array();
  for (const auto& g : w.generators)
    j["generators"].push_back(json{{"label", g.label},
                                   {"generator", generator_json(g.generator)},
                                   {"lambda", g.lambda.to_string()},
                                   {"verified", g.verified}});
  emit(out, j);
  return 0;
}

int cmd_counts(const Options& o, std::ostream& out) {
  std::string space = o.space;
  std::size_t n = 1;
  if (space != "1d") {
    const auto colon = space.find(':');
    if (colon == std::string::npos) throw SpecError("--space: expected flat:n, constcurv:n or 1d");
    try {
      std::size_t pos = 0;
      const int v = std::stoi(space.substr(colon + 1), &pos);
      if (pos != space.size() - colon - 1 || v < 1) throw std::invalid_argument("bad");
      n = static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw SpecError("--space: bad dimension in '" + space + "'");
    }
    space = space.substr(0, colon);
    if (space != "flat" && space != "constcurv") throw SpecError("--space: unknown space '" + space + "'");
    if (space == "constcurv" && n < 2) throw SpecError("--space: constant curvature needs n >= 2");
  }
  const SymmetryCount c = heat_symmetry_counts(space, n, !o.no_enumerate);
  if (o.format == "md") {
    out << "# Heat equation symmetry count\n\n";
    MdTable t{{"Space", "n", "Count", "Enumerated"}, {}};
    t.rows.push_back({c.space, std::to_string(c.n), std::to_string(c.formula), c.enumerated ? std::to_string(*c.enumerated) : "-"});
    t.print(out);
    out << "\nConvention: " << c.convention << "\n";
    return 0;
  }
  json j;
  j["command"] = "counts";
  j["space"] = c.space;
  j["n"] = c.n;
  j["count"] = c.formula;
  j["enumerated"] = c.enumerated ? json(*c.enumerated) : json(nullptr);
  j["convention"] = c.convention;
  emit(out, j);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"liesym: Lie and Noether point symmetries from collineations"};
  app.name("liesym");
  app.require_subcommand(1);
  Options o;
  app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "md"}));

  auto* col = app.add_subcommand("collineations", "KV/HV algebra of a metric by polynomial ansatz");
  col->add_option("--metric", o.metric, "Metric spec (JSON)")->required();
  col->add_option("--degree", o.degree, "Polynomial degree");

  auto* det = app.add_subcommand("determining", "Tagged determining equations");
  det->add_option("--problem", o.problem, "Problem spec (JSON)")->required();
  det->add_option("--generator", o.generator, "Generator (JSON); generic when omitted");
  det->add_option("--lambda", o.lambda, "solve or opaque");

  auto* ver = app.add_subcommand("verify", "Check a generator against a problem");
  ver->add_option("--problem", o.problem, "Problem spec (JSON)")->required();
  ver->add_option("--generator", o.generator, "Generator (JSON)")->required();

  auto* heat = app.add_subcommand("heat", "Heat equation symmetries from the homothetic algebra");
  heat->add_option("--metric", o.metric, "Metric spec (JSON)");
  heat->add_option("--flux", o.flux, "File with q(u)");
  heat->add_option("--ansatz", o.ansatz, "poly:d, exp, b joined by '+'");
  heat->add_option("--degree", o.degree, "Polynomial degree");
  heat->add_option("--table", o.table, "Flux table on E^n");

  auto* noe = app.add_subcommand("noether", "Noether point symmetries and integrals");
  noe->add_option("--metric", o.metric, "Metric spec (JSON)")->required();
  noe->add_option("--potential", o.potential, "File with V(x)")->required();
  noe->add_option("--degree", o.degree, "Polynomial degree");

  auto* wave = app.add_subcommand("wave", "Symmetries of c(x)^2 u_xx - u_yy = 0");
  wave->add_option("--c", o.c, "c(x)")->required();
  wave->add_option("--degree", o.degree, "Polynomial degree");
  wave->add_option("--extra", o.extra, "Extra KV/HV candidates (JSON)");

  auto* cnt = app.add_subcommand("counts", "Heat equation symmetry counts");
  cnt->add_option("--space", o.space, "flat:n, constcurv:n or 1d")->required();
  cnt->add_flag("--no-enumerate", o.no_enumerate, "Formula only");

  auto* cat = app.add_subcommand("catalog", "Collineation catalogs");
  cat->add_option("--euclidean", o.euclidean, "Dimension n");
  cat->add_option("--desitter", o.desitter, "Curvature K");

  for (auto* sub : {col, det, ver, heat, noe, wave, cnt, cat})
    sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "md"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (o.degree < 0) o.degree = default_degree();
    if (col->parsed()) return cmd_collineations(o, out);
    if (det->parsed()) return cmd_determining(o, out);
    if (ver->parsed()) return cmd_verify(o, out);
    if (heat->parsed()) return cmd_heat(o, out);
    if (noe->parsed()) return cmd_noether(o, out);
    if (wave->parsed()) return cmd_wave(o, out);
    if (cnt->parsed()) return cmd_counts(o, out);
    if (cat->parsed()) return cmd_catalog(o, out);
  } catch (const SpecError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ProblemError& e) {
    err << "error: problem: " << e.what() << "\n";
    return 2;
  } catch (const GeometryError& e) {
    err << "error: geometry: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace liesym::cli

#include "qproj/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "qproj/helix.hpp"

#ifndef QPROJ_MANIFEST_DIR
#define QPROJ_MANIFEST_DIR "manifests"
#endif

namespace qproj::cli {

namespace {

constexpr const char* kVersion = "1.0.0";

// ---------------------------------------------------------------------------
// manifest parsing

[[noreturn]] void bad(const std::string& msg) { throw UsageError(msg); }

void check_keys(const toml::table& t, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& [k, v] : t) {
    (void)v;
    if (!allowed.count(std::string(k.str()))) bad("unknown key '" + std::string(k.str()) + "' in " + where);
  }
}

const toml::table* table_at(const toml::table& root, const std::string& key) {
  const toml::node* n = root.get(key);
  if (!n) return nullptr;
  if (!n->is_table()) bad("'" + key + "' must be a table");
  return n->as_table();
}

std::string get_string(const toml::table& t, const std::string& key, const std::string& where) {
  const toml::node* n = t.get(key);
  if (!n || !n->is_string()) bad(where + "." + key + " must be a string");
  return std::string(*n->value<std::string_view>());
}

std::optional<std::string> opt_string(const toml::table& t, const std::string& key, const std::string& where) {
  if (!t.contains(key)) return std::nullopt;
  return get_string(t, key, where);
}

long long get_int(const toml::node& n, const std::string& what) {
  if (!n.is_integer()) bad(what + " must be an integer");
  return *n.value<long long>();
}

std::optional<int> opt_int(const toml::table& t, const std::string& key, const std::string& where) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  return static_cast<int>(get_int(*n, where + "." + key));
}

const toml::array& get_array(const toml::table& t, const std::string& key, const std::string& where) {
  const toml::node* n = t.get(key);
  if (!n || !n->is_array()) bad(where + "." + key + " must be an array");
  return *n->as_array();
}

std::vector<std::string> string_list(const toml::table& t, const std::string& key, const std::string& where) {
  std::vector<std::string> out;
  if (!t.contains(key)) return out;
  for (const auto& e : get_array(t, key, where)) {
    if (!e.is_string()) bad(where + "." + key + " must hold strings");
    out.emplace_back(*e.value<std::string_view>());
  }
  return out;
}

template <typename T>
std::vector<T> int_list(const toml::table& t, const std::string& key, const std::string& where) {
  std::vector<T> out;
  if (!t.contains(key)) return out;
  for (const auto& e : get_array(t, key, where)) out.push_back(static_cast<T>(get_int(e, where + "." + key)));
  return out;
}

StringMatrix string_matrix(const toml::table& t, const std::string& key, const std::string& where) {
  StringMatrix out;
  for (const auto& row : get_array(t, key, where)) {
    if (!row.is_array()) bad(where + "." + key + " must be an array of arrays");
    std::vector<std::string> r;
    for (const auto& e : *row.as_array()) {
      if (!e.is_string()) bad(where + "." + key + " entries must be strings");
      r.emplace_back(*e.value<std::string_view>());
    }
    out.push_back(std::move(r));
  }
  if (out.empty()) bad(where + "." + key + " is empty");
  for (const auto& r : out)
    if (r.size() != out[0].size()) bad(where + "." + key + " is ragged");
  return out;
}

std::optional<std::pair<int, int>> opt_pair(const toml::table& t, const std::string& key, const std::string& where) {
  if (!t.contains(key)) return std::nullopt;
  auto v = int_list<int>(t, key, where);
  if (v.size() != 2 || v[0] > v[1]) bad(where + "." + key + " must be [lo, hi] with lo <= hi");
  return std::make_pair(v[0], v[1]);
}

void check_polys(const Manifest& m) {
  fa::GeneratorSet g(m.generators, m.degrees);
  auto check = [&](const std::string& s, const std::string& where) {
    try {
      fa::parse_poly(g, s);
    } catch (const std::exception& e) {
      bad(where + ": cannot parse '" + s + "': " + e.what());
    }
  };
  for (const auto& r : m.relations) check(r, "algebra.relations");
  if (m.central) check(*m.central, "central.element");
  for (const auto& s : m.automorphism) check(s, "automorphism.images");
  for (const auto& s : m.pipeline.nu) check(s, "pipeline.nu");
  if (m.mf) {
    check(m.mf->f, "matrix_factorization.f");
    for (const auto* mat : {&m.mf->p, &m.mf->q})
      for (const auto& r : *mat)
        for (const auto& s : r) check(s, "matrix_factorization");
  }
  for (const auto& ms : m.modules)
    for (const auto& r : ms.matrix)
      for (const auto& s : r) check(s, "module." + ms.name);
}

}  // namespace

Manifest parse_manifest(std::string_view text, const std::string& fallback_name) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "manifest syntax error: " << e.description() << " at line " << e.source().begin.line;
    bad(os.str());
  }
  check_keys(root, "manifest",
             {"name", "title", "algebra", "central", "automorphism", "module", "matrix_factorization", "pipeline",
              "construction"});
  Manifest m;
  m.text = std::string(text);
  m.name = opt_string(root, "name", "manifest").value_or(fallback_name);
  m.title = opt_string(root, "title", "manifest").value_or("");

  const toml::table* a = table_at(root, "algebra");
  if (!a) bad("missing [algebra]");
  check_keys(*a, "[algebra]", {"generators", "degrees", "relations", "truncation"});
  m.generators = string_list(*a, "generators", "algebra");
  if (m.generators.empty()) bad("algebra.generators is empty");
  m.degrees = int_list<int>(*a, "degrees", "algebra");
  if (m.degrees.empty()) m.degrees.assign(m.generators.size(), 1);
  if (m.degrees.size() != m.generators.size()) bad("algebra.degrees must match algebra.generators");
  for (int d : m.degrees)
    if (d < 1) bad("algebra.degrees must be positive");
  m.relations = string_list(*a, "relations", "algebra");
  m.truncation = opt_int(*a, "truncation", "algebra").value_or(8);
  if (m.truncation < 1) bad("algebra.truncation must be positive");

  if (const toml::table* c = table_at(root, "central")) {
    check_keys(*c, "[central]", {"element", "quotient", "dual_series"});
    m.central = get_string(*c, "element", "central");
    if (const toml::node* q = c->get("quotient")) {
      if (!q->is_boolean()) bad("central.quotient must be a boolean");
      m.quotient = *q->value<bool>();
    }
    m.dual_series = int_list<long long>(*c, "dual_series", "central");
  }

  if (const toml::table* s = table_at(root, "automorphism")) {
    check_keys(*s, "[automorphism]", {"images"});
    m.automorphism = string_list(*s, "images", "automorphism");
    if (m.automorphism.size() != m.generators.size()) bad("automorphism.images must list one image per generator");
  }

  if (const toml::table* mods = table_at(root, "module")) {
    for (const auto& [k, v] : *mods) {
      const std::string name(k.str());
      if (!v.is_table()) bad("[module." + name + "] must be a table");
      const toml::table& t = *v.as_table();
      const std::string where = "module." + name;
      check_keys(t, "[" + where + "]", {"generator_degrees", "relation_degrees", "matrix"});
      ModuleSpec ms;
      ms.name = name;
      ms.generator_degrees = int_list<int>(t, "generator_degrees", where);
      ms.relation_degrees = int_list<int>(t, "relation_degrees", where);
      ms.matrix = string_matrix(t, "matrix", where);
      if (ms.matrix.size() != ms.generator_degrees.size() || ms.matrix[0].size() != ms.relation_degrees.size())
        bad(where + ".matrix must be generators x relations");
      m.modules.push_back(std::move(ms));
    }
  }

  if (const toml::table* f = table_at(root, "matrix_factorization")) {
    check_keys(*f, "[matrix_factorization]", {"f", "P", "Q", "mode"});
    Manifest::Mf mf;
    mf.f = get_string(*f, "f", "matrix_factorization");
    const std::string mode = opt_string(*f, "mode", "matrix_factorization").value_or("pair");
    if (mode != "pair" && mode != "squares") bad("matrix_factorization.mode must be 'pair' or 'squares'");
    mf.squares = mode == "squares";
    mf.p = string_matrix(*f, "P", "matrix_factorization");
    mf.q = string_matrix(*f, "Q", "matrix_factorization");
    m.mf = std::move(mf);
  }

  if (const toml::table* p = table_at(root, "pipeline")) {
    check_keys(*p, "[pipeline]",
               {"helix_window", "table_window", "hbound", "nu", "helix_pattern", "period", "exceptional",
                "section_truncation"});
    auto& pl = m.pipeline;
    pl.helix_window = opt_pair(*p, "helix_window", "pipeline");
    pl.table_window = opt_pair(*p, "table_window", "pipeline");
    pl.hbound = opt_int(*p, "hbound", "pipeline");
    pl.nu = string_list(*p, "nu", "pipeline");
    if (!pl.nu.empty() && pl.nu.size() != m.generators.size()) bad("pipeline.nu must list one image per generator");
    pl.helix_pattern = string_list(*p, "helix_pattern", "pipeline");
    pl.period = opt_int(*p, "period", "pipeline").value_or(0);
    pl.exceptional = string_list(*p, "exceptional", "pipeline");
    pl.section_truncation = opt_int(*p, "section_truncation", "pipeline");
  }

  if (const toml::table* c = table_at(root, "construction")) {
    check_keys(*c, "[construction]", {"kind", "r", "parts"});
    Manifest::Construction con;
    con.kind = get_string(*c, "kind", "construction");
    con.r = opt_int(*c, "r", "construction").value_or(0);
    con.parts = string_list(*c, "parts", "construction");
    if (con.kind == "qveronese") {
      if (con.r < 1) bad("construction.r must be positive");
    } else if (con.kind == "section") {
      if (con.parts.empty()) bad("construction.parts is empty");
    } else {
      bad("construction.kind must be 'qveronese' or 'section'");
    }
    m.construction = std::move(con);
  }

  check_polys(m);
  return m;
}

Manifest load_manifest(const std::string& where) {
  namespace fs = std::filesystem;
  fs::path p(where);
  if (!fs::exists(p)) p = fs::path(QPROJ_MANIFEST_DIR) / (where + ".toml");
  if (!fs::exists(p)) bad("no manifest at '" + where + "'");
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str(), p.stem().string());
}

std::pair<int, int> parse_window(std::string_view text) {
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) bad("window must be a..b");
  try {
    std::size_t used = 0;
    const std::string a(text.substr(0, dots)), b(text.substr(dots + 2));
    int lo = std::stoi(a, &used);
    if (used != a.size()) bad("window must be a..b");
    int hi = std::stoi(b, &used);
    if (used != b.size() || lo > hi) bad("window must be a..b with a <= b");
    return {lo, hi};
  } catch (const std::logic_error&) {
    bad("window must be a..b");
  }
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

// ---------------------------------------------------------------------------
// command runner

namespace {

using alg::AlgebraPtr;
using mod::GradedModule;

Json series_json(const std::vector<long long>& c) { return Json(c); }

Json closed_form_json(int start, const std::vector<long long>& c) {
  auto cf = alg::find_closed_form(start, c);
  return cf ? Json(cf->str()) : Json(nullptr);
}

std::vector<long long> to_ll(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

Json semisimple_json(const alg::SemisimpleReport& r) {
  Json j;
  j["dimension"] = r.dimension;
  j["radical_dim"] = r.radical_dim;
  j["center_dim"] = r.center_dim;
  j["semisimple"] = r.semisimple;
  j["blocks"] = r.blocks ? Json(*r.blocks) : Json(nullptr);
  return j;
}

Json rows_json(const std::vector<mod::ExtRow>& rows) {
  Json table = Json::object();
  Json uncertified = Json::array();
  for (const auto& r : rows) {
    if (!r.certified) {
      uncertified.push_back(r.degree);
      continue;
    }
    if (r.dim != 0) table[std::to_string(r.degree)] = r.dim;
  }
  Json j;
  j["table"] = table;
  j["uncertified_degrees"] = uncertified;
  return j;
}

Json betti_json(const std::vector<std::vector<mod::FreeGen>>& gens) {
  Json j = Json::object();
  for (std::size_t q = 0; q < gens.size(); ++q) {
    std::map<int, int> count;
    for (const auto& g : gens[q]) ++count[g.degree];
    Json row = Json::object();
    for (const auto& [d, c] : count) row[std::to_string(d)] = c;
    j[std::to_string(q)] = row;
  }
  return j;
}

Json iso_json(const mod::IsoVerdict& v) {
  Json j;
  j["isomorphic"] = v.isomorphic;
  j["conclusive"] = v.conclusive;
  j["reason"] = v.reason;
  j["hom_dim"] = v.hom_dim;
  j["hom_dim_back"] = v.hom_dim_back;
  j["witness"] = v.witness ? Json(*v.witness) : Json(nullptr);
  return j;
}

Json helix_json(const hx::HelixReport& r) {
  Json conds = Json::array();
  for (const auto& c : r.conditions) {
    Json j;
    j["name"] = c.name;
    j["pass"] = c.pass;
    j["certified"] = c.certified;
    j["detail"] = c.detail;
    conds.push_back(j);
  }
  Json j;
  j["conditions"] = conds;
  j["pass"] = r.pass();
  j["conclusive"] = r.conclusive();
  j["re1_form"] = r.re1_form;
  return j;
}

int check_code(bool pass, bool conclusive) {
  if (pass) return exit_ok;
  return conclusive ? exit_failed : exit_inconclusive;
}

struct Ref {
  std::string name;
  int shift = 0;
};

Ref parse_ref(const std::string& s) {
  Ref r;
  const auto open = s.find('(');
  if (open == std::string::npos) {
    r.name = s;
  } else {
    if (s.back() != ')') bad("module reference '" + s + "' must look like Name or Name(n)");
    r.name = s.substr(0, open);
    try {
      std::size_t used = 0;
      const std::string inner = s.substr(open + 1, s.size() - open - 2);
      r.shift = std::stoi(inner, &used);
      if (used != inner.size()) throw std::invalid_argument(inner);
    } catch (const std::logic_error&) {
      bad("module reference '" + s + "' has a bad shift");
    }
  }
  if (r.name.empty()) bad("empty module reference");
  return r;
}

std::string ref_label(const std::string& name, int shift) {
  return shift == 0 ? name : name + "(" + std::to_string(shift) + ")";
}

int key_value(const Options& o, const std::string& key, std::optional<int> fallback) {
  for (const auto& a : o.args)
    if (a.rfind(key + "=", 0) == 0) {
      try {
        return std::stoi(a.substr(key.size() + 1));
      } catch (const std::logic_error&) {
        bad("bad value in '" + a + "'");
      }
    }
  if (!fallback) bad("missing argument " + key + "=");
  return *fallback;
}

std::vector<std::string> positional(const Options& o) {
  std::vector<std::string> out;
  for (const auto& a : o.args)
    if (a.find('=') == std::string::npos) out.push_back(a);
  return out;
}

class Session {
 public:
  Session(const Manifest& m, const Options& o) : m_(m), o_(o) {
    D_ = o.truncation.value_or(m.truncation);
    if (D_ < 1) bad("truncation must be positive");
    gens_ = fa::GeneratorSet(m.generators, m.degrees);
  }

  int D() const { return D_; }
  const Manifest& manifest() const { return m_; }
  const fa::GeneratorSet& gens() const { return gens_; }
  fa::NcPoly poly(const std::string& s) const { return fa::parse_poly(gens_, s); }
  std::vector<fa::NcPoly> polys(const std::vector<std::string>& v) const {
    std::vector<fa::NcPoly> out;
    for (const auto& s : v) out.push_back(poly(s));
    return out;
  }

  const alg::PresentedAlgebra& base() {
    if (!base_) base_ = std::make_shared<alg::PresentedAlgebra>(gens_, polys(m_.relations), D_);
    return *base_;
  }
  AlgebraPtr base_table() {
    if (!base_table_) base_table_ = alg::tabulate(base());
    return base_table_;
  }

  const mod::MfModules& mf() {
    if (!m_.mf) bad("manifest has no [matrix_factorization]");
    if (!mf_) {
      const fa::NcPoly f = poly(m_.mf->f);
      const mod::PolyMatrix p = mod::parse_matrix(gens_, m_.mf->p), q = mod::parse_matrix(gens_, m_.mf->q);
      if (!m_.mf->squares) {
        mf_ = std::make_shared<mod::MfModules>(mod::mf_to_modules(base(), f, p, q));
      } else {
        mf_ = std::make_shared<mod::MfModules>(mod::mf_to_modules(base(), f, p, p));
        mod::MfModules other = mod::mf_to_modules(base(), f, q, q);
        mf_->py = other.px;
        mf_->y = mod::module_from_presentation(mf_->algebra, other.px, mf_->algebra->truncation());
      }
    }
    return *mf_;
  }

  // The algebra modules live over: S/(f) for a factorization or a quotient, else S.
  const alg::PresentedAlgebra& working() {
    if (!working_) {
      if (m_.mf) {
        working_ = mf().presented;
        working_table_ = mf().algebra;
      } else if (m_.central && m_.quotient) {
        working_ = std::make_shared<alg::PresentedAlgebra>(alg::quotient_by_central(base(), poly(*m_.central)));
      } else {
        working_ = std::make_shared<alg::PresentedAlgebra>(base());
        working_table_ = base_table();
      }
    }
    return *working_;
  }
  AlgebraPtr working_table() {
    working();
    if (!working_table_) working_table_ = alg::tabulate(*working_);
    return working_table_;
  }

  std::string working_name() {
    if (m_.mf || (m_.central && m_.quotient)) return "S/(" + (m_.mf ? m_.mf->f : *m_.central) + ")";
    return "S";
  }

  GradedModule module(const std::string& name) {
    auto it = modules_.find(name);
    if (it != modules_.end()) return it->second;
    GradedModule out;
    if (name == "A") {
      out = mod::regular_module(working_table());
    } else if (name == "k") {
      out = mod::degree_zero_module(working_table(), D_);
    } else if ((name == "X" || name == "Y") && m_.mf) {
      out = name == "X" ? mf().x : mf().y;
    } else {
      const ModuleSpec* spec = nullptr;
      for (const auto& s : m_.modules)
        if (s.name == name) spec = &s;
      if (!spec) bad("unknown module '" + name + "'");
      out = from_spec(*spec);
    }
    modules_[name] = out;
    return out;
  }
  GradedModule module(const Ref& r) { return mod::shift(module(r.name), r.shift); }

  hx::Handle handle(const std::string& s) {
    Ref r = parse_ref(s);
    return hx::object(module(r.name), r.shift, r.name);
  }

  std::vector<std::string> module_names() {
    std::vector<std::string> out = {"A"};
    if (m_.mf) {
      out.push_back("X");
      out.push_back("Y");
    }
    for (const auto& s : m_.modules) out.push_back(s.name);
    return out;
  }

  alg::GradedAutomorphism nu() {
    if (m_.pipeline.nu.empty()) return alg::GradedAutomorphism::identity(*working_table());
    return alg::induced_automorphism(working(), *working_table(), polys(m_.pipeline.nu));
  }

  hx::TailsContext& tails() {
    if (!tails_) tails_ = std::make_unique<hx::TailsContext>(working_table(), nu());
    return *tails_;
  }

  int hbound() const { return o_.hbound.value_or(m_.pipeline.hbound.value_or(5)); }
  std::pair<int, int> table_window() const {
    return o_.window.value_or(m_.pipeline.table_window.value_or(std::make_pair(-5, 5)));
  }
  std::pair<int, int> helix_window() const {
    if (o_.window) return *o_.window;
    if (!m_.pipeline.helix_window) bad("no helix window: pass --window or set pipeline.helix_window");
    return *m_.pipeline.helix_window;
  }
  int section_truncation() const { return m_.pipeline.section_truncation.value_or(std::max(1, D_ - 2)); }

  hx::SectionAlgebra section() {
    if (!m_.construction || m_.construction->kind != "section") bad("manifest has no section construction");
    if (!section_) {
      std::vector<GradedModule> parts;
      for (const auto& p : m_.construction->parts) parts.push_back(module(p));
      section_ = std::make_shared<hx::SectionAlgebra>(
          hx::section_algebra(parts, m_.construction->parts, section_truncation()));
    }
    return *section_;
  }

  // The algebra a [construction] produces, if any.
  std::optional<std::pair<std::string, AlgebraPtr>> construction() {
    if (!m_.construction) return std::nullopt;
    const auto& c = *m_.construction;
    if (c.kind == "qveronese")
      return std::make_pair(working_name() + "^[" + std::to_string(c.r) + "]",
                            alg::quasi_veronese(working_table(), c.r));
    std::string label = "B(";
    for (std::size_t i = 0; i < c.parts.size(); ++i) label += (i ? "," : "") + c.parts[i];
    return std::make_pair(label + ")", section().algebra);
  }

 private:
  GradedModule from_spec(const ModuleSpec& s) {
    const alg::PresentedAlgebra& w = working();
    mod::Presentation p;
    for (int d : s.generator_degrees) p.f0.push_back({d, 0});
    for (int d : s.relation_degrees) p.f1.push_back({d, 0});
    p.matrix.assign(p.f0.size(), std::vector<la::Vec>(p.f1.size()));
    for (std::size_t i = 0; i < p.f0.size(); ++i)
      for (std::size_t j = 0; j < p.f1.size(); ++j) {
        const int e = p.f1[j].degree - p.f0[i].degree;
        fa::NcPoly entry = poly(s.matrix[i][j]);
        auto hd = entry.homogeneous_degree();
        if (!entry.is_zero() && (!hd || *hd != e))
          bad("module." + s.name + ": entry (" + std::to_string(i) + "," + std::to_string(j) + ") must have degree " +
              std::to_string(e));
        p.matrix[i][j] = e < 0 ? la::Vec() : w.coordinates(entry, e);
      }
    return mod::module_from_presentation(working_table(), p, D_);
  }

  const Manifest& m_;
  const Options& o_;
  int D_;
  fa::GeneratorSet gens_;
  std::shared_ptr<alg::PresentedAlgebra> base_;
  AlgebraPtr base_table_;
  std::shared_ptr<mod::MfModules> mf_;
  std::shared_ptr<const alg::PresentedAlgebra> working_;
  AlgebraPtr working_table_;
  std::map<std::string, GradedModule> modules_;
  std::unique_ptr<hx::TailsContext> tails_;
  std::shared_ptr<hx::SectionAlgebra> section_;
};

struct Result {
  Json body = Json::object();
  int code = exit_ok;
  std::string verdict;
};

using Handler = std::function<Result(Session&, const Options&)>;

std::vector<std::string> need(const Options& o, std::size_t n, const std::string& usage) {
  auto p = positional(o);
  if (p.size() != n) bad("usage: " + usage);
  return p;
}

Json algebra_series(const alg::TabulatedAlgebra& a) {
  Json j;
  auto dims = to_ll(a.dims());
  j["series"] = series_json(dims);
  j["closed_form"] = closed_form_json(0, dims);
  return j;
}

Result cmd_hilbert(Session& s, const Options&) {
  Result r;
  AlgebraPtr a = s.working_table();
  r.body["algebra"] = s.working_name();
  Json series = algebra_series(*a);
  r.body["series"] = series["series"];
  r.body["closed_form"] = series["closed_form"];
  if (auto c = s.construction()) {
    Json cj = algebra_series(*c->second);
    cj["algebra"] = c->first;
    r.body["construction"] = cj;
  }
  Json mods = Json::object();
  for (const auto& name : s.module_names()) {
    if (name == "A") continue;
    GradedModule m = s.module(name);
    auto dims = m.dims(m.lo(), m.hi());
    Json j;
    j["start"] = m.lo();
    j["series"] = dims;
    j["closed_form"] = closed_form_json(m.lo(), dims);
    mods[name] = j;
  }
  if (!mods.empty()) r.body["modules"] = mods;
  r.verdict = series["closed_form"].is_null() ? "series computed" : "series computed, closed form matched";
  return r;
}

Result cmd_gb(Session& s, const Options&) {
  Result r;
  const alg::PresentedAlgebra& w = s.working();
  const auto& g = w.groebner();
  Json elems = Json::array();
  for (const auto& e : g.elements()) elems.push_back(e.str(s.gens()));
  r.body["basis"] = elems;
  r.body["basis_size"] = g.elements().size();
  std::vector<long long> counts;
  for (int d = 0; d <= s.D(); ++d) counts.push_back(static_cast<long long>(g.normal_words(d).size()));
  r.body["normal_word_counts"] = counts;
  gb::Ideal ideal(s.gens(), w.relations());
  const int top = std::min(s.D(), 6);
  bool agree = true;
  std::vector<long long> brute;
  for (int d = 0; d <= top; ++d) {
    brute.push_back(static_cast<long long>(gb::brute_force_quotient_dim(ideal, d)));
    agree = agree && brute.back() == counts[d];
  }
  r.body["brute_force_ranks"] = brute;
  r.body["brute_force_agrees"] = agree;
  r.code = agree ? exit_ok : exit_failed;
  r.verdict = agree ? "normal words match brute-force ranks" : "normal words disagree with brute-force ranks";
  return r;
}

Result cmd_veronese(Session& s, const Options& o) {
  Result r;
  const int k = key_value(o, "r", std::nullopt);
  if (k < 1) bad("r must be positive");
  AlgebraPtr v = alg::veronese(s.working_table(), k);
  r.body = algebra_series(*v);
  r.body["r"] = k;
  r.body["associative"] = alg::check_associative(*v);
  r.verdict = "Veronese computed";
  return r;
}

Result cmd_qveronese(Session& s, const Options& o) {
  Result r;
  const int k = key_value(o, "r", std::nullopt);
  if (k < 1) bad("r must be positive");
  AlgebraPtr a = s.working_table();
  AlgebraPtr q = alg::quasi_veronese(a, k);
  r.body = algebra_series(*q);
  r.body["r"] = k;
  Json blocks = Json::object();
  for (int i = -1; i <= q->truncation(); ++i) blocks[std::to_string(i)] = alg::qveronese_block_dims(*a, k, i);
  r.body["block_dims"] = blocks;
  r.body["degree_zero"] = semisimple_json(alg::semisimple_type(alg::degree_zero(*q)));
  r.body["associative"] = alg::check_associative(*q);
  r.verdict = "quasi-Veronese computed";
  return r;
}

Result cmd_beilinson(Session& s, const Options& o) {
  Result r;
  const int l = key_value(o, "l", std::nullopt);
  if (l < 1) bad("l must be positive");
  alg::FiniteDimAlgebra b = alg::beilinson(s.working_table(), l);
  r.body["l"] = l;
  r.body["structure"] = semisimple_json(alg::semisimple_type(b));
  r.body["associative"] = b.check_associative();
  r.verdict = "Beilinson algebra computed";
  return r;
}

Result cmd_twist(Session& s, const Options&) {
  Result r;
  const Manifest& m = s.manifest();
  if (m.automorphism.empty()) bad("manifest has no [automorphism]");
  const auto images = s.polys(m.automorphism);
  const alg::PresentedAlgebra& w = s.working();
  alg::AutomorphismCheck chk = alg::check_automorphism(w, images, s.D());
  r.body["automorphism"] = {{"degree_preserving", chk.degree_preserving},
                            {"relations_preserved", chk.relations_preserved},
                            {"invertible", chk.invertible},
                            {"detail", chk.detail}};
  if (!chk.ok()) {
    r.code = exit_failed;
    r.verdict = "not a graded automorphism";
    return r;
  }
  AlgebraPtr t = s.working_table();
  AlgebraPtr tw = alg::twist(t, alg::induced_automorphism(w, *t, images));
  alg::PresentedAlgebra tp = alg::twist_presented(w, images);
  Json rels = Json::array();
  for (const auto& p : tp.relations()) rels.push_back(p.str(tp.gens()));
  r.body["twisted_relations"] = rels;
  const auto h = to_ll(t->dims());
  const auto ht = to_ll(tw->dims());
  const auto hp = to_ll(alg::tabulate(tp)->dims());
  r.body["series"] = h;
  r.body["twisted_series"] = ht;
  r.body["presented_twist_series"] = hp;
  r.body["associative"] = alg::check_associative(*tw);
  const bool same = h == ht && h == hp;
  r.body["series_preserved"] = same;
  r.code = same ? exit_ok : exit_failed;
  r.verdict = same ? "twist preserves the Hilbert series" : "twist changed the Hilbert series";
  return r;
}

Result cmd_koszul(Session& s, const Options&) {
  Result r;
  const alg::PresentedAlgebra& w = s.working();
  if (!w.is_quadratic()) bad("koszul: the algebra is not quadratic");
  alg::PresentedAlgebra dual = alg::koszul_dual(w);
  Json rels = Json::array();
  for (const auto& p : dual.relations()) rels.push_back(p.str(dual.gens()));
  r.body["dual_generators"] = dual.gens().names();
  r.body["dual_relations"] = rels;
  auto h = to_ll(s.working_table()->dims());
  auto hd = to_ll(alg::tabulate(dual)->dims());
  r.body["series"] = h;
  r.body["dual_series"] = hd;
  bool identity = true;
  for (int d = 1; d <= s.D(); ++d) {
    long long acc = 0;
    for (int i = 0; i <= d; ++i) acc += ((d - i) % 2 ? -1 : 1) * h[i] * hd[d - i];
    identity = identity && acc == 0;
  }
  r.body["koszul_identity"] = identity;
  r.code = identity ? exit_ok : exit_failed;
  r.verdict = identity ? "H_A(t) H_A!(-t) = 1 up to the truncation" : "H_A(t) H_A!(-t) != 1";
  return r;
}

Result cmd_central(Session& s, const Options&) {
  Result r;
  const Manifest& m = s.manifest();
  AlgebraPtr b = s.base_table();
  r.body["central_degree2_dim"] = alg::find_central_degree2(*b).size();
  if (m.central) {
    fa::NcPoly f = s.poly(*m.central);
    auto e = f.homogeneous_degree();
    if (!e) bad("central.element must be homogeneous");
    la::Vec v = s.base().coordinates(f, *e);
    const bool central = alg::is_central(*b, *e, v);
    const bool regular = central && alg::is_regular_central(*b, *e, v);
    r.body["element"] = {{"polynomial", *m.central}, {"degree", *e}, {"central", central}, {"regular", regular}};
    if (!regular) {
      r.code = exit_failed;
      r.verdict = central ? "element is central but not regular" : "element is not central";
      return r;
    }
  }
  const alg::PresentedAlgebra& w = s.working();
  if (w.is_quadratic()) {
    alg::PresentedAlgebra dual = alg::koszul_dual(w);
    AlgebraPtr db = alg::tabulate(dual);
    auto z = alg::choose_regular_central(*db, m.dual_series);
    Json dj;
    dj["algebra"] = s.working_name() + "^!";
    dj["central_degree2_dim"] = alg::find_central_degree2(*db).size();
    if (z) {
      dj["z"] = dual.element(2, *z).str(dual.gens());
      dj["quotient_series"] = alg::quotient_series(*db, 2, *z);
    } else {
      dj["z"] = nullptr;
    }
    r.body["koszul_dual"] = dj;
  }
  r.verdict = "central elements computed";
  return r;
}

Result cmd_cofa(Session& s, const Options&) {
  Result r;
  const alg::PresentedAlgebra& w = s.working();
  if (!w.is_quadratic()) bad("cofa: the algebra is not quadratic");
  alg::PresentedAlgebra dual = alg::koszul_dual(w);
  AlgebraPtr db = alg::tabulate(dual);
  auto z = alg::choose_regular_central(*db, s.manifest().dual_series);
  if (!z) {
    r.code = exit_inconclusive;
    r.verdict = "no regular central element of degree 2 found in the Koszul dual";
    return r;
  }
  alg::CofA c = alg::c_of_a(*db, *z);
  alg::SemisimpleReport rep = alg::semisimple_type(c.algebra);
  r.body["z"] = dual.element(2, *z).str(dual.gens());
  r.body["level"] = c.level;
  r.body["ranks"] = c.ranks;
  r.body["structure"] = semisimple_json(rep);
  r.body["associative"] = c.algebra.check_associative();
  r.verdict = rep.semisimple ? "C(A) semisimple" : "C(A) not semisimple";
  return r;
}

Result cmd_mf_verify(Session& s, const Options&) {
  Result r;
  const Manifest& m = s.manifest();
  if (!m.mf) bad("manifest has no [matrix_factorization]");
  const fa::NcPoly f = s.poly(m.mf->f);
  const mod::PolyMatrix p = mod::parse_matrix(s.gens(), m.mf->p), q = mod::parse_matrix(s.gens(), m.mf->q);
  const bool ok = m.mf->squares ? mod::verify_mf(s.base(), f, p, p) && mod::verify_mf(s.base(), f, q, q)
                                : mod::verify_mf(s.base(), f, p, q);
  r.body["mode"] = m.mf->squares ? "squares" : "pair";
  r.body["f"] = m.mf->f;
  r.body["P"] = m.mf->p;
  r.body["Q"] = m.mf->q;
  r.body["valid"] = ok;
  r.code = ok ? exit_ok : exit_failed;
  if (m.mf->squares)
    r.verdict = ok ? "P^2 = Q^2 = f E" : "P^2 = Q^2 = f E fails";
  else
    r.verdict = ok ? "PQ = QP = f E" : "PQ = QP = f E fails";
  return r;
}

Json module_series(const GradedModule& m) {
  Json j;
  j["start"] = m.lo();
  j["series"] = m.dims(m.lo(), m.hi());
  return j;
}

Result cmd_resolve(Session& s, const Options& o) {
  Result r;
  auto p = need(o, 1, "resolve <module>");
  GradedModule m = s.module(parse_ref(p[0]));
  mod::Resolution res = mod::resolve(m, s.hbound());
  r.body["module"] = p[0];
  r.body["hilbert"] = module_series(m);
  r.body["betti"] = betti_json(res.gens);
  r.body["length"] = res.length();
  r.body["terminated"] = res.terminated;
  const bool euler = mod::euler_identity_holds(res);
  r.body["euler_identity"] = euler;
  r.code = euler ? exit_ok : exit_failed;
  r.verdict = res.terminated ? "finite resolution within the window" : "resolution computed to the homological bound";
  return r;
}

Result cmd_hom(Session& s, const Options& o) {
  Result r;
  auto p = need(o, 2, "hom <M> <N>");
  auto [lo, hi] = s.table_window();
  auto rows = mod::hom_table(s.module(parse_ref(p[0])), s.module(parse_ref(p[1])), lo, hi);
  r.body = rows_json(rows);
  r.body["pair"] = {p[0], p[1]};
  r.body["window"] = {lo, hi};
  r.verdict = "uHom table computed";
  return r;
}

Result cmd_ext(Session& s, const Options& o) {
  Result r;
  auto p = need(o, 2, "ext <M> <N> [q=<n>]");
  const int q = key_value(o, "q", 1);
  if (q < 0) bad("q must be non-negative");
  auto [lo, hi] = s.table_window();
  mod::Resolution res = mod::resolve(s.module(parse_ref(p[0])), q + 1);
  auto rows = mod::ext_table(res, s.module(parse_ref(p[1])), q, lo, hi);
  r.body = rows_json(rows);
  r.body["pair"] = {p[0], p[1]};
  r.body["q"] = q;
  r.body["window"] = {lo, hi};
  r.verdict = "uExt table computed";
  return r;
}

Result cmd_mcm(Session& s, const Options& o) {
  Result r;
  auto p = need(o, 1, "mcm <module>");
  mod::McmVerdict v = mod::mcm_check(s.module(parse_ref(p[0])), std::min(s.hbound(), 3));
  Json off = Json::object();
  for (const auto& [q, rows] : v.nonzero) off[std::to_string(q)] = rows_json(rows)["table"];
  r.body["module"] = p[0];
  r.body["mcm"] = v.mcm;
  r.body["nonzero_ext"] = off;
  r.code = v.mcm ? exit_ok : exit_failed;
  r.verdict = v.mcm ? "maximal Cohen-Macaulay in the window" : "not maximal Cohen-Macaulay";
  return r;
}

Result cmd_iso(Session& s, const Options& o) {
  Result r;
  auto p = need(o, 2, "iso <M> <N>");
  mod::IsoVerdict v = mod::is_isomorphic(s.module(parse_ref(p[0])), s.module(parse_ref(p[1])));
  r.body = iso_json(v);
  r.body["pair"] = {p[0], p[1]};
  r.code = check_code(v.isomorphic, v.conclusive);
  r.verdict = !v.conclusive ? "inconclusive" : v.isomorphic ? "isomorphic" : "not isomorphic";
  return r;
}

// Names of known modules (with shifts in [-3, 3]) isomorphic to m.
Json identify(Session& s, const GradedModule& m) {
  Json out = Json::array();
  if (m.is_zero_in_window()) {
    out.push_back("0");
    return out;
  }
  for (const auto& name : s.module_names())
    for (int k = -3; k <= 3; ++k) {
      GradedModule c = mod::shift(s.module(name), k);
      mod::IsoVerdict v = mod::is_isomorphic(m, c);
      if (v.isomorphic) out.push_back(ref_label(name, k));
    }
  return out;
}

Result cmd_mutate(Session& s, const Options& o, bool left) {
  Result r;
  auto p = need(o, 2, left ? "mutate-left <E> <F>" : "mutate-right <F> <E>");
  hx::TailsContext& ctx = s.tails();
  hx::Handle first = s.handle(p[0]), second = s.handle(p[1]);
  hx::Mutation mu = left ? hx::left_mutation(ctx, first, second) : hx::right_mutation(ctx, first, second);
  r.body["pair"] = {p[0], p[1]};
  r.body["hom_dim"] = mu.hom_dim;
  r.body["ok"] = mu.ok;
  r.body["reason"] = mu.reason;
  if (!mu.ok) {
    r.code = exit_failed;
    r.verdict = "mutation not defined: " + mu.reason;
    return r;
  }
  r.body["hilbert"] = module_series(mu.module);
  r.body["identified_as"] = identify(s, mu.module);
  hx::Handle h = hx::object(mu.module, 0, left ? "L" : "R");
  hx::Mutation back = left ? hx::right_mutation(ctx, first, h) : hx::left_mutation(ctx, first, h);
  bool round = false;
  if (back.ok) {
    if (mu.module.is_zero_in_window())
      round = back.module.is_zero_in_window() == second.module().is_zero_in_window();
    else
      round = mod::is_isomorphic(back.module, second.module()).isomorphic;
  }
  r.body["round_trip"] = round;
  r.code = round || mu.module.is_zero_in_window() ? exit_ok : exit_failed;
  r.verdict = std::string(left ? "left" : "right") + " mutation computed";
  return r;
}

Result cmd_exceptional(Session& s, const Options& o) {
  Result r;
  auto refs = positional(o);
  if (refs.empty()) refs = s.manifest().pipeline.exceptional;
  if (refs.empty()) bad("usage: exceptional <E1> <E2> ... (or set pipeline.exceptional)");
  std::vector<hx::Handle> seq;
  for (const auto& x : refs) seq.push_back(s.handle(x));
  hx::HelixReport rep = hx::check_relative_exceptional(s.tails(), seq);
  r.body = helix_json(rep);
  r.body["sequence"] = refs;
  r.code = check_code(rep.pass(), rep.conclusive());
  r.verdict = rep.pass() ? "relative exceptional sequence" : "not a relative exceptional sequence";
  return r;
}

Result cmd_helix(Session& s, const Options& o) {
  Result r;
  const auto& pl = s.manifest().pipeline;
  if (pl.helix_pattern.empty() || pl.period < 1) bad("manifest has no pipeline.helix_pattern and pipeline.period");
  auto args = positional(o);
  const bool block = !args.empty() && args[0] == "blocked";
  if (args.size() > (block ? 1u : 0u)) bad("usage: helix [blocked]");
  std::vector<hx::Handle> pattern;
  for (const auto& x : pl.helix_pattern) pattern.push_back(s.handle(x));
  const int n = static_cast<int>(pattern.size());
  auto shifted = [](hx::Handle h, int k) {
    for (auto& part : h.parts) part.shift += k;
    return h;
  };
  hx::HelixRule rule;
  int period = pl.period;
  if (block) {
    if (period % n != 0) bad("blocked helix needs the period to be a multiple of the pattern length");
    period /= n;
    rule = [=](int i) {
      std::vector<hx::Handle> pieces;
      for (const auto& h : pattern) pieces.push_back(shifted(h, i));
      return hx::blocked(pieces);
    };
  } else {
    rule = [=](int i) {
      const int q = ((i % n) + n) % n;
      return shifted(pattern[q], (i - q) / n);
    };
  }
  auto [lo, hi] = s.helix_window();
  if (block) {
    // the window indexes the unblocked sequence
    auto floor_div = [n](int a) { return a >= 0 ? a / n : -((-a + n - 1) / n); };
    lo = floor_div(lo);
    hi = floor_div(hi);
  }
  hx::HelixReport rep = hx::check_geometric_helix(s.tails(), rule, period, lo, hi);
  r.body = helix_json(rep);
  r.body["pattern"] = pl.helix_pattern;
  r.body["blocked"] = block;
  r.body["period"] = period;
  r.body["window"] = {lo, hi};
  r.code = check_code(rep.pass(), rep.conclusive());
  r.verdict = rep.pass() ? "geometric helix on the window" : "helix conditions fail";
  return r;
}

Result cmd_classify(Session& s, const Options& o) {
  Result r;
  auto p = positional(o);
  if (p.empty()) p = {"X", "Y"};
  if (p.size() != 2) bad("usage: classify-standard [X Y]");
  hx::StandardnessVerdict v = hx::classify_standard(s.module(parse_ref(p[0])), s.module(parse_ref(p[1])));
  r.body["pair"] = p;
  r.body["classification"] = hx::to_string(v.classification);
  r.body["cross_validated"] = v.cross_validated;
  r.body["omega_x_vs_y"] = iso_json(v.omega_x_vs_y);
  r.body["omega_x_vs_x"] = iso_json(v.omega_x_vs_x);
  r.body["omega_y_vs_x"] = iso_json(v.omega_y_vs_x);
  r.body["omega_y_vs_y"] = iso_json(v.omega_y_vs_y);
  r.code = v.classification == hx::Standardness::inconclusive ? exit_inconclusive : exit_ok;
  r.verdict = hx::to_string(v.classification);
  return r;
}

Result cmd_section(Session& s, const Options&) {
  Result r;
  hx::SectionAlgebra b = s.section();
  r.body = algebra_series(*b.algebra);
  r.body["parts"] = s.manifest().construction->parts;
  r.body["block_dims"] = b.block_dims;
  r.body["section_truncation"] = b.algebra->truncation();
  r.body["associative"] = alg::check_associative(*b.algebra);
  r.body["degree_zero"] = semisimple_json(alg::semisimple_type(alg::degree_zero(*b.algebra)));
  r.verdict = "section algebra computed";
  return r;
}

Json side_json(const hx::SideEvidence& e) {
  Json j;
  j["ok"] = e.ok;
  j["terminated"] = e.terminated;
  j["length"] = e.length;
  j["betti"] = betti_json(e.betti);
  Json ext = Json::object();
  for (std::size_t q = 0; q < e.ext.size(); ++q) ext[std::to_string(q)] = rows_json(e.ext[q]);
  j["ext"] = ext;
  j["d"] = e.d ? Json(*e.d) : Json(nullptr);
  j["ell"] = e.ell ? Json(*e.ell) : Json(nullptr);
  j["reason"] = e.reason;
  return j;
}

Result cmd_regularity(Session& s, const Options&) {
  Result r;
  std::string name = s.working_name();
  AlgebraPtr b = s.working_table();
  if (auto c = s.construction()) std::tie(name, b) = *c;
  hx::RegularityEvidence e = hx::regularity_evidence(b, s.hbound());
  r.body["algebra"] = name;
  r.body["series"] = to_ll(b->dims());
  r.body["base"] = e.base;
  r.body["right"] = side_json(e.right);
  r.body["left"] = side_json(e.left);
  r.body["ok"] = e.ok;
  r.body["conclusive"] = e.conclusive;
  r.body["d"] = e.candidate ? Json(e.candidate->first) : Json(nullptr);
  r.body["ell"] = e.candidate ? Json(e.candidate->second) : Json(nullptr);
  r.body["note"] = e.note;
  r.code = check_code(e.ok, e.conclusive);
  r.verdict = e.verdict;
  return r;
}

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h = {
      {"hilbert", cmd_hilbert},
      {"gb", cmd_gb},
      {"veronese", cmd_veronese},
      {"qveronese", cmd_qveronese},
      {"beilinson", cmd_beilinson},
      {"twist", cmd_twist},
      {"koszul", cmd_koszul},
      {"central", cmd_central},
      {"cofa", cmd_cofa},
      {"mf-verify", cmd_mf_verify},
      {"resolve", cmd_resolve},
      {"hom", cmd_hom},
      {"ext", cmd_ext},
      {"mcm", cmd_mcm},
      {"iso", cmd_iso},
      {"mutate-left", [](Session& s, const Options& o) { return cmd_mutate(s, o, true); }},
      {"mutate-right", [](Session& s, const Options& o) { return cmd_mutate(s, o, false); }},
      {"exceptional", cmd_exceptional},
      {"helix", cmd_helix},
      {"classify-standard", cmd_classify},
      {"section-algebra", cmd_section},
      {"regularity", cmd_regularity},
  };
  return h;
}

void emit_table(std::ostringstream& os, const Json& j, int indent) {
  const std::string pad(indent, ' ');
  auto inline_value = [](const Json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
      bool flat = std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_primitive(); });
      if (flat) {
        std::string s;
        for (const auto& e : v) s += (s.empty() ? "" : " ") + (e.is_string() ? e.get<std::string>() : e.dump());
        return "[" + s + "]";
      }
    }
    return v.dump();
  };
  std::size_t width = 0;
  for (auto it = j.begin(); it != j.end(); ++it) width = std::max(width, it.key().size());
  for (auto it = j.begin(); it != j.end(); ++it) {
    const Json& v = it.value();
    const bool nested = v.is_object() && !v.empty();
    const bool rows = v.is_array() && !v.empty() && v[0].is_object();
    os << pad << std::left << std::setw(static_cast<int>(width)) << it.key();
    if (nested) {
      os << "\n";
      emit_table(os, v, indent + 2);
    } else if (rows) {
      os << "\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        os << pad << "  - " << i << "\n";
        emit_table(os, v[i], indent + 4);
      }
    } else {
      os << "  " << inline_value(v) << "\n";
    }
  }
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [k, v] : handlers()) out.push_back(k);
    return out;
  }();
  return names;
}

Outcome run(const std::string& command, const Manifest& m, const Options& o) {
  Outcome out;
  Json& rep = out.report;
  rep["tool"] = "qproj";
  rep["version"] = kVersion;
  rep["command"] = command;
  rep["arguments"] = o.args;
  rep["manifest"] = {{"name", m.name}, {"digest", fnv1a_hex(m.text)}};
  const int D = o.truncation.value_or(m.truncation);
  Json bounds;
  bounds["truncation"] = D;
  bounds["hbound"] = o.hbound.value_or(m.pipeline.hbound.value_or(5));
  bounds["field"] = o.field;
  bounds["window"] = o.window ? Json({o.window->first, o.window->second}) : Json(nullptr);
  rep["bounds"] = bounds;
  rep["certified_up_to_degree"] = D;
  auto fail = [&](int code, const std::string& msg) {
    out.exit_code = code;
    rep["error"] = msg;
    rep["result"] = Json::object();
    rep["verdict"] = code == exit_inconclusive ? "inconclusive" : "error";
    rep["exit_code"] = code;
  };
  auto it = handlers().find(command);
  if (it == handlers().end()) {
    fail(exit_usage, "unknown command '" + command + "'");
    return out;
  }
  try {
    la::set_field(la::Field::parse(o.field));
  } catch (const std::exception& e) {
    fail(exit_usage, std::string("bad field: ") + e.what());
    return out;
  }
  try {
    Session s(m, o);
    Result r = it->second(s, o);
    rep["result"] = r.body;
    rep["verdict"] = r.verdict;
    out.exit_code = r.code;
    rep["exit_code"] = r.code;
  } catch (const UsageError& e) {
    fail(exit_usage, e.what());
  } catch (const mod::WindowError& e) {
    fail(exit_inconclusive, std::string("window too small: ") + e.what());
  } catch (const gb::TruncationError& e) {
    fail(exit_inconclusive, std::string("truncation too small: ") + e.what());
  } catch (const alg::StabilizationError& e) {
    fail(exit_inconclusive, std::string("no stabilization: ") + e.what());
  } catch (const std::exception& e) {
    fail(exit_usage, e.what());
  }
  la::set_field(la::Field{});
  return out;
}

std::string emit(const Json& report, const std::string& format) {
  if (format == "json") return report.dump(2) + "\n";
  if (format != "table") throw UsageError("format must be json or table");
  std::ostringstream os;
  emit_table(os, report, 0);
  return os.str();
}

}  // namespace qproj::cli

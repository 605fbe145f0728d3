#include "qproj/helix.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qproj::hx {

using la::Mat;
using mod::FreeGen;
using mod::ModuleMap;

namespace {

std::string shifted_label(const std::string& base, int s) {
  if (s == 0) return base;
  return base + "(" + std::to_string(s) + ")";
}

bool is_identity(const alg::GradedAutomorphism& nu) {
  for (const auto& m : nu.maps)
    if (!(m == Mat::identity(m.rows()))) return false;
  return true;
}

std::pair<const void*, int> key(const GradedModule& m) { return {m.data().get(), m.shift()}; }

}  // namespace

std::string Handle::label() const {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : "+") + shifted_label(p.label, p.shift);
  return out;
}

GradedModule Handle::module() const {
  if (parts.size() == 1) return mod::shift(parts[0].base, parts[0].shift);
  std::vector<GradedModule> ms;
  for (const auto& p : parts) ms.push_back(mod::shift(p.base, p.shift));
  return mod::direct_sum(ms);
}

Handle object(const GradedModule& base, int shift, const std::string& label) { return Handle{{Part{base, shift, label}}}; }

Handle blocked(const std::vector<Handle>& pieces) {
  Handle h;
  for (const auto& p : pieces) h.parts.insert(h.parts.end(), p.parts.begin(), p.parts.end());
  return h;
}

// ---------------------------------------------------------------------------
// tails Ext

TailsContext::TailsContext(AlgebraPtr a, alg::GradedAutomorphism nu) : a_(std::move(a)), nu_(std::move(nu)) {}

const Resolution& TailsContext::resolution(const GradedModule& base) const {
  auto& slot = res_[key(base)];
  if (!slot) slot = std::make_unique<Resolution>(mod::resolve(base, 3));
  return *slot;
}

bool TailsContext::is_mcm(const GradedModule& base) const {
  auto it = mcm_.find(key(base));
  if (it != mcm_.end()) return it->second;
  bool v = mod::mcm_check(base).mcm;
  mcm_.emplace(key(base), v);
  return v;
}

GradedModule TailsContext::nu_twist(const GradedModule& base) const {
  if (is_identity(nu_)) return base;
  auto it = twisted_.find(key(base));
  if (it != twisted_.end()) return it->second;
  GradedModule t = mod::twist_by_auto(base, nu_);
  twisted_.emplace(key(base), t);
  return t;
}

ExtRow TailsContext::graded_ext(const GradedModule& m, const GradedModule& n, int q, int i) const {
  return mod::ext_dim(resolution(m), n, q, i);
}

ExtValue TailsContext::ext(const Part& m, const Part& n, int q) const {
  if (q < 0) throw std::invalid_argument("tails_ext: negative q");
  if (q >= 3) return {0, true};
  if (!is_mcm(m.base) || !is_mcm(n.base)) throw std::invalid_argument("tails_ext: base module is not MCM");
  ExtRow row = q == 2 ? graded_ext(n.base, nu_twist(m.base), 0, m.shift - n.shift - 2)
                      : graded_ext(m.base, n.base, q, n.shift - m.shift);
  return {row.dim, row.certified};
}

ExtValue TailsContext::ext(const Handle& m, const Handle& n, int q) const {
  ExtValue total;
  for (const auto& a : m.parts)
    for (const auto& b : n.parts) {
      ExtValue v = ext(a, b, q);
      total.dim += v.dim;
      total.certified = total.certified && v.certified;
    }
  return total;
}

ExtValue tails_ext(const TailsContext& ctx, const Handle& m, const Handle& n, int q) { return ctx.ext(m, n, q); }

// ---------------------------------------------------------------------------
// Hom calculus

HomCalculus::HomCalculus(std::vector<GradedModule> objects) : objs_(std::move(objects)) {
  for (const auto& o : objs_) res_.push_back(std::make_unique<Resolution>(mod::resolve(o, 1)));
}

const mod::HomSpace& HomCalculus::hom(std::size_t q, std::size_t p, int i) const {
  auto k = std::make_tuple(q, p, i);
  auto it = homs_.find(k);
  if (it != homs_.end()) return it->second;
  return homs_.emplace(k, mod::hom_space(*res_[q], objs_[p], i)).first->second;
}

const HomCalculus::Coords& HomCalculus::coords(std::size_t q, std::size_t p, int i) const {
  auto k = std::make_tuple(q, p, i);
  auto it = coords_.find(k);
  if (it != coords_.end()) return it->second;
  const auto& h = hom(q, p, i);
  std::vector<Vec> cols;
  for (const auto& b : h.basis) {
    Vec v;
    for (const auto& part : b) v.insert(v.end(), part.begin(), part.end());
    cols.push_back(std::move(v));
  }
  Coords c;
  if (!cols.empty()) {
    Mat m = Mat::from_columns(cols, cols[0].size());
    c.rows = la::rref(m.transpose()).pivots;
    Mat sub(c.rows.size(), cols.size());
    for (std::size_t r = 0; r < c.rows.size(); ++r)
      for (std::size_t j = 0; j < cols.size(); ++j) sub(r, j) = m(c.rows[r], j);
    auto inv = la::inverse(sub);
    if (!inv) throw std::logic_error("HomCalculus: dependent Hom basis");
    c.inverse = *inv;
  }
  return coords_.emplace(k, std::move(c)).first->second;
}

Vec HomCalculus::coordinates(std::size_t q, std::size_t p, int i, const std::vector<Vec>& images) const {
  const Coords& c = coords(q, p, i);
  Vec flat;
  for (const auto& part : images) flat.insert(flat.end(), part.begin(), part.end());
  Vec sel(c.rows.size());
  for (std::size_t r = 0; r < c.rows.size(); ++r) sel[r] = flat.at(c.rows[r]);
  return c.rows.empty() ? Vec{} : c.inverse.apply(sel);
}

const Mat& HomCalculus::lift(std::size_t q, int d) const {
  auto k = std::make_pair(q, d);
  auto it = lifts_.find(k);
  if (it != lifts_.end()) return it->second;
  Mat cd = res_[q]->covers.at(0).at(d);
  auto piv = la::rref(cd).pivots;
  if (piv.size() != cd.rows()) throw std::logic_error("HomCalculus: cover not surjective");
  Mat sub(cd.rows(), piv.size());
  for (std::size_t r = 0; r < cd.rows(); ++r)
    for (std::size_t j = 0; j < piv.size(); ++j) sub(r, j) = cd(r, piv[j]);
  auto inv = la::inverse(sub);
  if (!inv) throw std::logic_error("HomCalculus: singular pivot block");
  Mat l(cd.cols(), cd.rows());
  for (std::size_t j = 0; j < piv.size(); ++j)
    for (std::size_t r = 0; r < cd.rows(); ++r) l(piv[j], r) = (*inv)(j, r);
  return lifts_.emplace(k, std::move(l)).first->second;
}

std::vector<Vec> HomCalculus::compose(std::size_t p, std::size_t q, std::size_t r, int i, const std::vector<Vec>& alpha,
                                      int j, const std::vector<Vec>& beta) const {
  const AlgebraPtr& a = objs_[p].algebra();
  const auto& gq = res_[q]->gens[0];
  const auto& gr = res_[r]->gens[0];
  std::vector<Vec> out;
  for (std::size_t k = 0; k < gr.size(); ++k) {
    const int d = gr[k].degree + j;
    Vec img = la::zeros(objs_[p].dim(d + i));
    if (!beta[k].empty() && !la::is_zero(beta[k])) {
      Vec x = lift(q, d).apply(beta[k]);
      auto parts = mod::split_free_element(a, gq, d, x);
      for (std::size_t l = 0; l < gq.size(); ++l) {
        if (la::is_zero(parts[l]) || alpha[l].empty()) continue;
        la::axpy(img, 1, objs_[p].act(gq[l].degree + i, alpha[l], d - gq[l].degree, parts[l]));
      }
    }
    out.push_back(std::move(img));
  }
  return out;
}

std::vector<Vec> HomCalculus::identity(std::size_t p) const {
  const Resolution& r = *res_[p];
  const ModuleMap& cover = r.covers.at(0);
  const AlgebraPtr& a = objs_[p].algebra();
  std::vector<Vec> out;
  for (std::size_t j = 0; j < r.gens[0].size(); ++j) {
    const int s = r.gens[0][j].degree;
    std::vector<Vec> parts;
    for (std::size_t l = 0; l < r.gens[0].size(); ++l) {
      const int k = s - r.gens[0][l].degree;
      parts.push_back(la::zeros(k >= 0 && k <= a->truncation() ? a->dim(k) : 0));
    }
    parts[j] = a->idempotent(r.gens[0][j].idem);
    out.push_back(cover.at(s).apply(mod::free_element(a, r.gens[0], s, parts)));
  }
  return out;
}

alg::FiniteDimAlgebra end_algebra(const Handle& e) {
  std::vector<GradedModule> bases;
  for (const auto& p : e.parts) bases.push_back(p.base);
  HomCalculus hc(bases);
  const std::size_t n = e.parts.size();
  struct Item {
    std::size_t k, l, idx;
  };
  std::vector<Item> items;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> offset;
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) {
      offset[{k, l}] = items.size();
      const auto& h = hc.hom(l, k, e.parts[k].shift - e.parts[l].shift);
      for (std::size_t t = 0; t < h.basis.size(); ++t) {
        items.push_back({k, l, t});
        labels.push_back("h" + std::to_string(k) + std::to_string(l) + "_" + std::to_string(t));
      }
    }
  const std::size_t dim = items.size();
  std::vector<la::SparseVec> table(dim * dim);
  for (std::size_t x = 0; x < dim; ++x)
    for (std::size_t y = 0; y < dim; ++y) {
      const Item& a = items[x];
      const Item& b = items[y];
      if (a.l != b.k) continue;
      const int i = e.parts[a.k].shift - e.parts[a.l].shift;
      const int j = e.parts[b.k].shift - e.parts[b.l].shift;
      auto img = hc.compose(a.k, a.l, b.l, i, hc.hom(a.l, a.k, i).basis[a.idx], j, hc.hom(b.l, b.k, j).basis[b.idx]);
      Vec c = hc.coordinates(b.l, a.k, i + j, img);
      la::SparseVec sv;
      for (std::size_t t = 0; t < c.size(); ++t)
        if (!c[t].is_zero()) sv.emplace_back(static_cast<std::uint32_t>(offset[{a.k, b.l}] + t), c[t]);
      table[x * dim + y] = std::move(sv);
    }
  Vec unit = la::zeros(dim);
  for (std::size_t k = 0; k < n; ++k) {
    Vec c = hc.coordinates(k, k, 0, hc.identity(k));
    for (std::size_t t = 0; t < c.size(); ++t) unit[offset[{k, k}] + t] = c[t];
  }
  return alg::FiniteDimAlgebra(labels, table, unit);
}

// ---------------------------------------------------------------------------
// exceptional sequences and helices

bool HelixReport::pass() const {
  for (const auto& c : conditions)
    if (!c.pass) return false;
  return true;
}

bool HelixReport::conclusive() const {
  for (const auto& c : conditions)
    if (!c.certified) return false;
  return true;
}

namespace {

struct Accumulator {
  Condition c;
  void fail(const std::string& what) {
    if (c.pass) c.detail = what;
    c.pass = false;
  }
  void check_zero(const ExtValue& v, const std::string& what) {
    if (!v.certified) {
      c.certified = false;
      if (c.pass && c.detail.empty()) c.detail = "not certified: " + what;
    }
    if (v.dim != 0) fail(what + " has dimension " + std::to_string(v.dim));
  }
};

// End(E) semisimple, or E a sum of parts with semisimple endomorphism rings
// and no cycle of nonzero maps between distinct parts.
std::string re1_form(const Handle& e, std::string& failure) {
  if (alg::semisimple_type(end_algebra(e)).semisimple) return "semisimple";
  const std::size_t n = e.parts.size();
  if (n > 1) {
    bool ok = true;
    for (const auto& p : e.parts)
      if (!alg::semisimple_type(end_algebra(Handle{{p}})).semisimple) ok = false;
    std::vector<GradedModule> bases;
    for (const auto& p : e.parts) bases.push_back(p.base);
    HomCalculus hc(bases);
    std::vector<std::vector<bool>> edge(n, std::vector<bool>(n, false));
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l)
        if (k != l && !hc.hom(l, k, e.parts[k].shift - e.parts[l].shift).basis.empty()) edge[l][k] = true;
    // Kahn's algorithm
    std::vector<int> indeg(n, 0);
    for (std::size_t l = 0; l < n; ++l)
      for (std::size_t k = 0; k < n; ++k) indeg[k] += edge[l][k];
    std::vector<std::size_t> queue;
    for (std::size_t k = 0; k < n; ++k)
      if (indeg[k] == 0) queue.push_back(k);
    std::size_t seen = 0;
    while (!queue.empty()) {
      std::size_t l = queue.back();
      queue.pop_back();
      ++seen;
      for (std::size_t k = 0; k < n; ++k)
        if (edge[l][k] && --indeg[k] == 0) queue.push_back(k);
    }
    if (ok && seen == n) return "triangular";
  }
  failure = "End(" + e.label() + ") is neither semisimple nor triangular with semisimple diagonal";
  return "";
}

}  // namespace

HelixReport check_relative_exceptional(const TailsContext& ctx, const std::vector<Handle>& seq) {
  HelixReport rep;
  rep.period = static_cast<int>(seq.size());
  rep.truncation = ctx.algebra()->truncation();
  Accumulator re1{{"RE1", true, true, ""}}, re2{{"RE2", true, true, ""}}, re3{{"RE3", true, true, ""}};
  std::set<std::string> forms;
  for (const auto& e : seq) {
    std::string failure;
    std::string form = re1_form(e, failure);
    if (form.empty())
      re1.fail(failure);
    else
      forms.insert(form);
  }
  rep.re1_form = forms.count("triangular") ? "End semisimple or triangular with semisimple diagonal" : "End semisimple";
  for (const auto& e : seq)
    for (int q = 1; q <= 2; ++q) re2.check_zero(ctx.ext(e, e, q), "Ext^" + std::to_string(q) + "(" + e.label() + "," + e.label() + ")");
  for (std::size_t i = 0; i < seq.size(); ++i)
    for (std::size_t j = i + 1; j < seq.size(); ++j)
      for (int q = 0; q <= 2; ++q)
        re3.check_zero(ctx.ext(seq[j], seq[i], q),
                       "Ext^" + std::to_string(q) + "(" + seq[j].label() + "," + seq[i].label() + ")");
  rep.conditions = {re1.c, re2.c, re3.c};
  return rep;
}

HelixReport check_geometric_helix(const TailsContext& ctx, const HelixRule& rule, int period, int lo, int hi) {
  if (period < 1 || hi - lo + 1 < period) throw std::invalid_argument("helix: window shorter than the period");
  HelixReport rep;
  rep.window_lo = lo;
  rep.window_hi = hi;
  rep.period = period;
  rep.truncation = ctx.algebra()->truncation();
  std::map<int, Handle> objs;
  for (int i = lo; i <= hi; ++i) objs.emplace(i, rule(i));

  Accumulator h1{{"H1", true, true, ""}};
  std::set<std::string> forms;
  for (int i = lo; i + period - 1 <= hi; ++i) {
    std::vector<Handle> seq;
    for (int k = 0; k < period; ++k) seq.push_back(objs.at(i + k));
    HelixReport r = check_relative_exceptional(ctx, seq);
    forms.insert(r.re1_form);
    for (const auto& c : r.conditions) {
      if (!c.certified) h1.c.certified = false;
      if (!c.pass) h1.fail("window starting at " + std::to_string(i) + ": " + c.name + ": " + c.detail);
    }
  }
  rep.re1_form = forms.empty() ? "" : *forms.rbegin();

  Accumulator h2{{"H2", true, true, ""}};
  const alg::GradedAutomorphism nu_inv = ctx.nu().inverse();
  for (int i = lo; i + period <= hi; ++i) {
    Handle t = objs.at(i);
    for (auto& p : t.parts) p.shift += 2;
    GradedModule lhs = objs.at(i + period).module();
    GradedModule twisted = is_identity(nu_inv) ? t.module() : mod::twist_by_auto(t.module(), nu_inv);
    mod::IsoVerdict v = mod::is_isomorphic(lhs, twisted);
    if (!v.conclusive) h2.c.certified = false;
    if (!v.isomorphic) h2.fail("E_" + std::to_string(i + period) + " vs E_" + std::to_string(i) + " (x) omega^-1: " + v.reason);
  }

  Accumulator geo{{"geometric", true, true, ""}};
  for (int i = lo; i <= hi; ++i)
    for (int j = i; j <= hi; ++j)
      for (int q = 1; q <= 2; ++q)
        geo.check_zero(ctx.ext(objs.at(i), objs.at(j), q),
                       "Ext^" + std::to_string(q) + "(E_" + std::to_string(i) + ",E_" + std::to_string(j) + ")");
  rep.conditions = {h1.c, h2.c, geo.c};
  return rep;
}

// ---------------------------------------------------------------------------
// mutations

namespace {

struct HomMaps {
  std::vector<ModuleMap> maps;
  bool certified = true;
};

HomMaps degree_zero_maps(const GradedModule& e, const GradedModule& f) {
  Resolution r = mod::resolve(e, 1);
  mod::HomSpace h = mod::hom_space(r, f, 0);
  HomMaps out;
  out.certified = h.certified;
  for (const auto& b : h.basis) out.maps.push_back(mod::hom_map(r, f, 0, b));
  return out;
}

std::string concentration_failure(const TailsContext& ctx, const Handle& e, const Handle& f) {
  for (int q = 1; q <= 2; ++q) {
    ExtValue v = ctx.ext(e, f, q);
    if (v.dim != 0) return "Hom^" + std::to_string(q) + "(" + e.label() + "," + f.label() + ") is nonzero";
    if (!v.certified) return "Hom^" + std::to_string(q) + " not certified in the window";
  }
  return "";
}

}  // namespace

Mutation left_mutation(const TailsContext& ctx, const Handle& e, const Handle& f) {
  Mutation out;
  out.reason = concentration_failure(ctx, e, f);
  if (!out.reason.empty()) return out;
  GradedModule em = e.module(), fm = f.module();
  HomMaps hm = degree_zero_maps(em, fm);
  out.hom_dim = hm.maps.size();
  if (!hm.certified) {
    out.reason = "Hom(E,F)_0 not certified in the window";
    return out;
  }
  if (hm.maps.empty()) {
    out.reason = "Hom(E,F)_0 vanishes; evaluation not surjective";
    return out;
  }
  GradedModule src = mod::direct_sum(std::vector<GradedModule>(hm.maps.size(), em));
  ModuleMap ev{src, fm, src.lo(), src.hi(), {}};
  for (const auto& m : hm.maps) ev.hi = std::min(ev.hi, m.hi);
  for (int d = ev.lo; d <= ev.hi; ++d) {
    Mat mat(fm.dim(d), src.dim(d));
    std::size_t col = 0;
    for (const auto& m : hm.maps) {
      Mat md = m.at(d);
      for (std::size_t r = 0; r < md.rows(); ++r)
        for (std::size_t c = 0; c < md.cols(); ++c) mat(r, col + c) = md(r, c);
      col += md.cols();
    }
    if (la::rank(mat) != fm.dim(d)) {
      out.reason = "evaluation not surjective in degree " + std::to_string(d);
      return out;
    }
    ev.mats.emplace(d, std::move(mat));
  }
  out.module = mod::kernel(ev).module;
  out.ok = true;
  return out;
}

Mutation right_mutation(const TailsContext& ctx, const Handle& f, const Handle& e) {
  Mutation out;
  out.reason = concentration_failure(ctx, e, f);
  if (!out.reason.empty()) return out;
  GradedModule em = e.module(), fm = f.module();
  HomMaps hm = degree_zero_maps(em, fm);
  out.hom_dim = hm.maps.size();
  if (!hm.certified) {
    out.reason = "Hom(E,F)_0 not certified in the window";
    return out;
  }
  if (hm.maps.empty()) {
    out.reason = "Hom(E,F)_0 vanishes; coevaluation not injective";
    return out;
  }
  GradedModule tgt = mod::direct_sum(std::vector<GradedModule>(hm.maps.size(), fm));
  ModuleMap co{em, tgt, std::min(em.lo(), tgt.lo()), std::min(em.hi(), tgt.hi()), {}};
  for (const auto& m : hm.maps) co.hi = std::min(co.hi, m.hi);
  for (int d = co.lo; d <= co.hi; ++d) {
    Mat mat(tgt.dim(d), em.dim(d));
    std::size_t row = 0;
    for (const auto& m : hm.maps) {
      Mat md = m.at(d);
      for (std::size_t r = 0; r < md.rows(); ++r)
        for (std::size_t c = 0; c < md.cols(); ++c) mat(row + r, c) = md(r, c);
      row += md.rows();
    }
    if (la::rank(mat) != em.dim(d)) {
      out.reason = "coevaluation not injective in degree " + std::to_string(d);
      return out;
    }
    co.mats.emplace(d, std::move(mat));
  }
  out.module = mod::cokernel(co);
  out.ok = true;
  return out;
}

// ---------------------------------------------------------------------------
// standardness

std::string to_string(Standardness s) {
  switch (s) {
    case Standardness::standard:
      return "standard";
    case Standardness::non_standard:
      return "non-standard";
    default:
      return "inconclusive";
  }
}

StandardnessVerdict classify_standard(const GradedModule& x, const GradedModule& y) {
  if (mod::is_isomorphic(x, y).isomorphic) throw std::invalid_argument("classify_standard: X and Y are isomorphic");
  StandardnessVerdict v;
  GradedModule ox = mod::shift(mod::syzygy(x), 1);
  GradedModule oy = mod::shift(mod::syzygy(y), 1);
  v.omega_x_vs_y = mod::is_isomorphic(ox, y);
  v.omega_x_vs_x = mod::is_isomorphic(ox, x);
  v.omega_y_vs_x = mod::is_isomorphic(oy, x);
  v.omega_y_vs_y = mod::is_isomorphic(oy, y);
  if (v.omega_x_vs_y.isomorphic) {
    v.classification = Standardness::standard;
    v.cross_validated = v.omega_y_vs_x.isomorphic;
  } else if (v.omega_x_vs_x.isomorphic) {
    v.classification = Standardness::non_standard;
    v.cross_validated = v.omega_y_vs_y.isomorphic;
  }
  return v;
}

// ---------------------------------------------------------------------------
// section algebras

SectionAlgebra section_algebra(const std::vector<GradedModule>& parts, const std::vector<std::string>& labels, int D) {
  if (parts.empty()) throw std::invalid_argument("section_algebra: no parts");
  for (const auto& p : parts)
    if (!mod::mcm_check(p).mcm) throw std::invalid_argument("section_algebra: part " + p.name() + " is not MCM");
  auto hc = std::make_shared<HomCalculus>(parts);
  const std::size_t n = parts.size();
  struct Entry {
    std::size_t p, q, idx;
  };
  auto layout = std::make_shared<std::vector<std::vector<Entry>>>();
  auto offsets = std::make_shared<std::vector<std::map<std::pair<std::size_t, std::size_t>, std::size_t>>>();
  alg::TabulatedAlgebra::Spec spec;
  spec.truncation = D;
  spec.num_blocks = static_cast<int>(n);
  for (int i = 0; i <= D; ++i) {
    std::vector<Entry> entries;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> off;
    std::vector<std::string> lab;
    std::vector<std::pair<int, int>> blk;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = 0; q < n; ++q) {
        const auto& h = hc->hom(q, p, i);
        if (!h.certified)
          throw mod::WindowError("section_algebra: Hom(" + labels.at(q) + "," + labels.at(p) + ")_" + std::to_string(i) +
                                 " not certified");
        off[{p, q}] = entries.size();
        for (std::size_t t = 0; t < h.basis.size(); ++t) {
          entries.push_back({p, q, t});
          lab.push_back(labels.at(q) + "->" + labels.at(p) + "#" + std::to_string(t));
          blk.emplace_back(static_cast<int>(p), static_cast<int>(q));
        }
      }
    layout->push_back(std::move(entries));
    offsets->push_back(std::move(off));
    spec.labels.push_back(std::move(lab));
    spec.blocks.push_back(std::move(blk));
  }
  for (std::size_t p = 0; p < n; ++p) {
    Vec e = la::zeros((*layout)[0].size());
    Vec c = hc->coordinates(p, p, 0, hc->identity(p));
    for (std::size_t t = 0; t < c.size(); ++t) e[(*offsets)[0].at({p, p}) + t] = c[t];
    spec.idempotents.push_back(std::move(e));
  }
  spec.product = [hc, layout, offsets](int d, std::size_t i, int e, std::size_t j) {
    const auto& a = (*layout)[d][i];
    const auto& b = (*layout)[e][j];
    la::SparseVec out;
    if (a.q != b.p) return out;
    auto img = hc->compose(a.p, a.q, b.q, d, hc->hom(a.q, a.p, d).basis[a.idx], e, hc->hom(b.q, b.p, e).basis[b.idx]);
    Vec c = hc->coordinates(b.q, a.p, d + e, img);
    const std::size_t off = (*offsets)[d + e].at({a.p, b.q});
    for (std::size_t t = 0; t < c.size(); ++t)
      if (!c[t].is_zero()) out.emplace_back(static_cast<std::uint32_t>(off + t), c[t]);
    return out;
  };
  std::string name = "B(";
  for (std::size_t p = 0; p < n; ++p) name += (p ? "," : "") + labels.at(p);
  spec.name = name + ")";
  SectionAlgebra out;
  out.algebra = std::make_shared<alg::TabulatedAlgebra>(std::move(spec));
  out.block_dims.assign(n, std::vector<std::size_t>(n, 0));
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) out.block_dims[p][q] = hc->hom(p, q, 0).basis.size();
  return out;
}

// ---------------------------------------------------------------------------
// regularity evidence

namespace {

SideEvidence side_evidence(const AlgebraPtr& b, int h, const std::string& side) {
  SideEvidence ev;
  ev.side = side;
  const int D = b->truncation();
  GradedModule r0 = mod::degree_zero_module(b, D);
  GradedModule reg = mod::regular_module(b);
  Resolution res = mod::resolve(r0, h);
  ev.betti = res.gens;
  ev.terminated = res.terminated;
  ev.length = res.length();
  for (int q = 0; q <= res.length(); ++q) {
    std::vector<ExtRow> rows;
    if (!res.gens[q].empty()) {
      int smin = res.gens[q][0].degree, smax = smin;
      for (const auto& g : res.gens[q]) {
        smin = std::min(smin, g.degree);
        smax = std::max(smax, g.degree);
      }
      for (int i = -smax; i <= D - smin; ++i) rows.push_back(mod::ext_dim(res, reg, q, i));
    }
    ev.ext.push_back(std::move(rows));
  }
  if (!res.terminated) {
    ev.conclusive = false;
    ev.reason = "resolution of B0 does not terminate within h = " + std::to_string(h) + " in the window";
    return ev;
  }
  const int d = res.length();
  for (int q = 0; q < d; ++q)
    for (const auto& r : ev.ext[q])
      if (r.certified && r.dim != 0) {
        ev.reason = "Ext^" + std::to_string(q) + "(B0,B) nonzero in degree " + std::to_string(r.degree) +
                    " below the projective dimension " + std::to_string(d);
        return ev;
      }
  std::size_t dim0 = b->dim(0);
  std::optional<int> peak;
  std::size_t total = 0;
  for (const auto& r : ev.ext[d]) {
    if (!r.certified || r.dim == 0) continue;
    if (peak) {
      ev.reason = "Ext^" + std::to_string(d) + "(B0,B) not concentrated in one degree";
      return ev;
    }
    peak = r.degree;
    total = r.dim;
  }
  if (!peak) {
    ev.reason = "Ext^" + std::to_string(d) + "(B0,B) vanishes in the certified rows";
    return ev;
  }
  if (total != dim0) {
    ev.reason = "Ext^" + std::to_string(d) + "(B0,B) has dimension " + std::to_string(total) + ", expected dim B0 = " +
                std::to_string(dim0);
    return ev;
  }
  ev.d = d;
  ev.ell = -*peak;
  ev.ok = true;
  return ev;
}

}  // namespace

static std::string describe_base(const alg::TabulatedAlgebra& b) {
  const alg::FiniteDimAlgebra f = alg::degree_zero(b);
  const alg::SemisimpleReport r = alg::semisimple_type(f);
  if (!r.semisimple || !r.blocks) return "dim " + std::to_string(r.dimension) + ", radical " + std::to_string(r.radical_dim);
  std::string out;
  for (std::size_t n : *r.blocks) {
    if (!out.empty()) out += " x ";
    std::size_t m = 1;
    while (m * m < n) ++m;
    out += m * m == n && m > 1 ? "M_" + std::to_string(m) + "(k)" : n == 1 ? "k" : "dim " + std::to_string(n);
  }
  return out;
}

RegularityEvidence regularity_evidence(const AlgebraPtr& b, int h) {
  RegularityEvidence ev;
  ev.hbound = h;
  ev.truncation = b->truncation();
  ev.right = side_evidence(b, h, "right");
  ev.left = side_evidence(alg::opposite(b), h, "left");
  ev.note = "Ext^d compared with the graded dual of B0 by dimension pattern only";
  if (ev.right.ok && ev.left.ok) {
    if (ev.right.d == ev.left.d && ev.right.ell == ev.left.ell) {
      ev.ok = true;
      ev.candidate = std::make_pair(*ev.right.d, *ev.right.ell);
    } else {
      ev.note += "; left and right sides disagree";
    }
  }
  ev.conclusive = ev.ok || (ev.right.conclusive && ev.left.conclusive);
  ev.base = describe_base(*b);
  ev.verdict = !ev.conclusive ? "inconclusive: " + (ev.right.conclusive ? ev.left.reason : ev.right.reason)
               : ev.ok ? "AS-regular evidence over B0 = " + ev.base + " (d = " + std::to_string(ev.candidate->first) +
                           ", l = " + std::to_string(ev.candidate->second) + ")"
                     : "not AS-regular over B0 = " + ev.base;
  return ev;
}

}  // namespace qproj::hx

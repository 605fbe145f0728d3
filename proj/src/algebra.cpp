#include "qproj/algebra.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

namespace qproj::alg {

using fa::Word;

namespace {

std::size_t index_in(const std::vector<Word>& sorted, const Word& w) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), w);
  if (it == sorted.end() || !(*it == w)) throw std::logic_error("word is not a normal word");
  return static_cast<std::size_t>(it - sorted.begin());
}

}  // namespace

// ---------------------------------------------------------------------------
// PresentedAlgebra

PresentedAlgebra::PresentedAlgebra(GeneratorSet gens, std::vector<NcPoly> relations, int D)
    : gens_(std::move(gens)), truncation_(D) {
  gb::Ideal ideal(gens_, relations);
  relations_ = ideal.generators;
  gb_ = std::make_shared<const gb::GroebnerBasis>(gb::buchberger_truncated(ideal, D));
}

Vec PresentedAlgebra::coordinates(const NcPoly& p, int d) const {
  auto words = gb_->normal_words(d);
  Vec out(words.size());
  if (p.is_zero()) return out;
  auto hd = p.homogeneous_degree();
  if (!hd || *hd != d)
    throw std::invalid_argument("element '" + p.str(gens_) + "' is not homogeneous of degree " + std::to_string(d));
  NcPoly nf = gb_->normal_form(p);
  for (const auto& [w, c] : nf.terms()) out[index_in(words, w)] += c;
  return out;
}

NcPoly PresentedAlgebra::element(int d, const Vec& coords) const {
  auto words = gb_->normal_words(d);
  std::vector<NcPoly::Term> terms;
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (!coords[i].is_zero()) terms.emplace_back(words[i], coords[i]);
  return NcPoly::from_terms(std::move(terms));
}

bool PresentedAlgebra::is_quadratic() const {
  if (!gens_.all_degree_one()) return false;
  return std::all_of(relations_.begin(), relations_.end(),
                     [](const NcPoly& r) { return r.homogeneous_degree() == 2; });
}

PresentedAlgebra quotient_by_central(const PresentedAlgebra& a, const NcPoly& f) {
  auto rels = a.relations();
  if (!f.is_zero()) rels.push_back(f);
  return PresentedAlgebra(a.gens(), rels, a.truncation());
}

// ---------------------------------------------------------------------------
// TabulatedAlgebra

TabulatedAlgebra::TabulatedAlgebra(Spec spec) : spec_(std::move(spec)) {
  if (static_cast<int>(spec_.labels.size()) != spec_.truncation + 1)
    throw std::invalid_argument("tabulated algebra: labels must cover degrees 0..D");
  if (spec_.blocks.empty()) {
    spec_.blocks.resize(spec_.labels.size());
    for (std::size_t d = 0; d < spec_.labels.size(); ++d) spec_.blocks[d].assign(spec_.labels[d].size(), {0, 0});
  }
  unit_ = Vec(dim(0));
  for (const auto& e : spec_.idempotents) la::axpy(unit_, Scalar(1), e);
  std::size_t n = static_cast<std::size_t>(spec_.truncation + 1);
  slots_.resize(n * n);
  for (auto& s : slots_) s = std::make_unique<Slot>();
}

std::size_t TabulatedAlgebra::dim(int d) const {
  if (d < 0 || d > spec_.truncation) return 0;
  return spec_.labels[d].size();
}

std::vector<std::size_t> TabulatedAlgebra::dims() const {
  std::vector<std::size_t> out;
  for (int d = 0; d <= truncation(); ++d) out.push_back(dim(d));
  return out;
}

const std::vector<SparseVec>& TabulatedAlgebra::table(int d, int e) const {
  if (d < 0 || e < 0 || d + e > spec_.truncation)
    throw gb::TruncationError("product of degrees " + std::to_string(d) + " and " + std::to_string(e) +
                              " exceeds truncation " + std::to_string(spec_.truncation));
  Slot& slot = *slots_[static_cast<std::size_t>(d) * (spec_.truncation + 1) + e];
  std::call_once(slot.once, [&] {
    std::size_t nd = dim(d), ne = dim(e);
    slot.table.resize(nd * ne);
    for (std::size_t i = 0; i < nd; ++i)
      for (std::size_t j = 0; j < ne; ++j) slot.table[i * ne + j] = spec_.product(d, i, e, j);
  });
  return slot.table;
}

const SparseVec& TabulatedAlgebra::product(int d, std::size_t i, int e, std::size_t j) const {
  return table(d, e)[i * dim(e) + j];
}

Vec TabulatedAlgebra::multiply(int d, const Vec& a, int e, const Vec& b) const {
  Vec out(dim(d + e));
  if (out.empty()) return out;
  const auto& t = table(d, e);
  std::size_t ne = dim(e);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j].is_zero()) continue;
      la::axpy(out, a[i] * b[j], t[i * ne + j]);
    }
  }
  return out;
}

Mat TabulatedAlgebra::left_mult(int d, const Vec& a, int e) const {
  Mat m(dim(d + e), dim(e));
  Vec unit(dim(e));
  for (std::size_t j = 0; j < dim(e); ++j) {
    unit.assign(dim(e), Scalar());
    unit[j] = 1;
    Vec c = multiply(d, a, e, unit);
    for (std::size_t r = 0; r < c.size(); ++r) m(r, j) = c[r];
  }
  return m;
}

Mat TabulatedAlgebra::right_mult(int d, const Vec& a, int e) const {
  Mat m(dim(d + e), dim(e));
  Vec unit(dim(e));
  for (std::size_t j = 0; j < dim(e); ++j) {
    unit.assign(dim(e), Scalar());
    unit[j] = 1;
    Vec c = multiply(e, unit, d, a);
    for (std::size_t r = 0; r < c.size(); ++r) m(r, j) = c[r];
  }
  return m;
}

const std::vector<int>& TabulatedAlgebra::generator_degrees() const {
  std::call_once(gen_once_, [&] {
    for (int e = 1; e <= truncation(); ++e) {
      std::size_t n = dim(e);
      if (n == 0) continue;
      la::RowSpace span(n);
      for (int g : gen_degrees_) {
        if (span.dim() == n) break;
        int h = e - g;
        for (std::size_t i = 0; i < dim(g) && span.dim() < n; ++i)
          for (std::size_t j = 0; j < dim(h) && span.dim() < n; ++j) {
            const auto& p = product(g, i, h, j);
            if (!p.empty()) span.insert(la::densify(p, n));
          }
      }
      if (span.dim() < n) gen_degrees_.push_back(e);
    }
  });
  return gen_degrees_;
}

const std::vector<Vec>& TabulatedAlgebra::radical_degree0() const {
  std::call_once(rad_once_, [&] {
    FiniteDimAlgebra f = degree_zero(*this);
    std::size_t n = f.dim();
    Vec tr(n);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t m = 0; m < n; ++m)
        for (const auto& [idx, c] : f.product(k, m))
          if (idx == m) tr[k] += c;
    Mat g(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (const auto& [idx, c] : f.product(i, j)) g(i, j) += c * tr[idx];
    Mat k = la::kernel_basis(g);
    for (std::size_t r = 0; r < k.rows(); ++r) radical0_.push_back(k.row(r));
  });
  return radical0_;
}

// ---------------------------------------------------------------------------

AlgebraPtr tabulate(const PresentedAlgebra& a) { return tabulate(a, a.truncation()); }

AlgebraPtr tabulate(const PresentedAlgebra& a, int D) {
  if (D > a.truncation())
    throw gb::TruncationError("tabulation degree " + std::to_string(D) + " exceeds Groebner truncation " +
                              std::to_string(a.truncation()));
  struct Shared {
    std::shared_ptr<const gb::GroebnerBasis> gb;
    std::vector<std::vector<Word>> words;
    std::vector<std::unordered_map<std::string, std::size_t>> index;
  };
  auto sh = std::make_shared<Shared>();
  TabulatedAlgebra::Spec spec;
  spec.truncation = D;
  for (int d = 0; d <= D; ++d) {
    sh->words.push_back(a.groebner().normal_words(d));
    std::unordered_map<std::string, std::size_t> idx;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < sh->words[d].size(); ++i) {
      idx.emplace(sh->words[d][i].letters(), i);
      labels.push_back(sh->words[d][i].str(a.gens()));
    }
    sh->index.push_back(std::move(idx));
    spec.labels.push_back(std::move(labels));
  }
  auto owner = std::make_shared<PresentedAlgebra>(a);
  sh->gb = std::shared_ptr<const gb::GroebnerBasis>(owner, &owner->groebner());
  spec.idempotents = {Vec{Scalar(1)}};
  spec.product = [sh](int d, std::size_t i, int e, std::size_t j) {
    Word w = sh->words[d][i] * sh->words[e][j];
    const NcPoly& nf = sh->gb->normal_form(w);
    SparseVec out;
    for (const auto& [v, c] : nf.terms()) out.emplace_back(sh->index[d + e].at(v.letters()), c);
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
  };
  return std::make_shared<const TabulatedAlgebra>(std::move(spec));
}

bool check_associative(const TabulatedAlgebra& a, std::size_t samples) {
  const int D = a.truncation();
  // unit laws
  for (int d = 0; d <= D; ++d)
    for (std::size_t i = 0; i < a.dim(d); ++i) {
      Vec b(a.dim(d));
      b[i] = 1;
      if (a.multiply(0, a.unit(), d, b) != b || a.multiply(d, b, 0, a.unit()) != b) return false;
    }
  struct Triple {
    int d1, d2, d3;
    std::size_t i, j, k;
  };
  std::size_t total = 0;
  for (int d1 = 0; d1 <= D; ++d1)
    for (int d2 = 0; d1 + d2 <= D; ++d2)
      for (int d3 = 0; d1 + d2 + d3 <= D; ++d3) total += a.dim(d1) * a.dim(d2) * a.dim(d3);
  auto check = [&](const Triple& t) {
    Vec x(a.dim(t.d1)), y(a.dim(t.d2)), z(a.dim(t.d3));
    x[t.i] = 1;
    y[t.j] = 1;
    z[t.k] = 1;
    Vec l = a.multiply(t.d1 + t.d2, a.multiply(t.d1, x, t.d2, y), t.d3, z);
    Vec r = a.multiply(t.d1, x, t.d2 + t.d3, a.multiply(t.d2, y, t.d3, z));
    return l == r;
  };
  if (total <= samples) {
    for (int d1 = 0; d1 <= D; ++d1)
      for (int d2 = 0; d1 + d2 <= D; ++d2)
        for (int d3 = 0; d1 + d2 + d3 <= D; ++d3)
          for (std::size_t i = 0; i < a.dim(d1); ++i)
            for (std::size_t j = 0; j < a.dim(d2); ++j)
              for (std::size_t k = 0; k < a.dim(d3); ++k)
                if (!check({d1, d2, d3, i, j, k})) return false;
    return true;
  }
  std::mt19937 rng(20240601);
  std::vector<std::array<int, 3>> shapes;
  for (int d1 = 0; d1 <= D; ++d1)
    for (int d2 = 0; d1 + d2 <= D; ++d2)
      for (int d3 = 0; d1 + d2 + d3 <= D; ++d3)
        if (a.dim(d1) && a.dim(d2) && a.dim(d3)) shapes.push_back({d1, d2, d3});
  for (std::size_t s = 0; s < samples; ++s) {
    auto sh = shapes[rng() % shapes.size()];
    Triple t{sh[0], sh[1], sh[2], rng() % a.dim(sh[0]), rng() % a.dim(sh[1]), rng() % a.dim(sh[2])};
    if (!check(t)) return false;
  }
  return true;
}

bool same_structure(const TabulatedAlgebra& a, const TabulatedAlgebra& b) {
  if (a.truncation() != b.truncation() || a.dims() != b.dims()) return false;
  if (a.unit() != b.unit()) return false;
  for (int d = 0; d <= a.truncation(); ++d)
    for (int e = 0; d + e <= a.truncation(); ++e)
      for (std::size_t i = 0; i < a.dim(d); ++i)
        for (std::size_t j = 0; j < a.dim(e); ++j)
          if (a.product(d, i, e, j) != b.product(d, i, e, j)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Hilbert series

namespace {

std::vector<long long> poly_mul(const std::vector<long long>& a, const std::vector<long long>& b, std::size_t cap) {
  std::vector<long long> out(std::min(cap, a.size() + b.size() - 1), 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size() && i + j < out.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

std::vector<long long> denominator_poly(const std::vector<std::pair<int, int>>& factors) {
  std::vector<long long> p{1};
  for (auto [e, a] : factors)
    for (int k = 0; k < a; ++k) {
      std::vector<long long> f(e + 1, 0);
      f[0] = 1;
      f[e] = -1;
      p = poly_mul(p, f, 1000);
    }
  return p;
}

std::string monomial_str(long long c, int exp, bool first) {
  std::string s;
  long long a = c < 0 ? -c : c;
  if (first)
    s += c < 0 ? "-" : "";
  else
    s += c < 0 ? "-" : "+";
  if (exp == 0) return s + std::to_string(a);
  if (a != 1) s += std::to_string(a) + "*";
  s += "t";
  if (exp != 1) s += "^" + std::to_string(exp);
  return s;
}

}  // namespace

std::string ClosedForm::str() const {
  std::string num;
  int terms = 0;
  for (std::size_t k = 0; k < numerator.size(); ++k) {
    if (numerator[k] == 0) continue;
    num += monomial_str(numerator[k], shift + static_cast<int>(k), terms == 0);
    ++terms;
  }
  if (terms == 0) return "0";
  std::vector<std::string> fs;
  for (auto [e, a] : denominator) {
    if (a == 0) continue;
    std::string f = e == 1 ? "(1-t)" : "(1-t^" + std::to_string(e) + ")";
    if (a > 1) f += "^" + std::to_string(a);
    fs.push_back(f);
  }
  if (fs.empty()) return num;
  std::string den;
  for (std::size_t i = 0; i < fs.size(); ++i) den += (i ? "*" : "") + fs[i];
  if (fs.size() > 1) den = "(" + den + ")";
  if (terms > 1) num = "(" + num + ")";
  return num + "/" + den;
}

std::vector<long long> expand(const ClosedForm& cf, int start, std::size_t n) {
  // 1/(1-t^e) = sum t^{ke}
  std::vector<long long> series(n + 64, 0);
  int offset = cf.shift - start;
  std::size_t len = series.size();
  for (std::size_t k = 0; k < cf.numerator.size(); ++k) {
    long long idx = offset + static_cast<long long>(k);
    if (idx >= 0 && static_cast<std::size_t>(idx) < len) series[idx] += cf.numerator[k];
  }
  for (auto [e, a] : cf.denominator)
    for (int r = 0; r < a; ++r)
      for (std::size_t i = e; i < len; ++i) series[i] += series[i - e];
  series.resize(n);
  return series;
}

std::optional<ClosedForm> find_closed_form(int start, const std::vector<long long>& coeffs) {
  std::size_t n = coeffs.size();
  if (n == 0) return std::nullopt;
  std::size_t first = 0;
  while (first < n && coeffs[first] == 0) ++first;
  if (first == n) {
    ClosedForm z;
    z.shift = 0;
    return z;
  }
  std::vector<long long> h(coeffs.begin() + first, coeffs.end());
  std::size_t len = h.size();
  // exponent vectors (a1..a4) for factors (1-t^e)^{a_e}, grouped by total degree
  std::vector<std::vector<std::pair<int, int>>> cands;
  for (int total = 0; total <= 6; ++total)
    for (int a4 = total / 4; a4 >= 0; --a4)
      for (int a3 = (total - 4 * a4) / 3; a3 >= 0; --a3)
        for (int a2 = (total - 4 * a4 - 3 * a3) / 2; a2 >= 0; --a2) {
          int a1 = total - 4 * a4 - 3 * a3 - 2 * a2;
          std::vector<std::pair<int, int>> f;
          if (a1) f.push_back({1, a1});
          if (a2) f.push_back({2, a2});
          if (a3) f.push_back({3, a3});
          if (a4) f.push_back({4, a4});
          cands.push_back(f);
        }
  std::optional<ClosedForm> best;
  int best_total = -1;
  for (const auto& f : cands) {
    int total = 0;
    for (auto [e, a] : f) total += e * a;
    if (best && total > best_total) break;
    auto num = poly_mul(h, denominator_poly(f), len);
    std::size_t top = num.size();
    while (top > 0 && num[top - 1] == 0) --top;
    if (top == 0) continue;
    std::size_t deg = top - 1;
    if (deg + 3 > len - 1) continue;
    num.resize(top);
    if (!best || num.size() < best->numerator.size()) {
      ClosedForm cf;
      cf.shift = start + static_cast<int>(first);
      cf.numerator = num;
      cf.denominator = f;
      best = cf;
      best_total = total;
    }
  }
  return best;
}

HilbertSeries make_series(int start, std::vector<long long> coefficients) {
  HilbertSeries h;
  h.start = start;
  h.closed_form = find_closed_form(start, coefficients);
  h.coefficients = std::move(coefficients);
  return h;
}

HilbertSeries hilbert(const TabulatedAlgebra& a) {
  std::vector<long long> c;
  for (int d = 0; d <= a.truncation(); ++d) c.push_back(static_cast<long long>(a.dim(d)));
  return make_series(0, std::move(c));
}

// ---------------------------------------------------------------------------
// central elements

bool is_central(const TabulatedAlgebra& a, int e, const Vec& f) {
  if (f.size() != a.dim(e)) throw la::DimensionError("is_central: element has wrong length");
  for (int d = 0; d + e <= a.truncation(); ++d)
    for (std::size_t i = 0; i < a.dim(d); ++i) {
      Vec b(a.dim(d));
      b[i] = 1;
      if (a.multiply(e, f, d, b) != a.multiply(d, b, e, f)) return false;
    }
  return true;
}

bool is_regular_central(const TabulatedAlgebra& a, int e, const Vec& f) {
  if (!is_central(a, e, f)) throw std::invalid_argument("is_regular_central: element is not central");
  for (int d = 0; d + e <= a.truncation(); ++d)
    if (la::rank(a.right_mult(e, f, d)) != a.dim(d)) return false;
  return true;
}

std::vector<Vec> find_central_degree2(const TabulatedAlgebra& a) {
  if (a.truncation() < 3) throw gb::TruncationError("find_central_degree2 needs truncation >= 3");
  std::size_t n2 = a.dim(2), n1 = a.dim(1), n3 = a.dim(3);
  Mat m(n1 * n3, n2);
  for (std::size_t g = 0; g < n1; ++g) {
    Vec gv(n1);
    gv[g] = 1;
    Mat l = a.right_mult(1, gv, 2);  // z -> z g
    Mat r = a.left_mult(1, gv, 2);   // z -> g z
    for (std::size_t row = 0; row < n3; ++row)
      for (std::size_t c = 0; c < n2; ++c) m(g * n3 + row, c) = l(row, c) - r(row, c);
  }
  Mat k = la::kernel_basis(m);
  std::vector<Vec> out;
  for (std::size_t i = 0; i < k.rows(); ++i) out.push_back(k.row(i));
  return out;
}

std::vector<long long> quotient_series(const TabulatedAlgebra& a, int e, const Vec& z) {
  std::vector<long long> out;
  for (int d = 0; d <= a.truncation(); ++d) {
    long long r = d >= e ? static_cast<long long>(la::rank(a.right_mult(e, z, d - e))) : 0;
    out.push_back(static_cast<long long>(a.dim(d)) - r);
  }
  return out;
}

std::optional<Vec> choose_regular_central(const TabulatedAlgebra& a, const std::vector<long long>& target) {
  auto basis = find_central_degree2(a);
  if (basis.empty()) return std::nullopt;
  std::vector<Vec> cands = basis;
  for (int t = 1; t <= 4; ++t) {
    Vec z(a.dim(2));
    long long c = 1;
    for (const auto& b : basis) {
      la::axpy(z, Scalar(c), b);
      c *= (t + 1);
    }
    cands.push_back(z);
  }
  std::optional<Vec> fallback;
  for (const auto& z : cands) {
    if (la::is_zero(z) || !is_central(a, 2, z) || !is_regular_central(a, 2, z)) continue;
    if (target.empty()) return z;
    auto q = quotient_series(a, 2, z);
    std::size_t n = std::min(q.size(), target.size());
    if (std::equal(q.begin(), q.begin() + n, target.begin())) return z;
    if (!fallback) fallback = z;
  }
  return fallback;
}

// ---------------------------------------------------------------------------
// constructions

AlgebraPtr veronese(const AlgebraPtr& a, int r) {
  if (r < 1) throw std::invalid_argument("veronese: r must be >= 1");
  TabulatedAlgebra::Spec spec;
  spec.truncation = a->truncation() / r;
  for (int i = 0; i <= spec.truncation; ++i) {
    std::vector<std::string> labels;
    std::vector<std::pair<int, int>> blocks;
    for (std::size_t b = 0; b < a->dim(r * i); ++b) {
      labels.push_back(a->label(r * i, b));
      blocks.push_back(a->block(r * i, b));
    }
    spec.labels.push_back(std::move(labels));
    spec.blocks.push_back(std::move(blocks));
  }
  spec.num_blocks = a->num_blocks();
  for (int p = 0; p < a->num_blocks(); ++p) spec.idempotents.push_back(a->idempotent(p));
  spec.product = [a, r](int d, std::size_t i, int e, std::size_t j) { return a->product(r * d, i, r * e, j); };
  spec.name = a->name().empty() ? "" : a->name() + "^(" + std::to_string(r) + ")";
  return std::make_shared<const TabulatedAlgebra>(std::move(spec));
}

AlgebraPtr quasi_veronese(const AlgebraPtr& a, int r) {
  if (r < 1) throw std::invalid_argument("quasi_veronese: r must be >= 1");
  const int D = a->truncation();
  if (D < r - 1) throw gb::TruncationError("quasi_veronese: truncation too small for r");
  const int Dn = (D - r + 1) / r;
  const int nA = a->num_blocks();
  struct Entry {
    int u, v, k;
    std::size_t b;
  };
  auto entries = std::make_shared<std::vector<std::vector<Entry>>>();
  // offsets[i][u*r+v] = first index of internal block (u,v) in degree i
  auto offsets = std::make_shared<std::vector<std::vector<std::size_t>>>();
  TabulatedAlgebra::Spec spec;
  spec.truncation = Dn;
  spec.num_blocks = r * nA;
  for (int i = 0; i <= Dn; ++i) {
    std::vector<Entry> es;
    std::vector<std::size_t> off(static_cast<std::size_t>(r * r));
    std::vector<std::string> labels;
    std::vector<std::pair<int, int>> blocks;
    for (int u = 0; u < r; ++u)
      for (int v = 0; v < r; ++v) {
        off[u * r + v] = es.size();
        int k = r * i + u - v;
        for (std::size_t b = 0; b < a->dim(k); ++b) {
          es.push_back({u, v, k, b});
          labels.push_back("[" + std::to_string(v) + "," + std::to_string(u) + "]" + a->label(k, b));
          auto [p, q] = a->block(k, b);
          blocks.push_back({u * nA + p, v * nA + q});
        }
      }
    entries->push_back(std::move(es));
    offsets->push_back(std::move(off));
    spec.labels.push_back(std::move(labels));
    spec.blocks.push_back(std::move(blocks));
  }
  for (int u = 0; u < r; ++u)
    for (int p = 0; p < nA; ++p) {
      Vec e(spec.labels[0].size());
      std::size_t off = (*offsets)[0][u * r + u];
      const Vec& ep = a->idempotent(p);
      for (std::size_t b = 0; b < ep.size(); ++b) e[off + b] = ep[b];
      spec.idempotents.push_back(std::move(e));
    }
  spec.product = [a, r, entries, offsets](int d, std::size_t i, int e, std::size_t j) {
    const Entry& x = (*entries)[d][i];
    const Entry& y = (*entries)[e][j];
    SparseVec out;
    if (x.v != y.u) return out;
    std::size_t off = (*offsets)[d + e][x.u * r + y.v];
    for (const auto& [idx, c] : a->product(x.k, x.b, y.k, y.b)) out.emplace_back(off + idx, c);
    return out;
  };
  spec.name = a->name().empty() ? "" : a->name() + "^[" + std::to_string(r) + "]";
  return std::make_shared<const TabulatedAlgebra>(std::move(spec));
}

std::vector<std::vector<std::size_t>> qveronese_block_dims(const TabulatedAlgebra& a, int r, int i) {
  std::vector<std::vector<std::size_t>> out(r, std::vector<std::size_t>(r));
  for (int p = 0; p < r; ++p)
    for (int q = 0; q < r; ++q) out[p][q] = a.dim(r * i + q - p);
  return out;
}

AlgebraPtr opposite(const AlgebraPtr& a) {
  TabulatedAlgebra::Spec spec;
  spec.truncation = a->truncation();
  for (int d = 0; d <= spec.truncation; ++d) {
    std::vector<std::string> labels;
    std::vector<std::pair<int, int>> blocks;
    for (std::size_t b = 0; b < a->dim(d); ++b) {
      labels.push_back(a->label(d, b));
      auto [p, q] = a->block(d, b);
      blocks.push_back({q, p});
    }
    spec.labels.push_back(std::move(labels));
    spec.blocks.push_back(std::move(blocks));
  }
  spec.num_blocks = a->num_blocks();
  for (int p = 0; p < a->num_blocks(); ++p) spec.idempotents.push_back(a->idempotent(p));
  spec.product = [a](int d, std::size_t i, int e, std::size_t j) { return a->product(e, j, d, i); };
  spec.name = a->name().empty() ? "" : a->name() + "^op";
  return std::make_shared<const TabulatedAlgebra>(std::move(spec));
}

GradedAutomorphism GradedAutomorphism::inverse() const {
  GradedAutomorphism out;
  for (const auto& m : maps) {
    auto inv = la::inverse(m);
    if (!inv) throw std::invalid_argument("automorphism is not invertible");
    out.maps.push_back(*inv);
  }
  return out;
}

GradedAutomorphism GradedAutomorphism::identity(const TabulatedAlgebra& a) {
  GradedAutomorphism out;
  for (int d = 0; d <= a.truncation(); ++d) out.maps.push_back(Mat::identity(a.dim(d)));
  return out;
}

namespace {

NcPoly substitute(const NcPoly& p, const std::vector<NcPoly>& images) {
  NcPoly out;
  for (const auto& [w, c] : p.terms()) {
    NcPoly term = NcPoly::constant(c);
    for (std::size_t k = 0; k < w.length(); ++k) term = term * images.at(w[k]);
    out += term;
  }
  return out;
}

}  // namespace

GradedAutomorphism induced_automorphism(const PresentedAlgebra& a, const TabulatedAlgebra& t,
                                        const std::vector<NcPoly>& images) {
  const auto& gens = a.gens();
  if (images.size() != gens.size()) throw std::invalid_argument("automorphism: one image per generator required");
  GradedAutomorphism out;
  out.maps.push_back(Mat::identity(t.dim(0)));
  std::vector<Vec> gen_images;
  for (std::size_t g = 0; g < gens.size(); ++g) gen_images.push_back(a.coordinates(images[g], gens.degree(g)));
  for (int d = 1; d <= t.truncation(); ++d) {
    auto words = a.groebner().normal_words(d);
    Mat m(t.dim(d), t.dim(d));
    for (std::size_t i = 0; i < words.size(); ++i) {
      const Word& w = words[i];
      std::size_t g = w[w.length() - 1];
      int e = gens.degree(g);
      Word prefix = w.subword(gens, 0, w.length() - 1);
      auto pw = a.groebner().normal_words(d - e);
      std::size_t pi = index_in(pw, prefix);
      Vec col = t.multiply(d - e, out.maps[d - e].col(pi), e, gen_images[g]);
      for (std::size_t r = 0; r < col.size(); ++r) m(r, i) = col[r];
    }
    out.maps.push_back(std::move(m));
  }
  return out;
}

AutomorphismCheck check_automorphism(const PresentedAlgebra& a, const std::vector<NcPoly>& images, int D) {
  AutomorphismCheck out;
  const auto& gens = a.gens();
  if (images.size() != gens.size()) {
    out.degree_preserving = false;
    out.detail = "expected one image per generator";
    return out;
  }
  for (std::size_t g = 0; g < gens.size(); ++g) {
    if (images[g].is_zero()) continue;
    if (images[g].homogeneous_degree() != gens.degree(g)) {
      out.degree_preserving = false;
      out.detail = "image of " + gens.name(g) + " is not homogeneous of degree " + std::to_string(gens.degree(g));
      return out;
    }
  }
  for (const auto& r : a.relations()) {
    NcPoly img = a.groebner().normal_form(substitute(r, images));
    if (!img.is_zero()) {
      out.relations_preserved = false;
      out.detail = "relation " + r.str(gens) + " maps to " + img.str(gens);
      return out;
    }
  }
  auto t = tabulate(a, std::min(D, a.truncation()));
  auto sigma = induced_automorphism(a, *t, images);
  for (int d = 0; d <= t->truncation(); ++d) {
    if (la::rank(sigma.maps[d]) != t->dim(d)) {
      out.invertible = false;
      out.detail = "induced map in degree " + std::to_string(d) + " is singular";
      return out;
    }
  }
  return out;
}

AlgebraPtr twist(const AlgebraPtr& a, const GradedAutomorphism& sigma) {
  if (static_cast<int>(sigma.maps.size()) <= a->truncation())
    throw std::invalid_argument("twist: automorphism does not cover the truncation");
  struct Powers {
    GradedAutomorphism sigma;
    std::mutex mu;
    std::map<std::pair<int, int>, Mat> cache;  // (k, e) -> sigma_e^k
    const Mat& get(int k, int e) {
      std::lock_guard lock(mu);
      auto it = cache.find({k, e});
      if (it != cache.end()) return it->second;
      Mat m = k == 0 ? Mat::identity(sigma.maps[e].rows()) : sigma.maps[e] * get_unlocked(k - 1, e);
      return cache.emplace(std::make_pair(k, e), std::move(m)).first->second;
    }
    const Mat& get_unlocked(int k, int e) {
      auto it = cache.find({k, e});
      if (it != cache.end()) return it->second;
      Mat m = k == 0 ? Mat::identity(sigma.maps[e].rows()) : sigma.maps[e] * get_unlocked(k - 1, e);
      return cache.emplace(std::make_pair(k, e), std::move(m)).first->second;
    }
  };
  auto pw = std::make_shared<Powers>();
  pw->sigma = sigma;
  TabulatedAlgebra::Spec spec;
  spec.truncation = a->truncation();
  for (int d = 0; d <= spec.truncation; ++d) {
    std::vector<std::string> labels;
    std::vector<std::pair<int, int>> blocks;
    for (std::size_t b = 0; b < a->dim(d); ++b) {
      labels.push_back(a->label(d, b));
      blocks.push_back(a->block(d, b));
    }
    spec.labels.push_back(std::move(labels));
    spec.blocks.push_back(std::move(blocks));
  }
  spec.num_blocks = a->num_blocks();
  for (int p = 0; p < a->num_blocks(); ++p) spec.idempotents.push_back(a->idempotent(p));
  spec.product = [a, pw](int d, std::size_t i, int e, std::size_t j) {
    const Mat& s = pw->get(d, e);
    Vec out(a->dim(d + e));
    for (std::size_t k = 0; k < s.rows(); ++k) {
      const Scalar& c = s(k, j);
      if (c.is_zero()) continue;
      la::axpy(out, c, a->product(d, i, e, k));
    }
    return la::sparsify(out);
  };
  spec.name = a->name().empty() ? "" : a->name() + "^sigma";
  return std::make_shared<const TabulatedAlgebra>(std::move(spec));
}

PresentedAlgebra twist_presented(const PresentedAlgebra& a, const std::vector<NcPoly>& images) {
  const auto& gens = a.gens();
  const std::size_t n = gens.size();
  if (images.size() != n) throw std::invalid_argument("twist: one image per generator required");
  // sigma must act linearly on the generator space
  Mat m(n, n);
  for (std::size_t g = 0; g < n; ++g)
    for (const auto& [w, c] : images[g].terms()) {
      if (w.length() != 1 || gens.degree(w[0]) != gens.degree(g))
        throw std::invalid_argument("twist: image of " + gens.name(g) + " is not a combination of generators");
      m(w[0], g) += c;
    }
  auto inv = la::inverse(m);
  if (!inv) throw std::invalid_argument("twist: automorphism is singular on generators");
  auto power = [&](int k) {
    Mat p = Mat::identity(n);
    for (int i = 0; i < k; ++i) p = p * *inv;
    return p;
  };
  auto as_poly = [&](const Mat& p, std::size_t g) {
    std::vector<NcPoly::Term> t;
    for (std::size_t r = 0; r < n; ++r)
      if (!p(r, g).is_zero()) t.emplace_back(Word::letter(gens, r), p(r, g));
    return NcPoly::from_terms(std::move(t));
  };
  // a word x_{i1} x_{i2} ... of A equals x_{i1} * s^{-d1}(x_{i2}) * s^{-(d1+d2)}(x_{i3}) ... in A^sigma
  std::vector<NcPoly> rels;
  for (const auto& r : a.relations()) {
    NcPoly out;
    for (const auto& [w, c] : r.terms()) {
      NcPoly term = NcPoly::constant(c);
      int deg = 0;
      for (std::size_t k = 0; k < w.length(); ++k) {
        term = term * as_poly(power(deg), w[k]);
        deg += gens.degree(w[k]);
      }
      out += term;
    }
    rels.push_back(out);
  }
  return PresentedAlgebra(gens, rels, a.truncation());
}

PresentedAlgebra koszul_dual(const PresentedAlgebra& a) {
  if (!a.is_quadratic()) throw std::invalid_argument("koszul_dual: algebra is not quadratic");
  const auto& gens = a.gens();
  const std::size_t n = gens.size();
  Mat rel(0, n * n);
  for (const auto& r : a.relations()) {
    Vec v(n * n);
    for (const auto& [w, c] : r.terms()) v[w[0] * n + w[1]] += c;
    rel.append_row(v);
  }
  Mat perp = la::kernel_basis(rel);
  if (la::rank(rel) + perp.rows() != n * n) throw std::logic_error("koszul_dual: dimension check failed");

  std::vector<std::string> names;
  std::set<std::string> seen(gens.names().begin(), gens.names().end());
  bool upper_ok = true;
  for (const auto& nm : gens.names()) {
    std::string u = nm;
    for (auto& ch : u) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (u == nm || seen.count(u) || std::find(names.begin(), names.end(), u) != names.end()) upper_ok = false;
    names.push_back(u);
  }
  if (!upper_ok) {
    names.clear();
    for (const auto& nm : gens.names()) names.push_back(nm + "_dual");
  }
  GeneratorSet dual(names, gens.degrees());
  std::vector<NcPoly> rels;
  for (std::size_t k = 0; k < perp.rows(); ++k) {
    std::vector<NcPoly::Term> terms;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!perp(k, i * n + j).is_zero()) terms.emplace_back(Word(dual, {i, j}), perp(k, i * n + j));
    rels.push_back(NcPoly::from_terms(std::move(terms)));
  }
  return PresentedAlgebra(dual, rels, a.truncation());
}

// ---------------------------------------------------------------------------
// finite-dimensional algebras

FiniteDimAlgebra::FiniteDimAlgebra(std::vector<std::string> labels, std::vector<SparseVec> table, Vec unit)
    : labels_(std::move(labels)), table_(std::move(table)), unit_(std::move(unit)) {
  if (table_.size() != labels_.size() * labels_.size() || unit_.size() != labels_.size())
    throw la::DimensionError("finite-dimensional algebra: inconsistent sizes");
}

Vec FiniteDimAlgebra::mul(const Vec& a, const Vec& b) const {
  Vec out(dim());
  for (std::size_t i = 0; i < dim(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < dim(); ++j)
      if (!b[j].is_zero()) la::axpy(out, a[i] * b[j], product(i, j));
  }
  return out;
}

Mat FiniteDimAlgebra::left_matrix(const Vec& a) const {
  Mat m(dim(), dim());
  for (std::size_t j = 0; j < dim(); ++j) {
    Vec e(dim());
    e[j] = 1;
    Vec c = mul(a, e);
    for (std::size_t r = 0; r < dim(); ++r) m(r, j) = c[r];
  }
  return m;
}

Mat FiniteDimAlgebra::right_matrix(const Vec& a) const {
  Mat m(dim(), dim());
  for (std::size_t j = 0; j < dim(); ++j) {
    Vec e(dim());
    e[j] = 1;
    Vec c = mul(e, a);
    for (std::size_t r = 0; r < dim(); ++r) m(r, j) = c[r];
  }
  return m;
}

bool FiniteDimAlgebra::check_associative() const {
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i) {
    Vec e(n);
    e[i] = 1;
    if (mul(unit_, e) != e || mul(e, unit_) != e) return false;
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        Vec l(n), r(n);
        for (const auto& [idx, c] : product(i, j)) la::axpy(l, c, product(idx, k));
        for (const auto& [idx, c] : product(j, k)) la::axpy(r, c, product(i, idx));
        if (l != r) return false;
      }
    }
  return true;
}

FiniteDimAlgebra degree_zero(const TabulatedAlgebra& a) {
  std::size_t n = a.dim(0);
  std::vector<std::string> labels;
  std::vector<SparseVec> table;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(a.label(0, i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) table.push_back(a.product(0, i, 0, j));
  return FiniteDimAlgebra(labels, table, a.unit());
}

FiniteDimAlgebra beilinson(const AlgebraPtr& a, int l) {
  if (l < 1) throw std::invalid_argument("beilinson: l must be >= 1");
  return degree_zero(*quasi_veronese(a, l));
}

std::vector<Vec> center_basis(const FiniteDimAlgebra& f) {
  const std::size_t n = f.dim();
  Mat m(n * n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      for (const auto& [idx, c] : f.product(k, j)) m(j * n + idx, k) += c;
      for (const auto& [idx, c] : f.product(j, k)) m(j * n + idx, k) -= c;
    }
  Mat kb = la::kernel_basis(m);
  std::vector<Vec> out;
  for (std::size_t i = 0; i < kb.rows(); ++i) out.push_back(kb.row(i));
  return out;
}

namespace {

// Rational roots of a monic polynomial with rational coefficients
// (coefficients low to high, leading 1 implied at index size()).
std::optional<std::vector<mpq_class>> rational_roots(const std::vector<mpq_class>& low) {
  const std::size_t m = low.size();
  std::vector<mpq_class> coeffs = low;
  coeffs.push_back(1);
  mpz_class lcm = 1;
  for (const auto& c : coeffs) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
  std::vector<mpz_class> ints;
  for (const auto& c : coeffs) ints.push_back(mpz_class(c * lcm));
  auto eval = [&](const mpq_class& x) {
    mpq_class v = 0;
    for (std::size_t k = coeffs.size(); k-- > 0;) v = v * x + coeffs[k];
    return v;
  };
  std::vector<mpq_class> roots;
  std::size_t zero_mult = 0;
  while (zero_mult < ints.size() && ints[zero_mult] == 0) ++zero_mult;
  if (zero_mult > 1) return std::nullopt;
  if (zero_mult == 1) roots.push_back(0);
  if (m == 2 && zero_mult == 0) {
    mpq_class b = coeffs[1], c = coeffs[0];
    mpq_class disc = b * b - 4 * c;
    if (disc <= 0) return std::nullopt;
    disc.canonicalize();
    if (!mpz_perfect_square_p(disc.get_num_mpz_t()) || !mpz_perfect_square_p(disc.get_den_mpz_t()))
      return std::nullopt;
    mpz_class sn, sd;
    mpz_sqrt(sn.get_mpz_t(), disc.get_num_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), disc.get_den_mpz_t());
    mpq_class s(sn, sd);
    s.canonicalize();
    roots.push_back((-b - s) / 2);
    roots.push_back((-b + s) / 2);
    return roots;
  }
  mpz_class a0 = abs(ints[zero_mult]), an = abs(ints.back());
  const mpz_class limit = 1000000;
  if (a0 > limit || an > limit) return std::nullopt;
  auto divisors = [](long v) {
    std::vector<long> out;
    for (long d = 1; d <= v; ++d)
      if (v % d == 0) out.push_back(d);
    return out;
  };
  for (long p : divisors(a0.get_si()))
    for (long q : divisors(an.get_si()))
      for (int s : {-1, 1}) {
        mpq_class x(s * p, q);
        x.canonicalize();
        if (eval(x) == 0 && std::find(roots.begin(), roots.end(), x) == roots.end()) roots.push_back(x);
      }
  if (roots.size() != m) return std::nullopt;
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace

SemisimpleReport semisimple_type(const FiniteDimAlgebra& f) {
  SemisimpleReport rep;
  const std::size_t n = f.dim();
  rep.dimension = n;
  Vec tr(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t m = 0; m < n; ++m)
      for (const auto& [idx, c] : f.product(k, m))
        if (idx == m) tr[k] += c;
  Mat g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (const auto& [idx, c] : f.product(i, j)) g(i, j) += c * tr[idx];
  rep.radical_dim = n - la::rank(g);
  rep.semisimple = rep.radical_dim == 0;
  auto center = center_basis(f);
  rep.center_dim = center.size();
  if (!rep.semisimple) {
    rep.note = "not semisimple";
    return rep;
  }
  if (center.size() == 1) {
    rep.blocks = std::vector<std::size_t>{n};
    return rep;
  }
  const std::size_t m = center.size();
  for (int trial = 0; trial < 24; ++trial) {
    Vec c(n);
    long long lam = 1;
    for (const auto& z : center) {
      la::axpy(c, Scalar(lam), z);
      lam *= trial + 2;
    }
    // powers of c until dependent
    std::vector<Vec> powers{f.unit()};
    la::RowSpace span(n);
    span.insert(f.unit());
    Vec cur = f.unit();
    while (true) {
      cur = f.mul(cur, c);
      if (!span.insert(cur)) break;
      powers.push_back(cur);
    }
    if (powers.size() != m) continue;
    Mat pm = Mat::from_columns(powers, n);
    auto sol = la::solve(pm, cur);
    std::vector<mpq_class> low;  // x^m - sum sol_i x^i
    for (const auto& s : *sol) low.push_back(-s.to_mpq());
    auto roots = rational_roots(low);
    if (!roots) break;
    std::vector<std::size_t> blocks;
    for (std::size_t k = 0; k < m; ++k) {
      Vec e = f.unit();
      for (std::size_t l = 0; l < m; ++l) {
        if (l == k) continue;
        Vec shifted = c;
        la::axpy(shifted, -Scalar::from_mpq((*roots)[l]), f.unit());
        e = f.mul(e, shifted);
        Scalar denom = Scalar::from_mpq((*roots)[k] - (*roots)[l]);
        for (auto& x : e) x /= denom;
      }
      blocks.push_back(la::rank(f.right_matrix(e)));
    }
    rep.blocks = blocks;
    return rep;
  }
  rep.note = "blocks unresolved over Q";
  return rep;
}

CofA c_of_a(const TabulatedAlgebra& a, const Vec& z) {
  if (!is_central(a, 2, z)) throw std::invalid_argument("c_of_a: z is not central");
  CofA out;
  const int D = a.truncation();
  std::vector<bool> bij;
  for (int i = 0; 2 * i + 2 <= D; ++i) {
    std::size_t r = la::rank(a.right_mult(2, z, 2 * i));
    out.ranks.push_back(r);
    bij.push_back(a.dim(2 * i) == a.dim(2 * i + 2) && r == a.dim(2 * i) && a.dim(2 * i) > 0);
  }
  int i0 = -1;
  for (int i = 0; i < static_cast<int>(bij.size()); ++i)
    if (bij[i]) {
      i0 = i;
      break;
    }
  if (i0 < 0) throw StabilizationError("multiplication by z never becomes bijective up to degree " + std::to_string(D));
  if (4 * i0 > D)
    throw StabilizationError("stabilization at level " + std::to_string(i0) + " needs truncation " +
                             std::to_string(4 * i0));
  for (int i = i0; i < 2 * i0; ++i)
    if (!bij[i]) throw StabilizationError("multiplication by z is not bijective at level " + std::to_string(i));
  out.level = i0;
  const int d0 = 2 * i0;
  Vec zp(a.dim(0));
  zp = a.unit();
  for (int i = 0; i < i0; ++i) zp = a.multiply(2 * i, zp, 2, z);
  Mat zmat = a.right_mult(d0, zp, d0);
  auto zinv = la::inverse(zmat);
  if (!zinv) throw StabilizationError("z^i0 is not invertible on the stabilized slice");
  const std::size_t n = a.dim(d0);
  std::vector<std::string> labels;
  std::vector<SparseVec> table;
  for (std::size_t i = 0; i < n; ++i) labels.push_back(a.label(d0, i));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      table.push_back(la::sparsify(zinv->apply(la::densify(a.product(d0, i, d0, j), a.dim(2 * d0)))));
  out.algebra = FiniteDimAlgebra(labels, table, zp);
  return out;
}

}  // namespace qproj::alg

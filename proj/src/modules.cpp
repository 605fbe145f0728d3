#include "qproj/modules.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qproj::mod {

using la::RowSpace;

// ---------------------------------------------------------------------------
// SpMat

Vec SpMat::apply(const Vec& x) const {
  if (x.size() != cols) throw la::DimensionError("SpMat::apply: length mismatch");
  Vec y = la::zeros(rows);
  for (std::size_t j = 0; j < cols; ++j)
    if (!x[j].is_zero()) la::axpy(y, x[j], columns[j]);
  return y;
}

void SpMat::add_to(Mat& m, const Scalar& c, std::size_t row_off, std::size_t col_off) const {
  for (std::size_t j = 0; j < cols; ++j)
    for (const auto& [i, v] : columns[j]) m(row_off + i, col_off + j) += c * v;
}

namespace {

SpMat zero_spmat(std::size_t rows, std::size_t cols) { return SpMat{rows, cols, std::vector<SparseVec>(cols)}; }

Vec unit_vec(std::size_t n, std::size_t i) {
  Vec v = la::zeros(n);
  v[i] = 1;
  return v;
}

// Indices of the basis of A_k lying in e_p A.
std::vector<std::size_t> summand_indices(const alg::TabulatedAlgebra& a, int p, int k) {
  std::vector<std::size_t> out;
  if (k < 0 || k > a.truncation()) return out;
  for (std::size_t b = 0; b < a.dim(k); ++b)
    if (a.block(k, b).first == p) out.push_back(b);
  return out;
}

// Basis (as columns of the returned vector list) of the column space of m.
std::vector<Vec> column_space(const Mat& m) {
  RowSpace rs(m.rows());
  for (std::size_t c = 0; c < m.cols(); ++c) rs.insert(m.col(c));
  return rs.rows();
}

}  // namespace

// ---------------------------------------------------------------------------
// ModuleData / GradedModule

ModuleData::ModuleData(AlgebraPtr a, int lo, int hi, std::vector<std::size_t> dims, ActionFn action, std::string name)
    : a_(std::move(a)), lo_(lo), hi_(hi), dims_(std::move(dims)), action_(std::move(action)), name_(std::move(name)) {
  if (hi_ >= lo_ && dims_.size() != static_cast<std::size_t>(hi_ - lo_ + 1))
    throw std::invalid_argument("ModuleData: dims do not match the window");
  const int D = a_->truncation();
  for (int d = lo_ - D; d <= hi_; ++d)
    for (int e = 0; e <= D && d + e <= hi_; ++e) slots_.emplace(std::make_pair(d, e), std::make_unique<Slot>());
}

std::size_t ModuleData::dim(int d) const {
  if (d < lo_) return 0;
  if (d > hi_) throw WindowError("module " + name_ + ": degree " + std::to_string(d) + " above window");
  return dims_[d - lo_];
}

const SpMat& ModuleData::action(int d, int e, std::size_t b) const {
  auto it = slots_.find({d, e});
  if (it == slots_.end())
    throw WindowError("module " + name_ + ": action " + std::to_string(d) + "+" + std::to_string(e) +
                      " outside window");
  Slot& s = *it->second;
  std::call_once(s.once, [&] {
    const std::size_t n = a_->dim(e);
    s.mats.reserve(n);
    for (std::size_t c = 0; c < n; ++c) {
      if (d < lo_ || dim(d) == 0) {
        s.mats.push_back(zero_spmat(dim(d + e), dim(d)));
      } else {
        SpMat m = action_(d, e, c);
        if (m.rows != dim(d + e) || m.cols != dim(d) || m.columns.size() != m.cols)
          throw std::logic_error("module " + name_ + ": action matrix has the wrong shape");
        s.mats.push_back(std::move(m));
      }
    }
  });
  return s.mats.at(b);
}

Mat GradedModule::action_by(int d, int e, const Vec& a) const {
  Mat m(dim(d + e), dim(d));
  for (std::size_t b = 0; b < a.size(); ++b)
    if (!a[b].is_zero()) action(d, e, b).add_to(m, a[b]);
  return m;
}

Vec GradedModule::act(int d, const Vec& m, int e, const Vec& a) const {
  Vec out = la::zeros(dim(d + e));
  if (dim(d) == 0) return out;
  for (std::size_t b = 0; b < a.size(); ++b) {
    if (a[b].is_zero()) continue;
    const SpMat& s = action(d, e, b);
    for (std::size_t j = 0; j < s.cols; ++j)
      if (!m[j].is_zero()) la::axpy(out, a[b] * m[j], s.columns[j]);
  }
  return out;
}

std::string GradedModule::name() const {
  if (shift_ == 0) return data_->name();
  return data_->name() + "(" + std::to_string(shift_) + ")";
}

std::vector<long long> GradedModule::dims(int from, int to) const {
  std::vector<long long> out;
  for (int d = from; d <= to; ++d) out.push_back(static_cast<long long>(dim(d)));
  return out;
}

bool GradedModule::is_zero_in_window() const {
  for (int d = lo(); d <= hi(); ++d)
    if (dim(d) != 0) return false;
  return true;
}

GradedModule shift(const GradedModule& m, int n) { return GradedModule(m.data(), m.shift() + n); }

Mat ModuleMap::at(int d) const {
  auto it = mats.find(d);
  if (it != mats.end()) return it->second;
  if (d > hi) throw WindowError("module map: degree " + std::to_string(d) + " above window");
  return Mat(target.dim(d), source.dim(d));
}

// ---------------------------------------------------------------------------
// constructions

GradedModule free_module(const AlgebraPtr& a, const std::vector<FreeGen>& gens, int hi) {
  const int D = a->truncation();
  int lo = 0;
  if (!gens.empty()) {
    lo = gens[0].degree;
    int cap = gens[0].degree + D;
    for (const auto& g : gens) {
      if (g.idem < 0 || g.idem >= a->num_blocks()) throw std::invalid_argument("free_module: bad idempotent");
      lo = std::min(lo, g.degree);
      cap = std::min(cap, g.degree + D);
    }
    hi = std::min(hi, cap);
  }
  struct Layout {
    std::vector<std::vector<std::size_t>> offsets;  // [d-lo][j]
    std::vector<std::vector<std::vector<std::size_t>>> idx;  // [d-lo][j]: A-indices
    std::vector<std::vector<long>> pos;  // [k][b]: position of b within its e_p A_k
  };
  auto lay = std::make_shared<Layout>();
  std::vector<std::size_t> dims;
  for (int d = lo; d <= hi; ++d) {
    std::vector<std::size_t> off;
    std::vector<std::vector<std::size_t>> idx;
    std::size_t total = 0;
    for (const auto& g : gens) {
      off.push_back(total);
      idx.push_back(summand_indices(*a, g.idem, d - g.degree));
      total += idx.back().size();
    }
    lay->offsets.push_back(std::move(off));
    lay->idx.push_back(std::move(idx));
    dims.push_back(total);
  }
  for (int k = 0; k <= D; ++k) {
    std::vector<long> pos(a->dim(k), -1);
    std::vector<long> count(a->num_blocks(), 0);
    for (std::size_t b = 0; b < a->dim(k); ++b) pos[b] = count[a->block(k, b).first]++;
    lay->pos.push_back(std::move(pos));
  }
  auto action = [a, gens, lay, lo](int d, int e, std::size_t b) {
    const auto& off_s = lay->offsets[d - lo];
    const auto& off_t = lay->offsets[d + e - lo];
    const auto& idx = lay->idx[d - lo];
    std::size_t cols = 0, rows = 0;
    for (std::size_t j = 0; j < gens.size(); ++j) {
      cols += idx[j].size();
      rows += lay->idx[d + e - lo][j].size();
    }
    SpMat m = zero_spmat(rows, cols);
    for (std::size_t j = 0; j < gens.size(); ++j) {
      const int k = d - gens[j].degree;
      for (std::size_t c = 0; c < idx[j].size(); ++c) {
        const SparseVec& prod = a->product(k, idx[j][c], e, b);
        SparseVec& col = m.columns[off_s[j] + c];
        for (const auto& [i, v] : prod) {
          if (a->block(k + e, i).first != gens[j].idem) throw std::logic_error("free_module: product leaves e_p A");
          col.emplace_back(static_cast<std::uint32_t>(off_t[j] + lay->pos[k + e][i]), v);
        }
      }
    }
    return m;
  };
  std::ostringstream nm;
  nm << "F[";
  for (std::size_t j = 0; j < gens.size(); ++j) nm << (j ? "," : "") << gens[j].degree << ":" << gens[j].idem;
  nm << "]";
  return GradedModule(std::make_shared<ModuleData>(a, lo, hi, std::move(dims), action, nm.str()));
}

GradedModule regular_module(const AlgebraPtr& a) {
  std::vector<FreeGen> gens;
  for (int p = 0; p < a->num_blocks(); ++p) gens.push_back({0, p});
  return free_module(a, gens, a->truncation());
}

GradedModule degree_zero_module(const AlgebraPtr& a, int hi) {
  std::vector<std::size_t> dims(std::max(hi + 1, 1), 0);
  dims[0] = a->dim(0);
  auto action = [a](int d, int e, std::size_t b) {
    const std::size_t n0 = a->dim(0);
    if (d != 0) return zero_spmat(0, 0);
    if (e != 0) return zero_spmat(0, n0);
    SpMat m = zero_spmat(n0, n0);
    for (std::size_t c = 0; c < n0; ++c) m.columns[c] = a->product(0, c, 0, b);
    return m;
  };
  return GradedModule(std::make_shared<ModuleData>(a, 0, std::max(hi, 0), std::move(dims), action, "A0"));
}

GradedModule zero_module(const AlgebraPtr& a, int lo, int hi) {
  std::vector<std::size_t> dims(hi >= lo ? hi - lo + 1 : 0, 0);
  auto action = [](int, int, std::size_t) { return zero_spmat(0, 0); };
  return GradedModule(std::make_shared<ModuleData>(a, lo, hi, std::move(dims), action, "0"));
}

GradedModule direct_sum(const std::vector<GradedModule>& parts) {
  if (parts.empty()) throw std::invalid_argument("direct_sum: no summands");
  const AlgebraPtr& a = parts[0].algebra();
  int lo = parts[0].lo(), hi = parts[0].hi();
  std::string name;
  for (const auto& p : parts) {
    if (p.algebra() != a) throw std::invalid_argument("direct_sum: summands over different algebras");
    lo = std::min(lo, p.lo());
    hi = std::min(hi, p.hi());
    name += (name.empty() ? "" : "+") + p.name();
  }
  std::vector<std::size_t> dims;
  for (int d = lo; d <= hi; ++d) {
    std::size_t t = 0;
    for (const auto& p : parts) t += p.dim(d);
    dims.push_back(t);
  }
  auto action = [parts](int d, int e, std::size_t b) {
    std::size_t rows = 0, cols = 0;
    for (const auto& p : parts) {
      rows += p.dim(d + e);
      cols += p.dim(d);
    }
    SpMat m = zero_spmat(rows, cols);
    std::size_t ro = 0, co = 0;
    for (const auto& p : parts) {
      if (p.dim(d) > 0) {
        const SpMat& s = p.action(d, e, b);
        for (std::size_t j = 0; j < s.cols; ++j)
          for (const auto& [i, v] : s.columns[j]) m.columns[co + j].emplace_back(static_cast<std::uint32_t>(ro + i), v);
      }
      ro += p.dim(d + e);
      co += p.dim(d);
    }
    return m;
  };
  return GradedModule(std::make_shared<ModuleData>(a, lo, hi, std::move(dims), action, "(" + name + ")"));
}

GradedModule twist_by_auto(const GradedModule& m, const alg::GradedAutomorphism& nu) {
  const AlgebraPtr& a = m.algebra();
  if (nu.maps.size() < static_cast<std::size_t>(a->truncation() + 1))
    throw std::invalid_argument("twist_by_auto: automorphism does not cover the truncation");
  std::vector<std::size_t> dims;
  for (int d = m.lo(); d <= m.hi(); ++d) dims.push_back(m.dim(d));
  auto action = [m, nu](int d, int e, std::size_t b) {
    Mat t(m.dim(d + e), m.dim(d));
    const Mat& ne = nu.maps[e];
    for (std::size_t c = 0; c < ne.rows(); ++c)
      if (!ne(c, b).is_zero()) m.action(d, e, c).add_to(t, ne(c, b));
    SpMat s = zero_spmat(t.rows(), t.cols());
    for (std::size_t j = 0; j < t.cols(); ++j) s.columns[j] = la::sparsify(t.col(j));
    return s;
  };
  return GradedModule(std::make_shared<ModuleData>(a, m.lo(), m.hi(), std::move(dims), action, m.name() + "_nu"));
}

Vec free_element(const AlgebraPtr& a, const std::vector<FreeGen>& gens, int d, const std::vector<Vec>& parts) {
  Vec out;
  for (std::size_t j = 0; j < gens.size(); ++j) {
    const int k = d - gens[j].degree;
    const auto idx = summand_indices(*a, gens[j].idem, k);
    const Vec& part = parts.at(j);
    if (k >= 0 && k <= a->truncation() && part.size() != a->dim(k))
      throw la::DimensionError("free_element: part has the wrong length");
    std::vector<bool> inside(part.size(), false);
    for (auto i : idx) {
      out.push_back(part[i]);
      inside[i] = true;
    }
    for (std::size_t i = 0; i < part.size(); ++i)
      if (!inside[i] && !part[i].is_zero()) throw std::invalid_argument("free_element: part not in e_p A");
  }
  return out;
}

std::vector<Vec> split_free_element(const AlgebraPtr& a, const std::vector<FreeGen>& gens, int d, const Vec& v) {
  std::vector<Vec> out;
  std::size_t pos = 0;
  for (const auto& g : gens) {
    const int k = d - g.degree;
    Vec part = la::zeros(k >= 0 && k <= a->truncation() ? a->dim(k) : 0);
    for (auto i : summand_indices(*a, g.idem, k)) part[i] = v.at(pos++);
    out.push_back(std::move(part));
  }
  if (pos != v.size()) throw la::DimensionError("split_free_element: length mismatch");
  return out;
}

ModuleMap map_from_generators(const GradedModule& free, const std::vector<FreeGen>& gens, const GradedModule& target,
                              const std::vector<Vec>& images) {
  if (images.size() != gens.size()) throw std::invalid_argument("map_from_generators: one image per generator");
  const AlgebraPtr& a = free.algebra();
  ModuleMap f{free, target, std::min(free.lo(), target.lo()), std::min(free.hi(), target.hi()), {}};
  for (int d = f.lo; d <= f.hi; ++d) {
    Mat m(target.dim(d), free.dim(d));
    std::size_t col = 0;
    for (std::size_t j = 0; j < gens.size(); ++j) {
      const int s = gens[j].degree;
      const auto idx = summand_indices(*a, gens[j].idem, d - s);
      if (s >= target.lo() && target.dim(s) > 0) {
        for (std::size_t c = 0; c < idx.size(); ++c) {
          Vec img = target.action(s, d - s, idx[c]).apply(images[j]);
          for (std::size_t r = 0; r < img.size(); ++r) m(r, col + c) = img[r];
        }
      }
      col += idx.size();
    }
    f.mats.emplace(d, std::move(m));
  }
  return f;
}

Kernel kernel(const ModuleMap& f) {
  const GradedModule& src = f.source;
  const int lo = src.lo();
  const int hi = std::min(src.hi(), f.hi);
  struct Data {
    std::map<int, Mat> basis;
    std::map<int, std::vector<std::size_t>> free;
  };
  auto data = std::make_shared<Data>();
  std::vector<std::size_t> dims;
  for (int d = lo; d <= hi; ++d) {
    Mat fd = f.at(d);
    Mat kb = la::kernel_basis(fd);  // rows
    std::vector<std::size_t> fr;
    if (fd.rows() == 0) {
      fr.resize(fd.cols());
      std::iota(fr.begin(), fr.end(), 0);
    } else {
      auto piv = la::rref(fd).pivots;
      std::vector<bool> is_piv(fd.cols(), false);
      for (auto p : piv) is_piv[p] = true;
      for (std::size_t c = 0; c < fd.cols(); ++c)
        if (!is_piv[c]) fr.push_back(c);
    }
    data->basis.emplace(d, kb.transpose());
    data->free.emplace(d, std::move(fr));
    dims.push_back(kb.rows());
  }
  auto action = [src, data](int d, int e, std::size_t b) {
    const Mat& bs = data->basis.at(d);
    const auto& fr = data->free.at(d + e);
    SpMat m = zero_spmat(fr.size(), bs.cols());
    const SpMat& s = src.action(d, e, b);
    for (std::size_t j = 0; j < bs.cols(); ++j) {
      Vec w = s.apply(bs.col(j));
      Vec c(fr.size());
      for (std::size_t t = 0; t < fr.size(); ++t) c[t] = w[fr[t]];
      m.columns[j] = la::sparsify(c);
    }
    return m;
  };
  Kernel k;
  k.module = GradedModule(std::make_shared<ModuleData>(src.algebra(), lo, hi, std::move(dims), action,
                                                       "ker(" + src.name() + ")"));
  k.basis = data->basis;
  return k;
}

GradedModule cokernel(const ModuleMap& f) {
  const GradedModule& tgt = f.target;
  const int lo = tgt.lo();
  const int hi = std::min(tgt.hi(), f.hi);
  struct Data {
    std::map<int, RowSpace> image;
    std::map<int, std::vector<std::size_t>> free;
  };
  auto data = std::make_shared<Data>();
  std::vector<std::size_t> dims;
  for (int d = lo; d <= hi; ++d) {
    Mat fd = f.at(d);
    RowSpace rs(tgt.dim(d));
    for (std::size_t c = 0; c < fd.cols(); ++c) rs.insert(fd.col(c));
    auto fr = rs.free_columns();
    dims.push_back(fr.size());
    data->image.emplace(d, std::move(rs));
    data->free.emplace(d, std::move(fr));
  }
  auto action = [tgt, data](int d, int e, std::size_t b) {
    const auto& fs = data->free.at(d);
    const auto& ft = data->free.at(d + e);
    const RowSpace& rs = data->image.at(d + e);
    const SpMat& s = tgt.action(d, e, b);
    SpMat m = zero_spmat(ft.size(), fs.size());
    for (std::size_t j = 0; j < fs.size(); ++j) {
      Vec w = la::densify(s.columns[fs[j]], s.rows);
      rs.reduce(w);
      Vec c(ft.size());
      for (std::size_t t = 0; t < ft.size(); ++t) c[t] = w[ft[t]];
      m.columns[j] = la::sparsify(c);
    }
    return m;
  };
  return GradedModule(
      std::make_shared<ModuleData>(tgt.algebra(), lo, hi, std::move(dims), action, "coker(" + tgt.name() + ")"));
}

ModuleMap compose(const ModuleMap& g, const ModuleMap& f) {
  ModuleMap h{f.source, g.target, std::max(f.lo, g.lo), std::min(f.hi, g.hi), {}};
  for (int d = h.lo; d <= h.hi; ++d) h.mats.emplace(d, g.at(d) * f.at(d));
  return h;
}

GradedModule module_from_presentation(const AlgebraPtr& a, const Presentation& p, int hi) {
  if (p.matrix.size() != p.f0.size()) throw std::invalid_argument("presentation: one matrix row per F0 generator");
  GradedModule f0 = free_module(a, p.f0, hi);
  GradedModule f1 = free_module(a, p.f1, f0.hi());
  std::vector<Vec> images;
  for (std::size_t j = 0; j < p.f1.size(); ++j) {
    std::vector<Vec> parts;
    for (std::size_t i = 0; i < p.f0.size(); ++i) {
      if (p.matrix[i].size() != p.f1.size()) throw std::invalid_argument("presentation: ragged matrix");
      const int k = p.f1[j].degree - p.f0[i].degree;
      Vec part = p.matrix[i][j];
      if (k < 0 || k > a->truncation()) {
        if (!la::is_zero(part)) throw std::invalid_argument("presentation: entry of impossible degree");
        part = {};
      } else if (part.empty()) {
        part = la::zeros(a->dim(k));
      }
      parts.push_back(std::move(part));
    }
    images.push_back(free_element(a, p.f0, p.f1[j].degree, parts));
  }
  return cokernel(map_from_generators(f1, p.f1, f0, images));
}

// ---------------------------------------------------------------------------
// generators

namespace {

struct GenData {
  std::vector<Generator> gens;
  std::map<int, std::vector<Vec>> radical;  // basis of the radical part R_d
};

GenData generator_data(const GradedModule& m) {
  const AlgebraPtr& a = m.algebra();
  GenData out;
  for (int d = m.lo(); d <= m.hi(); ++d) {
    const std::size_t n = m.dim(d);
    if (n == 0) continue;
    RowSpace rs(n);
    for (int e : a->generator_degrees()) {
      if (d - e < m.lo() || e > a->truncation()) continue;
      if (m.dim(d - e) == 0) continue;
      for (std::size_t b = 0; b < a->dim(e) && rs.dim() < n; ++b) {
        const SpMat& s = m.action(d - e, e, b);
        for (std::size_t j = 0; j < s.cols && rs.dim() < n; ++j) rs.insert(la::densify(s.columns[j], n));
      }
    }
    for (const Vec& r : a->radical_degree0()) {
      Mat rm = m.action_by(d, 0, r);
      for (std::size_t j = 0; j < rm.cols() && rs.dim() < n; ++j) rs.insert(rm.col(j));
    }
    out.radical.emplace(d, rs.rows());
    for (int p = 0; p < a->num_blocks() && rs.dim() < n; ++p) {
      Mat ep = m.action_by(d, 0, a->idempotent(p));
      for (std::size_t j = 0; j < ep.cols() && rs.dim() < n; ++j) {
        Vec v = ep.col(j);
        if (la::is_zero(v)) continue;
        if (rs.insert(v)) out.gens.push_back({d, p, std::move(v)});
      }
    }
  }
  return out;
}

}  // namespace

std::vector<Generator> minimal_generators(const GradedModule& m) { return generator_data(m).gens; }

std::vector<FreeGen> free_gens(const std::vector<Generator>& g) {
  std::vector<FreeGen> out;
  for (const auto& x : g) out.push_back({x.degree, x.idem});
  return out;
}

Cover minimal_free_cover(const GradedModule& m) {
  Cover c;
  c.gens = minimal_generators(m);
  auto fg = free_gens(c.gens);
  c.free = free_module(m.algebra(), fg, m.hi());
  std::vector<Vec> images;
  for (const auto& g : c.gens) images.push_back(g.coords);
  c.map = map_from_generators(c.free, fg, m, images);
  return c;
}

GradedModule syzygy(const GradedModule& m) { return kernel(minimal_free_cover(m).map).module; }

Resolution resolve(const GradedModule& m, int h) {
  const AlgebraPtr& a = m.algebra();
  Resolution r;
  r.module = m;
  r.syzygies.push_back(m);
  r.hi = m.hi();
  GradedModule cur = m;
  for (int q = 0; q <= h; ++q) {
    Cover c = minimal_free_cover(cur);
    auto fg = free_gens(c.gens);
    std::vector<std::vector<Vec>> diff;
    if (q >= 1) {
      const Kernel& k = r.kernels[q - 1];
      for (const auto& g : c.gens) {
        Vec amb = k.basis.at(g.degree).apply(g.coords);
        diff.push_back(split_free_element(a, r.gens[q - 1], g.degree, amb));
      }
    }
    r.gens.push_back(fg);
    r.differential.push_back(std::move(diff));
    r.free.push_back(c.free);
    Kernel k = kernel(c.map);
    r.covers.push_back(std::move(c.map));
    r.syzygies.push_back(k.module);
    r.hi = k.module.hi();
    const bool zero = k.module.is_zero_in_window();
    r.kernels.push_back(std::move(k));
    if (zero) {
      r.terminated = true;
      break;
    }
    cur = r.syzygies.back();
  }
  return r;
}

Resolution pad_resolution(const Resolution& r, int q, FreeGen extra) {
  if (q < 0 || q + 1 > r.length()) throw std::invalid_argument("pad_resolution: position outside the resolution");
  const AlgebraPtr& a = r.module.algebra();
  auto dim_or_zero = [&](int k) { return (k >= 0 && k <= a->truncation()) ? a->dim(k) : std::size_t{0}; };
  Resolution p = r;
  // F_q gains generator jn; its image in F_{q-1} is zero
  p.gens[q].push_back(extra);
  if (q >= 1)
    p.differential[q].push_back([&] {
      std::vector<Vec> parts;
      for (const auto& g : p.gens[q - 1]) parts.push_back(la::zeros(dim_or_zero(extra.degree - g.degree)));
      return parts;
    }());
  // existing generators of F_{q+1} have zero component on jn
  for (std::size_t k = 0; k < p.differential[q + 1].size(); ++k)
    p.differential[q + 1][k].push_back(la::zeros(dim_or_zero(p.gens[q + 1][k].degree - extra.degree)));
  // F_{q+1} gains a generator mapping identically onto jn
  std::vector<Vec> parts;
  for (const auto& g : p.gens[q]) parts.push_back(la::zeros(dim_or_zero(extra.degree - g.degree)));
  parts.back() = a->idempotent(extra.idem);
  p.gens[q + 1].push_back(extra);
  p.differential[q + 1].push_back(std::move(parts));
  if (q + 2 <= p.length())
    for (std::size_t k = 0; k < p.differential[q + 2].size(); ++k)
      p.differential[q + 2][k].push_back(la::zeros(dim_or_zero(p.gens[q + 2][k].degree - extra.degree)));
  return p;
}

bool euler_identity_holds(const Resolution& r) {
  const int L = r.length();
  const GradedModule& last = r.syzygies.back();
  for (int d = r.module.lo(); d <= last.hi(); ++d) {
    long long lhs = 0;
    for (int q = 0; q <= L; ++q) lhs += (q % 2 ? -1 : 1) * static_cast<long long>(r.free[q].dim(d));
    long long rhs = static_cast<long long>(r.module.dim(d)) + (L % 2 ? -1 : 1) * static_cast<long long>(last.dim(d));
    if (lhs != rhs) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Hom and Ext

namespace {

struct Cochains {
  std::vector<std::vector<Vec>> bases;  // per generator: basis of N_{s+i} e_p
  std::size_t dim = 0;
  bool computable = true;
};

Cochains cochains(const std::vector<FreeGen>& gens, const GradedModule& n, int i) {
  const AlgebraPtr& a = n.algebra();
  Cochains c;
  for (const auto& g : gens) {
    const int d = g.degree + i;
    if (d > n.hi()) {
      c.computable = false;
      c.bases.emplace_back();
      continue;
    }
    if (n.dim(d) == 0) {
      c.bases.emplace_back();
      continue;
    }
    std::vector<Vec> b =
        a->num_blocks() == 1 ? column_space(Mat::identity(n.dim(d))) : column_space(n.action_by(d, 0, a->idempotent(g.idem)));
    c.dim += b.size();
    c.bases.push_back(std::move(b));
  }
  return c;
}

// delta: C^q -> C^{q+1} in domain coordinates and ambient target coordinates,
// keeping only the target generators whose degree is within the window.
struct Coboundary {
  Mat m;
  bool complete = true;
};

Coboundary coboundary(const Resolution& r, const GradedModule& n, int q, int i, const Cochains& dom) {
  Coboundary out;
  const auto& src = r.gens[q];
  const auto& tgt = r.gens[q + 1];
  std::vector<std::size_t> row_off;
  std::size_t rows = 0;
  for (const auto& t : tgt) {
    row_off.push_back(rows);
    if (t.degree + i > n.hi()) {
      out.complete = false;
      continue;
    }
    rows += n.dim(t.degree + i);
  }
  out.m = Mat(rows, dom.dim);
  std::size_t col = 0;
  for (std::size_t j = 0; j < src.size(); ++j) {
    const auto& basis = dom.bases[j];
    for (std::size_t k = 0; k < tgt.size(); ++k) {
      if (tgt[k].degree + i > n.hi() || basis.empty()) continue;
      const Vec& rjk = r.differential[q + 1][k][j];
      if (rjk.empty() || la::is_zero(rjk)) continue;
      const int e = tgt[k].degree - src[j].degree;
      for (std::size_t c = 0; c < basis.size(); ++c) {
        Vec img = n.act(src[j].degree + i, basis[c], e, rjk);
        for (std::size_t t = 0; t < img.size(); ++t) out.m(row_off[k] + t, col + c) += img[t];
      }
    }
    col += basis.size();
  }
  return out;
}

}  // namespace

ExtRow ext_dim(const Resolution& r, const GradedModule& n, int q, int i) {
  ExtRow row{i, 0, true};
  if (q < 0) throw std::invalid_argument("ext_dim: negative q");
  if (q > r.length()) {
    row.certified = r.terminated;
    return row;
  }
  Cochains cq = cochains(r.gens[q], n, i);
  row.certified = cq.computable;
  std::size_t ker = cq.dim;
  if (q + 1 <= r.length()) {
    Coboundary b = coboundary(r, n, q, i, cq);
    row.certified = row.certified && b.complete;
    ker = cq.dim - la::rank(b.m);
  } else if (!r.terminated) {
    row.certified = false;
  }
  std::size_t im = 0;
  if (q >= 1) {
    Cochains cp = cochains(r.gens[q - 1], n, i);
    im = la::rank(coboundary(r, n, q - 1, i, cp).m);
  }
  row.dim = ker - im;
  return row;
}

std::vector<ExtRow> ext_table(const Resolution& r, const GradedModule& n, int q, int from, int to) {
  std::vector<ExtRow> out;
  for (int i = from; i <= to; ++i) out.push_back(ext_dim(r, n, q, i));
  return out;
}

HomSpace hom_space(const Resolution& r, const GradedModule& n, int i) {
  HomSpace h;
  h.degree = i;
  Cochains c0 = cochains(r.gens[0], n, i);
  h.certified = c0.computable;
  Mat kb;
  if (r.length() >= 1) {
    Coboundary b = coboundary(r, n, 0, i, c0);
    h.certified = h.certified && b.complete;
    kb = la::kernel_basis(b.m);
  } else {
    h.certified = h.certified && r.terminated;
    kb = Mat::identity(c0.dim);
  }
  for (std::size_t l = 0; l < kb.rows(); ++l) {
    std::vector<Vec> images;
    std::size_t pos = 0;
    for (std::size_t j = 0; j < r.gens[0].size(); ++j) {
      const int d = r.gens[0][j].degree + i;
      Vec v = la::zeros(d <= n.hi() ? n.dim(d) : 0);
      for (const Vec& bv : c0.bases[j]) la::axpy(v, kb(l, pos++), bv);
      images.push_back(std::move(v));
    }
    h.basis.push_back(std::move(images));
  }
  return h;
}

ModuleMap hom_map(const Resolution& r, const GradedModule& n, int i, const std::vector<Vec>& images) {
  const GradedModule& m = r.module;
  const AlgebraPtr& a = m.algebra();
  GradedModule tgt = shift(n, i);
  const ModuleMap& cover = r.covers.at(0);
  const auto& gens = r.gens[0];
  ModuleMap f{m, tgt, m.lo(), std::min({m.hi(), tgt.hi(), cover.hi}), {}};
  for (int d = f.lo; d <= f.hi; ++d) {
    Mat out(tgt.dim(d), m.dim(d));
    Mat cd = cover.at(d);
    for (std::size_t u = 0; u < m.dim(d); ++u) {
      auto x = la::solve(cd, unit_vec(m.dim(d), u));
      if (!x) throw std::logic_error("hom_map: cover is not surjective");
      auto parts = split_free_element(a, gens, d, *x);
      Vec img = la::zeros(tgt.dim(d));
      for (std::size_t j = 0; j < gens.size(); ++j) {
        if (la::is_zero(parts[j]) || images[j].empty()) continue;
        la::axpy(img, 1, n.act(gens[j].degree + i, images[j], d - gens[j].degree, parts[j]));
      }
      for (std::size_t t = 0; t < img.size(); ++t) out(t, u) = img[t];
    }
    f.mats.emplace(d, std::move(out));
  }
  return f;
}

std::vector<ExtRow> hom_table(const GradedModule& m, const GradedModule& n, int from, int to) {
  return ext_table(resolve(m, 1), n, 0, from, to);
}

McmVerdict mcm_check(const GradedModule& m, int h) {
  const AlgebraPtr& a = m.algebra();
  GradedModule reg = regular_module(a);
  Resolution r = resolve(m, h + 1);
  McmVerdict v;
  v.mcm = true;
  for (int q = 1; q <= h && q <= r.length(); ++q) {
    if (r.gens[q].empty()) continue;
    int smin = r.gens[q][0].degree, smax = smin;
    for (const auto& g : r.gens[q]) {
      smin = std::min(smin, g.degree);
      smax = std::max(smax, g.degree);
    }
    std::vector<ExtRow> bad;
    for (int i = -smax; i <= a->truncation() - smin; ++i) {
      ExtRow row = ext_dim(r, reg, q, i);
      if (row.certified && row.dim != 0) bad.push_back(row);
    }
    if (!bad.empty()) {
      v.mcm = false;
      v.nonzero.emplace_back(q, std::move(bad));
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// isomorphism

namespace {

// Sparse multivariate polynomial: exponent vector -> coefficient.
using MPoly = std::map<std::vector<int>, Scalar>;

MPoly mpoly_mul(const MPoly& x, const MPoly& y) {
  MPoly out;
  for (const auto& [ex, cx] : x)
    for (const auto& [ey, cy] : y) {
      std::vector<int> e(ex.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ex[i] + ey[i];
      Scalar& c = out[e];
      c += cx * cy;
      if (c.is_zero()) out.erase(e);
    }
  return out;
}

void mpoly_add(MPoly& x, const MPoly& y, const Scalar& s) {
  for (const auto& [e, c] : y) {
    Scalar& t = x[e];
    t += s * c;
    if (t.is_zero()) x.erase(e);
  }
}

// Leibniz expansion of the determinant of a matrix of polynomials.
MPoly mpoly_det(const std::vector<std::vector<MPoly>>& m, std::size_t nvars) {
  const std::size_t n = m.size();
  MPoly total;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    MPoly term{{std::vector<int>(nvars, 0), Scalar(1)}};
    for (std::size_t i = 0; i < n && !term.empty(); ++i) term = mpoly_mul(term, m[i][perm[i]]);
    if (term.empty()) continue;
    int inv = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inv;
    mpoly_add(total, term, inv % 2 ? Scalar(-1) : Scalar(1));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

Scalar mpoly_eval(const MPoly& p, const std::vector<long long>& x) {
  Scalar s = 0;
  for (const auto& [e, c] : p) {
    Scalar t = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) t *= Scalar(x[i]);
    s += t;
  }
  return s;
}

// Coordinates of v in the generator basis of degree d modulo the radical part.
Vec generator_coords(const GenData& g, int d, const Vec& v) {
  std::vector<Vec> cols;
  std::size_t ng = 0;
  for (const auto& x : g.gens)
    if (x.degree == d) {
      cols.push_back(x.coords);
      ++ng;
    }
  auto it = g.radical.find(d);
  if (it != g.radical.end())
    for (const auto& r : it->second) cols.push_back(r);
  if (cols.empty()) return {};
  auto x = la::solve(Mat::from_columns(cols, v.size()), v);
  if (!x) throw std::logic_error("generator_coords: vector outside the module");
  return Vec(x->begin(), x->begin() + static_cast<long>(ng));
}

}  // namespace

IsoVerdict is_isomorphic(const GradedModule& m, const GradedModule& n) {
  IsoVerdict v;
  if (m.algebra() != n.algebra()) throw std::invalid_argument("is_isomorphic: modules over different algebras");
  const int lo = std::min(m.lo(), n.lo());
  const int hi = std::min(m.hi(), n.hi());
  for (int d = lo; d <= hi; ++d)
    if (m.dim(d) != n.dim(d)) {
      v.reason = "Hilbert series differ in degree " + std::to_string(d);
      return v;
    }
  GenData gm = generator_data(m), gn = generator_data(n);
  auto key = [](const std::vector<Generator>& g) {
    std::vector<std::pair<int, int>> k;
    for (const auto& x : g) k.emplace_back(x.degree, x.idem);
    std::sort(k.begin(), k.end());
    return k;
  };
  if (key(gm.gens) != key(gn.gens)) {
    v.reason = "generator degrees differ";
    return v;
  }
  Resolution rm = resolve(m, 1), rn = resolve(n, 1);
  HomSpace h = hom_space(rm, n, 0);
  v.hom_dim = h.basis.size();
  v.hom_dim_back = hom_space(rn, m, 0).basis.size();
  if (!h.certified) {
    v.conclusive = false;
    v.reason = "degree-0 Hom not certified in the window";
    return v;
  }
  if (gm.gens.empty()) {
    v.isomorphic = true;
    v.reason = "both modules vanish in the window";
    v.witness = std::vector<long long>{};
    return v;
  }
  if (h.basis.empty()) {
    v.reason = "no nonzero degree-0 maps";
    return v;
  }
  // induced maps on generator spaces, grouped by (degree, idempotent)
  const std::size_t k = h.basis.size();
  std::map<std::pair<int, int>, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> blocks;
  for (std::size_t j = 0; j < gm.gens.size(); ++j) blocks[{gm.gens[j].degree, gm.gens[j].idem}].first.push_back(j);
  std::map<int, std::vector<std::size_t>> n_pos;  // position of N generators within their degree
  for (std::size_t j = 0; j < gn.gens.size(); ++j) {
    blocks[{gn.gens[j].degree, gn.gens[j].idem}].second.push_back(n_pos[gn.gens[j].degree].size());
    n_pos[gn.gens[j].degree].push_back(j);
  }
  std::vector<MPoly> dets;
  for (const auto& [bk, idx] : blocks) {
    const auto& [src, tgt] = idx;
    if (src.size() > 8) {
      v.conclusive = false;
      v.reason = "generator block too large for the determinant expansion";
      return v;
    }
    std::vector<std::vector<MPoly>> mat(tgt.size(), std::vector<MPoly>(src.size()));
    for (std::size_t l = 0; l < k; ++l) {
      std::vector<int> ex(k, 0);
      ex[l] = 1;
      for (std::size_t c = 0; c < src.size(); ++c) {
        Vec coords = generator_coords(gn, bk.first, h.basis[l][src[c]]);
        for (std::size_t r = 0; r < tgt.size(); ++r)
          if (!coords[tgt[r]].is_zero()) mat[r][c][ex] += coords[tgt[r]];
      }
    }
    MPoly det = mpoly_det(mat, k);
    if (det.empty()) {
      v.reason = "every degree-0 map is singular on the generators of degree " + std::to_string(bk.first);
      return v;
    }
    dets.push_back(std::move(det));
  }
  // witness on the grid {0..g}^k in order of increasing height
  std::size_t g = 0;
  for (const auto& [bk, idx] : blocks) g += idx.first.size();
  std::vector<long long> x(k, 0);
  std::function<bool(std::size_t, long long)> search = [&](std::size_t pos, long long budget) -> bool {
    if (pos == k) {
      if (budget != 0) return false;
      for (const auto& d : dets)
        if (mpoly_eval(d, x).is_zero()) return false;
      return true;
    }
    for (long long t = 0; t <= std::min<long long>(budget, static_cast<long long>(g)); ++t) {
      x[pos] = t;
      if (search(pos + 1, budget - t)) return true;
    }
    x[pos] = 0;
    return false;
  };
  bool found = false;
  for (long long height = 0; height <= static_cast<long long>(g * k) && !found; ++height) found = search(0, height);
  if (!found) {
    v.conclusive = false;
    v.reason = "no invertible witness found on the search grid";
    return v;
  }
  std::vector<Vec> images(gm.gens.size());
  for (std::size_t j = 0; j < gm.gens.size(); ++j) {
    images[j] = la::zeros(h.basis[0][j].size());
    for (std::size_t l = 0; l < k; ++l) la::axpy(images[j], Scalar(x[l]), h.basis[l][j]);
  }
  ModuleMap phi = hom_map(rm, n, 0, images);
  for (int d = phi.lo; d <= phi.hi; ++d)
    if (la::rank(phi.at(d)) != m.dim(d)) throw std::logic_error("is_isomorphic: witness is not bijective");
  v.isomorphic = true;
  v.witness = x;
  v.reason = "invertible degree-0 map found";
  return v;
}

// ---------------------------------------------------------------------------
// matrix factorizations

PolyMatrix parse_matrix(const fa::GeneratorSet& g, const std::vector<std::vector<std::string>>& src) {
  PolyMatrix out;
  for (const auto& row : src) {
    std::vector<fa::NcPoly> r;
    for (const auto& s : row) r.push_back(fa::parse_poly(g, s));
    out.push_back(std::move(r));
  }
  return out;
}

namespace {

std::optional<PolyMatrix> mat_mul(const PolyMatrix& p, const PolyMatrix& q) {
  if (p.empty() || q.empty() || p[0].size() != q.size()) return std::nullopt;
  PolyMatrix out(p.size(), std::vector<fa::NcPoly>(q[0].size()));
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t k = 0; k < q[0].size(); ++k)
      for (std::size_t j = 0; j < q.size(); ++j) out[i][k] += fa::mul(p[i][j], q[j][k]);
  return out;
}

bool equals_scalar_matrix(const alg::PresentedAlgebra& s, const PolyMatrix& m, const fa::NcPoly& f) {
  if (m.empty() || m.size() != m[0].size()) return false;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) {
      fa::NcPoly d = m[i][j];
      if (i == j) d -= f;
      if (!s.groebner().normal_form(d).is_zero()) return false;
    }
  return true;
}

bool ragged(const PolyMatrix& m) {
  for (const auto& r : m)
    if (r.size() != m[0].size()) return true;
  return m.empty();
}

}  // namespace

bool verify_mf(const alg::PresentedAlgebra& s, const fa::NcPoly& f, const PolyMatrix& p, const PolyMatrix& q) {
  if (ragged(p) || ragged(q)) return false;
  auto pq = mat_mul(p, q), qp = mat_mul(q, p);
  return pq && qp && equals_scalar_matrix(s, *pq, f) && equals_scalar_matrix(s, *qp, f);
}

namespace {

Presentation presentation_of(const alg::PresentedAlgebra& a, const PolyMatrix& m) {
  Presentation p;
  const std::size_t rows = m.size(), cols = m[0].size();
  p.f0.assign(rows, FreeGen{0, 0});
  for (std::size_t j = 0; j < cols; ++j) {
    std::optional<int> deg;
    for (std::size_t i = 0; i < rows; ++i) {
      if (m[i][j].is_zero()) continue;
      auto hd = m[i][j].homogeneous_degree();
      if (!hd || (deg && *deg != *hd)) throw std::invalid_argument("matrix factorization: column is not homogeneous");
      deg = *hd;
    }
    if (!deg) throw std::invalid_argument("matrix factorization: zero column");
    p.f1.push_back({*deg, 0});
  }
  p.matrix.assign(rows, std::vector<Vec>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) p.matrix[i][j] = a.coordinates(m[i][j], p.f1[j].degree);
  return p;
}

}  // namespace

MfModules mf_to_modules(const alg::PresentedAlgebra& s, const fa::NcPoly& f, const PolyMatrix& p,
                        const PolyMatrix& q) {
  if (f.homogeneous_degree() != std::optional<int>(2)) throw std::invalid_argument("f must be homogeneous of degree 2");
  if (!verify_mf(s, f, p, q)) throw std::invalid_argument("not a matrix factorization of f");
  MfModules out;
  out.presented = std::make_shared<alg::PresentedAlgebra>(alg::quotient_by_central(s, f));
  out.algebra = alg::tabulate(*out.presented);
  out.px = presentation_of(*out.presented, p);
  out.py = presentation_of(*out.presented, q);
  const int D = out.algebra->truncation();
  out.x = module_from_presentation(out.algebra, out.px, D);
  out.y = module_from_presentation(out.algebra, out.py, D);
  return out;
}

}  // namespace qproj::mod

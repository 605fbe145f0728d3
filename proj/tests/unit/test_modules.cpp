#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "../fixtures.hpp"
#include "qproj/modules.hpp"

using namespace qproj;
using namespace qproj::mod;
using fixtures::to_ll;

namespace {

const MfModules& commutative_pair() {
  static const MfModules m = [] {
    auto g = fixtures::xyzw();
    return mf_to_modules(fixtures::S(8), fixtures::f_comm(), parse_matrix(g, fixtures::M_matrix()),
                         parse_matrix(g, fixtures::N_matrix()));
  }();
  return m;
}

const MfModules& twisted_pair() {
  static const MfModules m = [] {
    auto g = fixtures::xyzw();
    auto mm = parse_matrix(g, fixtures::M_matrix());
    return mf_to_modules(fixtures::S_sigma(8), fixtures::f_sigma(), mm, mm);
  }();
  return m;
}

std::vector<long long> row_dims(const std::vector<ExtRow>& rows) {
  std::vector<long long> out;
  for (const auto& r : rows) out.push_back(static_cast<long long>(r.dim));
  return out;
}

bool all_certified(const std::vector<ExtRow>& rows) {
  for (const auto& r : rows)
    if (!r.certified) return false;
  return true;
}

std::vector<int> degrees(const std::vector<FreeGen>& g) {
  std::vector<int> out;
  for (const auto& x : g) out.push_back(x.degree);
  return out;
}

// Whether the differential F_q -> F_{q-1} equals W^{-1} P V for scalar
// invertible W, V: the columns of W d_q must span the columns of P.
bool equivalent_to(const Resolution& r, int q, const AlgebraPtr& a, const Presentation& p) {
  const int t = r.gens[q][0].degree;
  const auto& src = r.gens[q - 1];
  const std::size_t n = src.size();
  la::RowSpace target(free_module(a, p.f0, a->truncation()).dim(p.f1[0].degree));
  for (std::size_t j = 0; j < p.f1.size(); ++j) {
    std::vector<Vec> parts;
    for (std::size_t i = 0; i < p.f0.size(); ++i) parts.push_back(p.matrix[i][j]);
    target.insert(free_element(a, p.f0, p.f1[0].degree, parts));
  }
  const int e = t - src[0].degree;
  // residues modulo the target span, one column per unknown W_ij
  la::Mat eqs(0, n * n);
  for (const auto& col : r.differential[q]) {
    std::vector<Vec> residues;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        std::vector<Vec> parts(n, la::zeros(a->dim(e)));
        parts[i] = col[j];
        Vec v = free_element(a, p.f0, e, parts);
        target.reduce(v);
        residues.push_back(v);
      }
    la::Mat m = la::Mat::from_columns(residues, residues[0].size());
    for (std::size_t row = 0; row < m.rows(); ++row) eqs.append_row(m.row(row));
  }
  la::Mat sols = la::kernel_basis(eqs);
  for (long long mask = 1; mask < (1LL << sols.rows()); ++mask) {
    la::Mat w(n, n);
    for (std::size_t l = 0; l < sols.rows(); ++l)
      if (mask >> l & 1)
        for (std::size_t c = 0; c < n * n; ++c) w(c / n, c % n) += sols(l, c);
    if (!la::determinant(w).is_zero()) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("presentations and shifts") {
  const auto& p = commutative_pair();
  CHECK(p.x.dims(0, 3) == std::vector<long long>{2, 6, 12, 20});
  CHECK(p.y.dims(0, 3) == std::vector<long long>{2, 6, 12, 20});
  CHECK(shift(p.x, -1).dims(1, 2) == std::vector<long long>{2, 6});
  CHECK(shift(p.x, -1).dim(0) == 0);

  auto a = p.algebra;
  Presentation triv{{{0, 0}}, {{1, 0}}, {{la::zeros(a->dim(1))}}};
  GradedModule free = module_from_presentation(a, triv, a->truncation());
  auto ad = a->dims();
  CHECK(free.dims(0, 4) == to_ll(std::vector<std::size_t>(ad.begin(), ad.begin() + 5)));

  GradedModule s0 = shift(regular_module(a), 0);
  CHECK(is_isomorphic(s0, regular_module(a)).isomorphic);
  GradedModule tw = twist_by_auto(p.x, alg::GradedAutomorphism::identity(*a));
  CHECK(is_isomorphic(tw, p.x).isomorphic);
}

TEST_CASE("minimal covers") {
  const auto& p = commutative_pair();
  auto a = p.algebra;
  auto g = minimal_generators(free_module(a, {{2, 0}}, a->truncation()));
  REQUIRE(g.size() == 1);
  CHECK(g[0].degree == 2);
  CHECK(degrees(free_gens(minimal_generators(p.x))) == std::vector<int>{0, 0});
  GradedModule sum = direct_sum({p.x, shift(regular_module(a), -1)});
  CHECK(degrees(free_gens(minimal_generators(sum))) == std::vector<int>{0, 0, 1});

  Cover c = minimal_free_cover(p.x);
  for (int d = 0; d <= c.map.hi; ++d) CHECK(la::rank(c.map.at(d)) == p.x.dim(d));
  GradedModule om = syzygy(p.x);
  for (int d = 0; d <= om.hi(); ++d) CHECK(om.dim(d) + p.x.dim(d) == c.free.dim(d));
  CHECK(syzygy(regular_module(a)).is_zero_in_window());
}

TEST_CASE("syzygies of the matrix factorization modules") {
  const auto& p = commutative_pair();
  CHECK(is_isomorphic(syzygy(p.x), shift(p.y, -1)).isomorphic);
  IsoVerdict v = is_isomorphic(shift(syzygy(p.x), 1), p.y);
  CHECK(v.isomorphic);
  CHECK(v.conclusive);
  CHECK(v.witness.has_value());
  CHECK_FALSE(is_isomorphic(p.x, p.y).isomorphic);
  CHECK(is_isomorphic(p.x, p.x).isomorphic);
  CHECK(is_isomorphic(syzygy(syzygy(p.x)), shift(p.x, -2)).isomorphic);

  const auto& t = twisted_pair();
  CHECK(is_isomorphic(syzygy(t.x), shift(t.x, -1)).isomorphic);
  CHECK(is_isomorphic(syzygy(syzygy(t.x)), shift(t.x, -2)).isomorphic);
}

TEST_CASE("syzygy commutes with shift") {
  const auto& p = commutative_pair();
  GradedModule a = syzygy(shift(p.x, 1));
  GradedModule b = shift(syzygy(p.x), 1);
  CHECK(is_isomorphic(a, b).isomorphic);
}

TEST_CASE("resolutions") {
  auto s = alg::tabulate(fixtures::S(6));
  Resolution k = resolve(degree_zero_module(s, 6), 4);
  REQUIRE(k.length() == 4);
  std::vector<std::size_t> betti;
  for (int q = 0; q <= 4; ++q) {
    betti.push_back(k.gens[q].size());
    for (const auto& g : k.gens[q]) CHECK(g.degree == q);
  }
  CHECK(betti == std::vector<std::size_t>{1, 4, 6, 4, 1});
  CHECK(k.terminated);
  CHECK(euler_identity_holds(k));

  const auto& p = commutative_pair();
  Resolution rx = resolve(p.x, 4);
  REQUIRE(rx.length() == 4);
  for (int q = 0; q <= 4; ++q) CHECK(degrees(rx.gens[q]) == std::vector<int>{q, q});
  CHECK(euler_identity_holds(rx));
  for (int q = 1; q <= 4; ++q) {
    CAPTURE(q);
    CHECK(equivalent_to(rx, q, p.algebra, q % 2 ? p.px : p.py));
    CHECK_FALSE(equivalent_to(rx, q, p.algebra, q % 2 ? p.py : p.px));
  }

  const auto& t = twisted_pair();
  Resolution rt = resolve(t.x, 4);
  REQUIRE(rt.length() == 4);
  for (int q = 0; q <= 4; ++q) CHECK(degrees(rt.gens[q]) == std::vector<int>{q, q});
  for (int q = 1; q <= 4; ++q) CHECK(equivalent_to(rt, q, t.algebra, t.px));
}

TEST_CASE("Hom tables") {
  const auto& p = commutative_pair();
  auto a = p.algebra;
  GradedModule reg = regular_module(a);
  auto ax = hom_table(reg, p.x, 0, 2);
  CHECK(row_dims(ax) == std::vector<long long>{2, 6, 12});
  CHECK(all_certified(ax));
  auto xa = hom_table(p.x, reg, 0, 2);
  CHECK(row_dims(xa) == std::vector<long long>{0, 2, 6});
  CHECK(all_certified(xa));
  auto xy = hom_table(p.x, p.y, 0, 3);
  CHECK(row_dims(xy) == std::vector<long long>{0, 3, 8, 15});
  auto xx = hom_table(p.x, p.x, -2, 3);
  CHECK(row_dims(xx) == std::vector<long long>{0, 0, 1, 4, 9, 16});
  // rows near the top of the window are not certified
  CHECK_FALSE(hom_table(p.x, p.y, 8, 8)[0].certified);
}

TEST_CASE("Ext tables") {
  const auto& p = commutative_pair();
  GradedModule reg = regular_module(p.algebra);
  Resolution rx = resolve(p.x, 3);
  auto e_xa = ext_table(rx, reg, 1, -5, 5);
  CHECK(all_certified(e_xa));
  for (const auto& r : e_xa) CHECK(r.dim == 0);
  for (const auto& r : ext_table(rx, p.x, 1, -5, 5)) CHECK(r.dim == 0);
  auto e_xy = ext_table(rx, p.y, 1, -5, 5);
  CHECK(all_certified(e_xy));
  for (const auto& r : e_xy) CHECK(r.dim == (r.degree == -1 ? 1u : 0u));

  // padded resolutions give the same Ext
  Resolution padded = pad_resolution(rx, 1, FreeGen{2, 0});
  for (int q = 0; q <= 2; ++q)
    for (int i = -3; i <= 3; ++i) {
      CHECK(ext_dim(padded, p.y, q, i).dim == ext_dim(rx, p.y, q, i).dim);
      CHECK(ext_dim(padded, reg, q, i).dim == ext_dim(rx, reg, q, i).dim);
    }
}

TEST_CASE("Hom and Ext are additive") {
  const auto& p = commutative_pair();
  GradedModule reg = regular_module(p.algebra);
  GradedModule sum = direct_sum({p.x, reg});
  Resolution rs = resolve(sum, 2), rx = resolve(p.x, 2), ra = resolve(reg, 2);
  for (int q = 0; q <= 1; ++q)
    for (int i = -2; i <= 3; ++i)
      CHECK(ext_dim(rs, p.y, q, i).dim == ext_dim(rx, p.y, q, i).dim + ext_dim(ra, p.y, q, i).dim);
  auto lhs = hom_table(p.y, sum, 0, 3);
  auto r1 = hom_table(p.y, p.x, 0, 3), r2 = hom_table(p.y, reg, 0, 3);
  for (std::size_t i = 0; i < lhs.size(); ++i) CHECK(lhs[i].dim == r1[i].dim + r2[i].dim);
}

TEST_CASE("MCM check") {
  const auto& p = commutative_pair();
  auto a = p.algebra;
  CHECK(mcm_check(regular_module(a)).mcm);
  CHECK(mcm_check(p.x).mcm);
  McmVerdict k = mcm_check(degree_zero_module(a, a->truncation()));
  CHECK_FALSE(k.mcm);
  CHECK_FALSE(k.nonzero.empty());
}

TEST_CASE("matrix factorizations") {
  auto g = fixtures::xyzw();
  auto m = parse_matrix(g, fixtures::M_matrix());
  auto n = parse_matrix(g, fixtures::N_matrix());
  auto s = fixtures::S(4);
  CHECK(verify_mf(s, fixtures::f_comm(), m, n));
  CHECK(verify_mf(fixtures::S_sigma(4), fixtures::f_sigma(), m, m));
  CHECK_FALSE(verify_mf(s, fixtures::f_comm(), m, m));
  auto id = parse_matrix(g, {{"1", "0"}, {"0", "1"}});
  CHECK_THROWS(mf_to_modules(s, fa::parse_poly(g, "1"), id, id));
  CHECK_THROWS(mf_to_modules(s, fixtures::f_comm(), m, m));
  CHECK(twisted_pair().x.dims(0, 2) == std::vector<long long>{2, 6, 12});
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "../fixtures.hpp"
#include "qproj/helix.hpp"

using namespace qproj;
using namespace qproj::hx;

namespace {

struct Pipeline {
  mod::MfModules mf;
  GradedModule reg;
  std::unique_ptr<TailsContext> ctx;

  Handle A(int i) const { return object(reg, i, "A"); }
  Handle X(int i) const { return object(mf.x, i, "X"); }
  Handle Y(int i) const { return object(mf.y, i, "Y"); }
};

Pipeline make(bool twisted) {
  auto g = fixtures::xyzw();
  auto m = mod::parse_matrix(g, fixtures::M_matrix());
  auto n = mod::parse_matrix(g, fixtures::N_matrix());
  Pipeline p;
  p.mf = twisted ? mod::mf_to_modules(fixtures::S_sigma(8), fixtures::f_sigma(), m, m)
                 : mod::mf_to_modules(fixtures::S(8), fixtures::f_comm(), m, n);
  p.reg = mod::regular_module(p.mf.algebra);
  p.ctx = std::make_unique<TailsContext>(p.mf.algebra, alg::GradedAutomorphism::identity(*p.mf.algebra));
  return p;
}

const Pipeline& commutative() {
  static const Pipeline p = make(false);
  return p;
}

const Pipeline& twisted() {
  static const Pipeline p = make(true);
  return p;
}

bool condition(const HelixReport& r, const std::string& name) {
  for (const auto& c : r.conditions)
    if (c.name == name) return c.pass && c.certified;
  FAIL("missing condition " << name);
  return false;
}

}  // namespace

TEST_CASE("tails Ext") {
  const auto& p = commutative();
  const auto& c = *p.ctx;
  CHECK(tails_ext(c, p.A(0), p.A(-2), 2).dim == 1);
  for (int i = -2; i <= 2; ++i) {
    CHECK(tails_ext(c, p.X(i), p.Y(i), 2).dim == 0);
    CHECK(tails_ext(c, p.X(i), p.Y(i + 1), 3).dim == 0);
  }
  CHECK(tails_ext(c, p.X(0), p.Y(0), 0).dim == 0);
  CHECK(tails_ext(c, p.X(0), p.Y(1), 0).dim == 3);
  CHECK(tails_ext(c, p.X(0), p.Y(-1), 1).dim == 1);
  // Serre duality symmetry with nu = id: Ext^2(M, N) = Hom(N, M(-2))
  std::vector<Handle> objs = {p.A(0), p.X(0), p.Y(0), p.A(1), p.X(-1)};
  for (const auto& m : objs)
    for (const auto& n : objs) {
      Handle m2 = m;
      m2.parts[0].shift -= 2;
      CHECK(tails_ext(c, m, n, 2).dim == tails_ext(c, n, m2, 0).dim);
    }
  mod::GradedModule k = mod::degree_zero_module(p.mf.algebra, 8);
  CHECK_THROWS(tails_ext(c, object(k, 0, "k"), p.A(0), 1));
}

TEST_CASE("exceptional sequences") {
  const auto& p = commutative();
  const auto& c = *p.ctx;
  HelixReport r = check_relative_exceptional(c, {p.A(-1), p.X(-1), p.A(0), p.X(0)});
  CHECK(r.pass());
  CHECK(r.conclusive());
  CHECK(r.re1_form == "End semisimple");
  HelixReport aa = check_relative_exceptional(c, {p.A(0), p.A(0)});
  CHECK_FALSE(condition(aa, "RE3"));
  CHECK(condition(aa, "RE1"));
  CHECK(check_relative_exceptional(c, {p.X(0), p.A(1)}).pass());
  HelixReport ax = check_relative_exceptional(c, {p.A(1), p.X(0)});
  CHECK_FALSE(condition(ax, "RE3"));
  CHECK(end_algebra(p.X(0)).dim() == 1);
  auto kk = end_algebra(blocked({p.A(0), p.X(0)}));
  CHECK(kk.dim() == 4);
  CHECK(kk.check_associative());
  CHECK_FALSE(alg::semisimple_type(kk).semisimple);
}

TEST_CASE("geometric helix of period 4") {
  const auto& p = commutative();
  HelixRule rule = [&](int i) {
    const int q = (i % 2 + 2) % 2;
    const int s = (i - q) / 2;
    return q == 0 ? p.A(s) : p.X(s);
  };
  HelixReport r = check_geometric_helix(*p.ctx, rule, 4, -4, 8);
  for (const auto& c : r.conditions) CHECK_MESSAGE(c.pass, c.name << ": " << c.detail);
  CHECK(r.conclusive());

  HelixRule block = [&](int i) { return blocked({p.A(i), p.X(i)}); };
  HelixReport b = check_geometric_helix(*p.ctx, block, 2, -2, 4);
  for (const auto& c : b.conditions) CHECK_MESSAGE(c.pass, c.name << ": " << c.detail);
  CHECK(b.re1_form == "End semisimple or triangular with semisimple diagonal");

  HelixRule constant = [&](int) { return p.A(0); };
  HelixReport cst = check_geometric_helix(*p.ctx, constant, 1, 0, 3);
  CHECK_FALSE(condition(cst, "H2"));
}

TEST_CASE("mutations") {
  const auto& p = commutative();
  const auto& c = *p.ctx;
  for (int i = 0; i <= 1; ++i) {
    Mutation l = left_mutation(c, p.A(i), p.Y(i));
    REQUIRE(l.ok);
    CHECK(l.hom_dim == 2);
    CHECK(mod::is_isomorphic(l.module, p.X(i - 1).module()).isomorphic);
    Mutation r = right_mutation(c, p.A(i), object(l.module, 0, "L"));
    REQUIRE(r.ok);
    CHECK(mod::is_isomorphic(r.module, p.Y(i).module()).isomorphic);
  }
  Mutation aa = left_mutation(c, p.A(0), p.A(0));
  REQUIRE(aa.ok);
  CHECK(aa.module.is_zero_in_window());
  Mutation ra = right_mutation(c, p.A(0), p.A(0));
  REQUIRE(ra.ok);
  CHECK(ra.module.is_zero_in_window());
  // right then left on (X(-1), A)
  Mutation r = right_mutation(c, p.A(0), p.X(-1));
  REQUIRE(r.ok);
  CHECK(mod::is_isomorphic(r.module, p.Y(0).module()).isomorphic);
  Mutation back = left_mutation(c, p.A(0), object(r.module, 0, "R"));
  REQUIRE(back.ok);
  CHECK(mod::is_isomorphic(back.module, p.X(-1).module()).isomorphic);
  // Hom concentration failure
  Mutation bad = left_mutation(c, p.X(0), p.Y(-1));
  CHECK_FALSE(bad.ok);
}

TEST_CASE("standard and non-standard quadrics") {
  const auto& p = commutative();
  StandardnessVerdict v = classify_standard(p.mf.x, p.mf.y);
  CHECK(v.classification == Standardness::standard);
  CHECK(v.cross_validated);
  CHECK(classify_standard(p.mf.y, p.mf.x).classification == Standardness::standard);
  CHECK_THROWS(classify_standard(p.mf.x, p.mf.x));

  const auto& t = twisted();
  auto g = fixtures::xyzw();
  auto n = mod::parse_matrix(g, fixtures::N_matrix());
  mod::MfModules ny = mod::mf_to_modules(fixtures::S_sigma(8), fixtures::f_sigma(), n, n);
  // Y must live over the same algebra object as X
  mod::Presentation py = ny.px;
  GradedModule y = mod::module_from_presentation(t.mf.algebra, py, t.mf.algebra->truncation());
  StandardnessVerdict w = classify_standard(t.mf.x, y);
  CHECK(to_string(w.classification) == "non-standard");
  CHECK(w.cross_validated);
  CHECK(classify_standard(y, t.mf.x).classification == Standardness::non_standard);
}

TEST_CASE("section algebras") {
  const auto& p = commutative();
  SectionAlgebra b = section_algebra({p.reg, p.mf.x}, {"A", "X"}, 4);
  CHECK(b.block_dims == std::vector<std::vector<std::size_t>>{{1, 2}, {0, 1}});
  CHECK(fixtures::to_ll(b.algebra->dims()) == std::vector<long long>{4, 16, 36, 64, 100});
  CHECK(alg::check_associative(*b.algebra, 1500));
  auto b0 = alg::degree_zero(*b.algebra);
  CHECK_FALSE(alg::semisimple_type(b0).semisimple);
  CHECK(alg::semisimple_type(b0).radical_dim == 2);

  SectionAlgebra a = section_algebra({p.reg}, {"A"}, 6);
  auto a6 = alg::tabulate(fixtures::A(6));
  CHECK(alg::same_structure(*a.algebra, *a6));
}

TEST_CASE("regularity evidence") {
  auto s = alg::tabulate(fixtures::S(6));
  RegularityEvidence es = regularity_evidence(s, 5);
  CHECK(es.ok);
  REQUIRE(es.candidate.has_value());
  CHECK(*es.candidate == std::make_pair(4, 4));
  CHECK(es.base == "k");
  RegularityEvidence short_h = regularity_evidence(s, 2);
  CHECK_FALSE(short_h.ok);
  CHECK_FALSE(short_h.conclusive);

  auto cubic = alg::tabulate(fixtures::cubic(8));
  RegularityEvidence ec = regularity_evidence(cubic, 4);
  CHECK(ec.ok);
  REQUIRE(ec.candidate.has_value());
  CHECK(*ec.candidate == std::make_pair(3, 4));

  auto q = alg::quasi_veronese(alg::tabulate(fixtures::poly_x3(12)), 2);
  RegularityEvidence eq = regularity_evidence(q, 4);
  CHECK_FALSE(eq.ok);
  CHECK(eq.conclusive);
  CHECK_FALSE(eq.right.reason.empty());
  CHECK(eq.verdict == "not AS-regular over B0 = k x k");
}

TEST_CASE("regularity of the section algebra") {
  const auto& p = commutative();
  SectionAlgebra b = section_algebra({p.reg, p.mf.x}, {"A", "X"}, 6);
  RegularityEvidence e = regularity_evidence(b.algebra, 5);
  CHECK_MESSAGE(e.ok, e.right.reason << " / " << e.left.reason);
  REQUIRE(e.candidate.has_value());
  CHECK(*e.candidate == std::make_pair(3, 2));
}

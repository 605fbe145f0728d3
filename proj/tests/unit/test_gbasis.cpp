#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qproj/gbasis.hpp"

using namespace qproj;
using namespace qproj::gb;

namespace {

GeneratorSet xyzw() { return GeneratorSet({"x", "y", "z", "w"}, {1, 1, 1, 1}); }

std::vector<NcPoly> parse_all(const GeneratorSet& g, std::vector<std::string> rels) {
  std::vector<NcPoly> out;
  for (auto& r : rels) out.push_back(fa::parse_poly(g, r));
  return out;
}

std::vector<std::string> commutators() {
  return {"x*y-y*x", "x*z-z*x", "x*w-w*x", "y*z-z*y", "y*w-w*y", "z*w-w*z"};
}

std::vector<std::size_t> counts(const GroebnerBasis& gb, int upto) {
  std::vector<std::size_t> out;
  for (int d = 0; d <= upto; ++d) out.push_back(gb.normal_words(d).size());
  return out;
}

}  // namespace

TEST_CASE("commutative ring: the commutators are already a basis") {
  auto g = xyzw();
  Ideal ideal(g, parse_all(g, commutators()));
  auto gb = buchberger_truncated(ideal, 8);
  CHECK(gb.elements().size() == 6);
  CHECK(gb.normal_words(3).size() == 20);
  CHECK(counts(gb, 4) == std::vector<std::size_t>{1, 4, 10, 20, 35});
  CHECK(gb.normal_form(fa::parse_poly(g, "y*x")) == fa::parse_poly(g, "x*y"));
  CHECK(gb.normal_form(fa::parse_poly(g, "x*y*z")) == fa::parse_poly(g, "x*y*z"));
  for (const auto& r : ideal.generators) CHECK(gb.normal_form(r).is_zero());
  CHECK(gb.normal_words(0).size() == 1);
  CHECK(gb.normal_words(0)[0].empty());
}

TEST_CASE("quadric hypersurface") {
  auto g = xyzw();
  auto rels = commutators();
  rels.push_back("x*w-y*z");
  Ideal ideal(g, parse_all(g, rels));
  auto gb = buchberger_truncated(ideal, 8);
  CHECK(counts(gb, 4) == std::vector<std::size_t>{1, 4, 9, 16, 25});
  CHECK(gb.normal_words(2).size() == 9);
  for (int d = 0; d <= 8; ++d) CHECK(gb.normal_words(d).size() == std::size_t((d + 1) * (d + 1)));
}

TEST_CASE("cubic AS-regular algebra") {
  GeneratorSet g({"x", "y"}, {1, 1});
  Ideal ideal(g, parse_all(g, {"x^2*y-y*x^2", "x*y^2-y^2*x"}));
  auto gb = buchberger_truncated(ideal, 8);
  CHECK(counts(gb, 5) == std::vector<std::size_t>{1, 2, 4, 6, 9, 12});
  for (int d = 0; d <= 6; ++d) CHECK(gb.normal_words(d).size() == brute_force_quotient_dim(ideal, d));
}

TEST_CASE("normal words agree with the brute-force span oracle") {
  auto g = xyzw();
  std::vector<std::vector<std::string>> ideals;
  ideals.push_back(commutators());
  auto q = commutators();
  q.push_back("x*w-y*z");
  ideals.push_back(q);
  ideals.push_back({"x*y+y*w", "x*z+z*w", "x^2-w^2", "y*z-z*y", "y*x+w*y", "z*x+w*z"});
  ideals.push_back({"x*y+y*w", "x*z+z*w", "x^2-w^2", "y*z-z*y", "y*x+w*y", "z*x+w*z", "x^2+y*z"});
  for (const auto& rels : ideals) {
    Ideal ideal(g, parse_all(g, rels));
    auto gb = buchberger_truncated(ideal, 6);
    for (int d = 0; d <= 6; ++d) CHECK(gb.normal_words(d).size() == brute_force_quotient_dim(ideal, d));
  }
}

TEST_CASE("basis is reduced and normal form is linear and idempotent") {
  auto g = xyzw();
  Ideal ideal(g, parse_all(g, {"x*y+y*w", "x*z+z*w", "x^2-w^2", "y*z-z*y", "y*x+w*y", "z*x+w*z", "x^2+y*z"}));
  auto gb = buchberger_truncated(ideal, 6);
  const auto& el = gb.elements();
  for (std::size_t i = 0; i < el.size(); ++i) {
    CHECK(el[i].leading_coeff().is_one());
    for (std::size_t j = 0; j < el.size(); ++j) {
      if (i == j) continue;
      CHECK(el[j].leading_word().letters().find(el[i].leading_word().letters()) == std::string::npos);
      for (std::size_t t = 1; t < el[j].terms().size(); ++t)
        CHECK(el[j].terms()[t].first.letters().find(el[i].leading_word().letters()) == std::string::npos);
    }
  }
  auto p = fa::parse_poly(g, "w*z*y*x - 2*x*x*y*z + 3*z*w*x*x");
  auto q = fa::parse_poly(g, "y*y*x*w + w*w*w*w");
  auto np = gb.normal_form(p);
  CHECK(gb.normal_form(np) == np);
  CHECK(gb.normal_form(p + q.scaled(5)) == np + gb.normal_form(q).scaled(5));
}

TEST_CASE("weighted generators and truncation errors") {
  GeneratorSet g({"x"}, {3});
  Ideal ideal(g, {});
  auto gb = buchberger_truncated(ideal, 6);
  CHECK(counts(gb, 6) == std::vector<std::size_t>{1, 0, 0, 1, 0, 0, 1});
  CHECK_THROWS_AS(gb.normal_words(7), TruncationError);
  GeneratorSet h({"x", "y"}, {1, 1});
  CHECK_THROWS(Ideal(h, {fa::parse_poly(h, "x + x*y")}));
}

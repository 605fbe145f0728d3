#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qproj/freealg.hpp"

using namespace qproj::fa;
using qproj::la::Scalar;

namespace {

NcPoly random_poly(std::mt19937& rng, const GeneratorSet& g) {
  std::uniform_int_distribution<int> coeff(-3, 3), len(0, 3), letter(0, static_cast<int>(g.size()) - 1);
  std::vector<NcPoly::Term> terms;
  for (int t = 0; t < 4; ++t) {
    std::vector<std::size_t> w(len(rng));
    for (auto& l : w) l = letter(rng);
    terms.emplace_back(Word(g, w), Scalar(coeff(rng)));
  }
  return NcPoly::from_terms(terms);
}

}  // namespace

TEST_CASE("mul examples") {
  GeneratorSet g({"x", "y"}, {1, 1});
  auto x = parse_poly(g, "x"), y = parse_poly(g, "y");
  CHECK(mul(x, y) == NcPoly::monomial(Word(g, {0, 1})));
  CHECK(mul(x + y, x - y) == parse_poly(g, "x^2 - x*y + y*x - y^2"));
  auto p = parse_poly(g, "3*x*y^2 - 1/2*y*x");
  CHECK(mul(NcPoly::constant(1), p) == p);
  CHECK(mul(x, y).homogeneous_degree() == 2);
  CHECK_FALSE(parse_poly(g, "x + x*y").homogeneous_degree().has_value());
}

TEST_CASE("compare_deglex examples") {
  GeneratorSet g({"x", "y"}, {1, 1});
  Word x = Word::letter(g, 0), y = Word::letter(g, 1);
  CHECK(compare_deglex(x, x * y) == std::strong_ordering::less);
  CHECK(compare_deglex(x * y, y * x) == std::strong_ordering::less);
  CHECK(compare_deglex(x * y, x * y) == std::strong_ordering::equal);
}

TEST_CASE("monomials_of_degree examples") {
  GeneratorSet four({"x", "y", "z", "w"}, {1, 1, 1, 1});
  CHECK(monomials_of_degree(four, 2).size() == 16);
  GeneratorSet cubic({"x"}, {3});
  CHECK(monomials_of_degree(cubic, 4).empty());
  GeneratorSet mixed({"x", "y"}, {1, 2});
  auto ws = monomials_of_degree(mixed, 3);
  REQUIRE(ws.size() == 3);
  CHECK(ws[0].str(mixed) == "x^3");
  CHECK(ws[1].str(mixed) == "x*y");
  CHECK(ws[2].str(mixed) == "y*x");
}

TEST_CASE("order is admissible") {
  GeneratorSet g({"x", "y", "z"}, {1, 2, 1});
  std::vector<Word> words;
  for (int d = 0; d <= 4; ++d)
    for (auto& w : monomials_of_degree(g, d)) words.push_back(w);
  for (std::size_t i = 0; i + 1 < words.size(); ++i) CHECK(words[i] < words[i + 1]);
  Word a = Word::letter(g, 1), c = Word::letter(g, 2);
  for (std::size_t i = 0; i + 1 < words.size(); i += 3) {
    const Word& u = words[i];
    const Word& v = words[i + 1];
    CHECK(a * u * c < a * v * c);
    CHECK(c * u < c * v);
  }
}

TEST_CASE("mul is associative and distributive on random polynomials") {
  GeneratorSet g({"x", "y", "z"}, {1, 1, 1});
  std::mt19937 rng(7);
  for (int i = 0; i < 30; ++i) {
    auto p = random_poly(rng, g), q = random_poly(rng, g), r = random_poly(rng, g);
    CHECK(mul(mul(p, q), r) == mul(p, mul(q, r)));
    CHECK(mul(p, q + r) == mul(p, q) + mul(p, r));
    CHECK(mul(p + q, r) == mul(p, r) + mul(q, r));
  }
}

TEST_CASE("parser and printer") {
  GeneratorSet g({"x", "y", "z", "w"}, {1, 1, 1, 1});
  auto f = parse_poly(g, "x*w - y*z");
  CHECK(f.str(g) == "-y*z + x*w");
  CHECK(parse_poly(g, "(x+y)^2").terms().size() == 4);
  CHECK(parse_poly(g, "2*x - 2*x").is_zero());
  CHECK(parse_poly(g, "-x^2 + 3/2*w*x").str(g) == "3/2*w*x - x^2");
  CHECK_THROWS_AS(parse_poly(g, "x*q"), ParseError);
  CHECK_THROWS_AS(parse_poly(g, "x +"), ParseError);
  CHECK_THROWS_AS(parse_poly(g, "(x"), ParseError);
}

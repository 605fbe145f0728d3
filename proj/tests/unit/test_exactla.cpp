#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qproj/exactla.hpp"

using namespace qproj::la;

namespace {

Mat M(std::initializer_list<std::initializer_list<long long>> rows) {
  std::vector<Vec> r;
  std::size_t cols = 0;
  for (auto& row : rows) {
    Vec v;
    for (auto x : row) v.emplace_back(x);
    cols = v.size();
    r.push_back(v);
  }
  return Mat::from_rows(r, cols);
}

Mat random_mat(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  Mat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = dist(rng);
  return m;
}

}  // namespace

TEST_CASE("scalar arithmetic is canonical") {
  Scalar a(6, -4);
  CHECK(a.str() == "-3/2");
  CHECK((a + Scalar(3, 2)).is_zero());
  CHECK((a * a).str() == "9/4");
  CHECK(Scalar::parse("10/4") == Scalar(5, 2));
  CHECK(Scalar(7).inverse() * Scalar(7) == Scalar(1));
}

TEST_CASE("scalar overflow falls back to big rationals") {
  Scalar big(1LL << 62);
  Scalar sq = big * big;
  CHECK(sq.str() == "21267647932558653966460912964485513216");
  Scalar back = sq / big;
  CHECK(back == big);
  CHECK(back.str() == std::to_string(1LL << 62));
  Scalar s = Scalar(1, 3);
  for (int i = 0; i < 60; ++i) s *= Scalar(1, 3);
  for (int i = 0; i < 60; ++i) s *= 3;
  CHECK(s == Scalar(1, 3));
}

TEST_CASE("prime field mode") {
  set_field(Field::parse("p:7"));
  CHECK(field().name() == "F_7");
  Scalar a(3);
  CHECK((a * a.inverse()).is_one());
  CHECK(Scalar(10) == Scalar(3));
  CHECK(Scalar(1, 2) == Scalar(4));
  set_field(Field{});
  CHECK(field().name() == "Q");
  CHECK_THROWS(Field::parse("p:8"));
  CHECK_THROWS(Field::parse("r"));
}

TEST_CASE("rref examples") {
  auto id = rref(Mat::identity(2));
  CHECK(id.form == Mat::identity(2));
  CHECK(id.pivots == std::vector<std::size_t>{0, 1});

  auto z = rref(Mat(3, 3));
  CHECK(z.form.is_zero());
  CHECK(z.pivots.empty());

  auto r = rref(M({{1, 2}, {2, 4}}));
  CHECK(r.form == M({{1, 2}, {0, 0}}));
  CHECK(r.pivots == std::vector<std::size_t>{0});
}

TEST_CASE("kernel basis examples") {
  CHECK(kernel_basis(Mat::identity(4)).rows() == 0);
  CHECK(kernel_basis(Mat(1, 3)).rows() == 3);
  Mat m = M({{1, 1, 0}});
  Mat k = kernel_basis(m);
  REQUIRE(k.rows() == 2);
  for (std::size_t i = 0; i < k.rows(); ++i) CHECK(is_zero(m.apply(k.row(i))));
}

TEST_CASE("solve examples") {
  Vec b{Scalar(3), Scalar(-1, 2), Scalar(5)};
  CHECK(*solve(Mat::identity(3), b) == b);
  CHECK_FALSE(solve(Mat(2, 2), Vec{Scalar(1), Scalar(0)}).has_value());
  auto x = solve(M({{1, 1}}), Vec{Scalar(2)});
  REQUIRE(x);
  CHECK(*x == Vec{Scalar(2), Scalar(0)});
  CHECK_THROWS_AS(solve(Mat::identity(2), Vec{Scalar(1)}), DimensionError);
}

TEST_CASE("random properties: idempotent rref, rank-nullity, inverse") {
  std::mt19937 rng(12345);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t r = 1 + trial % 5, c = 1 + (trial * 7) % 6;
    Mat m = random_mat(rng, r, c, -2, 2);
    auto once = rref(m);
    CHECK(rref(once.form).form == once.form);
    Mat k = kernel_basis(m);
    CHECK(rank(m) + k.rows() == c);
    for (std::size_t i = 0; i < k.rows(); ++i) CHECK(is_zero(m.apply(k.row(i))));
    Mat sq = random_mat(rng, 4, 4, -3, 3);
    auto inv = inverse(sq);
    if (determinant(sq).is_zero()) {
      CHECK_FALSE(inv.has_value());
    } else {
      REQUIRE(inv);
      CHECK(sq * *inv == Mat::identity(4));
    }
  }
}

TEST_CASE("determinant of a known matrix") {
  CHECK(determinant(M({{2, 1, 0}, {1, 3, 1}, {0, 1, 4}})) == Scalar(18));
  CHECK(determinant(M({{1, 2}, {2, 4}})).is_zero());
}

TEST_CASE("row space stays reduced") {
  RowSpace rs(3);
  CHECK(rs.insert(Vec{Scalar(1), Scalar(2), Scalar(3)}));
  CHECK(rs.insert(Vec{Scalar(0), Scalar(1), Scalar(1)}));
  CHECK_FALSE(rs.insert(Vec{Scalar(1), Scalar(3), Scalar(4)}));
  CHECK(rs.dim() == 2);
  CHECK(rs.free_columns() == std::vector<std::size_t>{2});
  CHECK(rs.contains(Vec{Scalar(2), Scalar(5), Scalar(7)}));
  CHECK_FALSE(rs.contains(Vec{Scalar(0), Scalar(0), Scalar(1)}));
}

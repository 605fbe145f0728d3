#pragma once

// Exact linear algebra over Q (default) or a prime field F_p.
//
// Scalars keep a machine-word fraction when the value fits and fall back to
// GMP rationals otherwise. The field is a process-wide setting that must be
// chosen before any computation starts; values from different fields never
// meet because every Scalar is created under the current setting.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qproj::la {

struct Field {
  std::uint32_t prime = 0;  // 0 selects Q

  bool is_prime() const { return prime != 0; }
  std::string name() const;
  static Field parse(std::string_view text);  // "q" or "p:<prime>"
};

void set_field(Field f);
Field field();

class Scalar {
 public:
  Scalar() = default;
  Scalar(long long n);  // NOLINT(google-explicit-constructor)
  Scalar(long long num, long long den);

  static Scalar from_mpq(const mpq_class& q);
  static Scalar parse(std::string_view text);

  bool is_zero() const { return !big_ && num_ == 0; }
  bool is_one() const { return !big_ && num_ == 1 && den_ == 1; }
  int sign() const;
  bool is_integer() const;

  Scalar inverse() const;
  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
  friend Scalar operator/(Scalar a, const Scalar& b) { return a /= b; }
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  mpq_class to_mpq() const;
  std::string str() const;  // "p" or "p/q"

 private:
  static Scalar from_wide(__int128 num, __int128 den);
  void assign_mpq(mpq_class q);

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::shared_ptr<const mpq_class> big_;
};

using Vec = std::vector<Scalar>;

bool is_zero(const Vec& v);
Vec zeros(std::size_t n);
// y += c * x
void axpy(Vec& y, const Scalar& c, const Vec& x);
std::string to_string(const Vec& v);

// Sparse vector with strictly increasing indices and no zero entries.
using SparseVec = std::vector<std::pair<std::uint32_t, Scalar>>;

SparseVec sparsify(const Vec& v);
Vec densify(const SparseVec& v, std::size_t n);
void axpy(Vec& y, const Scalar& c, const SparseVec& x);

class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static Mat identity(std::size_t n);
  static Mat from_rows(const std::vector<Vec>& rows, std::size_t cols);
  static Mat from_columns(const std::vector<Vec>& cols, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Scalar& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  Vec row(std::size_t r) const;
  Vec col(std::size_t c) const;
  void append_row(const Vec& v);

  Mat transpose() const;
  Vec apply(const Vec& x) const;  // this * x
  bool is_zero() const;
  bool operator==(const Mat& o) const = default;

  friend Mat operator*(const Mat& a, const Mat& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> a_;
};

struct RrefResult {
  Mat form;
  std::vector<std::size_t> pivots;
};

// Gauss-Jordan with the leftmost pivot column and topmost candidate row.
RrefResult rref(Mat m);
std::size_t rank(const Mat& m);
// Rows form a basis of {v : m v = 0}; one row per free column of rref(m),
// with a 1 in that free column and 0 in the other free columns.
Mat kernel_basis(const Mat& m);
// Some x with m x = b (free variables zero), or nullopt when inconsistent.
std::optional<Vec> solve(const Mat& m, const Vec& b);
std::optional<Mat> inverse(const Mat& m);
Scalar determinant(Mat m);

// Incrementally maintained reduced row echelon basis of a subspace of k^n.
// Every stored row has a 1 in its pivot column and 0 in all other pivots.
class RowSpace {
 public:
  explicit RowSpace(std::size_t n = 0) : n_(n), pivot_row_(n, npos) {}

  std::size_t ambient() const { return n_; }
  std::size_t dim() const { return rows_.size(); }
  const std::vector<Vec>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }
  bool is_pivot(std::size_t c) const { return pivot_row_[c] != npos; }

  // Reduces v modulo the space in place.
  void reduce(Vec& v) const;
  bool contains(Vec v) const;
  // Returns true iff v was independent of the current rows.
  bool insert(Vec v);
  // Indices of the non-pivot columns, increasing.
  std::vector<std::size_t> free_columns() const;

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t n_;
  std::vector<Vec> rows_;
  std::vector<std::size_t> pivots_;
  std::vector<std::size_t> pivot_row_;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qproj::la

#include "qproj/exactla.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cctype>
#include <limits>
#include <numeric>
#include <sstream>

namespace qproj::la {

namespace {

std::atomic<std::uint32_t> g_prime{0};

using u128 = unsigned __int128;
using i128 = __int128;

constexpr i128 kMax = std::numeric_limits<std::int64_t>::max();

u128 uabs(i128 x) { return x < 0 ? static_cast<u128>(-x) : static_cast<u128>(x); }

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits(i128 x) { return x <= kMax && x >= -kMax; }

mpz_class to_mpz(i128 x) {
  u128 m = uabs(x);
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(m >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<std::uint64_t>(m)));
  mpz_class r = (hi << 64) + lo;
  return x < 0 ? mpz_class(-r) : r;
}

std::int64_t mod_p(i128 x, std::uint32_t p) {
  i128 r = x % static_cast<i128>(p);
  if (r < 0) r += p;
  return static_cast<std::int64_t>(r);
}

std::int64_t inv_mod(std::int64_t a, std::uint32_t p) {
  if (a == 0) throw std::domain_error("division by zero in prime field");
  // Fermat: a^(p-2)
  std::uint64_t result = 1, base = static_cast<std::uint64_t>(a), e = p - 2;
  while (e) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::int64_t>(result);
}

std::int64_t mpz_mod_p(const mpz_class& z, std::uint32_t p) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), z.get_mpz_t(), p);
  return static_cast<std::int64_t>(r.get_ui());
}

bool is_probable_prime(std::uint32_t p) {
  if (p < 2) return false;
  for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

std::string Field::name() const { return is_prime() ? "F_" + std::to_string(prime) : "Q"; }

Field Field::parse(std::string_view text) {
  if (text == "q" || text == "Q") return {};
  if (text.size() > 2 && (text.substr(0, 2) == "p:" || text.substr(0, 2) == "P:")) {
    std::uint32_t p = 0;
    auto body = text.substr(2);
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), p);
    if (ec == std::errc() && ptr == body.data() + body.size() && is_probable_prime(p) && p < (1u << 31))
      return Field{p};
  }
  throw std::invalid_argument("bad field specification '" + std::string(text) +
                              "' (expected q or p:<prime below 2^31>)");
}

void set_field(Field f) { g_prime.store(f.prime, std::memory_order_relaxed); }
Field field() { return Field{g_prime.load(std::memory_order_relaxed)}; }

// ---------------------------------------------------------------------------
// Scalar

Scalar::Scalar(long long n) {
  if (std::uint32_t p = g_prime.load(std::memory_order_relaxed)) {
    num_ = mod_p(n, p);
  } else if (n == std::numeric_limits<long long>::min()) {
    assign_mpq(mpq_class(mpz_class(std::to_string(n))));
  } else {
    num_ = n;
  }
}

Scalar::Scalar(long long num, long long den) { *this = from_wide(num, den); }

Scalar Scalar::from_wide(i128 num, i128 den) {
  if (den == 0) throw std::domain_error("zero denominator");
  Scalar s;
  if (std::uint32_t p = g_prime.load(std::memory_order_relaxed)) {
    std::int64_t d = mod_p(den, p);
    s.num_ = static_cast<std::int64_t>(static_cast<i128>(mod_p(num, p)) * inv_mod(d, p) % p);
    return s;
  }
  if (num == 0) return s;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (den != 1) {
    u128 g = gcd128(uabs(num), uabs(den));
    if (g > 1) {
      num /= static_cast<i128>(g);
      den /= static_cast<i128>(g);
    }
  }
  if (fits(num) && fits(den)) {
    s.num_ = static_cast<std::int64_t>(num);
    s.den_ = static_cast<std::int64_t>(den);
  } else {
    mpq_class q(to_mpz(num), to_mpz(den));
    q.canonicalize();
    s.assign_mpq(std::move(q));
  }
  return s;
}

void Scalar::assign_mpq(mpq_class q) {
  if (std::uint32_t p = g_prime.load(std::memory_order_relaxed)) {
    std::int64_t n = mpz_mod_p(q.get_num(), p);
    std::int64_t d = mpz_mod_p(q.get_den(), p);
    num_ = static_cast<std::int64_t>(static_cast<i128>(n) * inv_mod(d, p) % p);
    den_ = 1;
    big_.reset();
    return;
  }
  if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p() &&
      q.get_num() != std::numeric_limits<long>::min()) {
    num_ = q.get_num().get_si();
    den_ = q.get_den().get_si();
    big_.reset();
  } else {
    num_ = 0;
    den_ = 1;
    big_ = std::make_shared<const mpq_class>(std::move(q));
  }
}

Scalar Scalar::from_mpq(const mpq_class& q) {
  Scalar s;
  mpq_class c(q);
  c.canonicalize();
  s.assign_mpq(std::move(c));
  return s;
}

Scalar Scalar::parse(std::string_view text) {
  std::string t(text);
  t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }), t.end());
  if (t.empty()) throw std::invalid_argument("empty number");
  mpq_class q;
  if (q.set_str(t, 10) != 0) throw std::invalid_argument("bad rational literal '" + t + "'");
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + t + "'");
  return from_mpq(q);
}

int Scalar::sign() const {
  if (big_) return sgn(*big_);
  return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0);
}

bool Scalar::is_integer() const { return big_ ? big_->get_den() == 1 : den_ == 1; }

mpq_class Scalar::to_mpq() const {
  if (big_) return *big_;
  return mpq_class(mpz_class(static_cast<long>(num_)), mpz_class(static_cast<long>(den_)));
}

std::string Scalar::str() const {
  if (big_) return big_->get_str();
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw std::domain_error("inverse of zero");
  if (std::uint32_t p = g_prime.load(std::memory_order_relaxed)) {
    Scalar s;
    s.num_ = inv_mod(num_, p);
    return s;
  }
  if (big_) return from_mpq(1 / *big_);
  return from_wide(den_, num_);
}

Scalar Scalar::operator-() const {
  if (std::uint32_t p = g_prime.load(std::memory_order_relaxed)) {
    Scalar s;
    s.num_ = num_ == 0 ? 0 : p - num_;
    return s;
  }
  if (big_) return from_mpq(-*big_);
  Scalar s;
  s.num_ = -num_;
  s.den_ = den_;
  return s;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  if (std::uint32_t p = g_prime.load(std::memory_order_relaxed)) {
    num_ = (num_ + o.num_) % p;
    return *this;
  }
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (big_ || o.big_) {
    assign_mpq(to_mpq() + o.to_mpq());
    return *this;
  }
  if (den_ == 1 && o.den_ == 1) {
    i128 s = static_cast<i128>(num_) + o.num_;
    if (fits(s)) {
      num_ = static_cast<std::int64_t>(s);
      return *this;
    }
  }
  *this = from_wide(static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_,
                    static_cast<i128>(den_) * o.den_);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o) {
  if (std::uint32_t p = g_prime.load(std::memory_order_relaxed)) {
    num_ = static_cast<std::int64_t>(static_cast<i128>(num_) * o.num_ % p);
    return *this;
  }
  if (is_zero() || o.is_zero()) return *this = Scalar();
  if (big_ || o.big_) {
    assign_mpq(to_mpq() * o.to_mpq());
    return *this;
  }
  if (den_ == 1 && o.den_ == 1) {
    i128 m = static_cast<i128>(num_) * o.num_;
    if (fits(m)) {
      num_ = static_cast<std::int64_t>(m);
      return *this;
    }
    return *this = from_wide(m, 1);
  }
  std::int64_t g1 = std::gcd(num_, o.den_);
  std::int64_t g2 = std::gcd(o.num_, den_);
  i128 n = static_cast<i128>(num_ / g1) * (o.num_ / g2);
  i128 d = static_cast<i128>(den_ / g2) * (o.den_ / g1);
  if (fits(n) && fits(d)) {
    num_ = static_cast<std::int64_t>(n);
    den_ = static_cast<std::int64_t>(d);
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    return *this;
  }
  return *this = from_wide(n, d);
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inverse(); }

bool Scalar::operator==(const Scalar& o) const {
  if (big_ || o.big_) return big_ && o.big_ && *big_ == *o.big_;
  return num_ == o.num_ && den_ == o.den_;
}

// ---------------------------------------------------------------------------
// vectors

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}

Vec zeros(std::size_t n) { return Vec(n); }

void axpy(Vec& y, const Scalar& c, const Vec& x) {
  if (y.size() != x.size()) throw DimensionError("axpy: length mismatch");
  if (c.is_zero()) return;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!x[i].is_zero()) y[i] += c * x[i];
}

std::string to_string(const Vec& v) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].str();
  os << ']';
  return os.str();
}

SparseVec sparsify(const Vec& v) {
  SparseVec s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) s.emplace_back(static_cast<std::uint32_t>(i), v[i]);
  return s;
}

Vec densify(const SparseVec& v, std::size_t n) {
  Vec d(n);
  for (const auto& [i, c] : v) d.at(i) = c;
  return d;
}

void axpy(Vec& y, const Scalar& c, const SparseVec& x) {
  if (c.is_zero()) return;
  for (const auto& [i, v] : x) y[i] += c * v;
}

// ---------------------------------------------------------------------------
// Mat

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Mat Mat::from_rows(const std::vector<Vec>& rows, std::size_t cols) {
  Mat m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DimensionError("from_rows: ragged input");
    std::copy(rows[r].begin(), rows[r].end(), m.a_.begin() + static_cast<std::ptrdiff_t>(r * cols));
  }
  return m;
}

Mat Mat::from_columns(const std::vector<Vec>& cols, std::size_t rows) {
  Mat m(rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != rows) throw DimensionError("from_columns: ragged input");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r];
  }
  return m;
}

Vec Mat::row(std::size_t r) const {
  return Vec(a_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
             a_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

Vec Mat::col(std::size_t c) const {
  Vec v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void Mat::append_row(const Vec& v) {
  if (rows_ == 0 && cols_ == 0) cols_ = v.size();
  if (v.size() != cols_) throw DimensionError("append_row: length mismatch");
  a_.insert(a_.end(), v.begin(), v.end());
  ++rows_;
}

Mat Mat::transpose() const {
  Mat t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Vec Mat::apply(const Vec& x) const {
  if (x.size() != cols_) throw DimensionError("apply: length mismatch");
  Vec y(rows_);
  for (std::size_t c = 0; c < cols_; ++c) {
    if (x[c].is_zero()) continue;
    for (std::size_t r = 0; r < rows_; ++r)
      if (!(*this)(r, c).is_zero()) y[r] += (*this)(r, c) * x[c];
  }
  return y;
}

bool Mat::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const Scalar& s) { return s.is_zero(); });
}

Mat operator*(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) throw DimensionError("matrix product: shape mismatch");
  Mat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Scalar& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        if (!b(k, j).is_zero()) c(i, j) += aik * b(k, j);
    }
  return c;
}

// ---------------------------------------------------------------------------
// elimination

RrefResult rref(Mat m) {
  RrefResult out;
  const std::size_t rows = m.rows(), cols = m.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && m(p, c).is_zero()) ++p;
    if (p == rows) continue;
    if (p != r)
      for (std::size_t j = c; j < cols; ++j) std::swap(m(p, j), m(r, j));
    Scalar inv = m(r, c).inverse();
    if (!inv.is_one())
      for (std::size_t j = c; j < cols; ++j)
        if (!m(r, j).is_zero()) m(r, j) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      Scalar f = m(i, c);
      for (std::size_t j = c; j < cols; ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.form = std::move(m);
  return out;
}

std::size_t rank(const Mat& m) {
  if (m.empty()) return 0;
  return rref(m).pivots.size();
}

Mat kernel_basis(const Mat& m) {
  const std::size_t n = m.cols();
  if (m.rows() == 0) return Mat::identity(n);
  auto [form, pivots] = rref(m);
  std::vector<bool> is_pivot(n, false);
  for (auto c : pivots) is_pivot[c] = true;
  Mat k(0, n);
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    Vec v(n);
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      if (!form(r, f).is_zero()) v[pivots[r]] = -form(r, f);
    k.append_row(v);
  }
  return k;
}

std::optional<Vec> solve(const Mat& m, const Vec& b) {
  if (m.rows() != b.size()) throw DimensionError("solve: rows(m) != length(b)");
  Mat aug(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
    aug(r, m.cols()) = b[r];
  }
  auto [form, pivots] = rref(std::move(aug));
  Vec x(m.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] == m.cols()) return std::nullopt;
    x[pivots[r]] = form(r, m.cols());
  }
  return x;
}

std::optional<Mat> inverse(const Mat& m) {
  if (m.rows() != m.cols()) throw DimensionError("inverse: matrix not square");
  const std::size_t n = m.rows();
  Mat aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
    aug(r, n + r) = 1;
  }
  auto [form, pivots] = rref(std::move(aug));
  if (pivots.size() < n || (n > 0 && pivots[n - 1] != n - 1)) return std::nullopt;
  Mat inv(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = form(r, n + c);
  return inv;
}

Scalar determinant(Mat m) {
  if (m.rows() != m.cols()) throw DimensionError("determinant: matrix not square");
  const std::size_t n = m.rows();
  Scalar det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c).is_zero()) ++p;
    if (p == n) return Scalar();
    if (p != c) {
      for (std::size_t j = c; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    Scalar inv = m(c, c).inverse();
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c).is_zero()) continue;
      Scalar f = m(i, c) * inv;
      for (std::size_t j = c; j < n; ++j)
        if (!m(c, j).is_zero()) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

// ---------------------------------------------------------------------------
// RowSpace

void RowSpace::reduce(Vec& v) const {
  if (v.size() != n_) throw DimensionError("RowSpace::reduce: length mismatch");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Scalar& c = v[pivots_[i]];
    if (c.is_zero()) continue;
    Scalar f = c;
    const Vec& row = rows_[i];
    for (std::size_t j = 0; j < n_; ++j)
      if (!row[j].is_zero()) v[j] -= f * row[j];
  }
}

bool RowSpace::contains(Vec v) const {
  reduce(v);
  return is_zero(v);
}

bool RowSpace::insert(Vec v) {
  reduce(v);
  std::size_t c = 0;
  while (c < n_ && v[c].is_zero()) ++c;
  if (c == n_) return false;
  Scalar inv = v[c].inverse();
  for (auto& x : v)
    if (!x.is_zero()) x *= inv;
  for (auto& row : rows_) {
    if (row[c].is_zero()) continue;
    Scalar f = row[c];
    for (std::size_t j = 0; j < n_; ++j)
      if (!v[j].is_zero()) row[j] -= f * v[j];
  }
  pivot_row_[c] = rows_.size();
  pivots_.push_back(c);
  rows_.push_back(std::move(v));
  return true;
}

std::vector<std::size_t> RowSpace::free_columns() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < n_; ++c)
    if (pivot_row_[c] == npos) out.push_back(c);
  return out;
}

}  // namespace qproj::la

#pragma once

// Words and noncommutative polynomials in a free associative algebra with
// positively graded generators. Monomial order: degree first, then
// left-lexicographic in the declared generator order.

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qproj/exactla.hpp"

namespace qproj::fa {

using la::Scalar;

class GeneratorSet {
 public:
  GeneratorSet() = default;
  GeneratorSet(std::vector<std::string> names, std::vector<int> degrees);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  int degree(std::size_t i) const { return degrees_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<int>& degrees() const { return degrees_; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  bool all_degree_one() const;

  bool operator==(const GeneratorSet&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<int> degrees_;
};

// A word stores its letters as generator indices (one byte each) together
// with its total degree.
class Word {
 public:
  Word() = default;
  Word(const GeneratorSet& gens, const std::vector<std::size_t>& letters);
  static Word letter(const GeneratorSet& gens, std::size_t g);

  int degree() const { return degree_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  std::size_t operator[](std::size_t i) const { return static_cast<unsigned char>(letters_[i]); }
  const std::string& letters() const { return letters_; }

  Word operator*(const Word& o) const;
  Word subword(const GeneratorSet& gens, std::size_t pos, std::size_t len) const;
  std::string str(const GeneratorSet& gens) const;

  bool operator==(const Word& o) const { return letters_ == o.letters_; }
  std::strong_ordering operator<=>(const Word& o) const;

 private:
  std::string letters_;
  int degree_ = 0;
};

std::strong_ordering compare_deglex(const Word& u, const Word& v);

struct WordHash {
  std::size_t operator()(const Word& w) const { return std::hash<std::string>{}(w.letters()); }
};

// Finite linear combination of words, kept sorted by decreasing monomial
// order (leading term first) with no zero coefficients.
class NcPoly {
 public:
  using Term = std::pair<Word, Scalar>;

  NcPoly() = default;
  static NcPoly constant(const Scalar& c);
  static NcPoly monomial(Word w, Scalar c = 1);
  static NcPoly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  const Word& leading_word() const { return terms_.front().first; }
  const Scalar& leading_coeff() const { return terms_.front().second; }
  // Common degree of all terms; nullopt for zero or inhomogeneous input.
  std::optional<int> homogeneous_degree() const;
  Scalar coeff(const Word& w) const;

  NcPoly& operator+=(const NcPoly& o);
  NcPoly& operator-=(const NcPoly& o);
  NcPoly operator-() const;
  NcPoly scaled(const Scalar& c) const;
  NcPoly monic() const;
  friend NcPoly operator+(NcPoly a, const NcPoly& b) { return a += b; }
  friend NcPoly operator-(NcPoly a, const NcPoly& b) { return a -= b; }
  friend NcPoly operator*(const NcPoly& a, const NcPoly& b);
  // left * this * right for words
  NcPoly sandwich(const Word& left, const Word& right) const;

  bool operator==(const NcPoly& o) const = default;
  std::string str(const GeneratorSet& gens) const;

 private:
  void normalize();
  std::vector<Term> terms_;
};

NcPoly mul(const NcPoly& p, const NcPoly& q);

// All words of total degree d, increasing in the monomial order.
std::vector<Word> monomials_of_degree(const GeneratorSet& gens, int d);

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Grammar: expr := term (('+'|'-') term)*;  term := factor ('*' factor)*;
// factor := ['-'] atom ['^' int];  atom := number ['/' number] | ident | '(' expr ')'.
// '*' is concatenation in the free algebra.
NcPoly parse_poly(const GeneratorSet& gens, std::string_view text);

}  // namespace qproj::fa

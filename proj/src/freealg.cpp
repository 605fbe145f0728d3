#include "qproj/freealg.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace qproj::fa {

GeneratorSet::GeneratorSet(std::vector<std::string> names, std::vector<int> degrees)
    : names_(std::move(names)), degrees_(std::move(degrees)) {
  if (names_.size() != degrees_.size())
    throw std::invalid_argument("generator names and degrees differ in length");
  if (names_.size() > 255) throw std::invalid_argument("at most 255 generators are supported");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (degrees_[i] < 1) throw std::invalid_argument("generator '" + names_[i] + "' has degree < 1");
    if (!seen.insert(names_[i]).second) throw std::invalid_argument("duplicate generator '" + names_[i] + "'");
  }
}

std::optional<std::size_t> GeneratorSet::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

bool GeneratorSet::all_degree_one() const {
  return std::all_of(degrees_.begin(), degrees_.end(), [](int d) { return d == 1; });
}

// ---------------------------------------------------------------------------

Word::Word(const GeneratorSet& gens, const std::vector<std::size_t>& letters) {
  letters_.reserve(letters.size());
  for (auto g : letters) {
    letters_.push_back(static_cast<char>(static_cast<unsigned char>(g)));
    degree_ += gens.degree(g);
  }
}

Word Word::letter(const GeneratorSet& gens, std::size_t g) { return Word(gens, {g}); }

Word Word::operator*(const Word& o) const {
  Word w;
  w.letters_ = letters_ + o.letters_;
  w.degree_ = degree_ + o.degree_;
  return w;
}

Word Word::subword(const GeneratorSet& gens, std::size_t pos, std::size_t len) const {
  Word w;
  w.letters_ = letters_.substr(pos, len);
  for (char c : w.letters_) w.degree_ += gens.degree(static_cast<unsigned char>(c));
  return w;
}

std::string Word::str(const GeneratorSet& gens) const {
  if (letters_.empty()) return "1";
  std::string out;
  std::size_t i = 0;
  while (i < letters_.size()) {
    std::size_t j = i;
    while (j < letters_.size() && letters_[j] == letters_[i]) ++j;
    if (!out.empty()) out += '*';
    out += gens.name(static_cast<unsigned char>(letters_[i]));
    if (j - i > 1) out += '^' + std::to_string(j - i);
    i = j;
  }
  return out;
}

std::strong_ordering Word::operator<=>(const Word& o) const {
  if (degree_ != o.degree_) return degree_ <=> o.degree_;
  int c = letters_.compare(o.letters_);
  return c < 0 ? std::strong_ordering::less
               : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

std::strong_ordering compare_deglex(const Word& u, const Word& v) { return u <=> v; }

// ---------------------------------------------------------------------------

NcPoly NcPoly::constant(const Scalar& c) { return monomial(Word(), c); }

NcPoly NcPoly::monomial(Word w, Scalar c) {
  NcPoly p;
  if (!c.is_zero()) p.terms_.emplace_back(std::move(w), std::move(c));
  return p;
}

NcPoly NcPoly::from_terms(std::vector<Term> terms) {
  NcPoly p;
  p.terms_ = std::move(terms);
  p.normalize();
  return p;
}

void NcPoly::normalize() {
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.first > b.first; });
  std::vector<Term> out;
  for (auto& t : terms_) {
    if (!out.empty() && out.back().first == t.first)
      out.back().second += t.second;
    else
      out.push_back(std::move(t));
    if (out.back().second.is_zero()) out.pop_back();
  }
  terms_ = std::move(out);
}

std::optional<int> NcPoly::homogeneous_degree() const {
  if (terms_.empty()) return std::nullopt;
  int d = terms_.front().first.degree();
  for (const auto& t : terms_)
    if (t.first.degree() != d) return std::nullopt;
  return d;
}

Scalar NcPoly::coeff(const Word& w) const {
  for (const auto& t : terms_)
    if (t.first == w) return t.second;
  return Scalar();
}

NcPoly& NcPoly::operator+=(const NcPoly& o) {
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->first > b->first)) {
      out.push_back(std::move(*a++));
    } else if (a == terms_.end() || b->first > a->first) {
      out.push_back(*b++);
    } else {
      Scalar c = a->second + b->second;
      if (!c.is_zero()) out.emplace_back(a->first, std::move(c));
      ++a;
      ++b;
    }
  }
  terms_ = std::move(out);
  return *this;
}

NcPoly& NcPoly::operator-=(const NcPoly& o) { return *this += -o; }

NcPoly NcPoly::operator-() const { return scaled(Scalar(-1)); }

NcPoly NcPoly::scaled(const Scalar& c) const {
  if (c.is_zero()) return {};
  NcPoly p = *this;
  for (auto& t : p.terms_) t.second *= c;
  return p;
}

NcPoly NcPoly::monic() const {
  if (terms_.empty()) return {};
  return scaled(leading_coeff().inverse());
}

NcPoly operator*(const NcPoly& a, const NcPoly& b) {
  std::vector<NcPoly::Term> terms;
  terms.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& [u, c] : a.terms_)
    for (const auto& [v, d] : b.terms_) terms.emplace_back(u * v, c * d);
  return NcPoly::from_terms(std::move(terms));
}

NcPoly mul(const NcPoly& p, const NcPoly& q) { return p * q; }

NcPoly NcPoly::sandwich(const Word& left, const Word& right) const {
  NcPoly p;
  p.terms_.reserve(terms_.size());
  // concatenation on both sides preserves the order, so no re-sort is needed
  for (const auto& [w, c] : terms_) p.terms_.emplace_back(left * w * right, c);
  return p;
}

std::string NcPoly::str(const GeneratorSet& gens) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    Scalar a = c;
    bool negative = a.sign() < 0;
    if (negative) a = -a;
    if (first)
      os << (negative ? "-" : "");
    else
      os << (negative ? " - " : " + ");
    first = false;
    if (w.empty()) {
      os << a.str();
    } else {
      if (!a.is_one()) os << a.str() << '*';
      os << w.str(gens);
    }
  }
  return os.str();
}

std::vector<Word> monomials_of_degree(const GeneratorSet& gens, int d) {
  std::vector<Word> out;
  if (d < 0) return out;
  std::vector<std::size_t> cur;
  auto rec = [&](auto&& self, int remaining) -> void {
    if (remaining == 0) {
      out.emplace_back(gens, cur);
      return;
    }
    for (std::size_t g = 0; g < gens.size(); ++g) {
      if (gens.degree(g) > remaining) continue;
      cur.push_back(g);
      self(self, remaining - gens.degree(g));
      cur.pop_back();
    }
  };
  rec(rec, d);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// parser

namespace {

class Parser {
 public:
  Parser(const GeneratorSet& gens, std::string_view text) : gens_(gens), s_(text) {}

  NcPoly parse() {
    NcPoly p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("polynomial '" + std::string(s_) + "': " + msg + " at offset " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NcPoly expr() {
    NcPoly acc = term();
    while (true) {
      if (eat('+'))
        acc += term();
      else if (eat('-'))
        acc -= term();
      else
        return acc;
    }
  }

  NcPoly term() {
    NcPoly acc = factor();
    while (eat('*')) acc = acc * factor();
    return acc;
  }

  NcPoly factor() {
    bool negate = eat('-');
    NcPoly base = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      int e = std::stoi(std::string(s_.substr(start, pos_ - start)));
      NcPoly r = NcPoly::constant(1);
      for (int i = 0; i < e; ++i) r = r * base;
      base = std::move(r);
    }
    return negate ? -base : base;
  }

  std::string digits() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  NcPoly atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NcPoly p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num = digits();
      std::size_t save = pos_;
      if (eat('/')) {
        std::string den = digits();
        if (den.empty()) {
          pos_ = save;
          fail("expected denominator");
        }
        num += "/" + den;
      }
      return NcPoly::constant(Scalar::parse(num));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string_view name = s_.substr(start, pos_ - start);
      auto g = gens_.index_of(name);
      if (!g) {
        pos_ = start;
        fail("unknown generator '" + std::string(name) + "'");
      }
      return NcPoly::monomial(Word::letter(gens_, *g));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  const GeneratorSet& gens_;
  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

NcPoly parse_poly(const GeneratorSet& gens, std::string_view text) { return Parser(gens, text).parse(); }

}  // namespace qproj::fa

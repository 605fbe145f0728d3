#include "qproj/gbasis.hpp"

#include <algorithm>
#include <set>

namespace qproj::gb {

namespace {

using PivotMap = std::map<Word, NcPoly>;

// Clears every term at index >= start whose word is a pivot (pivots are
// monic and keyed by leading word).
void reduce_by(NcPoly& p, const PivotMap& piv, std::size_t start) {
  std::size_t idx = start;
  while (idx < p.terms().size()) {
    const auto& [w, c] = p.terms()[idx];
    auto it = piv.find(w);
    if (it == piv.end()) {
      ++idx;
      continue;
    }
    p -= it->second.scaled(c);
  }
}

void insert_echelon(PivotMap& piv, NcPoly p) {
  while (!p.is_zero()) {
    auto it = piv.find(p.leading_word());
    if (it == piv.end()) {
      Word lw = p.leading_word();
      piv.emplace(std::move(lw), p.monic());
      return;
    }
    p -= it->second.scaled(p.leading_coeff());
  }
}

}  // namespace

Ideal::Ideal(GeneratorSet g, std::vector<NcPoly> gens_list) : gens(std::move(g)) {
  for (auto& p : gens_list) {
    if (p.is_zero()) continue;
    auto d = p.homogeneous_degree();
    if (!d) throw std::invalid_argument("relation '" + p.str(gens) + "' is not homogeneous");
    if (*d < 1) throw std::invalid_argument("relation '" + p.str(gens) + "' is constant");
    generators.push_back(std::move(p));
  }
}

GroebnerBasis::GroebnerBasis(GeneratorSet gens, std::vector<NcPoly> elements, int truncation)
    : gens_(std::move(gens)), elements_(std::move(elements)), truncation_(truncation) {
  std::sort(elements_.begin(), elements_.end(),
            [](const NcPoly& a, const NcPoly& b) { return a.leading_word() < b.leading_word(); });
  std::set<std::size_t> lengths;
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    lead_index_.emplace(elements_[i].leading_word().letters(), i);
    lengths.insert(elements_[i].leading_word().length());
  }
  lead_lengths_.assign(lengths.begin(), lengths.end());
}

std::optional<std::pair<std::size_t, std::size_t>> GroebnerBasis::find_leading(const Word& w) const {
  const std::string& s = w.letters();
  for (std::size_t pos = 0; pos < s.size(); ++pos) {
    for (std::size_t len : lead_lengths_) {
      if (pos + len > s.size()) break;
      auto it = lead_index_.find(s.substr(pos, len));
      if (it != lead_index_.end()) return std::make_pair(pos, it->second);
    }
  }
  return std::nullopt;
}

bool GroebnerBasis::has_leading_suffix(const Word& w) const {
  const std::string& s = w.letters();
  for (std::size_t len : lead_lengths_) {
    if (len > s.size()) break;
    if (lead_index_.count(s.substr(s.size() - len))) return true;
  }
  return false;
}

bool GroebnerBasis::is_normal(const Word& w) const { return !find_leading(w); }

const NcPoly& GroebnerBasis::normal_form(const Word& w) const {
  if (w.degree() > truncation_)
    throw TruncationError("degree " + std::to_string(w.degree()) + " exceeds truncation " +
                          std::to_string(truncation_));
  std::lock_guard lock(cache_->mutex);
  auto it = cache_->nf.find(w);
  if (it != cache_->nf.end()) return *it->second;
  NcPoly r;
  auto occ = find_leading(w);
  if (!occ) {
    r = NcPoly::monomial(w);
  } else {
    auto [pos, gi] = *occ;
    const NcPoly& g = elements_[gi];
    std::size_t len = g.leading_word().length();
    Word left = w.subword(gens_, 0, pos);
    Word right = w.subword(gens_, pos + len, w.length() - pos - len);
    for (std::size_t t = 1; t < g.terms().size(); ++t) {
      const auto& [tw, c] = g.terms()[t];
      r -= normal_form(left * tw * right).scaled(c);
    }
  }
  auto [ins, ok] = cache_->nf.emplace(w, std::make_unique<NcPoly>(std::move(r)));
  return *ins->second;
}

NcPoly GroebnerBasis::normal_form(const NcPoly& p) const {
  std::vector<NcPoly::Term> acc;
  for (const auto& [w, c] : p.terms())
    for (const auto& [v, d] : normal_form(w).terms()) acc.emplace_back(v, c * d);
  return NcPoly::from_terms(std::move(acc));
}

std::vector<Word> GroebnerBasis::normal_words(int d) const {
  if (d > truncation_)
    throw TruncationError("degree " + std::to_string(d) + " exceeds truncation " + std::to_string(truncation_));
  if (d < 0) return {};
  std::lock_guard lock(cache_->mutex);
  auto it = cache_->normal_words.find(d);
  if (it != cache_->normal_words.end()) return it->second;
  std::vector<Word> out;
  if (d == 0) {
    out.emplace_back();
  } else {
    for (std::size_t g = 0; g < gens_.size(); ++g) {
      int e = gens_.degree(g);
      if (e > d) continue;
      Word letter = Word::letter(gens_, g);
      for (const auto& u : normal_words(d - e)) {
        Word w = u * letter;
        if (!has_leading_suffix(w)) out.push_back(std::move(w));
      }
    }
    std::sort(out.begin(), out.end());
  }
  cache_->normal_words.emplace(d, out);
  return out;
}

GroebnerBasis buchberger_truncated(const Ideal& ideal, int D) {
  const GeneratorSet& gens = ideal.gens;
  int max_deg = 0;
  for (const auto& g : ideal.generators) max_deg = std::max(max_deg, *g.homogeneous_degree());
  if (D < max_deg)
    throw std::invalid_argument("truncation " + std::to_string(D) + " below generator degree " +
                                std::to_string(max_deg));

  std::vector<NcPoly> basis;
  for (int d = 1; d <= D; ++d) {
    std::vector<NcPoly> cands;
    for (const auto& g : ideal.generators)
      if (*g.homogeneous_degree() == d) cands.push_back(g);

    for (const auto& g : basis) {
      const Word& u = g.leading_word();
      for (const auto& h : basis) {
        const Word& v = h.leading_word();
        std::size_t max_k = std::min(u.length(), v.length());
        for (std::size_t k = 1; k < max_k; ++k) {
          if (u.letters().compare(u.length() - k, k, v.letters(), 0, k) != 0) continue;
          Word v_rest = v.subword(gens, k, v.length() - k);
          if (u.degree() + v_rest.degree() != d) continue;
          Word u_head = u.subword(gens, 0, u.length() - k);
          cands.push_back(g.sandwich(Word(), v_rest) - h.sandwich(u_head, Word()));
        }
      }
    }
    if (cands.empty()) continue;

    GroebnerBasis lower(gens, basis, d);
    PivotMap piv;
    for (const auto& c : cands) insert_echelon(piv, lower.normal_form(c));
    for (auto& [w, p] : piv) reduce_by(p, piv, 1);
    for (auto& [w, p] : piv) basis.push_back(std::move(p));
  }
  return GroebnerBasis(gens, std::move(basis), D);
}

std::size_t brute_force_quotient_dim(const Ideal& ideal, int d) {
  const GeneratorSet& gens = ideal.gens;
  std::vector<std::vector<NcPoly>> slices(std::max(d, 0) + 1);
  for (int e = 1; e <= d; ++e) {
    PivotMap piv;
    for (const auto& g : ideal.generators)
      if (*g.homogeneous_degree() == e) insert_echelon(piv, g);
    for (std::size_t x = 0; x < gens.size(); ++x) {
      int dx = gens.degree(x);
      if (dx > e) continue;
      Word letter = Word::letter(gens, x);
      for (const auto& r : slices[e - dx]) {
        insert_echelon(piv, r.sandwich(letter, Word()));
        insert_echelon(piv, r.sandwich(Word(), letter));
      }
    }
    for (auto& [w, p] : piv) slices[e].push_back(std::move(p));
  }
  return fa::monomials_of_degree(gens, d).size() - (d >= 1 ? slices[d].size() : 0);
}

}  // namespace qproj::gb

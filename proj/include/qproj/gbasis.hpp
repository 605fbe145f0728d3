#pragma once

// Degree-truncated two-sided Groebner bases for homogeneous ideals in a free
// algebra, with normal forms and normal-word bases of the quotient.

#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "qproj/freealg.hpp"

namespace qproj::gb {

using fa::GeneratorSet;
using fa::NcPoly;
using fa::Word;
using la::Scalar;

class TruncationError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

struct Ideal {
  GeneratorSet gens;
  std::vector<NcPoly> generators;

  // Throws std::invalid_argument on inhomogeneous or constant generators.
  // Zero generators are dropped.
  Ideal(GeneratorSet g, std::vector<NcPoly> gens_list);
};

class GroebnerBasis {
 public:
  GroebnerBasis(GeneratorSet gens, std::vector<NcPoly> elements, int truncation);

  const GeneratorSet& gens() const { return gens_; }
  const std::vector<NcPoly>& elements() const { return elements_; }
  int truncation() const { return truncation_; }
  bool reduced() const { return true; }

  bool is_normal(const Word& w) const;
  NcPoly normal_form(const NcPoly& p) const;
  // Normal form of a single word, memoized.
  const NcPoly& normal_form(const Word& w) const;
  std::vector<Word> normal_words(int d) const;

 private:
  // Position and element index of the leftmost leading-word occurrence.
  std::optional<std::pair<std::size_t, std::size_t>> find_leading(const Word& w) const;
  bool has_leading_suffix(const Word& w) const;

  GeneratorSet gens_;
  std::vector<NcPoly> elements_;
  int truncation_;
  std::unordered_map<std::string, std::size_t> lead_index_;
  std::vector<std::size_t> lead_lengths_;

  struct Cache {
    std::recursive_mutex mutex;
    std::unordered_map<Word, std::unique_ptr<NcPoly>, fa::WordHash> nf;
    std::map<int, std::vector<Word>> normal_words;
  };
  std::unique_ptr<Cache> cache_ = std::make_unique<Cache>();
};

GroebnerBasis buchberger_truncated(const Ideal& ideal, int D);

// Dimension of the degree-d part of the quotient computed by plain sparse
// elimination on the span of all products a*g*b, independent of any
// Groebner machinery. Used as an oracle.
std::size_t brute_force_quotient_dim(const Ideal& ideal, int d);

}  // namespace qproj::gb

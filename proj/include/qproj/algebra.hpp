#pragma once

// Graded algebra carriers and constructions.
//
// PresentedAlgebra keeps generators, relations and a truncated Groebner basis.
// TabulatedAlgebra keeps degreewise bases and multiplication tables; every
// construction that forgets the presentation (quasi-Veronese, twists, Koszul
// localisations, section algebras) produces one.
//
// Basis elements of a tabulated algebra carry a block label (p, q) with
// respect to a complete set of orthogonal idempotents e_0..e_{n-1} in degree
// 0, meaning the element lies in e_p A e_q. Connected algebras have one block.

#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qproj/gbasis.hpp"

namespace qproj::alg {

using fa::GeneratorSet;
using fa::NcPoly;
using la::Mat;
using la::Scalar;
using la::SparseVec;
using la::Vec;

// ---------------------------------------------------------------------------

class PresentedAlgebra {
 public:
  // Validates homogeneity and computes the Groebner basis up to D.
  PresentedAlgebra(GeneratorSet gens, std::vector<NcPoly> relations, int D);

  const GeneratorSet& gens() const { return gens_; }
  const std::vector<NcPoly>& relations() const { return relations_; }
  int truncation() const { return truncation_; }
  const gb::GroebnerBasis& groebner() const { return *gb_; }

  // Coordinates of a homogeneous element of degree d in the normal words.
  Vec coordinates(const NcPoly& p, int d) const;
  NcPoly element(int d, const Vec& coords) const;
  bool is_quadratic() const;

 private:
  GeneratorSet gens_;
  std::vector<NcPoly> relations_;
  int truncation_;
  std::shared_ptr<const gb::GroebnerBasis> gb_;
};

PresentedAlgebra quotient_by_central(const PresentedAlgebra& a, const NcPoly& f);

// ---------------------------------------------------------------------------

class TabulatedAlgebra {
 public:
  using ProductFn = std::function<SparseVec(int d, std::size_t i, int e, std::size_t j)>;

  struct Spec {
    int truncation = 0;
    std::vector<std::vector<std::string>> labels;
    std::vector<std::vector<std::pair<int, int>>> blocks;
    int num_blocks = 1;
    std::vector<Vec> idempotents;  // in degree 0; their sum is the unit
    ProductFn product;
    std::string name;
  };

  explicit TabulatedAlgebra(Spec spec);

  int truncation() const { return spec_.truncation; }
  const std::string& name() const { return spec_.name; }
  std::size_t dim(int d) const;
  const std::string& label(int d, std::size_t i) const { return spec_.labels[d][i]; }
  std::pair<int, int> block(int d, std::size_t i) const { return spec_.blocks[d][i]; }
  int num_blocks() const { return spec_.num_blocks; }
  const Vec& idempotent(int p) const { return spec_.idempotents[p]; }
  const Vec& unit() const { return unit_; }

  // Product of basis element i of degree d with basis element j of degree e.
  const SparseVec& product(int d, std::size_t i, int e, std::size_t j) const;
  Vec multiply(int d, const Vec& a, int e, const Vec& b) const;
  // Matrix of x -> a x (left) or x -> x a (right) from degree e to d + e.
  Mat left_mult(int d, const Vec& a, int e) const;
  Mat right_mult(int d, const Vec& a, int e) const;

  // Degrees e >= 1 in which A_e is not spanned by products of lower positive
  // degrees; A_{>=1} is generated by these pieces.
  const std::vector<int>& generator_degrees() const;
  // Basis (rows) of the Jacobson radical of A_0.
  const std::vector<Vec>& radical_degree0() const;

  std::vector<std::size_t> dims() const;

 private:
  struct Slot {
    std::once_flag once;
    std::vector<SparseVec> table;
  };
  const std::vector<SparseVec>& table(int d, int e) const;

  Spec spec_;
  Vec unit_;
  std::vector<std::unique_ptr<Slot>> slots_;
  mutable std::once_flag gen_once_, rad_once_;
  mutable std::vector<int> gen_degrees_;
  mutable std::vector<Vec> radical0_;
};

using AlgebraPtr = std::shared_ptr<const TabulatedAlgebra>;

AlgebraPtr tabulate(const PresentedAlgebra& a, int D);
AlgebraPtr tabulate(const PresentedAlgebra& a);

// Associativity on basis triples (all triples when few, else a fixed sample)
// and the two-sided unit law.
bool check_associative(const TabulatedAlgebra& a, std::size_t samples = 4000);
// Exact equality of dimensions and structure constants.
bool same_structure(const TabulatedAlgebra& a, const TabulatedAlgebra& b);

// ---------------------------------------------------------------------------
// Hilbert series

struct ClosedForm {
  int shift = 0;                                // numerator starts at t^shift
  std::vector<long long> numerator;             // coefficients of t^shift, t^(shift+1), ...
  std::vector<std::pair<int, int>> denominator;  // factors (1 - t^e)^a
  std::string str() const;
};

struct HilbertSeries {
  int start = 0;
  std::vector<long long> coefficients;
  std::optional<ClosedForm> closed_form;
};

// Search over denominators prod (1-t^e)^a of total degree <= 6; accepted only
// when the numerator is a polynomial with at least three vanishing checked
// coefficients after its top term.
std::optional<ClosedForm> find_closed_form(int start, const std::vector<long long>& coefficients);
// Power-series coefficients of a closed form in degrees start..start+n-1.
std::vector<long long> expand(const ClosedForm& cf, int start, std::size_t n);
HilbertSeries make_series(int start, std::vector<long long> coefficients);
HilbertSeries hilbert(const TabulatedAlgebra& a);

// ---------------------------------------------------------------------------
// central elements

bool is_central(const TabulatedAlgebra& a, int e, const Vec& f);
// Multiplication by f injective A_d -> A_{d+e} for all d <= D - e.
bool is_regular_central(const TabulatedAlgebra& a, int e, const Vec& f);
// Basis of {z in A_2 : z g = g z for all g in A_1}.
std::vector<Vec> find_central_degree2(const TabulatedAlgebra& a);

// ---------------------------------------------------------------------------
// constructions

AlgebraPtr veronese(const AlgebraPtr& a, int r);
// Degree-i piece has block (p,q) equal to A_{ri+q-p}. Stored transposed:
// internal block (u,v) is A_{ri+u-v}, so that the product is the ordinary
// matrix product. Block labels refer to the internal orientation.
AlgebraPtr quasi_veronese(const AlgebraPtr& a, int r);
// Block dimensions of A^[r] in degree i, in the (p,q) orientation above.
std::vector<std::vector<std::size_t>> qveronese_block_dims(const TabulatedAlgebra& a, int r, int i);
AlgebraPtr opposite(const AlgebraPtr& a);

struct GradedAutomorphism {
  std::vector<Mat> maps;  // maps[d] acts on coordinates of A_d (column j = image of basis j)

  Vec apply(int d, const Vec& x) const { return maps.at(d).apply(x); }
  GradedAutomorphism inverse() const;
  static GradedAutomorphism identity(const TabulatedAlgebra& a);
};

struct AutomorphismCheck {
  bool degree_preserving = true;
  bool relations_preserved = true;
  bool invertible = true;
  std::string detail;
  bool ok() const { return degree_preserving && relations_preserved && invertible; }
};

AutomorphismCheck check_automorphism(const PresentedAlgebra& a, const std::vector<NcPoly>& images, int D);
// Induced maps on A_d for d <= D of the tabulation of a.
GradedAutomorphism induced_automorphism(const PresentedAlgebra& a, const TabulatedAlgebra& t,
                                        const std::vector<NcPoly>& images);
// Same graded pieces, product x * y = x sigma^{deg x}(y).
AlgebraPtr twist(const AlgebraPtr& a, const GradedAutomorphism& sigma);
// Presented twist: relations rewritten through sigma (for generator-degree-1
// algebras the twisted relations are r(x_i x_j) -> x_i sigma(x_j)).
PresentedAlgebra twist_presented(const PresentedAlgebra& a, const std::vector<NcPoly>& images);

PresentedAlgebra koszul_dual(const PresentedAlgebra& a);

// ---------------------------------------------------------------------------
// finite-dimensional algebras

class FiniteDimAlgebra {
 public:
  FiniteDimAlgebra() = default;
  FiniteDimAlgebra(std::vector<std::string> labels, std::vector<SparseVec> table, Vec unit);

  std::size_t dim() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const SparseVec& product(std::size_t i, std::size_t j) const { return table_[i * dim() + j]; }
  const Vec& unit() const { return unit_; }
  Vec mul(const Vec& a, const Vec& b) const;
  Mat left_matrix(const Vec& a) const;
  Mat right_matrix(const Vec& a) const;
  bool check_associative() const;

 private:
  std::vector<std::string> labels_;
  std::vector<SparseVec> table_;
  Vec unit_;
};

FiniteDimAlgebra degree_zero(const TabulatedAlgebra& a);
FiniteDimAlgebra beilinson(const AlgebraPtr& a, int l);

struct SemisimpleReport {
  std::size_t dimension = 0;
  std::size_t radical_dim = 0;
  std::size_t center_dim = 0;
  bool semisimple = false;
  std::optional<std::vector<std::size_t>> blocks;
  std::string note;
};

SemisimpleReport semisimple_type(const FiniteDimAlgebra& f);
std::vector<Vec> center_basis(const FiniteDimAlgebra& f);

class StabilizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CofA {
  FiniteDimAlgebra algebra;
  int level = 0;                 // i0
  std::vector<std::size_t> ranks;  // rank of .z : A_{2i} -> A_{2i+2}, i = 0,1,...
};

// C(A) = A^![z^{-1}]_0 realised on A^!_{2 i0}.
CofA c_of_a(const TabulatedAlgebra& a_bang, const Vec& z);

// Picks a central degree-2 element of a that is regular up to its
// truncation, preferring one whose quotient has the given Hilbert series
// (compared up to the truncation). nullopt when none is found among small
// integer combinations of the basis of find_central_degree2.
std::optional<Vec> choose_regular_central(const TabulatedAlgebra& a,
                                          const std::vector<long long>& quotient_series = {});
// Hilbert series of A/(z) for central z of degree e.
std::vector<long long> quotient_series(const TabulatedAlgebra& a, int e, const Vec& z);

}  // namespace qproj::alg

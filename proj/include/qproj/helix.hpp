#pragma once

// Exceptional sequences, helices, mutations, section algebras and
// AS-regularity evidence, all realised on graded module data over a
// tabulated algebra and certified on finite windows.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "qproj/modules.hpp"

namespace qproj::hx {

using alg::AlgebraPtr;
using mod::ExtRow;
using mod::GradedModule;
using mod::Resolution;
using la::Mat;
using la::Scalar;
using la::Vec;

// An object of the tails category: a direct sum of shifted modules.
struct Part {
  GradedModule base;
  int shift = 0;
  std::string label;
};

struct Handle {
  std::vector<Part> parts;

  std::string label() const;
  GradedModule module() const;
};

Handle object(const GradedModule& base, int shift, const std::string& label);
Handle blocked(const std::vector<Handle>& pieces);

struct ExtValue {
  std::size_t dim = 0;
  bool certified = true;
};

// Ext in the tails category of a graded algebra of global dimension 2 on
// MCM modules: q = 0, 1 through graded Hom/Ext, q = 2 through
// D uHom(N, M_nu(-2)), q >= 3 vanishes.
class TailsContext {
 public:
  TailsContext(AlgebraPtr a, alg::GradedAutomorphism nu);

  const AlgebraPtr& algebra() const { return a_; }
  const alg::GradedAutomorphism& nu() const { return nu_; }
  ExtValue ext(const Handle& m, const Handle& n, int q) const;
  ExtValue ext(const Part& m, const Part& n, int q) const;
  // Graded uExt^q(M, N)_i of base modules (q = 0, 1).
  ExtRow graded_ext(const GradedModule& m, const GradedModule& n, int q, int i) const;
  const Resolution& resolution(const GradedModule& base) const;
  bool is_mcm(const GradedModule& base) const;
  GradedModule nu_twist(const GradedModule& base) const;

 private:
  AlgebraPtr a_;
  alg::GradedAutomorphism nu_;
  mutable std::map<std::pair<const void*, int>, std::unique_ptr<Resolution>> res_;
  mutable std::map<std::pair<const void*, int>, bool> mcm_;
  mutable std::map<std::pair<const void*, int>, GradedModule> twisted_;
};

ExtValue tails_ext(const TailsContext& ctx, const Handle& m, const Handle& n, int q);

// ---------------------------------------------------------------------------

// Degree-i Hom spaces between base modules with coordinates and composition.
class HomCalculus {
 public:
  explicit HomCalculus(std::vector<GradedModule> objects);

  std::size_t size() const { return objs_.size(); }
  const GradedModule& object(std::size_t p) const { return objs_[p]; }
  // Basis of uHom(O_q, O_p)_i; each element lists the images of the
  // generators of O_q.
  const mod::HomSpace& hom(std::size_t q, std::size_t p, int i) const;
  Vec coordinates(std::size_t q, std::size_t p, int i, const std::vector<Vec>& images) const;
  // alpha in Hom(O_q, O_p)_i after beta in Hom(O_r, O_q)_j, as images of
  // the generators of O_r.
  std::vector<Vec> compose(std::size_t p, std::size_t q, std::size_t r, int i, const std::vector<Vec>& alpha, int j,
                           const std::vector<Vec>& beta) const;
  // Images of the generators under the identity of O_p.
  std::vector<Vec> identity(std::size_t p) const;
  const Resolution& resolution(std::size_t p) const { return *res_[p]; }

 private:
  struct Coords {
    std::vector<std::size_t> rows;  // pivot rows of the stacked basis
    la::Mat inverse;                // inverse of the basis restricted to rows
  };
  const Coords& coords(std::size_t q, std::size_t p, int i) const;
  const la::Mat& lift(std::size_t q, int d) const;

  std::vector<GradedModule> objs_;
  std::vector<std::unique_ptr<Resolution>> res_;
  mutable std::map<std::tuple<std::size_t, std::size_t, int>, mod::HomSpace> homs_;
  mutable std::map<std::tuple<std::size_t, std::size_t, int>, Coords> coords_;
  mutable std::map<std::pair<std::size_t, int>, la::Mat> lifts_;
};

// End(E) as a finite-dimensional algebra, basis grouped by part pairs.
alg::FiniteDimAlgebra end_algebra(const Handle& e);

// ---------------------------------------------------------------------------

struct Condition {
  std::string name;
  bool pass = true;
  bool certified = true;
  std::string detail;
};

struct HelixReport {
  std::vector<Condition> conditions;
  int window_lo = 0, window_hi = 0;
  int period = 0;
  int truncation = 0;
  std::string re1_form;  // which form of (RE1) was checked
  bool pass() const;
  bool conclusive() const;
};

HelixReport check_relative_exceptional(const TailsContext& ctx, const std::vector<Handle>& seq);

using HelixRule = std::function<Handle(int)>;
HelixReport check_geometric_helix(const TailsContext& ctx, const HelixRule& rule, int period, int lo, int hi);

// ---------------------------------------------------------------------------

struct Mutation {
  GradedModule module;
  std::size_t hom_dim = 0;
  bool ok = false;
  std::string reason;
};

// Kernel of the evaluation Hom(E, F)_0 (x) E -> F.
Mutation left_mutation(const TailsContext& ctx, const Handle& e, const Handle& f);
// Cokernel of the coevaluation E -> D Hom(E, F)_0 (x) F.
Mutation right_mutation(const TailsContext& ctx, const Handle& f, const Handle& e);

// ---------------------------------------------------------------------------

enum class Standardness { standard, non_standard, inconclusive };
std::string to_string(Standardness s);

struct StandardnessVerdict {
  Standardness classification = Standardness::inconclusive;
  mod::IsoVerdict omega_x_vs_y, omega_x_vs_x, omega_y_vs_x, omega_y_vs_y;
  bool cross_validated = false;
};

StandardnessVerdict classify_standard(const GradedModule& x, const GradedModule& y);

// ---------------------------------------------------------------------------

struct SectionAlgebra {
  AlgebraPtr algebra;
  // block_dims[p][q] = dim Hom(O_p, O_q)_0
  std::vector<std::vector<std::size_t>> block_dims;
};

// B_i = sum_{p,q} uHom(O_q, O_p)_i, truncated at D, with the composition
// product; the block (p, q) of B holds Hom(O_q, O_p).
SectionAlgebra section_algebra(const std::vector<GradedModule>& parts, const std::vector<std::string>& labels, int D);

struct SideEvidence {
  std::string side;
  bool ok = false;
  bool terminated = false;
  bool conclusive = true;
  int length = -1;
  std::vector<std::vector<mod::FreeGen>> betti;
  std::vector<std::vector<ExtRow>> ext;  // per q
  std::optional<int> d, ell;
  std::string reason;
};

struct RegularityEvidence {
  SideEvidence right, left;
  bool ok = false;
  bool conclusive = true;
  std::optional<std::pair<int, int>> candidate;
  int hbound = 0;
  int truncation = 0;
  std::string base;  // description of B0, e.g. "k x k"
  std::string verdict;
  std::string note;
};

RegularityEvidence regularity_evidence(const AlgebraPtr& b, int h);

}  // namespace qproj::hx

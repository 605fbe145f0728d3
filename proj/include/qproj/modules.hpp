#pragma once

// Graded right modules over tabulated algebras, given degreewise on a finite
// window [lo, hi] (the module is zero below lo and unknown above hi), with
// lazily computed action matrices.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qproj/algebra.hpp"

namespace qproj::mod {

using alg::AlgebraPtr;
using la::Mat;
using la::Scalar;
using la::SparseVec;
using la::Vec;

// Column-sparse matrix: columns[j] is the image of basis vector j.
struct SpMat {
  std::size_t rows = 0, cols = 0;
  std::vector<SparseVec> columns;

  Vec apply(const Vec& x) const;
  void add_to(Mat& m, const Scalar& c, std::size_t row_off = 0, std::size_t col_off = 0) const;
};

class WindowError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class ModuleData {
 public:
  // action(d, e, b): matrix of m -> m * a_b from M_d to M_{d+e}, a_b basis
  // element b of A_e. Only called with lo <= d, d + e <= hi, e <= D_A.
  using ActionFn = std::function<SpMat(int d, int e, std::size_t b)>;

  ModuleData(AlgebraPtr a, int lo, int hi, std::vector<std::size_t> dims, ActionFn action, std::string name);

  const AlgebraPtr& algebra() const { return a_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  std::size_t dim(int d) const;
  const SpMat& action(int d, int e, std::size_t b) const;
  const std::string& name() const { return name_; }

 private:
  struct Slot {
    std::once_flag once;
    std::vector<SpMat> mats;
  };

  AlgebraPtr a_;
  int lo_, hi_;
  std::vector<std::size_t> dims_;
  ActionFn action_;
  std::string name_;
  std::map<std::pair<int, int>, std::unique_ptr<Slot>> slots_;
};

// A module together with a degree shift: M(n)_d = M_{n+d}.
class GradedModule {
 public:
  GradedModule() = default;
  GradedModule(std::shared_ptr<const ModuleData> data, int shift = 0) : data_(std::move(data)), shift_(shift) {}

  const AlgebraPtr& algebra() const { return data_->algebra(); }
  int lo() const { return data_->lo() - shift_; }
  int hi() const { return data_->hi() - shift_; }
  int shift() const { return shift_; }
  std::size_t dim(int d) const { return data_->dim(d + shift_); }
  bool in_window(int d) const { return d <= hi(); }
  const SpMat& action(int d, int e, std::size_t b) const { return data_->action(d + shift_, e, b); }
  // Matrix of m -> m * a for an element a of A_e.
  Mat action_by(int d, int e, const Vec& a) const;
  Vec act(int d, const Vec& m, int e, const Vec& a) const;
  std::string name() const;
  const std::shared_ptr<const ModuleData>& data() const { return data_; }
  std::vector<long long> dims(int from, int to) const;
  bool is_zero_in_window() const;

 private:
  std::shared_ptr<const ModuleData> data_;
  int shift_ = 0;
};

GradedModule shift(const GradedModule& m, int n);

// Degree-0 map given degreewise on [lo, hi].
struct ModuleMap {
  GradedModule source, target;
  int lo = 0, hi = -1;
  std::map<int, Mat> mats;

  // Zero matrix of the right shape outside the stored degrees.
  Mat at(int d) const;
};

// ---------------------------------------------------------------------------
// constructions

struct FreeGen {
  int degree = 0;
  int idem = 0;
  bool operator==(const FreeGen&) const = default;
};

// F = sum_j e_{p_j} A(-s_j), known up to degree hi (capped by the algebra).
GradedModule free_module(const AlgebraPtr& a, const std::vector<FreeGen>& gens, int hi);
// A as a right module over itself, split along the idempotents.
GradedModule regular_module(const AlgebraPtr& a);
// A_0 = A / A_{>=1} as a right module, known on [0, hi].
GradedModule degree_zero_module(const AlgebraPtr& a, int hi);
GradedModule zero_module(const AlgebraPtr& a, int lo, int hi);
GradedModule direct_sum(const std::vector<GradedModule>& parts);
// M_nu: same spaces, m * a = m nu(a).
GradedModule twist_by_auto(const GradedModule& m, const alg::GradedAutomorphism& nu);

// Coordinates of a free-module element: for each generator j an element of
// e_{p_j} A_{d - s_j} given in the full basis of A_{d - s_j}.
Vec free_element(const AlgebraPtr& a, const std::vector<FreeGen>& gens, int d, const std::vector<Vec>& parts);
std::vector<Vec> split_free_element(const AlgebraPtr& a, const std::vector<FreeGen>& gens, int d, const Vec& v);

// Map from a free module with the given generators, sending generator j to
// images[j] in target degree gens[j].degree.
ModuleMap map_from_generators(const GradedModule& free, const std::vector<FreeGen>& gens, const GradedModule& target,
                              const std::vector<Vec>& images);

struct Kernel {
  GradedModule module;
  std::map<int, Mat> basis;  // columns: basis of K_d inside the source degree d
};
Kernel kernel(const ModuleMap& f);
GradedModule cokernel(const ModuleMap& f);
ModuleMap compose(const ModuleMap& g, const ModuleMap& f);  // g after f

struct Presentation {
  std::vector<FreeGen> f0;
  std::vector<FreeGen> f1;
  std::vector<std::vector<Vec>> matrix;  // matrix[i][j] in A_{f1[j] - f0[i]}
};

// Cokernel of F1 -> F0 where generator j of F1 maps to sum_i g_i * matrix[i][j].
GradedModule module_from_presentation(const AlgebraPtr& a, const Presentation& p, int hi);

// ---------------------------------------------------------------------------
// generators, covers, resolutions

struct Generator {
  int degree = 0;
  int idem = 0;
  Vec coords;  // in M_degree
};

// Generators spanning a complement of the graded radical part
// M rad(A_0) + M A_{>=1} degreewise, split along the idempotents.
std::vector<Generator> minimal_generators(const GradedModule& m);
std::vector<FreeGen> free_gens(const std::vector<Generator>& g);

struct Cover {
  GradedModule free;
  std::vector<Generator> gens;
  ModuleMap map;
};

Cover minimal_free_cover(const GradedModule& m);
GradedModule syzygy(const GradedModule& m);

struct Resolution {
  GradedModule module;
  std::vector<std::vector<FreeGen>> gens;  // gens[q]: generators of F_q
  // differential[q][k][j]: component in summand j of F_{q-1} of the image of
  // generator k of F_q, an element of A_{t_k - s_j} (q >= 1; differential[0] empty)
  std::vector<std::vector<std::vector<Vec>>> differential;
  std::vector<GradedModule> free;      // F_q
  std::vector<GradedModule> syzygies;  // Omega^q M, q = 0..length
  std::vector<Kernel> kernels;         // Omega^{q+1} inside F_q
  std::vector<ModuleMap> covers;       // F_q -> Omega^q M
  int hi = 0;                          // internal-degree window top
  bool terminated = false;             // some syzygy vanished in the window
  int length() const { return static_cast<int>(gens.size()) - 1; }
};

// Minimal resolution to homological degree h (F_0..F_h).
Resolution resolve(const GradedModule& m, int h);
// Adds a trivial summand e_p A(-s) -> e_p A(-s) (identity) at positions q and
// q+1; the result is a non-minimal resolution of the same module.
Resolution pad_resolution(const Resolution& r, int q, FreeGen extra);
// sum_q (-1)^q dim F_{q,d} = dim M_d + (-1)^h dim Omega^{h+1}_d on the window.
bool euler_identity_holds(const Resolution& r);

// ---------------------------------------------------------------------------
// Hom and Ext

struct ExtRow {
  int degree = 0;
  std::size_t dim = 0;
  bool certified = false;
};

struct HomSpace {
  int degree = 0;
  // basis[l][j]: image of generator j of F_0 of the source resolution
  std::vector<std::vector<Vec>> basis;
  bool certified = false;
};

// uHom(M, N)_i via the minimal presentation in the resolution of M.
HomSpace hom_space(const Resolution& rm, const GradedModule& n, int i);
// The map M -> N(i) of a Hom basis element, on degrees [lo, hi].
ModuleMap hom_map(const Resolution& rm, const GradedModule& n, int i, const std::vector<Vec>& images);
// dim uExt^q(M, N)_i from the given resolution (q = 0 is Hom).
ExtRow ext_dim(const Resolution& rm, const GradedModule& n, int q, int i);
std::vector<ExtRow> ext_table(const Resolution& rm, const GradedModule& n, int q, int from, int to);
std::vector<ExtRow> hom_table(const GradedModule& m, const GradedModule& n, int from, int to);

struct McmVerdict {
  bool mcm = false;
  std::vector<std::pair<int, std::vector<ExtRow>>> nonzero;  // offending q with its rows
};
McmVerdict mcm_check(const GradedModule& m, int h = 3);

// ---------------------------------------------------------------------------
// isomorphism

struct IsoVerdict {
  bool isomorphic = false;
  bool conclusive = true;
  std::string reason;
  std::size_t hom_dim = 0;       // dim Hom(M, N)_0
  std::size_t hom_dim_back = 0;  // dim Hom(N, M)_0
  std::optional<std::vector<long long>> witness;  // coefficients in the Hom_0 basis
};

IsoVerdict is_isomorphic(const GradedModule& m, const GradedModule& n);

// ---------------------------------------------------------------------------
// matrix factorizations

using PolyMatrix = std::vector<std::vector<fa::NcPoly>>;

PolyMatrix parse_matrix(const fa::GeneratorSet& g, const std::vector<std::vector<std::string>>& src);
bool verify_mf(const alg::PresentedAlgebra& s, const fa::NcPoly& f, const PolyMatrix& p, const PolyMatrix& q);

struct MfModules {
  std::shared_ptr<alg::PresentedAlgebra> presented;  // A = S/(f)
  AlgebraPtr algebra;
  GradedModule x, y;
  Presentation px, py;
};

// X = coker(P over A), Y = coker(Q over A); rejects invalid factorizations.
MfModules mf_to_modules(const alg::PresentedAlgebra& s, const fa::NcPoly& f, const PolyMatrix& p,
                        const PolyMatrix& q);

}  // namespace qproj::mod

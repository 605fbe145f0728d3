#pragma once

// Algebras and matrices of the quadric examples, shared by the test binaries.

#include <string>
#include <vector>

#include "qproj/algebra.hpp"

namespace fixtures {

using namespace qproj;

inline fa::GeneratorSet xyzw() { return fa::GeneratorSet({"x", "y", "z", "w"}, {1, 1, 1, 1}); }

inline std::vector<fa::NcPoly> polys(const fa::GeneratorSet& g, const std::vector<std::string>& src) {
  std::vector<fa::NcPoly> out;
  for (const auto& s : src) out.push_back(fa::parse_poly(g, s));
  return out;
}

inline std::vector<std::string> commutator_relations() {
  return {"x*y-y*x", "x*z-z*x", "x*w-w*x", "y*z-z*y", "y*w-w*y", "z*w-w*z"};
}

inline std::vector<std::string> sigma_relations() {
  return {"x*y+y*w", "x*z+z*w", "x^2-w^2", "y*z-z*y", "y*x+w*y", "z*x+w*z"};
}

inline alg::PresentedAlgebra S(int D = 8) { return alg::PresentedAlgebra(xyzw(), polys(xyzw(), commutator_relations()), D); }
inline alg::PresentedAlgebra S_sigma(int D = 8) {
  return alg::PresentedAlgebra(xyzw(), polys(xyzw(), sigma_relations()), D);
}
inline fa::NcPoly f_comm() { return fa::parse_poly(xyzw(), "x*w-y*z"); }
inline fa::NcPoly f_sigma() { return fa::parse_poly(xyzw(), "x^2+y*z"); }
inline alg::PresentedAlgebra A(int D = 8) { return alg::quotient_by_central(S(D), f_comm()); }
inline alg::PresentedAlgebra A_sigma(int D = 8) { return alg::quotient_by_central(S_sigma(D), f_sigma()); }
inline std::vector<fa::NcPoly> sigma_images() { return polys(xyzw(), {"w", "-y", "-z", "x"}); }

inline std::vector<std::vector<std::string>> M_matrix() { return {{"x", "y"}, {"z", "w"}}; }
inline std::vector<std::vector<std::string>> N_matrix() { return {{"w", "-y"}, {"-z", "x"}}; }

inline alg::PresentedAlgebra cubic(int D = 8) {
  fa::GeneratorSet g({"x", "y"}, {1, 1});
  return alg::PresentedAlgebra(g, polys(g, {"x^2*y-y*x^2", "x*y^2-y^2*x"}), D);
}

inline alg::PresentedAlgebra poly_x3(int D = 12) {
  fa::GeneratorSet g({"x"}, {3});
  return alg::PresentedAlgebra(g, {}, D);
}

inline std::vector<long long> to_ll(const std::vector<std::size_t>& v) { return {v.begin(), v.end()}; }

}  // namespace fixtures

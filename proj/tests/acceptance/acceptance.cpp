// One line per acceptance criterion; exit status 1 if any fails.

#include <deque>
#include <functional>
#include <iostream>
#include <sstream>

#include "../fixtures.hpp"
#include "qproj/cli.hpp"
#include "qproj/helix.hpp"

using namespace qproj;
using mod::GradedModule;

namespace {

long long binom(long long n, long long k) {
  if (k < 0 || n < k) return 0;
  long long r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct Quadric {
  mod::MfModules mf;
  GradedModule reg;
  GradedModule x, y;
  std::unique_ptr<hx::TailsContext> ctx;
  hx::Handle A(int i) const { return hx::object(reg, i, "A"); }
  hx::Handle X(int i) const { return hx::object(x, i, "X"); }
  hx::Handle Y(int i) const { return hx::object(y, i, "Y"); }
};

Quadric commutative() {
  auto g = fixtures::xyzw();
  Quadric q;
  q.mf = mod::mf_to_modules(fixtures::S(8), fixtures::f_comm(), mod::parse_matrix(g, fixtures::M_matrix()),
                            mod::parse_matrix(g, fixtures::N_matrix()));
  q.reg = mod::regular_module(q.mf.algebra);
  q.x = q.mf.x;
  q.y = q.mf.y;
  q.ctx = std::make_unique<hx::TailsContext>(q.mf.algebra, alg::GradedAutomorphism::identity(*q.mf.algebra));
  return q;
}

Quadric twisted() {
  auto g = fixtures::xyzw();
  auto m = mod::parse_matrix(g, fixtures::M_matrix());
  auto n = mod::parse_matrix(g, fixtures::N_matrix());
  Quadric q;
  q.mf = mod::mf_to_modules(fixtures::S_sigma(8), fixtures::f_sigma(), m, m);
  mod::MfModules other = mod::mf_to_modules(fixtures::S_sigma(8), fixtures::f_sigma(), n, n);
  q.reg = mod::regular_module(q.mf.algebra);
  q.x = q.mf.x;
  q.y = mod::module_from_presentation(q.mf.algebra, other.px, q.mf.algebra->truncation());
  q.ctx = std::make_unique<hx::TailsContext>(q.mf.algebra, alg::GradedAutomorphism::identity(*q.mf.algebra));
  return q;
}

// Every degree of the table is certified and matches the expected coefficient.
bool table_matches(const std::vector<mod::ExtRow>& rows, const std::function<long long(int)>& want,
                   std::ostringstream& why) {
  bool ok = true;
  for (const auto& r : rows) {
    if (!r.certified || static_cast<long long>(r.dim) != want(r.degree)) {
      why << " d=" << r.degree << ":" << r.dim << (r.certified ? "" : "?") << "!=" << want(r.degree);
      ok = false;
    }
  }
  return ok;
}

std::deque<mod::Resolution> computed;  // everything resolved here, for the Euler check

const mod::Resolution& keep(mod::Resolution r) {
  computed.push_back(std::move(r));
  return computed.back();
}

int failures = 0;

void report(int n, bool pass, const std::string& what, const std::string& detail = "") {
  if (!pass) ++failures;
  std::cout << (pass ? "PASS " : "FAIL ") << n << "  " << what;
  if (!detail.empty()) std::cout << "  [" << detail << "]";
  std::cout << std::endl;
}

template <typename F>
void criterion(int n, const std::string& what, F body) {
  std::ostringstream why;
  bool pass = false;
  try {
    pass = body(why);
  } catch (const std::exception& e) {
    why << "exception: " << e.what();
  }
  report(n, pass, what, why.str());
}

}  // namespace

int main() {
  const Quadric c = commutative();
  const Quadric t = twisted();

  criterion(1, "Hilbert series of A = S/(xw-yz) is (1+t)/(1-t)^3", [&](std::ostringstream& why) {
    auto dims = c.mf.algebra->dims();
    bool ok = dims.size() == 9;
    for (std::size_t i = 0; i < dims.size(); ++i) ok = ok && dims[i] == (i + 1) * (i + 1);
    auto h = alg::hilbert(*c.mf.algebra);
    ok = ok && h.closed_form && h.closed_form->str() == "(1+t)/(1-t)^3";
    if (h.closed_form) why << h.closed_form->str();
    return ok;
  });

  criterion(2, "Hilbert series of X and Y is 2/(1-t)^3 for both factorizations", [&](std::ostringstream& why) {
    bool ok = true;
    for (const Quadric* q : {&c, &t})
      for (const GradedModule* m : {&q->x, &q->y}) {
        auto dims = m->dims(0, 8);
        for (int i = 0; i <= 8; ++i)
          if (dims[i] != 2 * binom(i + 2, 2)) {
            ok = false;
            why << m->name() << " d=" << i << " ";
          }
        ok = ok && m->dim(-1) == 0;
      }
    return ok;
  });

  criterion(3, "Hom/Ext tables of X against A, X, Y for |d| <= 5", [&](std::ostringstream& why) {
    bool ok = true;
    auto hom = [&](const GradedModule& m, const GradedModule& n, std::function<long long(int)> f, const char* tag) {
      why << tag;
      ok = table_matches(mod::hom_table(m, n, -5, 5), f, why) && ok;
      why << ";";
    };
    hom(c.x, c.reg, [](int d) { return d < 1 ? 0 : 2 * binom(d + 1, 2); }, "Hom(X,A)");
    hom(c.x, c.x, [](int d) { return d < 0 ? 0 : static_cast<long long>(d + 1) * (d + 1); }, "Hom(X,X)");
    hom(c.x, c.y, [](int d) { return d < 1 ? 0 : 3 * binom(d + 1, 2) - binom(d, 2); }, "Hom(X,Y)");
    const mod::Resolution& rx = keep(mod::resolve(c.x, 2));
    auto ext = [&](const GradedModule& n, std::function<long long(int)> f, const char* tag) {
      why << tag;
      ok = table_matches(mod::ext_table(rx, n, 1, -5, 5), f, why) && ok;
      why << ";";
    };
    ext(c.reg, [](int) { return 0; }, "Ext1(X,A)");
    ext(c.x, [](int) { return 0; }, "Ext1(X,X)");
    ext(c.y, [](int d) { return d == -1 ? 1 : 0; }, "Ext1(X,Y)");
    return ok;
  });

  criterion(4, "MN = NM = fE over S and M^2 = N^2 = f^sigma E over S^sigma", [&](std::ostringstream& why) {
    auto g = fixtures::xyzw();
    auto m = mod::parse_matrix(g, fixtures::M_matrix());
    auto n = mod::parse_matrix(g, fixtures::N_matrix());
    auto s = fixtures::S(4);
    auto ss = fixtures::S_sigma(4);
    const bool a = mod::verify_mf(s, fixtures::f_comm(), m, n);
    const bool b = mod::verify_mf(ss, fixtures::f_sigma(), m, m) && mod::verify_mf(ss, fixtures::f_sigma(), n, n);
    const bool neg1 = !mod::verify_mf(s, fixtures::f_comm(), m, m);
    const bool neg2 = !mod::verify_mf(ss, fixtures::f_sigma(), m, n);
    why << "commutative " << a << ", sigma " << b << ", negatives " << neg1 << neg2;
    return a && b && neg1 && neg2;
  });

  criterion(5, "commutative quadric standard, twisted quadric non-standard", [&](std::ostringstream& why) {
    auto v = hx::classify_standard(c.x, c.y);
    auto w = hx::classify_standard(t.x, t.y);
    why << hx::to_string(v.classification) << "/" << v.cross_validated << ", " << hx::to_string(w.classification)
        << "/" << w.cross_validated;
    return v.classification == hx::Standardness::standard && v.cross_validated &&
           w.classification == hx::Standardness::non_standard && w.cross_validated;
  });

  criterion(6, "C(A) = M_2(k) x M_2(k) for both quadrics", [&](std::ostringstream& why) {
    bool ok = true;
    for (auto a : {fixtures::A(8), fixtures::A_sigma(8)}) {
      auto abang = alg::tabulate(alg::koszul_dual(a));
      auto z = alg::choose_regular_central(*abang, {1, 4, 6, 4, 1});
      if (!z) return false;
      auto rep = alg::semisimple_type(alg::c_of_a(*abang, *z).algebra);
      why << "dim " << rep.dimension << " rad " << rep.radical_dim << " center " << rep.center_dim << "; ";
      ok = ok && rep.dimension == 8 && rep.semisimple && rep.radical_dim == 0 && rep.center_dim == 2 && rep.blocks &&
           *rep.blocks == std::vector<std::size_t>{4, 4};
    }
    return ok;
  });

  criterion(7, "{A(-1), X(-1), A, X} exceptional and L_{A(i)} Y(i) = X(i-1)", [&](std::ostringstream& why) {
    auto r = hx::check_relative_exceptional(*c.ctx, {c.A(-1), c.X(-1), c.A(0), c.X(0)});
    bool ok = r.pass() && r.conclusive();
    for (const auto& cond : r.conditions) why << cond.name << "=" << cond.pass << " ";
    for (int i = -1; i <= 1; ++i) {
      auto l = hx::left_mutation(*c.ctx, c.A(i), c.Y(i));
      const bool iso = l.ok && mod::is_isomorphic(l.module, c.X(i - 1).module()).isomorphic;
      why << "L" << i << "=" << iso << " ";
      ok = ok && iso;
    }
    return ok;
  });

  criterion(8, "geometric helix of period 4 on [-4, 8] and its blocked period-2 form", [&](std::ostringstream& why) {
    hx::HelixRule rule = [&](int i) {
      const int q = ((i % 2) + 2) % 2;
      return q == 0 ? c.A((i - q) / 2) : c.X((i - q) / 2);
    };
    auto r = hx::check_geometric_helix(*c.ctx, rule, 4, -4, 8);
    hx::HelixRule block = [&](int i) { return hx::blocked({c.A(i), c.X(i)}); };
    auto b = hx::check_geometric_helix(*c.ctx, block, 2, -2, 4);
    for (const auto& cond : r.conditions) why << cond.name << "=" << cond.pass << cond.certified << " ";
    for (const auto& cond : b.conditions) why << "blocked " << cond.name << "=" << cond.pass << cond.certified << " ";
    return r.pass() && r.conclusive() && b.pass() && b.conclusive();
  });

  criterion(9, "section algebra over (A, X): kK2 pattern, dims 16 and 36, (d, l) = (3, 2)",
            [&](std::ostringstream& why) {
              auto b = hx::section_algebra({c.reg, c.x}, {"A", "X"}, 6);
              auto e = hx::regularity_evidence(b.algebra, 5);
              const bool pattern = b.block_dims == std::vector<std::vector<std::size_t>>{{1, 2}, {0, 1}};
              const bool dims = b.algebra->dim(1) == 16 && b.algebra->dim(2) == 36;
              why << "dims " << b.algebra->dim(1) << "," << b.algebra->dim(2) << "; " << e.verdict;
              return pattern && dims && e.ok && e.candidate == std::make_pair(3, 2);
            });

  criterion(10, "(k[x], deg x = 3)^[2] has dims 2,1,1,2,1,1 and is not AS-regular", [&](std::ostringstream& why) {
    auto q = alg::quasi_veronese(alg::tabulate(fixtures::poly_x3(12)), 2);
    auto e = hx::regularity_evidence(q, 4);
    why << e.verdict;
    return q->dims() == std::vector<std::size_t>{2, 1, 1, 2, 1, 1} && !e.ok && e.conclusive &&
           e.verdict == "not AS-regular over B0 = k x k";
  });

  criterion(11, "Koszul identity, Groebner counts, Euler identity, mutation round trips, determinism",
            [&](std::ostringstream& why) {
              bool koszul = true;
              for (auto a : {fixtures::S(8), fixtures::A(8), fixtures::S_sigma(8), fixtures::A_sigma(8)}) {
                auto h = alg::tabulate(a)->dims();
                auto hd = alg::tabulate(alg::koszul_dual(a))->dims();
                for (int d = 1; d <= 8; ++d) {
                  long long s = 0;
                  for (int i = 0; i <= d; ++i)
                    s += ((d - i) % 2 ? -1 : 1) * static_cast<long long>(h[i] * hd[d - i]);
                  koszul = koszul && s == 0;
                }
              }
              bool groebner = true;
              for (auto a : {fixtures::S(6), fixtures::A(6), fixtures::S_sigma(6), fixtures::A_sigma(6),
                             fixtures::cubic(6), fixtures::poly_x3(6)}) {
                gb::Ideal ideal(a.gens(), a.relations());
                for (int d = 0; d <= 6; ++d)
                  groebner = groebner && a.groebner().normal_words(d).size() == gb::brute_force_quotient_dim(ideal, d);
              }
              for (const Quadric* q : {&c, &t})
                for (const GradedModule* m : {&q->x, &q->y}) keep(mod::resolve(*m, 4));
              keep(mod::resolve(mod::degree_zero_module(c.mf.algebra, 8), 4));
              keep(mod::resolve(mod::degree_zero_module(alg::tabulate(fixtures::S(6)), 6), 5));
              bool euler = true;
              for (const auto& r : computed) euler = euler && mod::euler_identity_holds(r);
              bool round = true;
              for (const Quadric* q : {&c, &t}) {
                for (int i = -1; i <= 1; ++i) {
                  auto l = hx::left_mutation(*q->ctx, q->A(i), q->Y(i));
                  auto r = hx::right_mutation(*q->ctx, q->A(i), hx::object(l.module, 0, "L"));
                  round = round && l.ok && r.ok && mod::is_isomorphic(r.module, q->Y(i).module()).isomorphic;
                }
                auto r = hx::right_mutation(*q->ctx, q->A(0), q->X(-1));
                auto l = hx::left_mutation(*q->ctx, q->A(0), hx::object(r.module, 0, "R"));
                round = round && r.ok && l.ok && mod::is_isomorphic(l.module, q->X(-1).module()).isomorphic;
              }
              bool determinism = true;
              for (const char* name :
                   {"quadric_commutative", "quadric_sigma", "cubic_as3", "poly_x_deg3", "qvas_counterexample"}) {
                auto m = cli::load_manifest(std::string(QPROJ_SOURCE_DIR) + "/manifests/" + name + ".toml");
                for (const char* cmd : {"hilbert", "regularity"}) {
                  const std::string a = cli::emit(cli::run(cmd, m, {}).report, "json");
                  const std::string b = cli::emit(cli::run(cmd, m, {}).report, "json");
                  determinism = determinism && a == b && cli::Json::parse(a).dump(2) + "\n" == a;
                }
              }
              why << "koszul " << koszul << ", groebner " << groebner << ", euler " << euler << " on "
                  << computed.size() << " resolutions, round trips " << round << ", determinism " << determinism;
              return koszul && groebner && euler && round && determinism;
            });

  return failures == 0 ? 0 : 1;
}

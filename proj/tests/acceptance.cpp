// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "bimodule_fixtures.hpp"
#include "dsl_gen.hpp"
#include "fixtures.hpp"
#include "homex/dsl.hpp"
#include "homex/errors.hpp"
#include "homex/gorenstein.hpp"
#include "random_algebras.hpp"

using namespace homex;
using namespace homex::testing;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

std::string sample(const std::string& name) { return std::string(HOMEX_SAMPLES) + "/" + name; }

bool iso(const FDModule& m, const FDModule& n) { return random_iso_test(m, n).is_certified(); }

bool all_zero(const std::vector<std::vector<int>>& t) {
  for (const auto& row : t)
    for (int x : row)
      if (x != 0) return false;
  return true;
}

int vertex_named(const AlgPtr& a, const std::string& name) {
  for (int v = 0; v < a->vertex_count(); ++v)
    if (a->vertex_name(v) == name) return v;
  throw Failure("no vertex " + name);
}

Mat random_mat(std::mt19937_64& rng, std::size_t r, std::size_t c, Field f) {
  std::uniform_int_distribution<int> coin(0, 99), val(-4, 4);
  Mat m(r, c, f);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (coin(rng) < 50) m(i, j) = Scalar(val(rng)).in_field(f);
  return m;
}

bool valid_algebra(const AlgPtr& a) {
  if (a->associativity_violation(true)) return false;
  const Vec one = a->unit();
  for (int b = 0; b < a->dim(); ++b) {
    const Vec e = unit_vec(a->dim(), b, a->field());
    if (a->multiply(one, e) != e || a->multiply(e, one) != e) return false;
  }
  for (int s = 0; s < a->vertex_count(); ++s)
    for (int t = 0; t < a->vertex_count(); ++t) {
      const Vec p = a->multiply(a->idempotent(s), a->idempotent(t));
      if (p != (s == t ? a->idempotent(s) : zero_vec(a->dim(), a->field()))) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------

std::string gamma_in_lambda_end_to_end() {
  dsl::Workspace w(dsl::parse_file(sample("gamma_in_lambda.hx")));
  const AlgPtr lambda = w.algebra("Lambda"), gamma = w.algebra("Gamma");
  require(lambda->dim() == 9, "dim Lambda = " + std::to_string(lambda->dim()));
  require(gamma->dim() == 5, "dim Gamma = " + std::to_string(gamma->dim()));
  const FDModule q = w.module("LaL_over_Ge");
  require(q.dim() == 4, "dim of the quotient bimodule");

  const BoundedReport r = check_bounded(w.extension("E"));
  require(r.overall.is_certified(), "check_bounded: " + r.overall.to_json().dump());
  require(r.p() == 2, "p = " + std::to_string(r.p()));
  require(r.bimodule_pd.value() == 1, "bimodule pd");
  require(all_zero(r.tor_table), "Tor table not zero");

  const AlgPtr g = q.algebra();
  require(iso(right_part(q), power(simple_module(opposite(gamma), vertex_named(gamma, "2")), 4)), "right structure");
  require(iso(left_part(q), projective_module(gamma, vertex_named(gamma, "1"))), "left structure");
  require(iso(syzygy(q, 1), projective_module(g, vertex_named(g, "1x1^op"))), "first syzygy");
  return "dims 9/5/4, p=2, pd=1, Tor zero";
}

std::string a4_trivial_end_to_end() {
  dsl::Workspace w(dsl::parse_file(sample("a4_trivial.hx")));
  const Extension e = w.extension("E");
  require(e.small->dim() == 10 && e.big->dim() == 11, "dims of B and A");
  const FDModule m = w.module("M");
  require(tensor_power(m, 2).dim() == 0, "M (x) M nonzero");
  const BoundedReport r = check_bounded(e);
  require(r.overall.is_certified(), "check_bounded: " + r.overall.to_json().dump());
  require(r.p() == 2, "p");
  // Oracle: over B (x) B^op the outer product S (x) T has pd pd(S) + pd(T).
  const long long oracle = projective_dimension(w.module("S3")).value() + projective_dimension(w.module("T2")).value();
  require(r.bimodule_pd.value() == 2 && oracle == 2, "bimodule pd " + std::to_string(r.bimodule_pd.value()));
  require(enveloping(e.small)->dim() == 100, "dim B^e");
  require(projective_cover(left_part(m)).kernel.cols() > 0, "M projective on the left");
  require(projective_cover(right_part(m)).kernel.cols() > 0, "M projective on the right");
  return "dims 10/11, M(x)M=0, p=2, pd=2";
}

std::string consequence_verifiers() {
  std::vector<Extension> cases{gamma_in_lambda(), a4_trivial()};
  std::mt19937_64 rng(700);
  while (cases.size() < 22) {
    AlgPtr b = random_path_algebra(rng, 6);
    auto v = nilpotent_projective_vertex(rng, b);
    if (!v || projective_module(enveloping(b), *v).dim() > 8) continue;
    cases.push_back(trivial_extension(b, projective_module(enveloping(b), *v)));
  }
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const Extension& e = cases[k];
    const BoundedReport r = check_bounded(e);
    require(r.overall.is_certified(), "case " + std::to_string(k) + " not bounded");
    for (const Verdict& v : {verify_tor_consequences(e, r), verify_sandwich_pd(e, r), relative_bar_exactness(e, r)})
      require(v.is_certified(), "case " + std::to_string(k) + ": " + v.to_json().dump());
  }
  return "2 worked examples + 20 random projective trivial extensions";
}

std::string ehi_window() {
  for (const Extension& e : {gamma_in_lambda(), a4_trivial()}) {
    const BoundedReport r = check_bounded(e);
    const Verdict v = ehi_dimension_test(e, r, {}, 5);
    require(v.is_certified(), v.to_json().dump());
  }
  return "all simple pairs, window 5";
}

std::string arrow_removal_cases() {
  dsl::Workspace k(dsl::parse_file(sample("kronecker.hx")));
  const BoundedReport r = check_bounded(k.extension("E"));
  require(r.overall.is_certified() && r.bimodule_pd.value() == 0 && r.p() == 2, r.to_json().dump());
  dsl::Workspace l(dsl::parse_file(sample("gamma_in_lambda.hx")));
  try {
    arrow_removal(l.presentation("Lambda"), "a");
  } catch (const HomexError& e) {
    require(e.code() == ErrorCode::ArrowInRelations, e.what());
    return "Kronecker pd 0, p 2; removing a from Lambda rejected";
  }
  throw Failure("removing a from Lambda was accepted");
}

std::string triangular_triples() {
  std::mt19937_64 rng(4242);
  int bounded = 0;
  for (int k = 0; k < 3; ++k) {
    const AlgPtr l = random_path_algebra(rng, 6), g = random_path_algebra(rng, 6);
    const FDModule w = random_module(rng, tensor_algebra(g, opposite(l)), 6);
    const Triangular t = triangular_algebra(l, g, w);
    require(t.iso.is_certified(), "matrix algebra not a trivial extension");
    require(tensor_power(t.w, 2).dim() == 0, "W (x) W nonzero");
    const BoundedReport r = check_bounded(t.extension);
    if (r.bimodule_pd.is_certified()) {
      require(r.overall.is_certified(), r.to_json().dump());
      ++bounded;
    }
  }
  return "3 triples, " + std::to_string(bounded) + " with finite pd certified bounded";
}

std::string gorenstein_suite() {
  dsl::Workspace kx(dsl::parse_file(sample("kxx2.hx")));
  const AlgPtr a = kx.algebra("kx");
  const Verdict g = gorenstein_check(a, 4);
  require(g.is_certified() && g.witness.at("left") == 0 && g.witness.at("right") == 0, g.to_json().dump());
  const FDModule s = kx.module("S");
  require(gproj_check(s, 4).verdict.is_certified() && gproj_check(kx.module("R"), 4).verdict.is_certified(),
          "gproj over k[x]/x^2");
  const HomologyDims t = tor(retarget(s, opposite(a)), s, 10), e = ext(s, s, 10);
  for (int i = 0; i <= 10; ++i) require(t.dims[i] == 1 && e.dims[i] == 1, "degree " + std::to_string(i));

  dsl::Workspace a4w(dsl::parse_file(sample("a4.hx")));
  const AlgPtr b = a4w.algebra("A4");
  std::vector<FDModule> corpus = simple_modules(b);
  for (const auto& p : projective_indecomposables(b)) corpus.push_back(p);
  for (int v = 0; v < b->vertex_count(); ++v) corpus.push_back(injective_module(b, v));
  for (const auto& x : corpus)
    require(gproj_check(x, 3).verdict.is_certified() == (projective_dimension(x).value() == 0), "A4 gproj");
  require(ext(a4w.module("S1"), a4w.module("S2"), 1).dims[1] == 1, "Ext^1(S1, S2)");
  return "k[x]/x^2 (0,0) with Tor=Ext=1 through 10; A4 gproj = proj";
}

std::string property_suites() {
  const int cases = 200;
  std::ostringstream done;
  {
    std::mt19937_64 rng(1);
    for (int k = 0; k < cases; ++k) {
      const Field f = k % 2 ? make_field(7) : Field{};
      const Mat m = random_mat(rng, rng() % 9, rng() % 9, f);
      require(rank(m) + kernel_basis(m).cols() == m.cols(), "rank-nullity");
    }
  }
  {
    std::mt19937_64 rng(2);
    for (int k = 0; k < cases; ++k) {
      const AlgPtr a = random_path_algebra(rng, 8);
      const FDModule n = random_module(rng, a, 8), x = random_module(rng, opposite(a), 8);
      const HomologyDims t1 = tor(x, n, 3, 6), t2 = tor_resolving_left(x, n, 3, 6);
      for (int i = 0; i <= std::min(t1.trusted, t2.trusted); ++i) require(t1.dims[i] == t2.dims[i], "Tor balance");
    }
  }
  {
    std::mt19937_64 rng(3);
    for (int k = 0; k < cases; ++k) {
      const AlgPtr b = random_path_algebra(rng, 5);
      const FDModule m = random_bimodule(rng, b, k % 3);
      const BoundedCutoffs c{4, 10};
      require(check_bounded_quotient(m, c, TorSide::Left).overall.status ==
                  check_bounded_quotient(m, c, TorSide::Right).overall.status,
              "Tor side symmetry");
    }
  }
  {
    std::mt19937_64 rng(4);
    for (int k = 0; k < cases; ++k) {
      const AlgPtr a = random_path_algebra(rng, 8), b = random_path_algebra(rng, 3);
      std::vector<AlgPtr> algs{a, opposite(a), product_algebra(a, b)};
      if (a->dim() * b->dim() <= 16) algs.push_back(tensor_algebra(a, opposite(b)));
      if (b->dim() <= 3) algs.push_back(trivial_extension(b, random_module(rng, enveloping(b), 4)).big);
      for (const auto& x : algs) require(valid_algebra(x), "algebra axioms");
    }
  }
  {
    std::mt19937_64 rng(5);
    for (int k = 0; k < cases; ++k) {
      const AlgPtr a = random_path_algebra(rng, 8);
      const Resolution r = minimal_resolution(random_module(rng, a, 8), 6);
      for (int n = 1; n < r.term_count(); ++n) {
        const FDModule p = r.term_module(n - 1);
        const Subspace rad = span_of(columns_of(top_and_radical(p).radical.inclusion), p.dim(), p.field());
        for (const auto& v : r.kernel(n)) require(rad.contains(v), "kernel outside rad P");
      }
    }
  }
  {
    for (int k = 0; k < cases; ++k) {
      SourceGen gen(9100 + k);
      const dsl::SourceFile s = gen.file();
      require(dsl::parse(dsl::print(s)) == s, "parse/print round trip");
    }
  }
  {
    std::mt19937_64 rng(7);
    for (int k = 0; k < cases; ++k) {
      const AlgPtr b = random_path_algebra(rng, 5);
      const FDModule m = random_bimodule(rng, b, k % 3);
      const BoundedReport low = check_bounded_quotient(m, {2, 3}), high = check_bounded_quotient(m, {4, 10});
      if (!low.overall.is_inconclusive()) require(low.overall.status == high.overall.status, "cutoff monotonicity");
      if (low.nilpotency.is_certified()) require(low.nilpotency.value() == high.nilpotency.value(), "nilpotency index");
    }
  }
  return "7 suites x 200 cases";
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<std::string()> run;
    double limit_seconds;  // 0: no limit
  };
  const std::vector<Criterion> criteria{
      {"Gamma inside Lambda end to end", gamma_in_lambda_end_to_end, 10},
      {"kA4 trivial extension end to end", a4_trivial_end_to_end, 60},
      {"consequence verifiers", consequence_verifiers, 0},
      {"eventually homological isomorphism", ehi_window, 0},
      {"arrow removal", arrow_removal_cases, 0},
      {"triangular matrix algebras", triangular_triples, 0},
      {"Gorenstein suite", gorenstein_suite, 0},
      {"property suites", property_suites, 0},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      detail = criteria[i].run();
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && criteria[i].limit_seconds > 0 && secs > criteria[i].limit_seconds) {
      ok = false;
      detail += "; over the time limit";
    }
    std::ostringstream t;
    t.precision(2);
    t << std::fixed << secs;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].name << " (" << detail << ", "
              << t.str() << " s)" << std::endl;
    if (!ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}

#include <gtest/gtest.h>

#include <functional>
#include <optional>
#include <random>

#include "bimodule_fixtures.hpp"
#include "fixtures.hpp"
#include "homex/errors.hpp"
#include "homex/extension.hpp"
#include "random_algebras.hpp"

using namespace homex;
using namespace homex::testing;

namespace {

bool iso(const FDModule& m, const FDModule& n) { return random_iso_test(m, n).is_certified(); }

Extension identity_extension(const AlgPtr& a) {
  return make_extension(a, a, Mat::identity(a->dim(), a->field()));
}

std::optional<ErrorCode> error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const HomexError& e) {
    return e.code();
  }
  return std::nullopt;
}

bool all_zero(const std::vector<std::vector<int>>& t) {
  for (const auto& row : t)
    for (int x : row)
      if (x != 0) return false;
  return true;
}

}  // namespace

TEST(Extension, IdentityExtensionHasZeroQuotient) {
  auto a = from_presentation(lambda64());
  Extension e = identity_extension(a);
  EXPECT_EQ(e.complement.cols(), 0u);
  EXPECT_EQ(quotient_bimodule(e).module.dim(), 0);
  auto r = check_bounded(e);
  ASSERT_TRUE(r.overall.is_certified());
  EXPECT_EQ(r.p(), 1);
  EXPECT_EQ(r.bimodule_pd.value(), -1);
  EXPECT_TRUE(r.tor_table.empty());
}

TEST(Extension, Errors) {
  auto a = from_presentation(a4());
  Mat phi = Mat::identity(a->dim(), a->field());
  phi(label_index(a, "b"), label_index(a, "b")) = Scalar(2);
  EXPECT_EQ(error_of([&] { make_extension(a, a, phi); }), ErrorCode::NotMultiplicative);

  Mat half = Mat::identity(a->dim(), a->field());
  half(0, 0) = Scalar(0);
  EXPECT_EQ(error_of([&] { make_extension(a, a, half); }), ErrorCode::NotUnital);

  auto f5 = from_presentation(a4(make_field(5)));
  EXPECT_EQ(error_of([&] { make_extension(a, f5, Mat::identity(a->dim(), a->field())); }), ErrorCode::FieldMismatch);

  // A retraction that is not a left inverse.
  Mat zero_ret(a->dim(), a->dim(), a->field());
  EXPECT_EQ(error_of([&] { make_extension(a, a, Mat::identity(a->dim(), a->field()), std::nullopt, zero_ret); }),
            ErrorCode::NotSplit);
}

TEST(Extension, NotInjective) {
  auto kx = from_presentation(kxx2());
  auto k = from_presentation(presentation("k", {"1"}, {}));
  // k[x]/x^2 -> k killing x is an algebra map with a kernel.
  Mat kill(1, 2, k->field());
  kill(0, label_index(kx, "e1")) = Scalar(1);
  EXPECT_EQ(error_of([&] { make_extension(kx, k, kill); }), ErrorCode::NotInjective);
}

TEST(GammaInLambda, Quotient) {
  Extension e = gamma_in_lambda();
  EXPECT_EQ(e.big->dim(), 9);
  EXPECT_EQ(e.small->dim(), 5);
  ASSERT_TRUE(e.retraction.has_value());
  QuotientBimodule q = quotient_bimodule(e);
  EXPECT_EQ(q.module.dim(), 4);
  EXPECT_TRUE((q.projection * q.lift).is_identity());
  EXPECT_TRUE((q.projection * e.embedding).is_zero());
  EXPECT_TRUE(iso(q.module, retarget(alpha_ideal(), q.module.algebra())));
  EXPECT_TRUE(iso(left_part(q.module), projective_module(e.small, 0)));
  EXPECT_TRUE(iso(right_part(q.module), power(simple_module(opposite(e.small), 1), 4)));
  // The first syzygy over the enveloping algebra is projective at 1x1^op.
  const AlgPtr env = q.module.algebra();
  ASSERT_EQ(env->vertex_name(0), "1x1^op");
  EXPECT_TRUE(iso(syzygy(q.module, 1), projective_module(env, 0)));
}

TEST(GammaInLambda, TensorPowers) {
  auto t = tensor_powers(quotient_bimodule(gamma_in_lambda()).module, 8);
  EXPECT_EQ(t.dims, (std::vector<int>{4, 0}));
  ASSERT_TRUE(t.nilpotency.is_certified());
  EXPECT_EQ(t.nilpotency.value(), 2);
}

TEST(GammaInLambda, CheckBounded) {
  Extension e = gamma_in_lambda();
  for (TorSide side : {TorSide::Left, TorSide::Right}) {
    auto r = check_bounded(e, {}, side);
    ASSERT_TRUE(r.overall.is_certified()) << r.to_json().dump();
    EXPECT_EQ(r.p(), 2);
    EXPECT_EQ(r.bimodule_pd.value(), 1);
    EXPECT_TRUE(all_zero(r.tor_table));
    EXPECT_EQ(r.overall.witness.at("p"), 2);
  }
}

TEST(GammaInLambda, RebuiltAsTrivialExtension) {
  Extension e = gamma_in_lambda();
  QuotientBimodule q = quotient_bimodule(e);
  const int k = q.module.dim();
  Mat product(k, static_cast<std::size_t>(k) * k, e.big->field());
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      product.set_column(i * k + j, q.projection.apply(e.big->multiply(q.lift.column(i), q.lift.column(j))));
  EXPECT_TRUE(product.is_zero());
  Extension t = split_extension(e.small, q.module, product);
  EXPECT_EQ(t.kind, "trivial");
  EXPECT_TRUE(is_algebra_isomorphism(t.big, e.big, hstack(e.embedding, q.lift)));
}

TEST(A4Trivial, Quotient) {
  Extension e = a4_trivial();
  EXPECT_EQ(e.small->dim(), 10);
  EXPECT_EQ(e.big->dim(), 11);
  EXPECT_EQ(enveloping(e.small)->dim(), 100);
  QuotientBimodule q = quotient_bimodule(e);
  EXPECT_EQ(q.module.dim(), 1);
  EXPECT_TRUE(iso(left_part(q.module), simple_module(e.small, 2)));
  EXPECT_TRUE(iso(right_part(q.module), simple_module(opposite(e.small), 1)));
  // Neither side is projective.
  EXPECT_GT(projective_cover(left_part(q.module)).kernel.cols(), 0u);
  EXPECT_GT(projective_cover(right_part(q.module)).kernel.cols(), 0u);
}

TEST(A4Trivial, CheckBounded) {
  Extension e = a4_trivial();
  auto r = check_bounded(e);
  ASSERT_TRUE(r.overall.is_certified()) << r.to_json().dump();
  EXPECT_EQ(r.powers.dims, (std::vector<int>{1, 0}));
  EXPECT_EQ(r.p(), 2);
  EXPECT_EQ(r.bimodule_pd.value(), 2);
  EXPECT_TRUE(all_zero(r.tor_table));
  // Oracle: pd of an outer product over B (x) B^op is the sum of the
  // one-sided projective dimensions.
  auto b = e.small;
  auto pl = projective_dimension(simple_module(b, 2));
  auto pr = projective_dimension(simple_module(opposite(b), 1));
  EXPECT_EQ(pl.value() + pr.value(), r.bimodule_pd.value());
  // Tor_i(M, M) vanishes for i >= 1.
  QuotientBimodule q = quotient_bimodule(e);
  EXPECT_TRUE(tor(right_part(q.module), left_part(q.module), 4).all_zero_from(1));
}

TEST(Verifiers, WorkedExamples) {
  for (const Extension& e : {gamma_in_lambda(), a4_trivial()}) {
    auto r = check_bounded(e);
    ASSERT_TRUE(r.overall.is_certified());
    EXPECT_TRUE(verify_tor_consequences(e, r).is_certified());
    auto s = verify_sandwich_pd(e, r);
    EXPECT_TRUE(s.is_certified()) << s.to_json().dump();
    auto bar = relative_bar_exactness(e, r);
    EXPECT_TRUE(bar.is_certified()) << bar.to_json().dump();
    auto ehi = ehi_dimension_test(e, r, {}, 5);
    EXPECT_TRUE(ehi.is_certified()) << ehi.to_json().dump();
  }
}

TEST(Verifiers, IdentityExtension) {
  auto a = from_presentation(kxx2());
  Extension e = identity_extension(a);
  e.retraction = Mat::identity(a->dim(), a->field());
  auto r = check_bounded(e);
  EXPECT_TRUE(verify_tor_consequences(e, r).is_certified());
  auto bar = relative_bar_exactness(e, r);
  ASSERT_TRUE(bar.is_certified());
  EXPECT_EQ(bar.witness.at("term_dims"), (std::vector<int>{2, 2}));
  auto ehi = ehi_dimension_test(e, r, {}, 5);
  ASSERT_TRUE(ehi.is_certified());
  EXPECT_EQ(ehi.witness.at("t_star"), 2);
}

TEST(Verifiers, RequireCertifiedReport) {
  auto a = from_presentation(kxx2());
  // The regular bimodule is never tensor nilpotent.
  FDModule m = regular_bimodule(a);
  Extension e = trivial_extension(a, m);
  auto r = check_bounded(e, {4, 6});
  EXPECT_FALSE(r.overall.is_certified());
  EXPECT_EQ(error_of([&] { verify_tor_consequences(e, r); }), ErrorCode::PreconditionFailed);
  EXPECT_EQ(error_of([&] { relative_bar_exactness(e, r); }), ErrorCode::PreconditionFailed);
}

TEST(SplitExtension, ProductErrors) {
  auto b = from_presentation(presentation("k", {"1"}, {}));
  FDModule m = power(regular_bimodule(b), 2);
  const Field f = b->field();
  // m1 m1 = m2, everything else 0: associative.
  Mat good(2, 4, f);
  good(1, 0) = Scalar(1);
  Extension e = split_extension(b, m, good);
  EXPECT_EQ(e.kind, "split");
  EXPECT_EQ(e.big->dim(), 3);
  // m1 m1 = m1 + m2 ... (m1 m1) m1 = m1 m1 + m2 m1 = m1 + m2 but m1 (m1 m1)
  // = m1 m1 + m1 m2 = m1 + m2 + m2 when m1 m2 = m2 and m2 m1 = 0.
  Mat bad(2, 4, f);
  bad(0, 0) = Scalar(1);
  bad(1, 0) = Scalar(1);
  bad(1, 1) = Scalar(1);
  EXPECT_EQ(error_of([&] { split_extension(b, m, bad); }), ErrorCode::NotAssociative);

  // Over k x k, a product M (x) M -> M that ignores the idempotents.
  auto kk = from_presentation(presentation("kk", {"1", "2"}, {}));
  FDModule w = outer_product(simple_module(kk, 0), simple_module(opposite(kk), 1));
  Mat sq(1, 1, f);
  sq(0, 0) = Scalar(1);
  EXPECT_EQ(error_of([&] { split_extension(kk, w, sq); }), ErrorCode::NotBimoduleMorphism);
}

TEST(TrivialExtension, ZeroModule) {
  auto b = from_presentation(lambda64());
  Extension e = trivial_extension(b, FDModule::zero(enveloping(b)));
  EXPECT_EQ(e.big->dim(), b->dim());
  EXPECT_TRUE(is_algebra_isomorphism(b, e.big, Mat::identity(b->dim(), b->field())));
  EXPECT_EQ(quotient_bimodule(e).module.dim(), 0);
}

TEST(Triangular, ZeroBimodule) {
  auto l = from_presentation(a4());
  auto g = from_presentation(kxx2());
  auto t = triangular_algebra(l, g, FDModule::zero(tensor_algebra(g, opposite(l))));
  EXPECT_TRUE(t.iso.is_certified());
  EXPECT_EQ(t.matrix_algebra->dim(), 12);
  auto prod = product_algebra(l, g);
  EXPECT_TRUE(is_algebra_isomorphism(prod, t.matrix_algebra, Mat::identity(12, prod->field())));
  auto r = check_bounded(t.extension);
  ASSERT_TRUE(r.overall.is_certified());
  EXPECT_EQ(r.p(), 1);
}

TEST(Triangular, ExampleBimodule) {
  auto l = from_presentation(gamma64());
  auto g = from_presentation(kxx2());
  // W = k[x]/x^2 (x)_k e_2 Gamma: x acts on the left, Gamma on the right.
  FDModule w = outer_product(regular_module(g), projective_module(opposite(l), 1));
  auto t = triangular_algebra(l, g, w);
  EXPECT_TRUE(t.iso.is_certified());
  EXPECT_EQ(t.matrix_algebra->dim(), l->dim() + g->dim() + w.dim());
  EXPECT_EQ(tensor_powers(t.w, 4).dims, (std::vector<int>{w.dim(), 0}));
  auto r = check_bounded(t.extension);
  EXPECT_TRUE(r.overall.is_certified()) << r.to_json().dump();
}

TEST(ArrowRemoval, Kronecker) {
  auto out = arrow_removal(kronecker(), "al");
  EXPECT_EQ(out.small->dim(), 3);
  EXPECT_EQ(out.ideal.dim(), 1);
  EXPECT_TRUE(out.rebuilt.is_certified());
  ASSERT_TRUE(out.report.overall.is_certified());
  EXPECT_EQ(out.report.p(), 2);
  EXPECT_EQ(out.report.bimodule_pd.value(), 0);
  // M is B e_2 (x) e_1 B.
  const int nv = out.small->vertex_count();
  EXPECT_TRUE(iso(out.ideal, projective_module(enveloping(out.small), 1 * nv + 0)));
}

TEST(ArrowRemoval, ArrowInRelations) {
  try {
    arrow_removal(lambda64(), "a");
    FAIL() << "no error thrown";
  } catch (const HomexError& e) {
    EXPECT_EQ(e.code(), ErrorCode::ArrowInRelations);
    EXPECT_EQ(e.detail().at("arrow"), "a");
  }
  EXPECT_EQ(error_of([&] { arrow_removal(lambda64(), "zz"); }), ErrorCode::PreconditionFailed);
}

TEST(ArrowRemoval, LinearQuiver) {
  auto out = arrow_removal(a4(), "b");
  // B keeps e1..e4, a, c; M is spanned by the paths through b.
  EXPECT_EQ(out.small->dim(), 6);
  EXPECT_EQ(out.ideal.dim(), 4);
  EXPECT_TRUE(out.rebuilt.is_certified());
  ASSERT_TRUE(out.report.overall.is_certified());
  EXPECT_EQ(out.report.bimodule_pd.value(), 0);
  EXPECT_EQ(out.report.p(), 2);
}

TEST(ArrowRemoval, KeepsLoopRelations) {
  // Removing b from Gamma leaves two disconnected vertices, one with a loop.
  auto out = arrow_removal(gamma64(), "b");
  EXPECT_EQ(out.small->dim(), 3);
  EXPECT_TRUE(out.rebuilt.is_certified());
  EXPECT_TRUE(out.report.overall.is_certified());
}

// Trivial extensions by projective bimodules B e_s (x) e_t B with
// e_t B e_s = 0: bounded with p = 2 and pd 0, and every consequence holds.
class ProjectiveTrivialExtension : public ::testing::TestWithParam<int> {};

TEST_P(ProjectiveTrivialExtension, Consequences) {
  std::mt19937_64 rng(700 + GetParam());
  AlgPtr b;
  std::optional<int> v;
  for (int attempt = 0; attempt < 100 && !v; ++attempt) {
    b = random_path_algebra(rng, 6);
    v = nilpotent_projective_vertex(rng, b);
    if (v && projective_module(enveloping(b), *v).dim() > 8) v.reset();
  }
  ASSERT_TRUE(v.has_value());
  FDModule m = projective_module(enveloping(b), *v);
  Extension e = trivial_extension(b, m);
  auto r = check_bounded(e);
  ASSERT_TRUE(r.overall.is_certified()) << r.to_json().dump();
  EXPECT_EQ(r.p(), 2);
  EXPECT_EQ(r.bimodule_pd.value(), 0);
  EXPECT_TRUE(iso(quotient_bimodule(e).module, m));
  auto tc = verify_tor_consequences(e, r);
  EXPECT_TRUE(tc.is_certified()) << tc.to_json().dump();
  auto sp = verify_sandwich_pd(e, r);
  EXPECT_TRUE(sp.is_certified()) << sp.to_json().dump();
  auto bar = relative_bar_exactness(e, r);
  EXPECT_TRUE(bar.is_certified()) << bar.to_json().dump();
}

INSTANTIATE_TEST_SUITE_P(Random, ProjectiveTrivialExtension, ::testing::Range(0, 20));

class ExtensionProperty : public ::testing::TestWithParam<int> {};


TEST_P(ExtensionProperty, TorSidesAgree) {
  std::mt19937_64 rng(1300 + GetParam());
  AlgPtr b = random_path_algebra(rng, 5);
  FDModule m = random_bimodule(rng, b, GetParam() % 3);
  const BoundedCutoffs c{4, 10};
  auto left = check_bounded_quotient(m, c, TorSide::Left);
  auto right = check_bounded_quotient(m, c, TorSide::Right);
  EXPECT_EQ(left.overall.status, right.overall.status) << left.to_json().dump() << "\n" << right.to_json().dump();
}

TEST_P(ExtensionProperty, CutoffMonotone) {
  std::mt19937_64 rng(2300 + GetParam());
  AlgPtr b = random_path_algebra(rng, 5);
  FDModule m = random_bimodule(rng, b, GetParam() % 3);
  auto low = check_bounded_quotient(m, {2, 3});
  auto high = check_bounded_quotient(m, {4, 10});
  if (!low.overall.is_inconclusive()) EXPECT_EQ(low.overall.status, high.overall.status);
  if (low.nilpotency.is_certified()) EXPECT_EQ(low.nilpotency.value(), high.nilpotency.value());
  if (low.bimodule_pd.is_certified()) EXPECT_EQ(low.bimodule_pd.value(), high.bimodule_pd.value());
}

TEST_P(ExtensionProperty, TrivialExtensionRoundTrip) {
  std::mt19937_64 rng(3300 + GetParam());
  const Field f = GetParam() % 4 == 1 ? make_field(3) : Field{};
  AlgPtr b = random_path_algebra(rng, 6, f);
  FDModule m = random_module(rng, enveloping(b), 8);
  Extension e = trivial_extension(b, m);
  EXPECT_EQ(e.big->dim(), b->dim() + m.dim());
  EXPECT_FALSE(multiplicativity_violation(b, e.big, e.embedding).has_value());
  QuotientBimodule q = quotient_bimodule(e);
  EXPECT_TRUE(iso(q.module, m));
  EXPECT_TRUE((q.projection * q.lift).is_identity());
}

TEST_P(ExtensionProperty, TriangularIsTrivialExtension) {
  std::mt19937_64 rng(4300 + GetParam());
  AlgPtr l = random_path_algebra(rng, 4);
  AlgPtr g = random_path_algebra(rng, 4);
  FDModule w = random_module(rng, tensor_algebra(g, opposite(l)), 6);
  auto t = triangular_algebra(l, g, w);
  EXPECT_TRUE(t.iso.is_certified());
  EXPECT_EQ(t.matrix_algebra->dim(), l->dim() + g->dim() + w.dim());
  auto powers = tensor_powers(t.w, 3);
  ASSERT_TRUE(powers.nilpotency.is_certified());
  EXPECT_LE(powers.nilpotency.value(), 2);
  auto r = check_bounded(t.extension, {3, 8});
  if (r.bimodule_pd.is_certified()) EXPECT_TRUE(r.overall.is_certified()) << r.to_json().dump();
}

INSTANTIATE_TEST_SUITE_P(Random, ExtensionProperty, ::testing::Range(0, 200));

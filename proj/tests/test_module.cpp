#include <gtest/gtest.h>

#include <random>

#include "bimodule_fixtures.hpp"
#include "fixtures.hpp"
#include "homex/bimodule.hpp"
#include "homex/errors.hpp"
#include "homex/module.hpp"
#include "homex/resolution.hpp"
#include "random_algebras.hpp"

using namespace homex;
using namespace homex::testing;

namespace {

std::vector<int> dims(const std::vector<FDModule>& ms) {
  std::vector<int> out;
  for (const auto& m : ms) out.push_back(m.dim());
  return out;
}

// Independent oracle: brute-force check of rho(b_i) rho(b_j) = sum_k c_ij^k rho(b_k).
bool satisfies_structure_constants(const FDModule& m) {
  const auto& a = *m.algebra();
  Mat one(m.dim(), m.dim(), m.field());
  for (int v = 0; v < a.vertex_count(); ++v) one += m.action(a.idempotent_index(v));
  if (!one.is_identity()) return false;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) {
      Mat rhs(m.dim(), m.dim(), m.field());
      for (const auto& [k, c] : a.product(i, j)) rhs.add_scaled(c, m.action(k));
      if (m.action(i) * m.action(j) != rhs) return false;
    }
  return true;
}

bool iso(const FDModule& m, const FDModule& n) { return random_iso_test(m, n).is_certified(); }

}  // namespace

TEST(Projectives, DimensionsOfLinearQuiver) {
  auto a = from_presentation(a4());
  EXPECT_EQ(dims(projective_indecomposables(a)), (std::vector<int>{4, 3, 2, 1}));
  for (const auto& p : projective_indecomposables(a)) EXPECT_TRUE(satisfies_structure_constants(p));
}

TEST(Projectives, DimensionsOfGamma) {
  auto g = from_presentation(gamma64());
  EXPECT_EQ(dims(projective_indecomposables(g)), (std::vector<int>{4, 1}));
}

TEST(Projectives, TruncatedPolynomial) {
  auto a = from_presentation(kxx2());
  EXPECT_EQ(dims(simple_modules(a)), (std::vector<int>{1}));
  EXPECT_EQ(dims(projective_indecomposables(a)), (std::vector<int>{2}));
  EXPECT_EQ(regular_module(a).dim(), 2);
}

TEST(Modules, RepresentationOfLinearQuiver) {
  auto a = from_presentation(a4());
  // 1 -> 2 identity, 2 -> 3 zero: indecomposable with support {1, 2}.
  Mat al(2, 2), be(2, 2), ga(2, 2);
  al(1, 0) = Scalar(1);
  auto m = FDModule::from_representation(a, {0, 1}, {al, be, ga});
  EXPECT_TRUE(satisfies_structure_constants(m));
  EXPECT_EQ(m.dim_vector(), (std::vector<int>{1, 1, 0, 0}));
  EXPECT_EQ(top_vector(m), (std::vector<int>{1, 0, 0, 0}));
}

TEST(Modules, RejectsBrokenActions) {
  auto a = from_presentation(kxx2());
  Mat x(1, 1);
  x(0, 0) = Scalar(1);
  EXPECT_THROW(FDModule::from_generator_actions(a, {0}, {{label_index(a, "x"), x}}), HomexError);
}

TEST(Dual, SimpleIsSelfDual) {
  auto a = from_presentation(a4());
  for (int v = 0; v < 4; ++v) {
    auto d = dual_module(simple_module(a, v));
    EXPECT_EQ(d.dim(), 1);
    EXPECT_EQ(d.vertex_of(0), v);
    EXPECT_TRUE(iso(d, simple_module(opposite(a), v)));
  }
}

TEST(Dual, TruncatedPolynomialIsSelfInjective) {
  auto a = from_presentation(kxx2());
  EXPECT_TRUE(iso(dual_module(regular_module(a)), regular_module(opposite(a))));
}

TEST(Dual, InjectiveHullOfLinearQuiver) {
  auto a = from_presentation(a4());
  // I(v) has one basis vector per vertex that has a path to v.
  for (int v = 0; v < 4; ++v) EXPECT_EQ(injective_module(a, v).dim(), v + 1);
}

TEST(Tensor, TopOfRightProjectiveKillsOtherSimple) {
  auto b = from_presentation(a4());
  EXPECT_EQ(tensor_dim(simple_module(opposite(b), 1), simple_module(b, 2)), 0);
  EXPECT_EQ(tensor_dim(simple_module(opposite(b), 2), simple_module(b, 2)), 1);
}

TEST(Tensor, AlphaIdealSquaresToZero) {
  FDModule w = alpha_ideal();
  EXPECT_EQ(w.dim(), 4);
  EXPECT_EQ(TensorProduct(w, w).dim(), 0);
}

TEST(Tensor, RegularBimoduleIsUnit) {
  auto a = from_presentation(lambda64());
  FDModule n = projective_module(a, 0);
  TensorProduct t(regular_bimodule(a), as_left_bimodule(n));
  EXPECT_TRUE(iso(from_left_bimodule(t.module()), n));
}

TEST(Hom, FreeModuleRepresentsEvaluation) {
  auto a = from_presentation(lambda64());
  for (const auto& n : simple_modules(a)) EXPECT_EQ(hom_dim(regular_module(a), n), n.dim());
  EXPECT_EQ(hom_dim(regular_module(a), regular_module(a)), a->dim());
}

TEST(Hom, Simples) {
  auto a = from_presentation(a4());
  auto s = simple_modules(a);
  EXPECT_EQ(hom_dim(s[0], s[1]), 0);
  for (const auto& x : s) EXPECT_EQ(hom_dim(x, x), 1);
  for (const auto& f : hom_space(projective_module(a, 0), injective_module(a, 3)))
    EXPECT_TRUE(is_homomorphism(projective_module(a, 0), injective_module(a, 3), f));
}

TEST(Hom, AlgebraMismatch) {
  auto a = from_presentation(a4());
  auto b = from_presentation(kxx2());
  try {
    hom_dim(simple_module(a, 0), simple_module(b, 0));
    FAIL();
  } catch (const HomexError& e) {
    EXPECT_EQ(e.code(), ErrorCode::AlgebraMismatch);
  }
}

TEST(TopRadical, Projectives) {
  auto a = from_presentation(a4());
  for (int v = 0; v < 4; ++v) {
    auto tr = top_and_radical(projective_module(a, v));
    EXPECT_TRUE(iso(tr.top.module, simple_module(a, v)));
    EXPECT_EQ(tr.radical.module.dim(), 3 - v);
  }
  EXPECT_EQ(top_and_radical(regular_module(from_presentation(kxx2()))).radical.module.dim(), 1);
}

TEST(TopRadical, AlphaIdealIsSemisimpleOnTheRight) {
  FDModule r = right_part(alpha_ideal());
  EXPECT_EQ(top_and_radical(r).radical.module.dim(), 0);
  auto gop = r.algebra();
  EXPECT_TRUE(iso(r, power(simple_module(gop, 1), 4)));
}

TEST(Cover, Simples) {
  auto a = from_presentation(a4());
  for (int v = 0; v < 4; ++v) {
    auto c = projective_cover(simple_module(a, v));
    EXPECT_EQ(c.summands, std::vector<int>{v});
    EXPECT_EQ(c.projective.dim(), 4 - v);
    EXPECT_TRUE(c.minimal);
  }
}

TEST(Cover, AlphaIdealOverEnvelopingAlgebra) {
  FDModule w = alpha_ideal();
  auto c = projective_cover(w);
  ASSERT_EQ(c.summands.size(), 1u);
  EXPECT_EQ(w.algebra()->vertex_name(c.summands[0]), "1x2^op");
  EXPECT_EQ(c.projective.dim(), 12);
  EXPECT_EQ(static_cast<int>(c.kernel.cols()), 8);
  EXPECT_TRUE(c.minimal);
}

TEST(Cover, OfProjectiveIsIso) {
  auto a = from_presentation(lambda64());
  for (const auto& p : projective_indecomposables(a)) {
    auto c = projective_cover(p);
    EXPECT_EQ(c.kernel.cols(), 0u);
    EXPECT_TRUE(inverse(c.cover).has_value());
  }
}

TEST(Iso, SelfAndDistinctSimples) {
  auto a = from_presentation(a4());
  auto m = projective_module(a, 1);
  auto v = random_iso_test(m, m);
  ASSERT_TRUE(v.is_certified());
  EXPECT_TRUE(is_homomorphism(m, m, iso_witness(v, m.field())));
  EXPECT_TRUE(random_iso_test(simple_module(a, 0), simple_module(a, 1)).is_refuted());
}

TEST(Iso, DetectsNonIsoWithSameDimVector) {
  auto a = from_presentation(kronecker());
  // Two-dim Kronecker modules with different arrow maps.
  Mat one(2, 2), zero(2, 2);
  one(1, 0) = Scalar(1);
  auto m = FDModule::from_representation(a, {0, 1}, {one, zero});
  auto n = FDModule::from_representation(a, {0, 1}, {zero, one});
  EXPECT_FALSE(random_iso_test(m, n).is_certified());
}

TEST(Strip, Projective) {
  auto a = from_presentation(a4());
  auto s = strip_projective_summands(regular_module(a));
  EXPECT_EQ(s.core.dim(), 0);
  EXPECT_EQ(s.stripped.size(), 4u);
}

TEST(Strip, SimpleWithProjective) {
  auto a = from_presentation(lambda64());
  FDModule s = simple_module(a, 1);
  auto r = strip_projective_summands(direct_sum(s, projective_module(a, 0)));
  EXPECT_EQ(r.stripped, std::vector<int>{0});
  EXPECT_TRUE(iso(r.core, s));
}

TEST(Strip, PaddedSyzygy) {
  // Kernel of a non-minimal cover P(M) + P_extra -> M is Omega(M) + P_extra.
  auto a = from_presentation(lambda64());
  FDModule m = simple_module(a, 0);
  auto c = projective_cover(m);
  FDModule extra = projective_module(a, 1);
  FDModule big = direct_sum(c.projective, extra);
  Mat map = hstack(c.cover, Mat(m.dim(), extra.dim(), m.field()));
  ASSERT_TRUE(is_homomorphism(big, m, map));
  FDModule padded = submodule_from_span(big, columns_of(kernel_basis(map))).module;
  auto r = strip_projective_summands(padded);
  EXPECT_EQ(r.stripped, std::vector<int>{1});
  EXPECT_TRUE(iso(r.core, syzygy(m, 1)));
}

TEST(Restriction, AlongLabelInclusion) {
  auto lam = from_presentation(lambda64());
  auto gam = from_presentation(gamma64());
  auto res = restrict_scalars(regular_module(lam), gam, label_matching(gam, lam));
  EXPECT_EQ(res.module.dim(), 9);
  EXPECT_TRUE(satisfies_structure_constants(res.module));
}

class ModuleProperty : public ::testing::TestWithParam<int> {};

TEST_P(ModuleProperty, UnitTensorDualAndCover) {
  std::mt19937_64 rng(1000 + GetParam());
  AlgPtr a = random_path_algebra(rng, 8);
  FDModule m = random_module(rng, a, 8);
  ASSERT_TRUE(satisfies_structure_constants(m));

  // A (x)_A M = M and M' (x)_A A = M' for the right module M' = D(M).
  TensorProduct left(regular_bimodule(a), as_left_bimodule(m));
  EXPECT_TRUE(iso(from_left_bimodule(left.module()), m));
  FDModule dm = dual_module(m);
  TensorProduct right(as_right_bimodule(dm), regular_bimodule(a));
  EXPECT_TRUE(iso(from_right_bimodule(right.module()), dm));

  // Double dual.
  FDModule ddm = dual_module(dm);
  EXPECT_EQ(ddm.dim(), m.dim());
  EXPECT_TRUE(iso(retarget(ddm, a), m));

  // Cover: surjective module map with kernel in rad P.
  auto c = projective_cover(m);
  EXPECT_TRUE(is_homomorphism(c.projective, m, c.cover));
  EXPECT_EQ(static_cast<int>(rank(c.cover)), m.dim());
  Subspace radp = span_of(columns_of(top_and_radical(c.projective).radical.inclusion), c.projective.dim(), m.field());
  for (const auto& k : columns_of(c.kernel)) EXPECT_TRUE(radp.contains(k));
  EXPECT_EQ(top_vector(c.projective), top_vector(m));

  // Hom from the regular module evaluates at 1.
  EXPECT_EQ(hom_dim(regular_module(a), m), m.dim());
}

INSTANTIATE_TEST_SUITE_P(Random, ModuleProperty, ::testing::Range(0, 200));

#include <gtest/gtest.h>

#include <fstream>
#include <functional>
#include <optional>
#include <random>

#include "bimodule_fixtures.hpp"
#include "fixtures.hpp"
#include "homex/dsl.hpp"
#include "dsl_gen.hpp"
#include "homex/errors.hpp"

using namespace homex;
using namespace homex::dsl;
using namespace homex::testing;

namespace {

std::string sample(const std::string& name) { return std::string(HOMEX_SAMPLES) + "/" + name; }

std::optional<HomexError> error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const HomexError& e) {
    return e;
  }
  return std::nullopt;
}

}  // namespace

TEST(Dsl, GammaInLambdaSourceGivesLambda) {
  Workspace w(parse_file(sample("gamma_in_lambda.hx")));
  EXPECT_EQ(w.algebra("Lambda")->dim(), 9);
  EXPECT_EQ(w.algebra("Gamma")->dim(), 5);
  EXPECT_TRUE(same_algebra(w.algebra("Lambda"), from_presentation(lambda64())));
  const FDModule q = w.module("LaL_over_Ge");
  EXPECT_EQ(q.dim(), 4);
  EXPECT_TRUE(random_iso_test(q, quotient_bimodule(gamma_in_lambda()).module).is_certified());
  EXPECT_EQ(w.extension("E").big->dim(), 9);
}

TEST(Dsl, A4TrivialSource) {
  Workspace w(parse_file(sample("a4_trivial.hx")));
  const Extension e = w.extension("E");
  EXPECT_EQ(e.small->dim(), 10);
  EXPECT_EQ(e.big->dim(), 11);
  EXPECT_TRUE(same_algebra(e.big, a4_trivial().big));
}

TEST(Dsl, SamplesRoundTrip) {
  for (const char* f : {"gamma_in_lambda.hx", "a4_trivial.hx", "kxx2.hx", "a4.hx", "kronecker.hx"}) {
    const SourceFile s = parse_file(sample(f));
    EXPECT_EQ(parse(print(s)), s) << f;
    EXPECT_EQ(print(parse(print(s))), print(s)) << f;
  }
}

TEST(Dsl, ExplicitBimoduleMatchesRegular) {
  const SourceFile s = parse(R"(
    quiver kx { vertices 1; arrow x: 1 -> 1 }
    relations kx { x*x }
    bimodule A over kx, kx {
      basis 1|1 1|1
      left x = [[0, 0], [1, 0]]
      right x = [[0, 0], [1, 0]]
    }
    bimodule R over kx, kx = regular()
  )");
  Workspace w(s);
  EXPECT_TRUE(random_iso_test(w.module("A"), w.module("R")).is_certified());
}

TEST(Dsl, ExplicitBimoduleCompositionOrder) {
  // The regular bimodule of A3 on the basis e1 e2 e3 a b b*a; paths of
  // length two act through the composite of the arrow actions.
  const SourceFile s = parse(R"(
    quiver A3 { vertices 1 2 3; arrow a: 1 -> 2; arrow b: 2 -> 3 }
    bimodule P over A3, A3 {
      basis 1|1 2|2 3|3 2|1 3|2 3|1
      left a = [[0,0,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0],[1,0,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0]]
      left b = [[0,0,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0],[0,1,0,0,0,0],[0,0,0,1,0,0]]
      right a = [[0,0,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0],[0,1,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,1,0]]
      right b = [[0,0,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0],[0,0,0,0,0,0],[0,0,1,0,0,0],[0,0,0,0,0,0]]
    }
    bimodule R over A3, A3 = regular()
    module P1 over A3 {
      basis 1 2 3
      a = [[0,0,0],[1,0,0],[0,0,0]]
      b = [[0,0,0],[0,0,0],[0,1,0]]
    }
  )");
  Workspace w(s);
  EXPECT_TRUE(random_iso_test(w.module("P"), w.module("R")).is_certified());
  EXPECT_TRUE(random_iso_test(w.module("P1"), projective_module(w.algebra("A3"), 0)).is_certified());
}

TEST(Dsl, FieldDirectiveAndOverride) {
  const SourceFile s = parse("field F 3\nquiver kx { vertices 1; arrow x: 1 -> 1 }\nrelations kx { x*x }\n");
  EXPECT_EQ(Workspace(s).field(), make_field(3));
  EXPECT_EQ(Workspace(s, Field{}).field(), Field{});
  EXPECT_EQ(Workspace(s).algebra("kx")->dim(), 2);
}

TEST(Dsl, CoefficientsAndSigns) {
  const SourceFile s = parse(R"(
    quiver Sq { vertices 1 2 3 4; arrow a: 1 -> 2; arrow b: 2 -> 4; arrow c: 1 -> 3; arrow d: 3 -> 4 }
    relations Sq { b*a - 3/2 d*c }
  )");
  const auto& r = std::get<RelationsDecl>(s.decls[1]);
  ASSERT_EQ(r.relations.size(), 1u);
  EXPECT_EQ(r.relations[0][1].coeff, Scalar(-3) / Scalar(2));
  EXPECT_EQ(r.relations[0][0].path, (std::vector<std::string>{"b", "a"}));
  EXPECT_EQ(Workspace(s).algebra("Sq")->dim(), 9);
}

TEST(DslErrors, ExpectedTokenSetsAndPositions) {
  auto e = error_of([] { parse("quiver Q {\n  vertices 1 2\n  arrow a 1 -> 2\n}"); });
  ASSERT_TRUE(e);
  EXPECT_EQ(e->code(), ErrorCode::ParseError);
  EXPECT_EQ(e->detail().at("line"), 3);
  EXPECT_EQ(e->detail().at("col"), 11);
  EXPECT_EQ(e->detail().at("expected"), nlohmann::json::array({"':'"}));
  EXPECT_EQ(e->detail().at("found"), "1");

  auto top = error_of([] { parse("quiverr Q {}"); });
  ASSERT_TRUE(top);
  EXPECT_EQ(top->detail().at("expected").size(), 6u);

  auto lex = error_of([] { parse("quiver Q { vertices 1 }\n  @"); });
  ASSERT_TRUE(lex);
  EXPECT_EQ(lex->detail().at("line"), 2);
  EXPECT_EQ(lex->detail().at("col"), 3);
}

TEST(DslErrors, MixedPathLengthsNameTheRelation) {
  auto e = error_of([] {
    parse("quiver Q { vertices 1 2; arrow a: 1 -> 1; arrow b: 1 -> 1 }\nrelations Q {\n  a*a\n  a*b - b\n}\n");
  });
  ASSERT_TRUE(e);
  EXPECT_EQ(e->code(), ErrorCode::NonHomogeneous);
  EXPECT_EQ(e->detail().at("relation"), 1);
  EXPECT_EQ(e->detail().at("line"), 4);
  EXPECT_EQ(e->detail().at("text"), "a*b - b");
}

TEST(DslErrors, DanglingNames) {
  const std::vector<std::string> bad{
      "module M over Nope = simple(1)",
      "quiver Q { vertices 1 }\nmodule M over Q = simple(2)",
      "quiver Q { vertices 1; arrow a: 1 -> 2 }",
      "quiver Q { vertices 1 }\nrelations Q { a*a }",
      "quiver Q { vertices 1 }\nextension E = arrow_removal(Q, a)",
      "quiver Q { vertices 1 }\nbimodule B = outer(X, Y)",
      "quiver Q { vertices 1 }\nbimodule B = quotient(E)",
      "quiver Q { vertices 1 }\nmodule M over env(Q) = simple(1x2^op)",
  };
  for (const auto& text : bad) {
    auto e = error_of([&] { parse(text); });
    ASSERT_TRUE(e) << text;
    EXPECT_EQ(e->code(), ErrorCode::UnresolvedName) << text;
    EXPECT_TRUE(e->detail().contains("line")) << text;
  }
}

TEST(DslErrors, DuplicatesAndKindMismatch) {
  for (const std::string text : {
           "quiver Q { vertices 1 }\nquiver Q { vertices 1 }",
           "quiver Q { vertices 1 1 }",
           "quiver Q { vertices 1 }\nmodule M over Q = simple(1)\nbimodule B = outer(M, Q)",
           "quiver Q { vertices 1 }\nmodule M over Q = simple(1)\nextension E = trivial(Q, M)",
           "field F 4",
           "field F 99999999999999999999",
           "quiver Q { vertices 1 }\nfield Q",
           "quiver Q { vertices 1; arrow a: 1 -> 1 }\nmodule M over Q { basis 1\n a = [[1, 2]] }",
           "quiver Q { vertices 1 }\nmodule M over Q = tensor(1)",
       }) {
    auto e = error_of([&] { parse(text); });
    ASSERT_TRUE(e) << text;
  }
}

TEST(DslErrors, BuildErrorsCarryTheDeclaration) {
  Workspace w(parse("quiver Q { vertices 1 2; arrow a: 1 -> 2 }\nquiver P { vertices 1 }\nextension E = embed(P, Q, [[1]])"));
  auto e = error_of([&] { w.extension("E"); });
  ASSERT_TRUE(e);
  EXPECT_EQ(e->detail().at("line"), 3);
  EXPECT_EQ(e->detail().at("extension"), "E");
  EXPECT_EQ(error_of([&] { w.module("nothing"); })->code(), ErrorCode::UnresolvedName);
}

TEST(Dsl, MissingFile) {
  auto e = error_of([] { parse_file("/nonexistent/file.hx"); });
  ASSERT_TRUE(e);
  EXPECT_EQ(e->code(), ErrorCode::ParseError);
}

class DslRoundTrip : public ::testing::TestWithParam<int> {};

TEST_P(DslRoundTrip, PrintParseIsIdentity) {
  SourceGen gen(9100 + GetParam());
  const SourceFile s = gen.file();
  const std::string text = print(s);
  SourceFile back;
  ASSERT_NO_THROW(back = parse(text)) << text;
  EXPECT_EQ(back, s) << text;
  EXPECT_EQ(print(back), text);
}

INSTANTIATE_TEST_SUITE_P(Random, DslRoundTrip, ::testing::Range(0, 200));

class DslFuzz : public ::testing::TestWithParam<int> {};

TEST_P(DslFuzz, NeverCrashes) {
  std::mt19937_64 rng(9700 + GetParam());
  std::string text;
  if (GetParam() % 2 == 0) {
    const int n = static_cast<int>(rng() % 200);
    for (int i = 0; i < n; ++i) text.push_back(static_cast<char>(rng() % 256));
  } else {
    // Mutations of a valid source.
    std::ifstream in(sample(GetParam() % 4 == 1 ? "gamma_in_lambda.hx" : "kronecker.hx"));
    text.assign(std::istreambuf_iterator<char>(in), {});
    const int edits = 1 + static_cast<int>(rng() % 6);
    const std::string alphabet = "{}()[],;:*+-/=#>|^'x1 \n\t\x80\xff";
    for (int k = 0; k < edits && !text.empty(); ++k) {
      const std::size_t at = rng() % text.size();
      switch (rng() % 3) {
        case 0: text.erase(at, 1 + rng() % 5); break;
        case 1: text.insert(at, 1, alphabet[rng() % alphabet.size()]); break;
        default: text[at] = static_cast<char>(rng() % 256);
      }
    }
  }
  try {
    SourceFile s = parse(text);
    EXPECT_EQ(parse(print(s)), s);
  } catch (const HomexError& e) {
    EXPECT_TRUE(e.code() == ErrorCode::ParseError || e.code() == ErrorCode::UnresolvedName ||
                e.code() == ErrorCode::NonHomogeneous || e.code() == ErrorCode::InvalidQuiver)
        << e.what();
  }
}

INSTANTIATE_TEST_SUITE_P(Random, DslFuzz, ::testing::Range(0, 300));

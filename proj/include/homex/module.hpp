#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include <nlohmann/json.hpp>

#include "homex/algebra.hpp"
#include "homex/verdict.hpp"

namespace homex {

/// A finite-dimensional left module over an AlgebraTable. The basis is
/// adapted to the idempotents: basis vector i lies in e_v M for
/// v = vertex_of(i), so every action matrix is block-structured.
///
/// Right modules are left modules over opposite(A); bimodules are left
/// modules over tensor_algebra(L, opposite(R)). Copies share storage.
class FDModule {
 public:
  enum class Check { None, Generators, Full };

  FDModule() = default;

  /// Full action matrices, one per algebra basis element.
  static FDModule make(AlgPtr alg, std::vector<int> vertex_of, std::vector<Mat> actions,
                       Check check = Check::Generators);
  /// Action matrices of the arrow generators only; the rest is derived.
  static FDModule from_generator_actions(AlgPtr alg, std::vector<int> vertex_of, const std::map<int, Mat>& gens);
  /// Path algebra representation: one dim x dim matrix per quiver arrow.
  static FDModule from_representation(AlgPtr alg, std::vector<int> vertex_of, const std::vector<Mat>& arrows);
  static FDModule zero(AlgPtr alg);

  const AlgPtr& algebra() const { return d_->alg; }
  int dim() const { return static_cast<int>(d_->vertex_of.size()); }
  bool is_zero() const { return dim() == 0; }
  int vertex_of(int i) const { return d_->vertex_of[i]; }
  const std::vector<int>& vertices() const { return d_->vertex_of; }
  const Mat& action(int b) const { return d_->actions[b]; }
  const std::vector<Mat>& actions() const { return d_->actions; }
  Field field() const { return d_->alg->field(); }
  /// dim e_v M per vertex.
  std::vector<int> dim_vector() const;
  /// Basis indices lying in e_v M.
  const std::vector<int>& basis_at(int v) const { return d_->by_vertex[v]; }

  /// Action of an arbitrary algebra element (coefficient vector).
  Mat act(const Vec& x) const;
  /// Throws InvalidModule unless every structure-constant identity holds.
  void validate() const;
  nlohmann::json to_json() const;

 private:
  struct Data {
    AlgPtr alg;
    std::vector<int> vertex_of;
    std::vector<Mat> actions;
    std::vector<std::vector<int>> by_vertex;
  };
  std::shared_ptr<const Data> d_;

  void check(Check c) const;
};

/// A module map; `map` is target.dim() x source.dim().
struct ModuleHom {
  FDModule source;
  FDModule target;
  Mat map;
};

bool is_homomorphism(const FDModule& m, const FDModule& n, const Mat& f);

FDModule regular_module(const AlgPtr& a);
/// A e_v with basis the algebra basis elements whose right vertex is v.
FDModule projective_module(const AlgPtr& a, int v);
FDModule simple_module(const AlgPtr& a, int v);
std::vector<FDModule> projective_indecomposables(const AlgPtr& a);
std::vector<FDModule> simple_modules(const AlgPtr& a);
/// Injective hull of the simple at v: the k-dual of the right projective e_v A.
FDModule injective_module(const AlgPtr& a, int v);

/// k-dual with transposed actions, a module over opposite(algebra).
FDModule dual_module(const FDModule& m);
FDModule direct_sum(const FDModule& a, const FDModule& b);
FDModule direct_sum(const std::vector<FDModule>& parts, const AlgPtr& alg);
FDModule power(const FDModule& m, int copies);

/// A submodule with an adapted basis; `inclusion` is m.dim() x sub.dim().
struct Submodule {
  FDModule module;
  Mat inclusion;
};
/// Submodule generated by the given vectors.
Submodule generated_submodule(const FDModule& m, const std::vector<Vec>& gens);
/// Submodule spanned by vectors already closed under the action.
Submodule submodule_from_span(const FDModule& m, const std::vector<Vec>& span);

/// Quotient by a submodule; `projection` is quotient.dim() x m.dim() and
/// `section` is a linear (not module) right inverse.
struct Quotient {
  FDModule module;
  Mat projection;
  Mat section;
};
Quotient quotient_module(const FDModule& m, const std::vector<Vec>& sub_span);

/// rad M = rad(A) M with its inclusion; top M = M / rad M with its projection.
struct TopRadical {
  Submodule radical;
  Quotient top;
};
TopRadical top_and_radical(const FDModule& m);
/// Dimension of the top at each vertex.
std::vector<int> top_vector(const FDModule& m);

/// Basis of Hom_A(m, n); each entry is n.dim() x m.dim().
std::vector<Mat> hom_space(const FDModule& m, const FDModule& n);
int hom_dim(const FDModule& m, const FDModule& n);

/// P = sum of A e_v over the top of m, with a surjection onto m. The
/// generators `tops` are the images of the idempotent basis vectors.
struct ProjectiveCover {
  FDModule projective;
  std::vector<int> summands;  // vertex of each summand
  Mat cover;                  // m.dim() x projective.dim()
  Mat kernel;                 // columns: basis of the kernel inside P
  bool minimal = false;       // kernel inside rad P
};
ProjectiveCover projective_cover(const FDModule& m);

/// Restriction of scalars along an algebra morphism phi: B -> A, given as a
/// dim(A) x dim(B) matrix. The result is rebased to an adapted basis;
/// `basis_change` maps the new coordinates to the old ones.
struct Restriction {
  FDModule module;
  Mat basis_change;
};
Restriction restrict_scalars(const FDModule& m, const AlgPtr& b, const Mat& phi);
/// A module given by action matrices in an arbitrary basis, rebased to one
/// adapted to the idempotents.
Restriction adapt_module(const AlgPtr& b, std::vector<Mat> raw);

/// The same matrices viewed over a structurally equal algebra.
FDModule retarget(const FDModule& m, const AlgPtr& alg);

/// Certified with a verified isomorphism witness, Refuted when the
/// dimension vectors or hom dimensions rule out an isomorphism,
/// Inconclusive when no invertible combination was found within `trials`.
Verdict random_iso_test(const FDModule& m, const FDModule& n, int trials = 32, std::uint64_t seed = 0x5eed);
/// The witness matrix of a Certified iso verdict.
Mat iso_witness(const Verdict& v, Field f);

/// Removes projective summands one at a time. `stripped` lists the vertex of
/// each removed A e_v; `core` has no projective summand.
struct Stripped {
  FDModule core;
  std::vector<int> stripped;
};
Stripped strip_projective_summands(const FDModule& m);

nlohmann::json mat_to_json(const Mat& m);
Mat mat_from_json(const nlohmann::json& j, Field f);

}  // namespace homex

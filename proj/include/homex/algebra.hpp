#pragma once

#include <array>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "homex/matrix.hpp"
#include "homex/quiver.hpp"

namespace homex {

/// Sorted (index, coefficient) pairs with no zero coefficients.
using SparseVec = std::vector<std::pair<int, Scalar>>;

Vec densify(const SparseVec& s, std::size_t n, Field f);
SparseVec sparsify(const Vec& v);

class AlgebraTable;
using AlgPtr = std::shared_ptr<const AlgebraTable>;

/// For tables built from a quiver: the presentation and, per basis element,
/// the path it stands for (empty for non-path bases).
struct PathBasis {
  Presentation presentation;
  std::vector<Path> paths;
};

/// Raw content of an AlgebraTable. The basis is "standard": it consists of
/// one basis element per primitive idempotent plus a basis of the Jacobson
/// radical, and every basis element b satisfies e_l b e_r = b for the
/// recorded vertices l = left_vertex[b], r = right_vertex[b].
struct AlgebraData {
  Field field{};
  std::vector<std::string> labels;
  std::vector<std::string> vertex_names;
  std::vector<int> idempotent_basis;  // basis index of e_v, per vertex
  std::vector<int> left_vertex;
  std::vector<int> right_vertex;
  std::vector<SparseVec> mult;  // dim*dim products b_i * b_j
  std::optional<PathBasis> path_basis;
};

/// A finite-dimensional elementary unital algebra as structure constants.
/// Immutable once built; share through AlgPtr.
class AlgebraTable : public std::enable_shared_from_this<AlgebraTable> {
 public:
  struct Options {
    bool verify_associativity = true;
  };

  /// Validates the standard-basis invariants, the idempotent axioms,
  /// nilpotency of the radical and (optionally) associativity.
  static AlgPtr make(AlgebraData data, Options opts);
  static AlgPtr make(AlgebraData data) { return make(std::move(data), Options{}); }

  Field field() const { return d_.field; }
  int dim() const { return static_cast<int>(d_.labels.size()); }
  int vertex_count() const { return static_cast<int>(d_.idempotent_basis.size()); }
  const std::string& label(int b) const { return d_.labels[b]; }
  const std::vector<std::string>& labels() const { return d_.labels; }
  const std::string& vertex_name(int v) const { return d_.vertex_names[v]; }
  const std::vector<std::string>& vertex_names() const { return d_.vertex_names; }
  int vertex_index(const std::string& name) const;
  const AlgebraData& data() const { return d_; }

  const SparseVec& product(int i, int j) const { return d_.mult[static_cast<std::size_t>(i) * dim() + j]; }
  Vec multiply(const Vec& x, const Vec& y) const;
  SparseVec multiply(const SparseVec& x, const SparseVec& y) const;

  Vec unit() const;
  Vec idempotent(int v) const { return unit_vec(dim(), d_.idempotent_basis[v], field()); }
  int idempotent_index(int v) const { return d_.idempotent_basis[v]; }
  int left_vertex(int b) const { return d_.left_vertex[b]; }
  int right_vertex(int b) const { return d_.right_vertex[b]; }
  bool is_idempotent_basis(int b) const { return idempotent_of_[b] >= 0; }
  bool in_radical(int b) const { return idempotent_of_[b] < 0; }

  /// Indices of the radical basis elements.
  const std::vector<int>& radical_basis() const { return radical_; }
  /// Radical basis as matrix rows.
  Mat radical() const;
  /// Radical basis elements whose span complements rad^2; together with the
  /// idempotents they generate the algebra.
  const std::vector<int>& arrow_generators() const { return arrows_; }
  /// Basis indices spanning e_s A e_t.
  const std::vector<int>& peirce(int s, int t) const { return peirce_[static_cast<std::size_t>(s) * vertex_count() + t]; }
  /// Basis indices spanning A e_v (left projective) and e_v A (right projective).
  const std::vector<int>& left_projective_basis(int v) const { return left_proj_[v]; }
  const std::vector<int>& right_projective_basis(int v) const { return right_proj_[v]; }
  /// dim rad^i / rad^{i+1} for i = 0, 1, ... until it vanishes.
  const std::vector<int>& radical_layers() const { return layers_; }
  int loewy_length() const { return static_cast<int>(layers_.size()); }

  /// Matrix of x -> b*x (left) or x -> x*b (right) on the regular module.
  Mat left_mult_matrix(int b) const;
  Mat right_mult_matrix(int b) const;

  /// Checks (b_i b_j) b_k = b_i (b_j b_k); all triples when `full`, else
  /// with b_k restricted to generators. Returns the first violating triple.
  std::optional<std::array<int, 3>> associativity_violation(bool full) const;

  const std::optional<PathBasis>& path_basis() const { return d_.path_basis; }
  /// Factors (a, b) when this table is a tensor product a (x) b.
  const std::optional<std::pair<AlgPtr, AlgPtr>>& tensor_factors() const { return tensor_factors_; }
  /// Set when this table is the opposite of another.
  const AlgPtr& opposite_of() const { return opposite_of_; }

  /// Structural equality (pointer equality short-circuits).
  bool same_as(const AlgebraTable& other) const;

 private:
  explicit AlgebraTable(AlgebraData d) : d_(std::move(d)) {}
  void index_structure();
  void validate(const Options& opts) const;

  AlgebraData d_;
  std::vector<int> idempotent_of_;
  std::vector<int> radical_;
  std::vector<int> arrows_;
  std::vector<std::vector<int>> peirce_;
  std::vector<std::vector<int>> left_proj_;
  std::vector<std::vector<int>> right_proj_;
  std::vector<int> layers_;
  std::optional<std::pair<AlgPtr, AlgPtr>> tensor_factors_;
  AlgPtr opposite_of_;

  mutable std::mutex cache_mutex_;
  mutable std::weak_ptr<const AlgebraTable> opposite_cache_;

  friend AlgPtr opposite(const AlgPtr& a);
  friend AlgPtr tensor_algebra(const AlgPtr& a, const AlgPtr& b);
};

bool same_algebra(const AlgPtr& a, const AlgPtr& b);
void require_same_algebra(const AlgPtr& a, const AlgPtr& b, const std::string& context);

/// Path algebra modulo a homogeneous ideal, reduced degree by degree.
/// Throws NonAdmissible when no graded component vanishes up to `cap`.
AlgPtr from_presentation(const Presentation& p, int cap = 64);
/// The ground field as a one-dimensional algebra.
AlgPtr ground_algebra(Field f);
/// Same basis, reversed multiplication. opposite(opposite(a)) returns a.
AlgPtr opposite(const AlgPtr& a);
/// Basis pairs (i, j) -> i * dim(b) + j; cached per factor pair.
AlgPtr tensor_algebra(const AlgPtr& a, const AlgPtr& b);
/// tensor_algebra(a, opposite(a)); left modules are a-a bimodules.
AlgPtr enveloping(const AlgPtr& a);
AlgPtr product_algebra(const AlgPtr& a, const AlgPtr& b);

/// Raw structure constants: mult[i][j] is the coefficient vector of
/// b_i * b_j, `idempotents` the primitive orthogonal idempotents. The radical
/// is found from the trace form (characteristic 0 only) and the basis is
/// rewritten into standard form.
AlgPtr from_structure_constants(Field f, const std::vector<std::vector<Vec>>& mult,
                                const std::vector<Vec>& idempotents,
                                std::vector<std::string> labels = {});

/// A linear map between two algebras (columns = images of basis elements) is
/// an isomorphism of unital algebras.
bool is_algebra_isomorphism(const AlgPtr& from, const AlgPtr& to, const Mat& map);

}  // namespace homex

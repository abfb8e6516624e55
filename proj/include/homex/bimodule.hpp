#pragma once

#include <vector>

#include "homex/module.hpp"

namespace homex {

/// L-R bimodules are left modules over tensor_algebra(L, opposite(R)). The
/// vertex of e_s W e_t is s * |R_0| + t.

/// The two factors (L, R) of a bimodule's algebra; throws unless the
/// algebra is a tensor product with an opposite right factor.
std::pair<AlgPtr, AlgPtr> bimodule_sides(const FDModule& w);
bool is_bimodule(const FDModule& w);

/// Bimodule from commuting one-sided actions: left[x] for each basis
/// element of L and right[y] (the map w -> w y) for each basis element of R.
FDModule bimodule_from_actions(const AlgPtr& l, const AlgPtr& r, std::vector<int> vertex_of,
                               const std::vector<Mat>& left, const std::vector<Mat>& right);

/// Restriction to the left action (an L-module) and the right action
/// (an opposite(R)-module).
FDModule left_part(const FDModule& w);
FDModule right_part(const FDModule& w);

/// M (x)_k N for a left L-module M and a right R-module N (a left
/// opposite(R)-module).
FDModule outer_product(const FDModule& m, const FDModule& n);
/// A as an A-A bimodule.
FDModule regular_bimodule(const AlgPtr& a);

/// A left B-module as a B-k bimodule, a right B-module as a k-B bimodule,
/// and back. The action matrices do not change.
FDModule as_left_bimodule(const FDModule& m);
FDModule as_right_bimodule(const FDModule& m);
FDModule from_left_bimodule(const FDModule& w);
FDModule from_right_bimodule(const FDModule& w);

/// A bimodule together with its basis in the caller's coordinates
/// (column j = new basis vector j).
struct RebasedBimodule {
  FDModule module;
  Mat basis_change;
};

/// Bimodule from commuting actions on an arbitrary basis; the result is
/// rebased so every basis vector lies in one e_s W e_t.
RebasedBimodule adapt_bimodule(const AlgPtr& l, const AlgPtr& r, std::vector<Mat> left, std::vector<Mat> right);

/// Bimodule restricted along algebra maps L' -> L and R' -> R.
FDModule restrict_bimodule(const FDModule& w, const AlgPtr& l2, const Mat& phi_l, const AlgPtr& r2, const Mat& phi_r);
RebasedBimodule restrict_bimodule_rebased(const FDModule& w, const AlgPtr& l2, const Mat& phi_l, const AlgPtr& r2,
                                          const Mat& phi_r);

/// X (x)_B Y for a C-B bimodule X and a B-D bimodule Y, computed as the
/// cokernel of (xg) (x) y - x (x) (gy) over the arrow generators g of B,
/// block by block. The quotient keeps pure tensors of basis vectors as its
/// basis.
class TensorProduct {
 public:
  TensorProduct(const FDModule& x, const FDModule& y);

  const FDModule& module() const { return module_; }
  int dim() const { return module_.dim(); }
  /// Coordinates of sum_ij x_i y_j [b_i (x) b_j] in the quotient basis.
  Vec pure(const Vec& x, const Vec& y) const;
  /// Coordinates of the class of b_i (x) b_j.
  Vec pure_basis(int i, int j) const;
  /// The quotient basis element k is the class of b_i (x) b_j.
  std::pair<int, int> basis_pair(int k) const { return basis_pairs_[k]; }

 private:
  struct Block {
    std::vector<std::pair<int, int>> pairs;
    Subspace relations;
    std::vector<int> quotient_index;  // local pair -> quotient index, -1 for pivots
  };
  FDModule x_, y_;
  std::vector<Block> blocks_;
  std::vector<std::pair<int, int>> where_;  // (i * dim Y + j) -> (block, local), block -1 if absent
  std::vector<std::pair<int, int>> basis_pairs_;
  FDModule module_;

  void add_pure(Vec& out, int i, int j, const Scalar& c) const;
};

/// Tensor product over the common algebra of a right and a left module,
/// returning the vector space dimension.
int tensor_dim(const FDModule& right, const FDModule& left);
/// M^{(x) j} for a B-B bimodule M; j >= 1.
FDModule tensor_power(const FDModule& m, int j);

}  // namespace homex

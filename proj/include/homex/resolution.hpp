#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "homex/module.hpp"
#include "homex/verdict.hpp"

namespace homex {

inline constexpr int kDefaultResolutionCutoff = 32;

/// A minimal projective resolution kept in summand form: P_n is a direct sum
/// of indecomposable projectives A e_v, with coordinates the basis elements
/// of each A e_v in order. The differential d_n : P_n -> P_{n-1} sends the
/// generator of summand l to sum_k x_kl in summand k, where
/// x_kl lies in e_{w_l} A e_{v_k}.
class Resolution {
 public:
  const FDModule& target() const { return target_; }
  const AlgPtr& algebra() const { return target_.algebra(); }

  /// Number of computed projective terms.
  int term_count() const { return static_cast<int>(terms_.size()); }
  /// Vertices of the summands of P_n.
  const std::vector<int>& term(int n) const { return terms_[n]; }
  int term_dim(int n) const;
  /// d_n for 1 <= n < term_count(): entry(n, k, l) = x_kl.
  const SparseVec& entry(int n, int k, int l) const { return diffs_[n][l][k]; }
  /// Generators of M: image of the generator of summand k of P_0.
  const Vec& augmentation(int k) const { return aug_[k]; }

  /// The syzygy K_n = ker d_{n-1} inside P_{n-1} (ker of the augmentation
  /// for n = 1), as basis rows; available for 1 <= n <= term_count().
  const std::vector<Vec>& kernel(int n) const { return kernels_[n]; }

  /// Terminated: the last computed kernel is zero.
  bool complete() const { return complete_; }
  /// Length when complete (-1 for the zero module).
  int length() const { return complete_ ? term_count() - 1 : -1; }
  std::optional<int> truncated_at() const { return truncated_at_; }
  /// Every kernel lies in the radical of its term.
  bool minimal() const { return minimal_; }
  /// rank(d_{n+1}) = dim ker(d_n) at every computed position.
  bool exact() const { return exact_; }

  /// P_n as a module (direct sum of projective_module calls).
  FDModule term_module(int n) const;
  /// The matrix of d_n (n >= 1) or of the augmentation (n = 0) in the
  /// coordinates of term_module.
  Mat differential(int n) const;
  /// Omega^n(M); Omega^0 = M.
  FDModule syzygy(int n) const;

  nlohmann::json to_json() const;

  friend Resolution minimal_resolution(const FDModule& m, int cutoff);

 private:
  FDModule target_;
  std::vector<std::vector<int>> terms_;
  std::vector<std::vector<std::vector<SparseVec>>> diffs_;  // [n][l][k]
  std::vector<Vec> aug_;
  std::vector<std::vector<Vec>> kernels_;  // index n = 1.. ; [0] unused
  bool complete_ = false;
  std::optional<int> truncated_at_;
  bool minimal_ = true;
  bool exact_ = true;
};

/// Iterated projective covers. Computes P_0..P_c with c <= cutoff and stops
/// early once a kernel vanishes.
Resolution minimal_resolution(const FDModule& m, int cutoff = kDefaultResolutionCutoff);

/// Shared memo for resolutions keyed by module identity and cutoff.
/// Concurrent lookups are safe; inserting the same key twice keeps the first.
class ResolutionCache {
 public:
  std::shared_ptr<const Resolution> get(const FDModule& m, int cutoff);

 private:
  std::mutex mu_;
  std::map<std::pair<const void*, int>, std::shared_ptr<const Resolution>> table_;
};

FDModule syzygy(const FDModule& m, int n);

/// Certified(d) when the minimal resolution stops at length d <= cutoff,
/// Inconclusive(cutoff) otherwise. The zero module is Certified(-1).
Verdict projective_dimension(const FDModule& m, int cutoff = kDefaultResolutionCutoff);
Verdict projective_dimension(const Resolution& r);

/// Homology dimensions in degrees 0..max_degree. Degrees above `trusted`
/// are unavailable (reported as -1) when the resolution was truncated.
struct HomologyDims {
  std::vector<int> dims;
  int trusted = -1;
  bool complete = false;  // resolution terminated; higher degrees vanish
  bool all_zero_from(int degree) const;
  nlohmann::json to_json() const;
};

/// Tor_i^A(x, n) for a right module x (left over opposite(A)) and a left
/// module n, by resolving n.
HomologyDims tor(const FDModule& x, const FDModule& n, int max_degree, int cutoff = kDefaultResolutionCutoff);
/// The same groups computed by resolving x over opposite(A).
HomologyDims tor_resolving_left(const FDModule& x, const FDModule& n, int max_degree,
                                int cutoff = kDefaultResolutionCutoff);
/// Tor from a given resolution of the left argument over C, with y a module
/// over opposite(C).
HomologyDims tor_from(const Resolution& r, const FDModule& y, int max_degree);

/// Ext^i_A(m, n) by resolving m.
HomologyDims ext(const FDModule& m, const FDModule& n, int max_degree, int cutoff = kDefaultResolutionCutoff);
HomologyDims ext_from(const Resolution& r, const FDModule& n, int max_degree);

}  // namespace homex

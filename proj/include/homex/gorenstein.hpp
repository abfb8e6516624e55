#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "homex/bimodule.hpp"
#include "homex/resolution.hpp"
#include "homex/verdict.hpp"

namespace homex {

/// X* = Hom_A(X, A) as a left module over opposite(A), with the matrices
/// of its basis homomorphisms (each dim A x dim X).
struct TransposeDual {
  FDModule module;
  std::vector<Mat> homs;
};
TransposeDual hom_to_regular(const FDModule& x);

/// Injective dimensions of A as a left and as a right module, each the
/// projective dimension of the k-dual on the other side.
struct SelfInjectiveDims {
  Verdict left;
  Verdict right;
};
SelfInjectiveDims self_injective_dimensions(const AlgPtr& a, int bound);

/// Ext^i(X, A) = 0 for 1 <= i <= bound. Certified when higher degrees
/// vanish automatically (the resolution of X ends, or injdim of A is at
/// most bound); Refuted at the least nonzero degree; otherwise Inconclusive
/// with "bounded_certified" in the witness.
Verdict perp_check(const FDModule& x, int bound);

/// Total reflexivity through degree `bound`: Ext^i(X, A), Ext^i(X*, A) and
/// the evaluation X -> X**.
struct GpWitness {
  FDModule module;
  int bound = 0;
  std::vector<int> left_vanishing;  // dims of Ext^i(X, A), i = 1..bound, -1 if unknown
  std::vector<int> dual_vanishing;  // dims of Ext^i(X*, A) over the opposite algebra
  Verdict reflexivity;
  Verdict verdict;
  nlohmann::json to_json() const;
};
GpWitness gproj_check(const FDModule& x, int bound);

/// Ext^i(U, X) = 0 for 1 <= i <= bound and every U in the testset; the
/// verdict is relative to the testset. Throws TestsetNotCertified when some
/// U does not pass gproj_check.
Verdict gproj_perp_check(const FDModule& x, const std::vector<FDModule>& testset, int bound);

/// Both self-injective dimensions of A, Certified when both resolutions end
/// within `bound`.
Verdict gorenstein_check(const AlgPtr& a, int bound);

/// Omega^t(X (x) U) passes perp_check over the left algebra of X for every
/// sample U. Samples refuted by perp_check are rejected.
Verdict omega_condition_check(const FDModule& x, int t, const std::vector<FDModule>& samples, int bound);

/// Checks a singular equivalence of Morita type with level: M (A-B) and N
/// (B-A) projective on each side, M (x)_B N stably isomorphic to
/// Omega^level(A) over A^e and N (x)_A M to Omega^level(B) over B^e.
Verdict smt_level_verify(const AlgPtr& a, const AlgPtr& b, const FDModule& m, const FDModule& n, int level,
                         std::uint64_t seed = 0x5eed);

}  // namespace homex

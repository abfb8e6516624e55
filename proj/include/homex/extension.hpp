#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "homex/bimodule.hpp"
#include "homex/resolution.hpp"
#include "homex/verdict.hpp"

namespace homex {

/// An injective unital algebra map B -> A with a chosen complement of its
/// image. `embedding` is dim A x dim B, `complement` is dim A x (dim A - dim B)
/// and `retraction`, when present, is a dim B x dim A algebra map with
/// retraction * embedding = 1.
struct Extension {
  AlgPtr small;
  AlgPtr big;
  Mat embedding;
  Mat complement;
  std::optional<Mat> retraction;
  std::string kind = "embed";
};

/// Validates the embedding (unital, multiplicative, injective) and the
/// optional complement and retraction. A missing complement is filled with
/// basis vectors of A outside the image.
Extension make_extension(AlgPtr b, AlgPtr a, Mat embedding, std::optional<Mat> complement = std::nullopt,
                         std::optional<Mat> retraction = std::nullopt);

/// Embedding of quiver algebras sending each arrow of B to the arrow of A
/// with the name given in `arrows` (default: the same name) and vertices to
/// vertices of the same name. When A has no further vertices, the map
/// killing the arrows of A outside the image is recorded as the retraction
/// if it is an algebra map, with its kernel as the complement.
Extension embed_by_arrows(const AlgPtr& b, const AlgPtr& a, std::map<std::string, std::string> arrows = {});

/// The first basis pair (i, j) with phi(b_i b_j) != phi(b_i) phi(b_j).
std::optional<std::pair<int, int>> multiplicativity_violation(const AlgPtr& from, const AlgPtr& to, const Mat& phi);

/// M = A/B as a B-B bimodule. `projection` is dim M x dim A and kills the
/// image of B; `lift` is dim A x dim M with projection * lift = 1, through
/// the chosen complement.
struct QuotientBimodule {
  FDModule module;
  Mat projection;
  Mat lift;
};
QuotientBimodule quotient_bimodule(const Extension& e);

/// A as an L-R bimodule through the embedding on the sides marked `small`.
RebasedBimodule extension_bimodule(const Extension& e, bool left_small, bool right_small);

struct TensorPowers {
  std::vector<FDModule> powers;  // M, M^2, ... up to the first zero power or cap
  std::vector<int> dims;
  Verdict nilpotency;  // Certified(p) at the least zero power, Inconclusive(cap)
};
TensorPowers tensor_powers(const FDModule& m, int cap);

struct BoundedCutoffs {
  int tensor_cap = 8;
  int resolution = kDefaultResolutionCutoff;
  nlohmann::json to_json() const { return {{"tensor_cap", tensor_cap}, {"resolution", resolution}}; }
};

/// Which Tor the third condition is read with: Tor_i(M, M^j) resolves M as a
/// right module, Tor_i(M^j, M) resolves it as a left module.
enum class TorSide { Left, Right };

struct BoundedReport {
  TensorPowers powers;
  Verdict nilpotency;
  Verdict bimodule_pd;
  Verdict one_sided_pd;
  /// tor_table[i - 1][j - 1] = dim Tor_i^B(M, M^j), -1 where not computed.
  std::vector<std::vector<int>> tor_table;
  Verdict tor_vanishing;
  Verdict overall;
  TorSide side = TorSide::Left;
  BoundedCutoffs cutoffs;

  /// The least p with M^p = 0; throws unless nilpotency is Certified.
  int p() const { return static_cast<int>(nilpotency.value()); }
  nlohmann::json to_json() const;
};

BoundedReport check_bounded(const Extension& e, const BoundedCutoffs& cutoffs = {}, TorSide side = TorSide::Left);
BoundedReport check_bounded_quotient(const FDModule& m, const BoundedCutoffs& cutoffs = {}, TorSide side = TorSide::Left);

/// B (x) M with m m' = 0; canonical embedding, complement and retraction.
Extension trivial_extension(const AlgPtr& b, const FDModule& m);

/// B (x) M with m m' given by `product`, a dim M x (dim M)^2 matrix whose
/// column k * dim M + l is m_k m_l.
Extension split_extension(const AlgPtr& b, const FDModule& m, const Mat& product);

/// Lower triangular matrix algebra [[L, 0], [W, G]] for a G-L bimodule W.
struct Triangular {
  AlgPtr matrix_algebra;  // basis: L, then W, then G
  Extension extension;    // L x G inside (L x G) (x) W
  FDModule w;             // W as a (L x G)-bimodule
  Verdict iso;            // the matrix algebra against the trivial extension
};
Triangular triangular_algebra(const AlgPtr& lambda, const AlgPtr& gamma, const FDModule& w);

struct ArrowRemoval {
  AlgPtr big;
  AlgPtr small;
  Extension extension;
  FDModule ideal;  // the ideal generated by the arrow, as a B-bimodule
  Verdict rebuilt;  // A against B (x) M with the product inherited from A
  BoundedReport report;
};
/// Removes an arrow that occurs in no relation of p.
ArrowRemoval arrow_removal(const Presentation& p, const std::string& arrow, const BoundedCutoffs& cutoffs = {});

/// Tor_i^B(A, A), Tor_i^B(M^j, A) and Tor_i^B(A, M^j (x) A) vanish for i >= 1.
Verdict verify_tor_consequences(const Extension& e, const BoundedReport& report, int cutoff = kDefaultResolutionCutoff);

/// A (x)_B M^j (x)_B A has finite projective dimension over A^e, 1 <= j < p.
Verdict verify_sandwich_pd(const Extension& e, const BoundedReport& report, int cutoff = kDefaultResolutionCutoff);

/// Exactness of 0 -> A (x) M^{p-1} (x) A -> ... -> A (x) M (x) A -> A (x) A -> A -> 0
/// with the bar differentials of the split bimodule algebra.
Verdict relative_bar_exactness(const Extension& e, const BoundedReport& report);

/// Compares dim Ext_A^i(X, Y) with dim Ext_B^i(X, Y) restricted, for
/// t* < i <= t* + window where t* = pd(M) + p + 1. Empty samples means all
/// pairs of simple A-modules.
Verdict ehi_dimension_test(const Extension& e, const BoundedReport& report,
                           std::vector<std::pair<FDModule, FDModule>> samples, int window);

}  // namespace homex

#pragma once

#include <string>
#include <vector>

#include "homex/scalar.hpp"

namespace homex {

struct Arrow {
  std::string name;
  int source = 0;
  int target = 0;
};

class Quiver {
 public:
  std::vector<std::string> vertices;
  std::vector<Arrow> arrows;

  int vertex_index(const std::string& name) const;  // -1 if absent
  int arrow_index(const std::string& name) const;   // -1 if absent
  /// Throws InvalidQuiver on duplicate names or dangling endpoints.
  void validate() const;
  /// Same vertices, every arrow reversed (arrow names kept).
  Quiver opposite() const;
};

/// A path as its arrows in traversal order: arrows[0] is applied first. The
/// written form reverses this, so arrows {a, b} prints as "b*a".
struct Path {
  int vertex = 0;  // source; meaningful for trivial paths
  std::vector<int> arrows;

  int length() const { return static_cast<int>(arrows.size()); }
  int source(const Quiver& q) const { return arrows.empty() ? vertex : q.arrows[arrows.front()].source; }
  int target(const Quiver& q) const { return arrows.empty() ? vertex : q.arrows[arrows.back()].target; }
  /// Written right-to-left with '*', or "e<v>" for a trivial path.
  std::string written(const Quiver& q) const;
  friend bool operator==(const Path&, const Path&) = default;
};

struct PathTerm {
  Scalar coeff;
  std::vector<int> arrows;  // traversal order
};

struct Relation {
  std::vector<PathTerm> terms;
};

/// A quiver with length-homogeneous parallel relations over a field.
struct Presentation {
  std::string name;
  Field field{};
  Quiver quiver;
  std::vector<Relation> relations;

  /// Throws InvalidQuiver/NonHomogeneous naming the offending relation.
  void validate() const;
  /// Whether the named arrow occurs (with nonzero coefficient) in a relation.
  bool arrow_in_relations(int arrow) const;
  std::string relation_text(std::size_t r) const;
  Presentation opposite() const;
};

}  // namespace homex

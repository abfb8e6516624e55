#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "homex/extension.hpp"

namespace homex::dsl {

/// 1-based line and column of a declaration or token.
struct Pos {
  int line = 0;
  int col = 0;
};

/// An algebra named in the source, possibly wrapped as op(X) or env(X).
struct AlgebraRef {
  std::string name;
  std::string wrap;  // "", "op" or "env"
  friend bool operator==(const AlgebraRef&, const AlgebraRef&) = default;
};

using MatrixLit = std::vector<std::vector<Scalar>>;

struct ArrowDecl {
  std::string name;
  std::string source;
  std::string target;
  friend bool operator==(const ArrowDecl&, const ArrowDecl&) = default;
};

struct QuiverDecl {
  Pos pos;
  std::string name;
  std::vector<std::string> vertices;
  std::vector<ArrowDecl> arrows;
  friend bool operator==(const QuiverDecl& a, const QuiverDecl& b) {
    return a.name == b.name && a.vertices == b.vertices && a.arrows == b.arrows;
  }
};

/// One term of a relation; `path` is written right to left.
struct Term {
  Scalar coeff;
  std::vector<std::string> path;
  friend bool operator==(const Term&, const Term&) = default;
};

struct RelationsDecl {
  Pos pos;
  std::string quiver;
  std::vector<std::vector<Term>> relations;
  std::vector<Pos> positions;
  friend bool operator==(const RelationsDecl& a, const RelationsDecl& b) {
    return a.quiver == b.quiver && a.relations == b.relations;
  }
};

/// `module` or `bimodule`. Either a construction `ctor(args)` or explicit
/// action matrices on the arrows (ctor == "matrices").
struct ModuleDecl {
  Pos pos;
  std::string name;
  bool bimodule = false;
  std::vector<AlgebraRef> over;  // empty when inferred from the construction
  std::string ctor;
  std::vector<std::string> args;
  std::vector<std::string> basis;                            // vertex of each basis vector
  std::vector<std::pair<std::string, MatrixLit>> actions;  // "x", "left x" or "right x"
  friend bool operator==(const ModuleDecl& a, const ModuleDecl& b) {
    return a.name == b.name && a.bimodule == b.bimodule && a.over == b.over && a.ctor == b.ctor && a.args == b.args &&
           a.basis == b.basis && a.actions == b.actions;
  }
};

/// trivial(B, M), split(B, M, matrix), triangular(L, G, W),
/// arrow_removal(A, a), embed(B, A [, matrix | {arrow: arrow, ...}]).
struct ExtensionDecl {
  Pos pos;
  std::string name;
  std::string kind;
  std::vector<std::string> args;
  std::optional<MatrixLit> matrix;
  std::vector<std::pair<std::string, std::string>> arrow_map;
  friend bool operator==(const ExtensionDecl& a, const ExtensionDecl& b) {
    return a.name == b.name && a.kind == b.kind && a.args == b.args && a.matrix == b.matrix &&
           a.arrow_map == b.arrow_map;
  }
};

using Decl = std::variant<QuiverDecl, RelationsDecl, ModuleDecl, ExtensionDecl>;

struct SourceFile {
  std::optional<Field> field;
  std::vector<Decl> decls;
  friend bool operator==(const SourceFile&, const SourceFile&) = default;
};

/// Parses a source file. Syntax errors throw ParseError with "line", "col",
/// "expected" and "found" in the detail; dangling names throw
/// UnresolvedName; relations mixing path lengths throw NonHomogeneous with
/// the relation position.
SourceFile parse(std::string_view text);

/// Canonical text; parse(print(s)) == s.
std::string print(const SourceFile& s);

/// Builds the objects of a parsed file on demand.
class Workspace {
 public:
  explicit Workspace(SourceFile src, std::optional<Field> field_override = std::nullopt);

  Field field() const { return field_; }
  const SourceFile& source() const { return src_; }

  Presentation presentation(const std::string& name) const;
  AlgPtr algebra(const AlgebraRef& ref) const;
  AlgPtr algebra(const std::string& name) const { return algebra(AlgebraRef{name, ""}); }
  FDModule module(const std::string& name) const;
  Extension extension(const std::string& name) const;

  std::vector<std::string> algebra_names() const;
  std::vector<std::string> module_names() const;
  std::vector<std::string> extension_names() const;
  bool has_module(const std::string& name) const;
  bool has_extension(const std::string& name) const;
  bool has_algebra(const std::string& name) const;

 private:
  SourceFile src_;
  Field field_;
  mutable std::map<std::string, AlgPtr> algebras_;
  mutable std::map<std::string, FDModule> modules_;
  mutable std::map<std::string, Extension> extensions_;

  const ModuleDecl& module_decl(const std::string& name) const;
  const ExtensionDecl& extension_decl(const std::string& name) const;
  FDModule build_module(const ModuleDecl& d) const;
  Extension build_extension(const ExtensionDecl& d) const;
};

/// Reads and parses a file; throws ParseError naming the path when it
/// cannot be read.
SourceFile parse_file(const std::string& path);

}  // namespace homex::dsl

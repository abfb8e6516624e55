#pragma once

#include <string>
#include <utility>
#include <vector>

#include "homex/algebra.hpp"

namespace homex::testing {

/// Builds a presentation from arrows "name:src->tgt" and monomial or
/// binomial relations written as traversal-order arrow names.
inline Presentation presentation(const std::string& name, std::vector<std::string> vertices,
                                 std::vector<std::tuple<std::string, std::string, std::string>> arrows,
                                 std::vector<std::vector<std::pair<long long, std::vector<std::string>>>> rels = {},
                                 Field f = {}) {
  Presentation p;
  p.name = name;
  p.field = f;
  p.quiver.vertices = std::move(vertices);
  for (auto& [a, s, t] : arrows)
    p.quiver.arrows.push_back({a, p.quiver.vertex_index(s), p.quiver.vertex_index(t)});
  for (auto& r : rels) {
    Relation rel;
    for (auto& [c, word] : r) {
      PathTerm t{Scalar(c).in_field(f), {}};
      for (auto& w : word) t.arrows.push_back(p.quiver.arrow_index(w));
      rel.terms.push_back(t);
    }
    p.relations.push_back(rel);
  }
  return p;
}

inline Presentation a4(Field f = {}) {
  return presentation("A4", {"1", "2", "3", "4"}, {{"a", "1", "2"}, {"b", "2", "3"}, {"c", "3", "4"}}, {}, f);
}

inline Presentation kxx2(Field f = {}) {
  return presentation("kx", {"1"}, {{"x", "1", "1"}}, {{{1, {"x", "x"}}}}, f);
}

/// loop g at 1, b: 1 -> 2, a: 2 -> 1, relations g*g and a*b.
inline Presentation lambda64(Field f = {}) {
  return presentation("Lambda", {"1", "2"}, {{"g", "1", "1"}, {"b", "1", "2"}, {"a", "2", "1"}},
                      {{{1, {"g", "g"}}}, {{1, {"b", "a"}}}}, f);
}

/// Lambda without the arrow a.
inline Presentation gamma64(Field f = {}) {
  return presentation("Gamma", {"1", "2"}, {{"g", "1", "1"}, {"b", "1", "2"}}, {{{1, {"g", "g"}}}}, f);
}

inline Presentation kronecker(Field f = {}) {
  return presentation("Kr", {"1", "2"}, {{"al", "1", "2"}, {"de", "1", "2"}}, {}, f);
}

/// Commutative square: a: 1->2, b: 2->4, c: 1->3, d: 3->4 with b*a = d*c.
inline Presentation square(Field f = {}) {
  return presentation("Sq", {"1", "2", "3", "4"}, {{"a", "1", "2"}, {"b", "2", "4"}, {"c", "1", "3"}, {"d", "3", "4"}},
                      {{{1, {"a", "b"}}, {-1, {"c", "d"}}}}, f);
}

inline int label_index(const AlgPtr& a, const std::string& label) {
  for (int i = 0; i < a->dim(); ++i)
    if (a->label(i) == label) return i;
  return -1;
}

/// 0/1 matrix sending each basis label of `from` to the same label of `to`;
/// empty when some label is missing.
inline Mat label_matching(const AlgPtr& from, const AlgPtr& to) {
  Mat m(to->dim(), from->dim(), from->field());
  for (int i = 0; i < from->dim(); ++i) {
    const int j = label_index(to, from->label(i));
    if (j < 0) return Mat(0, 0);
    m(j, i) = one_in(from->field());
  }
  return m;
}

}  // namespace homex::testing

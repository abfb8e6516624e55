#include "homex/quiver.hpp"

#include <algorithm>
#include <set>

#include "homex/errors.hpp"

namespace homex {

int Quiver::vertex_index(const std::string& name) const {
  auto it = std::find(vertices.begin(), vertices.end(), name);
  return it == vertices.end() ? -1 : static_cast<int>(it - vertices.begin());
}

int Quiver::arrow_index(const std::string& name) const {
  for (std::size_t i = 0; i < arrows.size(); ++i)
    if (arrows[i].name == name) return static_cast<int>(i);
  return -1;
}

void Quiver::validate() const {
  std::set<std::string> seen;
  for (const auto& v : vertices)
    if (!seen.insert(v).second) throw HomexError(ErrorCode::InvalidQuiver, "duplicate vertex '" + v + "'");
  std::set<std::string> names;
  for (const auto& a : arrows) {
    if (!names.insert(a.name).second) throw HomexError(ErrorCode::InvalidQuiver, "duplicate arrow '" + a.name + "'");
    if (seen.count(a.name)) throw HomexError(ErrorCode::InvalidQuiver, "arrow '" + a.name + "' shadows a vertex name");
    const int n = static_cast<int>(vertices.size());
    if (a.source < 0 || a.source >= n || a.target < 0 || a.target >= n)
      throw HomexError(ErrorCode::InvalidQuiver, "arrow '" + a.name + "' has an undeclared endpoint");
  }
}

Quiver Quiver::opposite() const {
  Quiver q = *this;
  for (auto& a : q.arrows) std::swap(a.source, a.target);
  return q;
}

std::string Path::written(const Quiver& q) const {
  if (arrows.empty()) return "e" + q.vertices[vertex];
  std::string s;
  for (auto it = arrows.rbegin(); it != arrows.rend(); ++it) {
    if (!s.empty()) s += "*";
    s += q.arrows[*it].name;
  }
  return s;
}

void Presentation::validate() const {
  quiver.validate();
  for (std::size_t r = 0; r < relations.size(); ++r) {
    const auto& rel = relations[r];
    const nlohmann::json where{{"relation", r}, {"text", relation_text(r)}};
    if (rel.terms.empty()) throw HomexError(ErrorCode::NonHomogeneous, "relation " + std::to_string(r) + " is empty", where);
    const std::size_t len = rel.terms.front().arrows.size();
    int src = -1, tgt = -1;
    for (const auto& t : rel.terms) {
      if (t.arrows.size() != len)
        throw HomexError(ErrorCode::NonHomogeneous,
                         "relation '" + relation_text(r) + "' mixes path lengths", where);
      if (t.arrows.empty())
        throw HomexError(ErrorCode::NonHomogeneous, "relation '" + relation_text(r) + "' contains a trivial path", where);
      for (std::size_t i = 0; i < t.arrows.size(); ++i) {
        if (t.arrows[i] < 0 || t.arrows[i] >= static_cast<int>(quiver.arrows.size()))
          throw HomexError(ErrorCode::InvalidQuiver, "relation " + std::to_string(r) + " uses an unknown arrow", where);
        if (i > 0 && quiver.arrows[t.arrows[i - 1]].target != quiver.arrows[t.arrows[i]].source)
          throw HomexError(ErrorCode::InvalidQuiver, "relation '" + relation_text(r) + "' has a non-composable path", where);
      }
      const int s = quiver.arrows[t.arrows.front()].source;
      const int g = quiver.arrows[t.arrows.back()].target;
      if (src == -1) {
        src = s;
        tgt = g;
      } else if (s != src || g != tgt) {
        throw HomexError(ErrorCode::NonHomogeneous, "relation '" + relation_text(r) + "' is not parallel", where);
      }
    }
    if (len < 2)
      throw HomexError(ErrorCode::NonHomogeneous, "relation '" + relation_text(r) + "' has length below 2", where);
  }
}

bool Presentation::arrow_in_relations(int arrow) const {
  for (const auto& rel : relations)
    for (const auto& t : rel.terms)
      if (!t.coeff.is_zero() && std::find(t.arrows.begin(), t.arrows.end(), arrow) != t.arrows.end()) return true;
  return false;
}

std::string Presentation::relation_text(std::size_t r) const {
  std::string s;
  for (const auto& t : relations.at(r).terms) {
    std::string c = t.coeff.to_string();
    std::string sign = " + ";
    if (!c.empty() && c[0] == '-') {
      sign = " - ";
      c = c.substr(1);
    }
    if (s.empty()) s = sign == " - " ? "-" : "";
    else s += sign;
    if (c != "1") s += c + "*";
    std::string path;
    for (auto it = t.arrows.rbegin(); it != t.arrows.rend(); ++it) {
      if (!path.empty()) path += "*";
      path += (*it >= 0 && *it < static_cast<int>(quiver.arrows.size())) ? quiver.arrows[*it].name : "?";
    }
    s += path;
  }
  return s;
}

Presentation Presentation::opposite() const {
  Presentation p = *this;
  p.name = name + "^op";
  p.quiver = quiver.opposite();
  for (auto& rel : p.relations)
    for (auto& t : rel.terms) std::reverse(t.arrows.begin(), t.arrows.end());
  return p;
}

}  // namespace homex

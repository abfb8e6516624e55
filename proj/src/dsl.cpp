#include "homex/dsl.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "homex/errors.hpp"

namespace homex::dsl {

namespace {

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { Name, Number, Sym, End };

struct Token {
  Tok kind;
  std::string text;
  Pos pos;
};

bool name_char(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '^' || c == '\'' || c == '|' || c == '.' || c >= 0x80;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Number: return "number '" + t.text + "'";
    case Tok::Name: return "name '" + t.text + "'";
    case Tok::Sym: return "'" + t.text + "'";
  }
  return t.text;
}

[[noreturn]] void parse_error(Pos pos, const std::string& message, std::vector<std::string> expected = {},
                              const std::string& found = "") {
  std::string msg = "line " + std::to_string(pos.line) + ", column " + std::to_string(pos.col) + ": " + message;
  throw HomexError(ErrorCode::ParseError, msg,
                   {{"line", pos.line}, {"col", pos.col}, {"expected", expected}, {"found", found}});
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    const Pos pos{line, col};
    if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      out.push_back({Tok::Sym, "->", pos});
      advance(2);
      continue;
    }
    if (std::string_view("{}()[],;:*+-/=").find(static_cast<char>(c)) != std::string_view::npos) {
      out.push_back({Tok::Sym, std::string(1, static_cast<char>(c)), pos});
      advance(1);
      continue;
    }
    if (name_char(c)) {
      std::size_t j = i;
      bool digits = true;
      while (j < text.size() && name_char(static_cast<unsigned char>(text[j]))) {
        if (!std::isdigit(static_cast<unsigned char>(text[j]))) digits = false;
        ++j;
      }
      out.push_back({digits ? Tok::Number : Tok::Name, std::string(text.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    parse_error(pos, "unexpected character", {"name", "number", "symbol"},
                std::isprint(c) ? std::string(1, static_cast<char>(c)) : "byte " + std::to_string(c));
  }
  out.push_back({Tok::End, "", {line, col}});
  return out;
}

// ---------------------------------------------------------------------------
// Parser

const std::set<std::string> kKeywords{"field", "quiver", "relations", "module", "bimodule", "extension",
                                      "vertices", "arrow", "over", "basis", "left", "right"};

struct QuiverInfo {
  std::vector<std::string> vertices;
  std::vector<ArrowDecl> arrows;
  bool has_relations = false;

  bool has_vertex(const std::string& v) const {
    for (const auto& x : vertices)
      if (x == v) return true;
    return false;
  }
  bool has_arrow(const std::string& a) const {
    for (const auto& x : arrows)
      if (x.name == a) return true;
    return false;
  }
};

struct ModuleInfo {
  bool bimodule = false;
  std::vector<AlgebraRef> over;  // empty when unknown
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  SourceFile file() {
    SourceFile s;
    while (!at_end()) {
      if (accept_sym(";")) continue;
      const Token& t = peek();
      if (t.kind != Tok::Name) fail({"field", "quiver", "relations", "module", "bimodule", "extension"});
      if (t.text == "field") {
        next();
        if (s.field || !s.decls.empty()) parse_error(t.pos, "field must be declared once, before any declaration");
        s.field = field_decl();
      } else if (t.text == "quiver") {
        s.decls.push_back(quiver_decl(s));
      } else if (t.text == "relations") {
        s.decls.push_back(relations_decl(s));
      } else if (t.text == "module" || t.text == "bimodule") {
        s.decls.push_back(module_decl());
      } else if (t.text == "extension") {
        s.decls.push_back(extension_decl());
      } else {
        fail({"field", "quiver", "relations", "module", "bimodule", "extension"});
      }
    }
    return s;
  }

 private:
  std::vector<Token> toks_;
  std::size_t at_ = 0;
  std::map<std::string, QuiverInfo> quivers_;
  std::map<std::string, ModuleInfo> modules_;
  std::set<std::string> extensions_;

  const Token& peek() const { return toks_[at_]; }
  const Token& next() { return toks_[at_ < toks_.size() - 1 ? at_++ : at_]; }
  bool at_end() const { return peek().kind == Tok::End; }
  bool at_sym(const std::string& s) const { return peek().kind == Tok::Sym && peek().text == s; }
  bool at_word(const std::string& s) const { return peek().kind == Tok::Name && peek().text == s; }
  bool accept_sym(const std::string& s) {
    if (!at_sym(s)) return false;
    next();
    return true;
  }
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::string list;
    for (std::size_t k = 0; k < expected.size(); ++k) list += (k ? ", " : "") + expected[k];
    parse_error(peek().pos, "expected " + list + ", found " + describe(peek()), expected, peek().text);
  }
  void expect_sym(const std::string& s) {
    if (!accept_sym(s)) fail({"'" + s + "'"});
  }
  void expect_word(const std::string& s) {
    if (!at_word(s)) fail({s});
    next();
  }
  // A name: identifiers and plain numbers both qualify (vertices are often numbered).
  std::string name(const std::string& what) {
    if (peek().kind != Tok::Name && peek().kind != Tok::Number) fail({what});
    return next().text;
  }
  std::string fresh_name(const std::string& what) {
    const Token& t = peek();
    std::string n = name(what);
    if (kKeywords.count(n)) parse_error(t.pos, "'" + n + "' is a keyword", {what}, n);
    if (quivers_.count(n) || modules_.count(n) || extensions_.count(n))
      parse_error(t.pos, "'" + n + "' is already declared", {what}, n);
    return n;
  }
  [[noreturn]] void unresolved(Pos pos, const std::string& what, const std::string& n) const {
    throw HomexError(ErrorCode::UnresolvedName,
                     "line " + std::to_string(pos.line) + ", column " + std::to_string(pos.col) + ": unknown " + what +
                         " '" + n + "'",
                     {{"line", pos.line}, {"col", pos.col}, {"kind", what}, {"name", n}});
  }

  Field field_decl() {
    const Token& t = peek();
    if (at_word("Q")) {
      next();
      return Field{};
    }
    if (at_word("F")) {
      next();
      const Token& q = peek();
      if (q.kind != Tok::Number) fail({"prime"});
      next();
      if (q.text.size() > 9) parse_error(q.pos, "field characteristic too large", {"prime"}, q.text);
      const long long p = std::stoll(q.text);
      bool prime = p >= 2;
      for (long long d = 2; d * d <= p && prime; ++d)
        if (p % d == 0) prime = false;
      if (!prime) parse_error(q.pos, "field characteristic must be prime", {"prime"}, q.text);
      return make_field(static_cast<std::uint32_t>(p));
    }
    parse_error(t.pos, "expected Q or F <prime>, found " + describe(t), {"Q", "F"}, t.text);
  }

  QuiverDecl quiver_decl(const SourceFile&) {
    QuiverDecl q;
    q.pos = peek().pos;
    expect_word("quiver");
    q.name = fresh_name("quiver name");
    expect_sym("{");
    QuiverInfo info;
    while (!accept_sym("}")) {
      if (accept_sym(";")) continue;
      if (at_word("vertices")) {
        next();
        while (peek().kind == Tok::Name || peek().kind == Tok::Number) {
          if (at_word("arrow") || at_word("vertices")) break;
          const Token& t = peek();
          std::string v = next().text;
          if (info.has_vertex(v)) parse_error(t.pos, "duplicate vertex '" + v + "'", {"vertex"}, v);
          info.vertices.push_back(v);
        }
      } else if (at_word("arrow")) {
        next();
        const Token& t = peek();
        ArrowDecl a;
        a.name = name("arrow name");
        if (info.has_arrow(a.name) || info.has_vertex(a.name))
          parse_error(t.pos, "duplicate name '" + a.name + "'", {"arrow name"}, a.name);
        expect_sym(":");
        const Token& s = peek();
        a.source = name("vertex");
        if (!info.has_vertex(a.source)) unresolved(s.pos, "vertex", a.source);
        expect_sym("->");
        const Token& g = peek();
        a.target = name("vertex");
        if (!info.has_vertex(a.target)) unresolved(g.pos, "vertex", a.target);
        info.arrows.push_back(a);
      } else {
        fail({"vertices", "arrow", "'}'"});
      }
    }
    if (info.vertices.empty()) parse_error(q.pos, "quiver " + q.name + " has no vertices");
    q.vertices = info.vertices;
    q.arrows = info.arrows;
    quivers_[q.name] = std::move(info);
    return q;
  }

  Scalar number() {
    const bool neg = accept_sym("-");
    const Token& t = peek();
    if (t.kind != Tok::Number) fail({"number"});
    next();
    Scalar x = Scalar::parse(t.text);
    if (accept_sym("/")) {
      const Token& d = peek();
      if (d.kind != Tok::Number) fail({"denominator"});
      next();
      Scalar den = Scalar::parse(d.text);
      if (den.is_zero()) parse_error(d.pos, "zero denominator", {"nonzero number"}, d.text);
      x = x / den;
    }
    return neg ? -x : x;
  }

  std::vector<Term> lincomb(const QuiverInfo& q) {
    std::vector<Term> terms;
    bool first = true;
    while (true) {
      Scalar sign = 1;
      if (accept_sym("-"))
        sign = -1;
      else if (!first && !accept_sym("+"))
        break;
      else if (first)
        accept_sym("+");
      Term t;
      t.coeff = sign;
      if (peek().kind == Tok::Number) {
        t.coeff = sign * number();
        accept_sym("*");
      }
      do {
        const Token& a = peek();
        std::string n = name("arrow");
        if (!q.has_arrow(n)) unresolved(a.pos, "arrow", n);
        t.path.push_back(n);
      } while (accept_sym("*"));
      terms.push_back(std::move(t));
      first = false;
      if (!at_sym("+") && !at_sym("-")) break;
    }
    return terms;
  }

  RelationsDecl relations_decl(const SourceFile&) {
    RelationsDecl r;
    r.pos = peek().pos;
    expect_word("relations");
    const Token& t = peek();
    r.quiver = name("quiver name");
    auto it = quivers_.find(r.quiver);
    if (it == quivers_.end()) unresolved(t.pos, "quiver", r.quiver);
    if (it->second.has_relations) parse_error(t.pos, "relations for " + r.quiver + " are already given");
    it->second.has_relations = true;
    expect_sym("{");
    while (!accept_sym("}")) {
      if (accept_sym(";")) continue;
      r.positions.push_back(peek().pos);
      r.relations.push_back(lincomb(it->second));
    }
    // Structural checks with the position of the offending relation.
    QuiverDecl qd{{}, r.quiver, it->second.vertices, it->second.arrows};
    try {
      presentation_of(qd, &r, Field{}).validate();
    } catch (const HomexError& e) {
      nlohmann::json d = e.detail();
      Pos pos = r.pos;
      if (d.contains("relation")) pos = r.positions.at(d["relation"].get<std::size_t>());
      d["line"] = pos.line;
      d["col"] = pos.col;
      throw HomexError(e.code(),
                       "line " + std::to_string(pos.line) + ", column " + std::to_string(pos.col) + ": " + e.message(), d);
    }
    return r;
  }

  AlgebraRef algebra_ref() {
    AlgebraRef ref;
    if ((at_word("op") || at_word("env")) && toks_[at_ + 1].kind == Tok::Sym && toks_[at_ + 1].text == "(") {
      ref.wrap = next().text;
      expect_sym("(");
      const Token& t = peek();
      ref.name = name("algebra name");
      if (!quivers_.count(ref.name)) unresolved(t.pos, "algebra", ref.name);
      expect_sym(")");
      return ref;
    }
    const Token& t = peek();
    ref.name = name("algebra name");
    if (!quivers_.count(ref.name)) unresolved(t.pos, "algebra", ref.name);
    return ref;
  }

  bool vertex_of(const AlgebraRef& ref, const std::string& v) const {
    const QuiverInfo& q = quivers_.at(ref.name);
    if (ref.wrap != "env") return q.has_vertex(v);
    for (const auto& s : q.vertices)
      for (const auto& t : q.vertices)
        if (s + "x" + t + "^op" == v) return true;
    return false;
  }

  std::string module_arg(bool want_bimodule, std::optional<bool> either = std::nullopt) {
    const Token& t = peek();
    std::string n = name("module name");
    auto it = modules_.find(n);
    if (it == modules_.end()) unresolved(t.pos, "module", n);
    if (!either && it->second.bimodule != want_bimodule)
      parse_error(t.pos, "'" + n + "' is " + (it->second.bimodule ? "a bimodule" : "a module"), {"module name"}, n);
    return n;
  }

  MatrixLit matrix() {
    MatrixLit m;
    expect_sym("[");
    if (accept_sym("]")) return m;
    do {
      std::vector<Scalar> row;
      expect_sym("[");
      if (!at_sym("]")) {
        do row.push_back(number());
        while (accept_sym(","));
      }
      expect_sym("]");
      if (!m.empty() && row.size() != m.front().size()) parse_error(peek().pos, "matrix rows have different lengths");
      m.push_back(std::move(row));
    } while (accept_sym(","));
    expect_sym("]");
    return m;
  }

  ModuleDecl module_decl() {
    ModuleDecl d;
    d.pos = peek().pos;
    d.bimodule = next().text == "bimodule";
    d.name = fresh_name("module name");
    if (at_word("over")) {
      next();
      d.over.push_back(algebra_ref());
      if (d.bimodule) {
        expect_sym(",");
        d.over.push_back(algebra_ref());
      }
    }
    if (accept_sym("=")) {
      const Token& c = peek();
      d.ctor = name("construction");
      expect_sym("(");
      const std::set<std::string> one_sided{"simple", "proj", "inj", "regular", "syzygy"};
      const std::set<std::string> two_sided{"outer", "quotient", "regular", "syzygy"};
      if (!(d.bimodule ? two_sided : one_sided).count(d.ctor))
        parse_error(c.pos, "unknown construction '" + d.ctor + "'",
                    d.bimodule ? std::vector<std::string>{"outer", "quotient", "regular", "syzygy"}
                               : std::vector<std::string>{"simple", "proj", "inj", "regular", "syzygy"},
                    d.ctor);
      if (d.ctor == "simple" || d.ctor == "proj" || d.ctor == "inj") {
        if (d.over.empty()) parse_error(c.pos, d.ctor + " needs 'over <algebra>'");
        const Token& v = peek();
        d.args.push_back(name("vertex"));
        if (!vertex_of(d.over[0], d.args[0])) unresolved(v.pos, "vertex", d.args[0]);
      } else if (d.ctor == "regular") {
        if (d.over.empty()) parse_error(c.pos, "regular needs 'over'");
        if (d.bimodule && !(d.over[0] == d.over[1])) parse_error(c.pos, "the regular bimodule needs equal sides");
      } else if (d.ctor == "syzygy") {
        d.args.push_back(module_arg(d.bimodule));
        expect_sym(",");
        const Token& n = peek();
        if (n.kind != Tok::Number) fail({"number"});
        d.args.push_back(next().text);
        if (d.args.back().size() > 4) parse_error(n.pos, "syzygy degree too large");
        if (d.over.empty()) d.over = modules_[d.args[0]].over;
      } else if (d.ctor == "outer") {
        d.args.push_back(module_arg(false));
        expect_sym(",");
        d.args.push_back(module_arg(false));
      } else if (d.ctor == "quotient") {
        const Token& t = peek();
        std::string e = name("extension name");
        if (!extensions_.count(e)) unresolved(t.pos, "extension", e);
        d.args.push_back(e);
      }
      expect_sym(")");
    } else if (accept_sym("{")) {
      d.ctor = "matrices";
      if (d.over.size() != (d.bimodule ? 2u : 1u)) parse_error(d.pos, "explicit actions need 'over'");
      for (const auto& r : d.over)
        if (!r.wrap.empty()) parse_error(d.pos, "explicit actions need plain quiver algebras");
      while (!accept_sym("}")) {
        if (accept_sym(";")) continue;
        if (at_word("basis")) {
          next();
          while ((peek().kind == Tok::Name || peek().kind == Tok::Number) && !kKeywords.count(peek().text)) {
            const Token& t = peek();
            if (toks_[at_ + 1].kind == Tok::Sym && toks_[at_ + 1].text == "=") break;
            std::string v = next().text;
            bool ok = false;
            if (d.bimodule) {
              const auto bar = v.find('|');
              ok = bar != std::string::npos && quivers_[d.over[0].name].has_vertex(v.substr(0, bar)) &&
                   quivers_[d.over[1].name].has_vertex(v.substr(bar + 1));
            } else {
              ok = quivers_[d.over[0].name].has_vertex(v);
            }
            if (!ok) unresolved(t.pos, "vertex", v);
            d.basis.push_back(v);
          }
          continue;
        }
        std::string side;
        if (d.bimodule) {
          if (!at_word("left") && !at_word("right")) fail({"basis", "left", "right", "'}'"});
          side = next().text;
        }
        const Token& t = peek();
        std::string arrow = name("arrow");
        const std::string& qn = d.over[side == "right" ? 1 : 0].name;
        if (!quivers_[qn].has_arrow(arrow)) unresolved(t.pos, "arrow", arrow);
        expect_sym("=");
        MatrixLit m = matrix();
        if (m.size() != d.basis.size() || (!m.empty() && m[0].size() != d.basis.size()))
          parse_error(t.pos, "action of " + arrow + " must be " + std::to_string(d.basis.size()) + " x " +
                                 std::to_string(d.basis.size()));
        d.actions.emplace_back(side.empty() ? arrow : side + " " + arrow, std::move(m));
      }
    } else {
      fail({"'='", "'{'", "over"});
    }
    modules_[d.name] = {d.bimodule, d.over};
    return d;
  }

  ExtensionDecl extension_decl() {
    ExtensionDecl d;
    d.pos = peek().pos;
    expect_word("extension");
    d.name = fresh_name("extension name");
    expect_sym("=");
    const Token& k = peek();
    d.kind = name("extension kind");
    expect_sym("(");
    auto algebra_arg = [&] {
      const Token& t = peek();
      std::string n = name("algebra name");
      if (!quivers_.count(n)) unresolved(t.pos, "algebra", n);
      d.args.push_back(n);
    };
    if (d.kind == "trivial" || d.kind == "split") {
      algebra_arg();
      expect_sym(",");
      d.args.push_back(module_arg(true));
      if (d.kind == "split") {
        expect_sym(",");
        d.matrix = matrix();
      }
    } else if (d.kind == "triangular") {
      algebra_arg();
      expect_sym(",");
      algebra_arg();
      expect_sym(",");
      d.args.push_back(module_arg(true));
    } else if (d.kind == "arrow_removal") {
      algebra_arg();
      expect_sym(",");
      const Token& t = peek();
      std::string a = name("arrow");
      if (!quivers_[d.args[0]].has_arrow(a)) unresolved(t.pos, "arrow", a);
      d.args.push_back(a);
    } else if (d.kind == "embed") {
      algebra_arg();
      expect_sym(",");
      algebra_arg();
      if (accept_sym(",")) {
        if (at_sym("[")) {
          d.matrix = matrix();
        } else {
          expect_sym("{");
          if (!at_sym("}")) {
            do {
              const Token& s = peek();
              std::string from = name("arrow");
              if (!quivers_[d.args[0]].has_arrow(from)) unresolved(s.pos, "arrow", from);
              expect_sym(":");
              const Token& t = peek();
              std::string to = name("arrow");
              if (!quivers_[d.args[1]].has_arrow(to)) unresolved(t.pos, "arrow", to);
              d.arrow_map.emplace_back(from, to);
            } while (accept_sym(","));
          }
          expect_sym("}");
        }
      }
    } else {
      parse_error(k.pos, "unknown extension kind '" + d.kind + "'",
                  {"trivial", "split", "triangular", "arrow_removal", "embed"}, d.kind);
    }
    expect_sym(")");
    extensions_.insert(d.name);
    return d;
  }

 public:
  static Presentation presentation_of(const QuiverDecl& q, const RelationsDecl* r, Field f) {
    Presentation p;
    p.name = q.name;
    p.field = f;
    p.quiver.vertices = q.vertices;
    for (const auto& a : q.arrows)
      p.quiver.arrows.push_back({a.name, p.quiver.vertex_index(a.source), p.quiver.vertex_index(a.target)});
    if (r)
      for (const auto& rel : r->relations) {
        Relation out;
        for (const auto& t : rel) {
          PathTerm pt{t.coeff.in_field(f), {}};
          for (auto it = t.path.rbegin(); it != t.path.rend(); ++it) pt.arrows.push_back(p.quiver.arrow_index(*it));
          out.terms.push_back(std::move(pt));
        }
        p.relations.push_back(std::move(out));
      }
    return p;
  }
};

// ---------------------------------------------------------------------------
// Printer

std::string matrix_text(const MatrixLit& m) {
  std::string s = "[";
  for (std::size_t r = 0; r < m.size(); ++r) {
    s += r ? ", [" : "[";
    for (std::size_t c = 0; c < m[r].size(); ++c) s += (c ? ", " : "") + m[r][c].to_string();
    s += "]";
  }
  return s + "]";
}

std::string ref_text(const AlgebraRef& r) { return r.wrap.empty() ? r.name : r.wrap + "(" + r.name + ")"; }

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

std::string term_text(const Term& t, bool first) {
  std::string s;
  Scalar c = t.coeff;
  if (c.to_string()[0] == '-') {
    s += first ? "-" : " - ";
    c = -c;
  } else if (!first) {
    s += " + ";
  }
  if (!c.is_one()) s += c.to_string() + " ";
  return s + join(t.path, "*");
}

}  // namespace

SourceFile parse(std::string_view text) {
  try {
    return Parser(lex(text)).file();
  } catch (const HomexError&) {
    throw;
  } catch (const std::exception& e) {
    throw HomexError(ErrorCode::ParseError, std::string("malformed input: ") + e.what());
  }
}

SourceFile parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw HomexError(ErrorCode::ParseError, "cannot read " + path, {{"path", path}});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string print(const SourceFile& s) {
  std::ostringstream out;
  if (s.field) out << "field " << (s.field->is_rational() ? "Q" : "F " + std::to_string(s.field->q)) << "\n";
  for (const auto& d : s.decls) {
    if (out.tellp() > 0) out << "\n";
    if (const auto* q = std::get_if<QuiverDecl>(&d)) {
      out << "quiver " << q->name << " {\n  vertices " << join(q->vertices, " ") << "\n";
      for (const auto& a : q->arrows) out << "  arrow " << a.name << ": " << a.source << " -> " << a.target << "\n";
      out << "}\n";
    } else if (const auto* r = std::get_if<RelationsDecl>(&d)) {
      out << "relations " << r->quiver << " {\n";
      for (const auto& rel : r->relations) {
        out << "  ";
        for (std::size_t k = 0; k < rel.size(); ++k) out << term_text(rel[k], k == 0);
        out << ";\n";
      }
      out << "}\n";
    } else if (const auto* m = std::get_if<ModuleDecl>(&d)) {
      out << (m->bimodule ? "bimodule " : "module ") << m->name;
      if (!m->over.empty()) {
        out << " over " << ref_text(m->over[0]);
        if (m->over.size() > 1) out << ", " << ref_text(m->over[1]);
      }
      if (m->ctor == "matrices") {
        out << " {\n  basis " << join(m->basis, " ") << "\n";
        for (const auto& [k, mat] : m->actions) out << "  " << k << " = " << matrix_text(mat) << "\n";
        out << "}\n";
      } else {
        out << " = " << m->ctor << "(" << join(m->args, ", ") << ")\n";
      }
    } else if (const auto* e = std::get_if<ExtensionDecl>(&d)) {
      out << "extension " << e->name << " = " << e->kind << "(" << join(e->args, ", ");
      if (e->matrix) out << ", " << matrix_text(*e->matrix);
      if (!e->arrow_map.empty()) {
        std::vector<std::string> pairs;
        for (const auto& [a, b] : e->arrow_map) pairs.push_back(a + ": " + b);
        out << ", {" << join(pairs, ", ") << "}";
      }
      out << ")\n";
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Workspace

namespace {

Mat to_mat(const MatrixLit& m, std::size_t rows, std::size_t cols, Field f) {
  Mat out(rows, cols, f);
  for (std::size_t r = 0; r < m.size() && r < rows; ++r)
    for (std::size_t c = 0; c < m[r].size() && c < cols; ++c) out(r, c) = m[r][c].in_field(f);
  return out;
}

[[noreturn]] void build_error(ErrorCode code, Pos pos, const std::string& msg) {
  throw HomexError(code, "line " + std::to_string(pos.line) + ", column " + std::to_string(pos.col) + ": " + msg,
                   {{"line", pos.line}, {"col", pos.col}});
}

int vertex_named(const AlgPtr& a, const std::string& v) {
  for (int i = 0; i < a->vertex_count(); ++i)
    if (a->vertex_name(i) == v) return i;
  return -1;
}

}  // namespace

Workspace::Workspace(SourceFile src, std::optional<Field> field_override)
    : src_(std::move(src)), field_(field_override ? *field_override : src_.field.value_or(Field{})) {}

Presentation Workspace::presentation(const std::string& name) const {
  const QuiverDecl* q = nullptr;
  const RelationsDecl* r = nullptr;
  for (const auto& d : src_.decls) {
    if (const auto* x = std::get_if<QuiverDecl>(&d); x && x->name == name) q = x;
    if (const auto* x = std::get_if<RelationsDecl>(&d); x && x->quiver == name) r = x;
  }
  if (!q) throw HomexError(ErrorCode::UnresolvedName, "unknown algebra '" + name + "'", {{"name", name}});
  return Parser::presentation_of(*q, r, field_);
}

AlgPtr Workspace::algebra(const AlgebraRef& ref) const {
  const std::string key = ref_text(ref);
  if (auto it = algebras_.find(key); it != algebras_.end()) return it->second;
  AlgPtr a;
  if (ref.wrap.empty())
    a = from_presentation(presentation(ref.name));
  else if (ref.wrap == "op")
    a = opposite(algebra(ref.name));
  else
    a = enveloping(algebra(ref.name));
  algebras_[key] = a;
  return a;
}

const ModuleDecl& Workspace::module_decl(const std::string& name) const {
  for (const auto& d : src_.decls)
    if (const auto* m = std::get_if<ModuleDecl>(&d); m && m->name == name) return *m;
  throw HomexError(ErrorCode::UnresolvedName, "unknown module '" + name + "'", {{"name", name}});
}

const ExtensionDecl& Workspace::extension_decl(const std::string& name) const {
  for (const auto& d : src_.decls)
    if (const auto* e = std::get_if<ExtensionDecl>(&d); e && e->name == name) return *e;
  throw HomexError(ErrorCode::UnresolvedName, "unknown extension '" + name + "'", {{"name", name}});
}

FDModule Workspace::module(const std::string& name) const {
  if (auto it = modules_.find(name); it != modules_.end()) return it->second;
  FDModule m = build_module(module_decl(name));
  modules_[name] = m;
  return m;
}

Extension Workspace::extension(const std::string& name) const {
  if (auto it = extensions_.find(name); it != extensions_.end()) return it->second;
  Extension e = build_extension(extension_decl(name));
  extensions_[name] = e;
  return e;
}

FDModule Workspace::build_module(const ModuleDecl& d) const {
  FDModule m;
  if (d.ctor == "simple" || d.ctor == "proj" || d.ctor == "inj") {
    const AlgPtr a = algebra(d.over[0]);
    const int v = vertex_named(a, d.args[0]);
    if (v < 0) build_error(ErrorCode::UnresolvedName, d.pos, "unknown vertex '" + d.args[0] + "'");
    m = d.ctor == "simple" ? simple_module(a, v) : d.ctor == "proj" ? projective_module(a, v) : injective_module(a, v);
  } else if (d.ctor == "regular") {
    m = d.bimodule ? regular_bimodule(algebra(d.over[0])) : regular_module(algebra(d.over[0]));
  } else if (d.ctor == "syzygy") {
    m = syzygy(module(d.args[0]), std::stoi(d.args[1]));
  } else if (d.ctor == "outer") {
    m = outer_product(module(d.args[0]), module(d.args[1]));
  } else if (d.ctor == "quotient") {
    m = quotient_bimodule(extension(d.args[0])).module;
  } else {
    // Explicit actions of the arrows; paths act by composition.
    const Field f = field_;
    const std::size_t n = d.basis.size();
    if (!d.bimodule) {
      const AlgPtr a = algebra(d.over[0]);
      const Presentation p = presentation(d.over[0].name);
      std::vector<int> verts;
      for (const auto& v : d.basis) verts.push_back(vertex_named(a, v));
      std::vector<Mat> arrows(p.quiver.arrows.size(), Mat(n, n, f));
      for (const auto& [k, mat] : d.actions) arrows[p.quiver.arrow_index(k)] = to_mat(mat, n, n, f);
      try {
        m = FDModule::from_representation(a, verts, arrows);
      } catch (const HomexError& e) {
        build_error(e.code(), d.pos, e.message());
      }
    } else {
      const AlgPtr l = algebra(d.over[0]), r = algebra(d.over[1]);
      const Presentation pl = presentation(d.over[0].name), pr = presentation(d.over[1].name);
      std::vector<int> verts;
      std::vector<int> lv, rv;
      for (const auto& v : d.basis) {
        const auto bar = v.find('|');
        lv.push_back(vertex_named(l, v.substr(0, bar)));
        rv.push_back(vertex_named(r, v.substr(bar + 1)));
        verts.push_back(lv.back() * r->vertex_count() + rv.back());
      }
      std::vector<Mat> la(pl.quiver.arrows.size(), Mat(n, n, f)), ra(pr.quiver.arrows.size(), Mat(n, n, f));
      for (const auto& [k, mat] : d.actions) {
        const bool left = k.rfind("left ", 0) == 0;
        const std::string arrow = k.substr(left ? 5 : 6);
        (left ? la[pl.quiver.arrow_index(arrow)] : ra[pr.quiver.arrow_index(arrow)]) = to_mat(mat, n, n, f);
      }
      auto actions = [&](const AlgPtr& alg, const std::vector<Mat>& arr, const std::vector<int>& vert, bool right) {
        std::vector<Mat> out;
        for (int b = 0; b < alg->dim(); ++b) {
          const Path& path = alg->path_basis()->paths[b];
          Mat x(n, n, f);
          if (path.arrows.empty()) {
            for (std::size_t i = 0; i < n; ++i)
              if (vert[i] == path.vertex) x(i, i) = one_in(f);
          } else {
            x = Mat::identity(n, f);
            // Left: the last arrow acts last. Right: w (b a) = (w b) a.
            for (int arrow : path.arrows) x = right ? x * arr[arrow] : arr[arrow] * x;
          }
          out.push_back(std::move(x));
        }
        return out;
      };
      try {
        m = bimodule_from_actions(l, r, verts, actions(l, la, lv, false), actions(r, ra, rv, true));
      } catch (const HomexError& e) {
        build_error(e.code(), d.pos, e.message());
      }
    }
  }
  if (!d.over.empty() && d.ctor != "matrices") {
    AlgPtr expected;
    if (d.bimodule)
      expected = tensor_algebra(algebra(d.over[0]), opposite(algebra(d.over[1])));
    else
      expected = algebra(d.over[0]);
    if (!same_algebra(m.algebra(), expected))
      build_error(ErrorCode::AlgebraMismatch, d.pos, "module " + d.name + " is not over the declared algebra");
  }
  return m;
}

Extension Workspace::build_extension(const ExtensionDecl& d) const {
  try {
    if (d.kind == "trivial") return trivial_extension(algebra(d.args[0]), module(d.args[1]));
    if (d.kind == "split") {
      const FDModule m = module(d.args[1]);
      const std::size_t k = m.dim();
      return split_extension(algebra(d.args[0]), m, to_mat(*d.matrix, k, k * k, field_));
    }
    if (d.kind == "triangular") return triangular_algebra(algebra(d.args[0]), algebra(d.args[1]), module(d.args[2])).extension;
    if (d.kind == "arrow_removal") return arrow_removal(presentation(d.args[0]), d.args[1]).extension;
    const AlgPtr b = algebra(d.args[0]), a = algebra(d.args[1]);
    if (d.matrix) return make_extension(b, a, to_mat(*d.matrix, a->dim(), b->dim(), field_));
    return embed_by_arrows(b, a, {d.arrow_map.begin(), d.arrow_map.end()});
  } catch (const HomexError& e) {
    if (e.detail().contains("line")) throw;
    nlohmann::json detail = e.detail().is_object() ? e.detail() : nlohmann::json::object();
    detail["line"] = d.pos.line;
    detail["col"] = d.pos.col;
    detail["extension"] = d.name;
    throw HomexError(e.code(), "extension " + d.name + ": " + e.message(), detail);
  }
}

std::vector<std::string> Workspace::algebra_names() const {
  std::vector<std::string> out;
  for (const auto& d : src_.decls)
    if (const auto* q = std::get_if<QuiverDecl>(&d)) out.push_back(q->name);
  return out;
}

std::vector<std::string> Workspace::module_names() const {
  std::vector<std::string> out;
  for (const auto& d : src_.decls)
    if (const auto* m = std::get_if<ModuleDecl>(&d)) out.push_back(m->name);
  return out;
}

std::vector<std::string> Workspace::extension_names() const {
  std::vector<std::string> out;
  for (const auto& d : src_.decls)
    if (const auto* e = std::get_if<ExtensionDecl>(&d)) out.push_back(e->name);
  return out;
}

bool Workspace::has_module(const std::string& name) const {
  for (const auto& n : module_names())
    if (n == name) return true;
  return false;
}

bool Workspace::has_extension(const std::string& name) const {
  for (const auto& n : extension_names())
    if (n == name) return true;
  return false;
}

bool Workspace::has_algebra(const std::string& name) const {
  for (const auto& n : algebra_names())
    if (n == name) return true;
  return false;
}

}  // namespace homex::dsl

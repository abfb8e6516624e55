#include "homex/algebra.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

#include "homex/errors.hpp"

namespace homex {

Vec densify(const SparseVec& s, std::size_t n, Field f) {
  Vec v = zero_vec(n, f);
  for (const auto& [i, c] : s) v[i] = c;
  return v;
}

SparseVec sparsify(const Vec& v) {
  SparseVec s;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) s.emplace_back(static_cast<int>(i), v[i]);
  return s;
}

namespace {

// acc += c * s, keeping acc sorted and free of zeros.
void add_into(std::map<int, Scalar>& acc, const Scalar& c, const SparseVec& s) {
  for (const auto& [i, x] : s) {
    auto [it, fresh] = acc.try_emplace(i, c * x);
    if (!fresh) {
      it->second += c * x;
      if (it->second.is_zero()) acc.erase(it);
    }
  }
}

SparseVec from_map(const std::map<int, Scalar>& acc) {
  SparseVec s;
  s.reserve(acc.size());
  for (const auto& [i, c] : acc)
    if (!c.is_zero()) s.emplace_back(i, c);
  return s;
}

std::string join_label(const std::string& a, const std::string& b) { return a + "|" + b; }

}  // namespace

Vec AlgebraTable::multiply(const Vec& x, const Vec& y) const {
  if (static_cast<int>(x.size()) != dim() || static_cast<int>(y.size()) != dim())
    throw HomexError(ErrorCode::DimensionMismatch, "multiply: vector length differs from algebra dimension");
  Vec out = zero_vec(dim(), field());
  for (int i = 0; i < dim(); ++i) {
    if (x[i].is_zero()) continue;
    for (int j = 0; j < dim(); ++j) {
      if (y[j].is_zero()) continue;
      const Scalar c = x[i] * y[j];
      for (const auto& [k, v] : product(i, j)) out[k] += c * v;
    }
  }
  return out;
}

SparseVec AlgebraTable::multiply(const SparseVec& x, const SparseVec& y) const {
  std::map<int, Scalar> acc;
  for (const auto& [i, a] : x)
    for (const auto& [j, b] : y) add_into(acc, a * b, product(i, j));
  return from_map(acc);
}

Vec AlgebraTable::unit() const {
  Vec u = zero_vec(dim(), field());
  for (int b : d_.idempotent_basis) u[b] = Scalar(1).in_field(field());
  return u;
}

int AlgebraTable::vertex_index(const std::string& name) const {
  auto it = std::find(d_.vertex_names.begin(), d_.vertex_names.end(), name);
  return it == d_.vertex_names.end() ? -1 : static_cast<int>(it - d_.vertex_names.begin());
}

Mat AlgebraTable::radical() const {
  Mat r(radical_.size(), dim(), field());
  for (std::size_t i = 0; i < radical_.size(); ++i) r(i, radical_[i]) = Scalar(1).in_field(field());
  return r;
}

Mat AlgebraTable::left_mult_matrix(int b) const {
  Mat m(dim(), dim(), field());
  for (int x = 0; x < dim(); ++x)
    for (const auto& [k, c] : product(b, x)) m(k, x) = c;
  return m;
}

Mat AlgebraTable::right_mult_matrix(int b) const {
  Mat m(dim(), dim(), field());
  for (int x = 0; x < dim(); ++x)
    for (const auto& [k, c] : product(x, b)) m(k, x) = c;
  return m;
}

std::optional<std::array<int, 3>> AlgebraTable::associativity_violation(bool full) const {
  std::vector<int> thirds;
  if (full) {
    for (int k = 0; k < dim(); ++k) thirds.push_back(k);
  } else {
    thirds = d_.idempotent_basis;
    thirds.insert(thirds.end(), arrows_.begin(), arrows_.end());
  }
  for (int i = 0; i < dim(); ++i)
    for (int j = 0; j < dim(); ++j) {
      const SparseVec& ij = product(i, j);
      for (int k : thirds) {
        std::map<int, Scalar> lhs, rhs;
        for (const auto& [m, c] : ij) add_into(lhs, c, product(m, k));
        for (const auto& [m, c] : product(j, k)) add_into(rhs, c, product(i, m));
        if (lhs != rhs) return std::array<int, 3>{i, j, k};
      }
    }
  return std::nullopt;
}

void AlgebraTable::index_structure() {
  const int n = dim();
  const int nv = vertex_count();
  idempotent_of_.assign(n, -1);
  for (int v = 0; v < nv; ++v) idempotent_of_[d_.idempotent_basis[v]] = v;
  radical_.clear();
  for (int b = 0; b < n; ++b)
    if (idempotent_of_[b] < 0) radical_.push_back(b);

  peirce_.assign(static_cast<std::size_t>(nv) * nv, {});
  left_proj_.assign(nv, {});
  right_proj_.assign(nv, {});
  for (int b = 0; b < n; ++b) {
    peirce_[static_cast<std::size_t>(d_.left_vertex[b]) * nv + d_.right_vertex[b]].push_back(b);
    left_proj_[d_.right_vertex[b]].push_back(b);
    right_proj_[d_.left_vertex[b]].push_back(b);
  }

  // Radical powers: rad^{k+1} = rad^k * rad.
  layers_.clear();
  layers_.push_back(nv);
  Subspace current(n, field());
  for (int b : radical_) current.insert(unit_vec(n, b, field()));
  Subspace rad2(n, field());
  bool first = true;
  int guard = 0;
  while (current.dim() > 0) {
    if (++guard > n + 1) break;  // not nilpotent; validate() reports it
    Subspace next(n, field());
    for (const auto& row : current.basis())
      for (int r : radical_) {
        SparseVec prod = multiply(sparsify(row), SparseVec{{r, Scalar(1).in_field(field())}});
        if (!prod.empty()) next.insert(densify(prod, n, field()));
      }
    layers_.push_back(static_cast<int>(current.dim() - next.dim()));
    if (first) {
      rad2 = next;
      first = false;
    }
    current = std::move(next);
  }
  if (first) rad2 = Subspace(n, field());

  arrows_.clear();
  Subspace span = rad2;
  for (int b : radical_)
    if (span.insert(unit_vec(n, b, field()))) arrows_.push_back(b);
}

void AlgebraTable::validate(const Options& opts) const {
  const int n = dim();
  const int nv = vertex_count();
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  if (d_.mult.size() != nn || d_.left_vertex.size() != static_cast<std::size_t>(n) ||
      d_.right_vertex.size() != static_cast<std::size_t>(n))
    throw HomexError(ErrorCode::InvalidAlgebra, "structure constant table has the wrong shape");
  if (static_cast<int>(d_.vertex_names.size()) != nv)
    throw HomexError(ErrorCode::InvalidAlgebra, "vertex names do not match the idempotent count");
  std::set<int> seen;
  for (int v = 0; v < nv; ++v) {
    const int b = d_.idempotent_basis[v];
    if (b < 0 || b >= n || !seen.insert(b).second)
      throw HomexError(ErrorCode::InvalidAlgebra, "idempotent basis index out of range or repeated");
    if (d_.left_vertex[b] != v || d_.right_vertex[b] != v)
      throw HomexError(ErrorCode::InvalidAlgebra, "idempotent e_" + d_.vertex_names[v] + " has wrong vertex data");
  }
  for (int b = 0; b < n; ++b)
    if (d_.left_vertex[b] < 0 || d_.left_vertex[b] >= nv || d_.right_vertex[b] < 0 || d_.right_vertex[b] >= nv)
      throw HomexError(ErrorCode::InvalidAlgebra, "basis element '" + d_.labels[b] + "' has no vertex");

  const Scalar one = Scalar(1).in_field(field());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const SparseVec& p = product(i, j);
      const nlohmann::json where{{"left", d_.labels[i]}, {"right", d_.labels[j]}};
      for (std::size_t t = 0; t < p.size(); ++t) {
        const auto& [k, c] = p[t];
        if (k < 0 || k >= n || c.is_zero() || (t > 0 && p[t - 1].first >= k))
          throw HomexError(ErrorCode::InvalidAlgebra, "malformed product entry", where);
        if (c.field() != field() && !(field().is_rational() && c.field().is_rational()))
          throw HomexError(ErrorCode::FieldMismatch, "structure constant in the wrong field", where);
      }
      if (!p.empty() && d_.right_vertex[i] != d_.left_vertex[j])
        throw HomexError(ErrorCode::InvalidAlgebra, "product of non-composable basis elements is nonzero", where);
      for (const auto& [k, c] : p)
        if (d_.left_vertex[k] != d_.left_vertex[i] || d_.right_vertex[k] != d_.right_vertex[j])
          throw HomexError(ErrorCode::InvalidAlgebra, "product leaves its Peirce component", where);
      // Idempotent axioms: e_v b = [left(b) = v] b and b e_v = [right(b) = v] b.
      const int vi = idempotent_of_[i];
      const int vj = idempotent_of_[j];
      if (vi >= 0) {
        const SparseVec expect = d_.left_vertex[j] == vi ? SparseVec{{j, one}} : SparseVec{};
        if (p != expect) throw HomexError(ErrorCode::InvalidAlgebra, "idempotent does not act as a projection", where);
      }
      if (vj >= 0) {
        const SparseVec expect = d_.right_vertex[i] == vj ? SparseVec{{i, one}} : SparseVec{};
        if (p != expect) throw HomexError(ErrorCode::InvalidAlgebra, "idempotent does not act as a projection", where);
      }
      if (vi < 0 || vj < 0)
        for (const auto& [k, c] : p)
          if (idempotent_of_[k] >= 0)
            throw HomexError(ErrorCode::InvalidAlgebra, "radical is not an ideal", where);
    }

  int total = 0;
  for (int l : layers_) total += l;
  if (total != n) throw HomexError(ErrorCode::InvalidAlgebra, "radical basis does not span a nilpotent ideal");

  if (opts.verify_associativity) {
    if (auto bad = associativity_violation(false)) {
      const auto [i, j, k] = *bad;
      throw HomexError(ErrorCode::NotAssociative, "structure constants are not associative",
                       {{"triple", {d_.labels[i], d_.labels[j], d_.labels[k]}}});
    }
  }
}

AlgPtr AlgebraTable::make(AlgebraData data, Options opts) {
  std::shared_ptr<AlgebraTable> t(new AlgebraTable(std::move(data)));
  if (t->d_.labels.size() != t->d_.left_vertex.size())
    throw HomexError(ErrorCode::InvalidAlgebra, "label count differs from dimension");
  for (int b : t->d_.idempotent_basis)
    if (b < 0 || b >= t->dim()) throw HomexError(ErrorCode::InvalidAlgebra, "idempotent basis index out of range");
  t->index_structure();
  t->validate(opts);
  return t;
}

bool AlgebraTable::same_as(const AlgebraTable& o) const {
  if (this == &o) return true;
  return field() == o.field() && d_.idempotent_basis == o.d_.idempotent_basis &&
         d_.left_vertex == o.d_.left_vertex && d_.right_vertex == o.d_.right_vertex && d_.mult == o.d_.mult;
}

bool same_algebra(const AlgPtr& a, const AlgPtr& b) { return a == b || (a && b && a->same_as(*b)); }

void require_same_algebra(const AlgPtr& a, const AlgPtr& b, const std::string& context) {
  if (!same_algebra(a, b)) throw HomexError(ErrorCode::AlgebraMismatch, context + ": modules live over different algebras");
}

// ---------------------------------------------------------------------------
// Quiver presentations

namespace {

struct GradedBuilder {
  const Presentation& p;
  Field f;
  std::vector<Path> basis;              // all basis paths, degree-major
  std::vector<int> degree_start;        // first basis index of each degree
  // left_arrow[a][w]: normal form of arrow a composed after basis path w
  std::vector<std::map<int, SparseVec>> left_arrow;

  GradedBuilder(const Presentation& pr) : p(pr), f(pr.field), left_arrow(pr.quiver.arrows.size()) {}

  int degree_of(int b) const { return basis[b].length(); }

  SparseVec apply_arrow(int a, const SparseVec& x) const {
    std::map<int, Scalar> acc;
    for (const auto& [w, c] : x) {
      auto it = left_arrow[a].find(w);
      if (it != left_arrow[a].end()) add_into(acc, c, it->second);
    }
    return from_map(acc);
  }

  // Normal form of a path given by its arrows in traversal order.
  SparseVec normal_form(int source, const std::vector<int>& arrows) const {
    SparseVec cur{{source, Scalar(1).in_field(f)}};  // e_source has basis index == vertex
    for (int a : arrows) {
      if (cur.empty()) break;
      cur = apply_arrow(a, cur);
    }
    return cur;
  }

  void run(int cap) {
    const auto& q = p.quiver;
    const int nv = static_cast<int>(q.vertices.size());
    degree_start.push_back(0);
    for (int v = 0; v < nv; ++v) basis.push_back(Path{v, {}});
    int lo = 0, hi = nv;
    for (int d = 1;; ++d) {
      if (d > cap)
        throw HomexError(ErrorCode::NonAdmissible,
                         "graded component of degree " + std::to_string(cap) + " does not vanish",
                         {{"cap", cap}});
      // Candidates (a, w) for basis paths w of degree d-1.
      std::vector<std::pair<int, int>> cand;
      for (int w = lo; w < hi; ++w)
        for (int a = 0; a < static_cast<int>(q.arrows.size()); ++a)
          if (q.arrows[a].source == basis[w].target(q)) cand.emplace_back(a, w);
      // Larger candidates first so they become pivots and the basis keeps the small ones.
      std::sort(cand.begin(), cand.end(), [&](const auto& x, const auto& y) {
        std::vector<int> px = basis[x.second].arrows, py = basis[y.second].arrows;
        px.push_back(x.first);
        py.push_back(y.first);
        return std::lexicographical_compare(py.rbegin(), py.rend(), px.rbegin(), px.rend());
      });
      std::map<std::pair<int, int>, int> cand_index;
      for (std::size_t i = 0; i < cand.size(); ++i) cand_index[cand[i]] = static_cast<int>(i);
      const std::size_t nc = cand.size();

      Subspace rels(nc, f);
      for (const auto& rel : p.relations) {
        const int len = static_cast<int>(rel.terms.front().arrows.size());
        if (len > d) continue;
        const int src = q.arrows[rel.terms.front().arrows.front()].source;
        // Basis paths u of degree d - len ending at src; image of rel * u.
        const int ulo = degree_start[d - len];
        const int uhi = d - len + 1 < static_cast<int>(degree_start.size()) ? degree_start[d - len + 1] : hi;
        for (int u = ulo; u < uhi; ++u) {
          if (basis[u].target(q) != src) continue;
          Vec img = zero_vec(nc, f);
          for (const auto& term : rel.terms) {
            std::vector<int> head(basis[u].arrows);
            head.insert(head.end(), term.arrows.begin(), term.arrows.end() - 1);
            const SparseVec nf = normal_form(basis[u].source(q), head);
            const int last = term.arrows.back();
            for (const auto& [w, c] : nf) {
              auto it = cand_index.find({last, w});
              if (it != cand_index.end()) img[it->second] += term.coeff.in_field(f) * c;
            }
          }
          rels.insert(std::move(img));
        }
      }
      std::vector<char> is_pivot(nc, 0);
      for (auto pv : rels.pivots()) is_pivot[pv] = 1;
      std::vector<int> new_index(nc, -1);
      std::vector<std::size_t> survivors;
      for (std::size_t i = 0; i < nc; ++i)
        if (!is_pivot[i]) survivors.push_back(i);
      // Survivors get basis indices in traversal-lexicographic order.
      std::sort(survivors.begin(), survivors.end(), [&](std::size_t x, std::size_t y) { return x > y; });
      const int start = static_cast<int>(basis.size());
      for (std::size_t s = 0; s < survivors.size(); ++s) {
        const auto [a, w] = cand[survivors[s]];
        Path path = basis[w];
        path.arrows.push_back(a);
        basis.push_back(path);
        new_index[survivors[s]] = start + static_cast<int>(s);
      }
      for (std::size_t i = 0; i < nc; ++i) {
        Vec r = rels.reduce(unit_vec(nc, i, f));
        SparseVec nf;
        for (std::size_t j = 0; j < nc; ++j)
          if (!r[j].is_zero()) nf.emplace_back(new_index[j], r[j]);
        std::sort(nf.begin(), nf.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        left_arrow[cand[i].first][cand[i].second] = std::move(nf);
      }
      if (survivors.empty()) break;
      degree_start.push_back(start);
      lo = start;
      hi = static_cast<int>(basis.size());
    }
  }
};

}  // namespace

AlgPtr from_presentation(const Presentation& p, int cap) {
  p.validate();
  GradedBuilder g(p);
  g.run(cap);
  const auto& q = p.quiver;
  const int n = static_cast<int>(g.basis.size());
  AlgebraData d;
  d.field = p.field;
  d.vertex_names = q.vertices;
  for (int v = 0; v < static_cast<int>(q.vertices.size()); ++v) d.idempotent_basis.push_back(v);
  for (const auto& path : g.basis) {
    d.labels.push_back(path.written(q));
    d.left_vertex.push_back(path.target(q));
    d.right_vertex.push_back(path.source(q));
  }
  d.mult.resize(static_cast<std::size_t>(n) * n);
  const Scalar one = Scalar(1).in_field(p.field);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      // b_i * b_j: b_j first, then the arrows of b_i.
      if (g.basis[j].target(q) != g.basis[i].source(q)) continue;
      SparseVec cur{{j, one}};
      for (int a : g.basis[i].arrows) {
        if (cur.empty()) break;
        cur = g.apply_arrow(a, cur);
      }
      d.mult[static_cast<std::size_t>(i) * n + j] = std::move(cur);
    }
  d.path_basis = PathBasis{p, g.basis};
  return AlgebraTable::make(std::move(d));
}

AlgPtr ground_algebra(Field f) {
  static std::mutex mu;
  static std::map<std::uint32_t, std::weak_ptr<const AlgebraTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto hit = cache[f.q].lock()) return hit;
  AlgebraData d;
  d.field = f;
  d.labels = {"1"};
  d.vertex_names = {"*"};
  d.idempotent_basis = {0};
  d.left_vertex = {0};
  d.right_vertex = {0};
  d.mult = {SparseVec{{0, Scalar(1).in_field(f)}}};
  AlgPtr a = AlgebraTable::make(std::move(d));
  cache[f.q] = a;
  return a;
}

AlgPtr opposite(const AlgPtr& a) {
  if (a->opposite_of_) return a->opposite_of_;
  std::lock_guard<std::mutex> lock(a->cache_mutex_);
  if (auto hit = a->opposite_cache_.lock()) return hit;
  const int n = a->dim();
  AlgebraData d;
  d.field = a->field();
  d.vertex_names = a->vertex_names();
  d.idempotent_basis = a->data().idempotent_basis;
  d.left_vertex = a->data().right_vertex;
  d.right_vertex = a->data().left_vertex;
  d.mult.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d.mult[static_cast<std::size_t>(i) * n + j] = a->product(j, i);
  if (a->path_basis()) {
    PathBasis pb{a->path_basis()->presentation.opposite(), {}};
    for (const auto& path : a->path_basis()->paths) {
      Path r = path;
      std::reverse(r.arrows.begin(), r.arrows.end());
      if (!r.arrows.empty()) r.vertex = r.source(pb.presentation.quiver);
      pb.paths.push_back(r);
      d.labels.push_back(r.written(pb.presentation.quiver));
    }
    d.path_basis = std::move(pb);
  } else {
    for (const auto& l : a->labels()) d.labels.push_back(l + "'");
  }
  std::shared_ptr<AlgebraTable> t(new AlgebraTable(std::move(d)));
  t->index_structure();
  t->validate(AlgebraTable::Options{false});
  t->opposite_of_ = a;
  a->opposite_cache_ = t;
  return t;
}

AlgPtr tensor_algebra(const AlgPtr& a, const AlgPtr& b) {
  if (a->field() != b->field()) throw HomexError(ErrorCode::FieldMismatch, "tensor_algebra: factors over different fields");
  static std::mutex mu;
  static std::map<std::pair<const AlgebraTable*, const AlgebraTable*>, std::weak_ptr<const AlgebraTable>> cache;
  const auto key = std::make_pair(a.get(), b.get());
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto hit = cache[key].lock()) return hit;
  }
  const int na = a->dim(), nb = b->dim();
  const int n = na * nb;
  const int va = a->vertex_count(), vb = b->vertex_count();
  const bool b_op = static_cast<bool>(b->opposite_of());
  AlgebraData d;
  d.field = a->field();
  for (int s = 0; s < va; ++s)
    for (int t = 0; t < vb; ++t) {
      d.vertex_names.push_back(a->vertex_name(s) + "x" + b->vertex_name(t) + (b_op ? "^op" : ""));
      d.idempotent_basis.push_back(a->idempotent_index(s) * nb + b->idempotent_index(t));
    }
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < nb; ++j) {
      d.labels.push_back(join_label(a->label(i), b->label(j)));
      d.left_vertex.push_back(a->left_vertex(i) * vb + b->left_vertex(j));
      d.right_vertex.push_back(a->right_vertex(i) * vb + b->right_vertex(j));
    }
  d.mult.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < na; ++i)
    for (int k = 0; k < na; ++k) {
      const SparseVec& pa = a->product(i, k);
      if (pa.empty()) continue;
      for (int j = 0; j < nb; ++j)
        for (int l = 0; l < nb; ++l) {
          const SparseVec& pb = b->product(j, l);
          if (pb.empty()) continue;
          SparseVec out;
          out.reserve(pa.size() * pb.size());
          for (const auto& [x, cx] : pa)
            for (const auto& [y, cy] : pb) out.emplace_back(x * nb + y, cx * cy);
          d.mult[static_cast<std::size_t>(i * nb + j) * n + (k * nb + l)] = std::move(out);
        }
    }
  std::shared_ptr<AlgebraTable> t(new AlgebraTable(std::move(d)));
  t->index_structure();
  // Factors are validated tables; the tensor product of associative algebras is associative.
  t->validate(AlgebraTable::Options{false});
  t->tensor_factors_ = std::make_pair(a, b);
  std::lock_guard<std::mutex> lock(mu);
  if (auto hit = cache[key].lock()) return hit;
  cache[key] = t;
  return t;
}

AlgPtr enveloping(const AlgPtr& a) { return tensor_algebra(a, opposite(a)); }

AlgPtr product_algebra(const AlgPtr& a, const AlgPtr& b) {
  if (a->field() != b->field()) throw HomexError(ErrorCode::FieldMismatch, "product_algebra: factors over different fields");
  const int na = a->dim(), nb = b->dim(), n = na + nb;
  const int va = a->vertex_count();
  AlgebraData d;
  d.field = a->field();
  std::set<std::string> names(a->vertex_names().begin(), a->vertex_names().end());
  bool clash = false;
  for (const auto& v : b->vertex_names()) clash = clash || names.count(v);
  for (const auto& v : a->vertex_names()) d.vertex_names.push_back(clash ? "1." + v : v);
  for (const auto& v : b->vertex_names()) d.vertex_names.push_back(clash ? "2." + v : v);
  for (int v : a->data().idempotent_basis) d.idempotent_basis.push_back(v);
  for (int v : b->data().idempotent_basis) d.idempotent_basis.push_back(na + v);
  for (int i = 0; i < na; ++i) {
    d.labels.push_back(clash ? "1." + a->label(i) : a->label(i));
    d.left_vertex.push_back(a->left_vertex(i));
    d.right_vertex.push_back(a->right_vertex(i));
  }
  for (int i = 0; i < nb; ++i) {
    d.labels.push_back(clash ? "2." + b->label(i) : b->label(i));
    d.left_vertex.push_back(va + b->left_vertex(i));
    d.right_vertex.push_back(va + b->right_vertex(i));
  }
  d.mult.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j) d.mult[static_cast<std::size_t>(i) * n + j] = a->product(i, j);
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j) {
      SparseVec s = b->product(i, j);
      for (auto& e : s) e.first += na;
      d.mult[static_cast<std::size_t>(na + i) * n + (na + j)] = std::move(s);
    }
  return AlgebraTable::make(std::move(d), AlgebraTable::Options{false});
}

// ---------------------------------------------------------------------------
// Raw structure constants

AlgPtr from_structure_constants(Field f, const std::vector<std::vector<Vec>>& mult, const std::vector<Vec>& idempotents,
                                std::vector<std::string> labels) {
  const std::size_t n = mult.size();
  if (n == 0) throw HomexError(ErrorCode::InvalidAlgebra, "empty structure constant table");
  for (const auto& row : mult) {
    if (row.size() != n) throw HomexError(ErrorCode::DimensionMismatch, "structure constant table is not square");
    for (const auto& v : row)
      if (v.size() != n) throw HomexError(ErrorCode::DimensionMismatch, "structure constant vector has wrong length");
  }
  if (!f.is_rational())
    throw HomexError(ErrorCode::PreconditionFailed, "trace-form radical needs characteristic 0");
  auto mul = [&](const Vec& x, const Vec& y) {
    Vec out = zero_vec(n, f);
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i].is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (y[j].is_zero()) continue;
        const Scalar c = x[i] * y[j];
        for (std::size_t k = 0; k < n; ++k)
          if (!mult[i][j][k].is_zero()) out[k] += c * mult[i][j][k];
      }
    }
    return out;
  };
  auto basis_vec = [&](std::size_t i) { return unit_vec(n, i, f); };

  // Associativity on the raw table.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (mul(mult[i][j], basis_vec(k)) != mul(basis_vec(i), mult[j][k]))
          throw HomexError(ErrorCode::NotAssociative, "structure constants are not associative",
                           {{"triple", {i, j, k}}});

  // Idempotent axioms and the unit.
  Vec unit = zero_vec(n, f);
  for (std::size_t s = 0; s < idempotents.size(); ++s) {
    axpy(unit, Scalar(1), idempotents[s]);
    for (std::size_t t = 0; t < idempotents.size(); ++t) {
      Vec p = mul(idempotents[s], idempotents[t]);
      if (p != (s == t ? idempotents[s] : zero_vec(n, f)))
        throw HomexError(ErrorCode::InvalidAlgebra, "idempotents are not orthogonal", {{"pair", {s, t}}});
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (mul(unit, basis_vec(i)) != basis_vec(i) || mul(basis_vec(i), unit) != basis_vec(i))
      throw HomexError(ErrorCode::InvalidAlgebra, "idempotents do not sum to a unit", {{"basis", i}});

  // Dickson: rad = { x : tr(L_{xy}) = 0 for all y }.
  std::vector<Scalar> tr(n);
  for (std::size_t k = 0; k < n; ++k) {
    Scalar t(0);
    for (std::size_t x = 0; x < n; ++x) t += mult[k][x][x];
    tr[k] = t;
  }
  Mat form(n, n, f);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Scalar t(0);
      for (std::size_t k = 0; k < n; ++k) t += mult[i][j][k] * tr[k];
      form(i, j) = t;
    }
  const Mat rad = kernel_basis(form);  // columns
  const std::size_t nv = idempotents.size();
  if (n - rad.cols() != nv)
    throw HomexError(ErrorCode::NotElementary, "semisimple quotient has dimension " + std::to_string(n - rad.cols()) +
                                                   " but " + std::to_string(nv) + " idempotents were given");

  // Adapted basis: idempotents, then bases of e_s rad e_t.
  std::vector<Vec> cols(idempotents.begin(), idempotents.end());
  AlgebraData d;
  d.field = f;
  for (std::size_t v = 0; v < nv; ++v) {
    d.vertex_names.push_back(std::to_string(v + 1));
    d.idempotent_basis.push_back(static_cast<int>(v));
    d.left_vertex.push_back(static_cast<int>(v));
    d.right_vertex.push_back(static_cast<int>(v));
  }
  for (std::size_t s = 0; s < nv; ++s)
    for (std::size_t t = 0; t < nv; ++t) {
      std::vector<Vec> piece;
      for (std::size_t c = 0; c < rad.cols(); ++c) piece.push_back(mul(mul(idempotents[s], rad.column(c)), idempotents[t]));
      Subspace sp = span_of(piece, n, f);
      for (const auto& v : sp.basis()) {
        cols.push_back(v);
        d.left_vertex.push_back(static_cast<int>(s));
        d.right_vertex.push_back(static_cast<int>(t));
      }
    }
  if (cols.size() != n) throw HomexError(ErrorCode::NotElementary, "Peirce components do not fill the radical");
  const Mat P = Mat::from_columns(cols, n, f);
  auto Pinv = inverse(P);
  if (!Pinv) throw HomexError(ErrorCode::InvalidAlgebra, "idempotents and radical are not independent");
  d.mult.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d.mult[i * n + j] = sparsify(Pinv->apply(mul(cols[i], cols[j])));
  const bool old_labels = labels.size() == n;
  for (std::size_t i = 0; i < n; ++i) {
    std::string l;
    if (i < nv) {
      l = "e" + d.vertex_names[i];
    } else {
      for (std::size_t k = 0; k < n; ++k) {
        if (cols[i][k].is_zero()) continue;
        if (!l.empty()) l += "+";
        const std::string base = old_labels ? labels[k] : "b" + std::to_string(k);
        l += cols[i][k].is_one() ? base : cols[i][k].to_string() + base;
      }
    }
    d.labels.push_back(l);
  }
  return AlgebraTable::make(std::move(d));
}

bool is_algebra_isomorphism(const AlgPtr& from, const AlgPtr& to, const Mat& map) {
  if (map.rows() != static_cast<std::size_t>(to->dim()) || map.cols() != static_cast<std::size_t>(from->dim()))
    return false;
  if (rank(map) != map.cols() || map.rows() != map.cols()) return false;
  if (map.apply(from->unit()) != to->unit()) return false;
  std::vector<Vec> img;
  for (int i = 0; i < from->dim(); ++i) img.push_back(map.column(i));
  for (int i = 0; i < from->dim(); ++i)
    for (int j = 0; j < from->dim(); ++j) {
      Vec lhs = map.apply(densify(from->product(i, j), from->dim(), from->field()));
      if (lhs != to->multiply(img[i], img[j])) return false;
    }
  return true;
}

}  // namespace homex

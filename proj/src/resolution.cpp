#include "homex/resolution.hpp"

#include <algorithm>

#include "homex/errors.hpp"

namespace homex {

namespace {

// Positions of the basis of A e_v inside the algebra basis.
struct Layout {
  std::vector<int> vertices;
  std::vector<int> offset;  // offset[k] = start of summand k
  int dim = 0;

  Layout(const AlgebraTable& a, const std::vector<int>& verts) : vertices(verts) {
    for (int v : verts) {
      offset.push_back(dim);
      dim += static_cast<int>(a.left_projective_basis(v).size());
    }
  }
};

std::vector<std::vector<int>> position_tables(const AlgebraTable& a) {
  std::vector<std::vector<int>> pos(a.vertex_count(), std::vector<int>(a.dim(), -1));
  for (int v = 0; v < a.vertex_count(); ++v) {
    const auto& b = a.left_projective_basis(v);
    for (std::size_t i = 0; i < b.size(); ++i) pos[v][b[i]] = static_cast<int>(i);
  }
  return pos;
}

// b * x for x in P given in summand coordinates.
Vec left_multiply(const AlgebraTable& a, const std::vector<std::vector<int>>& pos, const Layout& lay, int b, const Vec& x) {
  Vec out = zero_vec(lay.dim, a.field());
  for (std::size_t k = 0; k < lay.vertices.size(); ++k) {
    const int v = lay.vertices[k];
    const auto& basis = a.left_projective_basis(v);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const Scalar& c = x[lay.offset[k] + i];
      if (c.is_zero()) continue;
      for (const auto& [r, y] : a.product(b, basis[i])) out[lay.offset[k] + pos[v][r]] += c * y;
    }
  }
  return out;
}

bool avoids_idempotents(const AlgebraTable& a, const Layout& lay, const std::vector<Vec>& rows) {
  for (std::size_t k = 0; k < lay.vertices.size(); ++k) {
    const auto& basis = a.left_projective_basis(lay.vertices[k]);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (!a.is_idempotent_basis(basis[i])) continue;
      for (const auto& r : rows)
        if (!r[lay.offset[k] + i].is_zero()) return false;
    }
  }
  return true;
}

Mat sparse_action(const FDModule& m, const SparseVec& x) {
  Mat out(m.dim(), m.dim(), m.field());
  for (const auto& [b, c] : x) out.add_scaled(c, m.action(b));
  return out;
}

int rank_or_zero(const Mat& m) { return m.rows() == 0 || m.cols() == 0 ? 0 : static_cast<int>(rank(m)); }

}  // namespace

int Resolution::term_dim(int n) const {
  int d = 0;
  for (int v : terms_[n]) d += static_cast<int>(algebra()->left_projective_basis(v).size());
  return d;
}

FDModule Resolution::term_module(int n) const {
  std::vector<FDModule> parts;
  for (int v : terms_[n]) parts.push_back(projective_module(algebra(), v));
  return direct_sum(parts, algebra());
}

Mat Resolution::differential(int n) const {
  const auto& a = *algebra();
  const Field f = a.field();
  const auto pos = position_tables(a);
  if (n == 0) {
    Layout lay(a, terms_[0]);
    Mat m(target_.dim(), lay.dim, f);
    for (std::size_t k = 0; k < terms_[0].size(); ++k) {
      const auto& basis = a.left_projective_basis(terms_[0][k]);
      for (std::size_t i = 0; i < basis.size(); ++i) m.set_column(lay.offset[k] + i, target_.action(basis[i]).apply(aug_[k]));
    }
    return m;
  }
  Layout src(a, terms_[n]), dst(a, terms_[n - 1]);
  Mat m(dst.dim, src.dim, f);
  for (std::size_t l = 0; l < terms_[n].size(); ++l) {
    Vec gen = zero_vec(dst.dim, f);
    for (std::size_t k = 0; k < terms_[n - 1].size(); ++k)
      for (const auto& [b, c] : diffs_[n][l][k]) gen[dst.offset[k] + pos[terms_[n - 1][k]][b]] = c;
    const auto& basis = a.left_projective_basis(terms_[n][l]);
    for (std::size_t i = 0; i < basis.size(); ++i) m.set_column(src.offset[l] + i, left_multiply(a, pos, dst, basis[i], gen));
  }
  return m;
}

FDModule Resolution::syzygy(int n) const {
  if (n == 0) return target_;
  if (n > term_count()) {
    if (complete_) return FDModule::zero(algebra());
    throw HomexError(ErrorCode::PreconditionFailed, "syzygy " + std::to_string(n) + " lies beyond the computed resolution");
  }
  if (kernels_[n].empty()) return FDModule::zero(algebra());
  return submodule_from_span(term_module(n - 1), kernels_[n]).module;
}

nlohmann::json Resolution::to_json() const {
  nlohmann::json terms = nlohmann::json::array(), dims = nlohmann::json::array();
  for (int n = 0; n < term_count(); ++n) {
    nlohmann::json t = nlohmann::json::array();
    for (int v : terms_[n]) t.push_back(algebra()->vertex_name(v));
    terms.push_back(t);
    dims.push_back(term_dim(n));
  }
  nlohmann::json j{{"terms", terms}, {"term_dims", dims}, {"complete", complete_}, {"minimal", minimal_}, {"exact", exact_}};
  j["length"] = complete_ ? nlohmann::json(length()) : nlohmann::json(nullptr);
  j["truncated_at"] = truncated_at_ ? nlohmann::json(*truncated_at_) : nlohmann::json(nullptr);
  return j;
}

Resolution minimal_resolution(const FDModule& m, int cutoff) {
  if (cutoff < 0) throw HomexError(ErrorCode::PreconditionFailed, "cutoff must be non-negative");
  Resolution r;
  r.target_ = m;
  r.kernels_.emplace_back();
  if (m.dim() == 0) {
    r.complete_ = true;
    return r;
  }
  const auto& a = *m.algebra();
  const Field f = a.field();
  const auto pos = position_tables(a);

  // Stage 0: generators of M modulo rad M.
  Subspace rad(m.dim(), f);
  for (int g : a.arrow_generators()) {
    const Mat& x = m.action(g);
    for (std::size_t j = 0; j < x.cols(); ++j) {
      Vec c = x.column(j);
      if (!is_zero(c)) rad.insert(std::move(c));
    }
  }
  std::vector<int> top_vertices;
  for (int v = 0; v < a.vertex_count(); ++v)
    for (int i : m.basis_at(v))
      if (rad.insert(unit_vec(m.dim(), i, f))) {
        top_vertices.push_back(v);
        r.aug_.push_back(unit_vec(m.dim(), i, f));
      }
  r.terms_.push_back(top_vertices);
  r.diffs_.emplace_back();
  Mat cover = r.differential(0);
  Mat ker = kernel_basis(cover);
  {
    Layout lay(a, top_vertices);
    if (lay.dim - static_cast<int>(ker.cols()) != m.dim()) r.exact_ = false;
    std::vector<Vec> cols;
    for (std::size_t c = 0; c < ker.cols(); ++c) cols.push_back(ker.column(c));
    r.kernels_.push_back(span_of(cols, lay.dim, f).basis());
    if (!avoids_idempotents(a, lay, r.kernels_.back())) r.minimal_ = false;
  }

  for (int n = 1;; ++n) {
    const auto& k = r.kernels_[n];
    if (k.empty()) {
      r.complete_ = true;
      break;
    }
    if (n > cutoff) {
      r.truncated_at_ = cutoff;
      break;
    }
    Layout prev(a, r.terms_[n - 1]);
    Subspace radk(prev.dim, f);
    for (const auto& row : k)
      for (int g : a.arrow_generators()) {
        Vec y = left_multiply(a, pos, prev, g, row);
        if (!is_zero(y)) radk.insert(std::move(y));
      }
    // Homogeneous generators of K modulo rad K.
    std::vector<int> verts;
    std::vector<Vec> gens;
    for (const auto& row : k) {
      std::size_t p = 0;
      while (row[p].is_zero()) ++p;
      std::size_t s = 0;
      while (s + 1 < prev.vertices.size() && prev.offset[s + 1] <= static_cast<int>(p)) ++s;
      const int vertex = a.left_vertex(a.left_projective_basis(prev.vertices[s])[p - prev.offset[s]]);
      if (radk.insert(row)) {
        verts.push_back(vertex);
        gens.push_back(row);
      }
    }
    std::vector<std::vector<SparseVec>> d(gens.size(), std::vector<SparseVec>(prev.vertices.size()));
    for (std::size_t l = 0; l < gens.size(); ++l)
      for (std::size_t s = 0; s < prev.vertices.size(); ++s) {
        const auto& basis = a.left_projective_basis(prev.vertices[s]);
        SparseVec comp;
        for (std::size_t i = 0; i < basis.size(); ++i)
          if (!gens[l][prev.offset[s] + i].is_zero()) comp.emplace_back(basis[i], gens[l][prev.offset[s] + i]);
        std::sort(comp.begin(), comp.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        d[l][s] = std::move(comp);
      }
    r.terms_.push_back(verts);
    r.diffs_.push_back(std::move(d));
    Mat dn = r.differential(n);
    Mat kn = kernel_basis(dn);
    Layout cur(a, verts);
    const int rk = cur.dim - static_cast<int>(kn.cols());
    if (rk != static_cast<int>(k.size())) r.exact_ = false;
    std::vector<Vec> cols;
    for (std::size_t c = 0; c < kn.cols(); ++c) cols.push_back(kn.column(c));
    r.kernels_.push_back(span_of(cols, cur.dim, f).basis());
    if (!avoids_idempotents(a, cur, r.kernels_.back())) r.minimal_ = false;
  }
  return r;
}

std::shared_ptr<const Resolution> ResolutionCache::get(const FDModule& m, int cutoff) {
  const auto key = std::make_pair(static_cast<const void*>(&m.actions()), cutoff);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = table_.find(key);
    if (it != table_.end()) return it->second;
  }
  auto r = std::make_shared<const Resolution>(minimal_resolution(m, cutoff));
  std::lock_guard<std::mutex> lock(mu_);
  return table_.emplace(key, r).first->second;
}

FDModule syzygy(const FDModule& m, int n) {
  if (n < 0) throw HomexError(ErrorCode::PreconditionFailed, "syzygy degree must be non-negative");
  if (n == 0) return m;
  return minimal_resolution(m, n - 1).syzygy(n);
}

Verdict projective_dimension(const Resolution& r) {
  if (r.complete())
    return Verdict::certified("projective_dimension", {{"value", r.length()}, {"terms", r.to_json()["term_dims"]}});
  return Verdict::inconclusive("projective_dimension", {{"cutoff", *r.truncated_at()}, {"terms", r.to_json()["term_dims"]}});
}

Verdict projective_dimension(const FDModule& m, int cutoff) { return projective_dimension(minimal_resolution(m, cutoff)); }

bool HomologyDims::all_zero_from(int degree) const {
  for (std::size_t i = std::max(degree, 0); i < dims.size(); ++i)
    if (dims[i] != 0) return false;
  return true;
}

nlohmann::json HomologyDims::to_json() const {
  nlohmann::json d = nlohmann::json::array();
  for (int x : dims) d.push_back(x < 0 ? nlohmann::json(nullptr) : nlohmann::json(x));
  return {{"dims", d}, {"trusted_through", trusted}, {"resolution_complete", complete}};
}

HomologyDims tor_from(const Resolution& r, const FDModule& y, int max_degree) {
  require_same_algebra(y.algebra(), opposite(r.algebra()), "tor");
  HomologyDims out;
  out.complete = r.complete();
  const int tc = r.term_count();
  out.trusted = r.complete() ? max_degree : std::min(max_degree, tc - 2);
  const Field f = y.field();
  auto chain_dim = [&](int i) {
    if (i >= tc) return 0;
    int d = 0;
    for (int v : r.term(i)) d += static_cast<int>(y.basis_at(v).size());
    return d;
  };
  // rank of (1 (x) d_i) : Y (x) P_i -> Y (x) P_{i-1}
  auto boundary_rank = [&](int i) {
    if (i <= 0 || i >= tc) return 0;
    const auto& src = r.term(i);
    const auto& dst = r.term(i - 1);
    Mat m(chain_dim(i - 1), chain_dim(i), f);
    int co = 0;
    for (std::size_t l = 0; l < src.size(); ++l) {
      const auto& cols = y.basis_at(src[l]);
      int ro = 0;
      for (std::size_t k = 0; k < dst.size(); ++k) {
        const auto& rows = y.basis_at(dst[k]);
        const SparseVec& x = r.entry(i, static_cast<int>(k), static_cast<int>(l));
        if (!x.empty() && !rows.empty() && !cols.empty()) {
          Mat act = sparse_action(y, x);
          for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t b = 0; b < cols.size(); ++b) m(ro + a, co + b) = act(rows[a], cols[b]);
        }
        ro += static_cast<int>(rows.size());
      }
      co += static_cast<int>(cols.size());
    }
    return rank_or_zero(m);
  };
  std::vector<int> ranks(max_degree + 3, -1);
  auto rk = [&](int i) {
    if (ranks[i] < 0) ranks[i] = boundary_rank(i);
    return ranks[i];
  };
  for (int i = 0; i <= max_degree; ++i) {
    if (i > out.trusted) {
      out.dims.push_back(-1);
      continue;
    }
    out.dims.push_back(chain_dim(i) - rk(i) - rk(i + 1));
  }
  return out;
}

HomologyDims ext_from(const Resolution& r, const FDModule& n, int max_degree) {
  require_same_algebra(n.algebra(), r.algebra(), "ext");
  HomologyDims out;
  out.complete = r.complete();
  const int tc = r.term_count();
  out.trusted = r.complete() ? max_degree : std::min(max_degree, tc - 2);
  const Field f = n.field();
  auto cochain_dim = [&](int i) {
    if (i >= tc) return 0;
    int d = 0;
    for (int v : r.term(i)) d += static_cast<int>(n.basis_at(v).size());
    return d;
  };
  // rank of Hom(d_{i+1}, N) : Hom(P_i, N) -> Hom(P_{i+1}, N)
  auto coboundary_rank = [&](int i) {
    if (i < 0 || i + 1 >= tc) return 0;
    const auto& src = r.term(i);
    const auto& dst = r.term(i + 1);
    Mat m(cochain_dim(i + 1), cochain_dim(i), f);
    int ro = 0;
    for (std::size_t l = 0; l < dst.size(); ++l) {
      const auto& rows = n.basis_at(dst[l]);
      int co = 0;
      for (std::size_t k = 0; k < src.size(); ++k) {
        const auto& cols = n.basis_at(src[k]);
        const SparseVec& x = r.entry(i + 1, static_cast<int>(k), static_cast<int>(l));
        if (!x.empty() && !rows.empty() && !cols.empty()) {
          Mat act = sparse_action(n, x);
          for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t b = 0; b < cols.size(); ++b) m(ro + a, co + b) = act(rows[a], cols[b]);
        }
        co += static_cast<int>(cols.size());
      }
      ro += static_cast<int>(rows.size());
    }
    return rank_or_zero(m);
  };
  std::vector<int> ranks(max_degree + 3, -1);
  auto rk = [&](int i) {
    if (i < 0) return 0;
    if (ranks[i] < 0) ranks[i] = coboundary_rank(i);
    return ranks[i];
  };
  for (int i = 0; i <= max_degree; ++i) {
    if (i > out.trusted) {
      out.dims.push_back(-1);
      continue;
    }
    out.dims.push_back(cochain_dim(i) - rk(i) - rk(i - 1));
  }
  return out;
}

HomologyDims tor(const FDModule& x, const FDModule& n, int max_degree, int cutoff) {
  return tor_from(minimal_resolution(n, std::min(cutoff, max_degree + 1)), x, max_degree);
}

HomologyDims tor_resolving_left(const FDModule& x, const FDModule& n, int max_degree, int cutoff) {
  return tor_from(minimal_resolution(x, std::min(cutoff, max_degree + 1)), n, max_degree);
}

HomologyDims ext(const FDModule& m, const FDModule& n, int max_degree, int cutoff) {
  return ext_from(minimal_resolution(m, std::min(cutoff, max_degree + 1)), n, max_degree);
}

}  // namespace homex

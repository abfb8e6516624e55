#include "homex/extension.hpp"

#include <map>
#include <set>

#include "homex/errors.hpp"

namespace homex {

namespace {

Mat left_mult(const AlgebraTable& a, const Vec& x) {
  Mat out(a.dim(), a.dim(), a.field());
  for (int i = 0; i < a.dim(); ++i)
    if (!x[i].is_zero()) out.add_scaled(x[i], a.left_mult_matrix(i));
  return out;
}

Mat right_mult(const AlgebraTable& a, const Vec& x) {
  Mat out(a.dim(), a.dim(), a.field());
  for (int i = 0; i < a.dim(); ++i)
    if (!x[i].is_zero()) out.add_scaled(x[i], a.right_mult_matrix(i));
  return out;
}

Mat row_block(const Mat& m, std::size_t from, std::size_t count) {
  std::vector<std::size_t> rows;
  for (std::size_t r = from; r < from + count; ++r) rows.push_back(r);
  return m.select_rows(rows);
}

nlohmann::json pair_detail(const AlgPtr& a, int i, int j) {
  return {{"pair", {i, j}}, {"labels", {a->label(i), a->label(j)}}};
}

// Basis index of a path of a quiver algebra, -1 when it is not a basis path.
int path_index(const AlgebraTable& a, const Path& p) {
  const auto& pb = *a.path_basis();
  for (int i = 0; i < a.dim(); ++i)
    if (pb.paths[i] == p) return i;
  return -1;
}

int arrow_basis_index(const AlgebraTable& a, int arrow) {
  const auto& q = a.path_basis()->presentation.quiver;
  return path_index(a, Path{q.arrows[arrow].source, {arrow}});
}

}  // namespace

std::optional<std::pair<int, int>> multiplicativity_violation(const AlgPtr& from, const AlgPtr& to, const Mat& phi) {
  std::vector<Vec> img;
  for (int i = 0; i < from->dim(); ++i) img.push_back(phi.column(i));
  for (int i = 0; i < from->dim(); ++i) {
    if (is_zero(img[i])) continue;
    const Mat li = left_mult(*to, img[i]);
    for (int j = 0; j < from->dim(); ++j) {
      Vec lhs = phi.apply(densify(from->product(i, j), from->dim(), from->field()));
      if (lhs != li.apply(img[j])) return std::make_pair(i, j);
    }
  }
  return std::nullopt;
}

Extension make_extension(AlgPtr b, AlgPtr a, Mat embedding, std::optional<Mat> complement, std::optional<Mat> retraction) {
  if (a->field() != b->field()) throw HomexError(ErrorCode::FieldMismatch, "extension: algebras over different fields");
  const Field f = a->field();
  const int na = a->dim(), nb = b->dim();
  if (static_cast<int>(embedding.rows()) != na || static_cast<int>(embedding.cols()) != nb)
    throw HomexError(ErrorCode::DimensionMismatch, "embedding must be dim A x dim B");
  if (embedding.apply(b->unit()) != a->unit()) throw HomexError(ErrorCode::NotUnital, "embedding does not send 1 to 1");
  if (auto bad = multiplicativity_violation(b, a, embedding))
    throw HomexError(ErrorCode::NotMultiplicative, "embedding is not multiplicative on " + b->label(bad->first) + ", " +
                                                       b->label(bad->second),
                     pair_detail(b, bad->first, bad->second));
  if (static_cast<int>(rank(embedding)) != nb) throw HomexError(ErrorCode::NotInjective, "embedding has a kernel");
  Extension e;
  e.small = b;
  e.big = a;
  if (complement) {
    if (static_cast<int>(complement->rows()) != na || static_cast<int>(complement->cols()) != na - nb ||
        static_cast<int>(rank(hstack(embedding, *complement))) != na)
      throw HomexError(ErrorCode::DimensionMismatch, "complement does not complement the image");
    e.complement = std::move(*complement);
  } else {
    Subspace img = span_of(columns_of(embedding), na, f);
    std::vector<Vec> cols;
    for (int i = 0; i < na; ++i) {
      Vec u = unit_vec(na, i, f);
      if (img.insert(u)) cols.push_back(std::move(u));
    }
    e.complement = Mat::from_columns(cols, na, f);
  }
  if (retraction) {
    if (static_cast<int>(retraction->rows()) != nb || static_cast<int>(retraction->cols()) != na)
      throw HomexError(ErrorCode::DimensionMismatch, "retraction must be dim B x dim A");
    if (!(*retraction * embedding).is_identity())
      throw HomexError(ErrorCode::NotSplit, "retraction is not a left inverse of the embedding");
    if (retraction->apply(a->unit()) != b->unit()) throw HomexError(ErrorCode::NotSplit, "retraction is not unital");
    if (auto bad = multiplicativity_violation(a, b, *retraction))
      throw HomexError(ErrorCode::NotSplit, "retraction is not multiplicative", pair_detail(a, bad->first, bad->second));
  }
  e.embedding = std::move(embedding);
  e.retraction = std::move(retraction);
  return e;
}

Extension embed_by_arrows(const AlgPtr& b, const AlgPtr& a, std::map<std::string, std::string> arrows) {
  if (!b->path_basis() || !a->path_basis())
    throw HomexError(ErrorCode::PreconditionFailed, "embed_by_arrows needs algebras given by quivers");
  const Quiver& qb = b->path_basis()->presentation.quiver;
  const Quiver& qa = a->path_basis()->presentation.quiver;
  const Field f = a->field();
  std::vector<int> vertex_map, arrow_map;
  for (const auto& v : qb.vertices) {
    const int w = qa.vertex_index(v);
    if (w < 0) throw HomexError(ErrorCode::PreconditionFailed, "vertex " + v + " is missing from the larger quiver");
    vertex_map.push_back(w);
  }
  for (const auto& arr : qb.arrows) {
    auto it = arrows.find(arr.name);
    const std::string target = it == arrows.end() ? arr.name : it->second;
    const int x = qa.arrow_index(target);
    if (x < 0) throw HomexError(ErrorCode::PreconditionFailed, "arrow " + target + " is missing from the larger quiver");
    if (qa.arrows[x].source != vertex_map[arr.source] || qa.arrows[x].target != vertex_map[arr.target])
      throw HomexError(ErrorCode::NotMultiplicative, "arrow " + arr.name + " and its image have different ends");
    arrow_map.push_back(x);
  }
  // Image of a path of B: the product of the images of its arrows.
  auto image = [&](const Path& p, const AlgebraTable& to, const std::vector<int>& amap, const std::vector<int>& vmap,
                   auto&& element) {
    if (p.arrows.empty()) return to.idempotent(vmap[p.vertex]);
    Vec x = element(amap[p.arrows.front()]);
    for (std::size_t k = 1; k < p.arrows.size(); ++k) {
      if (amap[p.arrows[k]] < 0) return zero_vec(to.dim(), f);
      x = to.multiply(element(amap[p.arrows[k]]), x);
    }
    return x;
  };
  Mat phi(a->dim(), b->dim(), f);
  for (int i = 0; i < b->dim(); ++i)
    phi.set_column(i, image(b->path_basis()->paths[i], *a, arrow_map, vertex_map,
                            [&](int arr) { return unit_vec(a->dim(), arrow_basis_index(*a, arr), f); }));
  // Retraction killing the arrows of A outside the image, when vertices match.
  std::optional<Mat> ret;
  if (qa.vertices.size() == qb.vertices.size()) {
    std::vector<int> back_arrow(qa.arrows.size(), -1), back_vertex(qa.vertices.size(), -1);
    for (std::size_t i = 0; i < arrow_map.size(); ++i) back_arrow[arrow_map[i]] = static_cast<int>(i);
    for (std::size_t v = 0; v < vertex_map.size(); ++v) back_vertex[vertex_map[v]] = static_cast<int>(v);
    Mat r(b->dim(), a->dim(), f);
    for (int i = 0; i < a->dim(); ++i) {
      const Path& p = a->path_basis()->paths[i];
      if (!p.arrows.empty() && back_arrow[p.arrows.front()] < 0) continue;
      r.set_column(i, image(p, *b, back_arrow, back_vertex,
                            [&](int arr) { return unit_vec(b->dim(), arrow_basis_index(*b, arr), f); }));
    }
    if ((r * phi).is_identity() && !multiplicativity_violation(a, b, r)) ret = std::move(r);
  }
  std::optional<Mat> comp;
  if (ret) {
    // Complement: the kernel of the retraction.
    Mat k = kernel_basis(*ret);
    if (static_cast<int>(k.cols()) == a->dim() - b->dim()) comp = std::move(k);
  }
  Extension e = make_extension(b, a, std::move(phi), std::move(comp), std::move(ret));
  e.kind = "embed";
  return e;
}

RebasedBimodule extension_bimodule(const Extension& e, bool left_small, bool right_small) {
  const AlgPtr& a = e.big;
  const Mat id = Mat::identity(a->dim(), a->field());
  return restrict_bimodule_rebased(regular_bimodule(a), left_small ? e.small : a, left_small ? e.embedding : id,
                                   right_small ? e.small : a, right_small ? e.embedding : id);
}

QuotientBimodule quotient_bimodule(const Extension& e) {
  const AlgebraTable& a = *e.big;
  const AlgPtr& b = e.small;
  const int na = a.dim(), nb = b->dim(), k = na - nb;
  auto qinv = inverse(hstack(e.embedding, e.complement));
  if (!qinv) throw HomexError(ErrorCode::DimensionMismatch, "complement does not complement the image");
  const Mat pi = row_block(*qinv, nb, k);
  std::vector<Mat> left, right;
  for (int x = 0; x < nb; ++x) {
    const Vec img = e.embedding.column(x);
    left.push_back(pi * (left_mult(a, img) * e.complement));
    right.push_back(pi * (right_mult(a, img) * e.complement));
  }
  RebasedBimodule r = adapt_bimodule(b, b, std::move(left), std::move(right));
  auto pinv = inverse(r.basis_change);
  return {r.module, *pinv * pi, e.complement * r.basis_change};
}

TensorPowers tensor_powers(const FDModule& m, int cap) {
  if (cap < 1) throw HomexError(ErrorCode::PreconditionFailed, "tensor power cap must be at least 1");
  TensorPowers out;
  FDModule cur = m;
  for (int j = 1; j <= cap; ++j) {
    if (j > 1) cur = TensorProduct(cur, m).module();
    out.dims.push_back(cur.dim());
    if (cur.dim() == 0) {
      out.nilpotency = Verdict::certified("nilpotency", {{"value", j}, {"dims", out.dims}});
      return out;
    }
    out.powers.push_back(cur);
  }
  out.nilpotency = Verdict::inconclusive("nilpotency", {{"cutoff", cap}, {"dims", out.dims}});
  return out;
}

nlohmann::json BoundedReport::to_json() const {
  nlohmann::json table = nlohmann::json::array();
  for (const auto& row : tor_table) {
    nlohmann::json r = nlohmann::json::array();
    for (int x : row) r.push_back(x < 0 ? nlohmann::json(nullptr) : nlohmann::json(x));
    table.push_back(r);
  }
  return {{"nilpotency", nilpotency.to_json()},
          {"tensor_power_dims", powers.dims},
          {"bimodule_pd", bimodule_pd.to_json()},
          {"one_sided_pd", one_sided_pd.to_json()},
          {"tor_side", side == TorSide::Left ? "Tor(M, M^j)" : "Tor(M^j, M)"},
          {"tor_table", table},
          {"tor_vanishing", tor_vanishing.to_json()},
          {"overall", overall.to_json()},
          {"cutoffs", cutoffs.to_json()}};
}

BoundedReport check_bounded_quotient(const FDModule& m, const BoundedCutoffs& cutoffs, TorSide side) {
  BoundedReport r;
  r.cutoffs = cutoffs;
  r.side = side;
  r.powers = tensor_powers(m, cutoffs.tensor_cap);
  r.nilpotency = r.powers.nilpotency;
  r.bimodule_pd = projective_dimension(m, cutoffs.resolution);
  r.bimodule_pd.clause = "bimodule_pd";

  // Tor_i(M, M^j) resolves M_B; Tor_i(M^j, M) resolves _BM.
  const Resolution res = minimal_resolution(side == TorSide::Left ? right_part(m) : left_part(m), cutoffs.resolution);
  r.one_sided_pd = projective_dimension(res);
  r.one_sided_pd.clause = "one_sided_pd";
  const int imax = res.complete() ? std::max(res.length(), 0) : res.term_count() - 2;
  const int jmax = static_cast<int>(r.powers.powers.size());
  r.tor_table.assign(std::max(imax, 0), std::vector<int>(jmax, -1));
  std::optional<nlohmann::json> violation;
  for (int j = 1; j <= jmax && imax >= 1; ++j) {
    const FDModule& mj = r.powers.powers[j - 1];
    HomologyDims t = tor_from(res, side == TorSide::Left ? left_part(mj) : right_part(mj), imax);
    for (int i = 1; i <= imax; ++i) {
      r.tor_table[i - 1][j - 1] = t.dims[i];
      if (t.dims[i] > 0 && !violation) violation = nlohmann::json{{"i", i}, {"j", j}, {"dim", t.dims[i]}};
    }
  }
  if (violation)
    r.tor_vanishing = Verdict::refuted("tor_vanishing", *violation);
  else if (res.complete() && r.nilpotency.is_certified())
    r.tor_vanishing = Verdict::certified("tor_vanishing", {{"max_degree", imax}, {"max_power", jmax}});
  else
    r.tor_vanishing = Verdict::inconclusive("tor_vanishing", {{"max_degree", imax}, {"max_power", jmax}});

  r.overall = combine({r.nilpotency, r.bimodule_pd, r.tor_vanishing}, "bounded");
  if (r.overall.is_certified())
    r.overall.witness = {{"p", r.nilpotency.value()}, {"bimodule_pd", r.bimodule_pd.value()}};
  return r;
}

BoundedReport check_bounded(const Extension& e, const BoundedCutoffs& cutoffs, TorSide side) {
  return check_bounded_quotient(quotient_bimodule(e).module, cutoffs, side);
}

// ---------------------------------------------------------------------------
// Constructors

Extension split_extension(const AlgPtr& b, const FDModule& m, const Mat& product) {
  const auto [l, r] = bimodule_sides(m);
  require_same_algebra(l, b, "split_extension");
  require_same_algebra(r, b, "split_extension");
  const Field f = b->field();
  const int nb = b->dim(), k = m.dim(), n = nb + k;
  if (static_cast<int>(product.rows()) != k || static_cast<int>(product.cols()) != k * k)
    throw HomexError(ErrorCode::DimensionMismatch, "product must be dim M x (dim M)^2");
  const FDModule lp = left_part(m), rp = right_part(m);
  auto mul = [&](const Vec& u, const Vec& v) {
    Vec out = zero_vec(k, f);
    for (int x = 0; x < k; ++x) {
      if (u[x].is_zero()) continue;
      for (int y = 0; y < k; ++y)
        if (!v[y].is_zero()) axpy(out, u[x] * v[y], product.column(x * k + y));
    }
    return out;
  };
  if (!product.is_zero()) {
    for (int x = 0; x < nb; ++x)
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          const Vec mi = unit_vec(k, i, f), mj = unit_vec(k, j, f);
          const Vec bi = lp.action(x).apply(mi), ib = rp.action(x).apply(mi), jb = rp.action(x).apply(mj);
          const Vec bj = lp.action(x).apply(mj), ij = product.column(i * k + j);
          if (mul(bi, mj) != lp.action(x).apply(ij) || mul(ib, mj) != mul(mi, bj) || mul(mi, jb) != rp.action(x).apply(ij))
            throw HomexError(ErrorCode::NotBimoduleMorphism, "product is not a bimodule map",
                             {{"algebra_element", b->label(x)}, {"pair", {i, j}}});
        }
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        for (int t = 0; t < k; ++t)
          if (mul(product.column(i * k + j), unit_vec(k, t, f)) != mul(unit_vec(k, i, f), product.column(j * k + t)))
            throw HomexError(ErrorCode::NotAssociative, "product is not associative", {{"triple", {i, j, t}}});
  }

  AlgebraData d;
  d.field = f;
  d.vertex_names = b->vertex_names();
  d.idempotent_basis = b->data().idempotent_basis;
  std::set<std::string> used(b->labels().begin(), b->labels().end());
  d.labels = b->labels();
  d.left_vertex = b->data().left_vertex;
  d.right_vertex = b->data().right_vertex;
  const int nv = b->vertex_count();
  for (int i = 0; i < k; ++i) {
    std::string lab = "m" + std::to_string(i + 1);
    while (used.count(lab)) lab = "M." + lab;
    used.insert(lab);
    d.labels.push_back(lab);
    d.left_vertex.push_back(m.vertex_of(i) / nv);
    d.right_vertex.push_back(m.vertex_of(i) % nv);
  }
  d.mult.resize(static_cast<std::size_t>(n) * n);
  auto shifted = [&](const Vec& v) {
    SparseVec s;
    for (int i = 0; i < k; ++i)
      if (!v[i].is_zero()) s.emplace_back(nb + i, v[i]);
    return s;
  };
  for (int i = 0; i < nb; ++i) {
    for (int j = 0; j < nb; ++j) d.mult[static_cast<std::size_t>(i) * n + j] = b->product(i, j);
    for (int j = 0; j < k; ++j) {
      d.mult[static_cast<std::size_t>(i) * n + nb + j] = shifted(lp.action(i).column(j));
      d.mult[static_cast<std::size_t>(nb + j) * n + i] = shifted(rp.action(i).column(j));
    }
  }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) d.mult[static_cast<std::size_t>(nb + i) * n + nb + j] = shifted(product.column(i * k + j));
  AlgPtr a = AlgebraTable::make(std::move(d));

  Mat emb(n, nb, f), comp(n, k, f), ret(nb, n, f);
  for (int i = 0; i < nb; ++i) {
    emb(i, i) = one_in(f);
    ret(i, i) = one_in(f);
  }
  for (int i = 0; i < k; ++i) comp(nb + i, i) = one_in(f);
  Extension e = make_extension(b, a, std::move(emb), std::move(comp), std::move(ret));
  e.kind = product.is_zero() ? "trivial" : "split";
  return e;
}

Extension trivial_extension(const AlgPtr& b, const FDModule& m) {
  return split_extension(b, m, Mat(m.dim(), static_cast<std::size_t>(m.dim()) * m.dim(), b->field()));
}

Triangular triangular_algebra(const AlgPtr& lambda, const AlgPtr& gamma, const FDModule& w) {
  const auto [g2, l2] = bimodule_sides(w);
  require_same_algebra(g2, gamma, "triangular_algebra (left factor of W)");
  require_same_algebra(l2, lambda, "triangular_algebra (right factor of W)");
  const Field f = lambda->field();
  const int nl = lambda->dim(), ng = gamma->dim(), k = w.dim();
  const int vl = lambda->vertex_count();
  const AlgPtr p = product_algebra(lambda, gamma);
  const int vp = p->vertex_count();
  const FDModule lw = left_part(w), rw = right_part(w);

  std::vector<Mat> left, right;
  for (int x = 0; x < nl + ng; ++x) {
    left.push_back(x >= nl ? lw.action(x - nl) : Mat(k, k, f));
    right.push_back(x < nl ? rw.action(x) : Mat(k, k, f));
  }
  std::vector<int> verts;
  for (int v : w.vertices()) verts.push_back((vl + v / vl) * vp + v % vl);
  FDModule wp = bimodule_from_actions(p, p, verts, left, right);
  Triangular out{nullptr, trivial_extension(p, wp), wp, {}};
  out.extension.kind = "triangular";

  // [[L, 0], [W, G]] with basis L, W, G, multiplied as matrices.
  AlgebraData d;
  d.field = f;
  const int n = nl + k + ng;
  d.vertex_names = p->vertex_names();
  for (int v : lambda->data().idempotent_basis) d.idempotent_basis.push_back(v);
  for (int v : gamma->data().idempotent_basis) d.idempotent_basis.push_back(nl + k + v);
  for (int i = 0; i < nl; ++i) {
    d.labels.push_back("[" + lambda->label(i) + ",0;0,0]");
    d.left_vertex.push_back(lambda->left_vertex(i));
    d.right_vertex.push_back(lambda->right_vertex(i));
  }
  for (int i = 0; i < k; ++i) {
    d.labels.push_back("[0,0;w" + std::to_string(i + 1) + ",0]");
    d.left_vertex.push_back(vl + w.vertex_of(i) / vl);
    d.right_vertex.push_back(w.vertex_of(i) % vl);
  }
  for (int i = 0; i < ng; ++i) {
    d.labels.push_back("[0,0;0," + gamma->label(i) + "]");
    d.left_vertex.push_back(vl + gamma->left_vertex(i));
    d.right_vertex.push_back(vl + gamma->right_vertex(i));
  }
  d.mult.resize(static_cast<std::size_t>(n) * n);
  auto shift = [](SparseVec s, int by) {
    for (auto& e : s) e.first += by;
    return s;
  };
  auto w_vec = [&](const Vec& v) {
    SparseVec s;
    for (int i = 0; i < k; ++i)
      if (!v[i].is_zero()) s.emplace_back(nl + i, v[i]);
    return s;
  };
  for (int i = 0; i < nl; ++i)
    for (int j = 0; j < nl; ++j) d.mult[static_cast<std::size_t>(i) * n + j] = lambda->product(i, j);
  for (int i = 0; i < ng; ++i)
    for (int j = 0; j < ng; ++j) d.mult[static_cast<std::size_t>(nl + k + i) * n + nl + k + j] = shift(gamma->product(i, j), nl + k);
  for (int x = 0; x < k; ++x) {
    for (int j = 0; j < nl; ++j) d.mult[static_cast<std::size_t>(nl + x) * n + j] = w_vec(rw.action(j).column(x));
    for (int i = 0; i < ng; ++i) d.mult[static_cast<std::size_t>(nl + k + i) * n + nl + x] = w_vec(lw.action(i).column(x));
  }
  out.matrix_algebra = AlgebraTable::make(std::move(d));

  // The trivial extension has basis L, G, W.
  Mat map(n, n, f);
  for (int i = 0; i < nl; ++i) map(i, i) = one_in(f);
  for (int i = 0; i < k; ++i) map(nl + ng + i, nl + i) = one_in(f);
  for (int i = 0; i < ng; ++i) map(nl + i, nl + k + i) = one_in(f);
  if (is_algebra_isomorphism(out.matrix_algebra, out.extension.big, map))
    out.iso = Verdict::certified("triangular_iso", {{"map", mat_to_json(map)}});
  else
    out.iso = Verdict::refuted("triangular_iso", {{"map", mat_to_json(map)}});
  return out;
}

ArrowRemoval arrow_removal(const Presentation& p, const std::string& arrow, const BoundedCutoffs& cutoffs) {
  const int x = p.quiver.arrow_index(arrow);
  if (x < 0) throw HomexError(ErrorCode::PreconditionFailed, "no arrow named " + arrow);
  for (std::size_t r = 0; r < p.relations.size(); ++r)
    for (const auto& t : p.relations[r].terms)
      for (int y : t.arrows)
        if (y == x)
          throw HomexError(ErrorCode::ArrowInRelations, "arrow " + arrow + " occurs in relation " + std::to_string(r + 1),
                           {{"arrow", arrow}, {"relation", r}});
  Presentation q;
  q.name = p.name + "/" + arrow;
  q.field = p.field;
  q.quiver.vertices = p.quiver.vertices;
  std::vector<int> renumber(p.quiver.arrows.size(), -1);
  for (std::size_t i = 0; i < p.quiver.arrows.size(); ++i)
    if (static_cast<int>(i) != x) {
      renumber[i] = static_cast<int>(q.quiver.arrows.size());
      q.quiver.arrows.push_back(p.quiver.arrows[i]);
    }
  for (auto rel : p.relations) {
    for (auto& t : rel.terms)
      for (auto& y : t.arrows) y = renumber[y];
    q.relations.push_back(std::move(rel));
  }
  ArrowRemoval out;
  out.big = from_presentation(p);
  out.small = from_presentation(q);
  out.extension = embed_by_arrows(out.small, out.big);
  out.extension.kind = "arrow_removal";
  if (!out.extension.retraction) throw HomexError(ErrorCode::NotSplit, "the arrow ideal has no algebra complement");
  const QuotientBimodule qb = quotient_bimodule(out.extension);
  out.ideal = qb.module;

  // Rebuild A as B (x) M with the product inherited from A.
  const int k = qb.module.dim();
  const Field f = p.field;
  Mat product(k, static_cast<std::size_t>(k) * k, f);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      product.set_column(i * k + j, qb.projection.apply(out.big->multiply(qb.lift.column(i), qb.lift.column(j))));
  Extension rebuilt = split_extension(out.small, qb.module, product);
  Mat map = hstack(out.extension.embedding, qb.lift);
  if (is_algebra_isomorphism(rebuilt.big, out.big, map))
    out.rebuilt = Verdict::certified("arrow_removal_iso", {{"trivial_product", product.is_zero()}});
  else
    out.rebuilt = Verdict::refuted("arrow_removal_iso", {{"map", mat_to_json(map)}});
  out.report = check_bounded(out.extension, cutoffs);
  return out;
}

// ---------------------------------------------------------------------------
// Consequence checks

namespace {

void require_certified(const BoundedReport& report, const std::string& what) {
  if (!report.overall.is_certified())
    throw HomexError(ErrorCode::PreconditionFailed, what + " needs a certified bounded extension");
}

// Outcome of one "Tor_i vanishes for i >= 1" check.
struct TorCheck {
  std::string name;
  HomologyDims dims;
};

Verdict tor_checks_verdict(const std::vector<TorCheck>& checks) {
  nlohmann::json detail = nlohmann::json::array();
  bool all_complete = true;
  for (const auto& c : checks) {
    detail.push_back({{"check", c.name}, {"dims", c.dims.to_json()}});
    for (std::size_t i = 1; i < c.dims.dims.size(); ++i)
      if (c.dims.dims[i] > 0)
        return Verdict::refuted("tor_consequences", {{"check", c.name}, {"i", i}, {"dim", c.dims.dims[i]}});
    all_complete = all_complete && c.dims.complete;
  }
  return all_complete ? Verdict::certified("tor_consequences", {{"checks", detail}})
                      : Verdict::inconclusive("tor_consequences", {{"checks", detail}});
}

HomologyDims tor_window(const Resolution& r, const FDModule& y) {
  const int top = r.complete() ? std::max(r.length(), 1) : r.term_count() - 2;
  return tor_from(r, y, std::max(top, 1));
}

}  // namespace

Verdict verify_tor_consequences(const Extension& e, const BoundedReport& report, int cutoff) {
  require_certified(report, "verify_tor_consequences");
  const FDModule abb = extension_bimodule(e, true, true).module;
  const FDModule a_left = left_part(abb), a_right = right_part(abb);
  const Resolution ra = minimal_resolution(a_left, cutoff);
  std::vector<TorCheck> checks;
  checks.push_back({"Tor(A, A)", tor_window(ra, a_right)});
  for (std::size_t j = 1; j <= report.powers.powers.size(); ++j) {
    const FDModule& mj = report.powers.powers[j - 1];
    checks.push_back({"Tor(M^" + std::to_string(j) + ", A)", tor_window(ra, right_part(mj))});
    const FDModule mja = TensorProduct(mj, abb).module();
    checks.push_back({"Tor(A, M^" + std::to_string(j) + " (x) A)",
                      tor_window(minimal_resolution(left_part(mja), cutoff), a_right)});
  }
  return tor_checks_verdict(checks);
}

Verdict verify_sandwich_pd(const Extension& e, const BoundedReport& report, int cutoff) {
  require_certified(report, "verify_sandwich_pd");
  const FDModule aab = extension_bimodule(e, false, true).module;
  const FDModule aba = extension_bimodule(e, true, false).module;
  std::vector<Verdict> parts;
  nlohmann::json detail = nlohmann::json::array();
  for (std::size_t j = 1; j <= report.powers.powers.size(); ++j) {
    const FDModule left = TensorProduct(aab, report.powers.powers[j - 1]).module();
    const FDModule x = TensorProduct(left, aba).module();
    Verdict v = projective_dimension(x, cutoff);
    detail.push_back({{"j", j}, {"dim", x.dim()}, {"pd", v.to_json()}});
    parts.push_back(v);
  }
  Verdict out = combine(parts, "sandwich_pd");
  out.witness = {{"terms", detail}};
  return out;
}

Verdict relative_bar_exactness(const Extension& e, const BoundedReport& report) {
  require_certified(report, "relative_bar_exactness");
  if (!e.retraction) throw HomexError(ErrorCode::NotSplit, "relative bar complex needs a split extension");
  const AlgebraTable& a = *e.big;
  const Field f = a.field();
  const QuotientBimodule q = quotient_bimodule(e);
  const FDModule& m = q.module;
  const int p = report.p();
  const RebasedBimodule aab = extension_bimodule(e, false, true);
  const RebasedBimodule aba = extension_bimodule(e, true, false);
  const Mat pl = aab.basis_change, pr = aba.basis_change;
  const Mat pl_inv = *inverse(pl), pr_inv = *inverse(pr);
  // Section of M onto the kernel of the retraction.
  const Mat s = q.lift - e.embedding * (*e.retraction * q.lift);

  // L_k = A (x) M^k, T_j = L_j (x) A.
  std::vector<TensorProduct> chain;
  std::vector<TensorProduct> terms;
  terms.emplace_back(aab.module, aba.module);
  for (int j = 1; j < p; ++j) {
    chain.emplace_back(j == 1 ? aab.module : chain.back().module(), m);
    terms.emplace_back(chain.back().module(), aba.module);
  }
  auto decode = [&](int j, int idx) {
    std::vector<int> out(j + 2);
    auto [left, last] = terms[j].basis_pair(idx);
    out[j + 1] = last;
    for (int k = j; k >= 1; --k) {
      auto [l2, mk] = chain[k - 1].basis_pair(left);
      out[k] = mk;
      left = l2;
    }
    out[0] = left;
    return out;
  };
  auto encode = [&](int j, const std::vector<Vec>& factors) {
    Vec v = factors[0];
    for (int k = 1; k <= j; ++k) v = chain[k - 1].pure(v, factors[k]);
    return terms[j].pure(v, factors[j + 1]);
  };
  auto mprod = [&](const Vec& x, const Vec& y) { return q.projection.apply(a.multiply(s.apply(x), s.apply(y))); };

  std::vector<Mat> d;  // d[j] : T_j -> T_{j-1}, d[0] : T_0 -> A
  {
    Mat d0(a.dim(), terms[0].dim(), f);
    for (int c = 0; c < terms[0].dim(); ++c) {
      auto [x, y] = terms[0].basis_pair(c);
      d0.set_column(c, a.multiply(pl.column(x), pr.column(y)));
    }
    d.push_back(std::move(d0));
  }
  for (int j = 1; j < p; ++j) {
    Mat dj(terms[j - 1].dim(), terms[j].dim(), f);
    for (int c = 0; c < terms[j].dim(); ++c) {
      const auto idx = decode(j, c);
      std::vector<Vec> base;
      base.push_back(unit_vec(aab.module.dim(), idx[0], f));
      for (int k = 1; k <= j; ++k) base.push_back(unit_vec(m.dim(), idx[k], f));
      base.push_back(unit_vec(aba.module.dim(), idx[j + 1], f));
      Vec col = zero_vec(terms[j - 1].dim(), f);
      // a s(m_1) (x) m_2 ... (x) a'
      {
        std::vector<Vec> t;
        t.push_back(pl_inv.apply(a.multiply(pl.column(idx[0]), s.apply(base[1]))));
        for (int k = 2; k <= j + 1; ++k) t.push_back(base[k]);
        axpy(col, Scalar(1).in_field(f), encode(j - 1, t));
      }
      // (-1)^k a (x) ... (x) m_k m_{k+1} (x) ... (x) a'
      for (int k = 1; k < j; ++k) {
        std::vector<Vec> t(base.begin(), base.begin() + k);
        t.push_back(mprod(base[k], base[k + 1]));
        for (int r = k + 2; r <= j + 1; ++r) t.push_back(base[r]);
        axpy(col, Scalar(k % 2 ? -1 : 1).in_field(f), encode(j - 1, t));
      }
      // (-1)^j a (x) m_1 ... (x) s(m_j) a'
      {
        std::vector<Vec> t(base.begin(), base.begin() + j);
        t.push_back(pr_inv.apply(a.multiply(s.apply(base[j]), pr.column(idx[j + 1]))));
        axpy(col, Scalar(j % 2 ? -1 : 1).in_field(f), encode(j - 1, t));
      }
      dj.set_column(c, col);
    }
    d.push_back(std::move(dj));
  }

  std::vector<int> dims{a.dim()}, ranks;
  for (const auto& t : terms) dims.push_back(t.dim());
  for (const auto& x : d) ranks.push_back(x.rows() && x.cols() ? static_cast<int>(rank(x)) : 0);
  nlohmann::json w{{"term_dims", dims}, {"ranks", ranks}, {"p", p}};
  for (std::size_t j = 1; j < d.size(); ++j)
    if (!(d[j - 1] * d[j]).is_zero()) {
      w["not_a_complex_at"] = j;
      return Verdict::refuted("bar_exactness", w);
    }
  // Exact at A, then at each T_j (the map out of T_{p-1} on the left is zero).
  if (ranks[0] != a.dim()) {
    w["position"] = "A";
    return Verdict::refuted("bar_exactness", w);
  }
  for (int j = 0; j < p; ++j) {
    const int incoming = j + 1 < p ? ranks[j + 1] : 0;
    if (dims[j + 1] - ranks[j] != incoming) {
      w["position"] = j;
      return Verdict::refuted("bar_exactness", w);
    }
  }
  return Verdict::certified("bar_exactness", w);
}

Verdict ehi_dimension_test(const Extension& e, const BoundedReport& report,
                           std::vector<std::pair<FDModule, FDModule>> samples, int window) {
  require_certified(report, "ehi_dimension_test");
  const int pd = std::max<int>(0, static_cast<int>(report.bimodule_pd.value()));
  const int t_star = pd + report.p() + 1;
  const int top = t_star + window;
  if (samples.empty()) {
    const auto simples = simple_modules(e.big);
    for (const auto& x : simples)
      for (const auto& y : simples) samples.emplace_back(x, y);
  }
  ResolutionCache cache_a, cache_b;
  std::map<const void*, FDModule> restricted;
  auto res = [&](const FDModule& x) {
    const void* key = &x.actions();
    auto it = restricted.find(key);
    if (it == restricted.end()) it = restricted.emplace(key, restrict_scalars(x, e.small, e.embedding).module).first;
    return it->second;
  };
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto& [x, y] = samples[s];
    const FDModule rx = res(x), ry = res(y);
    const HomologyDims ea = ext_from(*cache_a.get(x, top + 1), y, top);
    const HomologyDims eb = ext_from(*cache_b.get(rx, top + 1), ry, top);
    for (int i = t_star + 1; i <= top; ++i) {
      if (ea.dims[i] < 0 || eb.dims[i] < 0)
        return Verdict::inconclusive("ehi", {{"sample", s}, {"degree", i}, {"t_star", t_star}});
      if (ea.dims[i] != eb.dims[i])
        return Verdict::refuted("ehi", {{"sample", s}, {"degree", i}, {"dim_big", ea.dims[i]}, {"dim_small", eb.dims[i]},
                                        {"t_star", t_star}});
    }
  }
  return Verdict::certified("ehi", {{"t_star", t_star}, {"window", window}, {"samples", samples.size()}});
}

}  // namespace homex

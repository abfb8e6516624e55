#include "homex/module.hpp"

#include <algorithm>
#include <deque>
#include <random>

#include "homex/errors.hpp"

namespace homex {

namespace {


Mat diag_projection(const std::vector<int>& vertex_of, int v, Field f) {
  Mat m(vertex_of.size(), vertex_of.size(), f);
  for (std::size_t i = 0; i < vertex_of.size(); ++i)
    if (vertex_of[i] == v) m(i, i) = one_in(f);
  return m;
}

// sum_k c_k rho(k) for a sparse coefficient vector.
Mat combine(const std::vector<Mat>& actions, const SparseVec& s, std::size_t d, Field f) {
  Mat out(d, d, f);
  for (const auto& [k, c] : s) out.add_scaled(c, actions[k]);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction and validation

FDModule FDModule::make(AlgPtr alg, std::vector<int> vertex_of, std::vector<Mat> actions, Check c) {
  if (!alg) throw HomexError(ErrorCode::InvalidModule, "module without an algebra");
  FDModule m;
  auto d = std::make_shared<Data>();
  d->alg = std::move(alg);
  d->vertex_of = std::move(vertex_of);
  d->actions = std::move(actions);
  d->by_vertex.assign(d->alg->vertex_count(), {});
  for (std::size_t i = 0; i < d->vertex_of.size(); ++i) {
    const int v = d->vertex_of[i];
    if (v < 0 || v >= d->alg->vertex_count())
      throw HomexError(ErrorCode::InvalidModule, "basis vector " + std::to_string(i) + " has no vertex");
    d->by_vertex[v].push_back(static_cast<int>(i));
  }
  m.d_ = std::move(d);
#ifndef NDEBUG
  if (c == Check::Generators) c = Check::Full;
#endif
  m.check(c);
  return m;
}

FDModule FDModule::zero(AlgPtr alg) {
  std::vector<Mat> acts(alg->dim(), Mat(0, 0, alg->field()));
  return make(std::move(alg), {}, std::move(acts), Check::None);
}

void FDModule::check(Check c) const {
  const auto& a = *d_->alg;
  const std::size_t n = dim();
  const Field f = a.field();
  if (d_->actions.size() != static_cast<std::size_t>(a.dim()))
    throw HomexError(ErrorCode::InvalidModule, "need one action matrix per algebra basis element");
  for (const auto& m : d_->actions)
    if (m.rows() != n || m.cols() != n) throw HomexError(ErrorCode::DimensionMismatch, "action matrix has the wrong size");
  if (c == Check::None) return;
  for (int v = 0; v < a.vertex_count(); ++v)
    if (d_->actions[a.idempotent_index(v)] != diag_projection(d_->vertex_of, v, f))
      throw HomexError(ErrorCode::InvalidModule, "idempotent e_" + a.vertex_name(v) + " does not act as the vertex projection",
                       {{"vertex", a.vertex_name(v)}});
  for (int b = 0; b < a.dim(); ++b) {
    const Mat& m = d_->actions[b];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!m(i, j).is_zero() && (d_->vertex_of[i] != a.left_vertex(b) || d_->vertex_of[j] != a.right_vertex(b)))
          throw HomexError(ErrorCode::InvalidModule, "action of '" + a.label(b) + "' leaves its Peirce block",
                           {{"element", a.label(b)}});
  }
  std::vector<int> firsts;
  if (c == Check::Full) {
    for (int b = 0; b < a.dim(); ++b) firsts.push_back(b);
  } else {
    firsts = a.arrow_generators();
  }
  for (int g : firsts)
    for (int b = 0; b < a.dim(); ++b) {
      const SparseVec& p = a.product(g, b);
      Mat lhs = d_->actions[g] * d_->actions[b];
      if (lhs != combine(d_->actions, p, n, f))
        throw HomexError(ErrorCode::InvalidModule, "action does not respect " + a.label(g) + " * " + a.label(b),
                         {{"pair", {a.label(g), a.label(b)}}});
    }
}

void FDModule::validate() const { check(Check::Full); }

FDModule FDModule::from_generator_actions(AlgPtr alg, std::vector<int> vertex_of, const std::map<int, Mat>& gens) {
  const auto& a = *alg;
  const int n = a.dim();
  const std::size_t d = vertex_of.size();
  const Field f = a.field();
  std::vector<std::optional<Mat>> known(n);
  std::deque<int> fresh;
  for (int v = 0; v < a.vertex_count(); ++v) {
    known[a.idempotent_index(v)] = diag_projection(vertex_of, v, f);
    fresh.push_back(a.idempotent_index(v));
  }
  for (const auto& [g, m] : gens) {
    if (g < 0 || g >= n) throw HomexError(ErrorCode::InvalidModule, "generator index out of range");
    if (m.rows() != d || m.cols() != d) throw HomexError(ErrorCode::DimensionMismatch, "generator action has the wrong size");
    if (!known[g]) fresh.push_back(g);
    known[g] = m;
  }
  for (int g : a.arrow_generators())
    if (!known[g]) throw HomexError(ErrorCode::InvalidModule, "no action given for generator '" + a.label(g) + "'");

  // Pending linear equations sum_k coef_k X_k = rhs over unknown actions X_k.
  struct Eq {
    std::map<int, Scalar> coef;
    Mat rhs;
  };
  std::vector<Eq> pending;
  auto substitute = [&](Eq& e) {
    for (auto it = e.coef.begin(); it != e.coef.end();) {
      if (known[it->first]) {
        e.rhs.add_scaled(-it->second, *known[it->first]);
        it = e.coef.erase(it);
      } else {
        ++it;
      }
    }
  };
  auto solve_single = [&](Eq& e) {
    const auto [k, c] = *e.coef.begin();
    Mat x = e.rhs;
    x *= c.inverse();
    known[k] = std::move(x);
    fresh.push_back(k);
  };
  int unknown = 0;
  for (int b = 0; b < n; ++b) unknown += !known[b];
  while (unknown > 0) {
    while (!fresh.empty()) {
      const int b = fresh.front();
      fresh.pop_front();
      for (int g : a.arrow_generators()) {
        const SparseVec& p = a.product(g, b);
        bool open = false;
        for (const auto& [k, c] : p) open = open || !known[k];
        if (!open) continue;
        Eq e{{}, *known[g] * *known[b]};
        for (const auto& [k, c] : p) e.coef[k] = c;
        pending.push_back(std::move(e));
      }
      std::vector<Eq> still;
      for (auto& e : pending) {
        substitute(e);
        if (e.coef.size() == 1 && !known[e.coef.begin()->first]) {
          solve_single(e);
          --unknown;
        } else if (!e.coef.empty()) {
          still.push_back(std::move(e));
        }
      }
      pending = std::move(still);
    }
    if (unknown == 0) break;
    // Gaussian elimination on the remaining system.
    std::vector<Eq> rows;
    for (auto& e : pending) {
      substitute(e);
      for (auto& r : rows) {
        const int p = r.coef.begin()->first;
        auto it = e.coef.find(p);
        if (it == e.coef.end()) continue;
        const Scalar c = it->second;
        for (const auto& [k, x] : r.coef) {
          e.coef[k] -= c * x;
          if (e.coef[k].is_zero()) e.coef.erase(k);
        }
        e.rhs.add_scaled(-c, r.rhs);
      }
      if (e.coef.empty()) continue;
      const Scalar inv = e.coef.begin()->second.inverse();
      for (auto& [k, x] : e.coef) x *= inv;
      e.rhs *= inv;
      rows.push_back(std::move(e));
    }
    bool progress = false;
    for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
      substitute(*it);
      if (it->coef.size() == 1 && !known[it->coef.begin()->first]) {
        solve_single(*it);
        --unknown;
        progress = true;
      }
    }
    pending = std::move(rows);
    if (!progress && fresh.empty())
      throw HomexError(ErrorCode::InvalidModule, "generator actions do not determine the module");
  }
  std::vector<Mat> acts;
  acts.reserve(n);
  for (auto& k : known) acts.push_back(std::move(*k));
  return make(std::move(alg), std::move(vertex_of), std::move(acts));
}

FDModule FDModule::from_representation(AlgPtr alg, std::vector<int> vertex_of, const std::vector<Mat>& arrows) {
  const auto& pb = alg->path_basis();
  if (!pb) throw HomexError(ErrorCode::InvalidModule, "representations need a path algebra");
  std::map<int, Mat> gens;
  for (int b = 0; b < alg->dim(); ++b) {
    const Path& p = pb->paths[b];
    if (p.length() != 1) continue;
    const int arrow = p.arrows[0];
    if (arrow >= static_cast<int>(arrows.size()))
      throw HomexError(ErrorCode::InvalidModule, "missing matrix for an arrow");
    gens[b] = arrows[arrow];
  }
  return from_generator_actions(std::move(alg), std::move(vertex_of), gens);
}

std::vector<int> FDModule::dim_vector() const {
  std::vector<int> v(d_->alg->vertex_count(), 0);
  for (int x : d_->vertex_of) ++v[x];
  return v;
}

Mat FDModule::act(const Vec& x) const {
  Mat out(dim(), dim(), field());
  for (int b = 0; b < static_cast<int>(x.size()); ++b)
    if (!x[b].is_zero()) out.add_scaled(x[b], d_->actions[b]);
  return out;
}

nlohmann::json mat_to_json(const Mat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    nlohmann::json r = nlohmann::json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j).to_string());
    rows.push_back(r);
  }
  return rows;
}

Mat mat_from_json(const nlohmann::json& j, Field f) {
  std::vector<Vec> rows;
  std::size_t cols = 0;
  for (const auto& r : j) {
    Vec v;
    for (const auto& x : r) v.push_back((x.is_string() ? Scalar::parse(x.get<std::string>()) : Scalar(x.get<long long>())).in_field(f));
    cols = v.size();
    rows.push_back(v);
  }
  return Mat::from_rows(rows, cols, f);
}

nlohmann::json FDModule::to_json() const {
  const auto& a = *d_->alg;
  nlohmann::json j;
  j["dim"] = dim();
  nlohmann::json verts = nlohmann::json::array();
  for (int v : d_->vertex_of) verts.push_back(a.vertex_name(v));
  j["vertices"] = verts;
  nlohmann::json gens = nlohmann::json::object();
  for (int g : a.arrow_generators()) gens[a.label(g)] = mat_to_json(d_->actions[g]);
  j["generators"] = gens;
  return j;
}

bool is_homomorphism(const FDModule& m, const FDModule& n, const Mat& f) {
  if (f.rows() != static_cast<std::size_t>(n.dim()) || f.cols() != static_cast<std::size_t>(m.dim())) return false;
  const auto& a = *m.algebra();
  for (int v = 0; v < a.vertex_count(); ++v)
    if (n.action(a.idempotent_index(v)) * f != f * m.action(a.idempotent_index(v))) return false;
  for (int g : a.arrow_generators())
    if (n.action(g) * f != f * m.action(g)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Standard modules

FDModule regular_module(const AlgPtr& a) {
  std::vector<int> verts;
  std::vector<Mat> acts;
  for (int x = 0; x < a->dim(); ++x) verts.push_back(a->left_vertex(x));
  for (int b = 0; b < a->dim(); ++b) acts.push_back(a->left_mult_matrix(b));
  return FDModule::make(a, std::move(verts), std::move(acts));
}

FDModule projective_module(const AlgPtr& a, int v) {
  const auto& basis = a->left_projective_basis(v);
  std::vector<int> pos(a->dim(), -1);
  for (std::size_t i = 0; i < basis.size(); ++i) pos[basis[i]] = static_cast<int>(i);
  std::vector<int> verts;
  for (int x : basis) verts.push_back(a->left_vertex(x));
  std::vector<Mat> acts;
  for (int b = 0; b < a->dim(); ++b) {
    Mat m(basis.size(), basis.size(), a->field());
    for (std::size_t j = 0; j < basis.size(); ++j)
      for (const auto& [k, c] : a->product(b, basis[j])) m(pos[k], j) = c;
    acts.push_back(std::move(m));
  }
  return FDModule::make(a, std::move(verts), std::move(acts));
}

FDModule simple_module(const AlgPtr& a, int v) {
  std::vector<Mat> acts;
  for (int b = 0; b < a->dim(); ++b) {
    Mat m(1, 1, a->field());
    if (b == a->idempotent_index(v)) m(0, 0) = one_in(a->field());
    acts.push_back(std::move(m));
  }
  return FDModule::make(a, {v}, std::move(acts));
}

std::vector<FDModule> projective_indecomposables(const AlgPtr& a) {
  std::vector<FDModule> out;
  for (int v = 0; v < a->vertex_count(); ++v) out.push_back(projective_module(a, v));
  return out;
}

std::vector<FDModule> simple_modules(const AlgPtr& a) {
  std::vector<FDModule> out;
  for (int v = 0; v < a->vertex_count(); ++v) out.push_back(simple_module(a, v));
  return out;
}

FDModule dual_module(const FDModule& m) {
  std::vector<Mat> acts;
  acts.reserve(m.actions().size());
  for (const auto& x : m.actions()) acts.push_back(x.transpose());
  return FDModule::make(opposite(m.algebra()), m.vertices(), std::move(acts), FDModule::Check::None);
}

FDModule injective_module(const AlgPtr& a, int v) { return dual_module(projective_module(opposite(a), v)); }

FDModule direct_sum(const FDModule& a, const FDModule& b) {
  require_same_algebra(a.algebra(), b.algebra(), "direct_sum");
  std::vector<int> verts = a.vertices();
  verts.insert(verts.end(), b.vertices().begin(), b.vertices().end());
  std::vector<Mat> acts;
  for (std::size_t k = 0; k < a.actions().size(); ++k) acts.push_back(homex::direct_sum(a.action(k), b.action(k)));
  return FDModule::make(a.algebra(), std::move(verts), std::move(acts), FDModule::Check::None);
}

FDModule direct_sum(const std::vector<FDModule>& parts, const AlgPtr& alg) {
  FDModule out = FDModule::zero(alg);
  for (const auto& p : parts) out = direct_sum(out, p);
  return out;
}

FDModule power(const FDModule& m, int copies) {
  std::vector<FDModule> parts(copies, m);
  return direct_sum(parts, m.algebra());
}

// ---------------------------------------------------------------------------
// Submodules and quotients

Submodule submodule_from_span(const FDModule& m, const std::vector<Vec>& span) {
  const Field f = m.field();
  const std::size_t d = m.dim();
  Subspace s = span_of(span, d, f);
  Mat incl(d, s.dim(), f);
  std::vector<int> verts;
  for (std::size_t j = 0; j < s.dim(); ++j) {
    incl.set_column(j, s.basis()[j]);
    verts.push_back(m.vertex_of(static_cast<int>(s.pivots()[j])));
  }
  std::vector<Mat> acts;
  acts.reserve(m.actions().size());
  for (const auto& x : m.actions()) {
    Mat r(s.dim(), s.dim(), f);
    if (!x.is_zero()) {
      Mat img = x * incl;
      for (std::size_t j = 0; j < s.dim(); ++j) {
        const Vec col = img.column(j);
        if (is_zero(col)) continue;
        if (!s.contains(col)) throw HomexError(ErrorCode::InvalidModule, "span is not closed under the action");
        r.set_column(j, s.coordinates(col));
      }
    }
    acts.push_back(std::move(r));
  }
  return {FDModule::make(m.algebra(), std::move(verts), std::move(acts)), std::move(incl)};
}

Submodule generated_submodule(const FDModule& m, const std::vector<Vec>& gens) {
  const auto& a = *m.algebra();
  const Field f = m.field();
  Subspace s(m.dim(), f);
  std::deque<Vec> todo;
  auto push = [&](const Vec& v) {
    if (s.insert(v)) todo.push_back(v);
  };
  for (const auto& g : gens)
    for (int v = 0; v < a.vertex_count(); ++v) {
      Vec part = m.action(a.idempotent_index(v)).apply(g);
      if (!is_zero(part)) push(part);
    }
  while (!todo.empty()) {
    Vec x = std::move(todo.front());
    todo.pop_front();
    for (int g : a.arrow_generators()) {
      Vec y = m.action(g).apply(x);
      if (!is_zero(y)) push(y);
    }
  }
  return submodule_from_span(m, s.basis());
}

Quotient quotient_module(const FDModule& m, const std::vector<Vec>& sub_span) {
  const Field f = m.field();
  const std::size_t d = m.dim();
  Subspace s = span_of(sub_span, d, f);
  std::vector<char> piv(d, 0);
  for (auto p : s.pivots()) piv[p] = 1;
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < d; ++i)
    if (!piv[i]) keep.push_back(i);
  Mat proj(keep.size(), d, f), sec(d, keep.size(), f);
  for (std::size_t j = 0; j < d; ++j) {
    const Vec r = s.reduce(unit_vec(d, j, f));
    for (std::size_t i = 0; i < keep.size(); ++i) proj(i, j) = r[keep[i]];
  }
  std::vector<int> verts;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    sec(keep[i], i) = one_in(f);
    verts.push_back(m.vertex_of(static_cast<int>(keep[i])));
  }
  std::vector<Mat> acts;
  acts.reserve(m.actions().size());
  for (const auto& x : m.actions()) acts.push_back(x.is_zero() ? Mat(keep.size(), keep.size(), f) : proj * (x * sec));
  return {FDModule::make(m.algebra(), std::move(verts), std::move(acts)), std::move(proj), std::move(sec)};
}

namespace {

std::vector<Vec> radical_span(const FDModule& m) {
  std::vector<Vec> out;
  for (int g : m.algebra()->arrow_generators()) {
    const Mat& x = m.action(g);
    for (std::size_t j = 0; j < x.cols(); ++j) {
      Vec c = x.column(j);
      if (!is_zero(c)) out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace

TopRadical top_and_radical(const FDModule& m) {
  const auto span = radical_span(m);
  return {submodule_from_span(m, span), quotient_module(m, span)};
}

std::vector<int> top_vector(const FDModule& m) {
  Subspace rad = span_of(radical_span(m), m.dim(), m.field());
  std::vector<int> out = m.dim_vector();
  for (auto p : rad.pivots()) --out[m.vertex_of(static_cast<int>(p))];
  return out;
}

// ---------------------------------------------------------------------------
// Hom spaces

std::vector<Mat> hom_space(const FDModule& m, const FDModule& n) {
  require_same_algebra(m.algebra(), n.algebra(), "hom_space");
  const auto& a = *m.algebra();
  const Field f = m.field();
  const int nv = a.vertex_count();
  // Unknown (i, j): entry f(i, j) with i in e_v N, j in e_v M.
  std::vector<int> block_start(nv + 1, 0);
  for (int v = 0; v < nv; ++v)
    block_start[v + 1] = block_start[v] + static_cast<int>(n.basis_at(v).size() * m.basis_at(v).size());
  const int unknowns = block_start[nv];
  if (unknowns == 0) return {};
  std::vector<int> pos_m(m.dim()), pos_n(n.dim());
  for (int v = 0; v < nv; ++v) {
    for (std::size_t i = 0; i < m.basis_at(v).size(); ++i) pos_m[m.basis_at(v)[i]] = static_cast<int>(i);
    for (std::size_t i = 0; i < n.basis_at(v).size(); ++i) pos_n[n.basis_at(v)[i]] = static_cast<int>(i);
  }
  auto var = [&](int i, int j) {
    const int v = n.vertex_of(i);
    return block_start[v] + pos_n[i] * static_cast<int>(m.basis_at(v).size()) + pos_m[j];
  };
  std::vector<Vec> rows;
  for (int g : a.arrow_generators()) {
    const int l = a.left_vertex(g), r = a.right_vertex(g);
    const Mat& gm = m.action(g);
    const Mat& gn = n.action(g);
    // (gn f - f gm)(i, j) for i in e_l N, j in e_r M.
    for (int i : n.basis_at(l))
      for (int j : m.basis_at(r)) {
        Vec row = zero_vec(unknowns, f);
        bool any = false;
        for (int k : n.basis_at(r))
          if (!gn(i, k).is_zero()) {
            row[var(k, j)] += gn(i, k);
            any = true;
          }
        for (int k : m.basis_at(l))
          if (!gm(k, j).is_zero()) {
            row[var(i, k)] -= gm(k, j);
            any = true;
          }
        if (any) rows.push_back(std::move(row));
      }
  }
  Mat sys = Mat::from_rows(rows, unknowns, f);
  Mat ker = rows.empty() ? Mat::identity(unknowns, f) : kernel_basis(sys);
  std::vector<Mat> out;
  for (std::size_t c = 0; c < ker.cols(); ++c) {
    Mat h(n.dim(), m.dim(), f);
    for (int v = 0; v < nv; ++v)
      for (int i : n.basis_at(v))
        for (int j : m.basis_at(v)) h(i, j) = ker(var(i, j), c);
    out.push_back(std::move(h));
  }
  return out;
}

int hom_dim(const FDModule& m, const FDModule& n) { return static_cast<int>(hom_space(m, n).size()); }

// ---------------------------------------------------------------------------
// Covers, restriction, isomorphism, stripping

ProjectiveCover projective_cover(const FDModule& m) {
  const AlgPtr& a = m.algebra();
  const Field f = m.field();
  Subspace rad = span_of(radical_span(m), m.dim(), f);
  std::vector<int> tops, summands;
  for (int v = 0; v < a->vertex_count(); ++v)
    for (int i : m.basis_at(v))
      if (rad.insert(unit_vec(m.dim(), i, f))) {
        tops.push_back(i);
        summands.push_back(v);
      }
  std::vector<FDModule> parts;
  std::vector<Vec> cols;
  std::vector<std::size_t> idem_pos;
  for (std::size_t k = 0; k < tops.size(); ++k) {
    parts.push_back(projective_module(a, summands[k]));
    for (int b : a->left_projective_basis(summands[k])) {
      if (a->is_idempotent_basis(b)) idem_pos.push_back(cols.size());
      cols.push_back(m.action(b).column(tops[k]));
    }
  }
  ProjectiveCover pc;
  pc.projective = direct_sum(parts, a);
  pc.summands = summands;
  pc.cover = Mat::from_columns(cols, m.dim(), f);
  pc.kernel = cols.empty() ? Mat(0, 0, f) : kernel_basis(pc.cover);
  pc.minimal = true;
  for (std::size_t c = 0; c < pc.kernel.cols(); ++c)
    for (auto p : idem_pos)
      if (!pc.kernel(p, c).is_zero()) pc.minimal = false;
  return pc;
}

Restriction adapt_module(const AlgPtr& b, std::vector<Mat> raw) {
  if (raw.size() != static_cast<std::size_t>(b->dim()))
    throw HomexError(ErrorCode::InvalidModule, "need one action matrix per basis element");
  const Field f = b->field();
  const std::size_t d = raw.empty() ? 0 : raw[0].rows();
  // Rebase along the images of the idempotents.
  std::vector<Vec> cols;
  std::vector<int> verts;
  for (int v = 0; v < b->vertex_count(); ++v) {
    const Mat& e = raw[b->idempotent_index(v)];
    bool diagonal = true;
    for (std::size_t i = 0; i < d && diagonal; ++i)
      for (std::size_t j = 0; j < d && diagonal; ++j)
        if (i != j && !e(i, j).is_zero()) diagonal = false;
    if (diagonal) {
      for (std::size_t i = 0; i < d; ++i)
        if (!e(i, i).is_zero()) {
          cols.push_back(unit_vec(d, i, f));
          verts.push_back(v);
        }
    } else {
      Mat cs = column_space(e);
      for (std::size_t j = 0; j < cs.cols(); ++j) {
        cols.push_back(cs.column(j));
        verts.push_back(v);
      }
    }
  }
  if (cols.size() != d) throw HomexError(ErrorCode::NotUnital, "the unit does not act as the identity");
  Mat P = Mat::from_columns(cols, d, f);
  auto Pinv = inverse(P);
  if (!Pinv) throw HomexError(ErrorCode::NotUnital, "images of the idempotents are not complementary");
  std::vector<Mat> acts;
  for (auto& x : raw) acts.push_back(x.is_zero() ? Mat(d, d, f) : *Pinv * (x * P));
  return {FDModule::make(b, std::move(verts), std::move(acts)), std::move(P)};
}

Restriction restrict_scalars(const FDModule& m, const AlgPtr& b, const Mat& phi) {
  const AlgPtr& a = m.algebra();
  if (phi.rows() != static_cast<std::size_t>(a->dim()) || phi.cols() != static_cast<std::size_t>(b->dim()))
    throw HomexError(ErrorCode::DimensionMismatch, "restriction map has the wrong shape");
  std::vector<Mat> raw;
  for (int x = 0; x < b->dim(); ++x) raw.push_back(m.act(phi.column(x)));
  return adapt_module(b, std::move(raw));
}

FDModule retarget(const FDModule& m, const AlgPtr& alg) {
  require_same_algebra(m.algebra(), alg, "retarget");
  if (m.algebra() == alg) return m;
  return FDModule::make(alg, m.vertices(), m.actions(), FDModule::Check::None);
}

Verdict random_iso_test(const FDModule& m, const FDModule& n, int trials, std::uint64_t seed) {
  require_same_algebra(m.algebra(), n.algebra(), "random_iso_test");
  const Field f = m.field();
  if (m.dim_vector() != n.dim_vector())
    return Verdict::refuted("isomorphism",
                            {{"reason", "dimension vectors differ"}, {"left", m.dim_vector()}, {"right", n.dim_vector()}});
  const auto homs = hom_space(m, n);
  const int end = hom_dim(m, m);
  if (static_cast<int>(homs.size()) != end)
    return Verdict::refuted("isomorphism",
                            {{"reason", "dim Hom(M,N) differs from dim End(M)"}, {"hom", homs.size()}, {"end", end}});
  if (m.dim() == 0) return Verdict::certified("isomorphism", {{"matrix", nlohmann::json::array()}});
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const int range = 1 + t;
    std::uniform_int_distribution<int> coeff(-range, range);
    Mat h(n.dim(), m.dim(), f);
    for (const auto& b : homs) {
      const Scalar c = Scalar(coeff(rng)).in_field(f);
      if (!c.is_zero()) h.add_scaled(c, b);
    }
    if (rank(h) == static_cast<std::size_t>(m.dim()) && is_homomorphism(m, n, h))
      return Verdict::certified("isomorphism", {{"matrix", mat_to_json(h)}, {"trial", t}});
  }
  return Verdict::inconclusive("isomorphism", {{"trials", trials}, {"hom_dim", homs.size()}});
}

Mat iso_witness(const Verdict& v, Field f) { return mat_from_json(v.witness.at("matrix"), f); }

Stripped strip_projective_summands(const FDModule& m) {
  const AlgPtr& a = m.algebra();
  Stripped out{m, {}};
  bool changed = true;
  while (changed && out.core.dim() > 0) {
    changed = false;
    const auto tv = top_vector(out.core);
    const auto dv = out.core.dim_vector();
    for (int v = 0; v < a->vertex_count() && !changed; ++v) {
      if (tv[v] == 0) continue;
      FDModule p = projective_module(a, v);
      const auto pv = p.dim_vector();
      bool fits = true;
      for (std::size_t w = 0; w < pv.size(); ++w) fits = fits && pv[w] <= dv[w];
      if (!fits) continue;
      const auto& pb = a->left_projective_basis(v);
      const int idem = static_cast<int>(std::find(pb.begin(), pb.end(), a->idempotent_index(v)) - pb.begin());
      // f: M -> P splits iff f(y) has a nonzero e_v coordinate for some y in e_v M.
      for (const auto& h : hom_space(out.core, p)) {
        bool split = false;
        for (int y : out.core.basis_at(v))
          if (!h(idem, y).is_zero()) split = true;
        if (!split) continue;
        Mat ker = kernel_basis(h);
        std::vector<Vec> span;
        for (std::size_t c = 0; c < ker.cols(); ++c) span.push_back(ker.column(c));
        out.core = submodule_from_span(out.core, span).module;
        out.stripped.push_back(v);
        changed = true;
        break;
      }
    }
  }
  return out;
}

}  // namespace homex

#include "homex/bimodule.hpp"

#include "homex/errors.hpp"

namespace homex {

std::pair<AlgPtr, AlgPtr> bimodule_sides(const FDModule& w) {
  const auto& tf = w.algebra()->tensor_factors();
  if (!tf) throw HomexError(ErrorCode::AlgebraMismatch, "module is not over a tensor product algebra");
  return {tf->first, opposite(tf->second)};
}

bool is_bimodule(const FDModule& w) { return w.algebra()->tensor_factors().has_value(); }

FDModule bimodule_from_actions(const AlgPtr& l, const AlgPtr& r, std::vector<int> vertex_of, const std::vector<Mat>& left,
                               const std::vector<Mat>& right) {
  if (left.size() != static_cast<std::size_t>(l->dim()) || right.size() != static_cast<std::size_t>(r->dim()))
    throw HomexError(ErrorCode::InvalidModule, "need one action matrix per basis element on each side");
  AlgPtr env = tensor_algebra(l, opposite(r));
  std::vector<Mat> acts;
  acts.reserve(env->dim());
  for (int x = 0; x < l->dim(); ++x)
    for (int y = 0; y < r->dim(); ++y) acts.push_back(left[x] * right[y]);
  return FDModule::make(env, std::move(vertex_of), std::move(acts));
}

FDModule left_part(const FDModule& w) {
  const auto [l, r] = bimodule_sides(w);
  const int nr = r->dim();
  std::vector<Mat> acts;
  for (int x = 0; x < l->dim(); ++x) {
    Mat m(w.dim(), w.dim(), w.field());
    for (int t = 0; t < r->vertex_count(); ++t) m += w.action(x * nr + r->idempotent_index(t));
    acts.push_back(std::move(m));
  }
  std::vector<int> verts;
  for (int v : w.vertices()) verts.push_back(v / r->vertex_count());
  return FDModule::make(l, std::move(verts), std::move(acts), FDModule::Check::None);
}

FDModule right_part(const FDModule& w) {
  const auto [l, r] = bimodule_sides(w);
  const AlgPtr rop = w.algebra()->tensor_factors()->second;
  const int nr = r->dim();
  std::vector<Mat> acts;
  for (int y = 0; y < nr; ++y) {
    Mat m(w.dim(), w.dim(), w.field());
    for (int s = 0; s < l->vertex_count(); ++s) m += w.action(l->idempotent_index(s) * nr + y);
    acts.push_back(std::move(m));
  }
  std::vector<int> verts;
  for (int v : w.vertices()) verts.push_back(v % r->vertex_count());
  return FDModule::make(rop, std::move(verts), std::move(acts), FDModule::Check::None);
}

FDModule outer_product(const FDModule& m, const FDModule& n) {
  AlgPtr env = tensor_algebra(m.algebra(), n.algebra());
  const int nn = n.algebra()->dim();
  const int nv = n.algebra()->vertex_count();
  std::vector<Mat> acts;
  acts.reserve(env->dim());
  for (int x = 0; x < m.algebra()->dim(); ++x)
    for (int y = 0; y < nn; ++y) acts.push_back(kronecker(m.action(x), n.action(y)));
  std::vector<int> verts;
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < n.dim(); ++j) verts.push_back(m.vertex_of(i) * nv + n.vertex_of(j));
  return FDModule::make(env, std::move(verts), std::move(acts));
}

FDModule regular_bimodule(const AlgPtr& a) {
  std::vector<Mat> left, right;
  for (int x = 0; x < a->dim(); ++x) {
    left.push_back(a->left_mult_matrix(x));
    right.push_back(a->right_mult_matrix(x));
  }
  std::vector<int> verts;
  for (int z = 0; z < a->dim(); ++z) verts.push_back(a->left_vertex(z) * a->vertex_count() + a->right_vertex(z));
  return bimodule_from_actions(a, a, std::move(verts), left, right);
}

FDModule as_left_bimodule(const FDModule& m) {
  AlgPtr env = tensor_algebra(m.algebra(), opposite(ground_algebra(m.field())));
  return FDModule::make(env, m.vertices(), m.actions(), FDModule::Check::None);
}

FDModule as_right_bimodule(const FDModule& m) {
  AlgPtr env = tensor_algebra(ground_algebra(m.field()), m.algebra());
  return FDModule::make(env, m.vertices(), m.actions(), FDModule::Check::None);
}

FDModule from_left_bimodule(const FDModule& w) {
  const auto& tf = w.algebra()->tensor_factors();
  if (!tf || tf->second->dim() != 1) throw HomexError(ErrorCode::AlgebraMismatch, "not a B-k bimodule");
  return FDModule::make(tf->first, w.vertices(), w.actions(), FDModule::Check::None);
}

FDModule from_right_bimodule(const FDModule& w) {
  const auto& tf = w.algebra()->tensor_factors();
  if (!tf || tf->first->dim() != 1) throw HomexError(ErrorCode::AlgebraMismatch, "not a k-B bimodule");
  return FDModule::make(tf->second, w.vertices(), w.actions(), FDModule::Check::None);
}

RebasedBimodule adapt_bimodule(const AlgPtr& l, const AlgPtr& r, std::vector<Mat> left, std::vector<Mat> right) {
  if (left.size() != static_cast<std::size_t>(l->dim()) || right.size() != static_cast<std::size_t>(r->dim()))
    throw HomexError(ErrorCode::InvalidModule, "need one action matrix per basis element on each side");
  const Field f = l->field();
  const std::size_t d = left.empty() ? 0 : left[0].rows();
  std::vector<Vec> cols;
  std::vector<int> verts;
  for (int s = 0; s < l->vertex_count(); ++s)
    for (int t = 0; t < r->vertex_count(); ++t) {
      Mat e = left[l->idempotent_index(s)] * right[r->idempotent_index(t)];
      if (e.is_zero()) continue;
      Mat cs = column_space(e);
      for (std::size_t j = 0; j < cs.cols(); ++j) {
        cols.push_back(cs.column(j));
        verts.push_back(s * r->vertex_count() + t);
      }
    }
  if (cols.size() != d) throw HomexError(ErrorCode::NotUnital, "the unit does not act as the identity");
  Mat P = Mat::from_columns(cols, d, f);
  auto Pinv = inverse(P);
  if (!Pinv) throw HomexError(ErrorCode::NotUnital, "idempotent images are not complementary");
  for (auto& m : left) m = *Pinv * (m * P);
  for (auto& m : right) m = *Pinv * (m * P);
  return {bimodule_from_actions(l, r, std::move(verts), left, right), std::move(P)};
}

RebasedBimodule restrict_bimodule_rebased(const FDModule& w, const AlgPtr& l2, const Mat& phi_l, const AlgPtr& r2,
                                          const Mat& phi_r) {
  const FDModule lp = left_part(w), rp = right_part(w);
  std::vector<Mat> left, right;
  for (int x = 0; x < l2->dim(); ++x) left.push_back(lp.act(phi_l.column(x)));
  for (int y = 0; y < r2->dim(); ++y) right.push_back(rp.act(phi_r.column(y)));
  return adapt_bimodule(l2, r2, std::move(left), std::move(right));
}

FDModule restrict_bimodule(const FDModule& w, const AlgPtr& l2, const Mat& phi_l, const AlgPtr& r2, const Mat& phi_r) {
  return restrict_bimodule_rebased(w, l2, phi_l, r2, phi_r).module;
}

// ---------------------------------------------------------------------------
// Tensor products over the middle algebra

TensorProduct::TensorProduct(const FDModule& x, const FDModule& y) : x_(x), y_(y) {
  const auto [c, b1] = bimodule_sides(x);
  const auto [b2, dd] = bimodule_sides(y);
  require_same_algebra(b1, b2, "tensor_over");
  const AlgPtr& b = b2;
  const AlgPtr dop = y.algebra()->tensor_factors()->second;
  const Field f = x.field();
  const int nb = b->vertex_count(), nd = dd->vertex_count(), nc = c->vertex_count();
  const int dx = x.dim(), dy = y.dim();

  blocks_.assign(static_cast<std::size_t>(nc) * nd, {});
  where_.assign(static_cast<std::size_t>(dx) * dy, {-1, -1});
  for (int i = 0; i < dx; ++i)
    for (int j = 0; j < dy; ++j) {
      if (x.vertex_of(i) % nb != y.vertex_of(j) / nd) continue;
      const int blk = (x.vertex_of(i) / nb) * nd + y.vertex_of(j) % nd;
      where_[static_cast<std::size_t>(i) * dy + j] = {blk, static_cast<int>(blocks_[blk].pairs.size())};
      blocks_[blk].pairs.emplace_back(i, j);
    }
  for (auto& blk : blocks_) blk.relations = Subspace(blk.pairs.size(), f);

  const FDModule xr = right_part(x);  // over opposite(B)
  const FDModule yl = left_part(y);   // over B
  for (int g : b->arrow_generators()) {
    const int p = b->left_vertex(g), q = b->right_vertex(g);
    const Mat& rg = xr.action(g);  // x -> x g, maps X e_p to X e_q
    const Mat& lg = yl.action(g);  // y -> g y, maps e_q Y to e_p Y
    for (int i = 0; i < dx; ++i) {
      if (x.vertex_of(i) % nb != p) continue;
      for (int j = 0; j < dy; ++j) {
        if (y.vertex_of(j) / nd != q) continue;
        const int blk = (x.vertex_of(i) / nb) * nd + y.vertex_of(j) % nd;
        Vec rel = zero_vec(blocks_[blk].pairs.size(), f);
        bool any = false;
        for (int k = 0; k < dx; ++k)
          if (!rg(k, i).is_zero()) {
            rel[where_[static_cast<std::size_t>(k) * dy + j].second] += rg(k, i);
            any = true;
          }
        for (int l = 0; l < dy; ++l)
          if (!lg(l, j).is_zero()) {
            rel[where_[static_cast<std::size_t>(i) * dy + l].second] -= lg(l, j);
            any = true;
          }
        if (any) blocks_[blk].relations.insert(std::move(rel));
      }
    }
  }

  std::vector<int> verts;
  for (std::size_t blk = 0; blk < blocks_.size(); ++blk) {
    auto& B = blocks_[blk];
    std::vector<char> piv(B.pairs.size(), 0);
    for (auto pv : B.relations.pivots()) piv[pv] = 1;
    B.quotient_index.assign(B.pairs.size(), -1);
    for (std::size_t l = 0; l < B.pairs.size(); ++l)
      if (!piv[l]) {
        B.quotient_index[l] = static_cast<int>(basis_pairs_.size());
        basis_pairs_.push_back(B.pairs[l]);
        verts.push_back(static_cast<int>(blk));
      }
  }

  // Outer actions: (c (x) d^op)(x (x) y) = (c x) (x) (y d).
  const FDModule xl = left_part(x);   // over C
  const FDModule yr = right_part(y);  // over opposite(D)
  const int n = static_cast<int>(basis_pairs_.size());
  std::vector<Mat> lacts, racts;
  for (int cc = 0; cc < c->dim(); ++cc) {
    Mat m(n, n, f);
    const Mat& a = xl.action(cc);
    if (!a.is_zero())
      for (int k = 0; k < n; ++k) {
        const auto [i, j] = basis_pairs_[k];
        Vec out = zero_vec(n, f);
        for (int r = 0; r < dx; ++r)
          if (!a(r, i).is_zero()) add_pure(out, r, j, a(r, i));
        m.set_column(k, out);
      }
    lacts.push_back(std::move(m));
  }
  for (int d = 0; d < dd->dim(); ++d) {
    Mat m(n, n, f);
    const Mat& a = yr.action(d);
    if (!a.is_zero())
      for (int k = 0; k < n; ++k) {
        const auto [i, j] = basis_pairs_[k];
        Vec out = zero_vec(n, f);
        for (int r = 0; r < dy; ++r)
          if (!a(r, j).is_zero()) add_pure(out, i, r, a(r, j));
        m.set_column(k, out);
      }
    racts.push_back(std::move(m));
  }
  AlgPtr env = tensor_algebra(c, dop);
  std::vector<Mat> acts;
  acts.reserve(env->dim());
  for (int cc = 0; cc < c->dim(); ++cc)
    for (int d = 0; d < dd->dim(); ++d) acts.push_back(lacts[cc].is_zero() || racts[d].is_zero() ? Mat(n, n, f) : lacts[cc] * racts[d]);
  module_ = FDModule::make(env, std::move(verts), std::move(acts));
}

void TensorProduct::add_pure(Vec& out, int i, int j, const Scalar& c) const {
  const auto [blk, local] = where_[static_cast<std::size_t>(i) * y_.dim() + j];
  if (blk < 0) return;
  const Block& B = blocks_[blk];
  if (B.quotient_index[local] >= 0) {
    out[B.quotient_index[local]] += c;
    return;
  }
  Vec r = B.relations.reduce(unit_vec(B.pairs.size(), local, x_.field()));
  for (std::size_t l = 0; l < r.size(); ++l)
    if (!r[l].is_zero()) out[B.quotient_index[l]] += c * r[l];
}

Vec TensorProduct::pure(const Vec& x, const Vec& y) const {
  Vec out = zero_vec(basis_pairs_.size(), x_.field());
  for (int i = 0; i < x_.dim(); ++i) {
    if (x[i].is_zero()) continue;
    for (int j = 0; j < y_.dim(); ++j)
      if (!y[j].is_zero()) add_pure(out, i, j, x[i] * y[j]);
  }
  return out;
}

Vec TensorProduct::pure_basis(int i, int j) const {
  Vec out = zero_vec(basis_pairs_.size(), x_.field());
  add_pure(out, i, j, Scalar(1).in_field(x_.field()));
  return out;
}

int tensor_dim(const FDModule& right, const FDModule& left) {
  return TensorProduct(as_right_bimodule(right), as_left_bimodule(left)).dim();
}

FDModule tensor_power(const FDModule& m, int j) {
  if (j < 1) throw HomexError(ErrorCode::PreconditionFailed, "tensor_power needs j >= 1");
  FDModule out = m;
  for (int k = 1; k < j; ++k) {
    if (out.is_zero()) return out;
    out = TensorProduct(out, m).module();
  }
  return out;
}

}  // namespace homex

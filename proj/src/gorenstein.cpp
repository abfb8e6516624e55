#include "homex/gorenstein.hpp"

#include "homex/errors.hpp"

namespace homex {

namespace {

Vec flatten(const Mat& m) {
  Vec v;
  v.reserve(m.rows() * m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c)
    for (std::size_t r = 0; r < m.rows(); ++r) v.push_back(m(r, c));
  return v;
}

Verdict injdim_left(const AlgPtr& a, int bound) {
  Verdict v = projective_dimension(dual_module(regular_module(a)), bound);
  v.clause = "injdim_left";
  return v;
}

Verdict injdim_right(const AlgPtr& a, int bound) {
  Verdict v = projective_dimension(dual_module(regular_module(opposite(a))), bound);
  v.clause = "injdim_right";
  return v;
}

bool at_most(const Verdict& v, int bound) { return v.is_certified() && v.value() <= bound; }

// First nonzero entry of dims[1..], or 0.
int first_nonzero(const std::vector<int>& dims) {
  for (std::size_t i = 1; i < dims.size(); ++i)
    if (dims[i] > 0) return static_cast<int>(i);
  return 0;
}

std::vector<int> from_degree_one(const HomologyDims& h) { return {h.dims.begin() + 1, h.dims.end()}; }

}  // namespace

TransposeDual hom_to_regular(const FDModule& x) {
  const AlgPtr& a = x.algebra();
  const AlgPtr op = opposite(a);
  const Field f = x.field();
  std::vector<Mat> homs = hom_space(x, regular_module(a));
  const std::size_t h = homs.size();
  if (h == 0) return {FDModule::zero(op), {}};
  std::vector<Vec> flat;
  for (const auto& g : homs) flat.push_back(flatten(g));
  const Mat basis = Mat::from_columns(flat, flat[0].size(), f);
  std::vector<Mat> raw;
  for (int b = 0; b < a->dim(); ++b) {
    const Mat rb = a->right_mult_matrix(b);
    Mat rhs(flat[0].size(), h, f);
    for (std::size_t j = 0; j < h; ++j) rhs.set_column(j, flatten(rb * homs[j]));
    auto c = solve(basis, rhs);
    if (!c) throw HomexError(ErrorCode::InvalidModule, "Hom(X, A) is not closed under the right action");
    raw.push_back(std::move(*c));
  }
  Restriction r = adapt_module(op, std::move(raw));
  std::vector<Mat> rebased;
  for (std::size_t k = 0; k < h; ++k) {
    Mat g(a->dim(), x.dim(), f);
    for (std::size_t j = 0; j < h; ++j)
      if (!r.basis_change(j, k).is_zero()) g.add_scaled(r.basis_change(j, k), homs[j]);
    rebased.push_back(std::move(g));
  }
  return {r.module, std::move(rebased)};
}

SelfInjectiveDims self_injective_dimensions(const AlgPtr& a, int bound) {
  return {injdim_left(a, bound), injdim_right(a, bound)};
}

Verdict perp_check(const FDModule& x, int bound) {
  if (bound < 1) throw HomexError(ErrorCode::PreconditionFailed, "bound must be at least 1");
  if (x.dim() == 0) return Verdict::certified("perp", {{"reason", "zero module"}});
  const Resolution r = minimal_resolution(x, bound + 1);
  const HomologyDims e = ext_from(r, regular_module(x.algebra()), bound);
  if (const int i = first_nonzero(e.dims)) return Verdict::refuted("perp", {{"i", i}, {"dim", e.dims[i]}});
  const nlohmann::json dims = from_degree_one(e);
  if (r.complete()) return Verdict::certified("perp", {{"reason", "resolution ends"}, {"pd", r.length()}, {"dims", dims}});
  const Verdict inj = injdim_left(x.algebra(), bound);
  if (at_most(inj, bound))
    return Verdict::certified("perp", {{"reason", "injdim"}, {"injdim", inj.value()}, {"dims", dims}});
  return Verdict::inconclusive("perp", {{"bound", bound}, {"bounded_certified", true}, {"dims", dims}});
}

nlohmann::json GpWitness::to_json() const {
  return {{"bound", bound},
          {"module_dim", module.dim()},
          {"left_vanishing", left_vanishing},
          {"dual_vanishing", dual_vanishing},
          {"reflexivity", reflexivity.to_json()},
          {"verdict", verdict.to_json()}};
}

GpWitness gproj_check(const FDModule& x, int bound) {
  if (bound < 1) throw HomexError(ErrorCode::PreconditionFailed, "bound must be at least 1");
  GpWitness w;
  w.module = x;
  w.bound = bound;
  const AlgPtr& a = x.algebra();
  const AlgPtr op = opposite(a);
  if (x.dim() == 0) {
    w.left_vanishing.assign(bound, 0);
    w.dual_vanishing.assign(bound, 0);
    w.reflexivity = Verdict::certified("reflexivity", {{"dim", 0}});
    w.verdict = Verdict::certified("gproj", {{"reason", "zero module"}});
    return w;
  }
  const Resolution rx = minimal_resolution(x, bound + 1);
  const HomologyDims left = ext_from(rx, regular_module(a), bound);
  const TransposeDual xs = hom_to_regular(x);
  const Resolution rxs = minimal_resolution(xs.module, bound + 1);
  const HomologyDims right = ext_from(rxs, regular_module(op), bound);
  w.left_vanishing = from_degree_one(left);
  w.dual_vanishing = from_degree_one(right);

  // X -> X** is injective when the homs to A separate points, and then an
  // isomorphism when dim X** = dim X.
  int separated = 0;
  if (!xs.homs.empty()) {
    Mat stacked = xs.homs[0];
    for (std::size_t j = 1; j < xs.homs.size(); ++j) stacked = vstack(stacked, xs.homs[j]);
    separated = static_cast<int>(rank(stacked));
  }
  const int double_dual = hom_dim(xs.module, regular_module(op));
  const nlohmann::json rw{{"dim", x.dim()}, {"rank_of_evaluation", separated}, {"double_dual_dim", double_dual}};
  w.reflexivity = separated == x.dim() && double_dual == x.dim() ? Verdict::certified("reflexivity", rw)
                                                                  : Verdict::refuted("reflexivity", rw);

  if (const int i = first_nonzero(left.dims)) {
    w.verdict = Verdict::refuted("gproj", {{"side", "Ext(X, A)"}, {"i", i}, {"dim", left.dims[i]}});
  } else if (const int j = first_nonzero(right.dims)) {
    w.verdict = Verdict::refuted("gproj", {{"side", "Ext(X*, A)"}, {"i", j}, {"dim", right.dims[j]}});
  } else if (w.reflexivity.is_refuted()) {
    w.verdict = Verdict::refuted("gproj", {{"side", "reflexivity"}});
  } else {
    // Vanishing beyond the bound is automatic on a side whose resolution
    // ends or whose regular module has injective dimension within the bound.
    const bool left_done = rx.complete() || at_most(injdim_left(a, bound), bound);
    const bool right_done = rxs.complete() || at_most(injdim_right(a, bound), bound);
    if (left_done && right_done)
      w.verdict = Verdict::certified("gproj", {{"bound", bound}});
    else
      w.verdict = Verdict::inconclusive("gproj", {{"bound", bound}, {"bounded_certified", true}});
  }
  return w;
}

Verdict gproj_perp_check(const FDModule& x, const std::vector<FDModule>& testset, int bound) {
  for (std::size_t k = 0; k < testset.size(); ++k) {
    const GpWitness g = gproj_check(testset[k], bound);
    if (!g.verdict.is_certified())
      throw HomexError(ErrorCode::TestsetNotCertified, "testset module " + std::to_string(k) + " is not certified",
                       {{"index", k}, {"verdict", g.verdict.to_json()}});
  }
  for (std::size_t k = 0; k < testset.size(); ++k) {
    const HomologyDims e = ext(testset[k], x, bound, bound + 1);
    if (const int i = first_nonzero(e.dims))
      return Verdict::refuted("gproj_perp", {{"testset_index", k}, {"i", i}, {"dim", e.dims[i]}});
  }
  return Verdict::certified("gproj_perp", {{"relative_to_testset", testset.size()}, {"bound", bound}});
}

Verdict gorenstein_check(const AlgPtr& a, int bound) {
  const SelfInjectiveDims d = self_injective_dimensions(a, bound);
  if (d.left.is_certified() && d.right.is_certified()) {
    const long long l = d.left.value(), r = d.right.value();
    return Verdict::certified("gorenstein", {{"left", l}, {"right", r}, {"value", std::max(l, r)}});
  }
  return Verdict::inconclusive("gorenstein", {{"left", d.left.to_json()}, {"right", d.right.to_json()}, {"bound", bound}});
}

Verdict omega_condition_check(const FDModule& x, int t, const std::vector<FDModule>& samples, int bound) {
  const auto [g, l] = bimodule_sides(x);
  std::vector<Verdict> parts;
  nlohmann::json detail = nlohmann::json::array();
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const FDModule& u = samples[k];
    require_same_algebra(u.algebra(), l, "omega_condition_check");
    const Verdict pu = perp_check(u, bound);
    if (pu.is_refuted())
      throw HomexError(ErrorCode::PreconditionFailed, "sample " + std::to_string(k) + " fails perp_check",
                       {{"index", k}, {"verdict", pu.to_json()}});
    const FDModule y = from_left_bimodule(TensorProduct(x, as_left_bimodule(retarget(u, l))).module());
    const FDModule z = syzygy(y, t);
    Verdict v = perp_check(z, bound);
    detail.push_back({{"sample", k}, {"tensor_dim", y.dim()}, {"syzygy_dim", z.dim()}, {"perp", v.to_json()}});
    parts.push_back(std::move(v));
  }
  Verdict out = combine(parts, "omega_condition");
  out.witness = {{"t", t}, {"samples", detail}, {"status_detail", out.witness}};
  return out;
}

Verdict smt_level_verify(const AlgPtr& a, const AlgPtr& b, const FDModule& m, const FDModule& n, int level,
                         std::uint64_t seed) {
  const auto [ml, mr] = bimodule_sides(m);
  const auto [nl, nr] = bimodule_sides(n);
  if (!same_algebra(ml, a) || !same_algebra(mr, b) || !same_algebra(nl, b) || !same_algebra(nr, a))
    return Verdict::refuted("smt_level", {{"failing_clause", "bimodule_sides"}});

  std::vector<Verdict> parts;
  auto projective = [&](const FDModule& side, const std::string& name) {
    Verdict v = projective_dimension(side);
    if (v.is_certified())
      v = v.value() <= 0 ? Verdict::certified(name, v.witness) : Verdict::refuted(name, v.witness);
    else
      v.clause = name;
    parts.push_back(std::move(v));
  };
  projective(left_part(m), "M projective over A");
  projective(right_part(m), "M projective over B^op");
  projective(left_part(n), "N projective over B");
  projective(right_part(n), "N projective over A^op");
  Verdict sides = combine(parts, "projectivity");
  if (sides.is_refuted()) {
    Verdict out = Verdict::refuted("smt_level", sides.witness);
    out.witness["failing_clause"] = sides.witness["failing_clause"];
    return out;
  }

  auto stable_iso = [&](const FDModule& x, const AlgPtr& alg, const std::string& name) {
    const FDModule omega = syzygy(regular_bimodule(alg), level);
    const Stripped sx = strip_projective_summands(retarget(x, omega.algebra()));
    const Stripped so = strip_projective_summands(omega);
    Verdict v = random_iso_test(sx.core, so.core, 32, seed);
    v.clause = name;
    v.witness = {{"core_dims", {sx.core.dim(), so.core.dim()}},
                 {"stripped", {sx.stripped.size(), so.stripped.size()}},
                 {"iso", v.witness}};
    return v;
  };
  std::vector<Verdict> all{sides};
  all.push_back(stable_iso(TensorProduct(m, n).module(), a, "M (x)_B N ~ Omega^l(A)"));
  all.push_back(stable_iso(TensorProduct(n, m).module(), b, "N (x)_A M ~ Omega^l(B)"));
  Verdict out = combine(all, "smt_level");
  out.witness["level"] = level;
  return out;
}

}  // namespace homex

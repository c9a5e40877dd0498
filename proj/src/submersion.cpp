#include "skt/submersion.hpp"

#include "skt/linalg.hpp"

#include <stdexcept>

namespace skt {

namespace {

template <class S>
bool within(const Residual& r, double tol) {
  if constexpr (is_exact_v<S>) {
    return r.exact_zero;
  } else {
    return r.value < tol;
  }
}

template <class S>
Mat<S> hcat(const Mat<S>& a, const Mat<S>& b) {
  Mat<S> out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

template <class S>
Vec<S> unit(int dim, int a) {
  Vec<S> e = Vec<S>::Zero(dim);
  e(a) = S(1);
  return e;
}

// Euclidean remainder of v after projecting onto the column span of k.
template <class S>
Vec<S> span_remainder(const Mat<S>& k, const Vec<S>& v) {
  if (k.cols() == 0) return v;
  const Mat<S> gram = k.transpose() * k;
  return v - k * (inverse(gram) * (k.transpose() * v));
}

bool is_unit_column(const Mat<double>& b, Eigen::Index col, Eigen::Index& which) {
  which = -1;
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    if (b(i, col) == 0.0) continue;
    if (b(i, col) != 1.0 || which >= 0) return false;
    which = i;
  }
  return which >= 0;
}

bool is_unit_column(const Mat<Rational>& b, Eigen::Index col, Eigen::Index& which) {
  which = -1;
  for (Eigen::Index i = 0; i < b.rows(); ++i) {
    if (b(i, col) == 0) continue;
    if (b(i, col) != 1 || which >= 0) return false;
    which = i;
  }
  return which >= 0;
}

}  // namespace

template <class S>
Mat<S> horizontal_of(const Mat<S>& metric, const Mat<S>& vertical) {
  return orthogonal_complement(vertical, metric);
}

template <class S>
Residual block_component_residual(const Tensor<S>& t, const Mat<S>& b1, const Mat<S>& b2, int first_block_count) {
  const Tensor<S> tb = restrict_to(t, hcat(b1, b2));
  const int r1 = static_cast<int>(b1.cols());
  Residual r;
  for (std::size_t flat = 0; flat < tb.size(); ++flat) {
    const auto idx = tb.unflatten(flat);
    int count = 0;
    for (int i : idx)
      if (i < r1) ++count;
    if (count == first_block_count) r.absorb(tb[flat]);
  }
  return r;
}

template <class S>
VerificationReport check_projecttau(const LieModel<S>& m, const NomizuConnection<S>& c, const Mat<S>& vertical,
                                    double tol) {
  VerificationReport rep("projecttau", mode_of<S>());
  rep.set_fingerprint(m.fingerprint());
  const Mat<S> h = horizontal_of(m.metric(), vertical);
  const std::string anchor = "Lambda^2 V ^ H part of T vanishes";
  if (h.cols() == 0 || vertical.cols() == 0) {
    rep.add(vacuous_check("projecttau", anchor, "empty vertical or horizontal space"));
    return rep;
  }
  rep.add(make_check<S>("projecttau", anchor, block_component_residual(c.torsion, vertical, h, 2), tol,
                        vertical.cols() == 1 ? "one-dimensional vertical space" : ""));
  return rep;
}

template <class S>
VerificationReport check_torsion_in_torsion(const LieModel<S>& m, const NomizuConnection<S>& c,
                                            const Mat<S>& vertical, double tol) {
  VerificationReport rep("torsion-in-torsion", mode_of<S>());
  rep.set_fingerprint(m.fingerprint());
  const int dm = m.dim_m();
  const Mat<S> ph = Mat<S>::Identity(dm, dm) - projector(vertical, m.metric());
  const Tensor<S> th = compose_slots(c.torsion, ph);
  Residual res;
  for (Eigen::Index v = 0; v < vertical.cols(); ++v) {
    const Vec<S> vv = vertical.col(v);
    std::vector<Vec<S>> w;  // w[z] = T(V, e_z)
    for (int z = 0; z < dm; ++z) w.push_back(raise_last(c.torsion, vv, unit<S>(dm, z), m.metric()));
    auto f = [&](int a, int b, int z) {
      S acc(0);
      for (int l = 0; l < dm; ++l)
        if (w[z](l) != S(0)) acc += th({a, b, l}) * w[z](l);
      return acc;
    };
    for (int a = 0; a < dm; ++a)
      for (int b = 0; b < dm; ++b)
        for (int z = 0; z < dm; ++z) res.absorb(S(f(a, b, z) + f(b, z, a) + f(z, a, b)));
  }
  if (vertical.cols() == 0) {
    rep.add(vacuous_check("torsion_in_torsion", "cyclic T^H(X,Y,T(V,Z)) = 0", "empty vertical space"));
  } else {
    rep.add(make_check<S>("torsion_in_torsion", "cyclic T^H(X,Y,T(V,Z)) = 0", res, tol));
  }
  return rep;
}

template <class S>
VerificationReport check_fiber_geometry(const LieModel<S>& m, const NomizuConnection<S>& c,
                                        const Mat<S>& vertical, double tol) {
  VerificationReport rep("fiber-geometry", mode_of<S>());
  rep.set_fingerprint(m.fingerprint());
  const int dm = m.dim_m();
  const NomizuConnection<S> lc = levi_civita(m);
  const Mat<S> h = horizontal_of(m.metric(), vertical);
  const Mat<S> ph = Mat<S>::Identity(dm, dm) - projector(vertical, m.metric());
  if (vertical.cols() == 0) {
    rep.add(vacuous_check("(a) totally geodesic", "nabla^g_V W in V", "empty vertical space"));
    rep.add(vacuous_check("(b) metric basic", "L_V g = 0 on H", "empty vertical space"));
    rep.add(vacuous_check("(c) torsion basic", "L_V T^H = 0", "empty vertical space"));
    return rep;
  }
  Residual a;
  for (Eigen::Index v = 0; v < vertical.cols(); ++v)
    for (Eigen::Index w = 0; w < vertical.cols(); ++w)
      a.absorb_all(Vec<S>(ph * (lc.at(vertical.col(v)) * vertical.col(w))));
  rep.add(make_check<S>("(a) totally geodesic", "nabla^g_V W in V", a, tol));
  if (h.cols() == 0) {
    rep.add(vacuous_check("(b) metric basic", "L_V g = 0 on H", "empty horizontal space"));
    rep.add(vacuous_check("(c) torsion basic", "L_V T^H = 0", "empty horizontal space"));
    return rep;
  }
  const Tensor<S> g = Tensor<S>::bilinear(m.metric());
  const Tensor<S> th = compose_slots(c.torsion, ph);
  Residual b, tb;
  for (Eigen::Index v = 0; v < vertical.cols(); ++v) {
    const Vec<S> vv = vertical.col(v);
    b.merge(max_norm(restrict_to(lie_derivative(m, lc, vv, g), h)));
    tb.merge(max_norm(lie_derivative(m, lc, vv, th)));
  }
  rep.add(make_check<S>("(b) metric basic", "L_V g = 0 on H", b, tol));
  rep.add(make_check<S>("(c) torsion basic", "L_V T^H = 0", tb, tol));
  return rep;
}

template <class S>
VerificationReport check_nablavert(const LieModel<S>& m, const NomizuConnection<S>& c, const Mat<S>& vertical,
                                   double tol) {
  VerificationReport rep("nablavert", mode_of<S>());
  rep.set_fingerprint(m.fingerprint());
  const Mat<S> h = horizontal_of(m.metric(), vertical);
  const std::string anchor = "g(nabla_X Y, Z) = T(X,Y,Z), X vertical, Y basic";
  if (vertical.cols() == 0 || h.cols() == 0) {
    rep.add(vacuous_check("nablavert", anchor, "empty index range"));
    return rep;
  }
  Residual res;
  for (Eigen::Index x = 0; x < vertical.cols(); ++x) {
    const Vec<S> xv = vertical.col(x);
    const Mat<S> lam = c.at(xv);
    for (Eigen::Index y = 0; y < h.cols(); ++y) {
      const Vec<S> yv = h.col(y);
      const Vec<S> d = lam * yv - m.bracket_m(xv, yv);
      for (Eigen::Index z = 0; z < h.cols(); ++z) {
        const Vec<S> zv = h.col(z);
        res.absorb(S(d.dot(m.metric() * zv) - c.torsion(xv, yv, zv)));
      }
    }
  }
  rep.add(make_check<S>("nablavert", anchor, res, tol, "basic fields modelled through the bracket with V"));
  return rep;
}

template <class S>
QuotientModel<S> build_quotient(const SubmersionSpec<S>& spec, double tol) {
  const LieModel<S>& tm = spec.total;
  const int dm = tm.dim_m();
  const int n = tm.dim();
  const Mat<S>& v = spec.vertical;
  const int r = static_cast<int>(v.cols());
  if (v.rows() != dm) throw std::invalid_argument("vertical space does not live in m");
  const Mat<S> h = horizontal_of(tm.metric(), v);

  VerificationReport rep("quotient", mode_of<S>());
  rep.set_fingerprint(tm.fingerprint());

  std::vector<Mat<S>> split{v};
  if (h.cols() > 0) split.push_back(h);
  VerificationReport inv = check_invariant_splitting(tm, spec.connection, split, tol);
  rep.merge(inv, "vertical-invariance");
  if (!inv.passed()) throw GateError("vertical-invariance", "vertical space is not holonomy-invariant", rep);

  VerificationReport pt = check_projecttau(tm, spec.connection, v, tol);
  rep.merge(pt);
  if (!pt.passed()) throw GateError("projecttau", "torsion has a Lambda^2 V ^ H component", rep);

  // lifts
  const Mat<S>& z = spec.lifts;
  if (z.rows() != n || z.cols() != r)
    throw GateError("lifts", "expected " + std::to_string(r) + " lifts in the full algebra", rep);
  Mat<S> zm(dm, r);
  for (int a = 0; a < r; ++a) zm.col(a) = tm.project_m(z.col(a));
  Residual lift_res;
  const Mat<S> pv = projector(v, tm.metric());
  lift_res.absorb_all(Mat<S>(zm - pv * zm));
  const bool lifts_ok = within<S>(lift_res, tol) && rank_of(zm) == r;
  rep.add(make_check<S>("lifts_span_vertical", "plumbing", lift_res, tol,
                        lifts_ok ? "" : "m-parts of the lifts do not span the vertical space"));
  if (!lifts_ok) throw GateError("lifts", "m-parts of the lifts do not span the vertical space", rep);

  // enlarged isotropy h' = h + span(lifts)
  Mat<S> k(n, tm.dim_h() + r);
  for (int p = 0; p < tm.dim_h(); ++p) k.col(p) = unit<S>(n, tm.isotropy()[p]);
  for (int a = 0; a < r; ++a) k.col(tm.dim_h() + a) = z.col(a);
  Residual closure;
  for (Eigen::Index i = 0; i < k.cols(); ++i)
    for (Eigen::Index j = i + 1; j < k.cols(); ++j)
      closure.absorb_all(span_remainder(k, tm.bracket_full(k.col(i), k.col(j))));
  rep.add(make_check<S>("isotropy_closure", "h + span(lifts) is a subalgebra", closure, tol));
  if (rep.get("isotropy_closure").status != Status::Pass)
    throw GateError("isotropy-closure", "enlarged isotropy does not close under the bracket", rep);

  Mat<S> hfull(n, h.cols());
  for (Eigen::Index b = 0; b < h.cols(); ++b) hfull.col(b) = tm.embed_m(h.col(b));
  Residual hinv;
  for (Eigen::Index i = 0; i < k.cols(); ++i)
    for (Eigen::Index b = 0; b < hfull.cols(); ++b)
      hinv.absorb_all(span_remainder(hfull, tm.bracket_full(k.col(i), hfull.col(b))));
  rep.add(make_check<S>("horizontal_invariance", "[h', H] in H", hinv, tol));
  if (rep.get("horizontal_invariance").status != Status::Pass)
    throw GateError("horizontal-invariance", "enlarged isotropy does not preserve the horizontal space", rep);

  const Mat<S> basis = hcat(k, hfull);
  std::vector<std::string> labels;
  for (Eigen::Index col = 0; col < basis.cols(); ++col) {
    Eigen::Index which = -1;
    if (is_unit_column(basis, col, which)) {
      labels.push_back(tm.labels()[static_cast<std::size_t>(which)]);
    } else {
      labels.push_back((col < k.cols() ? "z" : "x") + std::to_string(col + 1));
    }
  }
  const Mat<S> gh = h.transpose() * tm.metric() * h;
  QuotientModel<S> q;
  q.base = tm.rebased(spec.base_name.empty() ? tm.name() + "/V" : spec.base_name, basis,
                      static_cast<int>(k.cols()), labels, gh);
  q.lift = h;
  q.projection = h.cols() > 0 ? Mat<S>(inverse(gh) * h.transpose() * tm.metric()) : Mat<S>(0, dm);

  Residual riem;
  riem.absorb_all(Mat<S>(q.base.metric() - gh));
  rep.add(make_check<S>("riemannian_submersion", "g_N(pi X, pi Y) = g(X,Y) on H", riem, tol));

  VerificationReport bv = validate_model(q.base, tol);
  rep.merge(bv, "base");
  if (!bv.passed()) throw GateError("base-model", "quotient data do not form a valid reductive model", rep);

  q.torsion = restrict_to(spec.connection.torsion, h);
  q.torsion.set_kind(TensorKind::Form);
  rep.add(make_check<S>("projected_torsion_invariant", "projected torsion is h'-invariant",
                        isotropy_residual(q.base, q.torsion), tol));
  q.levi_civita = levi_civita(q.base);
  q.connection = with_torsion(q.base, q.levi_civita, q.torsion, tol);

  Residual pin;
  for (int a = 0; a < q.base.dim_m(); ++a)
    pin.absorb_all(Mat<S>(q.connection.lambda[static_cast<std::size_t>(a)] - q.push(spec.connection.at(h.col(a)))));
  rep.add(make_check<S>("pinabla", "nabla^T_X Y = pi_*(nabla_X Y) on horizontal lifts", pin, tol));
  rep.add(make_check<S>("base_torsion", "torsion of the base connection is the projected torsion",
                        max_norm(torsion_of(q.base, q.connection.lambda) - q.torsion), tol));
  rep.add(make_check<S>("base_parallel_torsion", "projected torsion is parallel",
                        parallel_torsion_residual(q.connection), tol));
  q.report = rep;
  if (rep.get("pinabla").status != Status::Pass)
    throw GateError("pinabla", "base connection is not the projection of the total connection", rep);
  return q;
}

template <class S>
VerificationReport check_base_reducibility(const QuotientModel<S>& q, const Mat<S>& h1, const Mat<S>& h2,
                                           double tol) {
  VerificationReport rep("base-reducibility", mode_of<S>());
  rep.set_fingerprint(q.base.fingerprint());
  const Mat<S>& g = q.base.metric();
  const int dm = q.base.dim_m();
  for (const Mat<S>* w : {&h1, &h2}) {
    Residual r;
    const Mat<S> qw = Mat<S>::Identity(dm, dm) - projector(*w, g);
    for (int p = 0; p < q.base.dim_h(); ++p) r.absorb_all(Mat<S>(qw * q.base.ad_isotropy(p) * *w));
    const bool ok = within<S>(r, tol);
    rep.add(make_check<S>(w == &h1 ? "projectable_1" : "projectable_2", "subspace is h'-invariant", r, tol));
    if (!ok) throw GateError("projectable", "subspace is not invariant under the enlarged isotropy", rep);
  }
  VerificationReport split = check_invariant_splitting(q.base, q.connection, {h1, h2}, tol);
  rep.merge(split);
  return rep;
}

template <class S>
VerificationReport check_product_splitting(const LieModel<S>& m, const NomizuConnection<S>& c, const Mat<S>& v1,
                                           const Mat<S>& v2, double tol) {
  VerificationReport rep("product-splitting", mode_of<S>());
  rep.set_fingerprint(m.fingerprint());
  rep.merge(check_invariant_splitting(m, c, {v1, v2}, tol), "holonomy");
  Residual mixed = block_component_residual(c.torsion, v1, v2, 1);
  mixed.merge(block_component_residual(c.torsion, v1, v2, 2));
  rep.add(make_check<S>("decomposable", "T = T_1 + T_2, T_i in Lambda^3 V_i", mixed, tol));
  rep.merge(check_projecttau(m, c, v1, tol), "vertical_v1");
  rep.merge(check_projecttau(m, c, v2, tol), "vertical_v2");
  return rep;
}

#define SKT_INSTANTIATE_SUBMERSION(S)                                                                          \
  template Mat<S> horizontal_of<S>(const Mat<S>&, const Mat<S>&);                                               \
  template Residual block_component_residual<S>(const Tensor<S>&, const Mat<S>&, const Mat<S>&, int);           \
  template VerificationReport check_projecttau<S>(const LieModel<S>&, const NomizuConnection<S>&, const Mat<S>&, \
                                                  double);                                                      \
  template VerificationReport check_torsion_in_torsion<S>(const LieModel<S>&, const NomizuConnection<S>&,      \
                                                          const Mat<S>&, double);                               \
  template VerificationReport check_fiber_geometry<S>(const LieModel<S>&, const NomizuConnection<S>&,          \
                                                      const Mat<S>&, double);                                   \
  template QuotientModel<S> build_quotient<S>(const SubmersionSpec<S>&, double);                                \
  template VerificationReport check_nablavert<S>(const LieModel<S>&, const NomizuConnection<S>&, const Mat<S>&, \
                                                 double);                                                       \
  template VerificationReport check_base_reducibility<S>(const QuotientModel<S>&, const Mat<S>&, const Mat<S>&, \
                                                         double);                                               \
  template VerificationReport check_product_splitting<S>(const LieModel<S>&, const NomizuConnection<S>&,       \
                                                         const Mat<S>&, const Mat<S>&, double);

SKT_INSTANTIATE_SUBMERSION(double)
SKT_INSTANTIATE_SUBMERSION(Rational)

}  // namespace skt

#include "skt/nk_construction.hpp"

#include "skt/linalg.hpp"
#include "util.hpp"

#include <algorithm>
#include <stdexcept>

namespace skt {

using util::within;

template <class S>
Mat<S> rotation_with_axis(const Vec<S>& axis) {
  if (axis.size() != 3) throw std::invalid_argument("axis must have three components");
  const S n2 = axis.dot(axis);
  if (!negligible(S(n2 - S(1)), 1e-12)) throw std::invalid_argument("axis is not a unit vector");
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
            [&](int a, int b) { return abs_value(axis(a)) < abs_value(axis(b)); });
  std::string last_error;
  for (int j : order) {
    Vec<S> u = Vec<S>::Zero(3);
    u(j) = S(1);
    u -= axis(j) * axis;
    const S un = u.dot(u);
    if (negligible(un, 1e-12)) continue;
    try {
      u /= exact_sqrt(un);
    } catch (const std::domain_error& e) {
      last_error = e.what();
      continue;
    }
    Vec<S> w(3);
    w << axis(1) * u(2) - axis(2) * u(1), axis(2) * u(0) - axis(0) * u(2), axis(0) * u(1) - axis(1) * u(0);
    Mat<S> r(3, 3);
    r.row(0) = axis.transpose();
    r.row(1) = u.transpose();
    r.row(2) = w.transpose();
    return r;
  }
  throw std::domain_error("no exact rotation completes the axis: " + last_error);
}

template <class S>
NKQuotientResult<S> build_nk_quotient(const SasakiModel<S>& model, const Vec<S>& axis, double tol) {
  NKQuotientResult<S> r;
  r.source = model;
  r.source.triple = rotate_triple(model.triple, rotation_with_axis(axis));
  const LieModel<S>& m = r.source.model;
  const AlmostContactTriple<S>& t = r.source.triple;
  const Mat<S>& g = m.metric();
  const int dm = m.dim_m();

  r.canonical = canonical_connection(m, t, tol);
  VerificationReport rep("nk-quotient", mode_of<S>());
  rep.set_fingerprint(m.fingerprint());
  rep.merge(r.canonical.report, "canonical");

  Mat<S> axis_col(dm, 1);
  axis_col.col(0) = t.xi[0];
  rep.add(make_check<S>("xi_invariance", "holonomy preserves span(xi_1)",
                        subspace_invariance_residual(g, r.canonical.holonomy, axis_col), tol));
  if (rep.get("xi_invariance").status != Status::Pass)
    throw GateError("span(xi_1)-invariance",
                    "span(xi_1) is not invariant under the holonomy of the canonical connection (beta = " +
                        format_double(to_double(r.canonical.beta)) + ")",
                    rep);

  const S gap = S(t.delta - S(2) * t.alpha);
  if constexpr (is_exact_v<S>) {
    if (!(gap == S(0))) throw GateError("delta=2alpha", "the model is not parallel", rep);
  } else {
    if (std::abs(gap) > 1e-12) throw GateError("delta=2alpha", "the model is not parallel", rep);
    if (gap != 0.0) rep.warn("delta - 2 alpha = " + format_double(gap) + " accepted within 1e-12");
  }

  SubmersionSpec<S> spec;
  spec.total = m;
  spec.connection = r.canonical.connection;
  spec.vertical = axis_col;
  spec.lifts = Mat<S>(m.dim(), 1);
  spec.lifts.col(0) = m.embed_m(t.xi[0]);
  spec.base_name = m.name() + "/xi1";
  rep.merge(check_nablavert(m, r.canonical.connection, axis_col, tol), "nablavert");
  r.quotient = build_quotient(spec, tol);
  rep.merge(r.quotient.report, "quotient");
  const QuotientModel<S>& q = r.quotient;

  const Mat<S> v = vertical_basis(t);
  const Mat<S> pv = projector(v, g);
  const Mat<S> id = Mat<S>::Identity(dm, dm);
  r.tilde_phi = t.phi[0] * (id - pv - pv);

  Residual sq;
  sq.absorb_all(Mat<S>(r.tilde_phi * r.tilde_phi + id - t.xi[0] * t.eta[0].transpose()));
  rep.add(make_check<S>("tilde_phi_squared", "tilde phi^2 = -id + xi (x) eta", sq, tol));
  Mat<S> v23(dm, 2);
  v23.col(0) = t.xi[1];
  v23.col(1) = t.xi[2];
  const Mat<S> p23 = projector(v23, g);
  const Mat<S> ph = id - pv;
  Residual split;
  split.absorb_all(Mat<S>((id - ph) * r.tilde_phi * ph));
  split.absorb_all(Mat<S>((id - p23) * r.tilde_phi * p23));
  rep.add(make_check<S>("tilde_phi_splitting", "tilde phi preserves H and span(xi_2, xi_3)", split, tol));

  r.j = q.push(r.tilde_phi);
  const int db = q.base.dim_m();
  const Mat<S> idb = Mat<S>::Identity(db, db);
  Residual jsq;
  jsq.absorb_all(Mat<S>(r.j * r.j + idb));
  rep.add(make_check<S>("J_squared", "J^2 = -id", jsq, tol));

  // the projected torsion against 2 alpha (eta_2 ^ Phi_2^H + eta_3 ^ Phi_3^H)
  Tensor<S> expected = Tensor<S>::form(dm, 3);
  for (int i = 1; i < 3; ++i) {
    const Tensor<S> phi_h = compose_slots(fundamental_form(g, t.phi[i]), ph);
    expected += S(S(2) * t.alpha) * wedge(Tensor<S>::covector(t.eta[i]), phi_h);
  }
  Tensor<S> expected_base = restrict_to(expected, q.lift);
  expected_base.set_kind(TensorKind::Form);
  rep.add(make_check<S>("checkT", "projected torsion = 2 alpha (eta_2 ^ Phi_2^H + eta_3 ^ Phi_3^H)",
                        max_norm(q.torsion - expected_base), tol));
  rep.add(make_check<S>("nabla_T_J", "nabla^T J = 0", parallel_residual(q.connection, Tensor<S>::endomorphism(r.j)),
                        tol));

  r.nk = make_nearly_kahler(q.base, r.j);
  rep.merge(check_nearly_kahler(q.base, r.nk, tol), "nk");

  r.vertical = q.projection * v23;
  r.horizontal = q.projection * orthogonal_complement(v, g);
  rep.merge(check_base_reducibility(q, r.vertical, r.horizontal, tol), "reducible");
  r.report = rep;
  return r;
}

template <class S>
Mat<S> unflipped_j(const NKQuotientResult<S>& r) {
  return r.quotient.push(r.source.triple.phi[0]);
}

template <class S>
VerificationReport check_TJ_formulas(const NKQuotientResult<S>& r, double tol) {
  VerificationReport rep("TJ", mode_of<S>());
  const QuotientModel<S>& q = r.quotient;
  rep.set_fingerprint(q.base.fingerprint());
  const AlmostContactTriple<S>& t = r.source.triple;
  const Mat<S>& gt = r.source.model.metric();
  const Tensor<S> eta2 = restrict_to(Tensor<S>::covector(t.eta[1]), q.lift);
  const Tensor<S> eta3 = restrict_to(Tensor<S>::covector(t.eta[2]), q.lift);
  const Tensor<S> phi2 = restrict_to(fundamental_form(gt, t.phi[1]), q.lift);
  const Tensor<S> phi3 = restrict_to(fundamental_form(gt, t.phi[2]), q.lift);
  const S c = S(S(4) * t.alpha);
  const Mat<S> frame = util::hcat(r.vertical, r.horizontal);
  const int nv = static_cast<int>(r.vertical.cols());
  const int n = static_cast<int>(frame.cols());

  Residual tj1, tj2, tj2t, zero;
  bool has1 = false, has2 = false, has2t = false, has0 = false;
  for (int a = 0; a < n; ++a) {
    const Vec<S> x = frame.col(a);
    for (int b = 0; b < n; ++b) {
      const Vec<S> y = frame.col(b);
      const Vec<S> jy = r.j * y;
      for (int d = 0; d < n; ++d) {
        const Vec<S> z = frame.col(d);
        const Vec<S> jz = r.j * z;
        const S lhs = S(q.torsion(x, jy, z) + q.torsion(x, y, jz));
        const bool vx = a < nv, vy = b < nv, vz = d < nv;
        if (vx && !vy && !vz) {
          tj1.absorb(S(lhs + c * (eta2.as_vector().dot(x) * phi3(y, z) - eta3.as_vector().dot(x) * phi2(y, z))));
          has1 = true;
        } else if (!vx && vy && !vz) {
          tj2.absorb(S(lhs - c * (eta2.as_vector().dot(y) * phi3(x, z) - eta3.as_vector().dot(y) * phi2(x, z))));
          has2 = true;
        } else if (!vx && !vy && vz) {
          tj2t.absorb(S(lhs + c * (eta2.as_vector().dot(z) * phi3(x, y) - eta3.as_vector().dot(z) * phi2(x, y))));
          has2t = true;
        } else {
          zero.absorb(lhs);
          has0 = true;
        }
      }
    }
  }
  auto put = [&](const char* name, const char* anchor, bool has, const Residual& res) {
    if (has) {
      rep.add(make_check<S>(name, anchor, res, tol));
    } else {
      rep.add(vacuous_check(name, anchor, "no basis triple of this pattern"));
    }
  };
  put("TJ1", "X in V, Y,Z in H: -4 alpha (eta_2(X) Phi_3(Y,Z) - eta_3(X) Phi_2(Y,Z))", has1, tj1);
  put("TJ2", "Y in V, X,Z in H: 4 alpha (eta_2(Y) Phi_3(X,Z) - eta_3(Y) Phi_2(X,Z))", has2, tj2);
  put("TJ2_transposed", "Z in V, X,Y in H: antisymmetry in (Y,Z)", has2t, tj2t);
  put("TJ_vanishing", "every other pattern vanishes", has0, zero);
  return rep;
}

namespace {

template <class S>
Residual characteristic_identity(const LieModel<S>& m, const NomizuConnection<S>& lc, const Tensor<S>& t,
                                 const Mat<S>& j) {
  Residual res;
  const Mat<S>& g = m.metric();
  for (int a = 0; a < m.dim_m(); ++a) {
    const Mat<S>& l = lc.lambda[static_cast<std::size_t>(a)];
    const Mat<S> nj = l * j - j * l;
    const Mat<S> rhs = g * nj * j;  // rhs(c, b) = g((nabla_a J) J e_b, e_c)
    for (int b = 0; b < m.dim_m(); ++b)
      for (int c = 0; c < m.dim_m(); ++c) res.absorb(S(t({a, b, c}) - rhs(c, b)));
  }
  return res;
}

}  // namespace

template <class S>
VerificationReport check_characteristic_match(const NKQuotientResult<S>& r, double tol) {
  VerificationReport rep("characteristic", mode_of<S>());
  const QuotientModel<S>& q = r.quotient;
  rep.set_fingerprint(q.base.fingerprint());
  rep.add(make_check<S>("torsion_identity", "T(X,Y,Z) = g((nabla^g_X J) J Y, Z)",
                        characteristic_identity(q.base, q.levi_civita, q.torsion, r.j), tol));
  rep.add(make_check<S>("characteristic_torsion", "characteristic torsion of J equals T",
                        max_norm(r.nk.characteristic_torsion - q.torsion), tol));
  Residual maps;
  if (antisymmetry_residual(r.nk.characteristic_torsion).exact_zero ||
      antisymmetry_residual(r.nk.characteristic_torsion).value < tol) {
    Tensor<S> tc = r.nk.characteristic_torsion;
    tc.set_kind(TensorKind::Form);
    const NomizuConnection<S> c = with_torsion(q.base, q.levi_civita, tc, tol);
    for (int a = 0; a < q.base.dim_m(); ++a)
      maps.absorb_all(Mat<S>(c.lambda[static_cast<std::size_t>(a)] - q.connection.lambda[static_cast<std::size_t>(a)]));
    rep.add(make_check<S>("characteristic_connection", "same Nomizu map as nabla^T", maps, tol));
  } else {
    rep.add(flag_check("characteristic_connection", "same Nomizu map as nabla^T", false,
                       "characteristic torsion is not alternating"));
  }
  const Mat<S> mj = -r.j;
  rep.add(make_check<S>("torsion_identity_minus_J", "identity is unchanged under J -> -J",
                        characteristic_identity(q.base, q.levi_civita, q.torsion, mj), tol));
  return rep;
}

template <class S>
FTensor<S> compute_F(const NKQuotientResult<S>& r, double tol) {
  FTensor<S> f;
  f.report = VerificationReport("F", mode_of<S>());
  VerificationReport& rep = f.report;
  const QuotientModel<S>& q = r.quotient;
  rep.set_fingerprint(q.base.fingerprint());
  const Mat<S>& g = q.base.metric();
  const Mat<S>& hb = r.horizontal;
  const Mat<S>& vb = r.vertical;
  const int db = q.base.dim_m();
  const int nh = static_cast<int>(hb.cols());
  f.scalar = S(0);
  if (nh == 0) {
    for (const char* name : {"F_paths_agree", "F_preserves_H", "F_scalar", "F_value"})
      rep.add(vacuous_check(name, "F: H -> H", "horizontal space is empty"));
    return f;
  }
  const Mat<S> gv_inv = inverse(Mat<S>(vb.transpose() * g * vb));
  std::vector<Mat<S>> a, b;
  for (Eigen::Index i = 0; i < vb.cols(); ++i) {
    const Mat<S> l = q.levi_civita.at(vb.col(i));
    a.push_back(l * r.j - r.j * l);
    b.push_back(contraction_endomorphism(q.torsion, Vec<S>(vb.col(i)), g));
  }
  Mat<S> fa = Mat<S>::Zero(db, db), fb = Mat<S>::Zero(db, db);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < a.size(); ++k) {
      const S w = gv_inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
      if (w == S(0)) continue;
      fa += w * (a[i] * a[k]);
      fb += w * (b[i] * b[k]);
    }
  const Mat<S> gh_inv = inverse(Mat<S>(hb.transpose() * g * hb));
  f.via_nabla = gh_inv * hb.transpose() * g * fa * hb;
  f.via_torsion = gh_inv * hb.transpose() * g * fb * hb;

  Residual agree;
  agree.absorb_all(Mat<S>(f.via_nabla - f.via_torsion));
  rep.add(make_check<S>("F_paths_agree", "sum (nabla_V J)^2 = sum (V _| T)^2 on H", agree, tol));
  Residual leak;
  leak.absorb_all(Mat<S>(fa * hb - hb * f.via_nabla));
  rep.add(make_check<S>("F_preserves_H", "F maps H to H", leak, tol));
  f.scalar = f.via_nabla(0, 0);
  const Mat<S> idh = Mat<S>::Identity(nh, nh);
  Residual scal;
  scal.absorb_all(Mat<S>(f.via_nabla - f.scalar * idh));
  rep.add(make_check<S>("F_scalar", "F is a multiple of id on H", scal, tol));
  const S alpha = r.alpha();
  Residual val;
  val.absorb_all(Mat<S>(f.via_nabla + S(S(8) * alpha * alpha) * idh));
  rep.add(make_check<S>("F_value", "F = -8 alpha^2 id on H", val, tol,
                        "measured " + format_double(to_double(f.scalar))));
  return f;
}

template <class S>
VerificationReport check_special_algebraic_torsion(const Tensor<S>& t, const Mat<S>& v, const Mat<S>& h,
                                                   double tol) {
  VerificationReport rep("special-algebraic-torsion", mode_of<S>());
  if (v.cols() < 3) {
    rep.add(vacuous_check("lambda3_V", "Lambda^3 V component", "dim V < 3"));
  } else {
    rep.add(make_check<S>("lambda3_V", "Lambda^3 V component", block_component_residual(t, v, h, 3), tol));
  }
  if (v.cols() < 2 || h.cols() < 1) {
    rep.add(vacuous_check("lambda2V_H", "Lambda^2 V ^ H component", "index range is empty"));
  } else {
    rep.add(make_check<S>("lambda2V_H", "Lambda^2 V ^ H component", block_component_residual(t, v, h, 2), tol));
  }
  if (h.cols() < 3) {
    rep.add(vacuous_check("lambda3_H", "Lambda^3 H component", "dim H < 3"));
  } else {
    rep.add(make_check<S>("lambda3_H", "Lambda^3 H component", block_component_residual(t, v, h, 0), tol));
  }
  return rep;
}

#define SKT_INSTANTIATE_NK(S)                                                                              \
  template Mat<S> rotation_with_axis<S>(const Vec<S>&);                                                     \
  template NKQuotientResult<S> build_nk_quotient<S>(const SasakiModel<S>&, const Vec<S>&, double);          \
  template Mat<S> unflipped_j<S>(const NKQuotientResult<S>&);                                              \
  template VerificationReport check_TJ_formulas<S>(const NKQuotientResult<S>&, double);                    \
  template VerificationReport check_characteristic_match<S>(const NKQuotientResult<S>&, double);           \
  template FTensor<S> compute_F<S>(const NKQuotientResult<S>&, double);                                    \
  template VerificationReport check_special_algebraic_torsion<S>(const Tensor<S>&, const Mat<S>&, const Mat<S>&, \
                                                                 double);

SKT_INSTANTIATE_NK(double)
SKT_INSTANTIATE_NK(Rational)

}  // namespace skt

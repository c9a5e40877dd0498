#include "skt/qk_construction.hpp"

#include "skt/linalg.hpp"
#include "util.hpp"

#include <cmath>
#include <stdexcept>

namespace skt {

using util::within;

template <class S>
NearlyKahlerModel<S> nearly_kahler_model(const LieModel<S>& m, const Mat<S>& j, double tol) {
  NearlyKahlerModel<S> out;
  out.model = m;
  out.j = j;
  const NearlyKahlerStructure<S> nk = make_nearly_kahler(m, j);
  out.torsion = nk.characteristic_torsion;
  out.torsion.set_kind(TensorKind::Form);
  out.connection = with_torsion(m, levi_civita(m), out.torsion, tol);
  return out;
}

template <class S>
NearlyKahlerModel<S> nearly_kahler_model(const NKQuotientResult<S>& r) {
  NearlyKahlerModel<S> out;
  out.model = r.quotient.base;
  out.connection = r.quotient.connection;
  out.j = r.j;
  out.torsion = r.quotient.torsion;
  return out;
}

namespace {

template <class S>
Mat<S> block_in(const Mat<S>& endo, const Mat<S>& b, const Mat<S>& g) {
  return inverse(Mat<S>(b.transpose() * g * b)) * b.transpose() * g * endo * b;
}

template <class S>
Mat<S> nabla_j(const NearlyKahlerModel<S>& nk, const NomizuConnection<S>& lc, const Vec<S>& x) {
  const Mat<S> l = lc.at(x);
  return l * nk.j - nk.j * l;
}

}  // namespace

template <class S>
Mat<S> qk_F(const NearlyKahlerModel<S>& nk, const Mat<S>& vertical, const Mat<S>& horizontal) {
  const Mat<S>& g = nk.model.metric();
  const NomizuConnection<S> lc = levi_civita(nk.model);
  const Mat<S> gv_inv = inverse(Mat<S>(vertical.transpose() * g * vertical));
  const int dm = nk.model.dim_m();
  std::vector<Mat<S>> a;
  for (Eigen::Index i = 0; i < vertical.cols(); ++i) a.push_back(nabla_j(nk, lc, Vec<S>(vertical.col(i))));
  Mat<S> f = Mat<S>::Zero(dm, dm);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < a.size(); ++k) {
      const S w = gv_inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
      if (!(w == S(0))) f -= w * (a[i] * a[k]);
    }
  return block_in(f, horizontal, g);
}

template <class S>
QKResult<S> build_qk_quotient(const NearlyKahlerModel<S>& nk, const Mat<S>& vertical, const Vec<S>& v, double tol) {
  QKResult<S> r;
  r.source = nk;
  r.vertical = vertical;
  r.v = v;
  const LieModel<S>& m = nk.model;
  const Mat<S>& g = m.metric();
  const int dm = m.dim_m();
  VerificationReport rep("qk-quotient", mode_of<S>());
  rep.set_fingerprint(m.fingerprint());

  const bool two = vertical.rows() == dm && vertical.cols() == 2 && rank_of(vertical) == 2;
  rep.add(flag_check("dim_vertical", "dim V = 2", two));
  if (!two) throw GateError("dim-vertical", "the vertical space must be a 2-plane in m", rep);

  const Mat<S> pv = projector(vertical, g);
  Residual unit_v;
  unit_v.absorb_all(Vec<S>(v - pv * v));
  unit_v.absorb(S(v.dot(g * v) - S(1)));
  rep.add(make_check<S>("unit_V", "V is a unit vector in the vertical plane", unit_v, tol));
  if (rep.get("unit_V").status != Status::Pass) throw GateError("unit-V", "V is not a unit vertical vector", rep);

  r.horizontal = orthogonal_complement(vertical, g);
  const HolonomyAlgebra<S> hol = holonomy_algebra(m, nk.connection);
  if (!hol.converged) rep.warn(hol.warning);
  Residual hinv = subspace_invariance_residual(g, hol, vertical);
  rep.add(make_check<S>("holonomy_invariant", "Hol(nabla^T) preserves V", hinv, tol));
  if (rep.get("holonomy_invariant").status != Status::Pass)
    throw GateError("holonomy-invariance", "the vertical plane is not holonomy-invariant", rep);

  const Mat<S> id = Mat<S>::Identity(dm, dm);
  Residual jinv;
  jinv.absorb_all(Mat<S>((id - pv) * nk.j * pv));
  rep.add(make_check<S>("J_invariant", "J V = V", jinv, tol));
  if (rep.get("J_invariant").status != Status::Pass)
    throw GateError("J-invariance", "the vertical plane is not J-invariant", rep);

  Residual type = block_component_residual(nk.torsion, vertical, r.horizontal, 0);
  type.merge(block_component_residual(nk.torsion, vertical, r.horizontal, 2));
  rep.add(make_check<S>("torsion_type", "T in Lambda^2 H ^ V", type, tol));
  if (rep.get("torsion_type").status != Status::Pass)
    throw GateError("torsion-type", "torsion has components outside Lambda^2 H ^ V", rep);

  const Mat<S> f = qk_F(nk, vertical, r.horizontal);
  const int nh = static_cast<int>(r.horizontal.cols());
  r.k = nh > 0 ? f(0, 0) : S(0);
  Residual fs;
  fs.absorb_all(Mat<S>(f - r.k * Mat<S>::Identity(nh, nh)));
  rep.add(make_check<S>("F_scalar", "F = k id on H", fs, tol, "k = " + format_double(to_double(r.k))));
  if (rep.get("F_scalar").status != Status::Pass) throw GateError("F-scalar", "F is not a multiple of id on H", rep);
  const bool positive = is_exact_v<S> ? r.k > S(0) : to_double(r.k) > tol;
  rep.add(flag_check("k_positive", "k > 0", positive, "k = " + format_double(to_double(r.k))));
  if (!positive) throw GateError("k-positive", "k = " + format_double(to_double(r.k)) + " is not positive", rep);

  SubmersionSpec<S> spec;
  spec.total = m;
  spec.connection = nk.connection;
  spec.vertical = vertical;
  spec.lifts = Mat<S>(m.dim(), 2);
  for (int a = 0; a < 2; ++a) spec.lifts.col(a) = m.embed_m(vertical.col(a));
  spec.base_name = m.name() + "/V";
  r.quotient = build_quotient(spec, tol);
  rep.merge(r.quotient.report, "quotient");
  const QuotientModel<S>& q = r.quotient;

  const S c = exact_sqrt(S(S(2) / r.k));
  const Vec<S> jv = nk.j * v;
  r.i[0] = q.push(nk.j);
  r.i[1] = c * q.push(contraction_endomorphism(nk.torsion, jv, g));
  r.i[2] = c * q.push(contraction_endomorphism(nk.torsion, v, g));

  const int db = q.base.dim_m();
  const Mat<S> idb = Mat<S>::Identity(db, db);
  const Mat<S>& gb = q.base.metric();
  for (int a = 0; a < 3; ++a) {
    const Mat<S>& ia = r.i[static_cast<std::size_t>(a)];
    Residual sq, orth;
    sq.absorb_all(Mat<S>(ia * ia + idb));
    orth.absorb_all(Mat<S>(ia.transpose() * gb * ia - gb));
    const std::string n = "I" + std::to_string(a + 1);
    rep.add(make_check<S>(n + "_squared", "I_a^2 = -id", sq, tol));
    rep.add(make_check<S>(n + "_orthogonal", "g(I_a X, I_a Y) = g(X,Y)", orth, tol));
  }
  for (const auto& p : kEvenPermutations) {
    const Mat<S>& a = r.i[static_cast<std::size_t>(p[0])];
    const Mat<S>& b = r.i[static_cast<std::size_t>(p[1])];
    const Mat<S>& c3 = r.i[static_cast<std::size_t>(p[2])];
    Residual prod, anti;
    prod.absorb_all(Mat<S>(a * b - c3));
    anti.absorb_all(Mat<S>(a * b + b * a));
    const std::string n = "I" + std::to_string(p[0] + 1) + "I" + std::to_string(p[1] + 1);
    rep.add(make_check<S>(n + "=I" + std::to_string(p[2] + 1), "I_i I_j = I_k", prod, tol));
    rep.add(make_check<S>(n + "_anticommute", "I_i I_j = -I_j I_i", anti, tol));
  }
  const Mat<S> vt = contraction_endomorphism(nk.torsion, v, g);
  Residual vsq;
  vsq.absorb_all(Mat<S>(block_in(Mat<S>(vt * vt), r.horizontal, g) + (r.k / S(2)) * Mat<S>::Identity(nh, nh)));
  rep.add(make_check<S>("V_torsion_squared", "(V _| T)^2 = -(k/2) id on H", vsq, tol));
  r.report = rep;
  return r;
}

template <class S>
VerificationReport check_quaternionic_parallelism(const QKResult<S>& r, double tol) {
  VerificationReport rep("quaternionic-parallelism", mode_of<S>());
  const LieModel<S>& b = r.quotient.base;
  rep.set_fingerprint(b.fingerprint());
  const Mat<S>& g = b.metric();
  const Mat<S> gi = inverse(g);
  auto inner = [&](const Mat<S>& x, const Mat<S>& y) { return S((gi * x.transpose() * g * y).trace()); };
  Mat<S> gram(3, 3);
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c) gram(a, c) = inner(r.i[static_cast<std::size_t>(a)], r.i[static_cast<std::size_t>(c)]);
  const Mat<S> gram_inv = inverse(gram);
  auto components = [&](const Mat<S>& d) {
    Vec<S> rhs(3);
    for (int a = 0; a < 3; ++a) rhs(a) = inner(r.i[static_cast<std::size_t>(a)], d);
    return Vec<S>(gram_inv * rhs);
  };
  auto remainder = [&](const Mat<S>& d) {
    const Vec<S> x = components(d);
    Mat<S> rem = d;
    for (int a = 0; a < 3; ++a) rem -= x(a) * r.i[static_cast<std::size_t>(a)];
    return rem;
  };
  const NomizuConnection<S>& lc = r.quotient.levi_civita;
  Residual closure, own, killing;
  for (int x = 0; x < b.dim_m(); ++x) {
    const Mat<S>& l = lc.lambda[static_cast<std::size_t>(x)];
    for (int a = 0; a < 3; ++a) {
      const Mat<S>& ia = r.i[static_cast<std::size_t>(a)];
      const Mat<S> d = l * ia - ia * l;
      closure.absorb_all(remainder(d));
      const Vec<S> comp = components(d);
      if (a == 0) own.absorb(comp(0));
      if (a == 1) killing.absorb(comp(1));
    }
  }
  rep.add(make_check<S>("span_closure", "nabla^g preserves span{I_1, I_2, I_3}", closure, tol));
  rep.add(make_check<S>("nabla_I1_no_I1", "nabla I_1 has no I_1 component", own, tol));
  rep.add(make_check<S>("nabla_I2_in_I1_I3", "nabla_X I_2 lies in span{I_1, I_3}", killing, tol));
  Residual iso;
  for (int p = 0; p < b.dim_h(); ++p) {
    const Mat<S> ad = b.ad_isotropy(p);
    for (int a = 0; a < 3; ++a) {
      const Mat<S>& ia = r.i[static_cast<std::size_t>(a)];
      iso.absorb_all(remainder(Mat<S>(ad * ia - ia * ad)));
    }
  }
  if (b.dim_h() == 0) {
    rep.add(vacuous_check("span_isotropy_invariant", "span{I_a} is h-invariant", "trivial isotropy"));
  } else {
    rep.add(make_check<S>("span_isotropy_invariant", "span{I_a} is h-invariant", iso, tol));
  }
  return rep;
}

template <class S>
NablaJ2Measurement<S> measure_nablaJ2(const NearlyKahlerModel<S>& nk, const Mat<S>& vertical, const Vec<S>& v,
                                      double tol) {
  NablaJ2Measurement<S> out;
  out.report = VerificationReport("nablaJ2", mode_of<S>());
  VerificationReport& rep = out.report;
  rep.set_fingerprint(nk.model.fingerprint());
  const Mat<S>& g = nk.model.metric();
  const Mat<S> h = orthogonal_complement(vertical, g);
  const int nh = static_cast<int>(h.cols());
  const Mat<S> idh = Mat<S>::Identity(nh, nh);
  const Mat<S> fblock = qk_F(nk, vertical, h);
  out.k = nh > 0 ? fblock(0, 0) : S(0);
  Residual fs;
  fs.absorb_all(Mat<S>(fblock - out.k * idh));
  rep.add(make_check<S>("F_scalar", "F = k id on H", fs, tol));

  const NomizuConnection<S> lc = levi_civita(nk.model);
  const Mat<S> a = nabla_j(nk, lc, v);
  const Mat<S> ajv = nabla_j(nk, lc, Vec<S>(nk.j * v));
  const Mat<S> sq = block_in(Mat<S>(a * a), h, g);
  out.scalar = nh > 0 ? S(-sq(0, 0)) : S(0);
  Residual scal;
  scal.absorb_all(Mat<S>(sq + out.scalar * idh));
  rep.add(make_check<S>("nablaJ2_scalar", "(nabla_V J)^2 is a multiple of id on H", scal, tol,
                        "(nabla_V J)^2 = -" + format_double(to_double(out.scalar)) + " id"));

  auto close = [&](const S& x, const S& y) {
    if constexpr (is_exact_v<S>) {
      return x == y;
    } else {
      return std::abs(x - y) < tol;
    }
  };
  const S half_k = S(out.k / S(2));
  const S half_k2 = S(out.k * out.k / S(2));
  out.matches_half_k = close(out.scalar, half_k);
  out.matches_half_k_squared = close(out.scalar, half_k2);
  const bool one = out.matches_half_k != out.matches_half_k_squared;
  if (out.matches_half_k && out.matches_half_k_squared) {
    out.verdict = "k/2 and k^2/2 coincide (k = 1)";
  } else if (out.matches_half_k) {
    out.verdict = "k/2";
  } else if (out.matches_half_k_squared) {
    out.verdict = "k^2/2";
  } else {
    out.verdict = "neither";
  }
  rep.add(flag_check("nablaJ2_resolution", "(nabla_V J)^2 = -(k/2) id or -(k^2/2) id", one,
                     "measured " + format_double(to_double(out.scalar)) + ", k = " + format_double(to_double(out.k)) +
                         ", k/2 = " + format_double(to_double(half_k)) + ", k^2/2 = " +
                         format_double(to_double(half_k2)) + "; matches " + out.verdict));

  Residual anti, conj, jv;
  anti.absorb_all(Mat<S>(nk.j * a + a * nk.j));
  conj.absorb_all(Mat<S>(nk.j * a + ajv));
  jv.absorb_all(Mat<S>(block_in(Mat<S>(ajv * ajv), h, g) - sq));
  rep.add(make_check<S>("anticommute", "J (nabla_V J) = -(nabla_V J) J", anti, tol));
  rep.add(make_check<S>("JV_conjugation", "J (nabla_V J) = -nabla_{JV} J", conj, tol));
  rep.add(make_check<S>("JV_square", "(nabla_{JV} J)^2 = (nabla_V J)^2 on H", jv, tol));
  return out;
}

namespace {

// Gram-Schmidt in the metric g.
Mat<double> orthonormal_frame(const Mat<double>& g) {
  const int n = static_cast<int>(g.rows());
  Mat<double> e = Mat<double>::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) e.col(i) -= (e.col(j).dot(g * e.col(i))) * e.col(j);
    e.col(i) /= std::sqrt(e.col(i).dot(g * e.col(i)));
  }
  return e;
}

constexpr int kPairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

// Hodge star on 2-forms in an oriented orthonormal frame, in the pair basis above.
Mat<double> hodge4() {
  Mat<double> s = Mat<double>::Zero(6, 6);
  // *(01)=23, *(02)=-13, *(03)=12 and the inverse relations
  s(5, 0) = 1;
  s(4, 1) = -1;
  s(3, 2) = 1;
  s(2, 3) = 1;
  s(1, 4) = -1;
  s(0, 5) = 1;
  return s;
}

}  // namespace

template <class S>
CurvatureSummary curvature_summary(const LieModel<S>& m_in, const Mat<S>& omega_in) {
  const LieModel<double> m = cast_model<double>(m_in);
  const NomizuConnection<double> lc = levi_civita(m);
  const CurvatureOperator<double> r = curvature(m, lc);
  const Mat<double>& g = m.metric();
  const int n = m.dim_m();
  CurvatureSummary out;
  Mat<double> e = orthonormal_frame(g);
  // R(i,j,k,l) = g(R(E_i,E_j)E_k, E_l) in the frame
  auto rmat = [&](const Vec<double>& x, const Vec<double>& y) {
    Mat<double> acc = Mat<double>::Zero(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (x(a) != 0.0 && y(b) != 0.0) acc += x(a) * y(b) * r(a, b);
    return acc;
  };
  if (n == 4 && omega_in.size() == 16) {
    const Mat<double> omega = cast_matrix<double>(omega_in);
    const Mat<double> form = e.transpose() * g * omega * e;  // g(E_a, omega E_b)
    Vec<double> w(6);
    for (int p = 0; p < 6; ++p) w(p) = form(kPairs[p][0], kPairs[p][1]);
    if (w.dot(hodge4() * w) < 0) e.col(0).swap(e.col(1));
  }
  std::vector<double> rt(static_cast<std::size_t>(n * n * n * n));
  auto idx = [n](int i, int j, int k, int l) { return static_cast<std::size_t>(((i * n + j) * n + k) * n + l); };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Mat<double> rij = rmat(e.col(i), e.col(j));
      const Mat<double> vals = e.transpose() * g * rij * e;  // vals(l,k) = g(E_l, R E_k)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) rt[idx(i, j, k, l)] = vals(l, k);
    }
  out.ricci = Mat<double>::Zero(n, n);
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a) out.ricci(b, c) += rt[idx(a, b, c, a)];
  out.scalar = out.ricci.trace();
  out.einstein_residual =
      n > 0 ? (out.ricci - (out.scalar / n) * Mat<double>::Identity(n, n)).cwiseAbs().maxCoeff() : 0.0;
  if (n != 4) return out;
  out.four_dimensional = true;
  // W = R - P wedge g with the Schouten tensor P
  const Mat<double> p = (out.ricci - (out.scalar / (2.0 * (n - 1))) * Mat<double>::Identity(n, n)) / (n - 2.0);
  auto kn = [&](int a, int b, int c, int d) {
    auto dl = [](int x, int y) { return x == y ? 1.0 : 0.0; };
    return p(a, d) * dl(b, c) + p(b, c) * dl(a, d) - p(a, c) * dl(b, d) - p(b, d) * dl(a, c);
  };
  Mat<double> w(6, 6);
  for (int s = 0; s < 6; ++s)
    for (int t = 0; t < 6; ++t) {
      const int a = kPairs[s][0], b = kPairs[s][1], c = kPairs[t][0], d = kPairs[t][1];
      w(s, t) = rt[idx(a, b, c, d)] - kn(a, b, c, d);
    }
  const Mat<double> star = hodge4();
  const Mat<double> id = Mat<double>::Identity(6, 6);
  const Mat<double> pp = 0.5 * (id + star), pm = 0.5 * (id - star);
  out.self_dual_weyl = (pp * w * pp).cwiseAbs().maxCoeff();
  out.anti_self_dual_weyl = (pm * w * pm).cwiseAbs().maxCoeff();
  return out;
}

template <class S>
VerificationReport check_qk_base(const QKResult<S>& r, double tol) {
  VerificationReport rep("qk-base", ArithmeticMode::Float);
  rep.set_fingerprint(r.quotient.base.fingerprint());
  const CurvatureSummary c = curvature_summary(r.quotient.base, r.i[0]);
  Residual ein;
  ein.value = c.einstein_residual;
  ein.exact_zero = false;
  rep.add(make_check<double>("einstein", "Ric = (scal/n) g", ein, tol,
                             "scal = " + format_double(c.scalar)));
  if (c.four_dimensional) {
    Residual wp;
    wp.value = c.self_dual_weyl;
    wp.exact_zero = false;
    rep.add(make_check<double>("self_dual_weyl", "W+ = 0 with omega_1 self-dual", wp, tol,
                               "|W-| = " + format_double(c.anti_self_dual_weyl)));
  } else {
    rep.add(vacuous_check("self_dual_weyl", "W+ = 0 with omega_1 self-dual", "base is not 4-dimensional"));
  }
  return rep;
}

#define SKT_INSTANTIATE_QK(S)                                                                                   \
  template NearlyKahlerModel<S> nearly_kahler_model<S>(const LieModel<S>&, const Mat<S>&, double);             \
  template NearlyKahlerModel<S> nearly_kahler_model<S>(const NKQuotientResult<S>&);                             \
  template Mat<S> qk_F<S>(const NearlyKahlerModel<S>&, const Mat<S>&, const Mat<S>&);                          \
  template QKResult<S> build_qk_quotient<S>(const NearlyKahlerModel<S>&, const Mat<S>&, const Vec<S>&, double); \
  template VerificationReport check_quaternionic_parallelism<S>(const QKResult<S>&, double);                   \
  template NablaJ2Measurement<S> measure_nablaJ2<S>(const NearlyKahlerModel<S>&, const Mat<S>&, const Vec<S>&, \
                                                    double);                                                    \
  template CurvatureSummary curvature_summary<S>(const LieModel<S>&, const Mat<S>&);                           \
  template VerificationReport check_qk_base<S>(const QKResult<S>&, double);

SKT_INSTANTIATE_QK(double)
SKT_INSTANTIATE_QK(Rational)

}  // namespace skt

#include "skt/connection.hpp"

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
Vec<S> unit(int dim, int a) {
  Vec<S> e = Vec<S>::Zero(dim);
  e(a) = S(1);
  return e;
}

}  // namespace

template <class S>
Mat<S> NomizuConnection<S>::at(const Vec<S>& x) const {
  const int d = dim();
  Mat<S> out = Mat<S>::Zero(d, d);
  for (int a = 0; a < d; ++a)
    if (x(a) != S(0)) out += x(a) * lambda[static_cast<std::size_t>(a)];
  return out;
}

template <class S>
S CurvatureOperator<S>::value(int a, int b, int c, int d, const Mat<S>& metric) const {
  const Mat<S>& r_ab = (*this)(a, b);
  S acc(0);
  for (int l = 0; l < dim; ++l) acc += r_ab(l, c) * metric(l, d);
  return acc;
}

template <class S>
NomizuConnection<S> levi_civita(const LieModel<S>& m) {
  const int dm = m.dim_m();
  if (m.metric_inverse().rows() != dm) throw std::domain_error("singular metric on m");
  const Mat<S>& g = m.metric();
  const Mat<S>& gi = m.metric_inverse();
  // gb[z*dm+a] = g [e_z,e_a]_m
  std::vector<Vec<S>> gb(static_cast<std::size_t>(dm * dm));
  for (int z = 0; z < dm; ++z)
    for (int a = 0; a < dm; ++a) gb[static_cast<std::size_t>(z * dm + a)] = g * m.bracket_m(z, a);

  NomizuConnection<S> c;
  const S half = S(1) / S(2);
  for (int a = 0; a < dm; ++a) {
    Mat<S> lam(dm, dm);
    for (int b = 0; b < dm; ++b) {
      Vec<S> u(dm);
      for (int z = 0; z < dm; ++z)
        u(z) = gb[static_cast<std::size_t>(z * dm + a)](b) + gb[static_cast<std::size_t>(z * dm + b)](a);
      lam.col(b) = half * m.bracket_m(a, b) + half * (gi * u);
    }
    c.lambda.push_back(std::move(lam));
  }
  c.torsion = torsion_of(m, c.lambda);
  return c;
}

template <class S>
Tensor<S> torsion_of(const LieModel<S>& m, const std::vector<Mat<S>>& lambda) {
  const int dm = m.dim_m();
  Tensor<S> t = Tensor<S>::form(dm, 3);
  for (int a = 0; a < dm; ++a) {
    for (int b = 0; b < dm; ++b) {
      Vec<S> v = lambda[static_cast<std::size_t>(a)].col(b) - lambda[static_cast<std::size_t>(b)].col(a) -
                 m.bracket_m(a, b);
      Vec<S> low = m.metric().transpose() * v;
      for (int c = 0; c < dm; ++c) t({a, b, c}) = low(c);
    }
  }
  return t;
}

template <class S>
NomizuConnection<S> with_torsion(const LieModel<S>& m, const NomizuConnection<S>& base, const Tensor<S>& t,
                                 double tol) {
  const int dm = m.dim_m();
  if (t.dim() != dm || t.covariant() != 3 || t.contravariant() != 0)
    throw std::invalid_argument("torsion must be a (0,3) tensor on m");
  if (!within<S>(max_norm(torsion_of(m, base.lambda)), tol))
    throw std::invalid_argument("base connection is not torsion-free");
  if (!within<S>(antisymmetry_residual(t), tol)) throw std::invalid_argument("torsion is not alternating");
  if (m.metric_inverse().rows() != dm) throw std::domain_error("singular metric on m");
  NomizuConnection<S> c;
  const S half = S(1) / S(2);
  for (int a = 0; a < dm; ++a) {
    Mat<S> slice = interior_product(unit<S>(dm, a), t).as_matrix();  // slice(b,c) = T(e_a,e_b,e_c)
    c.lambda.push_back(base.lambda[static_cast<std::size_t>(a)] + half * (m.metric_inverse() * slice.transpose()));
  }
  c.torsion = t;
  c.torsion.set_kind(TensorKind::Form);
  return c;
}

template <class S>
CurvatureOperator<S> curvature(const LieModel<S>& m, const NomizuConnection<S>& c) {
  const int dm = m.dim_m();
  CurvatureOperator<S> r;
  r.dim = dm;
  r.r.reserve(static_cast<std::size_t>(dm * dm));
  for (int a = 0; a < dm; ++a) {
    for (int b = 0; b < dm; ++b) {
      const Mat<S>& la = c.lambda[static_cast<std::size_t>(a)];
      const Mat<S>& lb = c.lambda[static_cast<std::size_t>(b)];
      Mat<S> rab = la * lb - lb * la;
      const Vec<S>& bm = m.bracket_m(a, b);
      for (int k = 0; k < dm; ++k)
        if (bm(k) != S(0)) rab -= bm(k) * c.lambda[static_cast<std::size_t>(k)];
      const Vec<S>& bh = m.bracket_h(a, b);
      for (int p = 0; p < m.dim_h(); ++p)
        if (bh(p) != S(0)) rab -= bh(p) * m.ad_isotropy(p);
      r.r.push_back(std::move(rab));
    }
  }
  return r;
}

template <class S>
Residual isotropy_residual(const LieModel<S>& m, const Tensor<S>& t) {
  Residual r;
  for (int p = 0; p < m.dim_h(); ++p) r.merge(max_norm(endo_action(m.ad_isotropy(p), t)));
  return r;
}

template <class S>
Residual metric_compatibility_residual(const LieModel<S>& m, const NomizuConnection<S>& c) {
  Residual r;
  for (const auto& l : c.lambda) r.absorb_all(Mat<S>(l.transpose() * m.metric() + m.metric() * l));
  return r;
}

template <class S>
Tensor<S> nabla_invariant(const LieModel<S>& m, const NomizuConnection<S>& c, const Tensor<S>& t, const Vec<S>& x,
                          double tol) {
  if (!within<S>(isotropy_residual(m, t), tol))
    throw std::invalid_argument("tensor is not invariant under the isotropy action");
  return endo_action(c.at(x), t);
}

template <class S>
Residual parallel_residual(const NomizuConnection<S>& c, const Tensor<S>& t) {
  Residual r;
  for (const auto& l : c.lambda) r.merge(max_norm(endo_action(l, t)));
  return r;
}

template <class S>
Tensor<S> lie_derivative(const LieModel<S>& m, const NomizuConnection<S>& lc, const Vec<S>& v, const Tensor<S>& t) {
  const int dm = m.dim_m();
  Mat<S> av(dm, dm);
  for (int a = 0; a < dm; ++a) av.col(a) = lc.lambda[static_cast<std::size_t>(a)] * v;
  return endo_action(lc.at(v), t) - endo_action(av, t);
}

template <class S>
Tensor<S> d_invariant(const LieModel<S>& m, const Tensor<S>& a, double tol) {
  if (a.contravariant() != 0) throw std::invalid_argument("d_invariant needs a form");
  if (!within<S>(isotropy_residual(m, a), tol))
    throw std::invalid_argument("form is not invariant under the isotropy action");
  const int dm = m.dim_m();
  const int k = a.covariant();
  Tensor<S> out = Tensor<S>::form(dm, k + 1);
  std::vector<int> rest(static_cast<std::size_t>(k));
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    const auto idx = out.unflatten(flat);
    S acc(0);
    for (int i = 0; i <= k; ++i) {
      for (int j = i + 1; j <= k; ++j) {
        const Vec<S>& br = m.bracket_m(idx[i], idx[j]);
        int pos = 1;
        for (int s = 0; s <= k; ++s)
          if (s != i && s != j) rest[static_cast<std::size_t>(pos++)] = idx[s];
        const bool negative = (i + j) % 2 != 0;
        for (int l = 0; l < dm; ++l) {
          if (br(l) == S(0)) continue;
          rest[0] = l;
          S term = br(l) * a.at(rest);
          if (negative) {
            acc -= term;
          } else {
            acc += term;
          }
        }
      }
    }
    out[flat] = acc;
  }
  return out;
}

template <class S>
VerificationReport bianchi_check(const LieModel<S>& m, const NomizuConnection<S>& c, double tol) {
  VerificationReport rep("bianchi", mode_of<S>());
  rep.set_fingerprint(m.fingerprint());
  const int dm = m.dim_m();
  const Residual par = parallel_torsion_residual(c);
  rep.add(make_check<S>("parallel_torsion", "nabla T = 0", par, tol,
                        within<S>(par, tol) ? "" : "torsion not parallel; the quadratic Bianchi form does not apply"));

  const CurvatureOperator<S> r = curvature(m, c);
  std::vector<Mat<S>> rg;  // rg[ab](c,d) = R(a,b,c,d)
  rg.reserve(r.r.size());
  for (const auto& rab : r.r) rg.push_back(rab.transpose() * m.metric());
  // tv[ab] = T(a,b,.), tvs[ab] = G^{-1} T(a,b,.)
  std::vector<Vec<S>> tv(static_cast<std::size_t>(dm * dm)), tvs(static_cast<std::size_t>(dm * dm));
  for (int a = 0; a < dm; ++a) {
    for (int b = 0; b < dm; ++b) {
      Vec<S> v(dm);
      for (int z = 0; z < dm; ++z) v(z) = c.torsion({a, b, z});
      tvs[static_cast<std::size_t>(a * dm + b)] = m.metric_inverse() * v;
      tv[static_cast<std::size_t>(a * dm + b)] = std::move(v);
    }
  }
  auto rv = [&](int a, int b, int cc, int d) -> const S& { return rg[static_cast<std::size_t>(a * dm + b)](cc, d); };
  auto sig = [&](int a, int b, int cc, int d) {
    return S(tv[static_cast<std::size_t>(a * dm + b)].dot(tvs[static_cast<std::size_t>(cc * dm + d)]));
  };
  Residual res;
  for (int a = 0; a < dm; ++a)
    for (int b = 0; b < dm; ++b)
      for (int cc = 0; cc < dm; ++cc)
        for (int d = 0; d < dm; ++d) {
          S lhs = rv(a, b, cc, d) + rv(b, cc, a, d) + rv(cc, a, b, d);
          S rhs = sig(a, b, cc, d) + sig(b, cc, a, d) + sig(cc, a, b, d);
          res.absorb(S(lhs - rhs));
        }
  rep.add(make_check<S>("bianchi_quadratic", "cyclic R(X,Y,Z,V) = cyclic g(T(X,Y),T(Z,V))", res, tol));

  Residual skew;
  for (const auto& x : rg) skew.absorb_all(Mat<S>(x + x.transpose()));
  rep.add(make_check<S>("curvature_skew", "g(R(X,Y)Z,W) = -g(R(X,Y)W,Z)", skew, tol));
  return rep;
}

#define SKT_INSTANTIATE_CONNECTION(S)                                                                          \
  template struct NomizuConnection<S>;                                                                         \
  template struct CurvatureOperator<S>;                                                                        \
  template NomizuConnection<S> levi_civita<S>(const LieModel<S>&);                                             \
  template NomizuConnection<S> with_torsion<S>(const LieModel<S>&, const NomizuConnection<S>&, const Tensor<S>&, \
                                               double);                                                        \
  template Tensor<S> torsion_of<S>(const LieModel<S>&, const std::vector<Mat<S>>&);                            \
  template CurvatureOperator<S> curvature<S>(const LieModel<S>&, const NomizuConnection<S>&);                  \
  template Residual isotropy_residual<S>(const LieModel<S>&, const Tensor<S>&);                                \
  template Residual metric_compatibility_residual<S>(const LieModel<S>&, const NomizuConnection<S>&);          \
  template Tensor<S> nabla_invariant<S>(const LieModel<S>&, const NomizuConnection<S>&, const Tensor<S>&,      \
                                        const Vec<S>&, double);                                                \
  template Residual parallel_residual<S>(const NomizuConnection<S>&, const Tensor<S>&);                        \
  template Tensor<S> lie_derivative<S>(const LieModel<S>&, const NomizuConnection<S>&, const Vec<S>&,          \
                                       const Tensor<S>&);                                                      \
  template Tensor<S> d_invariant<S>(const LieModel<S>&, const Tensor<S>&, double);                             \
  template VerificationReport bianchi_check<S>(const LieModel<S>&, const NomizuConnection<S>&, double);

SKT_INSTANTIATE_CONNECTION(double)
SKT_INSTANTIATE_CONNECTION(Rational)

}  // namespace skt

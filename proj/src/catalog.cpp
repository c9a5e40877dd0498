#include "skt/catalog.hpp"

#include "skt/linalg.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace skt {

namespace {

using Quat = std::array<int, 4>;  // 1, i, j, k

Quat qmul(const Quat& a, const Quat& b) {
  return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
          a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
          a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
          a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
}

Quat qconj(const Quat& a) { return {a[0], -a[1], -a[2], -a[3]}; }

Quat qunit(int u) {
  Quat q{0, 0, 0, 0};
  q[static_cast<std::size_t>(u)] = 1;
  return q;
}

using QMat = std::array<std::array<Quat, 2>, 2>;

QMat qzero() {
  QMat m;
  for (auto& row : m)
    for (auto& q : row) q = {0, 0, 0, 0};
  return m;
}

QMat qmatmul(const QMat& a, const QMat& b) {
  QMat c = qzero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        Quat p = qmul(a[i][k], b[k][j]);
        for (int t = 0; t < 4; ++t) c[i][j][t] += p[t];
      }
  return c;
}

std::vector<QMat> sp2_matrices() {
  std::vector<QMat> basis;
  for (int u = 1; u <= 3; ++u) {
    QMat m = qzero();
    m[1][1] = qunit(u);
    basis.push_back(m);
  }
  for (int u = 1; u <= 3; ++u) {
    QMat m = qzero();
    m[0][0] = qunit(u);
    basis.push_back(m);
  }
  for (int b = 0; b < 4; ++b) {
    QMat m = qzero();
    m[1][0] = qunit(b);
    Quat c = qconj(qunit(b));
    m[0][1] = {-c[0], -c[1], -c[2], -c[3]};
    basis.push_back(m);
  }
  return basis;
}

// Coordinates of an element of sp(2) in the basis above.
std::array<int, 10> sp2_coordinates(const QMat& m) {
  std::array<int, 10> x{};
  for (int u = 1; u <= 3; ++u) {
    x[static_cast<std::size_t>(u - 1)] = m[1][1][u];
    x[static_cast<std::size_t>(u + 2)] = m[0][0][u];
  }
  for (int b = 0; b < 4; ++b) x[static_cast<std::size_t>(6 + b)] = m[1][0][b];
  // reconstruct to make sure the element lies in the span
  QMat r = qzero();
  const auto basis = sp2_matrices();
  for (int i = 0; i < 10; ++i)
    for (int p = 0; p < 2; ++p)
      for (int q = 0; q < 2; ++q)
        for (int t = 0; t < 4; ++t) r[p][q][t] += x[static_cast<std::size_t>(i)] * basis[i][p][q][t];
  if (r != m) throw std::logic_error("bracket left the quaternionic model of sp(2)");
  return x;
}

template <class S>
S sq(const S& x) {
  return x * x;
}

template <class S>
std::string text(const S& x) {
  if constexpr (is_exact_v<S>) {
    return format_rational(x);
  } else {
    std::ostringstream os;
    os << x;
    return os.str();
  }
}

// phi_i on Im H acting by v -> -Im(v u_i), on H by b -> -b u_i.
template <class S>
std::array<Mat<S>, 3> quaternionic_phis() {
  std::array<Mat<S>, 3> phis;
  for (int i = 0; i < 3; ++i) {
    Mat<S> p = Mat<S>::Zero(7, 7);
    const Quat u = qunit(i + 1);
    for (int a = 0; a < 3; ++a) {
      const Quat w = qmul(qunit(a + 1), u);
      for (int t = 1; t <= 3; ++t) p(t - 1, a) = S(-w[static_cast<std::size_t>(t)]);
    }
    for (int b = 0; b < 4; ++b) {
      const Quat w = qmul(qunit(b), u);
      for (int t = 0; t < 4; ++t) p(3 + t, 3 + b) = S(-w[static_cast<std::size_t>(t)]);
    }
    phis[static_cast<std::size_t>(i)] = p;
  }
  return phis;
}

template <class S>
std::vector<S> su2_constants(const S& c0) {
  std::vector<S> c(27, S(0));
  for (const auto& p : kEvenPermutations) {
    c[static_cast<std::size_t>((p[0] * 3 + p[1]) * 3 + p[2])] = c0;
    c[static_cast<std::size_t>((p[1] * 3 + p[0]) * 3 + p[2])] = S(-c0);
  }
  return c;
}

template <class S>
std::array<Mat<S>, 3> epsilon_phis() {
  std::array<Mat<S>, 3> phis;
  for (const auto& p : kEvenPermutations) {
    Mat<S> m = Mat<S>::Zero(3, 3);
    m(p[2], p[1]) = S(1);   // phi_i xi_j = xi_k
    m(p[1], p[2]) = S(-1);  // phi_i xi_k = -xi_j
    phis[static_cast<std::size_t>(p[0])] = m;
  }
  return phis;
}

}  // namespace

const std::vector<std::string>& Sp2Basis::labels() {
  static const std::vector<std::string> l{"h1", "h2", "h3", "e1", "e2", "e3", "f0", "f1", "f2", "f3"};
  return l;
}

template <class S>
std::vector<S> sp2_structure_constants() {
  const auto basis = sp2_matrices();
  const int n = Sp2Basis::kDim;
  std::vector<S> c(static_cast<std::size_t>(n * n * n), S(0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      QMat ab = qmatmul(basis[i], basis[j]);
      QMat ba = qmatmul(basis[j], basis[i]);
      QMat br = qzero();
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
          for (int t = 0; t < 4; ++t) br[p][q][t] = ab[p][q][t] - ba[p][q][t];
      const auto x = sp2_coordinates(br);
      for (int k = 0; k < n; ++k) c[static_cast<std::size_t>((i * n + j) * n + k)] = S(x[static_cast<std::size_t>(k)]);
    }
  }
  return c;
}

template <class S>
SasakiModel<S> su2_3ad(const S& alpha, const S& delta) {
  SasakiModel<S> out;
  out.model = LieModel<S>("su2_3ad(" + text(alpha) + "," + text(delta) + ")", {"xi1", "xi2", "xi3"},
                          su2_constants(S(S(2) * delta)), {}, Mat<S>::Identity(3, 3));
  const auto phis = epsilon_phis<S>();
  for (int i = 0; i < 3; ++i) {
    out.triple.xi[i] = Vec<S>::Zero(3);
    out.triple.xi[i](i) = S(1);
    out.triple.eta[i] = out.triple.xi[i];
    out.triple.phi[i] = phis[static_cast<std::size_t>(i)];
  }
  out.triple.alpha = alpha;
  out.triple.delta = delta;
  return out;
}

template <class S>
SasakiModel<S> su2_family(const S& alpha, const S& delta, const S& s_v) {
  if (!(s_v > S(0))) throw std::domain_error("scaling must be positive");
  SasakiModel<S> out;
  const Mat<S> g = s_v * Mat<S>::Identity(3, 3);
  out.model = LieModel<S>("su2_family", {"e1", "e2", "e3"}, su2_constants(S(2)), {}, g);
  const S r = exact_sqrt(s_v);
  const auto phis = epsilon_phis<S>();
  for (int i = 0; i < 3; ++i) {
    out.triple.xi[i] = Vec<S>::Zero(3);
    out.triple.xi[i](i) = S(1) / r;
    out.triple.eta[i] = g * out.triple.xi[i];
    out.triple.phi[i] = phis[static_cast<std::size_t>(i)];
  }
  out.triple.alpha = alpha;
  out.triple.delta = delta;
  return out;
}

template <class S>
SasakiModel<S> sp2_family(const S& alpha, const S& delta, const S& s_v, const S& s_h) {
  if (!(s_v > S(0)) || !(s_h > S(0))) throw std::domain_error("scalings must be positive");
  Mat<S> g = Mat<S>::Zero(7, 7);
  for (int a = 0; a < 3; ++a) g(a, a) = s_v;
  for (int b = 3; b < 7; ++b) g(b, b) = s_h;
  SasakiModel<S> out;
  out.model = LieModel<S>("sp2_family", Sp2Basis::labels(), sp2_structure_constants<S>(), {0, 1, 2}, g);
  const S r = exact_sqrt(s_v);
  const auto phis = quaternionic_phis<S>();
  for (int i = 0; i < 3; ++i) {
    out.triple.xi[i] = Vec<S>::Zero(7);
    out.triple.xi[i](i) = S(1) / r;
    out.triple.eta[i] = g * out.triple.xi[i];
    out.triple.phi[i] = phis[static_cast<std::size_t>(i)];
  }
  out.triple.alpha = alpha;
  out.triple.delta = delta;
  return out;
}

template <class S>
SasakiModel<S> sp2_s7(const S& alpha, const S& delta) {
  if (!(alpha > S(0)) || !(delta > S(0)))
    throw std::domain_error("no Sp(2)/Sp(1) model for alpha = " + text(alpha) + ", delta = " + text(delta) +
                            ": the scalings 1/delta^2 and 1/(alpha delta) need alpha > 0 and delta > 0");
  SasakiModel<S> out = sp2_family<S>(alpha, delta, S(S(1) / sq(delta)), S(S(1) / S(alpha * delta)));
  out.model.set_name("sp2_s7(" + text(alpha) + "," + text(delta) + ")");
  return out;
}

template <class S>
ProductModel<S> product_s3xs3(const S& alpha1, const S& delta1, const S& alpha2, const S& delta2) {
  const SasakiModel<S> a = su2_3ad(alpha1, delta1);
  const SasakiModel<S> b = su2_3ad(alpha2, delta2);
  std::vector<S> c(216, S(0));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        c[static_cast<std::size_t>((i * 6 + j) * 6 + k)] = a.model.c(i, j, k);
        c[static_cast<std::size_t>(((i + 3) * 6 + j + 3) * 6 + k + 3)] = b.model.c(i, j, k);
      }
  ProductModel<S> out;
  out.model = LieModel<S>("product_s3xs3", {"a1", "a2", "a3", "b1", "b2", "b3"}, std::move(c), {},
                          Mat<S>::Identity(6, 6));
  const Tensor<S> ta = canonical_torsion(a.model, a.triple);
  const Tensor<S> tb = canonical_torsion(b.model, b.triple);
  out.torsion = Tensor<S>::form(6, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        out.torsion({i, j, k}) = ta({i, j, k});
        out.torsion({i + 3, j + 3, k + 3}) = tb({i, j, k});
      }
  out.v1 = Mat<S>::Zero(6, 3);
  out.v2 = Mat<S>::Zero(6, 3);
  for (int i = 0; i < 3; ++i) {
    out.v1(i, i) = S(1);
    out.v2(i + 3, i) = S(1);
  }
  return out;
}

template <class S>
LieModel<S> broken_jacobi() {
  const SasakiModel<S> base = sp2_s7<S>(S(1), S(2));
  std::vector<S> c = base.model.constants();
  const int n = Sp2Basis::kDim;
  // [e1, f0] gains a spurious f1 component
  c[static_cast<std::size_t>((3 * n + 6) * n + 7)] += S(1) / S(2);
  c[static_cast<std::size_t>((6 * n + 3) * n + 7)] -= S(1) / S(2);
  return LieModel<S>("broken_jacobi", base.model.labels(), std::move(c), base.model.isotropy(), base.model.metric());
}

template <class S>
SasakiModel<S> broken_acm() {
  SasakiModel<S> m = sp2_s7<S>(S(1), S(2));
  m.model.set_name("broken_acm");
  m.triple.phi[0] = -m.triple.phi[0];
  return m;
}

template <class S>
SasakiModel<S> broken_3ad() {
  SasakiModel<S> m = sp2_s7<S>(S(1), S(2));
  m.model.set_name("broken_3ad");
  m.triple.alpha = S(1);
  m.triple.delta = S(1);
  return m;
}

namespace {

// Stacked components of d eta_i - 2 alpha Phi_i - 2(alpha - delta) eta_j ^ eta_k.
Eigen::VectorXd scaling_residual(double alpha, double delta, ScalingFamily family, double log_v, double log_h) {
  const double s_v = std::exp(log_v);
  const double s_h = std::exp(log_h);
  const SasakiModel<double> m =
      family == ScalingFamily::Su2 ? su2_family<double>(alpha, delta, s_v) : sp2_family<double>(alpha, delta, s_v, s_h);
  std::vector<double> out;
  for (const auto& p : kEvenPermutations) {
    const Tensor<double> d = d_invariant(m.model, Tensor<double>::covector(m.triple.eta[p[0]]), 1e-9);
    const Tensor<double> rhs =
        (2 * alpha) * fundamental_form(m.model.metric(), m.triple.phi[p[0]]) +
        (2 * (alpha - delta)) *
            wedge(Tensor<double>::covector(m.triple.eta[p[1]]), Tensor<double>::covector(m.triple.eta[p[2]]));
    const Tensor<double> diff = d - rhs;
    // components in a g-orthonormal frame; the scaled metrics are diagonal
    const Mat<double>& g = m.model.metric();
    const int n = static_cast<int>(g.rows());
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) out.push_back(diff({a, b}) / std::sqrt(g(a, a) * g(b, b)));
  }
  return Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

}  // namespace

std::optional<Rational> rationalize(double x, long max_den) {
  if (!std::isfinite(x)) return std::nullopt;
  // continued fraction convergents
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double r = x;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(r);
    if (std::abs(a) > 1e15) break;
    const long ai = static_cast<long>(a);
    const long h2 = ai * h1 + h0;
    const long k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - x) < 1e-12 * std::max(1.0, std::abs(x)))
      return Rational(h1) / Rational(k1);
    const double frac = r - a;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  return std::nullopt;
}

ScalingSolution solve_scalings(double alpha, double delta, ScalingFamily family) {
  const bool two_params = family == ScalingFamily::Sp2;
  const double lo = std::log(1e-3), hi = std::log(1e3);
  const int steps = 29;
  double best = std::numeric_limits<double>::infinity();
  double bv = 0.0, bh = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double lv = lo + (hi - lo) * i / (steps - 1);
    for (int j = 0; j < (two_params ? steps : 1); ++j) {
      const double lh = two_params ? lo + (hi - lo) * j / (steps - 1) : lv;
      const double r = scaling_residual(alpha, delta, family, lv, lh).norm();
      if (r < best) {
        best = r;
        bv = lv;
        bh = lh;
      }
    }
  }
  const double grid_best = best;
  // damped Gauss-Newton in log coordinates
  double lambda = 1e-3;
  Eigen::VectorXd res = scaling_residual(alpha, delta, family, bv, bh);
  for (int it = 0; it < 200 && res.norm() > 1e-15; ++it) {
    const double h = 1e-7;
    const int np = two_params ? 2 : 1;
    Eigen::MatrixXd jac(res.size(), np);
    jac.col(0) = (scaling_residual(alpha, delta, family, bv + h, two_params ? bh : bh + h) -
                  scaling_residual(alpha, delta, family, bv - h, two_params ? bh : bh - h)) /
                 (2 * h);
    if (two_params)
      jac.col(1) =
          (scaling_residual(alpha, delta, family, bv, bh + h) - scaling_residual(alpha, delta, family, bv, bh - h)) /
          (2 * h);
    Eigen::MatrixXd a = jac.transpose() * jac;
    a.diagonal().array() += lambda * (1.0 + a.diagonal().array());
    const Eigen::VectorXd step = a.ldlt().solve(-jac.transpose() * res);
    const double nv = std::clamp(bv + step(0), lo, hi);
    const double nh = two_params ? std::clamp(bh + step(1), lo, hi) : nv;
    const Eigen::VectorXd nres = scaling_residual(alpha, delta, family, nv, nh);
    if (nres.norm() < res.norm()) {
      bv = nv;
      bh = nh;
      res = nres;
      lambda = std::max(lambda / 10, 1e-12);
    } else {
      lambda *= 10;
      if (lambda > 1e8) break;
    }
  }
  ScalingSolution sol;
  sol.s_v = std::exp(bv);
  sol.s_h = std::exp(bh);
  sol.residual = res.lpNorm<Eigen::Infinity>();
  if (!(sol.residual < 1e-12)) {
    std::ostringstream os;
    os << "no scalings solve the 3-(alpha,delta) equations for alpha = " << alpha << ", delta = " << delta
       << " in the box s in [1e-3, 1e3]: best grid residual " << grid_best << ", refined residual "
       << sol.residual << " at s_v = " << sol.s_v;
    if (two_params) os << ", s_h = " << sol.s_h;
    const bool at_edge = bv <= lo + 1e-9 || bv >= hi - 1e-9 || (two_params && (bh <= lo + 1e-9 || bh >= hi - 1e-9));
    if (at_edge) os << " (infimum approached at the boundary of the box)";
    throw std::runtime_error(os.str());
  }
  sol.exact_s_v = rationalize(sol.s_v);
  sol.exact_s_h = two_params ? rationalize(sol.s_h) : sol.exact_s_v;
  const auto qa = rationalize(alpha);
  const auto qd = rationalize(delta);
  if (sol.exact_s_v && sol.exact_s_h && qa && qd) {
    try {
      const SasakiModel<Rational> m = family == ScalingFamily::Su2
                                          ? su2_family<Rational>(*qa, *qd, *sol.exact_s_v)
                                          : sp2_family<Rational>(*qa, *qd, *sol.exact_s_v, *sol.exact_s_h);
      sol.exact_verified = check_3ad(m.model, m.triple).passed();
    } catch (const std::domain_error&) {
      sol.exact_verified = false;
    }
  }
  return sol;
}

std::vector<CatalogEntry> catalog_list() {
  return {
      {"su2_3ad", "3ad", "alpha,delta", "SU(2) with [xi_i, xi_j] = 2 delta xi_k and unit Reeb fields",
       {{"beta", 0.0, 1e-12, "identity: beta = 2(delta - 2 alpha) at (1,2)"},
        {"torsion_xi123", -4.0, 1e-12, "oracle: shuffle expansion gives T(xi_1,xi_2,xi_3) = 2(delta - 4 alpha)"}}},
      {"sp2_s7", "3ad", "alpha,delta", "Sp(2)/Sp(1) with vertical/horizontal scalings 1/delta^2, 1/(alpha delta)",
       {{"beta", 0.0, 1e-12, "identity: beta = 2(delta - 2 alpha) at (1,2)"},
        {"s_v", 0.25, 1e-12, "oracle: scaling solver at (1,2)"},
        {"s_h", 0.5, 1e-12, "oracle: scaling solver at (1,2)"},
        {"torsion_xi123", -4.0, 1e-12, "oracle: shuffle expansion gives T(xi_1,xi_2,xi_3) = 2(delta - 4 alpha)"}}},
      {"cp3_nk", "nk", "alpha", "quotient of sp2_s7(alpha, 2 alpha) along xi_1 with J = phi_1 on H, -phi_1 on V",
       {{"F", -8.0, 1e-10, "identity: F = -8 alpha^2 on H at alpha = 1"},
        {"k", 8.0, 1e-10, "oracle: k = -F"},
        {"nablaJ2", 4.0, 1e-10, "oracle: (nabla_V J)^2 = -(k/2) id on H"}}},
      {"s4_qk", "qk", "alpha", "quotient of cp3_nk along pi_* span(xi_2, xi_3)",
       {{"einstein", 0.0, 1e-8, "oracle: Ricci proportional to the metric"},
        {"self_dual_weyl", 0.0, 1e-8, "oracle: curvature decomposition in dimension 4"},
        {"quaternion_relations", 0.0, 1e-10, "oracle: matrix products of I_1, I_2, I_3"},
        {"scalar_curvature", 96.0, 1e-9, "oracle: symmetric-space curvature -[[X,Y],Z] of Sp(2)/Sp(1)xSp(1)"}}},
      {"product_s3xs3", "product", "alpha1,delta1,alpha2,delta2", "su(2) + su(2) with decomposable torsion",
       {{"mixed_torsion", 0.0, 1e-12, "oracle: block components"}}},
      {"broken_jacobi", "control", "", "sp2_s7(1,2) with one bracket perturbed; fails the Jacobi identity", {}},
      {"broken_acm", "control", "", "sp2_s7(1,2) with phi_1 negated; fails phi_i phi_j = phi_k + xi_i (x) eta_j", {}},
      {"broken_3ad", "control", "", "sp2_s7(1,2) scalings labelled (1,1); fails d eta_i", {}},
  };
}

bool catalog_has(const std::string& name) {
  for (const auto& e : catalog_list())
    if (e.name == name) return true;
  return false;
}

#define SKT_INSTANTIATE_CATALOG(S)                                                         \
  template std::vector<S> sp2_structure_constants<S>();                                    \
  template SasakiModel<S> su2_3ad<S>(const S&, const S&);                                  \
  template SasakiModel<S> su2_family<S>(const S&, const S&, const S&);                     \
  template SasakiModel<S> sp2_family<S>(const S&, const S&, const S&, const S&);           \
  template SasakiModel<S> sp2_s7<S>(const S&, const S&);                                   \
  template ProductModel<S> product_s3xs3<S>(const S&, const S&, const S&, const S&);       \
  template LieModel<S> broken_jacobi<S>();                                                 \
  template SasakiModel<S> broken_acm<S>();                                                 \
  template SasakiModel<S> broken_3ad<S>();

SKT_INSTANTIATE_CATALOG(double)
SKT_INSTANTIATE_CATALOG(Rational)

}  // namespace skt

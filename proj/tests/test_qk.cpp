#include "helpers.hpp"
#include "oracles.hpp"

#include "skt/linalg.hpp"
#include "skt/qk_construction.hpp"

#include <doctest.h>

using namespace skt;
using namespace testing;

namespace {

template <class S>
struct Stage {
  NKQuotientResult<S> nk_result;
  NearlyKahlerModel<S> nk;
};

template <class S>
Stage<S> nk_stage(const S& alpha) {
  Vec<S> e1 = Vec<S>::Zero(3);
  e1(0) = S(1);
  auto r = build_nk_quotient(sp2_s7<S>(alpha, S(2) * alpha), e1);
  auto nk = nearly_kahler_model(r);
  return {std::move(r), std::move(nk)};
}

template <class S>
Residual quaternion_residual(const std::array<Mat<S>, 3>& i) {
  const Eigen::Index n = i[0].rows();
  const Mat<S> id = Mat<S>::Identity(n, n);
  Residual r;
  for (const auto& p : kEvenPermutations) {
    r.absorb_all(Mat<S>(i[p[0]] * i[p[0]] + id));
    r.absorb_all(Mat<S>(i[p[0]] * i[p[1]] - i[p[2]]));
    r.absorb_all(Mat<S>(i[p[1]] * i[p[0]] + i[p[2]]));
  }
  return r;
}

// Projector onto span{I_a} inside End(m) for the Frobenius product.
Mat<double> span_projector(const std::array<Mat<double>, 3>& i) {
  Mat<double> b(i[0].size(), 3);
  for (int a = 0; a < 3; ++a) b.col(a) = flatten(i[a]);
  return b * (b.transpose() * b).inverse() * b.transpose();
}

}  // namespace

TEST_CASE("quaternionic quotient of the nearly Kaehler base") {
  for (double alpha : {1.0, 0.5}) {
    auto st = nk_stage(alpha);
    Vec<double> v = st.nk_result.vertical.col(0);
    auto q = build_qk_quotient(st.nk, st.nk_result.vertical, v);
    CAPTURE(alpha);
    CHECK(q.report.passed());
    CHECK(q.quotient.base.dim_m() == 4);
    CHECK(q.k == doctest::Approx(oracle::qk_k(alpha)));
    CHECK(quaternion_residual(q.i).value < 1e-12);
    CHECK(check_quaternionic_parallelism(q).passed());
    auto base = check_qk_base(q);
    CHECK(base.passed());

    auto cs = curvature_summary(q.quotient.base, q.i[0]);
    CHECK(cs.four_dimensional);
    CHECK(cs.einstein_residual < 1e-8);
    CHECK(cs.self_dual_weyl < 1e-8);
    const double s_h = 1.0 / (alpha * 2.0 * alpha);
    CHECK(cs.scalar == doctest::Approx(oracle::sp2_symmetric_scalar(s_h)));
  }
  CHECK(oracle::sp2_symmetric_scalar(0.5) == doctest::Approx(96.0));
  CHECK(oracle::sp2_symmetric_scalar(2.0) == doctest::Approx(24.0));

  auto st = nk_stage(q(1));
  Vec<Rational> v = st.nk_result.vertical.col(0);
  auto qe = build_qk_quotient(st.nk, st.nk_result.vertical, v);
  CHECK(qe.report.passed());
  CHECK(qe.k == q(8));
  CHECK(quaternion_residual(qe.i).exact_zero);
  CHECK(check_quaternionic_parallelism(qe).passed());
}

TEST_CASE("the quaternionic span does not depend on the unit vertical vector") {
  auto st = nk_stage(1.0);
  const auto& vert = st.nk_result.vertical;
  Vec<double> v0 = vert.col(0);
  auto q0 = build_qk_quotient(st.nk, vert, v0);
  Mat<double> p0 = span_projector(q0.i);
  for (double theta : {0.4, 1.3, 2.9}) {
    Vec<double> v = std::cos(theta) * vert.col(0) + std::sin(theta) * vert.col(1);
    auto qv = build_qk_quotient(st.nk, vert, v);
    CAPTURE(theta);
    CHECK(qv.report.passed());
    // Both quotients share the base basis since the horizontal space is the same.
    CHECK((span_projector(qv.i) - p0).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("nablaJ2 resolves to k/2") {
  for (double alpha : {1.0, 0.5}) {
    auto st = nk_stage(alpha);
    Vec<double> v = st.nk_result.vertical.col(0);
    auto m = measure_nablaJ2(st.nk, st.nk_result.vertical, v);
    const double k = oracle::qk_k(alpha);
    CAPTURE(alpha);
    CHECK(m.scalar == doctest::Approx(k / 2));
    CHECK(m.matches_half_k);
    CHECK_FALSE(m.matches_half_k_squared);
    CHECK(m.report.passed());
  }
  auto st = nk_stage(q(1));
  Vec<Rational> v = st.nk_result.vertical.col(0);
  auto m = measure_nablaJ2(st.nk, st.nk_result.vertical, v);
  CHECK(m.scalar == q(4));
  CHECK(m.matches_half_k);
}

TEST_CASE("gates of the quaternionic construction") {
  auto st = nk_stage(1.0);
  const auto& vert = st.nk_result.vertical;
  auto expect_gate = [&](const Mat<double>& vv, const Vec<double>& v, const std::string& gate) {
    try {
      build_qk_quotient(st.nk, vv, v);
      FAIL("expected a gate error at " << gate);
    } catch (const GateError& e) {
      CHECK(e.gate() == gate);
    }
  };
  Mat<double> one = vert.col(0);
  expect_gate(one, Vec<double>(vert.col(0)), "dim-vertical");
  expect_gate(vert, Vec<double>(2.0 * vert.col(0)), "unit-V");
  // A J-invariant horizontal plane is not holonomy-invariant.
  Mat<double> plane(6, 2);
  plane.col(0) = st.nk_result.horizontal.col(0);
  plane.col(1) = st.nk.j * st.nk_result.horizontal.col(0);
  plane.col(1) /= std::sqrt(plane.col(1).dot(st.nk.model.metric() * plane.col(1)));
  plane.col(0) /= std::sqrt(plane.col(0).dot(st.nk.model.metric() * plane.col(0)));
  expect_gate(plane, Vec<double>(plane.col(0)), "holonomy-invariance");
}

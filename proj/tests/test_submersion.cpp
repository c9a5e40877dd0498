#include "helpers.hpp"

#include "skt/catalog.hpp"
#include "skt/linalg.hpp"
#include "skt/submersion.hpp"

#include <doctest.h>

using namespace skt;
using namespace testing;

namespace {

template <class S>
Mat<S> lifts(const LieModel<S>& m, const Mat<S>& v) {
  Mat<S> z(m.dim(), v.cols());
  for (Eigen::Index a = 0; a < v.cols(); ++a) z.col(a) = m.embed_m(Vec<S>(v.col(a)));
  return z;
}

template <class S>
QuotientModel<S> quotient_of(const SasakiModel<S>& s, const Mat<S>& v) {
  auto cc = canonical_connection(s.model, s.triple);
  SubmersionSpec<S> spec{s.model, cc.connection, v, lifts(s.model, v), "base"};
  return build_quotient(spec);
}

template <class S>
void check_base_connection(const QuotientModel<S>& q) {
  auto t = torsion_of(q.base, q.connection.lambda);
  CHECK(max_norm(t - q.torsion).value < 1e-12);
  CHECK(parallel_residual(q.connection, q.torsion).value < 1e-12);
  CHECK(q.report.get("riemannian_submersion").status == Status::Pass);
}

}  // namespace

TEST_CASE("projecttau") {
  auto s7 = sp2_s7<double>(1, 2);
  auto cc = canonical_connection(s7.model, s7.triple);
  Mat<double> v1 = Mat<double>(s7.triple.xi[0]);
  auto one = check_projecttau(s7.model, cc.connection, v1);
  CHECK(one.passed());
  CHECK(one.get("projecttau").residual == 0.0);

  Mat<double> v = vertical_basis(s7.triple);
  CHECK(check_projecttau(s7.model, cc.connection, v).passed());

  // eta_1 ^ eta_2 ^ X^flat for a horizontal X.
  auto extra = wedge(wedge(Tensor<double>::covector(s7.triple.eta[0]), Tensor<double>::covector(s7.triple.eta[1])),
                     flat(Tensor<double>::vector(unit<double>(7, 4)), s7.model.metric()));
  auto augmented = with_torsion(s7.model, cc.levi_civita, cc.connection.torsion + extra);
  CHECK_FALSE(check_projecttau(s7.model, augmented, v).passed());
}

TEST_CASE("torsion in torsion") {
  auto s3 = su2_3ad<double>(1, 2);
  auto c3 = canonical_connection(s3.model, s3.triple);
  CHECK(check_torsion_in_torsion(s3.model, c3.connection, vertical_basis(s3.triple)).get("torsion_in_torsion")
            .residual == 0.0);

  auto s7 = sp2_s7<double>(1, 2);
  auto cc = canonical_connection(s7.model, s7.triple);
  Mat<double> v1 = Mat<double>(s7.triple.xi[0]);
  auto rep = check_torsion_in_torsion(s7.model, cc.connection, v1, 1e-10);
  CHECK(rep.passed());

  auto exact = sp2_s7<Rational>(q(1), q(2));
  auto ce = canonical_connection(exact.model, exact.triple);
  CHECK(check_torsion_in_torsion(exact.model, ce.connection, Mat<Rational>(exact.triple.xi[0])).passed());

  // A torsion with a Lambda^3 H part breaks the identity.
  std::mt19937 rng(31);
  auto h = horizontal_of(s7.model.metric(), v1);
  Tensor<double> noise = Tensor<double>::form(7, 3);
  for (int a = 1; a < 6; ++a)
    noise += wedge(wedge(Tensor<double>::covector(random_vector(rng, 7)), Tensor<double>::covector(random_vector(rng, 7))),
                   Tensor<double>::covector(random_vector(rng, 7)));
  auto bad = with_torsion(s7.model, cc.levi_civita, cc.connection.torsion + compose_slots(noise, projector(h, s7.model.metric())));
  CHECK_FALSE(check_torsion_in_torsion(s7.model, bad, v1, 1e-10).passed());
}

TEST_CASE("fiber geometry") {
  auto s12 = sp2_s7<double>(1, 2);
  auto c12 = canonical_connection(s12.model, s12.triple);
  CHECK(check_fiber_geometry(s12.model, c12.connection, Mat<double>(s12.triple.xi[0])).passed());

  auto s11 = sp2_s7<double>(1, 1);
  auto c11 = canonical_connection(s11.model, s11.triple);
  CHECK(check_fiber_geometry(s11.model, c11.connection, vertical_basis(s11.triple)).passed());

  std::mt19937 rng(32);
  Mat<double> plane(7, 2);
  plane.col(0) = random_vector(rng, 7);
  plane.col(1) = random_vector(rng, 7);
  auto rep = check_fiber_geometry(s12.model, c12.connection, plane);
  CHECK(rep.get("(a) totally geodesic").status == Status::Fail);
}

TEST_CASE("quotient of S^3 along one Reeb field") {
  auto s3 = su2_3ad<double>(1, 2);
  auto q3 = quotient_of(s3, Mat<double>(s3.triple.xi[0]));
  CHECK(q3.base.dim_m() == 2);
  CHECK(q3.torsion.covariant() == 3);
  CHECK(max_norm(q3.torsion).value == 0.0);
  check_base_connection(q3);
}

TEST_CASE("quotient of parallel S^7 along xi_1") {
  auto s7 = sp2_s7<double>(1, 2);
  auto q = quotient_of(s7, Mat<double>(s7.triple.xi[0]));
  CHECK(q.base.dim_m() == 6);
  CHECK(q.report.passed());
  CHECK(max_norm(q.torsion).value > 0.1);
  check_base_connection(q);

  // Riemannian submersion on horizontal vectors.
  CHECK((q.lift.transpose() * s7.model.metric() * q.lift - q.base.metric()).cwiseAbs().maxCoeff() == 0.0);

  // T(xi_1, Y, Z) = 2 alpha Phi_1(Y, Z) for horizontal Y, Z.
  auto cc = canonical_connection(s7.model, s7.triple);
  auto phi1 = fundamental_form(s7.model.metric(), s7.triple.phi[0]);
  for (int y = 3; y < 7; ++y)
    for (int z = 3; z < 7; ++z) {
      auto ey = unit<double>(7, y), ez = unit<double>(7, z);
      CHECK(cc.connection.torsion(s7.triple.xi[0], ey, ez) == doctest::Approx(2.0 * phi1(ey, ez)));
    }
  CHECK(check_nablavert(s7.model, cc.connection, Mat<double>(s7.triple.xi[0])).passed());

  auto s3 = su2_3ad<double>(1, 2);
  auto c3 = canonical_connection(s3.model, s3.triple);
  CHECK(check_nablavert(s3.model, c3.connection, vertical_basis(s3.triple)).get("nablavert").status ==
        Status::Vacuous);
}

TEST_CASE("quotient of 3-Sasakian S^7 along all Reeb fields") {
  auto s7 = sp2_s7<Rational>(q(1), q(1));
  auto qb = quotient_of(s7, vertical_basis(s7.triple));
  CHECK(qb.base.dim_m() == 4);
  CHECK(max_norm(qb.torsion).exact_zero);
  CHECK(qb.report.passed());

  // span(xi_1) is not holonomy-invariant when beta != 0.
  try {
    quotient_of(s7, Mat<Rational>(s7.triple.xi[0]));
    FAIL("expected a gate error");
  } catch (const GateError& e) {
    CHECK(e.gate() == "vertical-invariance");
  }
}

TEST_CASE("quotient refuses bad lifts") {
  auto s7 = sp2_s7<double>(1, 2);
  auto cc = canonical_connection(s7.model, s7.triple);
  Mat<double> v = Mat<double>(s7.triple.xi[0]);
  Mat<double> wrong = lifts(s7.model, Mat<double>(s7.triple.xi[1]));
  try {
    build_quotient(SubmersionSpec<double>{s7.model, cc.connection, v, wrong, "base"});
    FAIL("expected a gate error");
  } catch (const GateError& e) {
    CHECK(e.gate() == "lifts");
  }
}

TEST_CASE("product splitting") {
  auto p = product_s3xs3<double>(1, 2, 1, 2);
  auto lc = levi_civita(p.model);
  auto c = with_torsion(p.model, lc, p.torsion);
  CHECK(check_product_splitting(p.model, c, p.v1, p.v2).passed());
  CHECK(check_product_splitting(p.model, c, p.v2, p.v1).passed());
  CHECK(check_product_splitting(p.model, lc, p.v1, p.v2).passed());

  auto s7 = sp2_s7<double>(1, 2);
  auto cc = canonical_connection(s7.model, s7.triple);
  Mat<double> v1 = Mat<double>(s7.triple.xi[0]);
  CHECK_FALSE(check_product_splitting(s7.model, cc.connection, v1, horizontal_of(s7.model.metric(), v1)).passed());
}

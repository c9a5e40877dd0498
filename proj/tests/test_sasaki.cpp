#include "helpers.hpp"
#include "oracles.hpp"

#include "skt/catalog.hpp"
#include "skt/sasaki.hpp"

#include <doctest.h>

using namespace skt;
using namespace testing;

namespace {

const std::vector<std::pair<double, double>> kGrid = {{1, 1}, {1, 2}, {2, 1}, {1, 5}};

template <class S>
std::array<double, 3> phi_on_reeb(const AlmostContactTriple<S>& t, const Mat<S>& g) {
  std::array<double, 3> out{};
  for (int p = 0; p < 3; ++p) {
    auto [i, j, k] = kEvenPermutations[p];
    out[i] = to_double(S(t.xi[j].dot(g * (t.phi[i] * t.xi[k]))));
  }
  return out;
}

// Independent assembly of the canonical torsion from wedge products.
template <class S>
Tensor<S> torsion_by_wedge(const LieModel<S>& m, const AlmostContactTriple<S>& t) {
  Tensor<S> out = Tensor<S>::form(m.dim_m(), 3);
  for (int i = 0; i < 3; ++i)
    out += S(2) * t.alpha * wedge(Tensor<S>::covector(t.eta[i]), fundamental_form(m.metric(), t.phi[i]));
  auto e123 = wedge(wedge(Tensor<S>::covector(t.eta[0]), Tensor<S>::covector(t.eta[1])),
                    Tensor<S>::covector(t.eta[2]));
  out -= S(2) * (t.alpha - t.delta) * e123;
  return out;
}

}  // namespace

TEST_CASE("almost contact metric 3-structures") {
  CHECK(validate_acm(su2_3ad<double>(1, 2).model, su2_3ad<double>(1, 2).triple).passed());
  auto s7 = sp2_s7<double>(1, 2);
  CHECK(validate_acm(s7.model, s7.triple).passed());
  auto exact = sp2_s7<Rational>(q(1), q(2));
  CHECK(validate_acm(exact.model, exact.triple).passed());

  auto broken = broken_acm<double>();
  auto rep = validate_acm(broken.model, broken.triple);
  CHECK_FALSE(rep.passed());
  CHECK(rep.failures().front()->name == "phi_phi_cyclic");

  // dim m = 6 is not 4n + 3.
  auto prod = product_s3xs3<double>(1, 2, 1, 2);
  CHECK_THROWS_AS(validate_acm(prod.model, s7.triple), std::invalid_argument);

  // The metric dual of each Reeb field is its 1-form.
  for (int i = 0; i < 3; ++i) {
    auto flat_xi = flat(Tensor<double>::vector(s7.triple.xi[i]), s7.model.metric());
    CHECK((flat_xi.as_vector() - s7.triple.eta[i]).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("3-(alpha,delta)-Sasaki condition") {
  for (double alpha : {0.5, 1.0, 3.0})
    for (double delta : {0.25, 1.0, 2.0}) {
      auto s3 = su2_3ad<double>(alpha, delta);
      CAPTURE(alpha);
      CAPTURE(delta);
      CHECK(check_3ad(s3.model, s3.triple).passed());
    }
  for (auto [a, d] : kGrid) {
    auto s7 = sp2_s7<double>(a, d);
    CHECK(check_3ad(s7.model, s7.triple).passed());
  }
  auto b = broken_3ad<double>();
  CHECK_FALSE(check_3ad(b.model, b.triple).passed());
  auto be = broken_3ad<Rational>();
  CHECK_FALSE(check_3ad(be.model, be.triple).passed());
}

TEST_CASE("wedge and interior product on Reeb data") {
  auto s7 = sp2_s7<double>(1, 2);
  auto phi1 = fundamental_form(s7.model.metric(), s7.triple.phi[0]);
  auto w = wedge(Tensor<double>::covector(s7.triple.eta[0]), phi1);
  for (int x = 3; x < 7; ++x)
    for (int y = 3; y < 7; ++y) {
      auto ex = unit<double>(7, x), ey = unit<double>(7, y);
      CHECK(w(s7.triple.xi[0], ex, ey) == doctest::Approx(phi1(ex, ey)));
    }

  // On S^3 every term of the torsion contributes to xi_1 _| T; the sum is
  // 2(delta - 4 alpha) eta_2 ^ eta_3.
  for (auto [a, d] : kGrid) {
    auto s3 = su2_3ad<double>(a, d);
    auto t = canonical_torsion(s3.model, s3.triple);
    auto e23 = wedge(Tensor<double>::covector(s3.triple.eta[1]), Tensor<double>::covector(s3.triple.eta[2]));
    CHECK(distance(interior_product(s3.triple.xi[0], t), oracle::torsion_on_reeb_closed(a, d) * e23) < 1e-12);
  }
}

TEST_CASE("canonical torsion") {
  for (auto [a, d] : kGrid) {
    for (bool sphere7 : {false, true}) {
      auto s = sphere7 ? sp2_s7<double>(a, d) : su2_3ad<double>(a, d);
      auto t = canonical_torsion(s.model, s.triple);
      CAPTURE(a);
      CAPTURE(d);
      CHECK(distance(t, torsion_by_wedge(s.model, s.triple)) < 1e-12);
      const double direct = t(s.triple.xi[0], s.triple.xi[1], s.triple.xi[2]);
      const double by_hand = oracle::torsion_on_reeb(a, d, phi_on_reeb(s.triple, s.model.metric()));
      CHECK(direct == doctest::Approx(by_hand));
      CHECK(direct == doctest::Approx(oracle::torsion_on_reeb_closed(a, d)));
    }
  }
  auto exact = sp2_s7<Rational>(q(1), q(2));
  CHECK(max_norm(canonical_torsion(exact.model, exact.triple) - torsion_by_wedge(exact.model, exact.triple))
            .exact_zero);
}

TEST_CASE("canonical connection and the beta law") {
  for (auto [a, d] : std::vector<std::pair<double, double>>{{1, 1}, {1, 2}, {2, 1}, {1, 0}, {1, 5}}) {
    auto s3 = su2_3ad<double>(a, d);
    auto c3 = canonical_connection(s3.model, s3.triple);
    CAPTURE(a);
    CAPTURE(d);
    CHECK(std::abs(to_double(c3.measured_beta) - oracle::beta(a, d)) < 1e-9);
    if (d == 0) {
      CHECK_THROWS_AS(sp2_s7<double>(a, d), std::domain_error);
      continue;
    }
    auto s7 = sp2_s7<double>(a, d);
    auto c7 = canonical_connection(s7.model, s7.triple);
    CHECK(std::abs(to_double(c7.measured_beta) - oracle::beta(a, d)) < 1e-9);
    CHECK(c7.report.passed());

    // nabla_{xi_3} phi_1 = beta phi_2, read off directly.
    auto d31 = nabla_invariant(s7.model, c7.connection, Tensor<double>::endomorphism(s7.triple.phi[0]),
                               s7.triple.xi[2]);
    CHECK((d31.as_matrix() - oracle::beta(a, d) * s7.triple.phi[1]).cwiseAbs().maxCoeff() < 1e-9);
  }

  auto par = sp2_s7<double>(1, 2);
  auto cp = canonical_connection(par.model, par.triple);
  CHECK(cp.beta == 0.0);
  for (int i = 0; i < 3; ++i) {
    CHECK(parallel_residual(cp.connection, Tensor<double>::endomorphism(par.triple.phi[i])).value < 1e-12);
    CHECK(parallel_residual(cp.connection, Tensor<double>::vector(par.triple.xi[i])).value < 1e-12);
  }

  auto exact = sp2_s7<Rational>(q(1), q(1));
  auto ce = canonical_connection(exact.model, exact.triple);
  CHECK(ce.measured_beta == q(-2));
  CHECK(ce.report.passed());
}

TEST_CASE("parallel torsion on every catalog model") {
  for (auto [a, d] : kGrid) {
    auto s3 = su2_3ad<Rational>(Rational(a), Rational(d));
    auto s7 = sp2_s7<Rational>(Rational(a), Rational(d));
    CHECK(parallel_torsion_residual(canonical_connection(s3.model, s3.triple).connection).exact_zero);
    CHECK(parallel_torsion_residual(canonical_connection(s7.model, s7.triple).connection).exact_zero);
    auto f7 = sp2_s7<double>(a, d);
    CHECK(parallel_torsion_residual(canonical_connection(f7.model, f7.triple).connection).value < 1e-10);
  }
}

TEST_CASE("canonical connection refuses a non 3-(alpha,delta) triple") {
  auto b = broken_3ad<double>();
  try {
    canonical_connection(b.model, b.triple);
    FAIL("expected a gate error");
  } catch (const GateError& e) {
    CHECK(e.gate() == "3ad");
  }
}

TEST_CASE("rotated triples") {
  auto s7 = sp2_s7<Rational>(q(1), q(2));
  Mat<Rational> r(3, 3);
  r << q(3, 5), q(4, 5), q(0), q(-4, 5), q(3, 5), q(0), q(0), q(0), q(1);
  auto rotated = rotate_triple(s7.triple, r);
  CHECK(validate_acm(s7.model, rotated).passed());
  CHECK(check_3ad(s7.model, rotated).passed());
  CHECK(max_norm(canonical_torsion(s7.model, rotated) - canonical_torsion(s7.model, s7.triple)).exact_zero);
}

TEST_CASE("Lie derivative identities") {
  for (auto [a, d] : kGrid) {
    auto s3 = su2_3ad<double>(a, d);
    auto s7 = sp2_s7<double>(a, d);
    CHECK(check_lie_identities(s3.model, s3.triple, 1e-10).passed());
    auto rep = check_lie_identities(s7.model, s7.triple, 1e-10);
    CHECK(rep.passed());
    CHECK(rep.max_residual() < 1e-10);
  }
  auto exact = sp2_s7<Rational>(q(1), q(5));
  CHECK(check_lie_identities(exact.model, exact.triple).passed());

  // The factor is 2 delta: rescaling one side breaks it.
  auto s7 = sp2_s7<double>(1, 2);
  auto lc = levi_civita(s7.model);
  auto l12 = lie_derivative(s7.model, lc, s7.triple.xi[0], Tensor<double>::endomorphism(s7.triple.phi[1]));
  CHECK((l12.as_matrix() - 4.0 * s7.triple.phi[2]).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("nearly Kaehler check") {
  // Flat R^2 with the standard complex structure is Kaehler.
  LieModel<double> flat2("flat", {"x", "y"}, std::vector<double>(8, 0.0), {}, Mat<double>::Identity(2, 2));
  Mat<double> j(2, 2);
  j << 0, -1, 1, 0;
  auto nk = make_nearly_kahler(flat2, j);
  CHECK(check_nearly_kahler(flat2, nk).passed());
  CHECK(max_norm(nk.characteristic_torsion).value == 0.0);

  // The polarized and tensor formulations agree on an arbitrary orthogonal J.
  auto prod = product_s3xs3<double>(1, 1, 1, 1);
  Mat<double> swap = Mat<double>::Zero(6, 6);
  swap.block(3, 0, 3, 3) = Mat<double>::Identity(3, 3);
  swap.block(0, 3, 3, 3) = -Mat<double>::Identity(3, 3);
  auto sw = make_nearly_kahler(prod.model, swap);
  auto rep = check_nearly_kahler(prod.model, sw);
  CHECK(rep.get("nk_formulations_agree").status == Status::Pass);
}

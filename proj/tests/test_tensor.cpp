#include "helpers.hpp"

#include "skt/catalog.hpp"
#include "skt/sasaki.hpp"

#include <doctest.h>

using namespace skt;
using namespace testing;

namespace {

Tensor<double> basis_covector(int n, int i) { return Tensor<double>::covector(unit<double>(n, i)); }

int sign(int p, int q) { return (p * q) % 2 == 0 ? 1 : -1; }

}  // namespace

TEST_CASE("wedge of a 1-form with itself vanishes") {
  std::mt19937 rng(1);
  auto eta = Tensor<double>::covector(random_vector(rng, 7));
  CHECK(max_norm(wedge(eta, eta)).value == 0.0);
}

TEST_CASE("wedge uses the shuffle convention") {
  auto w = wedge(basis_covector(3, 0), basis_covector(3, 1));
  CHECK(w({0, 1}) == 1.0);
  CHECK(w({1, 0}) == -1.0);

  // (eta ^ Phi)(xi, X, Y) = Phi(X, Y) when eta(xi) = 1 and eta(X) = eta(Y) = 0.
  std::mt19937 rng(2);
  const int n = 5;
  auto eta = basis_covector(n, 0);
  auto phi = random_form(rng, n, 2);
  for (int x = 1; x < n; ++x)
    for (int y = 1; y < n; ++y) CHECK(wedge(eta, phi)({0, x, y}) == doctest::Approx(phi({x, y})));
}

TEST_CASE("wedge degree beyond the dimension is rejected") {
  std::mt19937 rng(3);
  CHECK_THROWS_AS(wedge(random_form(rng, 3, 2), random_form(rng, 3, 2)), std::domain_error);
}

TEST_CASE("wedge is graded-commutative and alternating") {
  std::mt19937 rng(4);
  for (int n : {3, 5, 7, 10}) {
    for (int p = 1; p <= 3; ++p)
      for (int q = 1; q <= 3; ++q) {
        if (p + q > n || (n == 10 && p + q > 5)) continue;
        auto a = random_form(rng, n, p);
        auto b = random_form(rng, n, q);
        auto ab = wedge(a, b);
        auto ba = wedge(b, a);
        CAPTURE(n);
        CAPTURE(p);
        CAPTURE(q);
        CHECK(distance(ab, double(sign(p, q)) * ba) < 1e-12);
        CHECK(antisymmetry_residual(ab).value < 1e-12);
      }
  }
}

TEST_CASE("wedge is bilinear") {
  std::mt19937 rng(5);
  auto a = random_form(rng, 6, 2);
  auto a2 = random_form(rng, 6, 2);
  auto b = random_form(rng, 6, 3);
  CHECK(distance(wedge(2.5 * a + a2, b), 2.5 * wedge(a, b) + wedge(a2, b)) < 1e-12);
}

TEST_CASE("interior product is an antiderivation") {
  std::mt19937 rng(6);
  for (int p = 1; p <= 3; ++p)
    for (int q = 1; q <= 3; ++q) {
      const int n = 7;
      auto a = random_form(rng, n, p);
      auto b = random_form(rng, n, q);
      auto v = random_vector(rng, n);
      auto lhs = interior_product(v, wedge(a, b));
      Tensor<double> right_term = p % 2 == 0 ? 1.0 * wedge(a, interior_product(v, b))
                                             : -1.0 * wedge(a, interior_product(v, b));
      Tensor<double> rhs = right_term;
      if (p > 1) {
        rhs = wedge(interior_product(v, a), b) + right_term;
      } else {
        // v _| a is a scalar for a 1-form.
        double s = a.as_vector().dot(v);
        rhs = s * b + right_term;
      }
      CAPTURE(p);
      CAPTURE(q);
      CHECK(distance(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("interior product basics") {
  const int n = 3;
  auto e1 = basis_covector(n, 0), e2 = basis_covector(n, 1), e3 = basis_covector(n, 2);
  auto vol = wedge(wedge(e1, e2), e3);
  CHECK(distance(interior_product(unit<double>(n, 0), vol), wedge(e2, e3)) == 0.0);

  std::mt19937 rng(7);
  auto a = random_form(rng, 6, 3);
  auto v = random_vector(rng, 6);
  CHECK(max_norm(interior_product(v, interior_product(v, a))).value < 1e-14);

  Tensor<double> scalar(n, 0, 0);
  CHECK_THROWS_AS(interior_product(unit<double>(n, 0), scalar), std::invalid_argument);
}

TEST_CASE("cyclic sum against direct expansion") {
  std::mt19937 rng(8);
  auto t = random_tensor(rng, 4, 3);
  TrilinearOf<double> f = [&](const Vec<double>& x, const Vec<double>& y, const Vec<double>& z) {
    return t(x, y, z);
  };
  auto c = cyclic_sum(f);
  for (int trial = 0; trial < 5; ++trial) {
    auto x = random_vector(rng, 4), y = random_vector(rng, 4), z = random_vector(rng, 4);
    CHECK(c(x, y, z) == doctest::Approx(t(x, y, z) + t(y, z, x) + t(z, x, y)));
  }

  TrilinearOf<double> zero = [](const Vec<double>&, const Vec<double>&, const Vec<double>&) { return 0.0; };
  auto x = random_vector(rng, 4), y = random_vector(rng, 4), z = random_vector(rng, 4);
  CHECK(cyclic_sum(zero)(x, y, z) == 0.0);

  auto form = random_form(rng, 4, 3);
  TrilinearOf<double> g = [&](const Vec<double>& a, const Vec<double>& b, const Vec<double>& d) {
    return form(a, b, d);
  };
  CHECK(cyclic_sum(g)(x, y, z) == doctest::Approx(3.0 * form(x, y, z)));
}

TEST_CASE("endo_action") {
  std::mt19937 rng(9);
  const int n = 5;

  // Skew-adjoint A annihilates g.
  Mat<double> g = random_matrix(rng, n);
  g = g * g.transpose() + Mat<double>::Identity(n, n);
  Mat<double> k = random_matrix(rng, n);
  Mat<double> a = g.inverse() * (k - k.transpose());
  CHECK(max_norm(endo_action(a, Tensor<double>::bilinear(g))).value < 1e-12);

  // The identity commutes with every endomorphism.
  auto phi = Tensor<double>::endomorphism(random_matrix(rng, n));
  CHECK(max_norm(endo_action(Mat<double>(Mat<double>::Identity(n, n)), phi)).value == 0.0);

  // On an endomorphism the action is the commutator.
  Mat<double> b = random_matrix(rng, n);
  Mat<double> p = phi.as_matrix();
  CHECK((endo_action(b, phi).as_matrix() - (b * p - p * b)).cwiseAbs().maxCoeff() < 1e-12);

  // Leibniz rule on a wedge.
  auto eta = random_form(rng, n, 1);
  auto form = random_form(rng, n, 2);
  auto lhs = endo_action(b, wedge(eta, form));
  auto rhs = wedge(endo_action(b, eta), form) + wedge(eta, endo_action(b, form));
  CHECK(distance(lhs, rhs) < 1e-12);
}

TEST_CASE("endo_action is a Lie algebra action") {
  std::mt19937 rng(10);
  const int n = 4;
  for (auto [cov, con] : {std::pair{3, 0}, std::pair{2, 1}, std::pair{1, 1}, std::pair{0, 2}}) {
    auto s = random_tensor(rng, n, cov, con);
    Mat<double> a = random_matrix(rng, n), b = random_matrix(rng, n);
    Mat<double> ab = a * b - b * a;
    auto lhs = endo_action(ab, s);
    auto rhs = endo_action(a, endo_action(b, s)) - endo_action(b, endo_action(a, s));
    CHECK(distance(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("musical maps") {
  std::mt19937 rng(11);
  Mat<double> g = random_matrix(rng, 6);
  g = g * g.transpose() + Mat<double>::Identity(6, 6);
  auto v = Tensor<double>::vector(random_vector(rng, 6));
  CHECK(distance(sharp(flat(v, g), g), v) < 1e-12);

  Mat<double> d = Mat<double>::Identity(3, 3);
  d(0, 0) = 4.0;
  auto e1 = flat(Tensor<double>::vector(unit<double>(3, 0)), d);
  CHECK(distance(e1, 4.0 * basis_covector(3, 0)) == 0.0);
}

TEST_CASE("exact wedge and interior product") {
  const int n = 4;
  Vec<Rational> a(n), b(n);
  a << q(1, 2), q(-3), q(0), q(5, 7);
  b << q(2), q(1, 3), q(-1), q(0);
  auto wa = Tensor<Rational>::covector(a), wb = Tensor<Rational>::covector(b);
  auto ab = wedge(wa, wb);
  auto ba = wedge(wb, wa);
  CHECK(max_norm(ab + ba).exact_zero);
  CHECK(ab({0, 1}) == a(0) * b(1) - a(1) * b(0));
}

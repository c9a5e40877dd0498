// Acceptance run: one line per criterion, exit status 0 only if all pass.

#include "oracles.hpp"

#include "skt/suites.hpp"

#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace skt;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

const std::vector<std::pair<int, int>> kGrid = {{1, 1}, {1, 2}, {2, 1}, {1, 5}};

template <class S>
Vec<S> e1() {
  Vec<S> v = Vec<S>::Zero(3);
  v(0) = S(1);
  return v;
}

Tensor<double> tamper(const Tensor<double>& t, double factor) {
  std::size_t best = 0;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (std::abs(t[i]) > std::abs(t[best])) best = i;
  auto idx = t.unflatten(best);
  std::array<int, 3> p{idx[0], idx[1], idx[2]};
  std::sort(p.begin(), p.end());
  Tensor<double> out = t;
  do {
    out({p[0], p[1], p[2]}) *= factor;
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

double worst(const VerificationReport& r, const std::string& prefix = {}) {
  double w = 0.0;
  for (const auto& c : r.checks())
    if (prefix.empty() || c.name.rfind(prefix, 0) == 0) w = std::max(w, c.residual);
  return w;
}

void beta_law(Outcome& o) {
  double w = 0.0;
  for (auto [a, d] : kGrid) {
    for (bool s7 : {false, true}) {
      auto m = s7 ? sp2_s7<double>(a, d) : su2_3ad<double>(a, d);
      auto c = canonical_connection(m.model, m.triple);
      const double err = std::abs(to_double(c.measured_beta) - oracle::beta(a, d));
      w = std::max(w, err);
      o.require(err < 1e-9, m.model.name() + " (" + std::to_string(a) + "," + std::to_string(d) + ")");
      auto me = s7 ? sp2_s7<Rational>(Rational(a), Rational(d)) : su2_3ad<Rational>(Rational(a), Rational(d));
      auto ce = canonical_connection(me.model, me.triple);
      o.require(ce.measured_beta == Rational(2 * (d - 2 * a)), "exact " + me.model.name());
    }
  }
  o.detail << "max |beta - 2(delta - 2 alpha)| = " << w << " over 8 models";
}

void parallel_torsion(Outcome& o) {
  double w = 0.0;
  int models = 0;
  for (auto [a, d] : kGrid) {
    for (bool s7 : {false, true}) {
      auto m = s7 ? sp2_s7<double>(a, d) : su2_3ad<double>(a, d);
      const double r = parallel_torsion_residual(canonical_connection(m.model, m.triple).connection).value;
      w = std::max(w, r);
      o.require(r < 1e-10, m.model.name());
      auto me = s7 ? sp2_s7<Rational>(Rational(a), Rational(d)) : su2_3ad<Rational>(Rational(a), Rational(d));
      o.require(parallel_torsion_residual(canonical_connection(me.model, me.triple).connection).exact_zero,
                "exact " + me.model.name());
      ++models;
    }
  }
  o.detail << "max |nabla T| = " << w << " float, exact zero in rational mode, " << models << " models";
}

void bianchi(Outcome& o) {
  auto m = sp2_s7<double>(1, 2);
  auto c = canonical_connection(m.model, m.triple);
  auto rep = bianchi_check(m.model, c.connection, 1e-10);
  const double r = rep.get("bianchi_quadratic").residual;
  o.require(rep.passed() && r < 1e-10, "identity");
  auto bad = with_torsion(m.model, c.levi_civita, tamper(c.connection.torsion, 1.01));
  const double rt = bianchi_check(m.model, bad, 1e-10).get("bianchi_quadratic").residual;
  o.require(rt > 1e-4, "tamper detection");
  o.detail << "residual " << r << ", 1% tamper residual " << rt;
}

void lie_identities(Outcome& o) {
  double w = 0.0;
  for (auto [a, d] : kGrid) {
    for (bool s7 : {false, true}) {
      auto m = s7 ? sp2_s7<double>(a, d) : su2_3ad<double>(a, d);
      auto rep = check_lie_identities(m.model, m.triple, 1e-10);
      w = std::max(w, worst(rep));
      o.require(rep.passed(), m.model.name());
    }
  }
  auto ex = sp2_s7<Rational>(Rational(1), Rational(2));
  o.require(check_lie_identities(ex.model, ex.triple).passed(), "exact sp2_s7");
  o.detail << "max residual " << w << " (factor 2 delta)";
}

void nk_quotient(Outcome& o) {
  auto r = build_nk_quotient(sp2_s7<double>(1, 2), e1<double>(), 1e-10);
  auto tj = check_TJ_formulas(r, 1e-10);
  auto cm = check_characteristic_match(r, 1e-10);
  for (const char* n : {"J_squared", "checkT", "nabla_T_J"}) o.require(r.report.get(n).status == Status::Pass, n);
  o.require(worst(r.report, "nk/") < 1e-10 && r.report.passed(), "nearly Kaehler");
  o.require(tj.passed(), "TJ formulas");
  o.require(tj.get("TJ1").status == Status::Pass && tj.get("TJ2").status == Status::Pass, "TJ non-vacuous");
  o.require(cm.get("torsion_identity").status == Status::Pass, "torsion identity");
  auto ex = build_nk_quotient(sp2_s7<Rational>(Rational(1), Rational(2)), e1<Rational>());
  o.require(ex.report.passed() && check_TJ_formulas(ex).passed() && check_characteristic_match(ex).passed(),
            "exact");
  o.detail << "max residual " << std::max({worst(r.report), worst(tj), worst(cm)}) << ", exact mode clean";
}

void f_scalar(Outcome& o) {
  for (double alpha : {1.0, 0.5}) {
    auto r = build_nk_quotient(sp2_s7<double>(alpha, 2 * alpha), e1<double>(), 1e-10);
    auto f = compute_F(r, 1e-10);
    const double paths = (f.via_nabla - f.via_torsion).cwiseAbs().maxCoeff();
    const Eigen::Index h = f.via_nabla.rows();
    const double value = (f.via_nabla - oracle::nk_F(alpha) * Mat<double>::Identity(h, h)).cwiseAbs().maxCoeff();
    o.require(paths < 1e-10 && value < 1e-10, "alpha = " + std::to_string(alpha));
    o.detail << "alpha=" << alpha << ": F=" << to_double(f.scalar) << " (paths differ by " << paths << ") ";
  }
}

void qk_stage(Outcome& o) {
  auto r = build_nk_quotient(sp2_s7<double>(1, 2), e1<double>());
  auto nk = nearly_kahler_model(r);
  Vec<double> v = r.vertical.col(0);
  auto q = build_qk_quotient(nk, r.vertical, v);
  for (const char* n : {"I1I2=I3", "I2I3=I1", "I3I1=I2", "I1_squared", "I2_squared", "I3_squared"})
    o.require(q.report.get(n).status == Status::Pass, n);
  auto par = check_quaternionic_parallelism(q);
  o.require(par.get("span_closure").status == Status::Pass, "span closure");
  auto cs = curvature_summary(q.quotient.base, q.i[0]);
  o.require(cs.four_dimensional && cs.einstein_residual < 1e-8, "Einstein");
  o.require(cs.self_dual_weyl < 1e-8, "W+");
  o.detail << "k=" << q.k << ", relations " << worst(q.report) << ", closure "
           << par.get("span_closure").residual << ", Einstein " << cs.einstein_residual << ", |W+| "
           << cs.self_dual_weyl;
}

void negative_controls(Outcome& o) {
  std::string gate;
  try {
    build_nk_quotient(sp2_s7<double>(1, 1), e1<double>());
  } catch (const GateError& e) {
    gate = e.gate();
  }
  o.require(gate == "span(xi_1)-invariance", "sp2_s7(1,1) gate");

  auto r = build_nk_quotient(sp2_s7<double>(1, 2), e1<double>());
  auto bad = check_nearly_kahler(r.quotient.base, make_nearly_kahler(r.quotient.base, unflipped_j(r)));
  const auto failures = bad.failures();
  o.require(!failures.empty(), "unflipped J");
  const std::string nk_fail = failures.empty() ? "none" : failures.front()->name;

  auto jac = validate_model(broken_jacobi<double>());
  const auto jf = jac.failures();
  o.require(!jf.empty() && jf.front()->name == "jacobi", "broken_jacobi");
  o.detail << "refused at " << gate << "; unflipped J fails " << nk_fail << "; broken_jacobi fails "
           << (jf.empty() ? "none" : jf.front()->name);
}

void tower(Outcome& o) {
  auto t = run_tower(sp2_s7<double>(1, 2), 1e-9);
  o.require(t.report.passed(), "tower");
  o.require(!t.stage2_vacuous, "stage 2 ran");
  o.require(t.report.get("consistency/metric").status == Status::Pass, "metric");
  o.require(t.report.get("consistency/quaternionic_span").status == Status::Pass, "quaternionic span");
  o.detail << "metric " << t.report.get("consistency/metric").residual << ", span "
           << t.report.get("consistency/quaternionic_span").residual;
}

void nabla_j2(Outcome& o) {
  auto r = build_nk_quotient(sp2_s7<double>(1, 2), e1<double>());
  auto nk = nearly_kahler_model(r);
  Vec<double> v = r.vertical.col(0);
  auto m = measure_nablaJ2(nk, r.vertical, v);
  o.require(m.matches_half_k != m.matches_half_k_squared, "exactly one candidate");
  o.require(m.report.get("nablaJ2_resolution").status == Status::Pass, "resolution recorded");
  auto q = build_qk_quotient(nk, r.vertical, v);
  for (const char* n : {"I1_squared", "I2_squared", "I3_squared"})
    o.require(q.report.get(n).status == Status::Pass, n);
  o.detail << "(nabla_V J)^2 = -" << m.scalar << " id, k = " << m.k << ": " << m.verdict;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"beta law", beta_law},
      {"parallel torsion", parallel_torsion},
      {"Bianchi identity", bianchi},
      {"Lie identities", lie_identities},
      {"nearly Kaehler quotient", nk_quotient},
      {"F scalar", f_scalar},
      {"quaternionic stage", qk_stage},
      {"negative controls", negative_controls},
      {"tower consistency", tower},
      {"nablaJ2 resolution", nabla_j2},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    if (!o.ok) ++failed;
    std::printf("criterion %2zu %s  %s: %s\n", i + 1, o.ok ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.str().c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

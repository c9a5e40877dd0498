#include "helpers.hpp"

#include "skt/model_io.hpp"
#include "skt/suites.hpp"

#include <doctest.h>

#include <string>

using namespace skt;
using namespace testing;
using nlohmann::json;

namespace {

json su2_doc() {
  return json::parse(R"({
    "name": "su2_file",
    "dim": 3,
    "labels": ["xi1", "xi2", "xi3"],
    "structure_constants": [
      {"i": 1, "j": 2, "k": 3, "value": "4"},
      {"i": 2, "j": 3, "k": 1, "value": 4},
      {"i": 3, "j": 1, "k": 2, "value": "8/2"}
    ],
    "isotropy": [],
    "metric": [[1,0,0],[0,1,0],[0,0,1]],
    "tensors": {
      "xi": [[1,0,0],[0,1,0],[0,0,1]],
      "eta": [[1,0,0],[0,1,0],[0,0,1]],
      "phi": [[[0,0,0],[0,0,-1],[0,1,0]], [[0,0,1],[0,0,0],[-1,0,0]], [[0,-1,0],[1,0,0],[0,0,0]]]
    },
    "params": {"alpha": "1", "delta": "2"}
  })");
}

const std::string kModels = SKT_SOURCE_DIR "/models/";

}  // namespace

TEST_CASE("model files: parsing") {
  auto d = model_from_json<Rational>(su2_doc());
  CHECK(d.model.dim() == 3);
  CHECK(d.model.c(0, 1, 2) == q(4));
  CHECK(d.model.c(1, 0, 2) == q(-4));  // partner filled in
  REQUIRE(d.triple);
  CHECK(d.triple->delta == q(2));
  CHECK(validate_model(d.model).passed());
  CHECK(check_3ad(d.model, *d.triple).passed());

  auto reference = su2_3ad<Rational>(q(1), q(2));
  CHECK(d.model.fingerprint() == reference.model.fingerprint());
}

TEST_CASE("model files: rejected input") {
  auto unknown = su2_doc();
  unknown["colour"] = "blue";
  try {
    model_from_json<double>(unknown);
    FAIL("expected a format error");
  } catch (const ModelFormatError& e) {
    CHECK(std::string(e.what()).find("colour") != std::string::npos);
  }

  auto dup = su2_doc();
  dup["structure_constants"].push_back({{"i", 1}, {"j", 2}, {"k", 3}, {"value", 1}});
  CHECK_THROWS_AS(model_from_json<double>(dup), ModelFormatError);

  auto out_of_range = su2_doc();
  out_of_range["structure_constants"][0]["k"] = 4;
  CHECK_THROWS_AS(model_from_json<double>(out_of_range), ModelFormatError);

  auto bad_value = su2_doc();
  bad_value["metric"][0][0] = "one";
  CHECK_THROWS_AS(model_from_json<double>(bad_value), ModelFormatError);

  auto missing = su2_doc();
  missing.erase("dim");
  CHECK_THROWS_AS(model_from_json<double>(missing), ModelFormatError);

  CHECK_THROWS_AS(load_model_file<double>(kModels + "does_not_exist.json"), ModelFormatError);
}

TEST_CASE("model files: round trip") {
  ModelData<Rational> data;
  auto s7 = sp2_s7<Rational>(q(1), q(2));
  data.model = s7.model;
  data.triple = s7.triple;
  data.description = "round trip";
  auto doc = model_to_json(data);
  auto back = model_from_json<Rational>(json::parse(doc.dump()));
  CHECK(back.model.fingerprint() == s7.model.fingerprint());
  REQUIRE(back.triple);
  for (int i = 0; i < 3; ++i) {
    CHECK(back.triple->phi[i] == s7.triple.phi[i]);
    CHECK(back.triple->xi[i] == s7.triple.xi[i]);
  }
  CHECK(model_to_json(back).dump() == doc.dump());
}

TEST_CASE("shipped model files") {
  auto s7 = load_model_file<Rational>(kModels + "sp2_s7_1_2.json");
  CHECK(s7.model.fingerprint() == sp2_s7<Rational>(q(1), q(2)).model.fingerprint());
  auto nk = load_model_file<double>(kModels + "cp3_nk_1.json");
  REQUIRE(nk.j);
  CHECK(check_nearly_kahler(nk.model, make_nearly_kahler(nk.model, *nk.j)).passed());
  auto broken = load_model_file<double>(kModels + "broken_jacobi.json");
  CHECK_FALSE(validate_model(broken.model).passed());
}

TEST_CASE("resolving targets") {
  auto t = resolve_model<double>("sp2_s7", "");
  REQUIRE(t.data.triple);
  CHECK(t.data.triple->alpha == 1.0);
  CHECK(t.data.triple->delta == 2.0);
  auto t2 = resolve_model<Rational>("sp2_s7", "2,1");
  CHECK(t2.data.triple->alpha == q(2));

  CHECK_THROWS_AS(resolve_model<double>("sp2_s7", "1,0"), LoadError);
  CHECK_THROWS_AS(resolve_model<double>("sp2_s7", "1,2,3"), LoadError);
  CHECK_THROWS_AS(resolve_model<double>("sp2_s7", "1,x"), LoadError);
  CHECK_THROWS_AS(resolve_model<double>("nowhere", ""), LoadError);

  auto file = resolve_model<double>(kModels + "su2_3ad_1_2.json", "1,3");
  CHECK(file.data.triple->delta == 3.0);
}

TEST_CASE("suite selection") {
  CHECK(parse_suite_list("all") == suite_names());
  auto two = parse_suite_list("acm,nk");
  CHECK(two == std::vector<std::string>{"acm", "nk"});
  CHECK_THROWS_AS(parse_suite_list("acm,bogus"), LoadError);
}

TEST_CASE("all suites pass on parallel S^7") {
  auto t = resolve_model<double>("sp2_s7", "1,2");
  CHECK(load_validation(t, 1e-9).passed());
  for (const auto& s : suite_names()) {
    CAPTURE(s);
    CHECK(run_suite(t, s, 1e-9).passed());
  }
}

TEST_CASE("derived catalog entries") {
  for (const char* name : {"cp3_nk", "s4_qk", "su2_3ad", "product_s3xs3"}) {
    auto t = resolve_model<double>(name, "");
    CAPTURE(name);
    for (const auto& s : suite_names()) {
      CAPTURE(s);
      CHECK(run_suite(t, s, 1e-9).passed());
    }
  }
}

TEST_CASE("refusals are reported with their gate") {
  auto t = resolve_model<double>("sp2_s7", "1,1");
  auto rep = run_suite(t, "nk", 1e-9);
  CHECK(rep.refused());
  bool named = false;
  for (const auto& c : rep.checks())
    if (c.status == Status::Refused && c.name.find("gate:span(xi_1)-invariance") != std::string::npos) named = true;
  CHECK(named);

  auto acm = resolve_model<double>("broken_acm", "");
  CHECK_FALSE(run_suite(acm, "acm", 1e-9).passed());
  auto jac = resolve_model<double>("broken_jacobi", "");
  CHECK_FALSE(load_validation(jac, 1e-9).passed());
}

TEST_CASE("quotient tower") {
  auto s7 = sp2_s7<double>(1, 2);
  auto tower = run_tower(s7, 1e-9);
  CHECK(tower.report.passed());
  CHECK_FALSE(tower.stage2_vacuous);
  CHECK(tower.report.get("consistency/metric").residual < 1e-9);
  CHECK(tower.report.get("consistency/quaternionic_span").status == Status::Pass);

  auto exact = run_tower(sp2_s7<Rational>(q(1), q(2)), 0.0);
  CHECK(exact.report.passed());

  auto s3 = run_tower(su2_3ad<double>(1, 2), 1e-9);
  CHECK(s3.stage2_vacuous);
  CHECK(s3.report.passed());

  // Float noise at non-dyadic parameters stays far below the default tolerance.
  auto noisy = run_tower(sp2_s7<double>(0.3, 0.6), 1e-9);
  CHECK(noisy.report.passed());
  CHECK(noisy.report.max_residual() < 1e-12);
}

#pragma once

// Verification suites, the quotient tower and catalog regression values.

#include "skt/model_io.hpp"
#include "skt/qk_construction.hpp"

#include <optional>
#include <string>
#include <vector>

namespace skt {

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"acm", "3ad", "canonical-connection", "bianchi",
                                              "submersion-hypotheses", "nk", "qk"};
  return names;
}

// Raised for unknown models or suites, bad parameters and invalid models.
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class S>
struct Target {
  ModelData<S> data;
  std::string catalog_name;                 // empty for files
  std::optional<SasakiModel<S>> source;     // parallel model behind a derived entry
  std::optional<ProductModel<S>> product;
};

// A catalog name or a path to a model file. `params` is a comma-separated
// list ("1,2"); empty selects the catalog defaults. Throws LoadError.
template <class S>
Target<S> resolve_model(const std::string& ref, const std::string& params);

std::vector<std::string> parse_suite_list(const std::string& selector);

// validate_model plus structure checks; failures here map to exit code 2.
template <class S>
VerificationReport load_validation(const Target<S>& t, double tol);

template <class S>
VerificationReport run_suite(const Target<S>& t, const std::string& suite, double tol);

template <class S>
struct TowerResult {
  VerificationReport report;
  bool stage2_vacuous = false;
};

// M -> N (nearly Kaehler) -> base, compared with the direct quotient of M
// along span(xi_1, xi_2, xi_3).
template <class S>
TowerResult<S> run_tower(const SasakiModel<S>& m, double tol);

// Recomputes each expected value of a catalog entry at its default parameters.
VerificationReport reproduce_expected(const CatalogEntry& entry);

}  // namespace skt

#pragma once

// JSON model files. Indices are 1-based; a structure constant record
// {i, j, k, value} also sets c(j,i,k) = -value unless that record is given.
// Values are JSON numbers or strings ("2", "-1/3", "0.25").
//
//   {
//     "name": "su2_3ad",
//     "dim": 3,
//     "labels": ["xi1", "xi2", "xi3"],
//     "structure_constants": [{"i": 1, "j": 2, "k": 3, "value": "4"}, ...],
//     "isotropy": [],
//     "metric": [[1,0,0],[0,1,0],[0,0,1]],
//     "tensors": {"xi": [...], "eta": [...], "phi": [...]}   or {"J": [[...]], "V": [[...], [...]]},
//     "params": {"alpha": "1", "delta": "2"}                 or {"k": "8"}
//   }
//
// Vectors and matrices in "tensors" and "metric" are in the coordinates of m
// (the complement of the isotropy indices, in increasing order). Matrices are
// row-major; "V" lists the vertical basis vectors.

#include "skt/catalog.hpp"

#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>

namespace skt {

class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class S>
struct ModelData {
  LieModel<S> model;
  std::optional<AlmostContactTriple<S>> triple;
  std::optional<Mat<S>> j;
  std::optional<Mat<S>> vertical;
  std::optional<S> k;
  std::string description;
};

template <class S>
ModelData<S> model_from_json(const nlohmann::json& doc);

// Throws ModelFormatError for unreadable files and malformed content.
template <class S>
ModelData<S> load_model_file(const std::string& path);

template <class S>
nlohmann::ordered_json model_to_json(const ModelData<S>& data);

}  // namespace skt

#include "skt/model_io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace skt {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) { throw ModelFormatError(msg); }

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
  if (!obj.is_object()) fail(where + " must be an object");
  for (const auto& [key, value] : obj.items())
    if (!known.count(key)) fail("unknown field '" + key + "' in " + where);
}

template <class S>
S scalar_of(const json& v, const std::string& where) {
  try {
    if (v.is_string()) return parse_scalar<S>(v.get<std::string>());
    if (v.is_number_integer()) return S(v.get<long long>());
    if (v.is_number()) return parse_scalar<S>(v.dump());
  } catch (const std::exception& e) {
    fail("bad value in " + where + ": " + e.what());
  }
  fail(where + " must be a number or a string");
}

int index_of(const json& v, int dim, const std::string& where) {
  if (!v.is_number_integer()) fail(where + " must be an integer");
  const int i = v.get<int>();
  if (i < 1 || i > dim) fail(where + " = " + std::to_string(i) + " is outside 1.." + std::to_string(dim));
  return i - 1;
}

template <class S>
Vec<S> vector_of(const json& v, int n, const std::string& where) {
  if (!v.is_array() || static_cast<int>(v.size()) != n) fail(where + " must be an array of length " + std::to_string(n));
  Vec<S> out(n);
  for (int i = 0; i < n; ++i) out(i) = scalar_of<S>(v[static_cast<std::size_t>(i)], where);
  return out;
}

template <class S>
Mat<S> matrix_of(const json& v, int rows, int cols, const std::string& where) {
  if (!v.is_array() || static_cast<int>(v.size()) != rows)
    fail(where + " must have " + std::to_string(rows) + " rows");
  Mat<S> out(rows, cols);
  for (int r = 0; r < rows; ++r) out.row(r) = vector_of<S>(v[static_cast<std::size_t>(r)], cols, where).transpose();
  return out;
}

template <class S>
json scalar_json(const S& x) {
  if constexpr (is_exact_v<S>) {
    return format_rational(x);
  } else {
    return x;
  }
}

template <class S>
json vector_json(const Vec<S>& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(scalar_json(v(i)));
  return out;
}

template <class S>
json matrix_json(const Mat<S>& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_json<S>(m.row(r).transpose()));
  return out;
}

}  // namespace

template <class S>
ModelData<S> model_from_json(const json& doc) {
  reject_unknown(doc, {"name", "description", "dim", "labels", "structure_constants", "isotropy", "metric", "tensors",
                       "params"},
                 "model");
  for (const char* required : {"dim", "structure_constants", "metric"})
    if (!doc.contains(required)) fail(std::string("missing field '") + required + "'");
  ModelData<S> out;
  const std::string name = doc.value("name", std::string("model"));
  out.description = doc.value("description", std::string());
  if (!doc["dim"].is_number_integer() || doc["dim"].get<int>() < 1) fail("dim must be a positive integer");
  const int n = doc["dim"].get<int>();

  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    if (!doc["labels"].is_array() || static_cast<int>(doc["labels"].size()) != n)
      fail("labels must list " + std::to_string(n) + " names");
    for (const auto& l : doc["labels"]) labels.push_back(l.get<std::string>());
  } else {
    for (int i = 0; i < n; ++i) labels.push_back("e" + std::to_string(i + 1));
  }

  std::map<std::tuple<int, int, int>, S> given;
  const json& sc = doc["structure_constants"];
  if (!sc.is_array()) fail("structure_constants must be an array of records");
  for (const auto& rec : sc) {
    reject_unknown(rec, {"i", "j", "k", "value"}, "structure_constants record");
    for (const char* f : {"i", "j", "k", "value"})
      if (!rec.contains(f)) fail(std::string("structure_constants record lacks '") + f + "'");
    const int i = index_of(rec["i"], n, "structure_constants.i");
    const int j = index_of(rec["j"], n, "structure_constants.j");
    const int k = index_of(rec["k"], n, "structure_constants.k");
    if (!given.emplace(std::make_tuple(i, j, k), scalar_of<S>(rec["value"], "structure_constants.value")).second)
      fail("structure constant (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "," +
           std::to_string(k + 1) + ") is given twice");
  }
  std::vector<S> c(static_cast<std::size_t>(n * n * n), S(0));
  for (const auto& [key, value] : given) {
    const auto [i, j, k] = key;
    c[static_cast<std::size_t>((i * n + j) * n + k)] = value;
    if (!given.count(std::make_tuple(j, i, k))) c[static_cast<std::size_t>((j * n + i) * n + k)] = S(-value);
  }

  std::vector<int> iso;
  if (doc.contains("isotropy")) {
    if (!doc["isotropy"].is_array()) fail("isotropy must be an index list");
    for (const auto& v : doc["isotropy"]) iso.push_back(index_of(v, n, "isotropy"));
  }
  const int dm = n - static_cast<int>(iso.size());
  const Mat<S> metric = matrix_of<S>(doc["metric"], dm, dm, "metric");
  try {
    out.model = LieModel<S>(name, labels, std::move(c), iso, metric);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }

  std::optional<S> alpha, delta;
  if (doc.contains("params")) {
    const json& p = doc["params"];
    reject_unknown(p, {"alpha", "delta", "k"}, "params");
    if (p.contains("alpha")) alpha = scalar_of<S>(p["alpha"], "params.alpha");
    if (p.contains("delta")) delta = scalar_of<S>(p["delta"], "params.delta");
    if (p.contains("k")) out.k = scalar_of<S>(p["k"], "params.k");
  }
  if (doc.contains("tensors")) {
    const json& t = doc["tensors"];
    reject_unknown(t, {"xi", "eta", "phi", "J", "V"}, "tensors");
    const bool any_acm = t.contains("xi") || t.contains("eta") || t.contains("phi");
    if (any_acm) {
      for (const char* f : {"xi", "eta", "phi"})
        if (!t.contains(f)) fail(std::string("tensors.") + f + " is required with the other almost contact data");
      if (!alpha || !delta) fail("params.alpha and params.delta are required with almost contact data");
      AlmostContactTriple<S> tr;
      for (const char* f : {"xi", "eta", "phi"})
        if (!t[f].is_array() || t[f].size() != 3) fail(std::string("tensors.") + f + " must list three entries");
      for (int i = 0; i < 3; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        tr.xi[ui] = vector_of<S>(t["xi"][ui], dm, "tensors.xi");
        tr.eta[ui] = vector_of<S>(t["eta"][ui], dm, "tensors.eta");
        tr.phi[ui] = matrix_of<S>(t["phi"][ui], dm, dm, "tensors.phi");
      }
      tr.alpha = *alpha;
      tr.delta = *delta;
      out.triple = tr;
    }
    if (t.contains("J")) out.j = matrix_of<S>(t["J"], dm, dm, "tensors.J");
    if (t.contains("V")) {
      const json& v = t["V"];
      if (!v.is_array() || v.empty()) fail("tensors.V must list vertical vectors");
      Mat<S> vm(dm, static_cast<int>(v.size()));
      for (std::size_t a = 0; a < v.size(); ++a)
        vm.col(static_cast<Eigen::Index>(a)) = vector_of<S>(v[a], dm, "tensors.V");
      out.vertical = vm;
    }
  }
  return out;
}

template <class S>
ModelData<S> load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open model file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    fail("malformed model file '" + path + "': " + e.what());
  }
  return model_from_json<S>(doc);
}

template <class S>
nlohmann::ordered_json model_to_json(const ModelData<S>& data) {
  const LieModel<S>& m = data.model;
  const int n = m.dim();
  nlohmann::ordered_json out;
  out["name"] = m.name();
  if (!data.description.empty()) out["description"] = data.description;
  out["dim"] = n;
  out["labels"] = m.labels();
  json sc = json::array();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const S v = m.c(i, j, k);
        if (v == S(0)) continue;
        sc.push_back({{"i", i + 1}, {"j", j + 1}, {"k", k + 1}, {"value", scalar_json(v)}});
        if (!(m.c(j, i, k) == S(-v)))
          sc.push_back({{"i", j + 1}, {"j", i + 1}, {"k", k + 1}, {"value", scalar_json(m.c(j, i, k))}});
      }
  out["structure_constants"] = sc;
  json iso = json::array();
  for (int p : m.isotropy()) iso.push_back(p + 1);
  out["isotropy"] = iso;
  out["metric"] = matrix_json(m.metric());
  nlohmann::ordered_json tensors;
  nlohmann::ordered_json params;
  if (data.triple) {
    json xi = json::array(), eta = json::array(), phi = json::array();
    for (int i = 0; i < 3; ++i) {
      xi.push_back(vector_json(data.triple->xi[static_cast<std::size_t>(i)]));
      eta.push_back(vector_json(data.triple->eta[static_cast<std::size_t>(i)]));
      phi.push_back(matrix_json(data.triple->phi[static_cast<std::size_t>(i)]));
    }
    tensors["xi"] = xi;
    tensors["eta"] = eta;
    tensors["phi"] = phi;
    params["alpha"] = scalar_json(data.triple->alpha);
    params["delta"] = scalar_json(data.triple->delta);
  }
  if (data.j) tensors["J"] = matrix_json(*data.j);
  if (data.vertical) {
    json v = json::array();
    for (Eigen::Index a = 0; a < data.vertical->cols(); ++a) v.push_back(vector_json<S>(data.vertical->col(a)));
    tensors["V"] = v;
  }
  if (data.k) params["k"] = scalar_json(*data.k);
  if (!tensors.empty()) out["tensors"] = tensors;
  if (!params.empty()) out["params"] = params;
  return out;
}

template ModelData<double> model_from_json<double>(const json&);
template ModelData<Rational> model_from_json<Rational>(const json&);
template ModelData<double> load_model_file<double>(const std::string&);
template ModelData<Rational> load_model_file<Rational>(const std::string&);
template nlohmann::ordered_json model_to_json<double>(const ModelData<double>&);
template nlohmann::ordered_json model_to_json<Rational>(const ModelData<Rational>&);

}  // namespace skt

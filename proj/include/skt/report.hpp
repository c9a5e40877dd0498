#pragma once

#include "skt/scalar.hpp"

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace skt {

inline constexpr const char* kEngineVersion = "0.3.1";
inline constexpr int kReportSchemaVersion = 1;

enum class Status { Pass, Fail, Vacuous, Refused };

std::string to_string(Status s);

struct Check {
  std::string name;
  std::string anchor;  // identity being checked, or "plumbing"
  double residual = 0.0;
  double tolerance = 0.0;
  Status status = Status::Pass;
  bool exact = false;  // decided by exact zero test
  std::string notes;
};

// Float: pass iff residual < tol. Exact: pass iff every entry vanished.
template <class S>
Check make_check(std::string name, std::string anchor, const Residual& r, double tol, std::string notes = {}) {
  Check c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.residual = r.value;
  c.notes = std::move(notes);
  if constexpr (is_exact_v<S>) {
    c.exact = true;
    c.tolerance = 0.0;
    c.status = r.exact_zero ? Status::Pass : Status::Fail;
  } else {
    c.tolerance = tol;
    c.status = r.value < tol ? Status::Pass : Status::Fail;
  }
  return c;
}

Check vacuous_check(std::string name, std::string anchor, std::string notes);
Check refused_check(std::string name, std::string anchor, std::string notes);
// Boolean outcome without a meaningful residual (e.g. a dimension test).
Check flag_check(std::string name, std::string anchor, bool ok, std::string notes = {});

class VerificationReport {
 public:
  VerificationReport() = default;
  explicit VerificationReport(std::string suite, ArithmeticMode mode = ArithmeticMode::Float)
      : suite_(std::move(suite)), mode_(mode) {}

  const std::string& suite() const { return suite_; }
  ArithmeticMode mode() const { return mode_; }
  void set_mode(ArithmeticMode m) { mode_ = m; }
  const std::string& fingerprint() const { return fingerprint_; }
  void set_fingerprint(std::string f) { fingerprint_ = std::move(f); }

  Check& add(Check c);
  // Appends every check of `other`, prefixing names with "prefix/" when given.
  void merge(const VerificationReport& other, const std::string& prefix = {});
  void warn(std::string w) { warnings_.push_back(std::move(w)); }

  const std::vector<Check>& checks() const { return checks_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  const Check* find(const std::string& name) const;
  const Check& get(const std::string& name) const;

  // All non-vacuous checks pass and nothing was refused.
  bool passed() const;
  bool refused() const;
  double max_residual() const;
  std::vector<const Check*> failures() const;

  nlohmann::ordered_json to_json() const;
  std::string to_text() const;

 private:
  std::string suite_;
  ArithmeticMode mode_ = ArithmeticMode::Float;
  std::string fingerprint_;
  std::vector<Check> checks_;
  std::vector<std::string> warnings_;
};

// A construction refused at a named gate; carries the partial report.
class GateError : public std::runtime_error {
 public:
  GateError(std::string gate, const std::string& message, VerificationReport report = {});
  const std::string& gate() const { return gate_; }
  const VerificationReport& report() const { return report_; }

 private:
  std::string gate_;
  VerificationReport report_;
};

std::string fnv1a_hex(std::string_view data);

// Shortest round-trip decimal for a double, used in text output.
std::string format_double(double x);

}  // namespace skt

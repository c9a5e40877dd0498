#include "skt/report.hpp"

#include <charconv>
#include <cstdint>
#include <sstream>

namespace skt {

std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Vacuous: return "vacuous";
    case Status::Refused: return "refused";
  }
  return "unknown";
}

Check vacuous_check(std::string name, std::string anchor, std::string notes) {
  Check c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.status = Status::Vacuous;
  c.notes = std::move(notes);
  return c;
}

Check refused_check(std::string name, std::string anchor, std::string notes) {
  Check c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.status = Status::Refused;
  c.notes = std::move(notes);
  return c;
}

Check flag_check(std::string name, std::string anchor, bool ok, std::string notes) {
  Check c;
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.residual = ok ? 0.0 : 1.0;
  c.tolerance = 0.5;
  c.status = ok ? Status::Pass : Status::Fail;
  c.notes = std::move(notes);
  return c;
}

Check& VerificationReport::add(Check c) {
  checks_.push_back(std::move(c));
  return checks_.back();
}

void VerificationReport::merge(const VerificationReport& other, const std::string& prefix) {
  for (Check c : other.checks_) {
    if (!prefix.empty()) c.name = prefix + "/" + c.name;
    checks_.push_back(std::move(c));
  }
  for (const auto& w : other.warnings_) warnings_.push_back(prefix.empty() ? w : prefix + ": " + w);
}

const Check* VerificationReport::find(const std::string& name) const {
  for (const auto& c : checks_)
    if (c.name == name) return &c;
  return nullptr;
}

const Check& VerificationReport::get(const std::string& name) const {
  if (const Check* c = find(name)) return *c;
  throw std::out_of_range("no check named '" + name + "' in report '" + suite_ + "'");
}

bool VerificationReport::passed() const {
  for (const auto& c : checks_)
    if (c.status == Status::Fail || c.status == Status::Refused) return false;
  return true;
}

bool VerificationReport::refused() const {
  for (const auto& c : checks_)
    if (c.status == Status::Refused) return true;
  return false;
}

double VerificationReport::max_residual() const {
  double m = 0.0;
  for (const auto& c : checks_)
    if (c.status != Status::Vacuous && c.status != Status::Refused) m = std::max(m, c.residual);
  return m;
}

std::vector<const Check*> VerificationReport::failures() const {
  std::vector<const Check*> out;
  for (const auto& c : checks_)
    if (c.status == Status::Fail || c.status == Status::Refused) out.push_back(&c);
  return out;
}

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["suite"] = suite_;
  j["engine_version"] = kEngineVersion;
  j["mode"] = to_string(mode_);
  j["fingerprint"] = fingerprint_;
  j["passed"] = passed();
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : checks_) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["anchor"] = c.anchor;
    e["residual"] = c.residual;
    e["tolerance"] = c.tolerance;
    e["status"] = to_string(c.status);
    if (c.exact) e["exact"] = true;
    if (!c.notes.empty()) e["notes"] = c.notes;
    arr.push_back(std::move(e));
  }
  j["checks"] = std::move(arr);
  if (!warnings_.empty()) j["warnings"] = warnings_;
  return j;
}

std::string VerificationReport::to_text() const {
  std::ostringstream os;
  os << "suite " << suite_ << " [" << to_string(mode_) << "]";
  if (!fingerprint_.empty()) os << " model " << fingerprint_;
  os << "\n";
  for (const auto& c : checks_) {
    os << "  " << to_string(c.status);
    for (std::size_t pad = to_string(c.status).size(); pad < 8; ++pad) os << ' ';
    os << c.name;
    if (c.status == Status::Pass || c.status == Status::Fail) {
      if (c.exact) {
        os << "  " << (c.status == Status::Pass ? "exact zero" : "nonzero (max " + format_double(c.residual) + ")");
      } else {
        os << "  residual " << format_double(c.residual) << " (tol " << format_double(c.tolerance) << ")";
      }
    }
    if (!c.notes.empty()) os << "  -- " << c.notes;
    os << "\n";
  }
  for (const auto& w : warnings_) os << "  warning: " << w << "\n";
  os << (passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

GateError::GateError(std::string gate, const std::string& message, VerificationReport report)
    : std::runtime_error("refused at gate '" + gate + "': " + message),
      gate_(std::move(gate)),
      report_(std::move(report)) {}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace skt

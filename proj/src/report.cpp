#include "lb/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>

namespace lb {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::flagged:
      return "flagged";
  }
  return "unknown";
}

void Report::add(std::string name, CheckStatus status, double value, double tolerance) {
  checks.push_back({std::move(name), status, value, tolerance});
}

void Report::add_bounded(std::string name, double value, double tolerance) {
  CheckStatus st = std::abs(value) <= tolerance ? CheckStatus::pass : CheckStatus::fail;
  add(std::move(name), st, value, tolerance);
}

bool Report::passed() const {
  for (const auto& c : checks)
    if (c.status == CheckStatus::fail) return false;
  return true;
}

std::size_t Report::fail_count() const {
  std::size_t n = 0;
  for (const auto& c : checks)
    if (c.status == CheckStatus::fail) ++n;
  return n;
}

std::string format_double(double x) {
  char buf[40];
  // Find the shortest precision that parses back to the same bits.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

void append_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      default:
        out += c;
    }
  }
  out += '"';
}

}  // namespace

std::string to_json(const Report& report) {
  std::string out = "{\"subject\":";
  append_escaped(out, report.subject);
  out += ",\"checks\":[";
  bool first = true;
  for (const auto& c : report.checks) {
    if (!first) out += ',';
    first = false;
    out += "{\"name\":";
    append_escaped(out, c.name);
    out += ",\"status\":\"";
    out += to_string(c.status);
    out += "\",\"value\":";
    out += format_double(c.value);
    out += ",\"tolerance\":";
    out += format_double(c.tolerance);
    out += '}';
  }
  out += "],\"exit_status\":";
  out += std::to_string(report.exit_status());
  out += "}";
  return out;
}

}  // namespace lb

#pragma once

#include <string>
#include <vector>

namespace lb {

enum class CheckStatus { pass, fail, flagged };

const char* to_string(CheckStatus s);

struct CheckEntry {
  std::string name;
  CheckStatus status;
  double value;      // measured quantity
  double tolerance;  // threshold the check compared against
};

// Outcome of a verification pass: a named subject plus one entry per check.
// "flagged" entries are warnings; they do not affect pass/fail.
struct Report {
  std::string subject;
  std::vector<CheckEntry> checks;

  void add(std::string name, CheckStatus status, double value, double tolerance);
  // Convenience: pass iff |value| <= tolerance.
  void add_bounded(std::string name, double value, double tolerance);

  bool passed() const;
  int exit_status() const { return passed() ? 0 : 1; }
  std::size_t fail_count() const;
};

// Shortest decimal form that round-trips the double exactly.
std::string format_double(double x);

// Deterministic JSON rendering: fixed key order, no locale dependence.
std::string to_json(const Report& report);

}  // namespace lb

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace persnet {

struct Violation {
  std::string rule;
  std::string message;
};

/// Outcome of a structural validator. Validators never throw on a
/// violated axiom; they list every violation they find.
struct ValidationReport {
  std::vector<Violation> violations;
  /// Additional facts established during validation, e.g.
  /// "backward-conflict-free".
  std::map<std::string, bool> facts;

  bool ok() const noexcept { return violations.empty(); }

  bool has(std::string_view rule) const {
    return std::any_of(violations.begin(), violations.end(),
                       [&](const Violation& v) { return v.rule == rule; });
  }

  void add(std::string rule, std::string message) {
    violations.push_back({std::move(rule), std::move(message)});
  }

  void merge(const ValidationReport& other) {
    violations.insert(violations.end(), other.violations.begin(),
                      other.violations.end());
    for (const auto& [k, v] : other.facts) facts[k] = v;
  }
};

/// Outcome of a sampled property check.
struct PropertyResult {
  bool passed = true;
  std::size_t checked = 0;
  std::string counterexample;

  void fail(std::string witness) {
    if (passed) counterexample = std::move(witness);
    passed = false;
  }
};

/// Three-valued answer of a bounded search.
enum class Verdict { No, Yes, Unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::No: return "no";
    case Verdict::Yes: return "yes";
    default: return "unknown";
  }
}

}  // namespace persnet

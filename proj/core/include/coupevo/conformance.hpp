#pragma once

#include <string>
#include <vector>

#include "coupevo/metamodel.hpp"
#include "coupevo/model.hpp"

namespace coupevo {

struct Violation {
  std::string object_id;
  std::string resource_uri;
  std::string rule;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ConformanceOptions {
  /// Inside a custom migration span: tolerate slots for unknown features,
  /// unmet lower bounds and instances of abstract classes. Structural
  /// integrity (containment forest, reference resolution) is still checked.
  bool soften = false;
};

/// Violations are reported in document order; an empty result means the set
/// conforms to `metamodel`.
std::vector<Violation> check_conformance(const ResourceSet& set, const Metamodel& metamodel,
                                         ConformanceOptions options = {});

std::string format_violations(const std::vector<Violation>& violations, std::size_t limit = 20);

}  // namespace coupevo

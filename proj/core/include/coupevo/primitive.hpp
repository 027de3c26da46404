#pragma once

// Primitive metamodel edits, recorded when an author changes the metamodel
// directly instead of through a catalog operation.
//
//   create  target = owner path ("" for a package), payload
//           {"element": "package"|"classifier"|"feature"|"operation"|"annotation",
//            "document": <element document as in .mm.json>}
//   delete  target = element path; payload null, or {"annotation": source}
//   set     payload {"property": name, "value": v}
//   add     payload {"property": "supertypes"|"literals"|"params", "value": s}
//   remove  same shape as add

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "coupevo/metamodel.hpp"

namespace coupevo {

enum class PrimitiveKind { Create, Delete, Set, Add, Remove };

std::string_view to_string(PrimitiveKind kind) noexcept;
std::optional<PrimitiveKind> parse_primitive_kind(std::string_view text) noexcept;

struct PrimitiveChange {
  PrimitiveKind kind = PrimitiveKind::Set;
  std::string target;
  nlohmann::json payload;

  friend bool operator==(const PrimitiveChange&, const PrimitiveChange&) = default;
};

/// Edits `metamodel` in place. The result is not validated here.
/// Throws ReplayError when the change does not apply.
void apply_primitive(Metamodel& metamodel, const PrimitiveChange& change);

std::string describe(const PrimitiveChange& change);

}  // namespace coupevo

#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "coupevo/metamodel.hpp"

namespace coupevo {

/// Parses the textual literal form used for default values and CLI
/// arguments ("true", "42", "1.5", any string) into a typed JSON scalar.
std::optional<nlohmann::json> parse_literal(DataKind kind, std::string_view text);

bool matches_kind(const nlohmann::json& value, DataKind kind) noexcept;

/// Inverse of parse_literal for scalars.
std::string literal_text(const nlohmann::json& value);

/// Validates `text` as a default for an attribute typed by `type`.
bool valid_default(const Metamodel& metamodel, const std::string& type, std::string_view text);

}  // namespace coupevo

#include "coupevo/literal.hpp"

#include <charconv>
#include <cstdlib>

namespace coupevo {

std::optional<nlohmann::json> parse_literal(DataKind kind, std::string_view text) {
  switch (kind) {
    case DataKind::String:
      return nlohmann::json(std::string(text));
    case DataKind::Boolean:
      if (text == "true") return nlohmann::json(true);
      if (text == "false") return nlohmann::json(false);
      return std::nullopt;
    case DataKind::Integer: {
      long long value = 0;
      const auto* end = text.data() + text.size();
      auto [ptr, ec] = std::from_chars(text.data(), end, value);
      if (ec != std::errc() || ptr != end || text.empty()) return std::nullopt;
      return nlohmann::json(value);
    }
    case DataKind::Float: {
      if (text.empty()) return std::nullopt;
      const std::string owned(text);
      char* end = nullptr;
      const double value = std::strtod(owned.c_str(), &end);
      if (end != owned.c_str() + owned.size()) return std::nullopt;
      return nlohmann::json(value);
    }
  }
  return std::nullopt;
}

bool matches_kind(const nlohmann::json& value, DataKind kind) noexcept {
  switch (kind) {
    case DataKind::String: return value.is_string();
    case DataKind::Boolean: return value.is_boolean();
    case DataKind::Integer: return value.is_number_integer();
    case DataKind::Float: return value.is_number();
  }
  return false;
}

std::string literal_text(const nlohmann::json& value) {
  if (value.is_string()) return value.get<std::string>();
  return value.dump();
}

bool valid_default(const Metamodel& metamodel, const std::string& type, std::string_view text) {
  const Classifier* target = metamodel.find_classifier(type);
  if (target == nullptr) return false;
  if (target->is_enum()) {
    for (const auto& lit : target->literals) {
      if (lit == text) return true;
    }
    return false;
  }
  if (target->is_datatype()) return parse_literal(target->data_kind, text).has_value();
  return false;
}

}  // namespace coupevo

#pragma once

// Small checked accessors over nlohmann::json used by every file parser.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coupevo/error.hpp"

namespace coupevo::detail {

[[noreturn]] inline void parse_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, where + ": " + what);
}

inline const nlohmann::json& require(const nlohmann::json& obj, const char* key,
                                     const std::string& where) {
  if (!obj.is_object()) parse_fail(where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail(where, std::string("missing '") + key + "'");
  return *it;
}

inline std::string require_string(const nlohmann::json& obj, const char* key,
                                  const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_string()) parse_fail(where + "." + key, "expected a string");
  return v.get<std::string>();
}

inline std::string opt_string(const nlohmann::json& obj, const char* key, const std::string& where,
                              std::string fallback = {}) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) parse_fail(where + "." + key, "expected a string");
  return it->get<std::string>();
}

inline bool opt_bool(const nlohmann::json& obj, const char* key, const std::string& where,
                     bool fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) parse_fail(where + "." + key, "expected a boolean");
  return it->get<bool>();
}

inline int opt_int(const nlohmann::json& obj, const char* key, const std::string& where,
                   int fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) parse_fail(where + "." + key, "expected an integer");
  return it->get<int>();
}

inline const nlohmann::json& opt_array(const nlohmann::json& obj, const char* key,
                                       const std::string& where) {
  static const nlohmann::json empty = nlohmann::json::array();
  auto it = obj.find(key);
  if (it == obj.end()) return empty;
  if (!it->is_array()) parse_fail(where + "." + key, "expected an array");
  return *it;
}

inline std::vector<std::string> opt_string_list(const nlohmann::json& obj, const char* key,
                                                const std::string& where) {
  std::vector<std::string> out;
  const auto& arr = opt_array(obj, key, where);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) {
      parse_fail(where + "." + key + "[" + std::to_string(i) + "]", "expected a string");
    }
    out.push_back(arr[i].get<std::string>());
  }
  return out;
}

inline std::string at(const std::string& where, const char* key, std::size_t index) {
  return where + "." + key + "[" + std::to_string(index) + "]";
}

}  // namespace coupevo::detail

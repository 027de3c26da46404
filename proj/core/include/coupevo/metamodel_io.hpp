#pragma once

// ".mm.json" reading and writing. Element-level converters are exposed
// because history primitives embed element documents.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "coupevo/metamodel.hpp"

namespace coupevo {

nlohmann::json to_json(const Metamodel& metamodel);
nlohmann::json to_json(const Package& package);
nlohmann::json to_json(const Classifier& classifier);
nlohmann::json to_json(const Feature& feature);
nlohmann::json to_json(const OperationSignature& operation);
nlohmann::json to_json(const Annotation& annotation);

/// All parsers throw Error(ParseError) naming the offending location;
/// `where` prefixes that location.
Metamodel metamodel_from_json(const nlohmann::json& doc, const std::string& where = "$");
Package package_from_json(const nlohmann::json& doc, const std::string& where = "$");
Classifier classifier_from_json(const nlohmann::json& doc, const std::string& where = "$");
Feature feature_from_json(const nlohmann::json& doc, const std::string& where = "$");
OperationSignature operation_from_json(const nlohmann::json& doc, const std::string& where = "$");
Annotation annotation_from_json(const nlohmann::json& doc, const std::string& where = "$");

Metamodel load_metamodel(const std::filesystem::path& path);
void save_metamodel(const Metamodel& metamodel, const std::filesystem::path& path);

}  // namespace coupevo

#pragma once

// ".model.json" reading and writing.
//
//   {
//     "header": {"nsUri": "...", "members": ["other.model.json"]},
//     "roots": [ {"id": "...", "class": "pkg.Class", "slots": {...}} ]
//   }
//
// Slot values: JSON scalars are primitives, {"literal": L} is an enum value,
// {"ref": "#id"} or {"ref": "path.model.json#id"} a reference, and a nested
// object carrying "id" and "class" is a contained child.

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "coupevo/model.hpp"

namespace coupevo {

/// Loads the listed files plus every file they declare as members or refer
/// to, transitively. Resource uris are relative to the directory of the
/// first path. Throws ParseError, IoError, UnresolvedRef, MixedNsUri.
ResourceSet load_resource_set(const std::vector<std::filesystem::path>& paths);

/// Writes one file per resource under `out_dir`, keeping the relative uris.
std::vector<std::filesystem::path> save_resource_set(const ResourceSet& set,
                                                     const std::filesystem::path& out_dir);

nlohmann::json resource_to_json(const ResourceSet& set, const Resource& resource);
/// Parses one resource document. Reference targets are resolved relative to
/// `uri`; they are not checked for existence here.
Resource resource_from_json(const nlohmann::json& doc, const std::string& uri, std::string* ns_uri);

}  // namespace coupevo

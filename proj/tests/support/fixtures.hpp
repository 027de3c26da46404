#pragma once

// Shared test helpers: random small metamodel/model fixtures, random
// arguments for every catalog operation, and the transaction property run
// used by both the unit tests and the acceptance binary.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "coupevo/catalog.hpp"
#include "coupevo/history.hpp"
#include "coupevo/metamodel.hpp"
#include "coupevo/model.hpp"

namespace coupevo::testing {

std::filesystem::path scenario_dir();
std::filesystem::path acceptance_data_dir();
/// Fresh empty directory under the system temp dir.
std::filesystem::path fresh_temp_dir(const std::string& name);

struct Fixture {
  Metamodel mm;
  ResourceSet set;
};

struct FixtureLimits {
  int max_classes = 6;
  int max_objects = 20;
};

/// A valid metamodel with one package "p" and a conforming model spread over
/// one or two resources. Deterministic for a given generator state.
Fixture random_fixture(std::mt19937& rng, const FixtureLimits& limits = {});

/// Plausible arguments for `op` on `fixture.mm`, or nothing when the
/// metamodel offers no candidate. In wild mode arguments are drawn from every
/// element path so that constraints fail often.
std::optional<OperationApplication> random_application(const std::string& op, const Fixture& fixture, std::mt19937& rng,
                                                       bool wild = false);

struct PropertyStats {
  int applied = 0;   // constraints held and migration produced a conforming set
  int refused = 0;   // constraints held, migration raised MigrationError
  int rejected = 0;  // some constraint failed
  int attempts = 0;
  std::map<std::string, int> refusal_reasons;
  std::vector<std::string> failures;
};

/// Runs fixtures until `wanted` conforming applications and a few rejected
/// ones were seen, or `max_attempts` is reached. Every outcome is checked:
/// applied results conform, refused and rejected ones leave inputs unchanged.
PropertyStats run_transaction_property(const std::string& op, std::uint32_t seed, int wanted = 25,
                                       int max_attempts = 4000);

/// A tiny hand-written metamodel ("lib", urn:lib/1):
///   Item (abstract; code: String, identifier)
///   Book extends Item (title: String [1] = "untitled", genre: Genre,
///                      authors: Person [*] <-> Person.wrote)
///   Person (name: String, wrote: Book [*] <-> Book.authors)
///   Library (name: String, books: Book [*] containment, members: Person [*] containment)
///   Genre = novel | poem
Metamodel library_metamodel();
/// lib.model.json holds Library "city" with books b1 and b2; people.model.json
/// holds Library "club" with persons p1 (wrote b1, b2) and p2 (wrote b2).
ResourceSet library_model();

/// The bundled mini-GMF scenario.
struct Scenario {
  History history;
  ResourceSet v10;
  ResourceSet expected_v20;
  ResourceSet expected_v21;
  std::vector<Metamodel> snapshots;  // by release ordinal
};

Scenario load_scenario();

}  // namespace coupevo::testing

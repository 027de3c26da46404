#pragma once

// The metametamodel: the language evolving metamodels are written in.
//
// Elements refer to each other by qualified-name paths ("pkg.Class",
// "pkg.Class.feature") rather than pointers, so a Metamodel is a plain value:
// copying it is a deep copy and equality is structural.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace coupevo {

enum class DataKind { String, Boolean, Integer, Float };

std::string_view to_string(DataKind kind) noexcept;
std::optional<DataKind> parse_data_kind(std::string_view text) noexcept;

inline constexpr int kUnbounded = -1;

struct Annotation {
  std::string source;
  std::map<std::string, std::string> details;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

using Annotations = std::vector<Annotation>;

const Annotation* find_annotation(const Annotations& annotations, std::string_view source);
Annotation* find_annotation(Annotations& annotations, std::string_view source);

enum class FeatureKind { Attribute, Reference };

struct Feature {
  FeatureKind kind = FeatureKind::Attribute;
  std::string name;
  std::string type;  // qualified classifier name
  int lower = 0;
  int upper = 1;  // kUnbounded for "*"
  bool changeable = true;
  bool is_volatile = false;
  bool ordered = true;
  // Attribute only.
  bool identifier = false;
  std::optional<std::string> default_value;
  // Reference only.
  bool containment = false;
  std::optional<std::string> opposite;  // qualified path of the opposite reference
  Annotations annotations;

  bool is_attribute() const noexcept { return kind == FeatureKind::Attribute; }
  bool is_reference() const noexcept { return kind == FeatureKind::Reference; }
  bool many() const noexcept { return upper == kUnbounded || upper > 1; }

  friend bool operator==(const Feature&, const Feature&) = default;
};

/// Name and parameter names only; operation behaviour is not modelled.
struct OperationSignature {
  std::string name;
  std::vector<std::string> params;
  Annotations annotations;

  friend bool operator==(const OperationSignature&, const OperationSignature&) = default;
};

enum class ClassifierKind { Class, Enumeration, DataType };

struct Classifier {
  ClassifierKind kind = ClassifierKind::Class;
  std::string name;
  Annotations annotations;
  // Class.
  bool is_abstract = false;
  bool is_interface = false;
  std::vector<std::string> supertypes;  // qualified class names
  std::vector<Feature> features;
  std::vector<OperationSignature> operations;
  // Enumeration.
  std::vector<std::string> literals;
  // DataType.
  DataKind data_kind = DataKind::String;

  bool is_class() const noexcept { return kind == ClassifierKind::Class; }
  bool is_enum() const noexcept { return kind == ClassifierKind::Enumeration; }
  bool is_datatype() const noexcept { return kind == ClassifierKind::DataType; }
  bool instantiable() const noexcept { return is_class() && !is_abstract && !is_interface; }

  const Feature* find_feature(std::string_view feature_name) const;
  Feature* find_feature(std::string_view feature_name);
  const OperationSignature* find_operation(std::string_view op_name) const;

  friend bool operator==(const Classifier&, const Classifier&) = default;
};

struct Package {
  std::string name;
  std::string ns_uri;
  std::vector<Classifier> classifiers;
  Annotations annotations;

  const Classifier* find_classifier(std::string_view classifier_name) const;
  Classifier* find_classifier(std::string_view classifier_name);

  friend bool operator==(const Package&, const Package&) = default;
};

struct Metamodel {
  std::vector<Package> packages;

  const Package* find_package(std::string_view package_name) const;
  Package* find_package(std::string_view package_name);

  /// Lookup by "pkg.Name"; nullptr when absent.
  const Classifier* find_classifier(std::string_view qualified) const;
  Classifier* find_classifier(std::string_view qualified);
  /// As find_classifier, but only returns classes.
  const Classifier* find_class(std::string_view qualified) const;
  Classifier* find_class(std::string_view qualified);

  friend bool operator==(const Metamodel&, const Metamodel&) = default;
};

// ---------------------------------------------------------------------------
// Qualified names

struct ElementRef {
  std::string path;

  friend bool operator==(const ElementRef&, const ElementRef&) = default;
};

std::vector<std::string> split_path(std::string_view path);
std::string join_path(std::string_view head, std::string_view tail);
/// "pkg.Class.feature" -> "pkg.Class"
std::string parent_path(std::string_view path);
/// "pkg.Class.feature" -> "feature"
std::string last_segment(std::string_view path);

enum class ElementKind { Package, Classifier, Feature, Operation };

std::string_view to_string(ElementKind kind) noexcept;

template <bool Const>
struct BasicElement {
  template <typename T>
  using Ptr = std::conditional_t<Const, const T*, T*>;

  ElementKind kind = ElementKind::Package;
  Ptr<Package> package = nullptr;
  Ptr<Classifier> classifier = nullptr;
  Ptr<Feature> feature = nullptr;
  Ptr<OperationSignature> operation = nullptr;

  auto& annotations() const {
    switch (kind) {
      case ElementKind::Package: return package->annotations;
      case ElementKind::Classifier: return classifier->annotations;
      case ElementKind::Feature: return feature->annotations;
      case ElementKind::Operation: break;
    }
    return operation->annotations;
  }
};

using Element = BasicElement<false>;
using ConstElement = BasicElement<true>;

/// Resolves "pkg", "pkg.Classifier", or "pkg.Class.member" where member is a
/// feature or, failing that, an operation signature. Throws DanglingRef.
Element resolve(Metamodel& metamodel, const ElementRef& ref);
ConstElement resolve(const Metamodel& metamodel, const ElementRef& ref);
/// Non-throwing variant.
std::optional<ConstElement> try_resolve(const Metamodel& metamodel, std::string_view path);

// ---------------------------------------------------------------------------
// Navigation

struct OwnedFeature {
  std::string owner;  // qualified class name
  const Feature* feature = nullptr;
};

/// Inherited features first (supertypes in declaration order, depth first),
/// then own features. A feature reachable along several paths appears once.
std::vector<OwnedFeature> feature_closure(const Metamodel& metamodel, std::string_view class_name);
std::vector<const Feature*> all_features(const Metamodel& metamodel, std::string_view class_name);
/// The feature named `feature_name` in the closure of `class_name`, if any.
std::optional<OwnedFeature> find_feature(const Metamodel& metamodel, std::string_view class_name,
                                         std::string_view feature_name);

/// Reflexive transitive supertype closure.
std::set<std::string> supertype_closure(const Metamodel& metamodel, std::string_view class_name);
bool is_subtype(const Metamodel& metamodel, std::string_view sub, std::string_view sup);
std::vector<std::string> direct_subclasses(const Metamodel& metamodel, std::string_view class_name);
/// Reflexive: includes `class_name` itself. Declaration order.
std::vector<std::string> subtype_closure(const Metamodel& metamodel, std::string_view class_name);
/// Every class in declaration order, qualified.
std::vector<std::string> all_classes(const Metamodel& metamodel);

// ---------------------------------------------------------------------------
// Validation

struct MetaViolation {
  std::string element;
  std::string rule;
  std::string message;

  friend bool operator==(const MetaViolation&, const MetaViolation&) = default;
};

std::vector<MetaViolation> validate_metamodel(const Metamodel& metamodel);

}  // namespace coupevo

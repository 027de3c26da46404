#include "coupevo/metamodel.hpp"

#include <algorithm>
#include <functional>

#include "coupevo/error.hpp"

namespace coupevo {

std::string_view to_string(DataKind kind) noexcept {
  switch (kind) {
    case DataKind::String: return "string";
    case DataKind::Boolean: return "boolean";
    case DataKind::Integer: return "integer";
    case DataKind::Float: return "float";
  }
  return "string";
}

std::optional<DataKind> parse_data_kind(std::string_view text) noexcept {
  if (text == "string") return DataKind::String;
  if (text == "boolean") return DataKind::Boolean;
  if (text == "integer") return DataKind::Integer;
  if (text == "float") return DataKind::Float;
  return std::nullopt;
}

std::string_view to_string(ElementKind kind) noexcept {
  switch (kind) {
    case ElementKind::Package: return "package";
    case ElementKind::Classifier: return "classifier";
    case ElementKind::Feature: return "feature";
    case ElementKind::Operation: return "operation";
  }
  return "element";
}

const Annotation* find_annotation(const Annotations& annotations, std::string_view source) {
  auto it = std::find_if(annotations.begin(), annotations.end(),
                         [&](const Annotation& a) { return a.source == source; });
  return it == annotations.end() ? nullptr : &*it;
}

Annotation* find_annotation(Annotations& annotations, std::string_view source) {
  auto it = std::find_if(annotations.begin(), annotations.end(),
                         [&](const Annotation& a) { return a.source == source; });
  return it == annotations.end() ? nullptr : &*it;
}

const Feature* Classifier::find_feature(std::string_view feature_name) const {
  for (const auto& f : features) {
    if (f.name == feature_name) return &f;
  }
  return nullptr;
}

Feature* Classifier::find_feature(std::string_view feature_name) {
  for (auto& f : features) {
    if (f.name == feature_name) return &f;
  }
  return nullptr;
}

const OperationSignature* Classifier::find_operation(std::string_view op_name) const {
  for (const auto& op : operations) {
    if (op.name == op_name) return &op;
  }
  return nullptr;
}

const Classifier* Package::find_classifier(std::string_view classifier_name) const {
  for (const auto& c : classifiers) {
    if (c.name == classifier_name) return &c;
  }
  return nullptr;
}

Classifier* Package::find_classifier(std::string_view classifier_name) {
  for (auto& c : classifiers) {
    if (c.name == classifier_name) return &c;
  }
  return nullptr;
}

const Package* Metamodel::find_package(std::string_view package_name) const {
  for (const auto& p : packages) {
    if (p.name == package_name) return &p;
  }
  return nullptr;
}

Package* Metamodel::find_package(std::string_view package_name) {
  for (auto& p : packages) {
    if (p.name == package_name) return &p;
  }
  return nullptr;
}

const Classifier* Metamodel::find_classifier(std::string_view qualified) const {
  const auto dot = qualified.find('.');
  if (dot == std::string_view::npos) return nullptr;
  const Package* pkg = find_package(qualified.substr(0, dot));
  if (pkg == nullptr) return nullptr;
  return pkg->find_classifier(qualified.substr(dot + 1));
}

Classifier* Metamodel::find_classifier(std::string_view qualified) {
  return const_cast<Classifier*>(std::as_const(*this).find_classifier(qualified));
}

const Classifier* Metamodel::find_class(std::string_view qualified) const {
  const Classifier* c = find_classifier(qualified);
  return c != nullptr && c->is_class() ? c : nullptr;
}

Classifier* Metamodel::find_class(std::string_view qualified) {
  return const_cast<Classifier*>(std::as_const(*this).find_class(qualified));
}

// ---------------------------------------------------------------------------

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    parts.emplace_back(path.substr(start, dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return parts;
}

std::string join_path(std::string_view head, std::string_view tail) {
  std::string out(head);
  out += '.';
  out += tail;
  return out;
}

std::string parent_path(std::string_view path) {
  const auto dot = path.rfind('.');
  return dot == std::string_view::npos ? std::string() : std::string(path.substr(0, dot));
}

std::string last_segment(std::string_view path) {
  const auto dot = path.rfind('.');
  return std::string(dot == std::string_view::npos ? path : path.substr(dot + 1));
}

namespace {

template <bool Const, typename MM>
std::optional<BasicElement<Const>> resolve_impl(MM& metamodel, std::string_view path) {
  if (path.empty()) return std::nullopt;
  const auto parts = split_path(path);
  if (parts.size() > 3) return std::nullopt;
  for (const auto& p : parts) {
    if (p.empty()) return std::nullopt;
  }
  BasicElement<Const> element;
  element.package = metamodel.find_package(parts[0]);
  if (element.package == nullptr) return std::nullopt;
  element.kind = ElementKind::Package;
  if (parts.size() == 1) return element;

  element.classifier = element.package->find_classifier(parts[1]);
  if (element.classifier == nullptr) return std::nullopt;
  element.kind = ElementKind::Classifier;
  if (parts.size() == 2) return element;

  if (!element.classifier->is_class()) return std::nullopt;
  for (auto& f : element.classifier->features) {
    if (f.name == parts[2]) {
      element.feature = &f;
      element.kind = ElementKind::Feature;
      return element;
    }
  }
  for (auto& op : element.classifier->operations) {
    if (op.name == parts[2]) {
      element.operation = &op;
      element.kind = ElementKind::Operation;
      return element;
    }
  }
  return std::nullopt;
}

}  // namespace

Element resolve(Metamodel& metamodel, const ElementRef& ref) {
  auto found = resolve_impl<false>(metamodel, ref.path);
  if (!found) throw Error(ErrorCode::DanglingRef, "no element at '" + ref.path + "'");
  return *found;
}

ConstElement resolve(const Metamodel& metamodel, const ElementRef& ref) {
  auto found = resolve_impl<true>(metamodel, ref.path);
  if (!found) throw Error(ErrorCode::DanglingRef, "no element at '" + ref.path + "'");
  return *found;
}

std::optional<ConstElement> try_resolve(const Metamodel& metamodel, std::string_view path) {
  return resolve_impl<true>(metamodel, path);
}

// ---------------------------------------------------------------------------

std::vector<OwnedFeature> feature_closure(const Metamodel& metamodel, std::string_view class_name) {
  std::vector<OwnedFeature> out;
  std::set<std::string> visited;
  std::function<void(const std::string&)> visit = [&](const std::string& name) {
    if (!visited.insert(name).second) return;
    const Classifier* cls = metamodel.find_class(name);
    if (cls == nullptr) return;
    for (const auto& sup : cls->supertypes) visit(sup);
    for (const auto& f : cls->features) out.push_back({name, &f});
  };
  visit(std::string(class_name));
  return out;
}

std::vector<const Feature*> all_features(const Metamodel& metamodel, std::string_view class_name) {
  std::vector<const Feature*> out;
  for (const auto& owned : feature_closure(metamodel, class_name)) out.push_back(owned.feature);
  return out;
}

std::optional<OwnedFeature> find_feature(const Metamodel& metamodel, std::string_view class_name,
                                         std::string_view feature_name) {
  for (auto& owned : feature_closure(metamodel, class_name)) {
    if (owned.feature->name == feature_name) return owned;
  }
  return std::nullopt;
}

std::set<std::string> supertype_closure(const Metamodel& metamodel, std::string_view class_name) {
  std::set<std::string> seen;
  std::vector<std::string> stack{std::string(class_name)};
  while (!stack.empty()) {
    std::string name = std::move(stack.back());
    stack.pop_back();
    if (!seen.insert(name).second) continue;
    if (const Classifier* cls = metamodel.find_class(name)) {
      for (const auto& sup : cls->supertypes) stack.push_back(sup);
    }
  }
  return seen;
}

bool is_subtype(const Metamodel& metamodel, std::string_view sub, std::string_view sup) {
  if (sub == sup) return true;
  return supertype_closure(metamodel, sub).count(std::string(sup)) > 0;
}

std::vector<std::string> all_classes(const Metamodel& metamodel) {
  std::vector<std::string> out;
  for (const auto& pkg : metamodel.packages) {
    for (const auto& c : pkg.classifiers) {
      if (c.is_class()) out.push_back(join_path(pkg.name, c.name));
    }
  }
  return out;
}

std::vector<std::string> direct_subclasses(const Metamodel& metamodel, std::string_view class_name) {
  std::vector<std::string> out;
  for (const auto& pkg : metamodel.packages) {
    for (const auto& c : pkg.classifiers) {
      if (!c.is_class()) continue;
      if (std::find(c.supertypes.begin(), c.supertypes.end(), class_name) != c.supertypes.end()) {
        out.push_back(join_path(pkg.name, c.name));
      }
    }
  }
  return out;
}

std::vector<std::string> subtype_closure(const Metamodel& metamodel, std::string_view class_name) {
  std::vector<std::string> out;
  for (auto& name : all_classes(metamodel)) {
    if (is_subtype(metamodel, name, class_name)) out.push_back(std::move(name));
  }
  return out;
}

}  // namespace coupevo

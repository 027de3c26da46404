// Annotation edits and package-level operations. None of these touch
// instances except Change Namespace URI, which restamps the set.

#include <algorithm>

#include "catalog_impl.hpp"

namespace coupevo::detail {

namespace {

using PT = ParamType;

constexpr std::string_view kDocumentation = "documentation";
constexpr std::string_view kGmfConstraint = "gmf.constraint";

Annotations& annotations_at(Metamodel& mm, const std::string& path) { return resolve(mm, ElementRef{path}).annotations(); }

const Annotations* annotations_at(const Metamodel& mm, const std::string& path) {
  auto element = try_resolve(mm, path);
  return element ? &element->annotations() : nullptr;
}

/// Records UnknownElement and returns the element's annotations.
const Annotations* checked_element(const Metamodel& mm, const std::string& path, Checks& c) {
  const Annotations* a = annotations_at(mm, path);
  c.check("UnknownElement", a != nullptr, "no element '" + path + "'");
  return a;
}

std::unique_ptr<CoupledOperation> document_metamodel_element() {
  return make_operation(
      {"Document Metamodel Element",
       {param("element", PT::ElementRef, "element to document"), param("documentation", PT::String, "text")},
       {"UnknownElement"},
       "Sets the documentation annotation of an element."},
      {[](const Metamodel& mm, const Args& a, Checks& c) { checked_element(mm, a.str("element"), c); },
       [](Metamodel& mm, const Args& a) {
         ensure_annotation(annotations_at(mm, a.str("element")), kDocumentation).details["value"] = a.str("documentation");
       },
       {}});
}

std::unique_ptr<CoupledOperation> create_annotation() {
  return make_operation(
      {"Create Annotation",
       {param("element", PT::ElementRef, "annotated element"), param("source", PT::String, "annotation source"),
        param("details", PT::LiteralMap, "key:value entries", false)},
       {"UnknownElement", "EmptySource", "DuplicateSource"},
       "Adds an annotation to an element."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const Annotations* anns = checked_element(mm, a.str("element"), c);
         const auto source = a.str("source");
         c.check("EmptySource", !source.empty(), "the source must not be empty");
         if (anns == nullptr) return;
         c.check("DuplicateSource", find_annotation(*anns, source) == nullptr,
                 a.str("element") + " already carries '" + source + "'");
       },
       [](Metamodel& mm, const Args& a) {
         annotations_at(mm, a.str("element")).push_back(Annotation{a.str("source"), a.map("details")});
       },
       {}});
}

std::unique_ptr<CoupledOperation> delete_annotation() {
  return make_operation(
      {"Delete Annotation",
       {param("element", PT::ElementRef, "annotated element"), param("source", PT::String, "annotation source")},
       {"UnknownElement", "AnnotationMissing"},
       "Removes an annotation from an element."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const Annotations* anns = checked_element(mm, a.str("element"), c);
         if (anns == nullptr) return;
         c.check("AnnotationMissing", find_annotation(*anns, a.str("source")) != nullptr,
                 a.str("element") + " carries no '" + a.str("source") + "'");
       },
       [](Metamodel& mm, const Args& a) { remove_annotation(annotations_at(mm, a.str("element")), a.str("source")); },
       {}});
}

std::unique_ptr<CoupledOperation> move_annotation() {
  return make_operation(
      {"Move Annotation",
       {param("element", PT::ElementRef, "current owner"), param("source", PT::String, "annotation source"),
        param("target", PT::ElementRef, "new owner")},
       {"UnknownElement", "AnnotationMissing", "UnknownTarget", "SameElement", "DuplicateSource"},
       "Moves an annotation to another element, keeping its details."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const Annotations* from = checked_element(mm, a.str("element"), c);
         if (from == nullptr) return;
         const auto source = a.str("source"), target = a.str("target");
         c.check("AnnotationMissing", find_annotation(*from, source) != nullptr,
                 a.str("element") + " carries no '" + source + "'");
         const Annotations* to = annotations_at(mm, target);
         if (!c.check("UnknownTarget", to != nullptr, "no element '" + target + "'")) return;
         c.check("SameElement", target != a.str("element"), "source and target are the same element");
         c.check("DuplicateSource", find_annotation(*to, source) == nullptr, target + " already carries '" + source + "'");
       },
       [](Metamodel& mm, const Args& a) {
         Annotations& from = annotations_at(mm, a.str("element"));
         const Annotation moved = *find_annotation(from, a.str("source"));
         remove_annotation(from, a.str("source"));
         annotations_at(mm, a.str("target")).push_back(moved);
       },
       {}});
}

std::unique_ptr<CoupledOperation> create_gmf_constraint() {
  return make_operation(
      {"Create GMF Constraint",
       {param("element", PT::ElementRef, "constrained element"), param("body", PT::String, "constraint expression")},
       {"UnknownElement", "ConstraintExists"},
       "Attaches a constraint annotation to an element."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const Annotations* anns = checked_element(mm, a.str("element"), c);
         if (anns == nullptr) return;
         c.check("ConstraintExists", find_annotation(*anns, kGmfConstraint) == nullptr,
                 a.str("element") + " already has a constraint");
       },
       [](Metamodel& mm, const Args& a) {
         annotations_at(mm, a.str("element")).push_back(Annotation{std::string(kGmfConstraint), {{"body", a.str("body")}}});
       },
       {}});
}

std::unique_ptr<CoupledOperation> change_gmf_constraint() {
  return make_operation(
      {"Change GMF Constraint",
       {param("element", PT::ElementRef, "constrained element"), param("body", PT::String, "new constraint expression")},
       {"UnknownElement", "ConstraintMissing"},
       "Replaces the body of an element's constraint annotation."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const Annotations* anns = checked_element(mm, a.str("element"), c);
         if (anns == nullptr) return;
         c.check("ConstraintMissing", find_annotation(*anns, kGmfConstraint) != nullptr,
                 a.str("element") + " has no constraint");
       },
       [](Metamodel& mm, const Args& a) {
         find_annotation(annotations_at(mm, a.str("element")), kGmfConstraint)->details["body"] = a.str("body");
       },
       {}});
}

std::unique_ptr<CoupledOperation> change_namespace_uri() {
  return make_operation(
      {"Change Namespace URI",
       {param("package", PT::ElementRef, "package"), param("nsUri", PT::String, "new namespace URI")},
       {"UnknownPackage", "EmptyUri", "SameUri"},
       "Replaces the namespace URI of a package and restamps model files."},
      {[](const Metamodel& mm, const Args& a, Checks& c) {
         const Package* p = mm.find_package(a.str("package"));
         if (!c.check("UnknownPackage", p != nullptr, "no package '" + a.str("package") + "'")) return;
         c.check("EmptyUri", !a.str("nsUri").empty(), "the namespace URI must not be empty");
         c.check("SameUri", a.str("nsUri") != p->ns_uri, "the namespace URI is unchanged");
       },
       [](Metamodel& mm, const Args& a) { mm.find_package(a.str("package"))->ns_uri = a.str("nsUri"); },
       [](const Metamodel& before, const Metamodel&, ResourceSet& set, const Args& a) {
         if (set.ns_uri == before.find_package(a.str("package"))->ns_uri) set.ns_uri = a.str("nsUri");
       }});
}

}  // namespace

void add_annotation_operations(OperationList& out) {
  out.push_back(document_metamodel_element());
  out.push_back(create_annotation());
  out.push_back(delete_annotation());
  out.push_back(move_annotation());
  out.push_back(create_gmf_constraint());
  out.push_back(change_gmf_constraint());
  out.push_back(change_namespace_uri());
}

}  // namespace coupevo::detail

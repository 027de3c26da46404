#include <set>

#include "coupevo/error.hpp"
#include "coupevo/migrate.hpp"

namespace coupevo {

namespace {

constexpr const char* kAccessor = "gmfgraph.FigureAccessor";
constexpr const char* kCustomFigure = "gmfgraph.CustomFigure";
constexpr const char* kFigure = "gmfgraph.Figure";
constexpr const char* kGallery = "gmfgraph.FigureGallery";
constexpr const char* kDescriptor = "gmfgraph.FigureDescriptor";
constexpr const char* kDiagramElement = "gmfgraph.DiagramElement";

// typedFigure became mandatory: accessors without one get an empty custom
// figure.
void init_typed_figure(MigrationContext& ctx) {
  for (const auto& accessor : ctx.instances_of(kAccessor)) {
    if (ctx.get(accessor, "typedFigure") != nullptr) continue;
    ctx.create_child(accessor, "typedFigure", kCustomFigure, accessor.id + "_typedFigure");
  }
}

std::optional<ObjectKey> enclosing_gallery(const MigrationContext& ctx, ObjectKey key) {
  while (auto info = ctx.container(key)) {
    if (ctx.object(info->container).class_name == kGallery) return info->container;
    key = info->container;
  }
  return std::nullopt;
}

// Diagram elements now point at a FigureDescriptor that wraps the figure.
// One descriptor per referenced figure, in figure document order.
void decouple_figures(MigrationContext& ctx) {
  const auto elements = ctx.instances_of(kDiagramElement);
  std::set<ObjectKey> referenced;
  for (const auto& e : elements) {
    if (const auto* values = ctx.get(e, "figure")) {
      for (const auto& v : *values) referenced.insert(v.target);
    }
  }
  std::map<ObjectKey, ObjectKey> descriptor_of;
  for (const auto& figure : ctx.instances_of(kFigure)) {
    if (referenced.count(figure) == 0) continue;
    ObjectKey descriptor;
    if (auto gallery = enclosing_gallery(ctx, figure)) {
      descriptor = ctx.create_child(*gallery, "descriptors", kDescriptor, figure.id + "_descriptor");
    } else {
      descriptor = ctx.create_root(figure.resource, kDescriptor, figure.id + "_descriptor");
    }
    const ObjectKey moved = ctx.move(figure, descriptor, "actualFigure");
    if (moved != figure) throw Error(ErrorCode::MigrationError, "figure " + to_string(figure) + " changed identity");
    descriptor_of[figure] = descriptor;
  }
  for (const auto& e : elements) {
    const auto* values = ctx.get(e, "figure");
    if (values == nullptr) continue;
    ValueList retargeted;
    for (const auto& v : *values) retargeted.push_back(Value::ref(descriptor_of.at(v.target)));
    ctx.set(e, "figure", std::move(retargeted));
  }
}

}  // namespace

std::vector<std::string> scenario_names() { return {"mini-gmf"}; }

HookRegistry scenario_hooks(std::string_view scenario) {
  HookRegistry registry;
  if (scenario == "mini-gmf") {
    registry.register_hook("init_typed_figure", init_typed_figure);
    registry.register_hook("decouple_figures", decouple_figures);
    return registry;
  }
  throw Error(ErrorCode::MissingHook, "unknown scenario '" + std::string(scenario) + "'");
}

}  // namespace coupevo

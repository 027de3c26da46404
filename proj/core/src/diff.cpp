#include "coupevo/diff.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "coupevo/error.hpp"
#include "coupevo/io.hpp"
#include "coupevo/metamodel_io.hpp"

namespace coupevo {

using nlohmann::json;

std::string_view to_string(DiffKind kind) noexcept {
  switch (kind) {
    case DiffKind::Added: return "added";
    case DiffKind::Removed: return "removed";
    case DiffKind::Changed: return "changed";
    case DiffKind::Moved: return "moved";
  }
  return "?";
}

namespace {

// ---------------------------------------------------------------------------
// Metamodels

class MetamodelDiffer {
 public:
  explicit MetamodelDiffer(DiffModel& out) : out_(out) {}

  void packages(const Metamodel& a, const Metamodel& b) {
    for (const auto& pa : a.packages) {
      const Package* pb = b.find_package(pa.name);
      if (pb == nullptr) {
        removed(pa.name, "package");
        continue;
      }
      properties(to_json(pa), to_json(*pb), {"classifiers"}, pa.name);
      classifiers(pa, *pb);
    }
    for (const auto& pb : b.packages) {
      if (a.find_package(pb.name) == nullptr) added(pb.name, "package");
    }
  }

 private:
  void classifiers(const Package& a, const Package& b) {
    for (const auto& ca : a.classifiers) {
      const std::string path = join_path(a.name, ca.name);
      const Classifier* cb = b.find_classifier(ca.name);
      if (cb == nullptr) {
        removed(path, kind_name(ca));
        continue;
      }
      properties(to_json(ca), to_json(*cb), {"features", "operations"}, path);
      features(ca, *cb, path);
      operations(ca, *cb, path);
    }
    for (const auto& cb : b.classifiers) {
      if (a.find_classifier(cb.name) == nullptr) added(join_path(b.name, cb.name), kind_name(cb));
    }
  }

  void features(const Classifier& a, const Classifier& b, const std::string& owner) {
    std::vector<std::string> common_a, common_b;
    for (const auto& fa : a.features) {
      const std::string path = join_path(owner, fa.name);
      const Feature* fb = b.find_feature(fa.name);
      if (fb == nullptr) {
        removed(path, fa.is_attribute() ? "attribute" : "reference");
        continue;
      }
      common_a.push_back(fa.name);
      properties(to_json(fa), to_json(*fb), {}, path);
    }
    for (const auto& fb : b.features) {
      if (a.find_feature(fb.name) == nullptr) {
        added(join_path(owner, fb.name), fb.is_attribute() ? "attribute" : "reference");
      } else {
        common_b.push_back(fb.name);
      }
    }
    // Features outside a longest common subsequence changed position.
    const std::size_t n = common_a.size();
    std::vector<std::vector<std::size_t>> lcs(n + 1, std::vector<std::size_t>(n + 1, 0));
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = n; j-- > 0;) {
        lcs[i][j] = common_a[i] == common_b[j] ? lcs[i + 1][j + 1] + 1 : std::max(lcs[i + 1][j], lcs[i][j + 1]);
      }
    }
    std::set<std::string> stable;
    for (std::size_t i = 0, j = 0; i < n && j < n;) {
      if (common_a[i] == common_b[j]) {
        stable.insert(common_a[i]);
        ++i, ++j;
      } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
        ++i;
      } else {
        ++j;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (stable.count(common_a[i]) != 0) continue;
      const auto j = static_cast<std::size_t>(std::find(common_b.begin(), common_b.end(), common_a[i]) - common_b.begin());
      const std::string path = join_path(owner, common_a[i]);
      out_.entries.push_back({DiffKind::Moved, path, path, "position " + std::to_string(i) + " -> " + std::to_string(j)});
    }
  }

  void operations(const Classifier& a, const Classifier& b, const std::string& owner) {
    for (const auto& oa : a.operations) {
      const std::string path = join_path(owner, oa.name);
      const OperationSignature* ob = b.find_operation(oa.name);
      if (ob == nullptr) {
        removed(path, "operation");
      } else {
        properties(to_json(oa), to_json(*ob), {}, path);
      }
    }
    for (const auto& ob : b.operations) {
      if (a.find_operation(ob.name) == nullptr) added(join_path(owner, ob.name), "operation");
    }
  }

  void properties(const json& a, const json& b, const std::set<std::string>& skip, const std::string& path) {
    std::set<std::string> keys;
    for (const auto& [k, v] : a.items()) keys.insert(k);
    for (const auto& [k, v] : b.items()) keys.insert(k);
    for (const auto& k : keys) {
      if (skip.count(k) != 0) continue;
      const json va = a.value(k, json());
      const json vb = b.value(k, json());
      if (va != vb) out_.entries.push_back({DiffKind::Changed, path, path, k + ": " + va.dump() + " -> " + vb.dump()});
    }
  }

  static std::string kind_name(const Classifier& c) {
    return c.is_class() ? "class" : c.is_enum() ? "enumeration" : "datatype";
  }
  void added(const std::string& path, const std::string& what) { out_.entries.push_back({DiffKind::Added, "", path, what}); }
  void removed(const std::string& path, const std::string& what) {
    out_.entries.push_back({DiffKind::Removed, path, "", what});
  }

  DiffModel& out_;
};

// ---------------------------------------------------------------------------
// Models

class ModelDiffer {
 public:
  ModelDiffer(const ResourceSet& a, const ResourceSet& b, const MatchPolicy& policy)
      : a_(a), b_(b), policy_(policy) {}

  DiffModel run() {
    if (a_.ns_uri != b_.ns_uri) {
      throw Error(ErrorCode::MixedNsUri, "cannot compare models of '" + a_.ns_uri + "' and '" + b_.ns_uri + "'");
    }
    for (const auto& ra : a_.resources) {
      const Resource* rb = b_.find_resource(ra.uri());
      if (rb == nullptr) {
        out_.entries.push_back({DiffKind::Removed, ra.uri(), "", "resource"});
        continue;
      }
      match_group(keys(ra.uri(), ra.roots), keys(rb->uri(), rb->roots));
    }
    for (const auto& rb : b_.resources) {
      if (a_.find_resource(rb.uri()) == nullptr) out_.entries.push_back({DiffKind::Added, "", rb.uri(), "resource"});
    }
    for (const auto& [ka, kb] : pairs_) compare(ka, kb);
    return std::move(out_);
  }

 private:
  static std::vector<ObjectKey> keys(const std::string& resource, const std::vector<std::string>& ids) {
    std::vector<ObjectKey> out;
    for (const auto& id : ids) out.push_back({resource, id});
    return out;
  }

  static std::map<std::string, std::vector<ObjectKey>> children(const MObject& obj, const std::string& resource) {
    std::map<std::string, std::vector<ObjectKey>> out;
    for (const auto& [name, values] : obj.slots) {
      for (const auto& v : values) {
        if (v.kind == ValueKind::Child) out[name].push_back({resource, v.target.id});
      }
    }
    return out;
  }

  std::optional<std::string> identifier_value(const MObject& obj) {
    if (policy_.metamodel == nullptr) return std::nullopt;
    auto [it, fresh] = identifier_.try_emplace(obj.class_name);
    if (fresh && policy_.metamodel->find_class(obj.class_name) != nullptr) {
      for (const Feature* f : all_features(*policy_.metamodel, obj.class_name)) {
        if (f->is_attribute() && f->identifier) it->second = f->name;
      }
    }
    if (it->second.empty()) return std::nullopt;
    const ValueList* values = obj.slot(it->second);
    if (values == nullptr) return std::nullopt;
    std::string out;
    for (const auto& v : *values) out += to_string(v) + ";";
    return out;
  }

  static std::string signature(const MObject& obj) {
    std::string out = obj.class_name;
    for (const auto& [name, values] : obj.slots) {
      if (!values.empty() && values.front().is_object_value()) continue;
      out += "|" + name + "=";
      for (const auto& v : values) out += to_string(v) + ";";
    }
    return out;
  }

  void pair(const ObjectKey& ka, const ObjectKey& kb) {
    a2b_[ka] = kb;
    b2a_[kb] = ka;
    pairs_.emplace_back(ka, kb);
  }

  // Matches one sibling group, then recurses into the matched pairs.
  void match_group(const std::vector<ObjectKey>& as, const std::vector<ObjectKey>& bs) {
    const std::size_t first_pair = pairs_.size();
    std::vector<bool> used(bs.size(), false);
    std::vector<bool> done(as.size(), false);
    auto pass = [&](auto key_of) {
      for (std::size_t i = 0; i < as.size(); ++i) {
        if (done[i]) continue;
        const MObject& x = *a_.find(as[i]);
        const auto kx = key_of(x);
        if (!kx) continue;
        for (std::size_t j = 0; j < bs.size(); ++j) {
          if (used[j]) continue;
          const MObject& y = *b_.find(bs[j]);
          if (y.class_name != x.class_name || key_of(y) != kx) continue;
          used[j] = done[i] = true;
          pair(as[i], bs[j]);
          break;
        }
      }
    };
    pass([&](const MObject& o) { return identifier_value(o); });
    pass([&](const MObject& o) { return identifier_value(o) ? std::nullopt : std::optional<std::string>(o.id); });
    pass([&](const MObject& o) { return identifier_value(o) ? std::nullopt : std::optional<std::string>(signature(o)); });

    const std::size_t last_pair = pairs_.size();
    for (std::size_t p = first_pair; p < last_pair; ++p) {
      const auto [ka, kb] = pairs_[p];
      auto ca = children(*a_.find(ka), ka.resource);
      auto cb = children(*b_.find(kb), kb.resource);
      for (const auto& [feature, list] : ca) match_group(list, cb[feature]);
      for (const auto& [feature, list] : cb) {
        if (ca.count(feature) == 0) match_group({}, list);
      }
    }
    for (std::size_t i = 0; i < as.size(); ++i) {
      if (!done[i]) out_.entries.push_back({DiffKind::Removed, to_string(as[i]), "", a_.find(as[i])->class_name});
    }
    for (std::size_t j = 0; j < bs.size(); ++j) {
      if (!used[j]) out_.entries.push_back({DiffKind::Added, "", to_string(bs[j]), b_.find(bs[j])->class_name});
    }
  }

  static std::string render(const std::vector<std::string>& items) {
    std::string out = "[";
    for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + items[i];
    return out + "]";
  }

  void compare(const ObjectKey& ka, const ObjectKey& kb) {
    const MObject& x = *a_.find(ka);
    const MObject& y = *b_.find(kb);
    std::set<std::string> names;
    for (const auto& [name, values] : x.slots) names.insert(name);
    for (const auto& [name, values] : y.slots) names.insert(name);
    static const ValueList none;
    for (const auto& name : names) {
      const ValueList& va = x.slot(name) ? *x.slot(name) : none;
      const ValueList& vb = y.slot(name) ? *y.slot(name) : none;
      const Value* sample = !va.empty() ? &va.front() : !vb.empty() ? &vb.front() : nullptr;
      if (sample == nullptr) continue;
      std::vector<std::string> sa, sb;
      std::string what = name;
      if (sample->kind == ValueKind::Child) {
        // Unmatched children are already reported; only order remains.
        for (const auto& v : va) {
          if (auto it = a2b_.find(v.target); it != a2b_.end()) sa.push_back(to_string(it->second));
        }
        for (const auto& v : vb) {
          if (b2a_.count(v.target) != 0) sb.push_back(to_string(v.target));
        }
        what += " (order)";
      } else if (sample->kind == ValueKind::Ref) {
        for (const auto& v : va) {
          auto it = a2b_.find(v.target);
          sa.push_back(it != a2b_.end() ? "->" + to_string(it->second) : "->?" + to_string(v.target));
        }
        for (const auto& v : vb) sb.push_back((b2a_.count(v.target) ? "->" : "->?") + to_string(v.target));
      } else {
        for (const auto& v : va) sa.push_back(to_string(v));
        for (const auto& v : vb) sb.push_back(to_string(v));
      }
      if (sample->is_object_value() && policy_.ignore_reference_order) {
        std::sort(sa.begin(), sa.end());
        std::sort(sb.begin(), sb.end());
      }
      if (sa != sb) {
        out_.entries.push_back(
            {DiffKind::Changed, to_string(ka) + "." + name, to_string(kb) + "." + name, what + ": " + render(sa) + " -> " + render(sb)});
      }
    }
  }

  const ResourceSet& a_;
  const ResourceSet& b_;
  const MatchPolicy& policy_;
  std::map<std::string, std::string> identifier_;
  std::map<ObjectKey, ObjectKey> a2b_, b2a_;
  std::vector<std::pair<ObjectKey, ObjectKey>> pairs_;
  DiffModel out_;
};

}  // namespace

DiffModel diff_metamodels(const Metamodel& a, const Metamodel& b) {
  DiffModel out;
  MetamodelDiffer(out).packages(a, b);
  return out;
}

DiffModel convergence(const Metamodel& current, const Metamodel& target) { return diff_metamodels(current, target); }

DiffModel diff_models(const ResourceSet& a, const ResourceSet& b, const MatchPolicy& policy) {
  return ModelDiffer(a, b, policy).run();
}

std::string format_diff(const DiffModel& diff) {
  std::ostringstream out;
  for (const auto& e : diff.entries) {
    out << to_string(e.kind) << " " << (e.a.empty() ? "-" : e.a);
    if (e.b != e.a) out << " => " << (e.b.empty() ? "-" : e.b);
    if (!e.detail.empty()) out << ": " << e.detail;
    out << "\n";
  }
  out << diff.size() << " difference(s)\n";
  return out.str();
}

json to_json(const DiffModel& diff) {
  json entries = json::array();
  for (const auto& e : diff.entries) {
    entries.push_back(json{{"kind", to_string(e.kind)}, {"a", e.a}, {"b", e.b}, {"detail", e.detail}});
  }
  return json{{"entries", std::move(entries)}};
}

void save_diff(const DiffModel& diff, const std::filesystem::path& path) {
  write_file_atomic(path, dump_canonical(to_json(diff)));
}

}  // namespace coupevo

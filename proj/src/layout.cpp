#include "cmr/layout.hpp"

#include "cmr/error.hpp"

#include <set>

namespace cmr {

void VariableLayout::validate() const {
  if (centre.empty()) throw ValidationError("at least one centre variable is required");
  if (stable.empty()) throw ValidationError("at least one stable variable is required");
  std::set<std::string> seen;
  for (const auto* group : {&centre, &stable, &params})
    for (const auto& name : *group) {
      if (name.empty()) throw ValidationError("empty variable name");
      if (!seen.insert(name).second) throw ValidationError("variable '" + name + "' declared twice");
    }
}

bool VariableLayout::find(const std::string& name, VarRef& out) const {
  const std::pair<const std::vector<std::string>*, Block> groups[] = {
      {&centre, Block::Centre}, {&stable, Block::Stable}, {&params, Block::Param}};
  for (const auto& [group, block] : groups)
    for (std::size_t i = 0; i < group->size(); ++i)
      if ((*group)[i] == name) {
        out = {block, i};
        return true;
      }
  return false;
}

const std::string& VariableLayout::name(VarRef v) const {
  switch (v.block) {
    case Block::Centre: return centre.at(v.index);
    case Block::Stable: return stable.at(v.index);
    case Block::Param: break;
  }
  return params.at(v.index);
}

VariableLayout VariableLayout::default_names(const Layout& dims) {
  auto make = [](const std::string& stem, std::size_t count) {
    std::vector<std::string> names;
    if (count == 1) return std::vector<std::string>{stem};
    for (std::size_t i = 0; i < count; ++i) names.push_back(stem + std::to_string(i + 1));
    return names;
  };
  return {make("x", dims.m), make("y", dims.n), make("eps", dims.l)};
}

}  // namespace cmr

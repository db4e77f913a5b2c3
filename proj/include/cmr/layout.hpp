#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cmr {

/// Sizes of the three variable groups: m centre variables x, n stable
/// variables y and l parameters eps.
struct Layout {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t l = 0;

  friend bool operator==(const Layout&, const Layout&) = default;
};

enum class Block { Centre, Stable, Param };

/// A single variable: its group and its index inside the group.
struct VarRef {
  Block block;
  std::size_t index;

  friend bool operator==(const VarRef&, const VarRef&) = default;
};

/// Named variables. Names are distinct and nonempty, m >= 1, n >= 1.
struct VariableLayout {
  std::vector<std::string> centre;
  std::vector<std::string> stable;
  std::vector<std::string> params;

  Layout dims() const { return {centre.size(), stable.size(), params.size()}; }

  /// Throws ValidationError on an empty or repeated name or an empty centre/stable group.
  void validate() const;

  /// Looks a name up in all three groups.
  bool find(const std::string& name, VarRef& out) const;

  const std::string& name(VarRef v) const;

  /// x, y, eps for singleton groups, x1, x2, ... otherwise.
  static VariableLayout default_names(const Layout& dims);

  friend bool operator==(const VariableLayout&, const VariableLayout&) = default;
};

}  // namespace cmr

#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace semnav {

// Identifier form of a name: trimmed, ASCII-lowercased, every whitespace run
// replaced by a single underscore. Result matches [a-z0-9_]+ or is nullopt.
std::optional<std::string> try_canonicalize(std::string_view text);

// Throws std::invalid_argument when the text has no valid identifier form.
std::string canonicalize(std::string_view text);

/// A named entity of the ontology. Equality and ordering use the canonical
/// form only, so "Soft drink", "soft_drink" and "SOFT_DRINK" compare equal.
class EntityName {
 public:
  EntityName() = default;
  explicit EntityName(std::string_view text);

  const std::string& canonical() const { return canonical_; }
  const std::string& display() const { return display_; }

  friend bool operator==(const EntityName& a, const EntityName& b) {
    return a.canonical_ == b.canonical_;
  }
  friend std::strong_ordering operator<=>(const EntityName& a,
                                          const EntityName& b) {
    return a.canonical_ <=> b.canonical_;
  }

 private:
  std::string canonical_;
  std::string display_;
};

}  // namespace semnav

template <>
struct std::hash<semnav::EntityName> {
  std::size_t operator()(const semnav::EntityName& n) const noexcept {
    return std::hash<std::string>{}(n.canonical());
  }
};

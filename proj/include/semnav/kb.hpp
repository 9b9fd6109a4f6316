#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "semnav/names.hpp"

namespace semnav {

enum class Namespace {
  room_class,
  object_class,
  utility,
  meaning,
  characteristic,
  physical_room,
  physical_object,
};
inline constexpr std::size_t kNamespaceCount = 7;

enum class Relation {
  room_contains,
  object_contains,
  has_utility,
  utility_means,
  used_with,
  has_characteristic,
};
inline constexpr std::size_t kRelationCount = 6;

std::string_view to_string(Namespace ns);
std::string_view to_string(Relation rel);

// Namespaces of the (from, to) members of a relation.
std::pair<Namespace, Namespace> relation_signature(Relation rel);

// ---------------------------------------------------------------------------
// Parsed documents. Lines are 1-based; 0 marks a programmatically built item.

struct Declaration {
  Namespace kind;
  EntityName name;
  int line = 0;

  friend bool operator==(const Declaration& a, const Declaration& b) {
    return a.kind == b.kind && a.name == b.name &&
           a.name.display() == b.name.display();
  }
};

struct Assertion {
  Relation relation;
  EntityName first;
  EntityName second;
  int line = 0;

  friend bool operator==(const Assertion& a, const Assertion& b) {
    return a.relation == b.relation && a.first == b.first &&
           a.second == b.second;
  }
};

struct ConceptualDocument {
  std::vector<Declaration> declarations;
  std::vector<Assertion> assertions;

  void declare(Namespace kind, std::string_view name);
  void assert_relation(Relation rel, std::string_view first,
                       std::string_view second);

  friend bool operator==(const ConceptualDocument&,
                         const ConceptualDocument&) = default;
};

struct PhysicalRoomDecl {
  EntityName id;
  EntityName room_class;
  int line = 0;

  friend bool operator==(const PhysicalRoomDecl& a, const PhysicalRoomDecl& b) {
    return a.id == b.id && a.room_class == b.room_class;
  }
};

struct PhysicalObjectDecl {
  EntityName id;
  EntityName object_class;
  EntityName room;
  int line = 0;

  friend bool operator==(const PhysicalObjectDecl& a,
                         const PhysicalObjectDecl& b) {
    return a.id == b.id && a.object_class == b.object_class && a.room == b.room;
  }
};

struct PhysicalDocument {
  std::vector<PhysicalRoomDecl> rooms;
  std::vector<PhysicalObjectDecl> objects;

  void add_room(std::string_view id, std::string_view room_class);
  void add_object(std::string_view id, std::string_view object_class,
                  std::string_view room);

  friend bool operator==(const PhysicalDocument&,
                         const PhysicalDocument&) = default;
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(int line, std::string reason);
  int line() const { return line_; }
  const std::string& reason() const { return reason_; }

 private:
  int line_;
  std::string reason_;
};

enum class KbErrorKind {
  duplicate_declaration,
  unknown_reference,
  containment_cycle,
  cross_namespace_collision,
  self_interaction,
  reserved_name,
};
std::string_view to_string(KbErrorKind kind);

class KbError : public std::runtime_error {
 public:
  KbError(KbErrorKind kind, std::vector<std::string> subjects,
          std::string site = {});
  KbErrorKind kind() const { return kind_; }
  // Offending names; for containment cycles, the closed cycle path.
  const std::vector<std::string>& subjects() const { return subjects_; }
  const std::string& site() const { return site_; }

 private:
  KbErrorKind kind_;
  std::vector<std::string> subjects_;
  std::string site_;
};

ConceptualDocument parse_conceptual_document(std::string_view text);
PhysicalDocument parse_physical_document(std::string_view text);

std::string serialize(const ConceptualDocument& doc);
std::string serialize(const PhysicalDocument& doc);

// ---------------------------------------------------------------------------

// Canonical-name edge of a conceptual relation. used_with edges are stored
// with from < to.
struct Edge {
  std::string from;
  std::string to;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct PhysicalRoom {
  EntityName id;
  EntityName room_class;
};

struct PhysicalObject {
  EntityName id;
  EntityName object_class;
  EntityName room;
};

/// Validated, immutable knowledge base. Entities of each namespace and edges
/// of each relation are kept sorted by canonical name and deduplicated.
class KnowledgeBase {
 public:
  KnowledgeBase() = default;

  const std::vector<EntityName>& entities(Namespace ns) const {
    return entities_[static_cast<std::size_t>(ns)];
  }
  const std::vector<Edge>& edges(Relation rel) const {
    return edges_[static_cast<std::size_t>(rel)];
  }
  const std::vector<PhysicalRoom>& physical_rooms() const { return rooms_; }
  const std::vector<PhysicalObject>& physical_objects() const {
    return objects_;
  }

  bool has(Namespace ns, std::string_view canonical) const;
  const EntityName* find(Namespace ns, std::string_view canonical) const;
  // Every namespace declaring the canonical name, in enum order.
  std::vector<Namespace> namespaces_of(std::string_view canonical) const;

  const PhysicalRoom* find_physical_room(std::string_view canonical) const;
  const PhysicalObject* find_physical_object(std::string_view canonical) const;

  // Entities plus relation edges plus physical declarations.
  std::size_t size() const;

  // Stable hex digest of the canonical content.
  std::string digest() const;

  // Canonical documents that rebuild an identical KB.
  ConceptualDocument conceptual_document() const;
  PhysicalDocument physical_document() const;

 private:
  friend KnowledgeBase build_kb(const ConceptualDocument&,
                                const PhysicalDocument&);

  std::array<std::vector<EntityName>, kNamespaceCount> entities_;
  std::array<std::vector<Edge>, kRelationCount> edges_;
  std::vector<PhysicalRoom> rooms_;
  std::vector<PhysicalObject> objects_;
  std::array<std::unordered_map<std::string, std::size_t>, kNamespaceCount>
      index_;
};

// Names used by the ontology class tree; no entity may take them.
bool is_reserved_name(std::string_view canonical);

KnowledgeBase build_kb(const ConceptualDocument& conceptual,
                       const PhysicalDocument& physical);

std::string_view reference_conceptual_text();
std::string_view reference_physical_text();
const KnowledgeBase& reference_kb();

}  // namespace semnav

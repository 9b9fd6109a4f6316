#pragma once

#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "semnav/kb.hpp"
#include "semnav/reasoner.hpp"

namespace semnav {

// Edge through which a hop was reached; `origin` marks the request itself.
enum class HopKind {
  origin,
  meaning_to_utility,
  utility_to_object,
  characteristic_to_object,
  object_to_container,
  object_to_room_class,
  room_class_to_physical_room,
  physical_object_to_physical_room,
};
std::string_view to_string(HopKind k);

struct Hop {
  EntityName entity;
  HopKind kind;

  friend bool operator==(const Hop& a, const Hop& b) {
    return a.entity == b.entity && a.kind == b.kind;
  }
};

using PlanChain = std::vector<Hop>;

// "work -> computer -> office -> room1"
std::string render(const PlanChain& chain);

struct Proposal {
  EntityName destination;
  PlanChain chain;
  std::size_t ordinal = 0;
};

struct Unrealizable {
  PlanChain chain;  // ends at a room class
  std::string reason;
};

enum class PlanErrorKind { unknown_entity, ambiguous_request, unknown_ordinal };
std::string_view to_string(PlanErrorKind k);

class PlanError : public std::runtime_error {
 public:
  PlanError(PlanErrorKind kind, std::string subject, std::vector<Namespace> namespaces = {});
  PlanErrorKind kind() const { return kind_; }
  const std::string& subject() const { return subject_; }
  const std::vector<Namespace>& namespaces() const { return namespaces_; }

 private:
  PlanErrorKind kind_;
  std::string subject_;
  std::vector<Namespace> namespaces_;
};

/// Rejection-driven proposal stream for one request. Destinations are
/// emitted at most once; a rejected destination is never proposed again.
class PlanSession {
 public:
  const EntityName& request() const { return request_; }
  Namespace kind() const { return kind_; }

  // Next proposal, or nullopt once every destination was emitted.
  std::optional<Proposal> next_proposal();

  // Throws PlanError(unknown_ordinal) unless the ordinal was emitted and not
  // accepted.
  void reject(std::size_t ordinal);
  void accept(std::size_t ordinal);

  const Proposal& emitted(std::size_t ordinal) const;
  bool is_accepted(std::size_t ordinal) const { return accepted_.count(ordinal) > 0; }

  const std::set<std::string>& rejected() const { return rejected_; }
  const std::vector<Unrealizable>& unrealizable() const { return unrealizable_; }
  // Every chain ending at a physical room, before destination dedup.
  const std::vector<PlanChain>& realizable_chains() const { return realizable_; }
  std::size_t pending() const { return pending_.size(); }

 private:
  friend PlanSession resolve(std::string_view, const KnowledgeBase&, const Reasoner&);

  EntityName request_;
  Namespace kind_ = Namespace::room_class;
  std::deque<Proposal> pending_;
  std::map<std::size_t, Proposal> emitted_;
  std::set<std::size_t> accepted_;
  std::set<std::string> rejected_;
  std::vector<Unrealizable> unrealizable_;
  std::vector<PlanChain> realizable_;
  std::size_t next_ordinal_ = 0;
};

// Breadth-first expansion of the request into destination chains:
// meaning -> utilities -> objects; utility -> objects; characteristic ->
// objects having it; object -> room classes and containers; room class ->
// physical rooms; physical object -> its room.
PlanSession resolve(std::string_view request, const KnowledgeBase& kb, const Reasoner& reasoner);

}  // namespace semnav

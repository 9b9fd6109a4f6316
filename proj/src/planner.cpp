#include "semnav/planner.hpp"

#include <algorithm>

namespace semnav {

std::string_view to_string(HopKind k) {
  switch (k) {
    case HopKind::origin: return "origin";
    case HopKind::meaning_to_utility: return "meaning_to_utility";
    case HopKind::utility_to_object: return "utility_to_object";
    case HopKind::characteristic_to_object: return "characteristic_to_object";
    case HopKind::object_to_container: return "object_to_container";
    case HopKind::object_to_room_class: return "object_to_room_class";
    case HopKind::room_class_to_physical_room: return "room_class_to_physical_room";
    case HopKind::physical_object_to_physical_room: return "physical_object_to_physical_room";
  }
  return "?";
}

std::string render(const PlanChain& chain) {
  std::string out;
  for (const auto& hop : chain) {
    if (!out.empty()) out += " -> ";
    out += hop.entity.canonical();
  }
  return out;
}

std::string_view to_string(PlanErrorKind k) {
  switch (k) {
    case PlanErrorKind::unknown_entity: return "UnknownEntity";
    case PlanErrorKind::ambiguous_request: return "AmbiguousRequest";
    case PlanErrorKind::unknown_ordinal: return "UnknownOrdinal";
  }
  return "?";
}

namespace {

std::string describe(PlanErrorKind kind, const std::string& subject,
                     const std::vector<Namespace>& namespaces) {
  std::string msg = std::string(to_string(kind)) + "(" + subject;
  for (auto ns : namespaces) msg += ", " + std::string(to_string(ns));
  return msg + ")";
}

}  // namespace

PlanError::PlanError(PlanErrorKind kind, std::string subject, std::vector<Namespace> namespaces)
    : std::runtime_error(describe(kind, subject, namespaces)),
      kind_(kind),
      subject_(std::move(subject)),
      namespaces_(std::move(namespaces)) {}

std::optional<Proposal> PlanSession::next_proposal() {
  while (!pending_.empty()) {
    auto p = std::move(pending_.front());
    pending_.pop_front();
    if (rejected_.count(p.destination.canonical())) continue;
    p.ordinal = next_ordinal_++;
    emitted_.emplace(p.ordinal, p);
    return p;
  }
  return std::nullopt;
}

const Proposal& PlanSession::emitted(std::size_t ordinal) const {
  auto it = emitted_.find(ordinal);
  if (it == emitted_.end())
    throw PlanError(PlanErrorKind::unknown_ordinal, std::to_string(ordinal));
  return it->second;
}

void PlanSession::reject(std::size_t ordinal) {
  const auto& p = emitted(ordinal);
  if (accepted_.count(ordinal))
    throw PlanError(PlanErrorKind::unknown_ordinal, std::to_string(ordinal));
  rejected_.insert(p.destination.canonical());
}

void PlanSession::accept(std::size_t ordinal) {
  const auto& p = emitted(ordinal);
  if (rejected_.count(p.destination.canonical()))
    throw PlanError(PlanErrorKind::unknown_ordinal, std::to_string(ordinal));
  accepted_.insert(ordinal);
}

namespace {

struct Partial {
  PlanChain chain;
  Namespace ns;
};

bool visited(const PlanChain& chain, const EntityName& e) {
  return std::any_of(chain.begin(), chain.end(), [&](const Hop& h) { return h.entity == e; });
}

}  // namespace

PlanSession resolve(std::string_view request, const KnowledgeBase& kb, const Reasoner& reasoner) {
  const auto canonical = try_canonicalize(request);
  if (!canonical) throw PlanError(PlanErrorKind::unknown_entity, std::string(request));
  const auto namespaces = kb.namespaces_of(*canonical);
  if (namespaces.empty()) throw PlanError(PlanErrorKind::unknown_entity, *canonical);
  if (namespaces.size() > 1)
    throw PlanError(PlanErrorKind::ambiguous_request, *canonical, namespaces);

  PlanSession session;
  session.kind_ = namespaces.front();
  session.request_ = *kb.find(session.kind_, *canonical);

  std::deque<Partial> queue;
  queue.push_back({{{session.request_, HopKind::origin}}, session.kind_});
  std::set<std::string> destinations;

  auto extend = [&](const Partial& p, const EntityName& e, HopKind kind, Namespace ns) {
    if (visited(p.chain, e)) return;
    auto chain = p.chain;
    chain.push_back({e, kind});
    queue.push_back({std::move(chain), ns});
  };

  while (!queue.empty()) {
    auto cur = std::move(queue.front());
    queue.pop_front();
    const auto& here = cur.chain.back().entity;

    switch (cur.ns) {
      case Namespace::meaning: {
        for (const auto& e : kb.edges(Relation::utility_means))
          if (e.to == here.canonical())
            extend(cur, *kb.find(Namespace::utility, e.from), HopKind::meaning_to_utility,
                   Namespace::utility);
        break;
      }
      case Namespace::utility: {
        for (const auto& o : reasoner.objects_with_utility(here.canonical()).answers)
          extend(cur, o, HopKind::utility_to_object, Namespace::object_class);
        break;
      }
      case Namespace::characteristic: {
        for (const auto& o : reasoner.all_object_classes().answers) {
          const auto chars = reasoner.characteristics_of(o.canonical()).answers;
          if (std::find(chars.begin(), chars.end(), here) != chars.end())
            extend(cur, o, HopKind::characteristic_to_object, Namespace::object_class);
        }
        break;
      }
      case Namespace::object_class: {
        for (const auto& r : reasoner.room_classes_containing(here.canonical()).answers)
          extend(cur, r, HopKind::object_to_room_class, Namespace::room_class);
        const auto related = reasoner.related_objects(here.canonical());
        for (std::size_t i = 0; i < related.size(); ++i) {
          // Containers only; a container tag wins over other tags for the same object.
          const auto& chain = related.chains[i];
          const bool is_container = std::any_of(chain.begin(), chain.end(), [](const auto& h) {
            return h.canonical() == kTagContainer;
          });
          if (is_container)
            extend(cur, related.answers[i], HopKind::object_to_container, Namespace::object_class);
        }
        break;
      }
      case Namespace::room_class: {
        const auto rooms = reasoner.physical_rooms_of_class(here.canonical()).answers;
        if (rooms.empty())
          session.unrealizable_.push_back(
              {cur.chain, "no physical room of class " + here.canonical()});
        for (const auto& r : rooms)
          extend(cur, r, HopKind::room_class_to_physical_room, Namespace::physical_room);
        break;
      }
      case Namespace::physical_object: {
        if (const auto* obj = kb.find_physical_object(here.canonical()))
          extend(cur, obj->room, HopKind::physical_object_to_physical_room,
                 Namespace::physical_room);
        break;
      }
      case Namespace::physical_room: {
        session.realizable_.push_back(cur.chain);
        if (destinations.insert(here.canonical()).second)
          session.pending_.push_back({here, cur.chain, 0});
        break;
      }
    }
  }
  return session;
}

}  // namespace semnav

#include "semnav/kb.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace semnav {

namespace {

constexpr std::array<std::string_view, kNamespaceCount> kNamespaceKeywords = {
    "room_class", "object_class",  "utility",        "meaning",
    "characteristic", "physical_room", "physical_object"};

constexpr std::array<std::string_view, kRelationCount> kRelationKeywords = {
    "room_contains", "object_contains", "has_utility",
    "utility_means", "used_with",       "has_characteristic"};

constexpr std::array<std::string_view, 6> kReserved = {
    "thing", "room", "object", "utility", "meaning", "characteristic"};

std::vector<std::string_view> tokenize(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos)
    line = line.substr(0, hash);
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' ||
                               line[i] == '\r'))
      ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' &&
           line[i] != '\r')
      ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

template <typename F>
void for_each_line(std::string_view text, F&& f) {
  int number = 0;
  while (!text.empty()) {
    ++number;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    f(number, line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
}

EntityName name_at(int line, std::string_view token) {
  auto canon = try_canonicalize(token);
  if (!canon) throw SyntaxError(line, "invalid name '" + std::string(token) + "'");
  return EntityName(token);
}

std::string written(const EntityName& n) {
  const auto& d = n.display();
  if (d.empty() || d.find_first_of(" \t\r\n\v\f") != std::string::npos)
    return n.canonical();
  return d;
}

std::string line_site(int line, std::string_view what) {
  if (line <= 0) return std::string(what);
  return "line " + std::to_string(line) + ": " + std::string(what);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::string_view to_string(Namespace ns) {
  return kNamespaceKeywords[static_cast<std::size_t>(ns)];
}

std::string_view to_string(Relation rel) {
  return kRelationKeywords[static_cast<std::size_t>(rel)];
}

std::pair<Namespace, Namespace> relation_signature(Relation rel) {
  switch (rel) {
    case Relation::room_contains:
      return {Namespace::room_class, Namespace::object_class};
    case Relation::object_contains:
    case Relation::used_with:
      return {Namespace::object_class, Namespace::object_class};
    case Relation::has_utility:
      return {Namespace::object_class, Namespace::utility};
    case Relation::utility_means:
      return {Namespace::utility, Namespace::meaning};
    case Relation::has_characteristic:
      return {Namespace::object_class, Namespace::characteristic};
  }
  throw std::logic_error("bad relation");
}

std::string_view to_string(KbErrorKind kind) {
  switch (kind) {
    case KbErrorKind::duplicate_declaration: return "DuplicateDeclaration";
    case KbErrorKind::unknown_reference: return "UnknownReference";
    case KbErrorKind::containment_cycle: return "ContainmentCycle";
    case KbErrorKind::cross_namespace_collision: return "CrossNamespaceCollision";
    case KbErrorKind::self_interaction: return "SelfInteraction";
    case KbErrorKind::reserved_name: return "ReservedName";
  }
  return "?";
}

SyntaxError::SyntaxError(int line, std::string reason)
    : std::runtime_error("line " + std::to_string(line) + ": " + reason),
      line_(line),
      reason_(std::move(reason)) {}

namespace {

std::string describe(KbErrorKind kind, const std::vector<std::string>& subjects,
                     const std::string& site) {
  std::string msg(to_string(kind));
  msg += "(";
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    if (i) msg += kind == KbErrorKind::containment_cycle ? " -> " : ", ";
    msg += subjects[i];
  }
  msg += ")";
  if (!site.empty()) msg += " at " + site;
  return msg;
}

}  // namespace

KbError::KbError(KbErrorKind kind, std::vector<std::string> subjects,
                 std::string site)
    : std::runtime_error(describe(kind, subjects, site)),
      kind_(kind),
      subjects_(std::move(subjects)),
      site_(std::move(site)) {}

void ConceptualDocument::declare(Namespace kind, std::string_view name) {
  declarations.push_back({kind, EntityName(name), 0});
}

void ConceptualDocument::assert_relation(Relation rel, std::string_view first,
                                         std::string_view second) {
  assertions.push_back({rel, EntityName(first), EntityName(second), 0});
}

void PhysicalDocument::add_room(std::string_view id,
                                std::string_view room_class) {
  rooms.push_back({EntityName(id), EntityName(room_class), 0});
}

void PhysicalDocument::add_object(std::string_view id,
                                  std::string_view object_class,
                                  std::string_view room) {
  objects.push_back({EntityName(id), EntityName(object_class), EntityName(room), 0});
}

// ---------------------------------------------------------------------------
// Parsing

ConceptualDocument parse_conceptual_document(std::string_view text) {
  ConceptualDocument doc;
  std::set<std::pair<Namespace, std::string>> seen;

  for_each_line(text, [&](int line, std::string_view raw) {
    auto tokens = tokenize(raw);
    if (tokens.empty()) return;
    const auto keyword = tokens[0];

    for (std::size_t k = 0; k < 5; ++k) {
      if (keyword != kNamespaceKeywords[k]) continue;
      if (tokens.size() != 2)
        throw SyntaxError(line, "arity: '" + std::string(keyword) +
                                    "' takes 1 name, got " +
                                    std::to_string(tokens.size() - 1));
      auto kind = static_cast<Namespace>(k);
      auto name = name_at(line, tokens[1]);
      if (!seen.emplace(kind, name.canonical()).second)
        throw KbError(KbErrorKind::duplicate_declaration, {name.canonical()},
                      line_site(line, keyword));
      doc.declarations.push_back({kind, std::move(name), line});
      return;
    }
    for (std::size_t r = 0; r < kRelationCount; ++r) {
      if (keyword != kRelationKeywords[r]) continue;
      if (tokens.size() != 3)
        throw SyntaxError(line, "arity: '" + std::string(keyword) +
                                    "' takes 2 names, got " +
                                    std::to_string(tokens.size() - 1));
      doc.assertions.push_back({static_cast<Relation>(r),
                                name_at(line, tokens[1]),
                                name_at(line, tokens[2]), line});
      return;
    }
    throw SyntaxError(line, "unknown statement '" + std::string(keyword) + "'");
  });
  return doc;
}

PhysicalDocument parse_physical_document(std::string_view text) {
  PhysicalDocument doc;
  std::set<std::string> ids;

  for_each_line(text, [&](int line, std::string_view raw) {
    auto tokens = tokenize(raw);
    if (tokens.empty()) return;
    const auto keyword = tokens[0];
    auto check_id = [&](const EntityName& id) {
      if (!ids.insert(id.canonical()).second)
        throw KbError(KbErrorKind::duplicate_declaration, {id.canonical()},
                      line_site(line, keyword));
    };
    if (keyword == "physical_room") {
      if (tokens.size() != 3)
        throw SyntaxError(line, "arity: 'physical_room' takes <id> <room_class>");
      PhysicalRoomDecl decl{name_at(line, tokens[1]), name_at(line, tokens[2]), line};
      check_id(decl.id);
      doc.rooms.push_back(std::move(decl));
    } else if (keyword == "physical_object") {
      if (tokens.size() != 4)
        throw SyntaxError(
            line, "arity: 'physical_object' takes <id> <object_class> <room_id>");
      PhysicalObjectDecl decl{name_at(line, tokens[1]), name_at(line, tokens[2]),
                              name_at(line, tokens[3]), line};
      check_id(decl.id);
      doc.objects.push_back(std::move(decl));
    } else {
      throw SyntaxError(line, "unknown statement '" + std::string(keyword) + "'");
    }
  });
  return doc;
}

std::string serialize(const ConceptualDocument& doc) {
  std::string out;
  for (const auto& d : doc.declarations) {
    out += to_string(d.kind);
    out += ' ';
    out += written(d.name);
    out += '\n';
  }
  for (const auto& a : doc.assertions) {
    out += to_string(a.relation);
    out += ' ';
    out += written(a.first);
    out += ' ';
    out += written(a.second);
    out += '\n';
  }
  return out;
}

std::string serialize(const PhysicalDocument& doc) {
  std::string out;
  for (const auto& r : doc.rooms)
    out += "physical_room " + written(r.id) + " " + written(r.room_class) + "\n";
  for (const auto& o : doc.objects)
    out += "physical_object " + written(o.id) + " " + written(o.object_class) +
           " " + written(o.room) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Knowledge base

bool is_reserved_name(std::string_view canonical) {
  return std::find(kReserved.begin(), kReserved.end(), canonical) !=
         kReserved.end();
}

bool KnowledgeBase::has(Namespace ns, std::string_view canonical) const {
  return find(ns, canonical) != nullptr;
}

const EntityName* KnowledgeBase::find(Namespace ns,
                                      std::string_view canonical) const {
  const auto& idx = index_[static_cast<std::size_t>(ns)];
  auto it = idx.find(std::string(canonical));
  if (it == idx.end()) return nullptr;
  return &entities(ns)[it->second];
}

std::vector<Namespace> KnowledgeBase::namespaces_of(
    std::string_view canonical) const {
  std::vector<Namespace> out;
  for (std::size_t k = 0; k < kNamespaceCount; ++k)
    if (has(static_cast<Namespace>(k), canonical))
      out.push_back(static_cast<Namespace>(k));
  return out;
}

const PhysicalRoom* KnowledgeBase::find_physical_room(
    std::string_view canonical) const {
  auto it = std::lower_bound(
      rooms_.begin(), rooms_.end(), canonical,
      [](const PhysicalRoom& r, std::string_view c) { return r.id.canonical() < c; });
  if (it == rooms_.end() || it->id.canonical() != canonical) return nullptr;
  return &*it;
}

const PhysicalObject* KnowledgeBase::find_physical_object(
    std::string_view canonical) const {
  auto it = std::lower_bound(
      objects_.begin(), objects_.end(), canonical,
      [](const PhysicalObject& o, std::string_view c) { return o.id.canonical() < c; });
  if (it == objects_.end() || it->id.canonical() != canonical) return nullptr;
  return &*it;
}

std::size_t KnowledgeBase::size() const {
  std::size_t n = 0;
  for (const auto& e : entities_) n += e.size();
  for (const auto& e : edges_) n += e.size();
  return n;
}

std::string KnowledgeBase::digest() const {
  const auto text = serialize(conceptual_document()) + "\n" +
                    serialize(physical_document());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a(text)));
  return buf;
}

ConceptualDocument KnowledgeBase::conceptual_document() const {
  ConceptualDocument doc;
  for (std::size_t k = 0; k < 5; ++k)
    for (const auto& e : entities_[k])
      doc.declarations.push_back({static_cast<Namespace>(k), e, 0});
  for (std::size_t r = 0; r < kRelationCount; ++r) {
    const auto rel = static_cast<Relation>(r);
    const auto [from_ns, to_ns] = relation_signature(rel);
    for (const auto& e : edges_[r])
      doc.assertions.push_back({rel, *find(from_ns, e.from), *find(to_ns, e.to), 0});
  }
  return doc;
}

PhysicalDocument KnowledgeBase::physical_document() const {
  PhysicalDocument doc;
  for (const auto& r : rooms_) doc.rooms.push_back({r.id, r.room_class, 0});
  for (const auto& o : objects_)
    doc.objects.push_back({o.id, o.object_class, o.room, 0});
  return doc;
}

namespace {

// Returns the closed cycle path when the containment graph has a cycle.
std::optional<std::vector<std::string>> find_cycle(
    const std::map<std::string, std::vector<std::string>>& children) {
  enum class Mark { none, active, done };
  std::map<std::string, Mark> mark;
  std::vector<std::string> stack;
  std::optional<std::vector<std::string>> found;

  auto visit = [&](auto&& self, const std::string& node) -> void {
    mark[node] = Mark::active;
    stack.push_back(node);
    if (auto it = children.find(node); it != children.end()) {
      for (const auto& child : it->second) {
        if (found) return;
        auto m = mark[child];
        if (m == Mark::active) {
          auto pos = std::find(stack.begin(), stack.end(), child);
          std::vector<std::string> path(pos, stack.end());
          path.push_back(child);
          found = std::move(path);
          return;
        }
        if (m == Mark::none) self(self, child);
      }
    }
    stack.pop_back();
    mark[node] = Mark::done;
  };

  for (const auto& [node, _] : children) {
    if (found) break;
    if (mark[node] == Mark::none) visit(visit, node);
  }
  return found;
}

}  // namespace

KnowledgeBase build_kb(const ConceptualDocument& conceptual,
                       const PhysicalDocument& physical) {
  KnowledgeBase kb;

  std::map<std::string, Namespace> owner;
  for (const auto& d : conceptual.declarations) {
    const auto& c = d.name.canonical();
    if (is_reserved_name(c))
      throw KbError(KbErrorKind::reserved_name, {c}, line_site(d.line, to_string(d.kind)));
    auto [it, inserted] = owner.emplace(c, d.kind);
    if (!inserted) {
      if (it->second == d.kind)
        throw KbError(KbErrorKind::duplicate_declaration, {c},
                      line_site(d.line, to_string(d.kind)));
      throw KbError(KbErrorKind::cross_namespace_collision, {c},
                    line_site(d.line, std::string(to_string(it->second)) + "/" +
                                          std::string(to_string(d.kind))));
    }
    kb.entities_[static_cast<std::size_t>(d.kind)].push_back(d.name);
  }

  auto require = [&](Namespace ns, const EntityName& name, const std::string& site) {
    auto it = owner.find(name.canonical());
    if (it == owner.end() || it->second != ns)
      throw KbError(KbErrorKind::unknown_reference, {name.canonical()}, site);
  };

  for (const auto& a : conceptual.assertions) {
    const auto [from_ns, to_ns] = relation_signature(a.relation);
    const auto site = line_site(a.line, to_string(a.relation));
    require(from_ns, a.first, site);
    require(to_ns, a.second, site);
    Edge e{a.first.canonical(), a.second.canonical()};
    if (a.relation == Relation::used_with) {
      if (e.from == e.to)
        throw KbError(KbErrorKind::self_interaction, {e.from}, site);
      if (e.to < e.from) std::swap(e.from, e.to);
    }
    kb.edges_[static_cast<std::size_t>(a.relation)].push_back(std::move(e));
  }

  for (auto& edges : kb.edges_) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }

  std::map<std::string, std::vector<std::string>> children;
  for (const auto& e : kb.edges(Relation::object_contains))
    children[e.from].push_back(e.to);
  if (auto cycle = find_cycle(children))
    throw KbError(KbErrorKind::containment_cycle, *cycle, "object_contains");

  std::set<std::string> physical_ids;
  for (const auto& r : physical.rooms) {
    const auto site = line_site(r.line, "physical_room");
    if (!physical_ids.insert(r.id.canonical()).second)
      throw KbError(KbErrorKind::duplicate_declaration, {r.id.canonical()}, site);
    require(Namespace::room_class, r.room_class, site);
    kb.rooms_.push_back({r.id, *std::find(kb.entities(Namespace::room_class).begin(),
                                          kb.entities(Namespace::room_class).end(),
                                          r.room_class)});
  }
  std::sort(kb.rooms_.begin(), kb.rooms_.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });

  for (const auto& o : physical.objects) {
    const auto site = line_site(o.line, "physical_object");
    if (!physical_ids.insert(o.id.canonical()).second)
      throw KbError(KbErrorKind::duplicate_declaration, {o.id.canonical()}, site);
    require(Namespace::object_class, o.object_class, site);
    const auto* room = kb.find_physical_room(o.room.canonical());
    if (!room)
      throw KbError(KbErrorKind::unknown_reference, {o.room.canonical()}, site);
    const auto& classes = kb.entities(Namespace::object_class);
    kb.objects_.push_back(
        {o.id, *std::find(classes.begin(), classes.end(), o.object_class), room->id});
  }
  std::sort(kb.objects_.begin(), kb.objects_.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });

  for (const auto& r : kb.rooms_)
    kb.entities_[static_cast<std::size_t>(Namespace::physical_room)].push_back(r.id);
  for (const auto& o : kb.objects_)
    kb.entities_[static_cast<std::size_t>(Namespace::physical_object)].push_back(o.id);

  for (std::size_t k = 0; k < kNamespaceCount; ++k) {
    auto& list = kb.entities_[k];
    std::sort(list.begin(), list.end());
    for (std::size_t i = 0; i < list.size(); ++i)
      kb.index_[k].emplace(list[i].canonical(), i);
  }
  return kb;
}

}  // namespace semnav

#include "semnav/reasoner.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <utility>

namespace semnav {

namespace {

using enum Namespace;

constexpr std::array<MethodInfo, kMethodCount> kCatalog = {{
    {Method::label_rooms_by_objects, "label_rooms_by_objects",
     "Semantic labeling by object", InputShape::set, object_class, room_class, false},
    {Method::room_class_of, "room_class_of", "Obtain Class Room from Instance Room",
     InputShape::single, physical_room, room_class, false},
    {Method::room_classes_containing, "room_classes_containing",
     "Obtain Class rooms containing an object", InputShape::single, object_class,
     room_class, false},
    {Method::related_objects, "related_objects", "Obtain conceptually related objects",
     InputShape::single, object_class, object_class, true},
    {Method::objects_with_utility, "objects_with_utility",
     "Objects that serve a specific utility", InputShape::single, utility,
     object_class, false},
    {Method::objects_with_meaning, "objects_with_meaning",
     "Objects whose use has a meaning associated", InputShape::single, meaning,
     object_class, true},
    {Method::probable_locations, "probable_locations", "Probable location of an object",
     InputShape::single, object_class, room_class, true},
    {Method::physical_rooms_of_class, "physical_rooms_of_class",
     "Physical room that fits conceptual room", InputShape::single, room_class,
     physical_room, false},
    {Method::object_classes_in_physical_room, "object_classes_in_physical_room",
     "Objects contained in physical room", InputShape::single, physical_room,
     object_class, false},
    {Method::physical_objects_of_class, "physical_objects_of_class",
     "Physical objects that fit with conceptual object", InputShape::single,
     object_class, physical_object, false},
    {Method::class_of_physical_object, "class_of_physical_object",
     "Conceptual name of a physical object", InputShape::single, physical_object,
     object_class, false},
    {Method::all_object_classes, "all_object_classes", "Obtain all conceptual objects",
     InputShape::none, object_class, object_class, false},
    {Method::all_utilities, "all_utilities", "Obtain all actions / utilities",
     InputShape::none, utility, utility, false},
    {Method::characteristics_of, "characteristics_of", "Characteristics of an object",
     InputShape::single, object_class, characteristic, true},
}};

}  // namespace

std::string_view to_string(Backend b) {
  return b == Backend::relational ? "relational" : "ontology";
}

std::optional<Backend> backend_from_name(std::string_view name) {
  if (name == "relational") return Backend::relational;
  if (name == "ontology") return Backend::ontology;
  return std::nullopt;
}

std::string_view to_string(InputShape s) {
  switch (s) {
    case InputShape::none: return "none";
    case InputShape::single: return "one";
    case InputShape::set: return "set";
  }
  return "?";
}

std::span<const MethodInfo> method_catalog() { return kCatalog; }

const MethodInfo& info(Method m) { return kCatalog[static_cast<std::size_t>(m)]; }

std::string_view to_string(Method m) { return info(m).name; }

std::optional<Method> method_from_name(std::string_view name) {
  for (const auto& mi : kCatalog)
    if (mi.name == name) return mi.id;
  return std::nullopt;
}

std::string_view to_string(ReasonerErrorKind kind) {
  switch (kind) {
    case ReasonerErrorKind::unknown_entity: return "UnknownEntity";
    case ReasonerErrorKind::wrong_kind: return "WrongKind";
    case ReasonerErrorKind::empty_input: return "EmptyInput";
  }
  return "?";
}

ReasonerError::ReasonerError(ReasonerErrorKind kind, std::string subject)
    : std::runtime_error(std::string(to_string(kind)) + "(" + subject + ")"),
      kind_(kind),
      subject_(std::move(subject)) {}

namespace {

using PairSet = std::set<std::pair<std::string, std::set<std::string>>>;

PairSet as_pairs(const ReasonerResult& r) {
  PairSet out;
  for (std::size_t i = 0; i < r.answers.size(); ++i) {
    std::set<std::string> chain;
    if (i < r.chains.size())
      for (const auto& hop : r.chains[i]) chain.insert(hop.canonical());
    out.emplace(r.answers[i].canonical(), std::move(chain));
  }
  return out;
}

}  // namespace

bool compare_outputs(const ReasonerResult& a, const ReasonerResult& b) {
  return a.answers.size() == b.answers.size() && as_pairs(a) == as_pairs(b);
}

std::string canonical_text(const ReasonerResult& r) {
  std::string out;
  for (const auto& [answer, chain] : as_pairs(r)) {
    out += answer;
    out += '[';
    bool first = true;
    for (const auto& hop : chain) {
      if (!first) out += ',';
      out += hop;
      first = false;
    }
    out += "];";
  }
  return out;
}

void order_answers(Method m, ReasonerResult& result) {
  std::vector<std::size_t> idx(result.answers.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;

  auto by_name = [&](std::size_t a, std::size_t b) {
    return result.answers[a] < result.answers[b];
  };
  if (m == Method::label_rooms_by_objects) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (result.chains[a].size() != result.chains[b].size())
        return result.chains[a].size() > result.chains[b].size();
      return by_name(a, b);
    });
  } else if (m == Method::probable_locations) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      const bool ia = !result.chains[a].empty(), ib = !result.chains[b].empty();
      if (ia != ib) return !ia;
      return by_name(a, b);
    });
  } else {
    std::sort(idx.begin(), idx.end(), by_name);
  }

  ReasonerResult sorted;
  sorted.backend = result.backend;
  for (auto i : idx) sorted.add(std::move(result.answers[i]), std::move(result.chains[i]));
  result = std::move(sorted);
}

ReasonerResult Reasoner::run(Method m, std::span<const std::string> inputs) const {
  const auto& mi = info(m);
  std::vector<std::string> canonical;

  if (mi.shape == InputShape::none) {
    if (!inputs.empty())
      throw std::invalid_argument(std::string(mi.name) + " takes no input");
  } else {
    if (inputs.empty()) throw ReasonerError(ReasonerErrorKind::empty_input, std::string(mi.name));
    if (mi.shape == InputShape::single && inputs.size() != 1)
      throw std::invalid_argument(std::string(mi.name) + " takes exactly one input");

    for (const auto& raw : inputs) {
      auto c = try_canonicalize(raw);
      if (!c) throw ReasonerError(ReasonerErrorKind::unknown_entity, raw);
      const auto kinds = namespaces_of(*c);
      if (kinds.empty()) throw ReasonerError(ReasonerErrorKind::unknown_entity, *c);
      if (std::find(kinds.begin(), kinds.end(), mi.input) == kinds.end())
        throw ReasonerError(ReasonerErrorKind::wrong_kind, *c);
      canonical.push_back(std::move(*c));
    }
    std::sort(canonical.begin(), canonical.end());
    canonical.erase(std::unique(canonical.begin(), canonical.end()), canonical.end());
  }

  auto result = evaluate(m, canonical);
  result.backend = backend();
  order_answers(m, result);
  return result;
}

}  // namespace semnav

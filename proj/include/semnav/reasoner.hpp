#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "semnav/kb.hpp"
#include "semnav/names.hpp"

namespace semnav {

enum class Backend { relational, ontology };
std::string_view to_string(Backend b);
std::optional<Backend> backend_from_name(std::string_view name);

enum class Method {
  label_rooms_by_objects,
  room_class_of,
  room_classes_containing,
  related_objects,
  objects_with_utility,
  objects_with_meaning,
  probable_locations,
  physical_rooms_of_class,
  object_classes_in_physical_room,
  physical_objects_of_class,
  class_of_physical_object,
  all_object_classes,
  all_utilities,
  characteristics_of,
};
inline constexpr std::size_t kMethodCount = 14;

enum class InputShape { none, single, set };
std::string_view to_string(InputShape s);

struct MethodInfo {
  Method id;
  std::string_view name;
  std::string_view title;
  InputShape shape;
  Namespace input;   // meaningless when shape == none
  Namespace output;
  bool chained;      // answers carry non-trivial explanation chains
};

std::span<const MethodInfo> method_catalog();
const MethodInfo& info(Method m);
std::string_view to_string(Method m);
std::optional<Method> method_from_name(std::string_view name);

// Tags used as chain hops by related_objects.
inline constexpr std::string_view kTagUsedWith = "used_with";
inline constexpr std::string_view kTagContainer = "container";
inline constexpr std::string_view kTagContainee = "containee";

/// Answer set of one reasoner call. chains[i] explains answers[i]:
///  - probable_locations / characteristics_of: container path, nearest first
///  - objects_with_meaning: the utility carrying the meaning
///  - related_objects: the relation tag
///  - label_rooms_by_objects: the matched input objects
/// When several derivations exist the chain is the shortest one, ties broken
/// by lexicographic order of the hop sequence.
struct ReasonerResult {
  std::vector<EntityName> answers;
  std::vector<std::vector<EntityName>> chains;
  Backend backend = Backend::relational;

  void add(EntityName answer, std::vector<EntityName> chain = {}) {
    answers.push_back(std::move(answer));
    chains.push_back(std::move(chain));
  }
  std::size_t size() const { return answers.size(); }
};

enum class ReasonerErrorKind { unknown_entity, wrong_kind, empty_input };
std::string_view to_string(ReasonerErrorKind kind);

class ReasonerError : public std::runtime_error {
 public:
  ReasonerError(ReasonerErrorKind kind, std::string subject);
  ReasonerErrorKind kind() const { return kind_; }
  const std::string& subject() const { return subject_; }

 private:
  ReasonerErrorKind kind_;
  std::string subject_;
};

// Order-insensitive equality on (answer, chain-as-set) pairs.
bool compare_outputs(const ReasonerResult& a, const ReasonerResult& b);

// Canonical in-backend ordering: lexicographic by answer, except
// label_rooms_by_objects (more matched objects first) and probable_locations
// (direct placements first).
void order_answers(Method m, ReasonerResult& result);

// Stable text form of an answer set, independent of answer order.
std::string canonical_text(const ReasonerResult& r);

/// Backend-independent reasoner contract. run() validates and canonicalizes
/// inputs, then dispatches to the backend.
class Reasoner {
 public:
  virtual ~Reasoner() = default;

  virtual Backend backend() const = 0;

  ReasonerResult run(Method m, std::span<const std::string> inputs) const;
  ReasonerResult run(Method m, std::initializer_list<std::string> inputs) const {
    return run(m, std::span<const std::string>(inputs.begin(), inputs.size()));
  }

  ReasonerResult label_rooms_by_objects(std::span<const std::string> objects) const {
    return run(Method::label_rooms_by_objects, objects);
  }
  ReasonerResult room_class_of(std::string room) const {
    return run(Method::room_class_of, {std::move(room)});
  }
  ReasonerResult room_classes_containing(std::string object) const {
    return run(Method::room_classes_containing, {std::move(object)});
  }
  ReasonerResult related_objects(std::string object) const {
    return run(Method::related_objects, {std::move(object)});
  }
  ReasonerResult objects_with_utility(std::string utility) const {
    return run(Method::objects_with_utility, {std::move(utility)});
  }
  ReasonerResult objects_with_meaning(std::string meaning) const {
    return run(Method::objects_with_meaning, {std::move(meaning)});
  }
  ReasonerResult probable_locations(std::string object) const {
    return run(Method::probable_locations, {std::move(object)});
  }
  ReasonerResult physical_rooms_of_class(std::string room_class) const {
    return run(Method::physical_rooms_of_class, {std::move(room_class)});
  }
  ReasonerResult object_classes_in_physical_room(std::string room) const {
    return run(Method::object_classes_in_physical_room, {std::move(room)});
  }
  ReasonerResult physical_objects_of_class(std::string object) const {
    return run(Method::physical_objects_of_class, {std::move(object)});
  }
  ReasonerResult class_of_physical_object(std::string object) const {
    return run(Method::class_of_physical_object, {std::move(object)});
  }
  ReasonerResult all_object_classes() const {
    return run(Method::all_object_classes, std::span<const std::string>{});
  }
  ReasonerResult all_utilities() const {
    return run(Method::all_utilities, std::span<const std::string>{});
  }
  ReasonerResult characteristics_of(std::string object) const {
    return run(Method::characteristics_of, {std::move(object)});
  }

 protected:
  // Namespaces in which the backend knows the canonical name.
  virtual std::vector<Namespace> namespaces_of(std::string_view canonical) const = 0;

  // Inputs are canonical and validated. The result is ordered by run().
  virtual ReasonerResult evaluate(Method m,
                                  std::span<const std::string> inputs) const = 0;
};

}  // namespace semnav

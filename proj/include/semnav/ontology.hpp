#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "semnav/kb.hpp"
#include "semnav/reasoner.hpp"

namespace semnav::ontology {

inline constexpr std::string_view kRoot = "thing";

/// is-a tree rooted at `thing`. The first level is fixed to
/// characteristic, meaning, object, room, utility.
class ClassTree {
 public:
  ClassTree();

  // Throws std::invalid_argument if the name exists or the parent does not.
  void add(std::string name, std::string parent);

  bool contains(std::string_view name) const;
  std::optional<std::string> parent(std::string_view name) const;
  std::vector<std::string> children(std::string_view name) const;

  // Proper, transitive subclass test.
  bool is_subclass_of(std::string_view name, std::string_view ancestor) const;
  std::vector<std::string> ancestors(std::string_view name) const;  // nearest first
  std::vector<std::string> descendants(std::string_view name) const;  // sorted

  // First-level class above name; empty for the root and first level.
  std::string category(std::string_view name) const;

  std::size_t size() const { return parent_.size() + 1; }

 private:
  std::map<std::string, std::string, std::less<>> parent_;
};

enum class Predicate {
  contains,
  has_utility,
  means,
  used_with,
  has_characteristic,
  instance_of,
  located_in,
};
std::string_view to_string(Predicate p);
std::optional<Predicate> predicate_from_name(std::string_view name);

struct Triple {
  std::string subject;
  Predicate predicate;
  std::string object;

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

enum class Partition { conceptual, physical };
Partition partition_of(Predicate p);

/// Facts of the ontology in two partitions: class-level triples and
/// instance-level triples (instance_of, located_in). Indexed by
/// (predicate, subject) and (predicate, object).
class TripleStore {
 public:
  ClassTree& classes() { return classes_; }
  const ClassTree& classes() const { return classes_; }

  void insert(Triple t);
  void set_label(const std::string& id, std::string display);

  std::span<const Triple> partition(Partition p) const;
  std::vector<const Triple*> match(Predicate p, const std::string* subject,
                                   const std::string* object) const;
  bool holds(const Triple& t) const;

  // First-level category of an individual's class, empty if not an individual.
  std::string individual_category(std::string_view id) const;
  std::string label(const std::string& id) const;

  std::size_t size() const { return conceptual_.size() + physical_.size(); }

  // Copy without the physical partition.
  TripleStore conceptual_only() const;

  // Sorted `subject predicate object` lines.
  std::string dump() const;

 private:
  void reindex();

  ClassTree classes_;
  std::vector<Triple> conceptual_, physical_;
  std::multimap<std::pair<Predicate, std::string>, std::size_t> by_subject_, by_object_;
  std::unordered_map<std::string, std::string> labels_;
  std::unordered_map<std::string, std::string> instance_class_;
};

TripleStore load_triples(const KnowledgeBase& kb);

// ---------------------------------------------------------------------------
// Goals and rules

struct Term {
  bool variable = false;
  std::string text;

  static Term var(std::string name) { return {true, std::move(name)}; }
  static Term lit(std::string value) { return {false, std::move(value)}; }
};

/// Binary goal. The predicate is a stored Predicate name, the builtin
/// `subclass_of`, or the head of some rule.
struct Goal {
  std::string predicate;
  Term subject;
  Term object;
};

/// How a rule's answer chain is assembled: emit a variable's binding, emit a
/// literal, or splice the chain of a body goal.
struct ChainPart {
  enum class Kind { variable, literal, subgoal } kind;
  std::string text;
  std::size_t goal = 0;

  static ChainPart var(std::string v) { return {Kind::variable, std::move(v), 0}; }
  static ChainPart lit(std::string s) { return {Kind::literal, std::move(s), 0}; }
  static ChainPart sub(std::size_t i) { return {Kind::subgoal, {}, i}; }
};

struct Rule {
  Goal head;
  std::vector<Goal> body;
  std::vector<ChainPart> chain;
};

class RuleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Validates range restriction: every head variable occurs in the body.
Rule make_rule(Goal head, std::vector<Goal> body, std::vector<ChainPart> chain = {});

// located_at, has_char, object_means, related, plus the type-guard helpers
// room_contains, obj_contains and is_a.
const std::vector<Rule>& builtin_rules();

class UnboundGoal : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Binding {
  std::map<std::string, std::string> values;
  std::vector<std::string> chain;  // only for single-goal queries
};

/// Backward chaining with call-variant tabling. A Solver owns its memo
/// tables, so one instance serves one query.
class Solver {
 public:
  explicit Solver(const TripleStore& store, const std::vector<Rule>& rules = builtin_rules());

  // Distinct bindings of the goal's variables, each with the best proof chain
  // (shortest, then lexicographically smallest).
  std::vector<Binding> solve(const Goal& goal);

  // Distinct bindings of a conjunction.
  std::vector<Binding> solve_all(std::span<const Goal> goals);

  bool is_derived(std::string_view predicate) const;

 private:
  using Chain = std::vector<std::string>;
  using Answer = std::pair<std::string, std::string>;
  struct AnswerTable {
    std::map<Answer, Chain> answers;
    bool complete = false;
    bool in_progress = false;
  };
  template <typename F>
  void answers_for(const std::string& predicate, const std::string* s, const std::string* o,
                   F&& emit);
  AnswerTable& table(const std::string& predicate, const std::string* s, const std::string* o);
  template <typename F>
  void solve_body(const Rule& rule, std::size_t i, std::map<std::string, std::string>& env,
                  std::vector<Chain>& subchains, F&& emit);

  const TripleStore& store_;
  const std::vector<Rule>& rules_;
  std::map<std::string, std::vector<const Rule*>, std::less<>> by_head_;
  std::map<std::string, AnswerTable> tables_;
  bool saw_incomplete_ = false;
};

class OntologyReasoner : public Reasoner {
 public:
  explicit OntologyReasoner(const KnowledgeBase& kb);
  explicit OntologyReasoner(TripleStore store);

  Backend backend() const override { return Backend::ontology; }
  const TripleStore& store() const { return store_; }

 protected:
  std::vector<Namespace> namespaces_of(std::string_view canonical) const override;
  ReasonerResult evaluate(Method m, std::span<const std::string> inputs) const override;

 private:
  EntityName name(const std::string& id) const;

  TripleStore store_;
};

}  // namespace semnav::ontology

#include "semnav/ontology.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace semnav::ontology {

namespace {

constexpr std::array<std::string_view, 5> kFirstLevel = {"characteristic", "meaning", "object",
                                                         "room", "utility"};

constexpr std::array<std::string_view, 7> kPredicateNames = {
    "contains", "has_utility", "means", "used_with", "has_characteristic", "instance_of",
    "located_in"};

constexpr std::string_view kSubclassOf = "subclass_of";

}  // namespace

// ---------------------------------------------------------------------------
// Class tree

ClassTree::ClassTree() {
  for (auto c : kFirstLevel) parent_.emplace(std::string(c), std::string(kRoot));
}

void ClassTree::add(std::string name, std::string parent) {
  if (contains(name)) throw std::invalid_argument("class '" + name + "' already exists");
  if (!contains(parent)) throw std::invalid_argument("no parent class '" + parent + "'");
  parent_.emplace(std::move(name), std::move(parent));
}

bool ClassTree::contains(std::string_view name) const {
  return name == kRoot || parent_.find(name) != parent_.end();
}

std::optional<std::string> ClassTree::parent(std::string_view name) const {
  auto it = parent_.find(name);
  if (it == parent_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> ClassTree::children(std::string_view name) const {
  std::vector<std::string> out;
  for (const auto& [child, p] : parent_)
    if (p == name) out.push_back(child);
  return out;
}

std::vector<std::string> ClassTree::ancestors(std::string_view name) const {
  std::vector<std::string> out;
  auto p = parent(name);
  while (p) {
    out.push_back(*p);
    p = parent(*p);
  }
  return out;
}

bool ClassTree::is_subclass_of(std::string_view name, std::string_view ancestor) const {
  auto p = parent(name);
  while (p) {
    if (*p == ancestor) return true;
    p = parent(*p);
  }
  return false;
}

std::vector<std::string> ClassTree::descendants(std::string_view name) const {
  std::vector<std::string> out;
  for (const auto& [child, _] : parent_)
    if (is_subclass_of(child, name)) out.push_back(child);
  return out;
}

std::string ClassTree::category(std::string_view name) const {
  auto chain = ancestors(name);
  if (chain.size() < 2) return {};
  return chain[chain.size() - 2];
}

// ---------------------------------------------------------------------------
// Triple store

std::string_view to_string(Predicate p) { return kPredicateNames[static_cast<std::size_t>(p)]; }

std::optional<Predicate> predicate_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kPredicateNames.size(); ++i)
    if (kPredicateNames[i] == name) return static_cast<Predicate>(i);
  return std::nullopt;
}

Partition partition_of(Predicate p) {
  return p == Predicate::instance_of || p == Predicate::located_in ? Partition::physical
                                                                   : Partition::conceptual;
}

void TripleStore::insert(Triple t) {
  if (holds(t)) return;
  auto& part = partition_of(t.predicate) == Partition::physical ? physical_ : conceptual_;
  const std::size_t code =
      part.size() * 2 + (partition_of(t.predicate) == Partition::physical ? 1 : 0);
  by_subject_.emplace(std::make_pair(t.predicate, t.subject), code);
  by_object_.emplace(std::make_pair(t.predicate, t.object), code);
  if (t.predicate == Predicate::instance_of) instance_class_[t.subject] = t.object;
  part.push_back(std::move(t));
}

void TripleStore::set_label(const std::string& id, std::string display) {
  labels_[id] = std::move(display);
}

std::span<const Triple> TripleStore::partition(Partition p) const {
  return p == Partition::physical ? std::span<const Triple>(physical_)
                                  : std::span<const Triple>(conceptual_);
}

std::vector<const Triple*> TripleStore::match(Predicate p, const std::string* subject,
                                              const std::string* object) const {
  std::vector<const Triple*> out;
  auto at = [&](std::size_t code) -> const Triple* {
    return code % 2 ? &physical_[code / 2] : &conceptual_[code / 2];
  };
  if (subject) {
    auto [lo, hi] = by_subject_.equal_range({p, *subject});
    for (auto it = lo; it != hi; ++it) {
      const auto* t = at(it->second);
      if (!object || t->object == *object) out.push_back(t);
    }
  } else if (object) {
    auto [lo, hi] = by_object_.equal_range({p, *object});
    for (auto it = lo; it != hi; ++it) out.push_back(at(it->second));
  } else {
    for (const auto& t : partition(partition_of(p)))
      if (t.predicate == p) out.push_back(&t);
  }
  return out;
}

bool TripleStore::holds(const Triple& t) const {
  return !match(t.predicate, &t.subject, &t.object).empty();
}

std::string TripleStore::individual_category(std::string_view id) const {
  auto it = instance_class_.find(std::string(id));
  if (it == instance_class_.end()) return {};
  auto cat = classes_.category(it->second);
  return cat;
}

std::string TripleStore::label(const std::string& id) const {
  auto it = labels_.find(id);
  return it == labels_.end() ? id : it->second;
}

TripleStore TripleStore::conceptual_only() const {
  TripleStore out;
  out.classes_ = classes_;
  out.labels_ = labels_;
  for (const auto& t : conceptual_) out.insert(t);
  return out;
}

std::string TripleStore::dump() const {
  std::vector<std::string> lines;
  for (const auto* part : {&conceptual_, &physical_})
    for (const auto& t : *part)
      lines.push_back(t.subject + " " + std::string(to_string(t.predicate)) + " " + t.object);
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

TripleStore load_triples(const KnowledgeBase& kb) {
  TripleStore store;
  const std::pair<Namespace, std::string_view> levels[] = {
      {Namespace::room_class, "room"},
      {Namespace::object_class, "object"},
      {Namespace::utility, "utility"},
      {Namespace::meaning, "meaning"},
      {Namespace::characteristic, "characteristic"},
  };
  for (const auto& [ns, parent] : levels)
    for (const auto& e : kb.entities(ns)) {
      store.classes().add(e.canonical(), std::string(parent));
      store.set_label(e.canonical(), e.display());
    }

  const std::pair<Relation, Predicate> mapping[] = {
      {Relation::room_contains, Predicate::contains},
      {Relation::object_contains, Predicate::contains},
      {Relation::has_utility, Predicate::has_utility},
      {Relation::utility_means, Predicate::means},
      {Relation::used_with, Predicate::used_with},
      {Relation::has_characteristic, Predicate::has_characteristic},
  };
  for (const auto& [rel, pred] : mapping)
    for (const auto& e : kb.edges(rel)) store.insert({e.from, pred, e.to});

  for (const auto& r : kb.physical_rooms()) {
    store.set_label(r.id.canonical(), r.id.display());
    store.insert({r.id.canonical(), Predicate::instance_of, r.room_class.canonical()});
  }
  for (const auto& o : kb.physical_objects()) {
    store.set_label(o.id.canonical(), o.id.display());
    store.insert({o.id.canonical(), Predicate::instance_of, o.object_class.canonical()});
    store.insert({o.id.canonical(), Predicate::located_in, o.room.canonical()});
  }
  return store;
}

// ---------------------------------------------------------------------------
// Rules

Rule make_rule(Goal head, std::vector<Goal> body, std::vector<ChainPart> chain) {
  std::set<std::string> body_vars;
  for (const auto& g : body) {
    if (g.subject.variable) body_vars.insert(g.subject.text);
    if (g.object.variable) body_vars.insert(g.object.text);
  }
  for (const auto* t : {&head.subject, &head.object})
    if (t->variable && !body_vars.count(t->text))
      throw RuleError("rule " + head.predicate + " is not range-restricted: variable " +
                      t->text + " does not occur in the body");
  for (const auto& part : chain) {
    if (part.kind == ChainPart::Kind::variable && !body_vars.count(part.text))
      throw RuleError("chain variable " + part.text + " does not occur in the body");
    if (part.kind == ChainPart::Kind::subgoal && part.goal >= body.size())
      throw RuleError("chain refers to a missing body goal");
  }
  return {std::move(head), std::move(body), std::move(chain)};
}

const std::vector<Rule>& builtin_rules() {
  static const std::vector<Rule> rules = [] {
    auto V = [](const char* n) { return Term::var(n); };
    auto L = [](std::string_view n) { return Term::lit(std::string(n)); };
    auto G = [](const char* p, Term s, Term o) { return Goal{p, std::move(s), std::move(o)}; };
    using C = ChainPart;
    std::vector<Rule> r;
    // Type guards over the shared `contains` property.
    r.push_back(make_rule(G("room_contains", V("R"), V("O")),
                          {G("contains", V("R"), V("O")), G("subclass_of", V("R"), L("room"))}));
    r.push_back(make_rule(G("obj_contains", V("C"), V("O")),
                          {G("contains", V("C"), V("O")), G("subclass_of", V("C"), L("object"))}));
    // Location through containers.
    r.push_back(make_rule(G("located_at", V("O"), V("R")), {G("room_contains", V("R"), V("O"))}));
    r.push_back(make_rule(G("located_at", V("O"), V("R")),
                          {G("obj_contains", V("C"), V("O")), G("located_at", V("C"), V("R"))},
                          {C::var("C"), C::sub(1)}));
    // Characteristics propagate to contained objects.
    r.push_back(make_rule(G("has_char", V("O"), V("C")),
                          {G("has_characteristic", V("O"), V("C"))}));
    r.push_back(make_rule(G("has_char", V("O"), V("C")),
                          {G("obj_contains", V("P"), V("O")), G("has_char", V("P"), V("C"))},
                          {C::var("P"), C::sub(1)}));
    r.push_back(make_rule(G("object_means", V("O"), V("M")),
                          {G("has_utility", V("O"), V("U")), G("means", V("U"), V("M"))},
                          {C::var("U")}));
    r.push_back(make_rule(G("related", V("X"), V("Y")), {G("used_with", V("X"), V("Y"))},
                          {C::lit(std::string(kTagUsedWith))}));
    r.push_back(make_rule(G("related", V("X"), V("Y")), {G("used_with", V("Y"), V("X"))},
                          {C::lit(std::string(kTagUsedWith))}));
    r.push_back(make_rule(G("related", V("X"), V("Y")), {G("obj_contains", V("X"), V("Y"))},
                          {C::lit(std::string(kTagContainee))}));
    r.push_back(make_rule(G("related", V("X"), V("Y")), {G("obj_contains", V("Y"), V("X"))},
                          {C::lit(std::string(kTagContainer))}));
    r.push_back(make_rule(G("is_a", V("X"), V("C")), {G("instance_of", V("X"), V("C"))}));
    r.push_back(make_rule(G("is_a", V("X"), V("C")),
                          {G("instance_of", V("X"), V("D")), G("subclass_of", V("D"), V("C"))}));
    return r;
  }();
  return rules;
}

// ---------------------------------------------------------------------------
// Solver

namespace {

bool better_chain(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

const std::string* resolve(const Term& t, const std::map<std::string, std::string>& env) {
  if (!t.variable) return &t.text;
  auto it = env.find(t.text);
  return it == env.end() ? nullptr : &it->second;
}

}  // namespace

Solver::Solver(const TripleStore& store, const std::vector<Rule>& rules)
    : store_(store), rules_(rules) {
  for (const auto& r : rules_) by_head_[r.head.predicate].push_back(&r);
}

bool Solver::is_derived(std::string_view predicate) const {
  return by_head_.find(predicate) != by_head_.end();
}

template <typename F>
void Solver::answers_for(const std::string& predicate, const std::string* s,
                         const std::string* o, F&& emit) {
  static const Chain kNone;
  if (predicate == kSubclassOf) {
    const auto& tree = store_.classes();
    if (s && o) {
      if (tree.is_subclass_of(*s, *o)) emit(*s, *o, kNone);
    } else if (s) {
      for (const auto& a : tree.ancestors(*s)) emit(*s, a, kNone);
    } else if (o) {
      for (const auto& d : tree.descendants(*o)) emit(d, *o, kNone);
    } else {
      for (const auto& d : tree.descendants(kRoot))
        for (const auto& a : tree.ancestors(d)) emit(d, a, kNone);
    }
    return;
  }
  if (is_derived(predicate)) {
    auto& t = table(predicate, s, o);
    std::vector<std::pair<Answer, Chain>> snapshot(t.answers.begin(), t.answers.end());
    for (const auto& [ans, chain] : snapshot) {
      if (s && ans.first != *s) continue;
      if (o && ans.second != *o) continue;
      emit(ans.first, ans.second, chain);
    }
    return;
  }
  const auto p = predicate_from_name(predicate);
  if (!p) throw std::invalid_argument("unknown predicate '" + predicate + "'");
  for (const auto* t : store_.match(*p, s, o)) emit(t->subject, t->object, kNone);
}

Solver::AnswerTable& Solver::table(const std::string& predicate, const std::string* s,
                                   const std::string* o) {
  const auto key = predicate + "(" + (s ? *s : "_") + "," + (o ? *o : "_") + ")";
  auto& t = tables_[key];
  if (t.complete) return t;
  if (t.in_progress) {
    saw_incomplete_ = true;
    return t;
  }
  t.in_progress = true;
  const bool outer = saw_incomplete_;
  bool depends_on_open = false;

  for (;;) {
    saw_incomplete_ = false;
    bool changed = false;
    for (const Rule* rule : by_head_.find(predicate)->second) {
      std::map<std::string, std::string> env;
      auto bind_head = [&](const Term& term, const std::string* value) {
        if (!value) return true;
        if (!term.variable) return term.text == *value;
        auto [it, inserted] = env.emplace(term.text, *value);
        return inserted || it->second == *value;
      };
      if (!bind_head(rule->head.subject, s) || !bind_head(rule->head.object, o)) continue;

      std::vector<Chain> subchains(rule->body.size());
      solve_body(*rule, 0, env, subchains, [&] {
        Answer ans{*resolve(rule->head.subject, env), *resolve(rule->head.object, env)};
        Chain chain;
        for (const auto& part : rule->chain) {
          switch (part.kind) {
            case ChainPart::Kind::variable: chain.push_back(env.at(part.text)); break;
            case ChainPart::Kind::literal: chain.push_back(part.text); break;
            case ChainPart::Kind::subgoal: {
              const auto& sub = subchains[part.goal];
              chain.insert(chain.end(), sub.begin(), sub.end());
              break;
            }
          }
        }
        auto [it, inserted] = t.answers.emplace(ans, chain);
        if (inserted) {
          changed = true;
          if (!s && !o && t.answers.size() > store_.size())
            throw UnboundGoal("goal " + predicate + "(_,_) exceeds the store bound of " +
                              std::to_string(store_.size()) + " answers");
        } else if (better_chain(chain, it->second)) {
          it->second = std::move(chain);
          changed = true;
        }
      });
    }
    depends_on_open = saw_incomplete_;
    if (!changed || !depends_on_open) break;
  }

  t.in_progress = false;
  t.complete = !depends_on_open;
  saw_incomplete_ = outer || depends_on_open;
  return t;
}

template <typename F>
void Solver::solve_body(const Rule& rule, std::size_t i, std::map<std::string, std::string>& env,
                        std::vector<Chain>& subchains, F&& emit) {
  if (i == rule.body.size()) {
    emit();
    return;
  }
  const auto& goal = rule.body[i];
  const std::string* s = resolve(goal.subject, env);
  const std::string* o = resolve(goal.object, env);
  // Copies: the env entries they point to may be rebound below.
  std::optional<std::string> sv, ov;
  if (s) sv = *s;
  if (o) ov = *o;

  answers_for(goal.predicate, sv ? &*sv : nullptr, ov ? &*ov : nullptr,
              [&](const std::string& as, const std::string& ao, const Chain& chain) {
                std::vector<std::string> bound;
                auto bind = [&](const Term& term, const std::string& value) {
                  if (!term.variable) return term.text == value;
                  auto [it, inserted] = env.emplace(term.text, value);
                  if (inserted) bound.push_back(term.text);
                  return it->second == value;
                };
                if (bind(goal.subject, as) && bind(goal.object, ao)) {
                  subchains[i] = chain;
                  solve_body(rule, i + 1, env, subchains, emit);
                }
                for (const auto& v : bound) env.erase(v);
              });
}

std::vector<Binding> Solver::solve(const Goal& goal) {
  std::map<std::map<std::string, std::string>, Chain> found;
  const std::string* s = goal.subject.variable ? nullptr : &goal.subject.text;
  const std::string* o = goal.object.variable ? nullptr : &goal.object.text;
  answers_for(goal.predicate, s, o,
              [&](const std::string& as, const std::string& ao, const Chain& chain) {
                std::map<std::string, std::string> values;
                if (goal.subject.variable) values.emplace(goal.subject.text, as);
                if (goal.object.variable) {
                  auto [it, inserted] = values.emplace(goal.object.text, ao);
                  if (!inserted && it->second != ao) return;
                }
                auto [it, inserted] = found.emplace(std::move(values), chain);
                if (!inserted && better_chain(chain, it->second)) it->second = chain;
              });
  std::vector<Binding> out;
  for (auto& [values, chain] : found) out.push_back({values, chain});
  return out;
}

std::vector<Binding> Solver::solve_all(std::span<const Goal> goals) {
  Rule conj{{"", Term::lit(""), Term::lit("")}, {goals.begin(), goals.end()}, {}};
  std::set<std::map<std::string, std::string>> found;
  std::map<std::string, std::string> env;
  std::vector<Chain> subchains(goals.size());
  solve_body(conj, 0, env, subchains, [&] { found.insert(env); });
  std::vector<Binding> out;
  for (const auto& values : found) out.push_back({values, {}});
  return out;
}

// ---------------------------------------------------------------------------
// Reasoner

OntologyReasoner::OntologyReasoner(const KnowledgeBase& kb) : store_(load_triples(kb)) {}

OntologyReasoner::OntologyReasoner(TripleStore store) : store_(std::move(store)) {}

std::vector<Namespace> OntologyReasoner::namespaces_of(std::string_view canonical) const {
  std::vector<Namespace> out;
  const auto& tree = store_.classes();
  if (tree.contains(canonical)) {
    const auto cat = tree.category(canonical);
    if (cat == "room") out.push_back(Namespace::room_class);
    else if (cat == "object") out.push_back(Namespace::object_class);
    else if (cat == "utility") out.push_back(Namespace::utility);
    else if (cat == "meaning") out.push_back(Namespace::meaning);
    else if (cat == "characteristic") out.push_back(Namespace::characteristic);
  }
  const auto ind = store_.individual_category(canonical);
  if (ind == "room") out.push_back(Namespace::physical_room);
  else if (ind == "object") out.push_back(Namespace::physical_object);
  return out;
}

EntityName OntologyReasoner::name(const std::string& id) const {
  return EntityName(store_.label(id));
}

ReasonerResult OntologyReasoner::evaluate(Method m, std::span<const std::string> inputs) const {
  auto V = [](const char* n) { return Term::var(n); };
  auto L = [](std::string v) { return Term::lit(std::move(v)); };
  const std::string in = inputs.empty() ? std::string() : inputs[0];

  ReasonerResult out;
  auto single = [&](Goal goal, const char* answer_var, bool with_chain) {
    Solver solver(store_);
    for (const auto& b : solver.solve(goal)) {
      std::vector<EntityName> chain;
      if (with_chain)
        for (const auto& hop : b.chain)
          chain.push_back(store_.classes().contains(hop) ? name(hop) : EntityName(hop));
      out.add(name(b.values.at(answer_var)), std::move(chain));
    }
  };
  auto conj = [&](std::vector<Goal> goals, const char* answer_var) {
    Solver solver(store_);
    std::set<std::string> answers;
    for (const auto& b : solver.solve_all(goals)) answers.insert(b.values.at(answer_var));
    for (const auto& a : answers) out.add(name(a));
  };

  switch (m) {
    case Method::label_rooms_by_objects: {
      std::map<std::string, std::vector<std::string>> matched;
      for (const auto& object : inputs) {
        Solver solver(store_);
        for (const auto& b : solver.solve({"room_contains", V("R"), L(object)}))
          matched[b.values.at("R")].push_back(object);
      }
      std::size_t full = 0;
      for (const auto& [_, objs] : matched) full += objs.size() == inputs.size();
      for (auto& [room, objs] : matched) {
        if (full > 0 && objs.size() != inputs.size()) continue;
        std::sort(objs.begin(), objs.end());
        std::vector<EntityName> chain;
        for (const auto& o : objs) chain.push_back(name(o));
        out.add(name(room), std::move(chain));
      }
      break;
    }
    case Method::room_class_of:
      conj({{"instance_of", L(in), V("C")}, {"subclass_of", V("C"), L("room")}}, "C");
      break;
    case Method::room_classes_containing:
      single({"room_contains", V("R"), L(in)}, "R", false);
      break;
    case Method::related_objects:
      single({"related", L(in), V("Y")}, "Y", true);
      break;
    case Method::objects_with_utility:
      single({"has_utility", V("O"), L(in)}, "O", false);
      break;
    case Method::objects_with_meaning:
      single({"object_means", V("O"), L(in)}, "O", true);
      break;
    case Method::probable_locations:
      single({"located_at", L(in), V("R")}, "R", true);
      break;
    case Method::physical_rooms_of_class:
    case Method::physical_objects_of_class:
      single({"is_a", V("X"), L(in)}, "X", false);
      break;
    case Method::object_classes_in_physical_room:
      conj({{"located_in", V("X"), L(in)}, {"instance_of", V("X"), V("C")}}, "C");
      break;
    case Method::class_of_physical_object:
      conj({{"instance_of", L(in), V("C")}, {"subclass_of", V("C"), L("object")}}, "C");
      break;
    case Method::all_object_classes:
      single({"subclass_of", V("C"), L("object")}, "C", false);
      break;
    case Method::all_utilities:
      single({"subclass_of", V("U"), L("utility")}, "U", false);
      break;
    case Method::characteristics_of:
      single({"has_char", L(in), V("C")}, "C", true);
      break;
  }
  return out;
}

}  // namespace semnav::ontology

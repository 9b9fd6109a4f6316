#include "semnav/relational.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace semnav::relational {

std::size_t Table::column(std::string_view column_name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == column_name) return i;
  throw PlanError("table '" + name + "' has no column '" + std::string(column_name) + "'");
}

std::string to_csv(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (i) out += ',';
    out += table.columns[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

void TableSet::add(Table table) {
  for (const auto& row : table.rows)
    if (row.size() != table.columns.size())
      throw PlanError("row arity mismatch in table '" + table.name + "'");
  if (!table.columns.empty() && table.columns.front() == "id") {
    auto& keys = keys_[table.name];
    keys.clear();
    for (std::size_t i = 0; i < table.rows.size(); ++i)
      if (!keys.emplace(table.rows[i][0], i).second)
        throw PlanError("duplicate key '" + table.rows[i][0] + "' in table '" +
                        table.name + "'");
  }
  auto name = table.name;
  tables_.insert_or_assign(std::move(name), std::move(table));
}

const Table* TableSet::find(std::string_view name) const {
  auto it = tables_.find(name);
  return it == tables_.end() ? nullptr : &it->second;
}

const Table& TableSet::at(std::string_view name) const {
  if (const auto* t = find(name)) return *t;
  throw PlanError("no table '" + std::string(name) + "'");
}

std::vector<std::string> TableSet::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : tables_) out.push_back(name);
  return out;
}

long TableSet::row_of(std::string_view table, std::string_view id) const {
  auto it = keys_.find(table);
  if (it == keys_.end()) return -1;
  auto row = it->second.find(std::string(id));
  return row == it->second.end() ? -1 : static_cast<long>(row->second);
}

TableSet load_tables(const KnowledgeBase& kb) {
  TableSet set;

  for (auto ns : {Namespace::room_class, Namespace::object_class, Namespace::utility,
                  Namespace::meaning, Namespace::characteristic}) {
    Table t{std::string(to_string(ns)), {"id", "display"}, {}};
    for (const auto& e : kb.entities(ns)) t.rows.push_back({e.canonical(), e.display()});
    set.add(std::move(t));
  }

  Table rooms{"physical_room", {"id", "display", "room_class"}, {}};
  for (const auto& r : kb.physical_rooms())
    rooms.rows.push_back({r.id.canonical(), r.id.display(), r.room_class.canonical()});
  set.add(std::move(rooms));

  Table objects{"physical_object", {"id", "display", "object_class", "room"}, {}};
  for (const auto& o : kb.physical_objects())
    objects.rows.push_back({o.id.canonical(), o.id.display(), o.object_class.canonical(),
                            o.room.canonical()});
  set.add(std::move(objects));

  const std::pair<Relation, std::pair<const char*, const char*>> joins[] = {
      {Relation::room_contains, {"room_class", "object_class"}},
      {Relation::object_contains, {"container", "containee"}},
      {Relation::has_utility, {"object_class", "utility"}},
      {Relation::utility_means, {"utility", "meaning"}},
      {Relation::used_with, {"object_a", "object_b"}},
      {Relation::has_characteristic, {"object_class", "characteristic"}},
  };
  for (const auto& [rel, cols] : joins) {
    Table t{std::string(to_string(rel)), {cols.first, cols.second}, {}};
    for (const auto& e : kb.edges(rel)) t.rows.push_back({e.from, e.to});
    set.add(std::move(t));
  }
  return set;
}

// ---------------------------------------------------------------------------
// Plans

namespace {

struct ScanOp {
  std::string table;
};
struct WhereOp {
  std::shared_ptr<const Plan::Node> child;
  std::string column;
  Operand value;
};
struct ProjectOp {
  std::shared_ptr<const Plan::Node> child;
  std::vector<std::pair<std::string, std::string>> columns;
};
struct ConstantOp {
  std::shared_ptr<const Plan::Node> child;
  std::string column;
  std::string value;
};
struct JoinOp {
  std::shared_ptr<const Plan::Node> left, right;
  std::string left_column, right_column;
};
struct DistinctOp {
  std::shared_ptr<const Plan::Node> child;
};
struct SortOp {
  std::shared_ptr<const Plan::Node> child;
};
struct UnionOp {
  std::shared_ptr<const Plan::Node> a, b;
};

}  // namespace

struct Plan::Node {
  std::variant<ScanOp, WhereOp, ProjectOp, ConstantOp, JoinOp, DistinctOp, SortOp, UnionOp>
      op;
};

namespace {

using NodePtr = std::shared_ptr<const Plan::Node>;

template <typename Op>
NodePtr make(Op op) {
  return std::make_shared<const Plan::Node>(Plan::Node{std::move(op)});
}

const Table& resolve(const TableSet& tables, std::span<const Table> scratch,
                     const std::string& name) {
  for (const auto& t : scratch)
    if (t.name == name) return t;
  return tables.at(name);
}

std::size_t index_of(const std::vector<std::string>& columns, const std::string& c) {
  auto it = std::find(columns.begin(), columns.end(), c);
  if (it == columns.end()) throw PlanError("unknown column '" + c + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::vector<std::string> schema_of(const Plan::Node& node, const TableSet& tables,
                                   std::span<const Table> scratch) {
  return std::visit(
      overloaded{
          [&](const ScanOp& op) { return resolve(tables, scratch, op.table).columns; },
          [&](const WhereOp& op) {
            auto cols = schema_of(*op.child, tables, scratch);
            index_of(cols, op.column);
            return cols;
          },
          [&](const ProjectOp& op) {
            auto in = schema_of(*op.child, tables, scratch);
            std::vector<std::string> out;
            for (const auto& [src, alias] : op.columns) {
              index_of(in, src);
              if (std::find(out.begin(), out.end(), alias) != out.end())
                throw PlanError("duplicate output column '" + alias + "'");
              out.push_back(alias);
            }
            return out;
          },
          [&](const ConstantOp& op) {
            auto cols = schema_of(*op.child, tables, scratch);
            if (std::find(cols.begin(), cols.end(), op.column) != cols.end())
              throw PlanError("duplicate output column '" + op.column + "'");
            cols.push_back(op.column);
            return cols;
          },
          [&](const JoinOp& op) {
            auto l = schema_of(*op.left, tables, scratch);
            auto r = schema_of(*op.right, tables, scratch);
            index_of(l, op.left_column);
            index_of(r, op.right_column);
            for (const auto& c : r)
              if (std::find(l.begin(), l.end(), c) != l.end())
                throw PlanError("join column clash on '" + c + "'");
            l.insert(l.end(), r.begin(), r.end());
            return l;
          },
          [&](const DistinctOp& op) { return schema_of(*op.child, tables, scratch); },
          [&](const SortOp& op) { return schema_of(*op.child, tables, scratch); },
          [&](const UnionOp& op) {
            auto a = schema_of(*op.a, tables, scratch);
            if (a != schema_of(*op.b, tables, scratch))
              throw PlanError("union of differing schemas");
            return a;
          },
      },
      node.op);
}

Table eval(const Plan::Node& node, const TableSet& tables,
           std::span<const std::string> params, std::span<const Table> scratch) {
  return std::visit(
      overloaded{
          [&](const ScanOp& op) { return resolve(tables, scratch, op.table); },
          [&](const WhereOp& op) {
            auto in = eval(*op.child, tables, params, scratch);
            const auto col = in.column(op.column);
            Table out{in.name, in.columns, {}};
            for (auto& row : in.rows) {
              const auto& v = row[col];
              bool keep = std::visit(
                  overloaded{
                      [&](const std::string& s) { return v == s; },
                      [&](const Param& p) {
                        if (p.index >= params.size()) throw PlanError("unbound parameter");
                        return v == params[p.index];
                      },
                      [&](const AnyParam&) {
                        return std::find(params.begin(), params.end(), v) != params.end();
                      },
                  },
                  op.value);
              if (keep) out.rows.push_back(std::move(row));
            }
            return out;
          },
          [&](const ProjectOp& op) {
            auto in = eval(*op.child, tables, params, scratch);
            std::vector<std::size_t> idx;
            Table out{in.name, {}, {}};
            for (const auto& [src, alias] : op.columns) {
              idx.push_back(in.column(src));
              out.columns.push_back(alias);
            }
            out.rows.reserve(in.rows.size());
            for (const auto& row : in.rows) {
              Row r;
              r.reserve(idx.size());
              for (auto i : idx) r.push_back(row[i]);
              out.rows.push_back(std::move(r));
            }
            return out;
          },
          [&](const ConstantOp& op) {
            auto in = eval(*op.child, tables, params, scratch);
            in.columns.push_back(op.column);
            for (auto& row : in.rows) row.push_back(op.value);
            return in;
          },
          [&](const JoinOp& op) {
            auto l = eval(*op.left, tables, params, scratch);
            auto r = eval(*op.right, tables, params, scratch);
            const auto lc = l.column(op.left_column);
            const auto rc = r.column(op.right_column);
            std::unordered_multimap<std::string, std::size_t> hash;
            for (std::size_t i = 0; i < r.rows.size(); ++i) hash.emplace(r.rows[i][rc], i);
            Table out{l.name + "*" + r.name, l.columns, {}};
            out.columns.insert(out.columns.end(), r.columns.begin(), r.columns.end());
            for (const auto& lrow : l.rows) {
              auto [lo, hi] = hash.equal_range(lrow[lc]);
              std::vector<std::size_t> matches;
              for (auto it = lo; it != hi; ++it) matches.push_back(it->second);
              std::sort(matches.begin(), matches.end());
              for (auto i : matches) {
                Row row = lrow;
                row.insert(row.end(), r.rows[i].begin(), r.rows[i].end());
                out.rows.push_back(std::move(row));
              }
            }
            return out;
          },
          [&](const DistinctOp& op) {
            auto in = eval(*op.child, tables, params, scratch);
            std::set<Row> seen;
            Table out{in.name, in.columns, {}};
            for (auto& row : in.rows)
              if (seen.insert(row).second) out.rows.push_back(std::move(row));
            return out;
          },
          [&](const SortOp& op) {
            auto in = eval(*op.child, tables, params, scratch);
            std::sort(in.rows.begin(), in.rows.end());
            return in;
          },
          [&](const UnionOp& op) {
            auto a = eval(*op.a, tables, params, scratch);
            auto b = eval(*op.b, tables, params, scratch);
            if (a.columns != b.columns) throw PlanError("union of differing schemas");
            for (auto& row : b.rows) a.rows.push_back(std::move(row));
            return a;
          },
      },
      node.op);
}

std::string describe_node(const Plan::Node& node) {
  return std::visit(
      overloaded{
          [&](const ScanOp& op) { return "scan(" + op.table + ")"; },
          [&](const WhereOp& op) {
            std::string v = std::visit(
                overloaded{[](const std::string& s) { return "'" + s + "'"; },
                           [](const Param& p) { return "$" + std::to_string(p.index); },
                           [](const AnyParam&) { return std::string("$*"); }},
                op.value);
            return describe_node(*op.child) + " | where " + op.column + "=" + v;
          },
          [&](const ProjectOp& op) {
            std::string cols;
            for (const auto& [s, a] : op.columns) cols += (cols.empty() ? "" : ",") + s + ">" + a;
            return describe_node(*op.child) + " | project " + cols;
          },
          [&](const ConstantOp& op) {
            return describe_node(*op.child) + " | extend " + op.column + "='" + op.value + "'";
          },
          [&](const JoinOp& op) {
            return "(" + describe_node(*op.left) + ") join[" + op.left_column + "=" +
                   op.right_column + "] (" + describe_node(*op.right) + ")";
          },
          [&](const DistinctOp& op) { return describe_node(*op.child) + " | distinct"; },
          [&](const SortOp& op) { return describe_node(*op.child) + " | sort"; },
          [&](const UnionOp& op) {
            return "(" + describe_node(*op.a) + ") union (" + describe_node(*op.b) + ")";
          },
      },
      node.op);
}

}  // namespace

Plan Plan::scan(std::string table) { return Plan(make(ScanOp{std::move(table)})); }

Plan Plan::where(std::string column, Operand value) const {
  return Plan(make(WhereOp{node_, std::move(column), std::move(value)}));
}

Plan Plan::project(std::vector<std::pair<std::string, std::string>> source_alias) const {
  return Plan(make(ProjectOp{node_, std::move(source_alias)}));
}

Plan Plan::with_constant(std::string column, std::string value) const {
  return Plan(make(ConstantOp{node_, std::move(column), std::move(value)}));
}

Plan Plan::join(const Plan& right, std::string left_column, std::string right_column) const {
  return Plan(make(JoinOp{node_, right.node_, std::move(left_column), std::move(right_column)}));
}

Plan Plan::distinct() const { return Plan(make(DistinctOp{node_})); }

Plan Plan::sort() const { return Plan(make(SortOp{node_})); }

Plan unite(const Plan& a, const Plan& b) { return Plan(make(UnionOp{a.node_, b.node_})); }

std::vector<std::string> Plan::schema(const TableSet& tables,
                                      std::span<const Table> scratch) const {
  return schema_of(*node_, tables, scratch);
}

Table Plan::evaluate(const TableSet& tables, std::span<const std::string> params,
                     std::span<const Table> scratch) const {
  return eval(*node_, tables, params, scratch);
}

std::string Plan::describe() const { return describe_node(*node_); }

// ---------------------------------------------------------------------------
// Reasoner

namespace {

constexpr Param p0{0};

std::string join_path(const std::vector<std::string>& path) {
  std::string out;
  for (const auto& p : path) {
    if (!out.empty()) out += '/';
    out += p;
  }
  return out;
}

std::vector<std::string> split_path(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start < s.size()) {
    auto slash = s.find('/', start);
    if (slash == std::string::npos) slash = s.size();
    out.push_back(s.substr(start, slash - start));
    start = slash + 1;
  }
  return out;
}

bool better(std::size_t level_a, const std::vector<std::string>& a, std::size_t level_b,
            const std::vector<std::string>& b) {
  if (level_a != level_b) return level_a < level_b;
  return a < b;
}

const Table kFrontierSchema{"frontier", {"node", "path"}, {}};
const Table kReachSchema{"reach", {"node", "level", "path"}, {}};

std::vector<Plan> build_plans() {
  using P = Plan;
  std::vector<Plan> plans(kMethodCount, P::scan("object_class"));
  auto set = [&](Method m, Plan p) { plans[static_cast<std::size_t>(m)] = std::move(p); };

  set(Method::label_rooms_by_objects,
      P::scan("room_contains")
          .where("object_class", AnyParam{})
          .project({{"room_class", "answer"}, {"object_class", "via"}})
          .distinct());
  set(Method::room_class_of,
      P::scan("physical_room").where("id", p0).project({{"room_class", "answer"}}));
  set(Method::room_classes_containing,
      P::scan("room_contains")
          .where("object_class", p0)
          .project({{"room_class", "answer"}})
          .distinct());

  auto tagged = [](const char* table, const char* match, const char* other, const char* tag) {
    return P::scan(table).where(match, p0).project({{other, "answer"}}).with_constant("via", tag);
  };
  set(Method::related_objects,
      unite(unite(tagged("used_with", "object_a", "object_b", kTagUsedWith.data()),
                  tagged("used_with", "object_b", "object_a", kTagUsedWith.data())),
            unite(tagged("object_contains", "containee", "container", kTagContainer.data()),
                  tagged("object_contains", "container", "containee", kTagContainee.data())))
          .distinct());

  set(Method::objects_with_utility,
      P::scan("has_utility").where("utility", p0).project({{"object_class", "answer"}}));
  set(Method::objects_with_meaning,
      P::scan("has_utility")
          .join(P::scan("utility_means").project({{"utility", "u"}, {"meaning", "meaning"}}),
                "utility", "u")
          .where("meaning", p0)
          .project({{"object_class", "answer"}, {"utility", "via"}}));
  set(Method::probable_locations,
      P::scan("reach")
          .join(P::scan("room_contains"), "node", "object_class")
          .project({{"room_class", "answer"}, {"level", "level"}, {"path", "path"}}));
  set(Method::physical_rooms_of_class,
      P::scan("physical_room").where("room_class", p0).project({{"id", "answer"}}));
  set(Method::object_classes_in_physical_room,
      P::scan("physical_object")
          .where("room", p0)
          .project({{"object_class", "answer"}})
          .distinct());
  set(Method::physical_objects_of_class,
      P::scan("physical_object").where("object_class", p0).project({{"id", "answer"}}));
  set(Method::class_of_physical_object,
      P::scan("physical_object").where("id", p0).project({{"object_class", "answer"}}));
  set(Method::all_object_classes, P::scan("object_class").project({{"id", "answer"}}));
  set(Method::all_utilities, P::scan("utility").project({{"id", "answer"}}));
  set(Method::characteristics_of,
      P::scan("reach")
          .join(P::scan("has_characteristic"), "node", "object_class")
          .project({{"characteristic", "answer"}, {"level", "level"}, {"path", "path"}}));
  return plans;
}

}  // namespace

RelationalReasoner::RelationalReasoner(const KnowledgeBase& kb)
    : tables_(load_tables(kb)),
      plans_(build_plans()),
      step_plan_(Plan::scan("frontier")
                     .join(Plan::scan("object_contains"), "node", "containee")
                     .project({{"container", "node"}, {"path", "path"}})) {
  const Table scratch[] = {kFrontierSchema, kReachSchema};
  for (const auto& p : plans_) p.schema(tables_, scratch);
  step_plan_.schema(tables_, scratch);
}

const Plan& RelationalReasoner::plan(Method m) const {
  return plans_[static_cast<std::size_t>(m)];
}

std::vector<Namespace> RelationalReasoner::namespaces_of(std::string_view canonical) const {
  std::vector<Namespace> out;
  for (std::size_t k = 0; k < kNamespaceCount; ++k) {
    const auto ns = static_cast<Namespace>(k);
    if (tables_.row_of(to_string(ns), canonical) >= 0) out.push_back(ns);
  }
  return out;
}

EntityName RelationalReasoner::entity(std::string_view table, const std::string& id) const {
  const auto row = tables_.row_of(table, id);
  if (row < 0) return EntityName(id);
  return EntityName(tables_.at(table).rows[static_cast<std::size_t>(row)][1]);
}

ContainmentWalk RelationalReasoner::walk_containers(std::string_view object) const {
  ContainmentWalk walk;
  std::map<std::string, std::size_t> seen;  // node -> index in walk.reached
  walk.reached.push_back({std::string(object), 0, {}});
  seen.emplace(std::string(object), 0);

  Table frontier{"frontier", kFrontierSchema.columns, {{std::string(object), ""}}};
  std::size_t level = 0;
  while (!frontier.rows.empty()) {
    ++walk.iterations;
    ++level;
    const Table scratch[] = {frontier};
    const auto step = step_plan_.evaluate(tables_, {}, scratch);

    // Lexicographically smallest path per newly reached node at this level.
    std::map<std::string, std::vector<std::string>> next;
    for (const auto& row : step.rows) {
      const auto& node = row[0];
      if (seen.count(node)) continue;
      auto path = split_path(row[1]);
      path.push_back(node);
      auto [it, inserted] = next.emplace(node, path);
      if (!inserted && path < it->second) it->second = std::move(path);
    }
    frontier.rows.clear();
    for (auto& [node, path] : next) {
      seen.emplace(node, walk.reached.size());
      frontier.rows.push_back({node, join_path(path)});
      walk.reached.push_back({node, level, std::move(path)});
    }
  }
  return walk;
}

ReasonerResult RelationalReasoner::best_via_walk(Method m, std::string_view object,
                                                 std::string_view answer_table) const {
  const auto walk = walk_containers(object);
  Table reach{"reach", kReachSchema.columns, {}};
  for (const auto& r : walk.reached)
    reach.rows.push_back({r.node, std::to_string(r.level), join_path(r.path)});
  const Table scratch[] = {reach};
  const auto rows = plan(m).evaluate(tables_, {}, scratch);

  std::map<std::string, std::pair<std::size_t, std::vector<std::string>>> best;
  for (const auto& row : rows.rows) {
    const auto level = static_cast<std::size_t>(std::stoul(row[1]));
    auto path = split_path(row[2]);
    auto it = best.find(row[0]);
    if (it == best.end())
      best.emplace(row[0], std::make_pair(level, std::move(path)));
    else if (better(level, path, it->second.first, it->second.second))
      it->second = {level, std::move(path)};
  }

  ReasonerResult out;
  for (const auto& [answer, lp] : best) {
    std::vector<EntityName> chain;
    for (const auto& hop : lp.second) chain.push_back(entity("object_class", hop));
    out.add(entity(answer_table, answer), std::move(chain));
  }
  return out;
}

ReasonerResult RelationalReasoner::evaluate(Method m, std::span<const std::string> inputs) const {
  const auto& mi = info(m);
  const auto answer_table = to_string(mi.output);

  if (m == Method::probable_locations || m == Method::characteristics_of)
    return best_via_walk(m, inputs[0], answer_table);

  const auto rows = plan(m).evaluate(tables_, inputs);
  ReasonerResult out;

  if (m == Method::label_rooms_by_objects) {
    std::map<std::string, std::vector<std::string>> matched;
    for (const auto& row : rows.rows) matched[row[0]].push_back(row[1]);
    std::size_t full = 0;
    for (const auto& [_, objs] : matched) full += objs.size() == inputs.size();
    for (auto& [room, objs] : matched) {
      if (full > 0 && objs.size() != inputs.size()) continue;
      std::sort(objs.begin(), objs.end());
      std::vector<EntityName> chain;
      for (const auto& o : objs) chain.push_back(entity("object_class", o));
      out.add(entity(answer_table, room), std::move(chain));
    }
    return out;
  }

  if (m == Method::related_objects || m == Method::objects_with_meaning) {
    // One chain per answer: the smallest tag or utility.
    std::map<std::string, std::string> via;
    for (const auto& row : rows.rows) {
      auto [it, inserted] = via.emplace(row[0], row[1]);
      if (!inserted && row[1] < it->second) it->second = row[1];
    }
    for (const auto& [answer, v] : via) {
      const auto hop = m == Method::objects_with_meaning ? entity("utility", v) : EntityName(v);
      out.add(entity(answer_table, answer), {hop});
    }
    return out;
  }

  std::set<std::string> answers;
  for (const auto& row : rows.rows) answers.insert(row[0]);
  for (const auto& a : answers) out.add(entity(answer_table, a));
  return out;
}

}  // namespace semnav::relational

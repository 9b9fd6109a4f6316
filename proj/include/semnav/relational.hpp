#pragma once

#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "semnav/kb.hpp"
#include "semnav/reasoner.hpp"

namespace semnav::relational {

using Row = std::vector<std::string>;

/// A named relation. Values are canonical entity names (entity tables also
/// carry a display column).
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<Row> rows;

  // Index of the named column; throws PlanError when absent.
  std::size_t column(std::string_view column_name) const;
};

std::string to_csv(const Table& table);

class PlanError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Tables materialized from a knowledge base: one per entity kind and one
/// join table per conceptual relation. Entity tables are keyed on `id`.
class TableSet {
 public:
  void add(Table table);
  const Table* find(std::string_view name) const;
  const Table& at(std::string_view name) const;
  std::vector<std::string> names() const;

  // Primary-key lookup on an entity table; -1 when absent.
  long row_of(std::string_view table, std::string_view id) const;

 private:
  std::map<std::string, Table, std::less<>> tables_;
  std::map<std::string, std::unordered_map<std::string, std::size_t>, std::less<>> keys_;
};

TableSet load_tables(const KnowledgeBase& kb);

// ---------------------------------------------------------------------------
// Declarative query plans

// Placeholder for the i-th bound input.
struct Param {
  std::size_t index;
};
// Matches any of the bound inputs.
struct AnyParam {};

using Operand = std::variant<std::string, Param, AnyParam>;

/// Immutable operator tree over named tables. Scans resolve first against
/// scratch tables passed to evaluate(), then against the TableSet.
class Plan {
 public:
  static Plan scan(std::string table);

  Plan where(std::string column, Operand value) const;
  Plan project(std::vector<std::pair<std::string, std::string>> source_alias) const;
  Plan with_constant(std::string column, std::string value) const;
  // Equi-join; column names of both sides must be disjoint.
  Plan join(const Plan& right, std::string left_column, std::string right_column) const;
  Plan distinct() const;
  Plan sort() const;
  friend Plan unite(const Plan& a, const Plan& b);

  // Output columns; throws PlanError on unknown tables or columns.
  std::vector<std::string> schema(const TableSet& tables,
                                  std::span<const Table> scratch = {}) const;

  Table evaluate(const TableSet& tables, std::span<const std::string> params = {},
                 std::span<const Table> scratch = {}) const;

  std::string describe() const;

  struct Node;

 private:
  explicit Plan(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Plan unite(const Plan& a, const Plan& b);

// ---------------------------------------------------------------------------

/// Objects reachable upward through object_contains, computed by iterated
/// joins of a frontier table against the containment table.
struct ContainmentWalk {
  struct Reached {
    std::string node;
    std::size_t level;
    std::vector<std::string> path;  // containers from the start up to node
  };
  std::vector<Reached> reached;  // includes the start object at level 0
  std::size_t iterations = 0;
};

class RelationalReasoner : public Reasoner {
 public:
  explicit RelationalReasoner(const KnowledgeBase& kb);

  Backend backend() const override { return Backend::relational; }
  const TableSet& tables() const { return tables_; }

  ContainmentWalk walk_containers(std::string_view object) const;

  // The fixed plan of a non-iterative method, or of the final join step of
  // an iterative one.
  const Plan& plan(Method m) const;

 protected:
  std::vector<Namespace> namespaces_of(std::string_view canonical) const override;
  ReasonerResult evaluate(Method m, std::span<const std::string> inputs) const override;

 private:
  EntityName entity(std::string_view table, const std::string& id) const;
  ReasonerResult best_via_walk(Method m, std::string_view object,
                               std::string_view answer_table) const;

  TableSet tables_;
  std::vector<Plan> plans_;
  Plan step_plan_;
};

}  // namespace semnav::relational

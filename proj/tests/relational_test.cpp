#include <gtest/gtest.h>

#include "oracle.hpp"
#include "random_kb.hpp"
#include "semnav/relational.hpp"

namespace semnav::relational {
namespace {

TableSet tiny() {
  TableSet s;
  s.add({"pet", {"id", "kind"}, {{"rex", "dog"}, {"tom", "cat"}, {"fido", "dog"}}});
  s.add({"owner", {"person", "pet"}, {{"ann", "rex"}, {"bob", "tom"}, {"ann", "fido"}}});
  return s;
}

TEST(Tables, ReferenceSchemasAndCounts) {
  const auto t = load_tables(reference_kb());
  EXPECT_EQ(t.names().size(), 13u);
  EXPECT_EQ(t.at("object_class").rows.size(), 8u);
  EXPECT_EQ(t.at("room_contains").columns, (std::vector<std::string>{"room_class", "object_class"}));
  EXPECT_EQ(t.at("room_contains").rows.size(), 8u);
  EXPECT_EQ(t.at("object_contains").rows, (std::vector<Row>{{"refrigerator", "soft_drink"}}));
  EXPECT_EQ(t.at("physical_object").columns,
            (std::vector<std::string>{"id", "display", "object_class", "room"}));
  for (const auto& row : t.at("used_with").rows) EXPECT_LT(row[0], row[1]);
  EXPECT_GE(t.row_of("object_class", "sofa"), 0);
  EXPECT_EQ(t.row_of("object_class", "unicorn"), -1);
  EXPECT_EQ(t.row_of("room_contains", "office"), -1);
  EXPECT_THROW(t.at("nope"), PlanError);
}

TEST(Tables, CsvDump) {
  const auto t = load_tables(reference_kb());
  EXPECT_EQ(to_csv(t.at("physical_room")),
            "id,display,room_class\nroom1,Room1,office\nroom2,Room2,kitchen\n");
}

TEST(Tables, KeyAndArityChecks) {
  TableSet s;
  EXPECT_THROW(s.add({"x", {"id"}, {{"a"}, {"a"}}}), PlanError);
  EXPECT_THROW(s.add({"y", {"a", "b"}, {{"1"}}}), PlanError);
}

TEST(Plans, Operators) {
  const auto s = tiny();
  const auto dogs = Plan::scan("pet").where("kind", std::string("dog")).project({{"id", "name"}});
  EXPECT_EQ(dogs.evaluate(s).rows, (std::vector<Row>{{"rex"}, {"fido"}}));
  EXPECT_EQ(dogs.sort().evaluate(s).rows, (std::vector<Row>{{"fido"}, {"rex"}}));

  const auto owned = Plan::scan("owner")
                         .join(Plan::scan("pet"), "pet", "id")
                         .where("person", Param{0})
                         .project({{"kind", "kind"}})
                         .distinct();
  const std::string ann[] = {"ann"};
  EXPECT_EQ(owned.evaluate(s, ann).rows, (std::vector<Row>{{"dog"}}));

  const std::string both[] = {"rex", "tom"};
  const auto any = Plan::scan("owner").where("pet", AnyParam{}).project({{"person", "p"}});
  EXPECT_EQ(any.sort().evaluate(s, both).rows, (std::vector<Row>{{"ann"}, {"bob"}}));

  const auto tagged = Plan::scan("pet").project({{"id", "x"}}).with_constant("tag", "pet");
  const auto people = Plan::scan("owner").project({{"person", "x"}}).with_constant("tag", "who");
  const auto u = unite(tagged, people).distinct().sort().evaluate(s);
  EXPECT_EQ(u.columns, (std::vector<std::string>{"x", "tag"}));
  EXPECT_EQ(u.rows.size(), 5u);
  EXPECT_EQ(u.rows.front(), (Row{"ann", "who"}));
}

TEST(Plans, SchemaErrors) {
  const auto s = tiny();
  EXPECT_THROW(Plan::scan("missing").schema(s), PlanError);
  EXPECT_THROW(Plan::scan("pet").where("colour", std::string("x")).schema(s), PlanError);
  // Both sides expose `id`-free but overlapping `pet` columns after projection.
  const auto left = Plan::scan("owner");
  const auto right = Plan::scan("owner").project({{"pet", "pet"}});
  EXPECT_THROW(left.join(right, "pet", "pet").schema(s), PlanError);
  EXPECT_THROW(unite(Plan::scan("pet"), Plan::scan("owner")).schema(s), PlanError);
  EXPECT_EQ(Plan::scan("pet").join(Plan::scan("owner"), "id", "pet").schema(s),
            (std::vector<std::string>{"id", "kind", "person", "pet"}));
}

TEST(Plans, ScratchTablesShadowStoredOnes) {
  const auto s = tiny();
  const Table scratch[] = {{"pet", {"id", "kind"}, {{"nemo", "fish"}}}};
  EXPECT_EQ(Plan::scan("pet").evaluate(s, {}, scratch).rows, (std::vector<Row>{{"nemo", "fish"}}));
}

TEST(Plans, EvaluationIsPure) {
  const RelationalReasoner r(reference_kb());
  std::string before;
  for (const auto& n : r.tables().names()) before += to_csv(r.tables().at(n));
  for (const auto& mi : method_catalog()) {
    EXPECT_FALSE(r.plan(mi.id).describe().empty());
    for (const auto& in : testing::valid_inputs(reference_kb(), mi.id)) {
      const auto a = r.run(mi.id, in);
      const auto b = r.run(mi.id, in);
      EXPECT_EQ(canonical_text(a), canonical_text(b));
    }
  }
  std::string after;
  for (const auto& n : r.tables().names()) after += to_csv(r.tables().at(n));
  EXPECT_EQ(before, after);
}

TEST(ContainmentWalkTest, Reference) {
  const RelationalReasoner r(reference_kb());
  const auto w = r.walk_containers("soft_drink");
  ASSERT_EQ(w.reached.size(), 2u);
  EXPECT_EQ(w.reached[1].node, "refrigerator");
  EXPECT_EQ(w.reached[1].level, 1u);
  EXPECT_EQ(w.reached[1].path, std::vector<std::string>{"refrigerator"});
  EXPECT_EQ(w.iterations, 2u);
  EXPECT_EQ(r.walk_containers("chair").iterations, 1u);
}

TEST(ContainmentWalkTest, IterationsBoundedByDepthOnRandomKbs) {
  std::mt19937 rng(41);
  for (int i = 0; i < 80; ++i) {
    const auto kb = testing::random_kb(rng);
    const RelationalReasoner r(kb);
    for (const auto& o : kb.entities(Namespace::object_class)) {
      std::size_t depth = 0;
      std::set<std::string> reachable;
      for (const auto& p : testing::container_paths(kb, o.canonical())) {
        depth = std::max(depth, p.size());
        if (!p.empty()) reachable.insert(p.back());
      }
      const auto w = r.walk_containers(o.canonical());
      ASSERT_LE(w.iterations, depth + 1);
      ASSERT_EQ(w.reached.size(), reachable.size() + 1);
      for (const auto& reached : w.reached) {
        ASSERT_EQ(reached.path.size(), reached.level);
        if (reached.level > 0) ASSERT_TRUE(reachable.count(reached.node));
      }
    }
  }
}

}  // namespace
}  // namespace semnav::relational

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "semnav/app.hpp"
#include "semnav/bench.hpp"
#include "semnav/ontology.hpp"
#include "semnav/relational.hpp"

namespace semnav {
namespace {

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

// Drops the last answer of every non-empty result.
class DroppingReasoner : public relational::RelationalReasoner {
 public:
  using RelationalReasoner::RelationalReasoner;

 protected:
  ReasonerResult evaluate(Method m, std::span<const std::string> inputs) const override {
    auto r = RelationalReasoner::evaluate(m, inputs);
    if (r.size() > 0) {
      r.answers.pop_back();
      r.chains.pop_back();
    }
    return r;
  }
};

std::string sorted_answers(const ReasonerResult& r) {
  std::vector<std::string> items;
  for (std::size_t i = 0; i < r.size(); ++i) {
    std::string s = r.answers[i].canonical();
    if (!r.chains[i].empty()) {
      s += " (via ";
      for (std::size_t j = 0; j < r.chains[i].size(); ++j)
        s += (j ? " > " : "") + r.chains[i][j].canonical();
      s += ")";
    }
    items.push_back(s);
  }
  std::sort(items.begin(), items.end());
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

class Suite : public ::testing::Test {
 protected:
  const relational::RelationalReasoner rel{reference_kb()};
  const ontology::OntologyReasoner onto{reference_kb()};
  const Reasoner* backends[2] = {&rel, &onto};
};

TEST_F(Suite, ReferenceSuiteMatchesGoldenTable) {
  std::ifstream in(SEMNAV_FIXTURES "/reference_table.golden");
  std::vector<std::string> golden;
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') golden.push_back(line);

  const auto cases = reference_suite(3);
  ASSERT_EQ(cases.size(), 13u);
  ASSERT_EQ(golden.size(), 13u);
  const auto report = run_suite(cases, backends, reference_kb().digest());
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = report.cases[i];
    EXPECT_TRUE(c.outputs_equal) << golden[i];
    for (const auto& run : c.runs) {
      ASSERT_TRUE(run.result);
      EXPECT_EQ(std::string(to_string(cases[i].method())) + " | " + cases[i].input_label() +
                    " | " + sorted_answers(*run.result),
                golden[i])
          << to_string(run.backend);
      EXPECT_GT(run.mean_ns, 0);
      EXPECT_EQ(run.runs, 3);
    }
  }
  EXPECT_TRUE(report.all_equal());
}

TEST_F(Suite, CsvAndMarkdownShapes) {
  const auto report = run_suite(reference_suite(2), backends, "abc");
  const auto csv = emit_report(report, ReportFormat::csv);
  EXPECT_EQ(count_lines(csv), 27u);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "method,input,backend,mean_ns,runs,output_digest,outputs_equal");
  EXPECT_NE(csv.find("\nprobable_locations,Soft drink,ontology,"), std::string::npos);
  EXPECT_EQ(csv.find('\r'), std::string::npos);

  const auto md = emit_report(report, ReportFormat::markdown);
  std::istringstream lines(md);
  int body = 0;
  for (std::string line; std::getline(lines, line);)
    if (line.rfind("| ", 0) == 0 && line.find("Method") == std::string::npos) ++body;
  EXPECT_EQ(body, 13);
  EXPECT_NE(md.find("Ratio ontology/relational: "), std::string::npos);
  EXPECT_NE(md.find("Mean over cases, relational: "), std::string::npos);
  EXPECT_NE(md.find("KB digest: abc"), std::string::npos);
}

TEST_F(Suite, EmptyReportIsHeaderOnly) {
  const BenchReport empty;
  EXPECT_EQ(emit_report(empty, ReportFormat::csv),
            "method,input,backend,mean_ns,runs,output_digest,outputs_equal\n");
  EXPECT_TRUE(empty.all_equal());
  EXPECT_EQ(empty.overall_mean_ns(Backend::relational), 0.0);
}

TEST_F(Suite, IdenticalErrorsCompareEqual) {
  const std::vector<BenchCase> cases{{Method::room_class_of, {"Room9"}, 2},
                                     {Method::probable_locations, {"Office"}, 2}};
  const auto report = run_suite(cases, backends);
  for (const auto& c : report.cases) {
    EXPECT_TRUE(c.outputs_equal);
    EXPECT_EQ(c.runs[0].digest, c.runs[1].digest);
    EXPECT_TRUE(c.runs[0].error);
  }
  EXPECT_EQ(report.cases[0].runs[0].error, ReasonerErrorKind::unknown_entity);
  EXPECT_EQ(report.cases[1].runs[1].error, ReasonerErrorKind::wrong_kind);
}

TEST_F(Suite, VerdictsAndDigestsAreReproducible) {
  const auto a = run_suite(reference_suite(1), backends);
  const auto b = run_suite(reference_suite(1), backends);
  for (std::size_t i = 0; i < a.cases.size(); ++i) {
    EXPECT_EQ(a.cases[i].outputs_equal, b.cases[i].outputs_equal);
    for (std::size_t k = 0; k < 2; ++k)
      EXPECT_EQ(a.cases[i].runs[k].digest, b.cases[i].runs[k].digest);
  }
}

TEST_F(Suite, BrokenBackendIsReportedAsDifferent) {
  const DroppingReasoner broken(reference_kb());
  std::ostringstream out, err;
  const auto cases = reference_suite(1);
  EXPECT_EQ(app::run_bench(cases, rel, broken, "", "", out, err), app::kExitDiffer);
  EXPECT_NE(err.str().find("DIFFER"), std::string::npos);
  EXPECT_NE(out.str().find(" NO |"), std::string::npos);
  EXPECT_EQ(app::run_bench(cases, rel, onto, "", "", out, err), app::kExitOk);
}

TEST(BenchCaseTest, RepetitionsMustBePositive) {
  EXPECT_THROW(BenchCase(Method::all_utilities, {}, 0), std::invalid_argument);
  EXPECT_NO_THROW(BenchCase(Method::all_utilities, {}, 1));
  EXPECT_EQ(BenchCase(Method::all_utilities, {}).input_label(), "-");
  EXPECT_EQ(BenchCase(Method::label_rooms_by_objects, {"Chair", "Sofa"}).input_label(),
            "Chair+Sofa");
  EXPECT_EQ(BenchCase(Method::all_utilities, {}).repetitions(), 100);
}

TEST(CompareOutputsTest, Examples) {
  auto make = [](std::initializer_list<const char*> names) {
    ReasonerResult r;
    for (auto n : names) r.add(EntityName(n));
    return r;
  };
  EXPECT_TRUE(compare_outputs(make({"Playstation", "Television", "Computer"}),
                              make({"Computer", "Playstation", "Television"})));
  EXPECT_FALSE(compare_outputs(make({"Office"}), make({"Office", "Living_room"})));
  EXPECT_FALSE(compare_outputs(make({"Office", "Living_room"}), make({"Office"})));
  EXPECT_TRUE(compare_outputs(make({}), make({})));
}

TEST(CompareOutputsTest, SymmetricOnReferenceResults) {
  const relational::RelationalReasoner rel(reference_kb());
  std::vector<ReasonerResult> results;
  for (const auto& c : reference_suite(1)) results.push_back(rel.run(c.method(), c.inputs()));
  for (const auto& a : results)
    for (const auto& b : results) EXPECT_EQ(compare_outputs(a, b), compare_outputs(b, a));
}

}  // namespace
}  // namespace semnav

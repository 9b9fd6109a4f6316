#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semnav/reasoner.hpp"

namespace semnav {

/// One method call to time. Repetitions must be at least 1.
class BenchCase {
 public:
  BenchCase(Method method, std::vector<std::string> inputs, int repetitions = 100);

  Method method() const { return method_; }
  const std::vector<std::string>& inputs() const { return inputs_; }
  int repetitions() const { return repetitions_; }
  // Inputs joined by '+', or "-" when there are none.
  std::string input_label() const;

 private:
  Method method_;
  std::vector<std::string> inputs_;
  int repetitions_;
};

// The thirteen methods with the inputs of the reference comparison table.
std::vector<BenchCase> reference_suite(int repetitions = 100);

struct BackendRun {
  Backend backend;
  double mean_ns = 0;
  int runs = 0;
  std::string digest;
  std::optional<ReasonerResult> result;
  std::optional<ReasonerErrorKind> error;  // set when every call failed this way
};

struct CaseReport {
  BenchCase bench_case;
  std::vector<BackendRun> runs;  // one per backend, in suite order
  bool outputs_equal = false;
};

struct BenchReport {
  std::vector<CaseReport> cases;
  std::string kb_digest;
  std::string timestamp;  // UTC, ISO 8601
  std::string timing_boundary = "in-process reasoner call, no transport";

  bool all_equal() const;
  // Mean over cases of a backend's mean latency; 0 without cases.
  double overall_mean_ns(Backend b) const;
};

// Each case runs once untimed, then `repetitions` timed calls per backend,
// sequentially on the calling thread. Reasoner errors are recorded per case.
BenchReport run_suite(std::span<const BenchCase> cases, std::span<const Reasoner* const> backends,
                      const std::string& kb_digest = {});

// Errors compare by kind; results by answer and chain sets.
bool outputs_equal(const BackendRun& a, const BackendRun& b);

enum class ReportFormat { csv, markdown };
std::string emit_report(const BenchReport& report, ReportFormat format);

}  // namespace semnav

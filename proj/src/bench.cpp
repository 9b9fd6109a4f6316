#include "semnav/bench.hpp"

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <stdexcept>

namespace semnav {

BenchCase::BenchCase(Method method, std::vector<std::string> inputs, int repetitions)
    : method_(method), inputs_(std::move(inputs)), repetitions_(repetitions) {
  if (repetitions_ < 1) throw std::invalid_argument("repetitions must be >= 1");
}

std::string BenchCase::input_label() const {
  if (inputs_.empty()) return "-";
  std::string out;
  for (const auto& in : inputs_) {
    if (!out.empty()) out += '+';
    out += in;
  }
  return out;
}

std::vector<BenchCase> reference_suite(int repetitions) {
  return {
      {Method::label_rooms_by_objects, {"Computer"}, repetitions},
      {Method::room_class_of, {"Room2"}, repetitions},
      {Method::room_classes_containing, {"Chair"}, repetitions},
      {Method::related_objects, {"Soft drink"}, repetitions},
      {Method::objects_with_utility, {"Work"}, repetitions},
      {Method::objects_with_meaning, {"Funny"}, repetitions},
      {Method::probable_locations, {"Soft drink"}, repetitions},
      {Method::physical_rooms_of_class, {"Office"}, repetitions},
      {Method::object_classes_in_physical_room, {"Room1"}, repetitions},
      {Method::physical_objects_of_class, {"Chair"}, repetitions},
      {Method::class_of_physical_object, {"Chair1"}, repetitions},
      {Method::all_object_classes, {}, repetitions},
      {Method::all_utilities, {}, repetitions},
  };
}

bool BenchReport::all_equal() const {
  for (const auto& c : cases)
    if (!c.outputs_equal) return false;
  return true;
}

double BenchReport::overall_mean_ns(Backend b) const {
  double sum = 0;
  int n = 0;
  for (const auto& c : cases)
    for (const auto& r : c.runs)
      if (r.backend == b) {
        sum += r.mean_ns;
        ++n;
      }
  return n ? sum / n : 0.0;
}

namespace {

std::string hex_digest(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string utc_now() {
  const auto t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

BackendRun time_case(const BenchCase& c, const Reasoner& reasoner) {
  BackendRun run{reasoner.backend(), 0, c.repetitions(), {}, std::nullopt, std::nullopt};
  auto call = [&]() -> void {
    try {
      run.result = reasoner.run(c.method(), c.inputs());
      run.error.reset();
    } catch (const ReasonerError& e) {
      run.result.reset();
      run.error = e.kind();
    }
  };

  call();  // warm-up
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  for (int i = 0; i < c.repetitions(); ++i) call();
  const auto elapsed = std::chrono::duration<double, std::nano>(clock::now() - start).count();
  run.mean_ns = elapsed / c.repetitions();

  run.digest = run.error ? hex_digest("error:" + std::string(to_string(*run.error)))
                         : hex_digest(canonical_text(*run.result));
  return run;
}

std::string format_ns(double ns) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", ns);
  return buf;
}

std::string format_output(const BackendRun& r) {
  if (r.error) return "error: " + std::string(to_string(*r.error));
  std::string out;
  const auto& res = *r.result;
  for (std::size_t i = 0; i < res.size(); ++i) {
    if (!out.empty()) out += ", ";
    out += res.answers[i].canonical();
    if (!res.chains[i].empty()) {
      out += " (via ";
      for (std::size_t j = 0; j < res.chains[i].size(); ++j) {
        if (j) out += " > ";
        out += res.chains[i][j].canonical();
      }
      out += ")";
    }
  }
  return out.empty() ? "(none)" : out;
}

}  // namespace

bool outputs_equal(const BackendRun& a, const BackendRun& b) {
  if (a.error || b.error) return a.error == b.error;
  return compare_outputs(*a.result, *b.result);
}

BenchReport run_suite(std::span<const BenchCase> cases, std::span<const Reasoner* const> backends,
                      const std::string& kb_digest) {
  BenchReport report;
  report.kb_digest = kb_digest;
  report.timestamp = utc_now();
  for (const auto& c : cases) {
    CaseReport cr{c, {}, true};
    for (const auto* backend : backends) cr.runs.push_back(time_case(c, *backend));
    for (std::size_t i = 1; i < cr.runs.size(); ++i)
      cr.outputs_equal = cr.outputs_equal && outputs_equal(cr.runs[0], cr.runs[i]);
    report.cases.push_back(std::move(cr));
  }
  return report;
}

std::string emit_report(const BenchReport& report, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::csv) {
    out = "method,input,backend,mean_ns,runs,output_digest,outputs_equal\n";
    for (const auto& c : report.cases)
      for (const auto& r : c.runs) {
        out += std::string(to_string(c.bench_case.method())) + "," + c.bench_case.input_label() +
               "," + std::string(to_string(r.backend)) + "," + format_ns(r.mean_ns) + "," +
               std::to_string(r.runs) + "," + r.digest + "," +
               (c.outputs_equal ? "true" : "false") + "\n";
      }
    return out;
  }

  std::vector<Backend> backends;
  if (!report.cases.empty())
    for (const auto& r : report.cases.front().runs) backends.push_back(r.backend);

  out += "| Method | Input |";
  for (auto b : backends) out += " Output (" + std::string(to_string(b)) + ") |";
  for (auto b : backends) out += " Mean time " + std::string(to_string(b)) + " (ns) |";
  out += " Equal |\n|---|---|";
  for (std::size_t i = 0; i < 2 * backends.size(); ++i) out += "---|";
  out += "---|\n";
  for (const auto& c : report.cases) {
    out += "| " + std::string(info(c.bench_case.method()).title) + " | " +
           c.bench_case.input_label() + " |";
    for (const auto& r : c.runs) out += " " + format_output(r) + " |";
    for (const auto& r : c.runs) out += " " + format_ns(r.mean_ns) + " |";
    out += c.outputs_equal ? " yes |\n" : " NO |\n";
  }

  out += "\n";
  for (auto b : backends)
    out += "Mean over cases, " + std::string(to_string(b)) + ": " +
           format_ns(report.overall_mean_ns(b)) + " ns\n";
  if (backends.size() == 2) {
    const double base = report.overall_mean_ns(backends[0]);
    const double other = report.overall_mean_ns(backends[1]);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", base > 0 ? other / base : 0.0);
    out += "Ratio " + std::string(to_string(backends[1])) + "/" +
           std::string(to_string(backends[0])) + ": " + buf + "\n";
  }
  out += "\nKB digest: " + report.kb_digest + ", run at " + report.timestamp +
         ", timing boundary: " + report.timing_boundary + "\n";
  return out;
}

}  // namespace semnav

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cxkit/dsl.hpp"
#include "cxkit/report.hpp"

namespace cxkit {

struct RunOptions {
  std::uint64_t seed = 20240611;
  std::size_t budget = 20000;
  /// Tolerance for numeric expectations such as expect_min.
  double tol = 1e-6;
  /// 0 = hardware concurrency, always capped by CXKIT_THREADS.
  unsigned threads = 0;
};

/// Bad task arguments (unknown command, missing complex, wrong value kind).
class TaskError : public std::runtime_error {
 public:
  TaskError(SourcePos pos, const std::string& what) : std::runtime_error(what), pos_(pos) {}
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

struct TaskOutcome {
  /// Canonical task text, as printed by print_spec.
  std::string task;
  std::string command;
  bool pass = false;
  Json detail;
  /// Human-readable summary lines.
  std::vector<std::string> lines;
};

struct RunBundle {
  /// File stem or "<inline>".
  std::string source;
  std::vector<TaskOutcome> tasks;
  bool pass() const;
  std::size_t passed() const;
};

/// Commands understood by run_task.
const std::vector<std::string>& task_commands();

TaskOutcome run_task(const SpecDocument& doc, const Task& task, const RunOptions& opt);
/// All tasks, in parallel; outcomes stay in source order.
RunBundle run_document(const SpecDocument& doc, const std::string& source, const RunOptions& opt);

/// Fixture files are <dir>/<suite>.spec.
std::vector<std::string> list_suites(const std::filesystem::path& dir);
std::vector<RunBundle> run_suites(const std::filesystem::path& dir, const std::vector<std::string>& suites,
                                  const RunOptions& opt);

std::string read_text(const std::filesystem::path& p);

/// {"schema", "options", "bundles": [...], "pass", "summary"}; no timestamps.
Json bundle_json(const std::vector<RunBundle>& bundles, const RunOptions& opt);
std::string bundle_text(const std::vector<RunBundle>& bundles);

}  // namespace cxkit

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "scnp/benders.hpp"
#include "scnp/instance.hpp"

namespace scnp {

enum class Method { kBenders, kMilp, kIlpP, kDp, kExhaustive };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);

struct SolveParams {
  double eps = 1e-3;  // Benders tolerance, also the MILP absolute gap
  bool use_valid_ineq = true;
  bool share_prefixes = false;
  double time_limit = 3600.0;
  int nu = 4;
};

struct ResultRecord {
  std::string instance;  // file name, or empty
  std::string method;
  int n = 0;
  std::string scheme;
  double value = 0.0;  // UB
  double bound = 0.0;  // LB
  double gap = 0.0;    // 1 - LB/UB, 0 when UB = 0
  std::string status;
  bool closed = false;
  double time = 0.0;
  long iterations = 0;
  long cuts = 0;
  std::vector<NodeId> attack;
};

double relative_gap(double lower, double upper);

// Runs one method. `benders` receives the full Benders result when given.
ResultRecord run_method(const TreeInstance& instance, Method method, const SolveParams& params,
                        BendersResult* benders = nullptr);

nlohmann::json record_to_json(const ResultRecord& record);
ResultRecord record_from_json(const nlohmann::json& doc);

// 64-bit FNV-1a, as 16 hex digits.
std::string content_hash(std::string_view text);

// Writes to a temporary sibling, then renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

// (n, scheme) recovered from a tree_n{n}_{scheme}_{seed}.json name.
std::optional<std::pair<int, std::string>> parse_instance_name(const std::string& file_name);

struct BenchRow {
  int n = 0;
  std::string scheme;
  std::string method;
  int instances = 0;
  double mean_time = 0.0;  // timed-out runs count as the limit
  double mean_gap_pct = 0.0;
  int closed = 0;
  double mean_iterations = 0.0;
  double mean_cuts = 0.0;
};

std::vector<BenchRow> aggregate(const std::vector<ResultRecord>& records, double time_limit);

inline constexpr std::string_view kBenchCsvHeader = "n,scheme,method,instances,time,gap_pct,closed,iterations,cuts";
void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out);
std::string render_table(const std::vector<BenchRow>& rows);

struct BenchOptions {
  std::vector<Method> methods;
  SolveParams params;
  std::filesystem::path results_dir;
  int workers = 1;
};

// Solves every *.json instance in `dir` with every method. One result file
// per (instance, method, parameters) under results_dir, named by content
// hash; existing files are reused. Unreadable instances are reported on
// `warnings` and skipped.
std::vector<ResultRecord> run_bench(const std::filesystem::path& dir, const BenchOptions& options, std::ostream& warnings);

}  // namespace scnp

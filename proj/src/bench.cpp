#include "scnp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <regex>
#include <sstream>
#include <thread>
#include <tuple>

#include "scnp/dp.hpp"
#include "scnp/error.hpp"
#include "scnp/evaluator.hpp"
#include "scnp/models.hpp"
#include "scnp/reductions.hpp"

namespace scnp {

using json = nlohmann::json;

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kBenders: return "benders";
    case Method::kMilp: return "milp";
    case Method::kIlpP: return "ilp-p";
    case Method::kDp: return "dp";
    case Method::kExhaustive: return "exhaustive";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::kBenders, Method::kMilp, Method::kIlpP, Method::kDp, Method::kExhaustive}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

double relative_gap(double lower, double upper) {
  if (upper == 0.0) return 0.0;
  return std::max(0.0, 1.0 - lower / upper);
}

ResultRecord run_method(const TreeInstance& instance, Method method, const SolveParams& params, BendersResult* benders) {
  ResultRecord out;
  out.method = std::string(to_string(method));
  out.n = instance.node_count;
  AttackVector attack;
  switch (method) {
    case Method::kBenders: {
      BendersOptions options;
      options.eps = params.eps;
      options.use_valid_ineq = params.use_valid_ineq;
      options.time_limit = params.time_limit;
      BendersResult result = bd_scnp(instance, options);
      out.value = result.upper;
      out.bound = result.lower;
      out.status = std::string(to_string(result.status));
      out.closed = result.status == BendersStatus::kOptimal;
      out.time = result.seconds;
      out.iterations = result.iterations;
      out.cuts = result.cuts;
      attack = result.attack;
      if (benders != nullptr) *benders = std::move(result);
      break;
    }
    case Method::kMilp:
    case Method::kIlpP: {
      milp::MilpOptions options;
      options.gap = params.eps;
      options.time_limit = params.time_limit;
      const ModelSolution result = method == Method::kMilp
                                       ? solve_chain_milp(instance, {params.share_prefixes, params.use_valid_ineq}, options)
                                       : solve_ilp_p(instance, options);
      out.value = result.value;
      out.bound = result.bound;
      out.status = std::string(milp::to_string(result.status));
      out.closed = result.status == milp::Status::kOptimal;
      out.time = result.seconds;
      out.iterations = result.nodes;
      attack = result.attack;
      break;
    }
    case Method::kDp: {
      const auto start = std::chrono::steady_clock::now();
      const double k = std::floor(instance.budget + 1e-9);
      const ApproxResult result = dp_solve(instance, static_cast<int>(k), params.nu);
      out.value = result.exact_value;
      out.bound = std::min(result.truncated_value, result.exact_value);
      out.status = "Approximate";
      out.closed = relative_gap(out.bound, out.value) == 0.0;
      out.time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      out.iterations = result.counters.states;
      attack = result.attack;
      break;
    }
    case Method::kExhaustive: {
      const auto start = std::chrono::steady_clock::now();
      const ExhaustiveResult result = exhaustive_solve(instance);
      out.value = result.value;
      out.bound = result.value;
      out.status = "Optimal";
      out.closed = true;
      out.time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      out.iterations = result.evaluated;
      attack = result.attack;
      break;
    }
  }
  out.gap = relative_gap(out.bound, out.value);
  out.attack = attack.attacked_set();
  return out;
}

json record_to_json(const ResultRecord& r) {
  json doc;
  doc["instance"] = r.instance;
  doc["method"] = r.method;
  doc["n"] = r.n;
  doc["scheme"] = r.scheme;
  doc["value"] = r.value;
  doc["bound"] = r.bound;
  doc["gap"] = r.gap;
  doc["status"] = r.status;
  doc["closed"] = r.closed;
  doc["time"] = r.time;
  doc["iterations"] = r.iterations;
  doc["cuts"] = r.cuts;
  doc["attack"] = r.attack;
  return doc;
}

ResultRecord record_from_json(const json& doc) {
  ResultRecord r;
  r.instance = doc.at("instance").get<std::string>();
  r.method = doc.at("method").get<std::string>();
  r.n = doc.at("n").get<int>();
  r.scheme = doc.at("scheme").get<std::string>();
  r.value = doc.at("value").get<double>();
  r.bound = doc.at("bound").get<double>();
  r.gap = doc.at("gap").get<double>();
  r.status = doc.at("status").get<std::string>();
  r.closed = doc.at("closed").get<bool>();
  r.time = doc.at("time").get<double>();
  r.iterations = doc.at("iterations").get<long>();
  r.cuts = doc.at("cuts").get<long>();
  r.attack = doc.at("attack").get<std::vector<NodeId>>();
  return r;
}

std::string content_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error(ErrorKind::kInvalidArgument, "cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

std::optional<std::pair<int, std::string>> parse_instance_name(const std::string& file_name) {
  static const std::regex pattern(R"(tree_n(\d+)_([A-Za-z0-9]+)_\d+\.json)");
  std::smatch m;
  if (!std::regex_match(file_name, m, pattern)) return std::nullopt;
  return std::make_pair(std::stoi(m[1].str()), m[2].str());
}

std::vector<BenchRow> aggregate(const std::vector<ResultRecord>& records, double time_limit) {
  std::map<std::tuple<int, std::string, std::string>, BenchRow> rows;
  for (const auto& r : records) {
    if (r.status == "Failed") continue;
    auto& row = rows[{r.n, r.scheme, r.method}];
    row.n = r.n;
    row.scheme = r.scheme;
    row.method = r.method;
    ++row.instances;
    row.mean_time += r.closed ? std::min(r.time, time_limit) : time_limit;
    row.mean_gap_pct += 100.0 * r.gap;
    row.closed += r.closed ? 1 : 0;
    row.mean_iterations += static_cast<double>(r.iterations);
    row.mean_cuts += static_cast<double>(r.cuts);
  }
  std::vector<BenchRow> out;
  for (auto& [key, row] : rows) {
    const double count = row.instances;
    row.mean_time /= count;
    row.mean_gap_pct /= count;
    row.mean_iterations /= count;
    row.mean_cuts /= count;
    out.push_back(row);
  }
  return out;
}

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << kBenchCsvHeader << '\n';
  for (const auto& r : rows) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%d,%s,%s,%d,%.3f,%.2f,%d,%.1f,%.1f\n", r.n, r.scheme.c_str(), r.method.c_str(),
                  r.instances, r.mean_time, r.mean_gap_pct, r.closed, r.mean_iterations, r.mean_cuts);
    out << buf;
  }
}

std::string render_table(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%5s %-7s %-10s %10s %8s %9s %9s %10s\n", "n", "weights", "method", "time", "gap (%)",
                "# closed", "# iter.", "# cuts");
  os << buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%5d %-7s %-10s %10.2f %8.2f %5d/%-3d %9.1f %10.1f\n", r.n, r.scheme.c_str(),
                  r.method.c_str(), r.mean_time, r.mean_gap_pct, r.closed, r.instances, r.mean_iterations, r.mean_cuts);
    os << buf;
  }
  return os.str();
}

std::vector<ResultRecord> run_bench(const std::filesystem::path& dir, const BenchOptions& options, std::ostream& warnings) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (!options.results_dir.empty()) std::filesystem::create_directories(options.results_dir);

  struct Job {
    std::filesystem::path file;
    Method method;
  };
  std::vector<Job> jobs;
  for (const auto& f : files) {
    for (Method m : options.methods) jobs.push_back({f, m});
  }
  std::vector<std::optional<ResultRecord>> results(jobs.size());
  std::mutex warn_mutex;
  std::atomic<std::size_t> next{0};
  const auto& p = options.params;
  std::ostringstream tag;
  tag.precision(17);
  tag << "|eps=" << p.eps << "|vi=" << p.use_valid_ineq << "|share=" << p.share_prefixes << "|limit=" << p.time_limit
      << "|nu=" << p.nu;

  auto worker = [&] {
    while (true) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= jobs.size()) return;
      const auto& job = jobs[idx];
      std::string text;
      TreeInstance instance;
      try {
        text = read_text(job.file);
        instance = instance_from_json(text);
      } catch (const std::exception& e) {
        std::lock_guard lock(warn_mutex);
        warnings << "warning: skipping " << job.file.string() << ": " << e.what() << '\n';
        continue;
      }
      const std::string name = job.file.filename().string();
      std::filesystem::path cache;
      if (!options.results_dir.empty()) {
        cache = options.results_dir / (content_hash(text + "|" + std::string(to_string(job.method)) + tag.str()) + ".json");
        if (std::filesystem::exists(cache)) {
          try {
            results[idx] = record_from_json(json::parse(read_text(cache)));
            continue;
          } catch (const std::exception&) {
          }
        }
      }
      ResultRecord record;
      try {
        record = run_method(instance, job.method, p);
      } catch (const std::exception& e) {
        record.method = std::string(to_string(job.method));
        record.n = instance.node_count;
        record.status = "Failed";
        std::lock_guard lock(warn_mutex);
        warnings << "warning: " << name << " " << record.method << ": " << e.what() << '\n';
      }
      record.instance = name;
      if (auto parsed = parse_instance_name(name)) {
        record.scheme = parsed->second;
      } else {
        record.scheme = "custom";
      }
      if (!cache.empty()) write_atomic(cache, record_to_json(record).dump(2) + "\n");
      results[idx] = std::move(record);
    }
  };
  const int count = std::max(1, options.workers);
  std::vector<std::thread> threads;
  for (int t = 1; t < count; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  std::vector<ResultRecord> out;
  for (auto& r : results) {
    if (r) out.push_back(std::move(*r));
  }
  return out;
}

}  // namespace scnp

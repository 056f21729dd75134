#include "hybridsim/sweep.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <thread>
#include <tuple>

#include "hybridsim/engine.hpp"

namespace hybridsim {

std::vector<SweepRun> run_sweep(const std::vector<SweepTask>& tasks, unsigned threads) {
  std::vector<SweepRun> out(tasks.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, tasks.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const SweepTask& t = tasks[i];
      SweepRun& r = out[i];
      r.mechanism = t.mechanism;
      r.workload = t.workload;
      r.variant = t.variant;
      r.seed = t.seed;
      try {
        const MechanismConfig mech = parse_mechanism(t.mechanism);
        const RunResult res = simulate(*t.jobs, t.system, mech);
        r.metrics = metric_values(compute_metrics(res.record, t.system, t.mechanism));
      } catch (const std::exception& e) {
        r.error = e.what();
        if (r.error.empty()) r.error = "unknown error";
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

std::vector<AggregateRow> aggregate(const std::vector<SweepRun>& runs) {
  using Key = std::tuple<std::string, std::string, std::string, std::string>;
  std::map<Key, std::vector<double>> groups;
  for (const auto& r : runs) {
    if (!r.ok()) continue;
    for (const auto& [name, v] : r.metrics) {
      if (v) groups[{r.mechanism, r.workload, r.variant, name}].push_back(*v);
    }
  }
  std::vector<AggregateRow> rows;
  for (const auto& [key, xs] : groups) {
    AggregateRow row;
    std::tie(row.mechanism, row.workload, row.variant, row.metric) = key;
    row.samples = xs.size();
    double sum = 0.0;
    for (double x : xs) sum += x;
    row.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
      double ss = 0.0;
      for (double x : xs) ss += (x - row.mean) * (x - row.mean);
      row.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    rows.push_back(row);
  }
  return rows;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

void write_runs_csv(std::ostream& out, const std::vector<SweepRun>& runs) {
  std::vector<std::string> names;
  for (const auto& r : runs) {
    if (r.ok()) {
      for (const auto& [n, v] : r.metrics) names.push_back(n);
      break;
    }
  }
  out << "mechanism,workload,variant,seed,error";
  for (const auto& n : names) out << ',' << csv_field(n);
  out << "\r\n";
  for (const auto& r : runs) {
    out << csv_field(r.mechanism) << ',' << csv_field(r.workload) << ',' << csv_field(r.variant)
        << ',' << r.seed << ',' << csv_field(r.error);
    for (std::size_t i = 0; i < names.size(); ++i) {
      out << ',';
      if (r.ok() && i < r.metrics.size()) out << format_number(r.metrics[i].second);
    }
    out << "\r\n";
  }
}

std::vector<SweepRun> read_runs_csv(std::istream& in) {
  std::vector<SweepRun> runs;
  std::string line;
  if (!std::getline(in, line)) return runs;
  const auto header = split_csv_line(line);
  if (header.size() < 5 || header[0] != "mechanism") {
    throw std::runtime_error("not a sweep run table");
  }
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) throw std::runtime_error("ragged sweep run row");
    SweepRun r;
    r.mechanism = f[0];
    r.workload = f[1];
    r.variant = f[2];
    r.seed = std::stoull(f[3]);
    r.error = f[4];
    if (r.ok()) {
      for (std::size_t i = 5; i < f.size(); ++i) {
        std::optional<double> v;
        if (!f[i].empty()) {
          double x = 0.0;
          auto res = std::from_chars(f[i].data(), f[i].data() + f[i].size(), x);
          if (res.ec != std::errc()) throw std::runtime_error("bad number '" + f[i] + "'");
          v = x;
        }
        r.metrics.emplace_back(header[i], v);
      }
    }
    runs.push_back(std::move(r));
  }
  return runs;
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << "mechanism,workload,variant,metric,samples,mean,stddev\r\n";
  for (const auto& r : rows) {
    out << csv_field(r.mechanism) << ',' << csv_field(r.workload) << ',' << csv_field(r.variant)
        << ',' << csv_field(r.metric) << ',' << r.samples << ',' << format_number(r.mean) << ','
        << format_number(r.stddev) << "\r\n";
  }
}

}  // namespace hybridsim

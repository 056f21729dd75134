// hybridsim command line: workload generation, single runs, sweeps.
//
// Settings come from built-in defaults, then --config, then HYBRIDSIM_*
// environment variables, then flags.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "hybridsim/engine.hpp"
#include "hybridsim/oracle.hpp"
#include "hybridsim/sweep.hpp"
#include "settings.hpp"

using namespace hybridsim;
using hybridsim::cli::Settings;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> notice_mix;
  std::optional<double> checkpoint_scale;
  std::optional<Nodes> capacity;
  std::optional<std::size_t> jobs;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON config file (sections: system, workload, trace, "
                                        "mechanism, run)")
      ->envname("HYBRIDSIM_CONFIG")
      ->check(CLI::ExistingFile);
  app->add_option("--seed", c.seed, "seed for synthetic traces and workload annotation")
      ->envname("HYBRIDSIM_SEED");
  app->add_option("--notice-mix", c.notice_mix, "advance-notice mix W1..W5")
      ->envname("HYBRIDSIM_NOTICE_MIX");
  app->add_option("--checkpoint-scale", c.checkpoint_scale,
                  "multiplier on the checkpoint interval (0.5 = twice as often)")
      ->envname("HYBRIDSIM_CHECKPOINT_SCALE");
  app->add_option("--capacity", c.capacity, "system size in nodes")
      ->envname("HYBRIDSIM_CAPACITY");
  app->add_option("--jobs", c.jobs, "jobs in a synthetic trace")->envname("HYBRIDSIM_JOBS");
}

Settings resolve(const Common& c) {
  Settings s = c.config.empty() ? Settings{} : cli::load_settings(c.config);
  if (c.seed) s.seed = *c.seed;
  if (c.notice_mix) s.workload.notice_mix = parse_notice_mix(*c.notice_mix);
  if (c.checkpoint_scale) s.system.checkpoint_scale = *c.checkpoint_scale;
  if (c.capacity) s.system.capacity = *c.capacity;
  if (c.jobs) s.trace.jobs = *c.jobs;
  s.system.validate();
  s.workload.capacity = s.system.capacity;
  s.workload.validate();
  return s;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

// ---------------------------------------------------------------------------

int cmd_generate(const Common& c, const std::string& swf, const std::string& out_path) {
  Settings s = resolve(c);
  std::vector<JobSpec> jobs;
  if (!swf.empty()) {
    const SwfParseResult parsed = parse_swf(swf);
    if (parsed.malformed > 0) {
      std::cerr << "warning: skipped " << parsed.malformed << " malformed lines\n";
    }
    if (parsed.dropped > 0) std::cerr << "warning: dropped " << parsed.dropped << " records\n";
    if (parsed.clamped > 0) {
      std::cerr << "warning: clamped " << parsed.clamped << " runtimes to their estimate\n";
    }
    WorkloadConfig w = s.workload;
    w.rng_seed = s.seed;
    auto gen = generate_workload(parsed.jobs, w);
    for (const auto& msg : gen.warnings) std::cerr << "warning: " << msg << '\n';
    jobs = std::move(gen.jobs);
  } else {
    jobs = s.synthetic_jobs(s.seed);
  }
  auto out = open_out(out_path);
  write_native(out, jobs);
  print_summary(std::cout, summarize(jobs, s.system.capacity));
  return 0;
}

int cmd_simulate(const Common& c, const std::string& workload, const std::optional<std::string>& mech,
                 const std::string& out_prefix, const std::string& event_log,
                 const std::string& ledger_audit) {
  Settings s = resolve(c);
  if (mech) s.mechanism = *mech;
  const MechanismConfig mc = s.mechanism_config();
  const std::vector<JobSpec> jobs =
      workload.empty() ? s.synthetic_jobs(s.seed) : parse_native(workload);

  EngineOptions opts;
  std::ofstream audit;
  if (!ledger_audit.empty()) {
    audit = open_out(ledger_audit);
    audit << "time,op,job,nodes,free,allocated,held,occupied\n";
    opts.ledger_audit = &audit;
    opts.paranoid_ledger = true;
  }
  const RunResult r = simulate(jobs, s.system, mc, opts);
  const MetricsReport m = compute_metrics(r.record, s.system, s.mechanism);

  {
    auto out = open_out(out_prefix + ".json");
    out << to_json(m).dump(2) << '\n';
  }
  {
    auto out = open_out(out_prefix + ".csv");
    write_csv(out, m);
  }
  if (!event_log.empty()) {
    auto out = open_out(event_log);
    r.log.write_csv(out);
  }
  write_text(std::cout, m);
  return 0;
}

int cmd_sweep(const Common& c, std::vector<std::string> mechanisms, std::vector<std::string> mixes,
              std::vector<double> scales, std::size_t seeds, const std::string& workload,
              const std::string& from_runs, std::optional<unsigned> threads,
              const std::string& out_prefix) {
  std::vector<SweepRun> runs;
  if (!from_runs.empty()) {
    std::ifstream in(from_runs, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + from_runs);
    runs = read_runs_csv(in);
  } else {
    Settings s = resolve(c);
    if (mechanisms.empty()) mechanisms.assign(kMechanismNames.begin(), kMechanismNames.end());
    if (mixes.empty()) mixes = {"W1", "W2", "W3", "W4", "W5"};
    if (scales.empty()) scales = {s.system.checkpoint_scale};
    for (const auto& m : mechanisms) parse_mechanism(m);  // fail fast on typos

    std::vector<SweepTask> tasks;
    std::shared_ptr<const std::vector<JobSpec>> fixed;
    if (!workload.empty()) {
      fixed = std::make_shared<const std::vector<JobSpec>>(parse_native(workload));
      mixes = {std::filesystem::path(workload).filename().string()};
      seeds = 1;
    }
    for (const auto& mix : mixes) {
      for (std::size_t k = 0; k < seeds; ++k) {
        const std::uint64_t seed = s.seed + k;
        auto jobs = fixed;
        if (!jobs) {
          Settings per = s;
          per.workload.notice_mix = parse_notice_mix(mix);
          jobs = std::make_shared<const std::vector<JobSpec>>(per.synthetic_jobs(seed));
        }
        for (double scale : scales) {
          for (const auto& m : mechanisms) {
            SweepTask t;
            t.mechanism = m;
            t.workload = mix;
            std::ostringstream v;
            v << "checkpoint_scale=" << scale;
            t.variant = v.str();
            t.seed = seed;
            t.system = s.system;
            t.system.checkpoint_scale = scale;
            t.jobs = jobs;
            tasks.push_back(std::move(t));
          }
        }
      }
    }
    runs = run_sweep(tasks, threads.value_or(s.threads));
    auto out = open_out(out_prefix + "_runs.csv");
    write_runs_csv(out, runs);
  }
  {
    auto out = open_out(out_prefix + "_aggregate.csv");
    write_aggregate_csv(out, aggregate(runs));
  }
  std::size_t failed = 0;
  for (const auto& r : runs) {
    if (!r.ok()) {
      ++failed;
      std::cerr << "run failed: " << r.mechanism << ' ' << r.workload << ' ' << r.variant
                << " seed " << r.seed << ": " << r.error << '\n';
    }
  }
  std::cout << runs.size() - failed << " of " << runs.size() << " runs completed\n";
  return failed == 0 ? 0 : 1;
}

int cmd_oracle_check(std::uint64_t first, std::size_t count, const std::string& emit) {
  std::size_t bad = 0;
  std::vector<std::string> names(kMechanismNames.begin(), kMechanismNames.end());
  names.emplace_back(kBaselineName);
  for (std::uint64_t seed = first; seed < first + count; ++seed) {
    const TinyInstance inst = random_tiny_instance(seed);
    if (!emit.empty()) {
      std::filesystem::create_directories(emit);
      write_native(std::filesystem::path(emit) / ("tiny_" + std::to_string(seed) + ".jsonl"),
                   inst.jobs);
    }
    for (const auto& name : names) {
      MechanismConfig mech = parse_mechanism(name);
      mech.warning_duration = inst.warning_duration;
      const OracleResult want = oracle_run(inst, mech);
      const RunResult got = simulate(inst.jobs, inst.system, mech);
      const long diff = first_difference(got.log, want.log);
      if (diff >= 0 || !(got.record == want.record)) {
        ++bad;
        std::cerr << "mismatch: seed " << seed << ' ' << name << " at record " << diff << '\n';
      }
      if (!emit.empty()) {
        std::string file = name;
        for (char& ch : file) ch = ch == '&' ? '_' : ch;
        auto out = open_out((std::filesystem::path(emit) /
                             ("tiny_" + std::to_string(seed) + "_" + file + ".csv"))
                                .string());
        want.log.write_csv(out);
      }
    }
  }
  std::cout << count * names.size() - bad << " of " << count * names.size() << " runs agree\n";
  return bad == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for co-scheduling rigid, on-demand and malleable jobs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hybridsim 0.1.0");

  Common gen_c;
  std::string gen_swf, gen_out;
  auto* gen = app.add_subcommand("generate", "annotate a trace (SWF or synthetic) into a workload");
  add_common(gen, gen_c);
  gen->add_option("--swf", gen_swf, "Standard Workload Format trace; synthetic if omitted")
      ->check(CLI::ExistingFile);
  gen->add_option("--out", gen_out, "native workload file to write")->required();

  Common sim_c;
  std::string sim_workload, sim_out = "report", sim_log, sim_audit;
  std::optional<std::string> sim_mech;
  auto* sim = app.add_subcommand("simulate", "run one simulation and write a report");
  add_common(sim, sim_c);
  sim->add_option("--workload", sim_workload, "native workload file; synthetic if omitted")
      ->envname("HYBRIDSIM_WORKLOAD");
  sim->add_option("--mechanism", sim_mech,
                  "N&PAA, N&SPAA, CUA&PAA, CUA&SPAA, CUP&PAA, CUP&SPAA or FCFS-EASY")
      ->envname("HYBRIDSIM_MECHANISM");
  sim->add_option("--out", sim_out, "report prefix (writes PREFIX.json and PREFIX.csv)");
  sim->add_option("--event-log", sim_log, "write the event log CSV here");
  sim->add_option("--ledger-audit", sim_audit,
                  "audit the ledger after every mutation and log each state here");

  Common sw_c;
  std::vector<std::string> sw_mechs, sw_mixes;
  std::vector<double> sw_scales;
  std::size_t sw_seeds = 10;
  std::string sw_workload, sw_from, sw_out = "sweep";
  std::optional<unsigned> sw_threads;
  auto* sw = app.add_subcommand("sweep", "mechanisms x notice mixes x seeds, aggregated");
  add_common(sw, sw_c);
  sw->add_option("--mechanism", sw_mechs, "mechanisms to run (default: all six)")
      ->delimiter(',');
  sw->add_option("--mixes", sw_mixes, "notice mixes (default: W1..W5)")->delimiter(',');
  sw->add_option("--scales", sw_scales, "checkpoint scales, e.g. 0.5,1.0")->delimiter(',');
  sw->add_option("--seeds", sw_seeds, "traces per cell, seeded from --seed upwards")
      ->envname("HYBRIDSIM_SEEDS")
      ->check(CLI::PositiveNumber);
  sw->add_option("--workload", sw_workload, "use this workload for every cell instead");
  sw->add_option("--from-runs", sw_from, "re-aggregate a stored *_runs.csv")
      ->check(CLI::ExistingFile);
  sw->add_option("--threads", sw_threads, "parallel simulations (default: all cores)")
      ->envname("HYBRIDSIM_THREADS");
  sw->add_option("--out", sw_out, "output prefix (PREFIX_runs.csv, PREFIX_aggregate.csv)");

  Common cfg_c;
  auto* cfg = app.add_subcommand("config", "print the effective configuration as JSON");
  add_common(cfg, cfg_c);

  std::uint64_t oc_first = 1;
  std::size_t oc_count = 100;
  std::string oc_emit;
  auto* oc = app.add_subcommand("oracle-check", "");
  oc->group("");  // hidden
  oc->add_option("--seed", oc_first);
  oc->add_option("--seeds", oc_count);
  oc->add_option("--emit", oc_emit, "directory for tiny instances and their oracle logs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_generate(gen_c, gen_swf, gen_out);
    if (*sim) return cmd_simulate(sim_c, sim_workload, sim_mech, sim_out, sim_log, sim_audit);
    if (*sw) {
      return cmd_sweep(sw_c, sw_mechs, sw_mixes, sw_scales, sw_seeds, sw_workload, sw_from,
                       sw_threads, sw_out);
    }
    if (*cfg) {
      std::cout << cli::to_json(resolve(cfg_c)).dump(2) << '\n';
      return 0;
    }
    if (*oc) return cmd_oracle_check(oc_first, oc_count, oc_emit);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

#pragma once

#include <algorithm>
#include <filesystem>
#include <iomanip>

#include <sys/wait.h>

#include "gsynth/modes.hpp"

namespace gsynth {

struct BenchSummaryRow {
  std::string category; // LIA | BV | INV
  std::string mode;
  int runs = 0;
  int solved = 0;
  double mean_time_solved = 0.0; // seconds, solved runs only
};

struct BenchResult {
  std::vector<RunRecord> records;
  std::vector<BenchSummaryRow> rows;
};

namespace detail {

inline std::string category_of(const std::string &path) {
  try {
    SynthProblem p = parse_problem(read_text_file(path));
    if (p.is_invariant())
      return "INV";
    return p.logic == Logic::Bv ? "BV" : "LIA";
  } catch (const Error &) {
    return "unknown";
  }
}

/// One (benchmark, mode, seed) run in a forked worker so a wedged or
/// crashing run cannot take the sweep down.
inline RunRecord run_isolated(const std::string &path, Mode mode, const Config &cfg) {
  int fds[2];
  if (pipe(fds) != 0)
    throw Error("pipe() failed");
  pid_t pid = fork();
  if (pid < 0)
    throw Error("fork() failed");
  if (pid == 0) {
    close(fds[0]);
    std::string payload;
    try {
      RunRecord rec = solve_command(path, mode, cfg);
      payload = rec.to_line();
    } catch (const std::exception &e) {
      RunRecord rec;
      rec.benchmark = benchmark_label(path);
      rec.mode = mode_name(mode);
      rec.outcome = "failed";
      rec.failure_reason = e.what();
      rec.seed = cfg.seed;
      payload = rec.to_line();
    }
    payload += "\n";
    size_t off = 0;
    while (off < payload.size()) {
      ssize_t n = write(fds[1], payload.data() + off, payload.size() - off);
      if (n <= 0)
        break;
      off += static_cast<size_t>(n);
    }
    close(fds[1]);
    _exit(0);
  }
  close(fds[1]);
  std::string reply;
  char buf[4096];
  ssize_t n;
  while ((n = read(fds[0], buf, sizeof buf)) > 0)
    reply.append(buf, static_cast<size_t>(n));
  close(fds[0]);
  int status = 0;
  waitpid(pid, &status, 0);

  nlohmann::json j = nlohmann::json::parse(reply, nullptr, false);
  if (j.is_discarded()) {
    RunRecord rec;
    rec.benchmark = benchmark_label(path);
    rec.mode = mode_name(mode);
    rec.outcome = "failed";
    rec.failure_reason = "worker crashed (status " + std::to_string(status) + ")";
    rec.seed = cfg.seed;
    return rec;
  }
  return RunRecord::from_json(j);
}

} // namespace detail

/// Sweeps every .sl file in a directory across the given modes.
/// Nondeterministic modes run `repeats` times with per-run seeds.
/// Individual failures are recorded, never fatal.
inline BenchResult bench_command(const std::string &dir, const std::vector<Mode> &modes,
                                 const Config &cfg, std::ostream &out,
                                 bool isolate_processes = true) {
  std::vector<std::string> files;
  for (const auto &entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".sl")
      files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());

  BenchResult result;
  std::ofstream records_out;
  if (!cfg.results_file.empty())
    records_out.open(cfg.results_file, std::ios::app);

  for (const std::string &file : files) {
    std::string category = detail::category_of(file);
    for (Mode mode : modes) {
      int repeats = mode_nondeterministic(mode, cfg) ? std::max(1, cfg.repeats) : 1;
      for (int run = 0; run < repeats; ++run) {
        Config run_cfg = cfg;
        run_cfg.seed = cfg.seed + static_cast<uint64_t>(run);
        RunRecord rec;
        if (isolate_processes) {
          rec = detail::run_isolated(file, mode, run_cfg);
        } else {
          try {
            rec = solve_command(file, mode, run_cfg);
          } catch (const std::exception &e) {
            rec.benchmark = detail::benchmark_label(file);
            rec.mode = mode_name(mode);
            rec.outcome = "failed";
            rec.failure_reason = e.what();
            rec.seed = run_cfg.seed;
          }
        }
        if (records_out.is_open())
          records_out << rec.to_line() << "\n";
        result.records.push_back(rec);

        auto row = std::find_if(result.rows.begin(), result.rows.end(),
                                [&](const BenchSummaryRow &r) {
                                  return r.category == category && r.mode == rec.mode;
                                });
        if (row == result.rows.end()) {
          result.rows.push_back({category, rec.mode, 0, 0, 0.0});
          row = result.rows.end() - 1;
        }
        row->runs += 1;
        if (rec.solved) {
          row->mean_time_solved =
              (row->mean_time_solved * row->solved + rec.elapsed_s) / (row->solved + 1);
          row->solved += 1;
        }
      }
    }
  }

  // Aggregate table; mean time covers solved runs only.
  out << std::left << std::setw(10) << "category" << std::setw(22) << "mode"
      << std::right << std::setw(7) << "runs" << std::setw(9) << "solved" << std::setw(14)
      << "time(s)" << "\n";
  for (const BenchSummaryRow &r : result.rows) {
    out << std::left << std::setw(10) << r.category << std::setw(22) << r.mode << std::right
        << std::setw(7) << r.runs << std::setw(9) << r.solved << std::setw(14)
        << std::fixed << std::setprecision(2)
        << (r.solved ? r.mean_time_solved : 0.0) << "\n";
  }
  return result;
}

} // namespace gsynth

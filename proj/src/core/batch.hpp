#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "metrics.hpp"
#include "params.hpp"

namespace gradfuse {

/// Files of one pair: <name>-A.<ext>, <name>-B.<ext>, optional -GT and -MASK.
struct PairFiles {
  std::string name;
  std::filesystem::path a;
  std::filesystem::path b;
  std::optional<std::filesystem::path> truth;
  std::optional<std::filesystem::path> mask;
};

struct BatchRow {
  MetricsReport metrics;
  bool ok = false;
  std::optional<double> accuracy;  // present when a -MASK file exists
  std::optional<double> psnr;      // present when a -GT file exists
  std::string params_hash;
  std::string error;
};

struct BatchReport {
  std::vector<BatchRow> rows;  // input order
  BatchRow aggregate;          // means over successful rows
  std::size_t failed = 0;
  double total_ms = 0.0;
};

struct BatchOptions {
  int jobs = 1;
  std::optional<std::filesystem::path> output_dir;  // per-pair fused image and map
};

/// Pairs found in `dir`, sorted by name. Throws Error(no_pairs) when there are none.
std::vector<PairFiles> discover_pairs(const std::filesystem::path& dir);

/// Worker count: `requested` capped by GRADFUSE_THREADS (when set) and by `tasks`.
int effective_jobs(int requested, std::size_t tasks);

BatchReport run_batch(const std::vector<PairFiles>& pairs, const FusionParams& params,
                      const BatchOptions& options);

BatchReport batch_evaluate(const std::filesystem::path& dir, const FusionParams& params,
                           const BatchOptions& options);

/// CSV: header, one row per pair in input order, then the aggregate row.
/// Contains no timing data, so identical inputs give identical bytes.
std::string batch_csv(const BatchReport& report);
void write_batch_csv(const BatchReport& report, const std::filesystem::path& path);
BatchReport read_batch_csv(const std::filesystem::path& path);

/// Appends `name,sf,nmi,qabf,params_hash`, writing the header for a new file.
void append_metrics_csv(const std::filesystem::path& path, const MetricsReport& report,
                        const FusionParams& params);

struct SweepPoint {
  std::string param;
  double value = 0.0;
  BatchReport report;
};

/// Re-runs the batch for every value of `param` (k or th).
std::vector<SweepPoint> sweep(const std::vector<PairFiles>& pairs, const FusionParams& base,
                              const std::string& param, const std::vector<double>& values,
                              const BatchOptions& options);

std::string sweep_csv(const std::vector<SweepPoint>& points);

}  // namespace gradfuse

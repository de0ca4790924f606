#include "batch.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "image.hpp"
#include "pipeline.hpp"
#include "synth.hpp"

namespace gradfuse {

namespace fs = std::filesystem;

namespace {

bool supported_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".pgm" || ext == ".ppm";
}

DecisionMap load_mask(const fs::path& path) {
  const Plane l = luma(load_image(path));
  DecisionMap m(l.width(), l.height());
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] = l.data()[i] >= 0.5;
  return m;
}

std::string clean_field(std::string text) {
  std::replace_if(text.begin(), text.end(),
                  [](char c) { return c == ',' || c == '\n' || c == '\r' || c == '"'; }, ';');
  return text;
}

std::string opt_real(const std::optional<double>& v) { return v ? format_real(*v) : ""; }

BatchRow process_pair(const PairFiles& pair, const FusionParams& params,
                      const BatchOptions& options) {
  BatchRow row;
  row.metrics.name = pair.name;
  row.params_hash = hex64(params.hash());
  try {
    const ColorImage a = load_image(pair.a);
    const ColorImage b = load_image(pair.b);
    const FusionResult result = fuse_pair(a, b, params);
    const Plane fused_luma = luma(result.fused);
    row.metrics = evaluate(pair.name, result.trace.luma_a, result.trace.luma_b, fused_luma);
    if (pair.truth) {
      const Plane truth = luma(load_image(*pair.truth));
      require_same_shape(truth, fused_luma, "ground truth");
      row.psnr = psnr(fused_luma, truth);
    }
    if (pair.mask) {
      const DecisionMap truth = load_mask(*pair.mask);
      require_same_shape(truth, result.map_a, "ground-truth mask");
      row.accuracy = mask_accuracy(result.map_a, truth);
    }
    if (options.output_dir) {
      save_image(result.fused, *options.output_dir / (pair.name + "-F.png"));
      save_mask(result.map_a, *options.output_dir / (pair.name + "-MAP.png"));
    }
    row.ok = true;
  } catch (const std::exception& e) {
    row = BatchRow{};
    row.metrics.name = pair.name;
    row.params_hash = hex64(params.hash());
    row.error = clean_field(e.what());
  }
  return row;
}

void aggregate(BatchReport& report, const FusionParams& params) {
  BatchRow& agg = report.aggregate;
  agg = BatchRow{};
  agg.metrics.name = "ALL";
  agg.params_hash = hex64(params.hash());
  std::size_t ok = 0;
  std::size_t with_acc = 0;
  std::size_t with_psnr = 0;
  double acc = 0.0;
  double ps = 0.0;
  report.failed = 0;
  for (const auto& row : report.rows) {
    if (!row.ok) {
      ++report.failed;
      continue;
    }
    ++ok;
    agg.metrics.sf += row.metrics.sf;
    agg.metrics.nmi += row.metrics.nmi;
    agg.metrics.qabf += row.metrics.qabf;
    if (row.accuracy) {
      acc += *row.accuracy;
      ++with_acc;
    }
    if (row.psnr) {
      ps += *row.psnr;
      ++with_psnr;
    }
  }
  agg.ok = ok > 0;
  if (ok) {
    agg.metrics.sf /= static_cast<double>(ok);
    agg.metrics.nmi /= static_cast<double>(ok);
    agg.metrics.qabf /= static_cast<double>(ok);
  }
  if (with_acc) agg.accuracy = acc / static_cast<double>(with_acc);
  if (with_psnr) agg.psnr = ps / static_cast<double>(with_psnr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::optional<double> read_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_real(s, "csv field");
}

constexpr const char* kBatchHeader = "name,status,sf,nmi,qabf,accuracy,psnr,params_hash,error";

}  // namespace

std::vector<PairFiles> discover_pairs(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(Error::Code::io, "not a directory: " + dir.string());
  std::map<std::string, std::map<std::string, fs::path>> found;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || !supported_extension(entry.path())) continue;
    const std::string stem = entry.path().stem().string();
    for (const char* role : {"-A", "-B", "-GT", "-MASK"}) {
      const std::string suffix(role);
      if (stem.size() > suffix.size() &&
          stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) == 0) {
        found[stem.substr(0, stem.size() - suffix.size())][suffix] = entry.path();
        break;
      }
    }
  }
  std::vector<PairFiles> pairs;
  for (auto& [name, roles] : found) {
    if (!roles.count("-A") || !roles.count("-B")) continue;
    PairFiles p{name, roles["-A"], roles["-B"], std::nullopt, std::nullopt};
    if (roles.count("-GT")) p.truth = roles["-GT"];
    if (roles.count("-MASK")) p.mask = roles["-MASK"];
    pairs.push_back(std::move(p));
  }
  if (pairs.empty()) throw Error(Error::Code::no_pairs, "no pairs found in " + dir.string());
  return pairs;
}

int effective_jobs(int requested, std::size_t tasks) {
  int jobs = std::max(1, requested);
  if (const char* env = std::getenv("GRADFUSE_THREADS")) {
    try {
      const int cap = parse_int(env, "GRADFUSE_THREADS");
      if (cap >= 1) jobs = std::min(jobs, cap);
    } catch (const Error&) {
      // An unparsable cap is ignored.
    }
  }
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs),
                                                 std::max<std::size_t>(tasks, 1)));
}

BatchReport run_batch(const std::vector<PairFiles>& pairs, const FusionParams& params,
                      const BatchOptions& options) {
  params.validate();
  if (pairs.empty()) throw Error(Error::Code::no_pairs, "no pairs to process");
  if (options.output_dir) fs::create_directories(*options.output_dir);

  const auto start = std::chrono::steady_clock::now();
  BatchReport report;
  report.rows.resize(pairs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < pairs.size(); i = next++) {
      report.rows[i] = process_pair(pairs[i], params, options);
    }
  };
  const int jobs = effective_jobs(options.jobs, pairs.size());
  {
    std::vector<std::jthread> threads;
    for (int t = 1; t < jobs; ++t) threads.emplace_back(worker);
    worker();
  }
  aggregate(report, params);
  report.total_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

BatchReport batch_evaluate(const fs::path& dir, const FusionParams& params,
                           const BatchOptions& options) {
  return run_batch(discover_pairs(dir), params, options);
}

std::string batch_csv(const BatchReport& report) {
  std::ostringstream out;
  out << kBatchHeader << '\n';
  auto emit = [&](const BatchRow& row, const char* status) {
    out << row.metrics.name << ',' << status << ',';
    if (row.ok) {
      out << format_real(row.metrics.sf) << ',' << format_real(row.metrics.nmi) << ','
          << format_real(row.metrics.qabf);
    } else {
      out << ",,";
    }
    out << ',' << opt_real(row.accuracy) << ',' << opt_real(row.psnr) << ',' << row.params_hash
        << ',' << row.error << '\n';
  };
  for (const auto& row : report.rows) emit(row, row.ok ? "ok" : "failed");
  emit(report.aggregate, "aggregate");
  return out.str();
}

void write_batch_csv(const BatchReport& report, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Error::Code::io, "cannot write " + path.string());
  out << batch_csv(report);
  if (!out) throw Error(Error::Code::io, "write failed: " + path.string());
}

BatchReport read_batch_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Error::Code::io, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kBatchHeader) {
    throw Error(Error::Code::format, "not a batch report: " + path.string());
  }
  BatchReport report;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 9) throw Error(Error::Code::format, "malformed row: " + line);
    BatchRow row;
    row.metrics.name = f[0];
    row.ok = f[1] != "failed";
    if (row.ok) {
      row.metrics.sf = parse_real(f[2], "sf");
      row.metrics.nmi = parse_real(f[3], "nmi");
      row.metrics.qabf = parse_real(f[4], "qabf");
    }
    row.accuracy = read_opt(f[5]);
    row.psnr = read_opt(f[6]);
    row.params_hash = f[7];
    row.error = f[8];
    if (f[1] == "aggregate") {
      report.aggregate = row;
    } else {
      if (!row.ok) ++report.failed;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

void append_metrics_csv(const fs::path& path, const MetricsReport& report,
                        const FusionParams& params) {
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw Error(Error::Code::io, "cannot write " + path.string());
  if (fresh) out << "name,sf,nmi,qabf,params_hash\n";
  out << clean_field(report.name) << ',' << format_real(report.sf) << ','
      << format_real(report.nmi) << ',' << format_real(report.qabf) << ','
      << hex64(params.hash()) << '\n';
}

std::vector<SweepPoint> sweep(const std::vector<PairFiles>& pairs, const FusionParams& base,
                              const std::string& param, const std::vector<double>& values,
                              const BatchOptions& options) {
  if (param != "k" && param != "th") {
    throw Error(Error::Code::invalid_argument, "sweep supports k or th, got '" + param + "'");
  }
  if (values.empty()) throw Error(Error::Code::invalid_argument, "sweep needs at least one value");
  std::vector<SweepPoint> points;
  for (double v : values) {
    FusionParams p = base;
    p.set(param, format_real(v));
    BatchOptions opts = options;
    opts.output_dir.reset();
    points.push_back({param, v, run_batch(pairs, p, opts)});
  }
  return points;
}

std::string sweep_csv(const std::vector<SweepPoint>& points) {
  std::ostringstream out;
  out << "param,value,pairs,failed,sf,nmi,qabf,accuracy,psnr,params_hash\n";
  for (const auto& pt : points) {
    const BatchRow& agg = pt.report.aggregate;
    out << pt.param << ',' << format_real(pt.value) << ',' << pt.report.rows.size() << ','
        << pt.report.failed << ',' << format_real(agg.metrics.sf) << ','
        << format_real(agg.metrics.nmi) << ',' << format_real(agg.metrics.qabf) << ','
        << opt_real(agg.accuracy) << ',' << opt_real(agg.psnr) << ',' << agg.params_hash << '\n';
  }
  return out.str();
}

}  // namespace gradfuse

// gradfuse command-line front end. Talks to the library only through the C API.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gradfuse/gradfuse.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPartial = 2;

struct ImageDeleter {
  void operator()(gf_image* p) const { gf_image_free(p); }
};
struct ParamsDeleter {
  void operator()(gf_params* p) const { gf_params_free(p); }
};
struct ResultDeleter {
  void operator()(gf_result* p) const { gf_result_free(p); }
};
using ImagePtr = std::unique_ptr<gf_image, ImageDeleter>;
using ParamsPtr = std::unique_ptr<gf_params, ParamsDeleter>;
using ResultPtr = std::unique_ptr<gf_result, ResultDeleter>;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(gf_status status, const std::string& context) {
  if (status != GF_OK) throw Failure(context + ": " + gf_last_error());
}

ImagePtr load(const std::string& path) {
  gf_image* img = nullptr;
  check(gf_image_load(path.c_str(), &img), "loading " + path);
  return ImagePtr(img);
}

// Parameter flags shared by fuse, eval, batch and sweep.
struct ParamFlags {
  std::string config;
  std::string ablate;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config, "key = value parameter file (flags override it)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--ablate", ablate,
                    "full | no_enhance | no_enhance_paper | no_areaopen | no_guided | "
                    "no_consistency");
    const std::pair<const char*, const char*> keys[] = {
        {"k", "complementary saliency weight (0.5)"},
        {"th", "area-opening fraction of the image area (0.02)"},
        {"r", "guided-filter radius (5)"},
        {"eps", "guided-filter regularizer (0.3)"},
        {"q", "consistency window fraction of the image area (5e-5)"},
        {"tw", "Tenengrad window side, odd (7)"},
        {"connectivity", "4 or 8 (8)"},
    };
    for (const auto& [key, help] : keys) {
      options[key] = cmd->add_option(std::string("--") + key, values[key], help);
    }
  }

  ParamsPtr build() const {
    ParamsPtr params(gf_params_create());
    if (!params) throw Failure("out of memory");
    if (!config.empty()) check(gf_params_load_config(params.get(), config.c_str()), "config");
    if (!ablate.empty()) check(gf_params_apply_ablation(params.get(), ablate.c_str()), "ablate");
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) {
        check(gf_params_set(params.get(), key.c_str(), values.at(key).c_str()), "--" + key);
      }
    }
    check(gf_params_validate(params.get()), "parameters");
    return params;
  }
};

std::string with_suffix(const std::string& path, const std::string& suffix) {
  std::filesystem::path p(path);
  const std::string ext = p.has_extension() ? p.extension().string() : ".png";
  return (p.parent_path() / (p.stem().string() + suffix + ext)).string();
}

std::string hex(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw CLI::ValidationError("--values", "bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gradfuse: two-image multi-focus fusion"};
  app.require_subcommand(1);
  app.set_version_flag("--version", gf_version());

  // fuse
  auto* fuse = app.add_subcommand("fuse", "Fuse two partially focused images");
  std::string fuse_a, fuse_b, fuse_out, fuse_map;
  std::map<std::string, std::string> dumps;
  bool show_timings = false;
  ParamFlags fuse_params;
  fuse->add_option("A", fuse_a, "first source")->required()->check(CLI::ExistingFile);
  fuse->add_option("B", fuse_b, "second source")->required()->check(CLI::ExistingFile);
  fuse->add_option("-o,--output", fuse_out, "fused PNG")->required();
  fuse->add_option("--map", fuse_map, "final decision map of A (PNG)");
  for (const char* d : {"initial", "saliency", "decision-initial", "areaopen", "guided",
                        "verified", "final-maps"}) {
    fuse->add_option(std::string("--dump-") + d, dumps[d], std::string("write the ") + d +
                                                               " stage to this PNG path");
  }
  fuse->add_flag("--timings", show_timings, "print per-stage durations");
  fuse_params.attach(fuse);

  // eval
  auto* eval = app.add_subcommand("eval", "Compute SF, NMI and Q^AB/F of a fused image");
  std::string eval_a, eval_b, eval_f, eval_csv, eval_name;
  ParamFlags eval_params;
  eval->add_option("A", eval_a)->required()->check(CLI::ExistingFile);
  eval->add_option("B", eval_b)->required()->check(CLI::ExistingFile);
  eval->add_option("F", eval_f)->required()->check(CLI::ExistingFile);
  eval->add_option("--csv", eval_csv, "append a row to this CSV");
  eval->add_option("--name", eval_name, "row name (default: F's file stem)");
  eval_params.attach(eval);

  // synth
  auto* synth = app.add_subcommand("synth", "Write synthetic pairs with ground truth");
  gf_synth_options synth_opts{256, 256, 3.0, 0, GF_MASK_HALF, 1};
  std::string synth_mask = "half", synth_dir;
  synth->add_option("--width", synth_opts.width)->check(CLI::Range(64, 1 << 15));
  synth->add_option("--height", synth_opts.height)->check(CLI::Range(64, 1 << 15));
  synth->add_option("--sigma", synth_opts.sigma)->check(CLI::NonNegativeNumber);
  synth->add_option("--seed", synth_opts.seed);
  synth->add_option("--count", synth_opts.count)->check(CLI::PositiveNumber);
  synth->add_option("--mask", synth_mask)->check(CLI::IsMember({"half", "disk", "blob"}));
  synth->add_option("-o,--output", synth_dir, "output directory")->required();

  // batch
  auto* batch = app.add_subcommand("batch", "Fuse and score every pair in a directory");
  std::string batch_dir, batch_csv, batch_out;
  int batch_jobs = 1;
  ParamFlags batch_params;
  batch->add_option("dir", batch_dir)->required()->check(CLI::ExistingDirectory);
  batch->add_option("-o,--output", batch_csv, "report CSV")->required();
  batch->add_option("--jobs", batch_jobs, "parallel workers (capped by GRADFUSE_THREADS)")
      ->check(CLI::PositiveNumber);
  batch->add_option("--out-dir", batch_out, "directory for fused images and maps");
  batch_params.attach(batch);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Batch accuracy and metrics across values of k or th");
  std::string sweep_dir, sweep_param, sweep_values, sweep_csv;
  int sweep_jobs = 1;
  ParamFlags sweep_params;
  sweep->add_option("dir", sweep_dir)->required()->check(CLI::ExistingDirectory);
  sweep->add_option("--param", sweep_param)->required()->check(CLI::IsMember({"k", "th"}));
  sweep->add_option("--values", sweep_values, "comma-separated values")->required();
  sweep->add_option("-o,--output", sweep_csv, "sweep CSV")->required();
  sweep->add_option("--jobs", sweep_jobs)->check(CLI::PositiveNumber);
  sweep_params.attach(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*fuse) {
      const auto params = fuse_params.build();
      const auto a = load(fuse_a);
      const auto b = load(fuse_b);
      gf_result* raw = nullptr;
      check(gf_fuse(a.get(), b.get(), params.get(), &raw), "fusion");
      const ResultPtr result(raw);
      check(gf_image_save(gf_result_fused(result.get()), fuse_out.c_str()), "writing output");
      if (!fuse_map.empty()) {
        check(gf_result_save_stage(result.get(), GF_STAGE_FINAL_MAP, 0, fuse_map.c_str()),
              "writing map");
      }
      const auto save_pair = [&](gf_stage stage, const std::string& path) {
        check(gf_result_save_stage(result.get(), stage, 0, with_suffix(path, "_a").c_str()),
              "dump");
        check(gf_result_save_stage(result.get(), stage, 1, with_suffix(path, "_b").c_str()),
              "dump");
      };
      if (!dumps["initial"].empty()) {
        check(gf_result_save_stage(result.get(), GF_STAGE_INITIAL_FUSED, 0,
                                   dumps["initial"].c_str()),
              "dump");
      }
      if (!dumps["saliency"].empty()) {
        const std::string& p = dumps["saliency"];
        const char* suffixes[] = {"_a", "_b", "_f"};
        for (int i = 0; i < 3; ++i) {
          check(gf_result_save_stage(result.get(), GF_STAGE_SALIENCY, i,
                                     with_suffix(p, suffixes[i]).c_str()),
                "dump");
        }
      }
      if (!dumps["decision-initial"].empty()) {
        check(gf_result_save_stage(result.get(), GF_STAGE_DECISION_INITIAL, 0,
                                   dumps["decision-initial"].c_str()),
              "dump");
      }
      if (!dumps["areaopen"].empty()) save_pair(GF_STAGE_AREA_OPEN, dumps["areaopen"]);
      if (!dumps["guided"].empty()) save_pair(GF_STAGE_GUIDED, dumps["guided"]);
      if (!dumps["verified"].empty()) save_pair(GF_STAGE_VERIFIED, dumps["verified"]);
      if (!dumps["final-maps"].empty()) save_pair(GF_STAGE_FINAL_MAP, dumps["final-maps"]);
      if (show_timings) {
        for (size_t i = 0; i < gf_result_stage_count(result.get()); ++i) {
          std::printf("%-16s %9.3f ms\n", gf_result_stage_name(result.get(), i),
                      gf_result_stage_ms(result.get(), i));
        }
      }
      return kExitOk;
    }

    if (*eval) {
      const auto params = eval_params.build();
      const auto a = load(eval_a);
      const auto b = load(eval_b);
      const auto f = load(eval_f);
      gf_metrics m{};
      check(gf_evaluate(a.get(), b.get(), f.get(), nullptr, &m), "evaluation");
      const std::string name =
          eval_name.empty() ? std::filesystem::path(eval_f).stem().string() : eval_name;
      std::printf("%s sf=%.4f nmi=%.4f qabf=%.4f params=%s\n", name.c_str(), m.sf, m.nmi, m.qabf,
                  hex(gf_params_hash(params.get())).c_str());
      if (!eval_csv.empty()) {
        check(gf_metrics_append_csv(eval_csv.c_str(), name.c_str(), &m, params.get()), "csv");
      }
      return kExitOk;
    }

    if (*synth) {
      synth_opts.mask = synth_mask == "disk"   ? GF_MASK_DISK
                        : synth_mask == "blob" ? GF_MASK_BLOB
                                               : GF_MASK_HALF;
      check(gf_synth_write(&synth_opts, synth_dir.c_str()), "synth");
      std::printf("wrote %d pair(s) to %s\n", synth_opts.count, synth_dir.c_str());
      return kExitOk;
    }

    if (*batch) {
      const auto params = batch_params.build();
      gf_batch_summary s{};
      check(gf_batch_run(batch_dir.c_str(), params.get(), batch_jobs, batch_csv.c_str(),
                         batch_out.empty() ? nullptr : batch_out.c_str(), &s),
            "batch");
      std::printf("pairs=%zu failed=%zu sf=%.4f nmi=%.4f qabf=%.4f", s.pairs, s.failed, s.mean_sf,
                  s.mean_nmi, s.mean_qabf);
      if (!std::isnan(s.mean_accuracy)) std::printf(" accuracy=%.5f", s.mean_accuracy);
      if (!std::isnan(s.mean_psnr)) std::printf(" psnr=%.3f", s.mean_psnr);
      std::printf(" time=%.1fms\n", s.total_ms);
      return s.failed > 0 ? kExitPartial : kExitOk;
    }

    if (*sweep) {
      const auto params = sweep_params.build();
      const auto values = parse_values(sweep_values);
      check(gf_sweep_run(sweep_dir.c_str(), params.get(), sweep_param.c_str(), values.data(),
                         values.size(), sweep_jobs, sweep_csv.c_str()),
            "sweep");
      std::printf("wrote %zu sweep point(s) to %s\n", values.size(), sweep_csv.c_str());
      return kExitOk;
    }
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const Failure& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}

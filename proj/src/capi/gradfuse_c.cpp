#include "gradfuse/gradfuse.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <new>
#include <string>

#include "batch.hpp"
#include "image.hpp"
#include "metrics.hpp"
#include "pipeline.hpp"
#include "synth.hpp"

struct gf_image {
  gradfuse::ColorImage image;
};

struct gf_params {
  gradfuse::FusionParams params;
};

struct gf_result {
  gradfuse::FusionResult result;
  gf_image fused;
};

namespace {

thread_local std::string last_error;

gf_status to_status(gradfuse::Error::Code code) {
  using C = gradfuse::Error::Code;
  switch (code) {
    case C::invalid_argument: return GF_ERR_INVALID_ARGUMENT;
    case C::io: return GF_ERR_IO;
    case C::format: return GF_ERR_FORMAT;
    case C::dimension: return GF_ERR_DIMENSION;
    case C::no_pairs: return GF_ERR_NO_PAIRS;
  }
  return GF_ERR_INTERNAL;
}

template <typename F>
gf_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return GF_OK;
  } catch (const gradfuse::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
  } catch (const std::exception& e) {
    last_error = e.what();
  } catch (...) {
    last_error = "unknown error";
  }
  return GF_ERR_INTERNAL;
}

void require(bool condition, const char* message) {
  if (!condition) throw gradfuse::Error(gradfuse::Error::Code::invalid_argument, message);
}

gradfuse::ColorSpace to_space(gf_color_space s) {
  switch (s) {
    case GF_GRAY: return gradfuse::ColorSpace::gray;
    case GF_RGB: return gradfuse::ColorSpace::rgb;
    case GF_YCBCR: return gradfuse::ColorSpace::ycbcr;
  }
  throw gradfuse::Error(gradfuse::Error::Code::invalid_argument, "unknown color space");
}

gradfuse::QabfConstants to_constants(const gf_qabf_constants& c) {
  return {c.gamma_g, c.kappa_g, c.sigma_g, c.gamma_a, c.kappa_a, c.sigma_a, c.weight_exponent};
}

double nan_if_empty(const std::optional<double>& v) {
  return v ? *v : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

extern "C" {

const char* gf_version(void) { return "1.0.0"; }

const char* gf_last_error(void) { return last_error.c_str(); }

gf_status gf_image_load(const char* path, gf_image** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new gf_image{gradfuse::load_image(path)};
  });
}

gf_status gf_image_create(int width, int height, gf_color_space space, const double* planar,
                          gf_image** out) {
  return guarded([&] {
    require(planar && out, "null argument");
    const auto cs = to_space(space);
    const int channels = cs == gradfuse::ColorSpace::gray ? 1 : 3;
    std::vector<gradfuse::Plane> planes;
    const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    for (int c = 0; c < channels; ++c) {
      gradfuse::RealMap raw(width, height);
      std::copy(planar + c * n, planar + (c + 1) * n, raw.data().begin());
      planes.push_back(gradfuse::Plane::checked_from(raw));
    }
    *out = new gf_image{gradfuse::ColorImage(cs, std::move(planes))};
  });
}

gf_status gf_image_save(const gf_image* img, const char* path) {
  return guarded([&] {
    require(img && path, "null argument");
    gradfuse::save_image(img->image, path);
  });
}

void gf_image_free(gf_image* img) { delete img; }

int gf_image_width(const gf_image* img) { return img ? img->image.width() : 0; }
int gf_image_height(const gf_image* img) { return img ? img->image.height() : 0; }
int gf_image_channels(const gf_image* img) { return img ? img->image.channels() : 0; }

gf_color_space gf_image_space(const gf_image* img) {
  if (!img) return GF_GRAY;
  switch (img->image.space()) {
    case gradfuse::ColorSpace::gray: return GF_GRAY;
    case gradfuse::ColorSpace::rgb: return GF_RGB;
    case gradfuse::ColorSpace::ycbcr: return GF_YCBCR;
  }
  return GF_GRAY;
}

gf_status gf_image_read_plane(const gf_image* img, int channel, double* out, size_t count) {
  return guarded([&] {
    require(img && out, "null argument");
    require(channel >= 0 && channel < img->image.channels(), "channel out of range");
    const auto data = img->image.plane(channel).data();
    require(count >= data.size(), "output buffer too small");
    std::copy(data.begin(), data.end(), out);
  });
}

gf_status gf_image_convert(const gf_image* img, gf_color_space target, gf_image** out) {
  return guarded([&] {
    require(img && out, "null argument");
    const auto to = to_space(target);
    const auto from = img->image.space();
    if (from == to) {
      *out = new gf_image{img->image};
    } else if (from == gradfuse::ColorSpace::rgb && to == gradfuse::ColorSpace::ycbcr) {
      *out = new gf_image{gradfuse::rgb_to_ycbcr(img->image)};
    } else if (from == gradfuse::ColorSpace::ycbcr && to == gradfuse::ColorSpace::rgb) {
      *out = new gf_image{gradfuse::ycbcr_to_rgb(img->image)};
    } else if (to == gradfuse::ColorSpace::gray) {
      *out = new gf_image{gradfuse::ColorImage::gray(gradfuse::luma(img->image))};
    } else {
      throw gradfuse::Error(gradfuse::Error::Code::invalid_argument,
                            "unsupported color conversion");
    }
  });
}

gf_params* gf_params_create(void) { return new (std::nothrow) gf_params{}; }

gf_params* gf_params_clone(const gf_params* params) {
  return params ? new (std::nothrow) gf_params{*params} : nullptr;
}

void gf_params_free(gf_params* params) { delete params; }

gf_status gf_params_set(gf_params* params, const char* key, const char* value) {
  return guarded([&] {
    require(params && key && value, "null argument");
    params->params.set(key, value);
  });
}

gf_status gf_params_get(const gf_params* params, const char* key, double* value) {
  return guarded([&] {
    require(params && key && value, "null argument");
    const auto& p = params->params;
    const std::string k(key);
    if (k == "k") {
      *value = p.k;
    } else if (k == "th") {
      *value = p.th;
    } else if (k == "r") {
      *value = p.r;
    } else if (k == "eps") {
      *value = p.eps;
    } else if (k == "q") {
      *value = p.q;
    } else if (k == "tw") {
      *value = p.tw;
    } else if (k == "connectivity") {
      *value = static_cast<int>(p.connectivity);
    } else if (k == "enhance") {
      *value = p.stages.enhance;
    } else if (k == "area_open") {
      *value = p.stages.area_open;
    } else if (k == "guided") {
      *value = p.stages.guided;
    } else if (k == "consistency") {
      *value = p.stages.consistency;
    } else if (k == "normalize_dif") {
      *value = p.normalize_difference;
    } else {
      throw gradfuse::Error(gradfuse::Error::Code::invalid_argument,
                            "unknown or non-numeric parameter '" + k + "'");
    }
  });
}

gf_status gf_params_load_config(gf_params* params, const char* path) {
  return guarded([&] {
    require(params && path, "null argument");
    params->params.load_config(path);
  });
}

gf_status gf_params_apply_ablation(gf_params* params, const char* name) {
  return guarded([&] {
    require(params && name, "null argument");
    // Keep user-set numeric values; only the stage switches follow the ablation.
    const auto ablated = gradfuse::ablation_config(name);
    params->params.stages = ablated.stages;
    params->params.reference = ablated.reference;
  });
}

gf_status gf_params_validate(const gf_params* params) {
  return guarded([&] {
    require(params, "null argument");
    params->params.validate();
  });
}

uint64_t gf_params_hash(const gf_params* params) { return params ? params->params.hash() : 0; }

gf_status gf_fuse(const gf_image* a, const gf_image* b, const gf_params* params,
                  gf_result** out) {
  return guarded([&] {
    require(a && b && out, "null argument");
    const gradfuse::FusionParams p = params ? params->params : gradfuse::FusionParams{};
    auto* r = new gf_result{gradfuse::fuse_pair(a->image, b->image, p), {}};
    r->fused.image = r->result.fused;
    *out = r;
  });
}

void gf_result_free(gf_result* result) { delete result; }

const gf_image* gf_result_fused(const gf_result* result) {
  return result ? &result->fused : nullptr;
}

gf_status gf_result_read_map(const gf_result* result, int index, uint8_t* out, size_t count) {
  return guarded([&] {
    require(result && out, "null argument");
    require(index == 0 || index == 1, "map index must be 0 or 1");
    const auto& m = index == 0 ? result->result.map_a : result->result.map_b;
    require(count >= m.size(), "output buffer too small");
    std::copy(m.data().begin(), m.data().end(), out);
  });
}

gf_status gf_result_save_stage(const gf_result* result, gf_stage stage, int index,
                               const char* path) {
  return guarded([&] {
    require(result && path, "null argument");
    const auto& r = result->result;
    const auto& t = r.trace;
    const auto pick = [&](const auto& a, const auto& b) -> const auto& {
      require(index == 0 || index == 1, "stage index must be 0 or 1");
      return index == 0 ? a : b;
    };
    switch (stage) {
      case GF_STAGE_INITIAL_FUSED:
        gradfuse::save_plane(r.initial_fused, path);
        break;
      case GF_STAGE_SALIENCY:
        require(index >= 0 && index <= 2, "saliency index must be 0, 1 or 2");
        gradfuse::save_normalized(index == 0 ? t.focus.sa : index == 1 ? t.focus.sb : t.focus.sf,
                                  path);
        break;
      case GF_STAGE_DECISION_INITIAL:
        gradfuse::save_mask(t.focus.map_a, path);
        break;
      case GF_STAGE_AREA_OPEN:
        gradfuse::save_mask(pick(t.refine.opened_a, t.refine.opened_b), path);
        break;
      case GF_STAGE_GUIDED:
        gradfuse::save_plane(pick(t.refine.guided_a, t.refine.guided_b), path);
        break;
      case GF_STAGE_VERIFIED:
        gradfuse::save_mask(pick(t.refine.verified_a, t.refine.verified_b), path);
        break;
      case GF_STAGE_FINAL_MAP:
        gradfuse::save_mask(pick(r.map_a, r.map_b), path);
        break;
      default:
        require(false, "unknown stage");
    }
  });
}

size_t gf_result_stage_count(const gf_result* result) {
  return result ? result->result.timings.size() : 0;
}

const char* gf_result_stage_name(const gf_result* result, size_t i) {
  if (!result || i >= result->result.timings.size()) return "";
  return result->result.timings[i].stage.c_str();
}

double gf_result_stage_ms(const gf_result* result, size_t i) {
  if (!result || i >= result->result.timings.size()) return 0.0;
  return result->result.timings[i].ms;
}

gf_qabf_constants gf_qabf_default_constants(void) {
  const gradfuse::QabfConstants c;
  return {c.gamma_g, c.kappa_g, c.sigma_g, c.gamma_a, c.kappa_a, c.sigma_a, c.weight_exponent};
}

gf_status gf_evaluate(const gf_image* a, const gf_image* b, const gf_image* fused,
                      const gf_qabf_constants* constants, gf_metrics* out) {
  return guarded([&] {
    require(a && b && fused && out, "null argument");
    const auto la = gradfuse::luma(a->image);
    const auto lb = gradfuse::luma(b->image);
    const auto lf = gradfuse::luma(fused->image);
    out->sf = gradfuse::spatial_frequency(lf);
    out->nmi = gradfuse::normalized_mutual_information(la, lb, lf);
    out->qabf = constants ? gradfuse::qabf(la, lb, lf, to_constants(*constants))
                          : gradfuse::qabf(la, lb, lf);
  });
}

gf_status gf_metrics_append_csv(const char* path, const char* name, const gf_metrics* metrics,
                                const gf_params* params) {
  return guarded([&] {
    require(path && name && metrics, "null argument");
    const gradfuse::FusionParams p = params ? params->params : gradfuse::FusionParams{};
    gradfuse::append_metrics_csv(path, {name, metrics->sf, metrics->nmi, metrics->qabf}, p);
  });
}

gf_status gf_synth_write(const gf_synth_options* options, const char* dir) {
  return guarded([&] {
    require(options && dir, "null argument");
    require(options->count >= 1, "count must be >= 1");
    namespace fs = std::filesystem;
    const fs::path root(dir);
    fs::create_directories(root);
    gradfuse::MaskKind kind = gradfuse::MaskKind::half;
    switch (options->mask) {
      case GF_MASK_HALF: kind = gradfuse::MaskKind::half; break;
      case GF_MASK_DISK: kind = gradfuse::MaskKind::disk; break;
      case GF_MASK_BLOB: kind = gradfuse::MaskKind::blob; break;
      default: require(false, "unknown mask kind");
    }
    for (int i = 0; i < options->count; ++i) {
      const std::uint64_t seed = options->seed + static_cast<std::uint64_t>(i);
      gradfuse::SynthSpec spec{gradfuse::procedural_base(options->width, options->height, seed),
                               gradfuse::make_mask(kind, options->width, options->height, seed),
                               options->sigma, seed};
      const auto pair = gradfuse::synth_pair(spec);
      const std::string name =
          std::string("synth-") + gradfuse::to_string(kind) + "-" + std::to_string(seed);
      gradfuse::save_image(pair.a, root / (name + "-A.png"));
      gradfuse::save_image(pair.b, root / (name + "-B.png"));
      gradfuse::save_image(pair.truth, root / (name + "-GT.png"));
      gradfuse::save_mask(pair.mask, root / (name + "-MASK.png"));
    }
  });
}

gf_status gf_batch_run(const char* dir, const gf_params* params, int jobs, const char* csv_path,
                       const char* output_dir, gf_batch_summary* summary) {
  return guarded([&] {
    require(dir && csv_path, "null argument");
    const gradfuse::FusionParams p = params ? params->params : gradfuse::FusionParams{};
    gradfuse::BatchOptions options;
    options.jobs = jobs;
    if (output_dir) options.output_dir = std::filesystem::path(output_dir);
    const auto report = gradfuse::batch_evaluate(dir, p, options);
    gradfuse::write_batch_csv(report, csv_path);
    if (summary) {
      const auto& agg = report.aggregate;
      *summary = gf_batch_summary{report.rows.size(), report.failed, agg.metrics.sf,
                                  agg.metrics.nmi,    agg.metrics.qabf,
                                  nan_if_empty(agg.accuracy), nan_if_empty(agg.psnr),
                                  report.total_ms};
    }
  });
}

gf_status gf_sweep_run(const char* dir, const gf_params* params, const char* param,
                       const double* values, size_t count, int jobs, const char* csv_path) {
  return guarded([&] {
    require(dir && param && values && csv_path, "null argument");
    const gradfuse::FusionParams p = params ? params->params : gradfuse::FusionParams{};
    gradfuse::BatchOptions options;
    options.jobs = jobs;
    const auto points = gradfuse::sweep(gradfuse::discover_pairs(dir), p, param,
                                        std::vector<double>(values, values + count), options);
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) {
      throw gradfuse::Error(gradfuse::Error::Code::io, std::string("cannot write ") + csv_path);
    }
    out << gradfuse::sweep_csv(points);
  });
}

}  // extern "C"

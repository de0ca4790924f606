#include "pipeline.hpp"

#include <chrono>

#include "gradient.hpp"
#include "saliency.hpp"

namespace gradfuse {

namespace {

class StageClock {
 public:
  explicit StageClock(std::vector<StageTiming>& sink) : sink_(sink) {}

  void lap(const char* stage) {
    const auto now = std::chrono::steady_clock::now();
    sink_.push_back({stage, std::chrono::duration<double, std::milli>(now - last_).count()});
    last_ = now;
  }

 private:
  std::vector<StageTiming>& sink_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

}  // namespace

FusionResult fuse_pair(const ColorImage& a, const ColorImage& b, const FusionParams& params) {
  params.validate();
  if (!a.same_shape(b)) {
    throw Error(Error::Code::dimension,
                "source sizes differ: " + std::to_string(a.width()) + "x" +
                    std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                    std::to_string(b.height()));
  }
  if (a.space() != b.space()) {
    throw Error(Error::Code::invalid_argument, "sources use different color spaces");
  }
  if (params.tw > std::min(a.width(), a.height())) {
    throw Error(Error::Code::invalid_argument, "Tenengrad window larger than the image");
  }

  FusionResult result;
  StageClock clock(result.timings);

  result.trace.luma_a = luma(a);
  result.trace.luma_b = luma(b);
  const Plane& la = result.trace.luma_a;
  const Plane& lb = result.trace.luma_b;
  clock.lap("luma");

  result.initial_fused = initial_fusion(la, lb);
  clock.lap("initial_fusion");

  const SaliencyMap sa = tenengrad(la, params.tw);
  const SaliencyMap sb = tenengrad(lb, params.tw);
  const SaliencyMap sf = tenengrad(result.initial_fused, params.tw);
  clock.lap("saliency");

  result.trace.focus = detect_focus(sa, sb, sf, params);
  clock.lap("focus_detection");

  result.trace.refine = refine_maps(result.trace.focus.map_a, la, lb, params);
  result.map_a = result.trace.refine.final_a;
  result.map_b = result.trace.refine.final_b;
  clock.lap("refine");

  result.fused = compose(a, b, result.map_a, result.map_b);
  clock.lap("compose");
  return result;
}

ColorImage compose(const ColorImage& a, const ColorImage& b, const DecisionMap& ma,
                   const DecisionMap& mb) {
  if (!a.same_shape(b) || a.space() != b.space()) {
    throw Error(Error::Code::dimension, "compose: sources differ in size or color space");
  }
  if (a.width() != ma.width() || a.height() != ma.height()) {
    throw Error(Error::Code::dimension, "compose: map size differs from sources");
  }
  require_same_shape(ma, mb, "compose");
  for (std::size_t i = 0; i < ma.size(); ++i) {
    const auto va = ma.data()[i];
    const auto vb = mb.data()[i];
    if (va > 1 || vb > 1 || va + vb != 1) {
      throw Error(Error::Code::invalid_argument, "compose: decision maps are not complementary");
    }
  }
  std::vector<Plane> planes;
  for (int c = 0; c < a.channels(); ++c) {
    Plane out = a.plane(c);
    const auto src_b = b.plane(c).data();
    auto dst = out.data();
    for (std::size_t i = 0; i < dst.size(); ++i) {
      if (mb.data()[i]) dst[i] = src_b[i];
    }
    planes.push_back(std::move(out));
  }
  return ColorImage(a.space(), std::move(planes));
}

const std::vector<std::string>& ablation_names() {
  static const std::vector<std::string> names = {
      "full", "no_enhance", "no_enhance_paper", "no_areaopen", "no_guided", "no_consistency"};
  return names;
}

FusionParams ablation_config(std::string_view name) {
  FusionParams p;
  if (name == "full") {
  } else if (name == "no_enhance") {
    p.stages.enhance = false;
  } else if (name == "no_enhance_paper") {
    p.reference = DifferenceReference::source;
  } else if (name == "no_areaopen") {
    p.stages.area_open = false;
  } else if (name == "no_guided") {
    p.stages.guided = false;
  } else if (name == "no_consistency") {
    p.stages.consistency = false;
  } else {
    throw Error(Error::Code::invalid_argument, "unknown ablation '" + std::string(name) + "'");
  }
  return p;
}

}  // namespace gradfuse

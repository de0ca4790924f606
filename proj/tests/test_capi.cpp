#include <gradfuse/gradfuse.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("gradfuse_test_capi_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

gf_image* load(const fs::path& p) {
  gf_image* img = nullptr;
  REQUIRE(gf_image_load(p.string().c_str(), &img) == GF_OK);
  return img;
}

}  // namespace

TEST_CASE("version and last error") {
  CHECK(std::strlen(gf_version()) > 0);
  gf_image* img = nullptr;
  CHECK(gf_image_load("/nonexistent/file.png", &img) == GF_ERR_IO);
  CHECK(img == nullptr);
  CHECK(std::string(gf_last_error()).find("nonexistent") != std::string::npos);
  CHECK(gf_image_load(nullptr, &img) == GF_ERR_INVALID_ARGUMENT);
}

TEST_CASE("image creation and readback") {
  std::vector<double> px(3 * 4 * 3);
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = static_cast<double>(i) / px.size();
  gf_image* img = nullptr;
  REQUIRE(gf_image_create(4, 3, GF_RGB, px.data(), &img) == GF_OK);
  CHECK(gf_image_width(img) == 4);
  CHECK(gf_image_height(img) == 3);
  CHECK(gf_image_channels(img) == 3);
  CHECK(gf_image_space(img) == GF_RGB);
  std::vector<double> plane(12);
  REQUIRE(gf_image_read_plane(img, 1, plane.data(), plane.size()) == GF_OK);
  CHECK(plane[0] == px[12]);
  CHECK(gf_image_read_plane(img, 3, plane.data(), plane.size()) != GF_OK);
  CHECK(gf_image_read_plane(img, 0, plane.data(), 5) != GF_OK);

  gf_image* ycc = nullptr;
  REQUIRE(gf_image_convert(img, GF_YCBCR, &ycc) == GF_OK);
  CHECK(gf_image_space(ycc) == GF_YCBCR);
  gf_image_free(ycc);
  gf_image_free(img);
  gf_image_free(nullptr);

  CHECK(gf_image_create(2, 2, GF_GRAY, px.data(), &img) == GF_ERR_DIMENSION);
}

TEST_CASE("parameters") {
  gf_params* p = gf_params_create();
  double v = 0;
  REQUIRE(gf_params_get(p, "k", &v) == GF_OK);
  CHECK(v == 0.5);
  const auto h0 = gf_params_hash(p);
  CHECK(gf_params_set(p, "k", "0.25") == GF_OK);
  CHECK(gf_params_get(p, "k", &v) == GF_OK);
  CHECK(v == 0.25);
  CHECK(gf_params_hash(p) != h0);
  CHECK(gf_params_set(p, "k", "banana") == GF_ERR_INVALID_ARGUMENT);
  CHECK(gf_params_set(p, "nope", "1") == GF_ERR_INVALID_ARGUMENT);
  gf_params* q = gf_params_clone(p);
  CHECK(gf_params_hash(q) == gf_params_hash(p));
  CHECK(gf_params_apply_ablation(q, "no_guided") == GF_OK);
  CHECK(gf_params_get(q, "guided", &v) == GF_OK);
  CHECK(v == 0.0);
  CHECK(gf_params_get(q, "k", &v) == GF_OK);
  CHECK(v == 0.25);
  CHECK(gf_params_apply_ablation(q, "bogus") == GF_ERR_INVALID_ARGUMENT);
  CHECK(gf_params_validate(q) == GF_OK);
  gf_params_free(q);
  gf_params_free(p);
}

TEST_CASE("synth, fuse, stages and evaluation") {
  const auto dir = fresh_dir("fuse");
  gf_synth_options opt{96, 96, 3.0, 7, GF_MASK_HALF, 1};
  REQUIRE(gf_synth_write(&opt, dir.string().c_str()) == GF_OK);
  gf_image* a = load(dir / "synth-half-7-A.png");
  gf_image* b = load(dir / "synth-half-7-B.png");
  gf_params* p = gf_params_create();

  gf_result* r = nullptr;
  REQUIRE(gf_fuse(a, b, p, &r) == GF_OK);
  const gf_image* f = gf_result_fused(r);
  CHECK(gf_image_width(f) == 96);

  std::vector<uint8_t> ma(96 * 96), mb(96 * 96);
  REQUIRE(gf_result_read_map(r, 0, ma.data(), ma.size()) == GF_OK);
  REQUIRE(gf_result_read_map(r, 1, mb.data(), mb.size()) == GF_OK);
  for (std::size_t i = 0; i < ma.size(); ++i) CHECK(ma[i] + mb[i] == 1);
  CHECK(ma[10 * 96 + 5] == 1);
  CHECK(ma[10 * 96 + 90] == 0);

  CHECK(gf_result_stage_count(r) > 0);
  CHECK(std::strlen(gf_result_stage_name(r, 0)) > 0);
  CHECK(gf_result_stage_ms(r, 0) >= 0.0);
  CHECK(gf_result_save_stage(r, GF_STAGE_SALIENCY, 2, (dir / "sf.png").string().c_str()) == GF_OK);
  CHECK(gf_result_save_stage(r, GF_STAGE_GUIDED, 1, (dir / "g.png").string().c_str()) == GF_OK);
  CHECK(gf_result_save_stage(r, GF_STAGE_GUIDED, 2, (dir / "x.png").string().c_str()) ==
        GF_ERR_INVALID_ARGUMENT);
  CHECK(fs::exists(dir / "sf.png"));

  gf_metrics m{};
  const gf_qabf_constants c = gf_qabf_default_constants();
  CHECK(c.gamma_g == 0.9994);
  REQUIRE(gf_evaluate(a, b, f, &c, &m) == GF_OK);
  CHECK(m.sf > 0);
  CHECK(m.nmi > 0);
  CHECK(m.qabf > 0);
  CHECK(m.qabf <= 1);
  const auto csv = dir / "m.csv";
  CHECK(gf_metrics_append_csv(csv.string().c_str(), "pair", &m, p) == GF_OK);
  CHECK(fs::file_size(csv) > 0);

  gf_image* small = nullptr;
  std::vector<double> px(10 * 10, 0.5);
  REQUIRE(gf_image_create(10, 10, GF_GRAY, px.data(), &small) == GF_OK);
  gf_result* bad = nullptr;
  CHECK(gf_fuse(a, small, p, &bad) == GF_ERR_DIMENSION);
  CHECK(bad == nullptr);

  gf_image_free(small);
  gf_result_free(r);
  gf_params_free(p);
  gf_image_free(a);
  gf_image_free(b);
}

TEST_CASE("batch and sweep") {
  const auto dir = fresh_dir("batch");
  gf_synth_options opt{72, 72, 3.0, 1, GF_MASK_DISK, 3};
  REQUIRE(gf_synth_write(&opt, dir.string().c_str()) == GF_OK);
  gf_batch_summary s{};
  const auto csv = fresh_dir("batch_out") / "b.csv";
  REQUIRE(gf_batch_run(dir.string().c_str(), nullptr, 2, csv.string().c_str(), nullptr, &s) ==
          GF_OK);
  CHECK(s.pairs == 3);
  CHECK(s.failed == 0);
  CHECK(s.mean_accuracy >= 0.9);
  CHECK(std::isfinite(s.mean_psnr));

  const auto empty = fresh_dir("empty");
  CHECK(gf_batch_run(empty.string().c_str(), nullptr, 1, csv.string().c_str(), nullptr, &s) ==
        GF_ERR_NO_PAIRS);

  const double values[] = {0.0, 0.5};
  const auto sweep_csv = csv.parent_path() / "s.csv";
  CHECK(gf_sweep_run(dir.string().c_str(), nullptr, "k", values, 2, 1,
                     sweep_csv.string().c_str()) == GF_OK);
  CHECK(fs::exists(sweep_csv));
  CHECK(gf_sweep_run(dir.string().c_str(), nullptr, "r", values, 2, 1,
                     sweep_csv.string().c_str()) == GF_ERR_INVALID_ARGUMENT);
}

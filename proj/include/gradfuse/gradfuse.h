/*
 * gradfuse C API.
 *
 * Every object is an opaque handle owned by the caller and released with the
 * matching *_free function. Functions return a gf_status; on failure the
 * message of the most recent error on the calling thread is available from
 * gf_last_error(). Handles may be used from several threads as long as no
 * handle is mutated concurrently (only gf_params_* setters mutate).
 */
#ifndef GRADFUSE_H
#define GRADFUSE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GRADFUSE_BUILDING)
#    define GF_API __declspec(dllexport)
#  else
#    define GF_API __declspec(dllimport)
#  endif
#else
#  define GF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gf_status {
  GF_OK = 0,
  GF_ERR_INVALID_ARGUMENT = 1,
  GF_ERR_IO = 2,
  GF_ERR_FORMAT = 3,
  GF_ERR_DIMENSION = 4,
  GF_ERR_NO_PAIRS = 5,
  GF_ERR_INTERNAL = 6
} gf_status;

typedef enum gf_color_space { GF_GRAY = 0, GF_RGB = 1, GF_YCBCR = 2 } gf_color_space;

/* Intermediate products that can be written after a fusion. Stages that come in
 * pairs (A and B) take an index of 0 for A and 1 for B. */
typedef enum gf_stage {
  GF_STAGE_INITIAL_FUSED = 0,     /* initial gradient-domain fusion, gray PNG */
  GF_STAGE_SALIENCY = 1,          /* index 0: A, 1: B, 2: initial fused; max-normalized */
  GF_STAGE_DECISION_INITIAL = 2,  /* initial binary map of A */
  GF_STAGE_AREA_OPEN = 3,
  GF_STAGE_GUIDED = 4,
  GF_STAGE_VERIFIED = 5,
  GF_STAGE_FINAL_MAP = 6
} gf_stage;

typedef enum gf_mask_kind { GF_MASK_HALF = 0, GF_MASK_DISK = 1, GF_MASK_BLOB = 2 } gf_mask_kind;

typedef struct gf_image gf_image;
typedef struct gf_params gf_params;
typedef struct gf_result gf_result;

typedef struct gf_metrics {
  double sf;
  double nmi;
  double qabf;
} gf_metrics;

typedef struct gf_qabf_constants {
  double gamma_g, kappa_g, sigma_g;
  double gamma_a, kappa_a, sigma_a;
  double weight_exponent;
} gf_qabf_constants;

typedef struct gf_synth_options {
  int width;
  int height;
  double sigma;
  uint64_t seed;     /* first seed; pair i uses seed + i */
  gf_mask_kind mask;
  int count;         /* number of pairs to write */
} gf_synth_options;

typedef struct gf_batch_summary {
  size_t pairs;
  size_t failed;
  double mean_sf;
  double mean_nmi;
  double mean_qabf;
  double mean_accuracy; /* NaN when no pair had a mask */
  double mean_psnr;     /* NaN when no pair had ground truth */
  double total_ms;
} gf_batch_summary;

GF_API const char* gf_version(void);
GF_API const char* gf_last_error(void);

/* Images. Planar data: channel 0 first, each channel row-major, values in [0,1]. */
GF_API gf_status gf_image_load(const char* path, gf_image** out);
GF_API gf_status gf_image_create(int width, int height, gf_color_space space,
                                 const double* planar, gf_image** out);
GF_API gf_status gf_image_save(const gf_image* img, const char* path);
GF_API void gf_image_free(gf_image* img);
GF_API int gf_image_width(const gf_image* img);
GF_API int gf_image_height(const gf_image* img);
GF_API int gf_image_channels(const gf_image* img);
GF_API gf_color_space gf_image_space(const gf_image* img);
GF_API gf_status gf_image_read_plane(const gf_image* img, int channel, double* out, size_t count);
GF_API gf_status gf_image_convert(const gf_image* img, gf_color_space target, gf_image** out);

/* Parameters; a new handle holds the published defaults. */
GF_API gf_params* gf_params_create(void);
GF_API gf_params* gf_params_clone(const gf_params* params);
GF_API void gf_params_free(gf_params* params);
GF_API gf_status gf_params_set(gf_params* params, const char* key, const char* value);
GF_API gf_status gf_params_get(const gf_params* params, const char* key, double* value);
GF_API gf_status gf_params_load_config(gf_params* params, const char* path);
GF_API gf_status gf_params_apply_ablation(gf_params* params, const char* name);
GF_API gf_status gf_params_validate(const gf_params* params);
GF_API uint64_t gf_params_hash(const gf_params* params);

/* Fusion. */
GF_API gf_status gf_fuse(const gf_image* a, const gf_image* b, const gf_params* params,
                         gf_result** out);
GF_API void gf_result_free(gf_result* result);
GF_API const gf_image* gf_result_fused(const gf_result* result);
/* Copies the final map of A (index 0) or B (index 1) as 0/1 bytes. */
GF_API gf_status gf_result_read_map(const gf_result* result, int index, uint8_t* out,
                                    size_t count);
GF_API gf_status gf_result_save_stage(const gf_result* result, gf_stage stage, int index,
                                      const char* path);
GF_API size_t gf_result_stage_count(const gf_result* result);
GF_API const char* gf_result_stage_name(const gf_result* result, size_t i);
GF_API double gf_result_stage_ms(const gf_result* result, size_t i);

/* Metrics on the luma of each image. */
GF_API gf_qabf_constants gf_qabf_default_constants(void);
GF_API gf_status gf_evaluate(const gf_image* a, const gf_image* b, const gf_image* fused,
                             const gf_qabf_constants* constants, gf_metrics* out);
GF_API gf_status gf_metrics_append_csv(const char* path, const char* name,
                                       const gf_metrics* metrics, const gf_params* params);

/* Harness. */
GF_API gf_status gf_synth_write(const gf_synth_options* options, const char* dir);
/* Fuses every <name>-A/-B pair in dir; output_dir may be NULL. */
GF_API gf_status gf_batch_run(const char* dir, const gf_params* params, int jobs,
                              const char* csv_path, const char* output_dir,
                              gf_batch_summary* summary);
GF_API gf_status gf_sweep_run(const char* dir, const gf_params* params, const char* param,
                              const double* values, size_t count, int jobs,
                              const char* csv_path);

#ifdef __cplusplus
}
#endif

#endif /* GRADFUSE_H */

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace gradfuse {

enum class Connectivity { four = 4, eight = 8 };

/// Which saliency map the difference maps are measured against.
enum class DifferenceReference {
  fused,  // S_f - S_i (default)
  source  // the other source's saliency replaces S_f (ablation variant)
};

struct StageSwitches {
  bool enhance = true;
  bool area_open = true;
  bool guided = true;
  bool consistency = true;

  friend bool operator==(const StageSwitches&, const StageSwitches&) = default;
};

/// Every tunable of the fusion pipeline. Defaults are the published settings.
struct FusionParams {
  double k = 0.5;       // weight of the subtracted complementary saliency
  double th = 0.02;     // area-opening threshold as a fraction of the image area
  int r = 5;            // guided-filter radius
  double eps = 0.3;     // guided-filter regularizer, [0,1] intensity scale
  double q = 5e-5;      // consistency window area as a fraction of the image area
  int tw = 7;           // Tenengrad window side
  Connectivity connectivity = Connectivity::eight;
  StageSwitches stages;
  DifferenceReference reference = DifferenceReference::fused;
  bool normalize_difference = true;

  /// Throws Error(invalid_argument) when any invariant is violated.
  void validate() const;

  /// Sets one field from its textual form; keys match the config file.
  void set(std::string_view key, std::string_view value);

  /// Applies a `key = value` file; '#' starts a comment, blank lines are skipped.
  void load_config(const std::filesystem::path& path);

  /// Canonical `key=value;...` string with round-trip number formatting.
  std::string canonical() const;

  /// FNV-1a 64 of canonical(); stable across platforms and runs.
  std::uint64_t hash() const;

  friend bool operator==(const FusionParams&, const FusionParams&) = default;
};

std::string hex64(std::uint64_t value);

/// Shortest decimal form that reads back to the same double.
std::string format_real(double value);

double parse_real(std::string_view text, std::string_view what);
int parse_int(std::string_view text, std::string_view what);

}  // namespace gradfuse

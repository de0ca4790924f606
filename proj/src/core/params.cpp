#include "params.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "grid.hpp"

namespace gradfuse {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool parse_bool(std::string_view text, std::string_view what) {
  if (text == "1" || text == "true" || text == "on" || text == "yes") return true;
  if (text == "0" || text == "false" || text == "off" || text == "no") return false;
  throw Error(Error::Code::invalid_argument,
              "invalid boolean for " + std::string(what) + ": '" + std::string(text) + "'");
}

void fail(const std::string& message) { throw Error(Error::Code::invalid_argument, message); }

}  // namespace

double parse_real(std::string_view text, std::string_view what) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    fail("invalid number for " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

int parse_int(std::string_view text, std::string_view what) {
  text = trim(text);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail("invalid integer for " + std::string(what) + ": '" + std::string(text) + "'");
  }
  return value;
}

std::string format_real(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::string hex64(std::uint64_t value) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[value & 0xf];
    value >>= 4;
  }
  return out;
}

void FusionParams::validate() const {
  if (!(k >= 0.0)) fail("k must be >= 0");
  if (!(th > 0.0 && th < 1.0)) fail("th must lie in (0,1)");
  if (r < 1) fail("r must be >= 1");
  if (!(eps > 0.0)) fail("eps must be > 0");
  if (!(q > 0.0)) fail("q must be > 0");
  if (tw < 3 || tw % 2 == 0) fail("tw must be odd and >= 3");
}

void FusionParams::set(std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "k") {
    k = parse_real(value, key);
  } else if (key == "th") {
    th = parse_real(value, key);
  } else if (key == "r") {
    r = parse_int(value, key);
  } else if (key == "eps") {
    eps = parse_real(value, key);
  } else if (key == "q") {
    q = parse_real(value, key);
  } else if (key == "tw") {
    tw = parse_int(value, key);
  } else if (key == "connectivity") {
    const int c = parse_int(value, key);
    if (c != 4 && c != 8) fail("connectivity must be 4 or 8");
    connectivity = c == 4 ? Connectivity::four : Connectivity::eight;
  } else if (key == "enhance") {
    stages.enhance = parse_bool(value, key);
  } else if (key == "area_open") {
    stages.area_open = parse_bool(value, key);
  } else if (key == "guided") {
    stages.guided = parse_bool(value, key);
  } else if (key == "consistency") {
    stages.consistency = parse_bool(value, key);
  } else if (key == "reference") {
    if (value == "fused") {
      reference = DifferenceReference::fused;
    } else if (value == "source") {
      reference = DifferenceReference::source;
    } else {
      fail("reference must be 'fused' or 'source'");
    }
  } else if (key == "normalize_dif") {
    normalize_difference = parse_bool(value, key);
  } else {
    fail("unknown parameter '" + std::string(key) + "'");
  }
}

void FusionParams::load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Error::Code::io, "cannot open config " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (const auto hash_pos = view.find('#'); hash_pos != std::string_view::npos) {
      view = view.substr(0, hash_pos);
    }
    view = trim(view);
    if (view.empty() || view.front() == '[') continue;  // TOML table headers are ignored
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      fail(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    auto value = trim(view.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    set(view.substr(0, eq), value);
  }
}

std::string FusionParams::canonical() const {
  std::ostringstream out;
  out << "k=" << format_real(k) << ";th=" << format_real(th) << ";r=" << r
      << ";eps=" << format_real(eps) << ";q=" << format_real(q) << ";tw=" << tw
      << ";connectivity=" << static_cast<int>(connectivity)
      << ";enhance=" << stages.enhance << ";area_open=" << stages.area_open
      << ";guided=" << stages.guided << ";consistency=" << stages.consistency
      << ";reference=" << (reference == DifferenceReference::fused ? "fused" : "source")
      << ";normalize_dif=" << normalize_difference;
  return out.str();
}

std::uint64_t FusionParams::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace gradfuse

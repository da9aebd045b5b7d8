#include "hydra/config.hpp"

namespace hydra {

std::string_view count_mode_name(CountMode m) {
  switch (m) {
    case CountMode::off:  return "off";
    case CountMode::hard: return "hard";
    case CountMode::soft: return "soft";
    case CountMode::both: return "both";
  }
  return "?";
}

CountMode parse_count_mode(std::string_view s) {
  if (s == "off") return CountMode::off;
  if (s == "hard") return CountMode::hard;
  if (s == "soft") return CountMode::soft;
  if (s == "both") return CountMode::both;
  throw Error(Errc::config_error,
              "unknown count mode '" + std::string(s) + "' (expected off|hard|soft|both)");
}

std::vector<std::string> HydraConfig::validate() const {
  if (k < 1) throw Error(Errc::config_error, "k must be >= 1");
  if (g < 1) throw Error(Errc::config_error, "g must be >= 1");
  if (use_diff && g % 2 != 0)
    throw Error(Errc::config_error,
                "g must be even when use_diff is set (half the groups take the difference)");
  if (count_max == CountMode::off && count_min == CountMode::off)
    throw Error(Errc::config_error, "count_max and count_min cannot both be off");
  if (batch_size < 1) throw Error(Errc::config_error, "batch_size must be >= 1");

  std::vector<std::string> warnings;
  if (k == 1 && count_max != CountMode::off && count_min != CountMode::off)
    warnings.push_back(
        "k = 1: the max and min responses coincide, counting both is redundant");
  return warnings;
}

std::string HydraConfig::variant_name() const {
  std::string s = "k" + std::to_string(k) + "_g" + std::to_string(g);
  s += "_max-" + std::string(count_mode_name(count_max));
  s += "_min-" + std::string(count_mode_name(count_min));
  if (clip) s += "_clip";
  s += use_diff ? "_diff" : "_nodiff";
  return s;
}

}  // namespace hydra

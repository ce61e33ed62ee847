#include "lisopt/params.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <fmt/format.h>

#include "lisopt/errors.hpp"

namespace lisopt {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const auto* begin = text.data();
  const auto* end = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ConfigError(fmt::format("config key '{}': cannot parse '{}' as a number", key, text));
  }
  return value;
}

struct Field {
  std::string_view key;
  std::function<void(SystemParams&, std::string_view)> set;
  std::function<std::string(const SystemParams&)> show;
};

template <typename T>
Field make_field(std::string_view key, T SystemParams::*member) {
  return Field{key,
               [key, member](SystemParams& p, std::string_view v) { p.*member = parse_number<T>(key, v); },
               [member](const SystemParams& p) { return fmt::format("{}", p.*member); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      make_field("p_data_dbw", &SystemParams::p_data_dbw),
      make_field("p_pilot_dbw", &SystemParams::p_pilot_dbw),
      make_field("noise_dbm", &SystemParams::noise_dbm),
      make_field("t_c", &SystemParams::t_c),
      make_field("d1_m", &SystemParams::d1_m),
      make_field("d2_m", &SystemParams::d2_m),
      make_field("d3_m", &SystemParams::d3_m),
      make_field("alpha_direct", &SystemParams::alpha_direct),
      make_field("alpha_cascade", &SystemParams::alpha_cascade),
      make_field("c0_db", &SystemParams::c0_db),
      make_field("m1", &SystemParams::m1),
      make_field("m2", &SystemParams::m2),
      make_field("m3", &SystemParams::m3),
      make_field("n_trials", &SystemParams::n_trials),
      make_field("seed", &SystemParams::seed),
  };
  return table;
}

void require(bool ok, std::string_view field, std::string_view what) {
  if (!ok) throw ConfigError(fmt::format("parameter '{}' {}", field, what));
}

}  // namespace

const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys = [] {
    std::vector<std::string_view> out;
    for (const auto& f : fields()) out.push_back(f.key);
    return out;
  }();
  return keys;
}

void SystemParams::validate() const {
  const auto finite = [](double x) { return std::isfinite(x); };
  require(finite(p_data_dbw), "p_data_dbw", "must be finite");
  require(finite(p_pilot_dbw), "p_pilot_dbw", "must be finite");
  require(finite(noise_dbm), "noise_dbm", "must be finite");
  require(t_c >= 3, "t_c", "must be at least 3");
  require(finite(d1_m) && d1_m > 0, "d1_m", "must be a positive distance");
  require(finite(d2_m) && d2_m > 0, "d2_m", "must be a positive distance");
  require(finite(d3_m) && d3_m > 0, "d3_m", "must be a positive distance");
  require(finite(alpha_direct) && alpha_direct > 0, "alpha_direct", "must be positive");
  require(finite(alpha_cascade) && alpha_cascade > 0, "alpha_cascade", "must be positive");
  require(finite(c0_db), "c0_db", "must be finite");
  require(finite(m1) && m1 >= 0.5, "m1", "must be >= 0.5 (Nakagami shape)");
  require(finite(m2) && m2 >= 0.5, "m2", "must be >= 0.5 (Nakagami shape)");
  require(finite(m3) && m3 >= 0.5, "m3", "must be >= 0.5 (Nakagami shape)");
  require(n_trials > 0, "n_trials", "must be positive");
}

void SystemParams::set(std::string_view key, std::string_view value) {
  for (const auto& f : fields()) {
    if (f.key == key) {
      f.set(*this, trim(value));
      return;
    }
  }
  throw ConfigError(fmt::format("unknown config key '{}'", key));
}

std::vector<std::string> SystemParams::manifest() const {
  std::vector<std::string> out;
  for (const auto& f : fields()) out.push_back(fmt::format("{}={}", f.key, f.show(*this)));
  return out;
}

double dbw_to_watts(double dbw) { return std::pow(10.0, dbw / 10.0); }

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

LinkGains derive_gains(const SystemParams& params) {
  const double c0 = std::pow(10.0, params.c0_db / 10.0);
  LinkGains g;
  g.beta_d = c0 * std::pow(params.d3_m, -params.alpha_direct);
  g.beta_l = c0 * c0 * std::pow(params.d1_m * params.d2_m, -params.alpha_cascade);
  g.p_data_w = dbw_to_watts(params.p_data_dbw);
  g.p_pilot_w = dbw_to_watts(params.p_pilot_dbw);
  g.noise_w = dbm_to_watts(params.noise_dbm);
  g.gamma_bar = g.p_data_w / g.noise_w;
  g.gamma_tr = g.p_pilot_w / g.noise_w;

  const auto ok = [](double x) { return std::isfinite(x) && x > 0.0; };
  if (!ok(g.beta_d) || !ok(g.beta_l) || !ok(g.gamma_bar) || !ok(g.gamma_tr) || !ok(g.noise_w)) {
    throw ConfigError(fmt::format(
        "link budget out of range: beta_d={} beta_l={} gamma_bar={} gamma_tr={}", g.beta_d, g.beta_l,
        g.gamma_bar, g.gamma_tr));
  }
  return g;
}

SystemParams parse_config(std::string_view text, const SystemParams& base) {
  SystemParams params = base;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("config line {}: expected 'key = value'", line_no));
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    try {
      params.set(key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("config line {}: {}", line_no, e.what()));
    }
  }
  params.validate();
  return params;
}

SystemParams load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace lisopt

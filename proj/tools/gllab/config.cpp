#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "gllab/common/error.hpp"

namespace gllab::cli {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string strip_comment(const std::string& line) {
  const auto pos = line.find_first_of("#;");
  return pos == std::string::npos ? line : line.substr(0, pos);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string token;
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!token.empty()) out.push_back(std::move(token));
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  if (!token.empty()) out.push_back(std::move(token));
  return out;
}

std::optional<double> to_double(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> to_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

}  // namespace

bool ConfigSection::has(const std::string& key) const {
  return std::any_of(entries_.begin(), entries_.end(), [&](const auto& e) { return e.key == key; });
}

std::vector<const ConfigEntry*> ConfigSection::all(const std::string& key) const {
  used_.insert(key);
  std::vector<const ConfigEntry*> out;
  for (const auto& e : entries_) {
    if (e.key == key) out.push_back(&e);
  }
  return out;
}

const ConfigEntry& ConfigSection::entry(const std::string& key) const {
  const auto found = all(key);
  if (found.empty()) fail_at(line_, "missing required key '" + key + "'");
  if (found.size() > 1) fail_at(found[1]->line, "duplicate key '" + key + "'");
  return *found.front();
}

void ConfigSection::fail(const std::string& key, const std::string& message) const {
  const auto found = all(key);
  fail_at(found.empty() ? line_ : found.front()->line, "'" + key + "': " + message);
}

void ConfigSection::fail_at(int line, const std::string& message) const {
  const std::string where = name_.empty() ? "top level" : "[" + name_ + "]";
  throw ConfigError(source_ + ":" + std::to_string(line) + ": " + where + " " + message);
}

std::string ConfigSection::get_string(const std::string& key) const { return entry(key).value; }

std::string ConfigSection::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : (used_.insert(key), fallback);
}

double ConfigSection::get_double(const std::string& key) const {
  const auto& e = entry(key);
  const auto v = to_double(e.value);
  if (!v) fail_at(e.line, "'" + key + "' must be a number, got '" + e.value + "'");
  return *v;
}

double ConfigSection::get_double(const std::string& key, double fallback) const {
  return find_double(key).value_or(fallback);
}

std::optional<double> ConfigSection::find_double(const std::string& key) const {
  used_.insert(key);
  if (!has(key)) return std::nullopt;
  return get_double(key);
}

std::uint64_t ConfigSection::get_u64(const std::string& key) const {
  const auto& e = entry(key);
  const auto v = to_u64(e.value);
  if (!v) fail_at(e.line, "'" + key + "' must be a non-negative integer, got '" + e.value + "'");
  return *v;
}

std::size_t ConfigSection::get_size(const std::string& key) const {
  return static_cast<std::size_t>(get_u64(key));
}

std::size_t ConfigSection::get_size(const std::string& key, std::size_t fallback) const {
  used_.insert(key);
  return has(key) ? get_size(key) : fallback;
}

bool ConfigSection::get_bool(const std::string& key, bool fallback) const {
  used_.insert(key);
  if (!has(key)) return fallback;
  const auto& e = entry(key);
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  fail_at(e.line, "'" + key + "' must be true or false, got '" + e.value + "'");
}

std::vector<double> ConfigSection::get_doubles(const std::string& key) const {
  const auto& e = entry(key);
  std::vector<double> out;
  for (const auto& token : split_list(e.value)) {
    const auto v = to_double(token);
    if (!v) fail_at(e.line, "'" + key + "' has a non-numeric element '" + token + "'");
    out.push_back(*v);
  }
  if (out.empty()) fail_at(e.line, "'" + key + "' is an empty list");
  return out;
}

std::vector<double> ConfigSection::get_doubles(const std::string& key, std::vector<double> fallback) const {
  used_.insert(key);
  return has(key) ? get_doubles(key) : fallback;
}

std::vector<std::size_t> ConfigSection::get_sizes(const std::string& key) const {
  const auto& e = entry(key);
  std::vector<std::size_t> out;
  for (const auto& token : split_list(e.value)) {
    const auto v = to_u64(token);
    if (!v) fail_at(e.line, "'" + key + "' has a non-integer element '" + token + "'");
    out.push_back(static_cast<std::size_t>(*v));
  }
  if (out.empty()) fail_at(e.line, "'" + key + "' is an empty list");
  return out;
}

std::vector<std::size_t> ConfigSection::get_sizes(const std::string& key,
                                                  std::vector<std::size_t> fallback) const {
  used_.insert(key);
  return has(key) ? get_sizes(key) : fallback;
}

void ConfigSection::finish() const {
  for (const auto& e : entries_) {
    if (!used_.count(e.key)) fail_at(e.line, "unknown key '" + e.key + "'");
  }
}

ConfigFile ConfigFile::parse(const std::string& text, const std::string& source) {
  ConfigFile cfg;
  cfg.text_ = text;
  cfg.source_ = source;
  cfg.sections_.emplace_back(source, "", 0);
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string content = trim(strip_comment(raw));
    if (content.empty()) continue;
    if (content.front() == '[') {
      if (content.back() != ']') {
        throw ConfigError(source + ":" + std::to_string(line) + ": malformed section header");
      }
      const std::string name = trim(std::string_view(content).substr(1, content.size() - 2));
      if (name.empty()) throw ConfigError(source + ":" + std::to_string(line) + ": empty section name");
      if (cfg.has_section(name)) {
        throw ConfigError(source + ":" + std::to_string(line) + ": duplicate section [" + name + "]");
      }
      cfg.sections_.emplace_back(source, name, line);
      continue;
    }
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(line) + ": expected 'key = value'");
    }
    ConfigEntry e{trim(std::string_view(content).substr(0, eq)), trim(std::string_view(content).substr(eq + 1)), line};
    if (e.key.empty()) throw ConfigError(source + ":" + std::to_string(line) + ": empty key");
    cfg.sections_.back().add(std::move(e));
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

bool ConfigFile::has_section(const std::string& name) const {
  return std::any_of(sections_.begin() + 1, sections_.end(), [&](const auto& s) { return s.name() == name; });
}

const ConfigSection& ConfigFile::section(const std::string& name) const {
  for (std::size_t i = 1; i < sections_.size(); ++i) {
    if (sections_[i].name() == name) return sections_[i];
  }
  throw ConfigError(source_ + ": missing required section [" + name + "]");
}

MeasureSpec parse_measure(const ConfigSection& s) {
  MeasureSpec spec;
  const std::size_t dim = s.get_size("dim");
  if (dim < 2 || dim > 64) s.fail("dim", "must lie in [2, 64]");
  spec.dim = static_cast<int>(dim);
  const std::string family = s.get_string("family");
  try {
    if (family == "finite_support") {
      const auto matrices = s.all("matrix");
      const auto weights = s.all("weight");
      if (matrices.empty()) s.fail("matrix", "finite_support needs at least one 'matrix' line");
      if (weights.size() != matrices.size()) s.fail("weight", "one 'weight' line per 'matrix' line is required");
      FiniteSupport fs;
      for (std::size_t i = 0; i < matrices.size(); ++i) {
        std::vector<double> entries;
        for (const auto& token : split_list(matrices[i]->value)) {
          const auto v = to_double(token);
          if (!v) s.fail_at(matrices[i]->line, "matrix entry '" + token + "' is not a number");
          entries.push_back(*v);
        }
        if (entries.size() != dim * dim) {
          s.fail_at(matrices[i]->line, "matrix needs " + std::to_string(dim * dim) + " row-major entries");
        }
        try {
          fs.matrices.push_back(SquareMatrix::from_row_major(spec.dim, entries));
        } catch (const Error& e) {
          s.fail_at(matrices[i]->line, e.what());
        }
        const auto w = to_double(weights[i]->value);
        if (!w) s.fail_at(weights[i]->line, "weight must be a number");
        fs.weights.push_back(*w);
      }
      spec.family = std::move(fs);
    } else if (family == "scaled_rotation") {
      ScaledRotation sr;
      const std::string law = s.get_string("log_scale", "discrete");
      if (law == "discrete") {
        DiscreteLogScale d;
        d.values = s.get_doubles("log_scale_values");
        d.weights = s.get_doubles("log_scale_weights",
                                  std::vector<double>(d.values.size(), 1.0 / static_cast<double>(d.values.size())));
        sr.log_scale = d;
      } else if (law == "normal") {
        sr.log_scale = NormalLogScale{s.get_double("log_scale_mean", 0.0), s.get_double("log_scale_sd", 1.0)};
      } else {
        s.fail("log_scale", "must be 'discrete' or 'normal'");
      }
      sr.uniform_rotation = s.get_bool("uniform_rotation", true);
      sr.angle = s.get_double("angle", 0.0);
      spec.family = sr;
    } else if (family == "heavy_tailed") {
      spec.family = HeavyTailedConjugatedDiagonal{s.get_double("tail_index"), s.get_bool("randomize_rotations", true)};
    } else if (family == "gaussian_entries") {
      spec.family = GaussianEntries{s.get_double("entry_std", 1.0)};
    } else {
      s.fail("family", "must be one of finite_support, scaled_rotation, heavy_tailed, gaussian_entries");
    }
    spec.validate();
  } catch (const InvariantError& e) {
    s.fail_at(s.line(), std::string("invalid measure: ") + e.what());
  }
  s.finish();
  return spec;
}

BnSpec parse_bn(const ConfigSection& s) {
  const bool power = s.has("bn_alpha");
  const bool table = s.has("bn_table");
  if (power == table) s.fail("bn_alpha", "give exactly one of bn_alpha and bn_table");
  try {
    return power ? BnSpec::power(s.get_double("bn_alpha")) : BnSpec::table(s.get_doubles("bn_table"));
  } catch (const InvariantError& e) {
    s.fail(power ? "bn_alpha" : "bn_table", e.what());
  }
}

}  // namespace gllab::cli

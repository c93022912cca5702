#include "wgqed/model.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

namespace wgqed {

double SystemConfig::probe_rabi() const {
  return std::sqrt(gamma_1d / 2.0) * probe_amp;
}

double SystemConfig::default_probe(double gamma_1d) {
  return 1e-4 * std::sqrt(gamma_1d / 2.0);
}

SystemConfig SystemConfig::reference() {
  SystemConfig c;
  c.gamma_1d = 2.0;
  c.omega_c = 2.0;
  c.kd = std::numbers::pi / 2.0;
  c.n_atoms = 10;
  c.n_sites = 200;
  c.probe_amp = default_probe(c.gamma_1d);
  return c;
}

namespace {

void require_nonnegative(std::vector<Diagnostic>& out, const char* key, double value) {
  if (!std::isfinite(value)) {
    out.push_back({Diagnostic::Severity::error, key, std::string(key) + " is not finite"});
  } else if (value < 0.0) {
    out.push_back({Diagnostic::Severity::error, key, std::string(key) + " must be nonnegative"});
  }
}

}  // namespace

std::vector<Diagnostic> validate(const SystemConfig& c) {
  using Severity = Diagnostic::Severity;
  std::vector<Diagnostic> out;

  for (auto [key, value] : {std::pair{"delta", c.delta}, std::pair{"delta_c", c.delta_c}}) {
    if (!std::isfinite(value)) out.push_back({Severity::error, key, std::string(key) + " is not finite"});
  }
  require_nonnegative(out, "omega_c", c.omega_c);
  require_nonnegative(out, "gamma_1d", c.gamma_1d);
  require_nonnegative(out, "gamma_e", c.gamma_e);
  require_nonnegative(out, "gamma_p", c.gamma_p);
  require_nonnegative(out, "gamma_d", c.gamma_d);
  require_nonnegative(out, "sigma_ih", c.sigma_ih);

  if (!(c.probe_amp > 0.0) || !std::isfinite(c.probe_amp)) {
    out.push_back({Severity::error, "probe_amp", "probe_amp must be positive"});
  }
  if (!(c.kd >= 0.0 && c.kd < 2.0 * std::numbers::pi)) {
    out.push_back({Severity::error, "kd", "kd must lie in [0, 2*pi)"});
  }
  if (c.n_atoms < 1) out.push_back({Severity::error, "n_atoms", "n_atoms must be positive"});
  if (c.n_sites < 1) out.push_back({Severity::error, "n_sites", "n_sites must be positive"});
  if (c.n_atoms > c.n_sites) {
    out.push_back({Severity::error, "n_atoms", "n exceeds N (n_atoms > n_sites)"});
  }

  if (c.probe_amp > 0.0 && c.gamma_1d >= 0.0 && c.gamma_e >= 0.0) {
    const double ratio = c.probe_rabi() / c.gamma_e;
    if (!(ratio <= kWeakProbeThreshold)) {
      std::ostringstream msg;
      msg << "probe is not weak: sqrt(gamma_1d/2)*probe_amp/gamma_e = " << ratio
          << " > " << kWeakProbeThreshold;
      out.push_back({Severity::warning, "probe_amp", msg.str()});
    }
  }
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics) {
    if (d.severity == Diagnostic::Severity::error) return true;
  }
  return false;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("invalid number for " + key + ": '" + text + "'");
  }
  return value;
}

int parse_int(const std::string& key, const std::string& text) {
  int value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("invalid integer for " + key + ": '" + text + "'");
  }
  return value;
}

}  // namespace

SystemConfig parse_config(std::istream& in) {
  std::map<std::string, std::string> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
    }
    if (!entries.emplace(key, value).second) {
      throw ConfigError("duplicate key '" + key + "'");
    }
  }

  SystemConfig c;
  c.gamma_e = 0.0;
  auto take = [&](const std::string& key, bool required) -> std::optional<std::string> {
    auto it = entries.find(key);
    if (it == entries.end()) {
      if (required) throw ConfigError("missing required key '" + key + "'");
      return std::nullopt;
    }
    auto v = it->second;
    entries.erase(it);
    return v;
  };
  auto real = [&](const char* key, double& field, bool required) {
    if (auto v = take(key, required)) field = parse_double(key, *v);
  };

  real("delta", c.delta, true);
  real("delta_c", c.delta_c, true);
  real("omega_c", c.omega_c, true);
  real("gamma_1d", c.gamma_1d, true);
  real("gamma_e", c.gamma_e, true);
  real("gamma_p", c.gamma_p, false);
  real("gamma_d", c.gamma_d, false);
  real("probe_amp", c.probe_amp, true);
  real("kd", c.kd, true);
  c.n_atoms = parse_int("n_atoms", *take("n_atoms", true));
  c.n_sites = parse_int("n_sites", *take("n_sites", true));
  real("sigma_ih", c.sigma_ih, false);

  if (!entries.empty()) {
    throw ConfigError("unknown key '" + entries.begin()->first + "'");
  }
  return c;
}

SystemConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string format_config(const SystemConfig& c) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "delta = " << c.delta << '\n'
      << "delta_c = " << c.delta_c << '\n'
      << "omega_c = " << c.omega_c << '\n'
      << "gamma_1d = " << c.gamma_1d << '\n'
      << "gamma_e = " << c.gamma_e << '\n'
      << "gamma_p = " << c.gamma_p << '\n'
      << "gamma_d = " << c.gamma_d << '\n'
      << "probe_amp = " << c.probe_amp << '\n'
      << "kd = " << c.kd << '\n'
      << "n_atoms = " << c.n_atoms << '\n'
      << "n_sites = " << c.n_sites << '\n'
      << "sigma_ih = " << c.sigma_ih << '\n';
  return out.str();
}

AtomPlacement::AtomPlacement(std::vector<int> sites) : sites_(std::move(sites)) {
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    if (sites_[i] < 0) throw ConfigError("negative lattice site");
    if (i > 0 && sites_[i] <= sites_[i - 1]) {
      throw ConfigError("lattice sites must be strictly increasing");
    }
  }
}

AtomPlacement AtomPlacement::contiguous(int n) {
  std::vector<int> sites(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) sites[static_cast<std::size_t>(j)] = j;
  return AtomPlacement(std::move(sites));
}

AtomPlacement AtomPlacement::shifted(int offset) const {
  auto sites = sites_;
  for (auto& s : sites) s += offset;
  return AtomPlacement(std::move(sites));
}

}  // namespace wgqed

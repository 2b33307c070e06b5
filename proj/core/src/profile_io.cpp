#include "nvss/profile_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace nvss {

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s, int line) {
  double v;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ConfigError(line, "expected a number, got '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s, int line) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError(line, "expected true/false, got '" + s + "'");
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct IniEntry {
  std::string section, key, value;
  int line;
};

std::vector<IniEntry> parse_ini(const std::string& text) {
  std::vector<IniEntry> out;
  std::istringstream is(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw ConfigError(line, "unterminated section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) throw ConfigError(line, "empty section name");
      out.push_back({section, "", "", line});  // marker so empty sections are seen
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError(line, "expected key = value");
    std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
    if (key.empty()) throw ConfigError(line, "empty key");
    if (section.empty())
      throw ConfigError(line, "key outside any [section]");
    out.push_back({section, key, value, line});
  }
  return out;
}

std::vector<double> parse_list(const std::string& s, int line) {
  // either comma-separated values or a linspace start:stop:count
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    std::istringstream is(s);
    std::string a, b, c;
    if (!std::getline(is, a, ':') || !std::getline(is, b, ':') ||
        !std::getline(is, c))
      throw ConfigError(line, "expected start:stop:count");
    double start = parse_double(trim(a), line), stop = parse_double(trim(b), line);
    double cnt = parse_double(trim(c), line);
    int n = int(cnt);
    if (n < 1 || double(n) != cnt)
      throw ConfigError(line, "count must be a positive integer");
    for (int i = 0; i < n; ++i)
      out.push_back(n == 1 ? start : start + (stop - start) * i / (n - 1));
    return out;
  }
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(parse_double(trim(tok), line));
  if (out.empty()) throw ConfigError(line, "empty list");
  return out;
}

std::string join_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += format_double(v[i]);
  }
  return out;
}

}  // namespace

void RunConfig::validate() const {
  try {
    ansatz.validate();
    numerics.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(0, e.what());
  }
  for (const auto& [key, values] : scan) {
    if (key != "phi0" && key != "k" && key != "mu" && key != "E0")
      throw ConfigError(0, "unknown scan parameter '" + key + "'");
    if (values.empty())
      throw ConfigError(0, "empty scan range for '" + key + "'");
  }
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  for (const IniEntry& e : parse_ini(text)) {
    const std::string& s = e.section;
    const std::string& k = e.key;
    const std::string& v = e.value;
    if (k.empty()) {  // section header marker
      if (s != "ansatz" && s != "solver" && s != "output" && s != "scan")
        throw ConfigError(e.line, "unknown section [" + s + "]");
      continue;
    }
    if (s == "ansatz") {
      if (k == "variant")
        try {
          cfg.ansatz.variant = psi_variant_from_string(v);
        } catch (const std::invalid_argument& ex) {
          throw ConfigError(e.line, ex.what());
        }
      else if (k == "k") cfg.ansatz.k = parse_double(v, e.line);
      else if (k == "mu") cfg.ansatz.mu = parse_double(v, e.line);
      else if (k == "E0") cfg.ansatz.E0 = parse_double(v, e.line);
      else if (k == "amplitude") cfg.ansatz.amplitude = parse_double(v, e.line);
      else if (k == "psi_energies") cfg.ansatz.psi_energies = parse_list(v, e.line);
      else if (k == "psi_values") cfg.ansatz.psi_values = parse_list(v, e.line);
      else throw ConfigError(e.line, "unknown key '" + k + "' in [ansatz]");
    } else if (s == "solver") {
      if (k == "phi0") cfg.phi0 = parse_double(v, e.line);
      else if (k == "seed_interval") cfg.numerics.seed_interval = parse_double(v, e.line);
      else if (k == "picard_tolerance") cfg.numerics.picard_tolerance = parse_double(v, e.line);
      else if (k == "ode_abs_tol") cfg.numerics.ode_abs_tol = parse_double(v, e.line);
      else if (k == "ode_rel_tol") cfg.numerics.ode_rel_tol = parse_double(v, e.line);
      else if (k == "max_radius") cfg.numerics.max_radius = parse_double(v, e.line);
      else if (k == "radius_tolerance") cfg.numerics.radius_tolerance = parse_double(v, e.line);
      else if (k == "controller") {
        if (v == "pi") cfg.numerics.controller = StepController::PI;
        else if (v == "i") cfg.numerics.controller = StepController::I;
        else throw ConfigError(e.line, "controller must be 'pi' or 'i'");
      } else throw ConfigError(e.line, "unknown key '" + k + "' in [solver]");
    } else if (s == "output") {
      if (k == "profile") cfg.profile_path = v;
      else if (k == "summary") cfg.summary_path = v;
      else if (k == "atlas") cfg.atlas_path = v;
      else if (k == "mass_includes_4pi") cfg.flags.mass_includes_4pi = parse_bool(v, e.line);
      else if (k == "asymptotically_flatten") cfg.flags.asymptotically_flatten = parse_bool(v, e.line);
      else if (k == "emit_diagnostics") cfg.flags.emit_diagnostics = parse_bool(v, e.line);
      else if (k == "emit_orbits") {
        double d = parse_double(v, e.line);
        if (d < 0 || d != std::floor(d))
          throw ConfigError(e.line, "emit_orbits must be a non-negative integer");
        cfg.flags.emit_orbits = int(d);
      } else throw ConfigError(e.line, "unknown key '" + k + "' in [output]");
    } else if (s == "scan") {
      if (k != "phi0" && k != "k" && k != "mu" && k != "E0")
        throw ConfigError(e.line, "unknown scan parameter '" + k + "'");
      cfg.scan[k] = parse_list(v, e.line);
    } else {
      throw ConfigError(e.line, "unknown section [" + s + "]");
    }
  }
  cfg.validate();
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "[ansatz]\n";
  os << "variant = " << to_string(cfg.ansatz.variant) << "\n";
  os << "k = " << format_double(cfg.ansatz.k) << "\n";
  os << "mu = " << format_double(cfg.ansatz.mu) << "\n";
  os << "E0 = " << format_double(cfg.ansatz.E0) << "\n";
  os << "amplitude = " << format_double(cfg.ansatz.amplitude) << "\n";
  if (!cfg.ansatz.psi_energies.empty()) {
    os << "psi_energies = " << join_list(cfg.ansatz.psi_energies) << "\n";
    os << "psi_values = " << join_list(cfg.ansatz.psi_values) << "\n";
  }
  os << "\n[solver]\n";
  os << "phi0 = " << format_double(cfg.phi0) << "\n";
  os << "seed_interval = " << format_double(cfg.numerics.seed_interval) << "\n";
  os << "picard_tolerance = " << format_double(cfg.numerics.picard_tolerance) << "\n";
  os << "ode_abs_tol = " << format_double(cfg.numerics.ode_abs_tol) << "\n";
  os << "ode_rel_tol = " << format_double(cfg.numerics.ode_rel_tol) << "\n";
  os << "max_radius = " << format_double(cfg.numerics.max_radius) << "\n";
  os << "radius_tolerance = " << format_double(cfg.numerics.radius_tolerance) << "\n";
  os << "controller = "
     << (cfg.numerics.controller == StepController::PI ? "pi" : "i") << "\n";
  os << "\n[output]\n";
  os << "profile = " << cfg.profile_path << "\n";
  os << "summary = " << cfg.summary_path << "\n";
  os << "atlas = " << cfg.atlas_path << "\n";
  os << "mass_includes_4pi = " << (cfg.flags.mass_includes_4pi ? "true" : "false") << "\n";
  os << "asymptotically_flatten = "
     << (cfg.flags.asymptotically_flatten ? "true" : "false") << "\n";
  os << "emit_diagnostics = " << (cfg.flags.emit_diagnostics ? "true" : "false") << "\n";
  os << "emit_orbits = " << cfg.flags.emit_orbits << "\n";
  if (!cfg.scan.empty()) {
    os << "\n[scan]\n";
    for (const auto& [key, values] : cfg.scan)
      os << key << " = " << join_list(values) << "\n";
  }
  return os.str();
}

void write_profile_csv(std::ostream& os, const RadialProfile& profile,
                       const ObservableProfile& obs,
                       const FiniteRadiusDiagnostics* diag) {
  os << "r,phi,dphi,rho,P,PT,source,mass_cum,eta,x,y,alpha,beta\n";
  for (std::size_t i = 0; i < profile.size(); ++i) {
    os << format_double(profile.grid[i]) << ',' << format_double(profile.phi[i])
       << ',' << format_double(profile.dphi[i]) << ','
       << format_double(obs.rho[i]) << ',' << format_double(obs.pressure[i])
       << ',' << format_double(obs.pressure_t[i]) << ','
       << format_double(obs.source[i]) << ','
       << format_double(obs.mass_cumulative[i]);
    if (diag && i < diag->eta.size() && diag->valid[i]) {
      os << ',' << format_double(diag->eta[i]) << ','
         << format_double(diag->x[i]) << ',' << format_double(diag->y[i])
         << ',' << format_double(diag->alpha[i]) << ','
         << format_double(diag->beta[i]);
    } else {
      os << ",,,,,";
    }
    os << '\n';
  }
}

StoredProfile read_profile_csv(std::istream& is) {
  std::string header;
  if (!std::getline(is, header))
    throw ConfigError(1, "empty profile file");
  if (trim(header) != "r,phi,dphi,rho,P,PT,source,mass_cum,eta,x,y,alpha,beta")
    throw ConfigError(1, "unexpected profile header");
  StoredProfile p;
  std::string raw;
  int line = 1;
  while (std::getline(is, raw)) {
    ++line;
    if (trim(raw).empty()) continue;
    std::vector<std::string> f;
    std::string tok;
    std::istringstream ls(raw);
    while (std::getline(ls, tok, ',')) f.push_back(trim(tok));
    if (f.size() < 8 || f.size() > 13)
      throw ConfigError(line, "expected 13 fields");
    while (f.size() < 13) f.push_back("");  // getline drops trailing empties
    p.r.push_back(parse_double(f[0], line));
    p.phi.push_back(parse_double(f[1], line));
    p.dphi.push_back(parse_double(f[2], line));
    p.rho.push_back(parse_double(f[3], line));
    p.P.push_back(parse_double(f[4], line));
    p.PT.push_back(parse_double(f[5], line));
    p.source.push_back(parse_double(f[6], line));
    p.mass_cum.push_back(parse_double(f[7], line));
    auto opt = [&](const std::string& s) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return parse_double(s, line);
    };
    p.eta.push_back(opt(f[8]));
    p.x.push_back(opt(f[9]));
    p.y.push_back(opt(f[10]));
    p.alpha.push_back(opt(f[11]));
    p.beta.push_back(opt(f[12]));
  }
  if (p.r.empty()) throw ConfigError(1, "profile has no data rows");
  return p;
}

void write_summary(std::ostream& os, const SummaryDocument& doc) {
  // Reuses the config syntax so `verify` can rebuild the run parameters.
  os << serialize_config(doc.config);
  os << "\n[run]\n";
  os << "delta = " << format_double(doc.delta) << "\n";
  os << "h_nominal = " << format_double(doc.h_nominal) << "\n";
  os << "stop = " << doc.stop_reason << "\n";
  if (doc.exterior) {
    os << "exterior_R = " << format_double(doc.exterior->R) << "\n";
    os << "exterior_C = " << format_double(doc.exterior->C) << "\n";
    os << "exterior_phi_inf = " << format_double(doc.exterior->phi_inf) << "\n";
  }
  os << "\n[result]\n";
  if (doc.summary.R) os << "R = " << format_double(*doc.summary.R) << "\n";
  os << "M = " << format_double(doc.summary.M) << "\n";
  os << "energy_total = " << format_double(doc.summary.energy_total) << "\n";
  os << "particle_number = " << format_double(doc.summary.particle_number) << "\n";
  os << "phi0 = " << format_double(doc.summary.phi0) << "\n";
  if (doc.summary.phi_inf)
    os << "phi_inf = " << format_double(*doc.summary.phi_inf) << "\n";
  os << "finite_radius_detected = "
     << (doc.summary.finite_radius_detected ? "true" : "false") << "\n";
  os << "window_ok = " << (doc.summary.window_ok ? "true" : "false") << "\n";
  os << "alpha0 = " << format_double(doc.summary.alpha0) << "\n";
  os << "beta0 = " << format_double(doc.summary.beta0) << "\n";
  os << "alpha0_measured = " << format_double(doc.alpha0_measured) << "\n";
  os << "beta0_measured = " << format_double(doc.beta0_measured) << "\n";
  os << "\n[residuals]\n";
  os << "max_field = " << format_double(doc.max_field_residual) << "\n";
  os << "max_tov = " << format_double(doc.max_tov_residual) << "\n";
  os << "max_xy = " << format_double(doc.max_xy_residual) << "\n";
}

SummaryDocument read_summary(std::istream& is) {
  std::ostringstream buf;
  buf << is.rdbuf();
  SummaryDocument doc;
  std::string config_part, rest_part;
  // Split: config sections go through parse_config; [run]/[result]/[residuals]
  // are handled here.
  std::istringstream all(buf.str());
  std::string raw;
  bool in_extra = false;
  while (std::getline(all, raw)) {
    std::string t = trim(raw);
    if (t == "[run]" || t == "[result]" || t == "[residuals]") in_extra = true;
    (in_extra ? rest_part : config_part) += raw + "\n";
  }
  doc.config = parse_config(config_part);
  ExteriorField ext;
  bool has_ext = false;
  for (const IniEntry& e : parse_ini(rest_part)) {
    const std::string& s = e.section;
    const std::string& k = e.key;
    const std::string& v = e.value;
    if (k.empty()) {  // section header marker
      if (s != "run" && s != "result" && s != "residuals")
        throw ConfigError(e.line, "unknown section [" + s + "]");
      continue;
    }
    if (s == "run") {
      if (k == "delta") doc.delta = parse_double(v, e.line);
      else if (k == "h_nominal") doc.h_nominal = parse_double(v, e.line);
      else if (k == "stop") doc.stop_reason = v;
      else if (k == "exterior_R") { ext.R = parse_double(v, e.line); has_ext = true; }
      else if (k == "exterior_C") { ext.C = parse_double(v, e.line); has_ext = true; }
      else if (k == "exterior_phi_inf") { ext.phi_inf = parse_double(v, e.line); has_ext = true; }
      else throw ConfigError(e.line, "unknown key '" + k + "' in [run]");
    } else if (s == "result") {
      if (k == "R") doc.summary.R = parse_double(v, e.line);
      else if (k == "M") doc.summary.M = parse_double(v, e.line);
      else if (k == "energy_total") doc.summary.energy_total = parse_double(v, e.line);
      else if (k == "particle_number") doc.summary.particle_number = parse_double(v, e.line);
      else if (k == "phi0") doc.summary.phi0 = parse_double(v, e.line);
      else if (k == "phi_inf") doc.summary.phi_inf = parse_double(v, e.line);
      else if (k == "finite_radius_detected") doc.summary.finite_radius_detected = parse_bool(v, e.line);
      else if (k == "window_ok") doc.summary.window_ok = parse_bool(v, e.line);
      else if (k == "alpha0") doc.summary.alpha0 = parse_double(v, e.line);
      else if (k == "beta0") doc.summary.beta0 = parse_double(v, e.line);
      else if (k == "alpha0_measured") doc.alpha0_measured = parse_double(v, e.line);
      else if (k == "beta0_measured") doc.beta0_measured = parse_double(v, e.line);
      else throw ConfigError(e.line, "unknown key '" + k + "' in [result]");
    } else if (s == "residuals") {
      if (k == "max_field") doc.max_field_residual = parse_double(v, e.line);
      else if (k == "max_tov") doc.max_tov_residual = parse_double(v, e.line);
      else if (k == "max_xy") doc.max_xy_residual = parse_double(v, e.line);
      else throw ConfigError(e.line, "unknown key '" + k + "' in [residuals]");
    } else {
      throw ConfigError(e.line, "unknown section [" + s + "]");
    }
  }
  if (has_ext) doc.exterior = ext;
  return doc;
}

}  // namespace nvss

#include "fos/config.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "fos/errors.hpp"

namespace fos {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

struct KvMap {
  std::map<std::string, std::string> entries;  // "section.key" -> value
  mutable std::map<std::string, bool> used;

  std::optional<std::string> get(const std::string& key) const {
    const auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    used[key] = true;
    return it->second;
  }

  double get_double(const std::string& key, std::optional<double> fallback = {}) const {
    const auto v = get(key);
    if (!v) {
      if (fallback) return *fallback;
      throw ConfigError("config: missing required key '" + key + "'");
    }
    try {
      std::size_t pos = 0;
      const double x = std::stod(*v, &pos);
      if (pos != v->size()) throw std::invalid_argument("");
      return x;
    } catch (...) {
      throw ConfigError("config: key '" + key + "' is not a number: '" + *v + "'");
    }
  }

  long get_long(const std::string& key, std::optional<long> fallback = {}) const {
    const double x = get_double(key, fallback ? std::optional<double>(*fallback) : std::nullopt);
    if (x != std::floor(x)) throw ConfigError("config: key '" + key + "' must be an integer");
    return static_cast<long>(x);
  }

  bool get_bool(const std::string& key, bool fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ConfigError("config: key '" + key + "' must be a boolean");
  }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    const auto v = get(key);
    return v ? *v : fallback;
  }

  // one value per axis; a single value is replicated
  std::array<double, 2> get_axes(const std::string& key, int dim) const {
    const auto v = get(key);
    if (!v) throw ConfigError("config: missing required key '" + key + "'");
    std::string text = *v;
    for (auto& c : text) {
      if (c == ',') c = ' ';
    }
    std::istringstream is(text);
    std::array<double, 2> out{0.0, 0.0};
    int n = 0;
    double x;
    while (is >> x) {
      if (n < 2) out[static_cast<std::size_t>(n)] = x;
      ++n;
    }
    if (n == 1) {
      out[1] = out[0];
    } else if (n != dim) {
      throw ConfigError("config: key '" + key + "' needs " + std::to_string(dim) + " value(s)");
    }
    return out;
  }
};

KvMap read_kv(std::istream& is) {
  KvMap kv;
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config: line " + std::to_string(lineno) + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config: line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || section.empty()) {
      throw ConfigError("config: line " + std::to_string(lineno) + ": key outside a section");
    }
    kv.entries[section + "." + key] = value;
  }
  return kv;
}

}  // namespace

RunConfig parse_config(std::istream& is) {
  const KvMap kv = read_kv(is);
  RunConfig cfg;

  cfg.nf_kind = kv.get_string("nfunction.kind", "power_normalized");
  cfg.nf_p = kv.get_double("nfunction.p", 2.0);
  if (const auto v = kv.get("nfunction.index_override_lower")) {
    cfg.index_override_lower = kv.get_double("nfunction.index_override_lower");
  }
  if (const auto v = kv.get("nfunction.index_override_upper")) {
    cfg.index_override_upper = kv.get_double("nfunction.index_override_upper");
  }

  cfg.dim = static_cast<int>(kv.get_long("domain.dim", 1));
  if (cfg.dim != 1 && cfg.dim != 2) throw ConfigError("config: domain.dim must be 1 or 2");
  cfg.box = Box{cfg.dim, kv.get_axes("domain.box_lo", cfg.dim), kv.get_axes("domain.box_hi", cfg.dim)};
  cfg.omega =
      Box{cfg.dim, kv.get_axes("domain.omega_lo", cfg.dim), kv.get_axes("domain.omega_hi", cfg.dim)};
  if (kv.get("domain.omega0_lo") || kv.get("domain.omega0_hi")) {
    cfg.omega0 = Box{cfg.dim, kv.get_axes("domain.omega0_lo", cfg.dim),
                     kv.get_axes("domain.omega0_hi", cfg.dim)};
    cfg.has_omega0 = true;
  } else {
    cfg.omega0 = cfg.omega;
  }
  cfg.h = kv.get_double("domain.h");
  cfg.s = kv.get_double("domain.s", 0.5);
  if (!(cfg.s > 0.0 && cfg.s < 1.0)) throw ConfigError("config: domain.s must lie in (0,1)");
  if (kv.get("domain.ball_center") || kv.get("domain.ball_radius")) {
    Ball b;
    b.dim = cfg.dim;
    b.center = kv.get_axes("domain.ball_center", cfg.dim);
    b.radius = kv.get_double("domain.ball_radius");
    if (!(b.radius > 0.0)) throw ConfigError("config: ball_radius must be positive");
    cfg.ball = b;
  }

  cfg.nl_form = kv.get_string("nonlinearity.form", "pure_power");
  cfg.theta1 = kv.get_double("nonlinearity.theta1", 1.0);
  cfg.theta2 = kv.get_double("nonlinearity.theta2", 1.0);
  cfg.q = kv.get_double("nonlinearity.q", 1.5);
  cfg.eps = kv.get_double("nonlinearity.eps", 0.1);
  if (!(cfg.q > 1.0)) throw ConfigError("config: nonlinearity.q must exceed 1");

  cfg.solver.grad_tol = kv.get_double("solver.grad_tol", 1e-6);
  cfg.solver.max_iters = kv.get_long("solver.max_iters", 200000);
  cfg.solver.armijo_c = kv.get_double("solver.armijo_c", 1e-4);
  cfg.solver.armijo_shrink = kv.get_double("solver.armijo_shrink", 0.5);
  const long kmax = kv.get_long("solver.seed_scan_kmax", 20);
  cfg.solver.seed_scan.clear();
  for (long k = 0; k <= kmax; ++k) {
    cfg.solver.seed_scan.push_back(std::ldexp(1.0, static_cast<int>(-k)));
  }
  cfg.solver.lambda1_restarts = static_cast<int>(kv.get_long("solver.lambda1_restarts", 20));
  cfg.solver.lambda1_max_iters = kv.get_long("solver.lambda1_max_iters", 2000);
  if (!(cfg.solver.grad_tol > 0.0 && cfg.solver.max_iters > 0 && cfg.solver.armijo_c > 0.0 &&
        cfg.solver.armijo_c < 1.0 && cfg.solver.armijo_shrink > 0.0 &&
        cfg.solver.armijo_shrink < 1.0)) {
    throw ConfigError("config: solver parameters out of range");
  }

  cfg.seed = static_cast<std::uint64_t>(kv.get_long("run.seed", 1));
  cfg.deterministic = kv.get_bool("run.deterministic", true);
  cfg.threads = static_cast<int>(kv.get_long("run.threads", 1));
  if (cfg.threads < 1 || cfg.threads > 256) throw ConfigError("config: run.threads out of range");

  cfg.solver.rng_seed = cfg.seed;
  cfg.solver.deterministic_reduction = cfg.deterministic;
  cfg.solver.threads = cfg.threads;

  for (const auto& [key, value] : kv.entries) {
    if (!kv.used[key]) throw ConfigError("config: unknown key '" + key + "'");
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(is);
}

NFunction RunConfig::build_nfunction() const {
  NFunction nf = [&] {
    if (nf_kind == "power") return NFunction::power(nf_p);
    if (nf_kind == "power_normalized") return NFunction::power_normalized(nf_p);
    if (nf_kind == "power_log") return NFunction::power_log(nf_p);
    throw ConfigError("config: unknown nfunction kind '" + nf_kind + "'");
  }();
  if (index_override_lower || index_override_upper) {
    const double lo = index_override_lower.value_or(nf.p_lower());
    const double hi = index_override_upper.value_or(nf.p_upper());
    try {
      nf = nf.with_indices(lo, hi);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
  return nf;
}

std::shared_ptr<const GridDomain> RunConfig::build_grid() const {
  return GridDomain::build(dim, box, h, omega, omega0);
}

std::shared_ptr<const KernelTable> RunConfig::build_kernel(
    std::shared_ptr<const GridDomain> gd) const {
  try {
    return KernelTable::build(std::move(gd), s);
  } catch (const std::domain_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

Nonlinearity RunConfig::build_nonlinearity() const {
  try {
    if (nl_form == "pure_power") return Nonlinearity::pure_power(theta2, q, theta1);
    if (nl_form == "shifted_power") return Nonlinearity::shifted_power(theta1, theta2, q, eps);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  throw ConfigError("config: unknown nonlinearity form '" + nl_form + "'");
}

SolverConfig RunConfig::build_solver_config() const { return solver; }

void write_config_echo(std::ostream& os, const RunConfig& cfg) {
  auto axes = [&](const std::array<double, 2>& v) {
    std::ostringstream ss;
    ss << v[0];
    if (cfg.dim == 2) ss << " " << v[1];
    return ss.str();
  };
  os << "nfunction.kind=" << cfg.nf_kind << "\n"
     << "nfunction.p=" << cfg.nf_p << "\n"
     << "domain.dim=" << cfg.dim << "\n"
     << "domain.h=" << cfg.h << "\n"
     << "domain.s=" << cfg.s << "\n"
     << "domain.box=[" << axes(cfg.box.lo) << "][" << axes(cfg.box.hi) << "]\n"
     << "domain.omega=[" << axes(cfg.omega.lo) << "][" << axes(cfg.omega.hi) << "]\n"
     << "nonlinearity.form=" << cfg.nl_form << "\n"
     << "nonlinearity.theta1=" << cfg.theta1 << "\n"
     << "nonlinearity.theta2=" << cfg.theta2 << "\n"
     << "nonlinearity.q=" << cfg.q << "\n"
     << "solver.grad_tol=" << cfg.solver.grad_tol << "\n"
     << "solver.max_iters=" << cfg.solver.max_iters << "\n"
     << "run.seed=" << cfg.seed << "\n"
     << "run.deterministic=" << (cfg.deterministic ? "true" : "false") << "\n"
     << "run.threads=" << cfg.threads << "\n";
}

}  // namespace fos

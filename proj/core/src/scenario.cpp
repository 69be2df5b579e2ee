#include "qutrit/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace qutrit {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

std::vector<std::string> tokens(std::string value) {
  for (char& ch : value) {
    if (ch == ',' || ch == '(' || ch == ')') ch = ' ';
  }
  std::istringstream is(value);
  std::vector<std::string> out;
  for (std::string t; is >> t;) out.push_back(t);
  return out;
}

bool parse_real(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_complex(const std::string& tok, std::complex<double>& out) {
  if (tok.empty()) return false;
  if (tok.back() != 'i') {
    double re = 0.0;
    if (!parse_real(tok, re)) return false;
    out = {re, 0.0};
    return true;
  }
  const std::string body = tok.substr(0, tok.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  double re = 0.0;
  double im = 0.0;
  std::string im_part = split == std::string::npos ? body : body.substr(split);
  if (split != std::string::npos && !parse_real(body.substr(0, split), re)) return false;
  if (im_part == "+" || im_part.empty()) im_part = "1";
  if (im_part == "-") im_part = "-1";
  if (!parse_real(im_part, im)) return false;
  out = {re, im};
  return true;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string fmt_complex(std::complex<double> z) {
  if (z.imag() == 0.0) return fmt(z.real());
  std::string s = fmt(z.real());
  if (z.imag() >= 0.0) s += "+";
  return s + fmt(z.imag()) + "i";
}

ScenarioConfig base_51() {
  ScenarioConfig c;
  c.name = "5.1";
  c.params = SystemParams{1.0, 2.5, 1.0, 1.7, 0.5, 0.3};
  c.rho0 = diagonal_state(0.8, 0.0, 0.2);
  c.rho_target = diagonal_state(0.5, 0.3, 0.2);
  c.T = 0.5;
  c.N = 1000;
  c.bounds = ControlBounds::compact(50.0, 10.0);
  c.objective = ObjectiveKind::SquaredDistance;
  c.c0 = {1.0, 0.0, 0.0};
  c.method = Method::GPM3;
  c.gpm.alpha = 1.0;
  c.gpm.beta = 0.75;
  c.gpm.theta = 0.1;
  c.gpm.eps_stop = 1e-6;
  return c;
}

ScenarioConfig base_52() {
  ScenarioConfig c;
  c.name = "5.2a";
  c.params = SystemParams{1.0, 2.5, 1.0, 1.7, 0.5, 0.5};
  c.rho0 = diagonal_state(0.1, 0.2, 0.7);
  c.rho_target = diagonal_state(0.2, 0.7, 0.1);
  c.T = 0.5;
  c.N = 1000;
  c.bounds = ControlBounds::compact(50.0, 20.0);
  c.objective = ObjectiveKind::SquaredDistance;
  c.c0 = {0.5, 0.0, 0.0};
  c.method = Method::GPM3;
  c.gpm.alpha = 1.0;
  c.gpm.beta = 0.75;
  c.gpm.theta = 0.1;
  c.gpm.eps_stop = 1e-6;
  return c;
}

ScenarioConfig base_53() {
  ScenarioConfig c;
  c.name = "5.3";
  c.params = SystemParams{1.0, 2.5, 1.0, 1.7, 0.7, 0.7};
  c.rho0 = diagonal_state(0.5, 0.3, 0.2);
  c.rho_target = diagonal_state(0.3, 0.7, 0.0);
  c.T = 7.0;
  c.N = 1000;
  c.bounds = ControlBounds::compact(50.0, 10.0);
  c.objective = ObjectiveKind::Overlap;
  c.c0 = {0.5, 0.0, 0.0};
  c.method = Method::GPM3;
  c.gpm.alpha = 3.0;
  c.gpm.beta = 0.75;
  c.gpm.theta = 0.1;
  c.gpm.eps_stop = 1e-3;
  return c;
}

DensityMatrix parse_density(const std::string& key, const std::string& value, std::size_t line) {
  const std::vector<std::string> t = tokens(value);
  if (t.empty()) throw ConfigError("line " + std::to_string(line) + ": " + key + " is empty", line, key);
  const std::string kind = lower(t[0]);
  DensityMatrix rho = DensityMatrix::Zero();
  if (kind == "diag") {
    if (t.size() != 4) {
      throw ConfigError("line " + std::to_string(line) + ": " + key + " = diag needs 3 entries",
                        line, key);
    }
    for (int i = 0; i < 3; ++i) {
      double v = 0.0;
      if (!parse_real(t[static_cast<std::size_t>(i) + 1], v)) {
        throw ConfigError("line " + std::to_string(line) + ": bad number '" + t[i + 1] + "'", line, key);
      }
      rho(i, i) = v;
    }
  } else if (kind == "full") {
    if (t.size() != 10) {
      throw ConfigError("line " + std::to_string(line) + ": " + key +
                            " = full needs 9 row-major entries",
                        line, key);
    }
    for (int i = 0; i < 9; ++i) {
      std::complex<double> z;
      if (!parse_complex(t[static_cast<std::size_t>(i) + 1], z)) {
        throw ConfigError("line " + std::to_string(line) + ": bad complex entry '" + t[i + 1] + "'",
                          line, key);
      }
      rho(i / 3, i % 3) = z;
    }
  } else {
    throw ConfigError("line " + std::to_string(line) + ": " + key + " must start with 'diag' or 'full'",
                      line, key);
  }
  return rho;
}

}  // namespace

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& msg) {
    throw ConfigError("invalid " + field + ": " + msg, 0, field);
  };
  try {
    params.validate();
  } catch (const std::exception& e) {
    fail("params", e.what());
  }
  try {
    validate_density_matrix(rho0);
  } catch (const std::exception& e) {
    fail("rho0", e.what());
  }
  try {
    validate_density_matrix(rho_target);
  } catch (const std::exception& e) {
    fail("rho_target", e.what());
  }
  if (!(T > 0.0) || !std::isfinite(T)) fail("T", "must be positive");
  if (N == 0) fail("N", "must be at least 1");
  if (bounds.kind == BoundsKind::CompactBox) {
    if (!(bounds.mu > 0.0)) fail("mu", "must be positive");
    if (!(bounds.n_max > 0.0)) fail("n_max", "must be positive");
  }
  for (double v : c0) {
    if (!std::isfinite(v)) fail("c0", "entries must be finite");
  }
  if (!(gpm.alpha > 0.0)) fail("alpha", "must be positive");
  if (!(gpm.beta >= 0.0)) fail("beta", "must be nonnegative");
  if (!(gpm.theta >= 0.0)) fail("theta", "must be nonnegative");
  if (std::isnan(gpm.eps_stop)) fail("eps_stop", "must be a number");
  if (gpm.max_iters == 0) fail("max_iters", "must be at least 1");
  if (!(integrator.rel_tol > 0.0)) fail("rel_tol", "must be positive");
  if (!(integrator.abs_tol > 0.0)) fail("abs_tol", "must be positive");
  if (integrator.max_step && !(*integrator.max_step > 0.0)) fail("max_step", "must be positive");
  if (!(renyi_alpha > 0.0) || renyi_alpha == 1.0) fail("renyi_alpha", "must lie in (0,1) or (1,inf)");
  if (method == Method::RKM && objective != ObjectiveKind::Overlap) {
    fail("method", "rkm requires objective = J1");
  }
}

Objective ScenarioConfig::make_objective() const {
  return objective == ObjectiveKind::Overlap ? Objective::overlap(rho_target)
                                             : Objective::squared_distance(rho_target);
}

Problem ScenarioConfig::make_problem() const {
  validate();
  return Problem::make(params, rho0, make_objective(), bounds, integrator);
}

ControlGrid ScenarioConfig::initial_guess() const {
  return ControlGrid::constant(T, N, c0[0], c0[1], c0[2]);
}

std::vector<std::string> preset_names() {
  return {"5.1", "5.1-alpha5", "5.2a", "5.2b", "5.2-nmax4", "5.2-nmax2-T1", "5.3"};
}

ScenarioConfig preset(const std::string& name) {
  if (name == "5.1") return base_51();
  if (name == "5.1-alpha5") {
    ScenarioConfig c = base_51();
    c.name = name;
    c.gpm.alpha = 5.0;
    return c;
  }
  if (name == "5.2a") return base_52();
  if (name == "5.2b") {
    ScenarioConfig c = base_52();
    c.name = name;
    c.c0 = {2.0, 0.0, 0.0};
    return c;
  }
  if (name == "5.2-nmax4") {
    ScenarioConfig c = base_52();
    c.name = name;
    c.c0 = {2.0, 0.0, 0.0};
    c.bounds.n_max = 4.0;
    return c;
  }
  if (name == "5.2-nmax2-T1") {
    ScenarioConfig c = base_52();
    c.name = name;
    c.c0 = {2.0, 0.0, 0.0};
    c.bounds.n_max = 2.0;
    c.T = 1.0;
    c.gpm.beta = 0.85;
    return c;
  }
  if (name == "5.3") return base_53();
  throw ConfigError("unknown preset '" + name + "'", 0, "preset");
}

ScenarioConfig parse_config(std::istream& in) {
  struct Entry {
    std::string value;
    std::size_t line;
  };
  std::vector<std::pair<std::string, Entry>> entries;
  std::map<std::string, std::size_t> seen;

  std::string raw;
  for (std::size_t line = 1; std::getline(in, raw); ++line) {
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line) + ": expected 'key = value'", line);
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(line) + ": missing key", line);
    if (value.empty()) {
      throw ConfigError("line " + std::to_string(line) + ": missing value for " + key, line, key);
    }
    if (auto it = seen.find(key); it != seen.end()) {
      throw ConfigError("line " + std::to_string(line) + ": duplicate key " + key +
                            " (first set on line " + std::to_string(it->second) + ")",
                        line, key);
    }
    seen[key] = line;
    entries.push_back({key, {value, line}});
  }

  ScenarioConfig cfg;
  for (const auto& [key, e] : entries) {
    if (key == "preset") {
      try {
        cfg = preset(e.value);
      } catch (const ConfigError&) {
        throw ConfigError("line " + std::to_string(e.line) + ": unknown preset '" + e.value + "'",
                          e.line, key);
      }
    }
  }

  auto number = [](const std::string& key, const Entry& e) {
    double v = 0.0;
    if (!parse_real(e.value, v)) {
      throw ConfigError("line " + std::to_string(e.line) + ": " + key + " expects a number, got '" +
                            e.value + "'",
                        e.line, key);
    }
    return v;
  };
  auto count = [&number](const std::string& key, const Entry& e) {
    const double v = number(key, e);
    if (v < 0.0 || v != std::floor(v)) {
      throw ConfigError("line " + std::to_string(e.line) + ": " + key + " expects a nonnegative integer",
                        e.line, key);
    }
    return static_cast<std::size_t>(v);
  };

  using Setter = std::function<void(const std::string&, const Entry&)>;
  const std::map<std::string, Setter> setters{
      {"preset", [](const std::string&, const Entry&) {}},
      {"name", [&](const std::string&, const Entry& e) { cfg.name = e.value; }},
      {"E2", [&](const std::string& k, const Entry& e) { cfg.params.E2 = number(k, e); }},
      {"E3", [&](const std::string& k, const Entry& e) { cfg.params.E3 = number(k, e); }},
      {"V13", [&](const std::string& k, const Entry& e) { cfg.params.V13 = number(k, e); }},
      {"V23", [&](const std::string& k, const Entry& e) { cfg.params.V23 = number(k, e); }},
      {"C13", [&](const std::string& k, const Entry& e) { cfg.params.C13 = number(k, e); }},
      {"C23", [&](const std::string& k, const Entry& e) { cfg.params.C23 = number(k, e); }},
      {"rho0", [&](const std::string& k, const Entry& e) { cfg.rho0 = parse_density(k, e.value, e.line); }},
      {"rho_target",
       [&](const std::string& k, const Entry& e) { cfg.rho_target = parse_density(k, e.value, e.line); }},
      {"T", [&](const std::string& k, const Entry& e) { cfg.T = number(k, e); }},
      {"N", [&](const std::string& k, const Entry& e) { cfg.N = count(k, e); }},
      {"bounds",
       [&](const std::string& k, const Entry& e) {
         const std::string v = lower(e.value);
         if (v == "compact") {
           cfg.bounds.kind = BoundsKind::CompactBox;
         } else if (v == "half_unbounded" || v == "unbounded") {
           cfg.bounds.kind = BoundsKind::HalfUnbounded;
         } else {
           throw ConfigError("line " + std::to_string(e.line) +
                                 ": bounds must be 'compact' or 'half_unbounded'",
                             e.line, k);
         }
       }},
      {"mu", [&](const std::string& k, const Entry& e) { cfg.bounds.mu = number(k, e); }},
      {"n_max", [&](const std::string& k, const Entry& e) { cfg.bounds.n_max = number(k, e); }},
      {"objective",
       [&](const std::string& k, const Entry& e) {
         const std::string v = lower(e.value);
         if (v == "j1" || v == "overlap") {
           cfg.objective = ObjectiveKind::Overlap;
         } else if (v == "j2" || v == "distance" || v == "squared_distance") {
           cfg.objective = ObjectiveKind::SquaredDistance;
         } else {
           throw ConfigError("line " + std::to_string(e.line) + ": objective must be J1 or J2",
                             e.line, k);
         }
       }},
      {"c0",
       [&](const std::string& k, const Entry& e) {
         const std::vector<std::string> t = tokens(e.value);
         if (t.size() != 3) {
           throw ConfigError("line " + std::to_string(e.line) + ": c0 expects three numbers u, n1, n2",
                             e.line, k);
         }
         for (std::size_t i = 0; i < 3; ++i) {
           if (!parse_real(t[i], cfg.c0[i])) {
             throw ConfigError("line " + std::to_string(e.line) + ": bad number '" + t[i] + "' in c0",
                               e.line, k);
           }
         }
       }},
      {"method",
       [&](const std::string& k, const Entry& e) {
         const auto m = parse_method(e.value);
         if (!m) {
           throw ConfigError("line " + std::to_string(e.line) + ": unknown method '" + e.value + "'",
                             e.line, k);
         }
         cfg.method = *m;
       }},
      {"alpha", [&](const std::string& k, const Entry& e) { cfg.gpm.alpha = number(k, e); }},
      {"beta", [&](const std::string& k, const Entry& e) { cfg.gpm.beta = number(k, e); }},
      {"theta", [&](const std::string& k, const Entry& e) { cfg.gpm.theta = number(k, e); }},
      {"eps_stop",
       [&](const std::string& k, const Entry& e) {
         const std::string v = lower(e.value);
         cfg.gpm.eps_stop = (v == "inf" || v == "+inf") ? INFINITY : number(k, e);
       }},
      {"max_iters", [&](const std::string& k, const Entry& e) { cfg.gpm.max_iters = count(k, e); }},
      {"rel_tol", [&](const std::string& k, const Entry& e) { cfg.integrator.rel_tol = number(k, e); }},
      {"abs_tol", [&](const std::string& k, const Entry& e) { cfg.integrator.abs_tol = number(k, e); }},
      {"max_step",
       [&](const std::string& k, const Entry& e) {
         if (lower(e.value) == "none") {
           cfg.integrator.max_step.reset();
         } else {
           cfg.integrator.max_step = number(k, e);
         }
       }},
      {"renyi_alpha", [&](const std::string& k, const Entry& e) { cfg.renyi_alpha = number(k, e); }},
      {"output_dir", [&](const std::string&, const Entry& e) { cfg.output_dir = e.value; }},
  };

  for (const auto& [key, e] : entries) {
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("line " + std::to_string(e.line) + ": unknown key '" + key + "'", e.line, key);
    }
    it->second(key, e);
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string to_config_text(const ScenarioConfig& c) {
  std::ostringstream os;
  auto density = [](const DensityMatrix& m) {
    std::string s = "full";
    for (int i = 0; i < 9; ++i) s += " " + fmt_complex(m(i / 3, i % 3));
    return s;
  };
  os << "name = " << c.name << "\n";
  os << "E2 = " << fmt(c.params.E2) << "\n";
  os << "E3 = " << fmt(c.params.E3) << "\n";
  os << "V13 = " << fmt(c.params.V13) << "\n";
  os << "V23 = " << fmt(c.params.V23) << "\n";
  os << "C13 = " << fmt(c.params.C13) << "\n";
  os << "C23 = " << fmt(c.params.C23) << "\n";
  os << "rho0 = " << density(c.rho0) << "\n";
  os << "rho_target = " << density(c.rho_target) << "\n";
  os << "T = " << fmt(c.T) << "\n";
  os << "N = " << c.N << "\n";
  if (c.bounds.kind == BoundsKind::CompactBox) {
    os << "bounds = compact\n";
    os << "mu = " << fmt(c.bounds.mu) << "\n";
    os << "n_max = " << fmt(c.bounds.n_max) << "\n";
  } else {
    os << "bounds = half_unbounded\n";
  }
  os << "objective = " << to_string(c.objective) << "\n";
  os << "c0 = " << fmt(c.c0[0]) << ", " << fmt(c.c0[1]) << ", " << fmt(c.c0[2]) << "\n";
  os << "method = " << lower(to_string(c.method)) << "\n";
  os << "alpha = " << fmt(c.gpm.alpha) << "\n";
  os << "beta = " << fmt(c.gpm.beta) << "\n";
  os << "theta = " << fmt(c.gpm.theta) << "\n";
  os << "eps_stop = " << (std::isinf(c.gpm.eps_stop) ? std::string("inf") : fmt(c.gpm.eps_stop)) << "\n";
  os << "max_iters = " << c.gpm.max_iters << "\n";
  os << "rel_tol = " << fmt(c.integrator.rel_tol) << "\n";
  os << "abs_tol = " << fmt(c.integrator.abs_tol) << "\n";
  os << "max_step = " << (c.integrator.max_step ? fmt(*c.integrator.max_step) : std::string("none"))
     << "\n";
  os << "renyi_alpha = " << fmt(c.renyi_alpha) << "\n";
  os << "output_dir = " << c.output_dir << "\n";
  return os.str();
}

}  // namespace qutrit

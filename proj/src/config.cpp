#include "landau/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "landau/errors.hpp"
#include "landau/format.hpp"

namespace landau {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string &key, const std::string &raw) {
  const std::string s = trim(raw);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError(key + ": expected a number, got '" + s + "'");
  return v;
}

long long to_int(const std::string &key, const std::string &raw) {
  const std::string s = trim(raw);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError(key + ": expected an integer, got '" + s + "'");
  return v;
}

bool to_bool(const std::string &key, const std::string &raw) {
  std::string s = trim(raw);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "true" || s == "yes" || s == "on" || s == "1")
    return true;
  if (s == "false" || s == "no" || s == "off" || s == "0")
    return false;
  throw ConfigError(key + ": expected a boolean, got '" + trim(raw) + "'");
}

std::vector<double> to_list(const std::string &key, const std::string &raw) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(to_double(key, item));
  if (out.empty())
    throw ConfigError(key + ": expected a comma-separated list of numbers");
  return out;
}

std::string strip_comments(const std::string &text) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (!t.empty() && t[0] == '#')
      out << ";" << t.substr(1) << "\n";
    else
      out << line << "\n";
  }
  return out.str();
}

using Setter = void (*)(ExperimentConfig &, const std::string &, const std::string &);

#define LANDAU_NUM(field) [](ExperimentConfig &c, const std::string &k, const std::string &v) { c.field = to_double(k, v); }
#define LANDAU_INT(field) [](ExperimentConfig &c, const std::string &k, const std::string &v) { c.field = static_cast<int>(to_int(k, v)); }
#define LANDAU_U64(field) [](ExperimentConfig &c, const std::string &k, const std::string &v) { \
    const long long x = to_int(k, v);                                                           \
    if (x < 0)                                                                                  \
      throw ConfigError(k + " must be non-negative");                                           \
    c.field = static_cast<std::uint64_t>(x);                                                    \
  }
#define LANDAU_BOOL(field) [](ExperimentConfig &c, const std::string &k, const std::string &v) { c.field = to_bool(k, v); }
#define LANDAU_STR(field) [](ExperimentConfig &c, const std::string &, const std::string &v) { c.field = trim(v); }
#define LANDAU_LIST(field) [](ExperimentConfig &c, const std::string &k, const std::string &v) { c.field = to_list(k, v); }

const std::map<std::string, Setter> &setters() {
  static const std::map<std::string, Setter> table = {
      {"grid.n", LANDAU_INT(grid.n)},
      {"grid.l", LANDAU_NUM(grid.l)},
      {"initial_data.family", LANDAU_STR(initial_data.family)},
      {"initial_data.sigma", LANDAU_NUM(initial_data.sigma)},
      {"initial_data.drift", LANDAU_NUM(initial_data.drift)},
      {"initial_data.k", LANDAU_NUM(initial_data.k)},
      {"initial_data.tail", LANDAU_NUM(initial_data.tail)},
      {"initial_data.components", LANDAU_INT(initial_data.components)},
      {"initial_data.seed", LANDAU_U64(initial_data.seed)},
      {"initial_data.normalize_energy", LANDAU_BOOL(initial_data.normalize_energy)},
      {"run.T", LANDAU_NUM(run.T)},
      {"run.cfl", LANDAU_NUM(run.cfl)},
      {"run.dt_min", LANDAU_NUM(run.dt_min)},
      {"run.dt_max", LANDAU_NUM(run.dt_max)},
      {"run.snapshot_cadence", LANDAU_INT(run.snapshot_cadence)},
      {"run.positivity_clip", LANDAU_BOOL(run.positivity_clip)},
      {"run.schedule", LANDAU_LIST(run.schedule)},
      {"run.snapshots", LANDAU_STR(run.snapshots)},
      {"diagnostics.p_list", LANDAU_LIST(diagnostics.p_list)},
      {"diagnostics.m_list", LANDAU_LIST(diagnostics.m_list)},
      {"diagnostics.f_floor", LANDAU_NUM(diagnostics.f_floor)},
      {"eps_regularity.enabled", LANDAU_BOOL(eps_regularity.enabled)},
      {"eps_regularity.K", LANDAU_NUM(eps_regularity.K)},
      {"ladder.enabled", LANDAU_BOOL(ladder.enabled)},
      {"ladder.regime", LANDAU_STR(ladder.regime)},
      {"ladder.K", LANDAU_NUM(ladder.K)},
      {"ladder.amplitude", LANDAU_NUM(ladder.amplitude)},
      {"ladder.N_levels", LANDAU_INT(ladder.N_levels)},
      {"ladder.t", LANDAU_NUM(ladder.t)},
      {"ladder.p", LANDAU_NUM(ladder.p)},
      {"barrier.enabled", LANDAU_BOOL(barrier.enabled)},
      {"barrier.regime", LANDAU_STR(barrier.regime)},
      {"barrier.a", LANDAU_NUM(barrier.a)},
      {"barrier.k", LANDAU_NUM(barrier.k)},
      {"barrier.n_weight", LANDAU_NUM(barrier.n_weight)},
      {"inequalities.enabled", LANDAU_BOOL(inequalities.enabled)},
      {"inequalities.corpus_seed", LANDAU_U64(inequalities.corpus_seed)},
      {"inequalities.corpus_size", LANDAU_INT(inequalities.corpus_size)},
      {"inequalities.n", LANDAU_INT(inequalities.n)},
      {"inequalities.l", LANDAU_NUM(inequalities.l)},
      {"output.dir", LANDAU_STR(output.dir)},
  };
  return table;
}

#undef LANDAU_NUM
#undef LANDAU_INT
#undef LANDAU_U64
#undef LANDAU_BOOL
#undef LANDAU_STR
#undef LANDAU_LIST

void require(bool ok, const std::string &msg) {
  if (!ok)
    throw ConfigError(msg);
}

void validate(const ExperimentConfig &c) {
  require(c.grid.n % 2 == 0, "grid.n must be even");
  require(c.grid.n >= 8, "grid.n must be at least 8");
  require(c.grid.l > 0.0, "grid.l must be positive");
  static const std::set<std::string> families = {"maxwellian", "bimaxwellian",
                                                 "narrow_gaussian", "polytail", "mixture"};
  const auto &id = c.initial_data;
  require(families.count(id.family) == 1,
          "initial_data.family must be one of maxwellian, bimaxwellian, narrow_gaussian, "
          "polytail, mixture (got '" + id.family + "')");
  require(!id.sigma || *id.sigma > 0.0, "initial_data.sigma must be positive");
  require(id.drift >= 0.0, "initial_data.drift must be non-negative");
  require(id.tail > 0.0, "initial_data.tail must be positive");
  if (id.family == "polytail")
    require(id.k > 9.0, "initial_data.k must exceed 9 for polytail data");
  require(id.components >= 1 && id.components <= 16, "initial_data.components must be in [1, 16]");
  require(c.run.T > 0.0, "run.T must be positive");
  require(c.run.cfl > 0.0 && c.run.cfl <= 1.0, "run.cfl must be in (0, 1]");
  require(c.run.dt_min > 0.0, "run.dt_min must be positive");
  require(c.run.dt_max >= c.run.dt_min, "run.dt_max must be at least run.dt_min");
  require(c.run.snapshot_cadence >= 1, "run.snapshot_cadence must be positive");
  require(c.run.snapshots == "all" || c.run.snapshots == "ends" || c.run.snapshots == "none",
          "run.snapshots must be all, ends or none");
  for (double t : c.run.schedule)
    require(t >= 0.0 && t <= c.run.T, "run.schedule entries must lie in [0, run.T]");
  const auto &d = c.diagnostics;
  require(d.p_list.size() == d.m_list.size() || d.m_list.size() == 1,
          "diagnostics.m_list must have one entry or as many as diagnostics.p_list");
  for (double p : d.p_list)
    require(p >= 1.0, "diagnostics.p_list entries must be at least 1");
  require(d.f_floor > 0.0, "diagnostics.f_floor must be positive");
  require(c.eps_regularity.K >= 0.0, "eps_regularity.K must be non-negative");
  require(c.ladder.regime == "critical" || c.ladder.regime == "subcritical",
          "ladder.regime must be critical or subcritical");
  require(c.ladder.N_levels >= 1 && c.ladder.N_levels <= 12, "ladder.N_levels must be in [1, 12]");
  require(c.ladder.K >= 0.0, "ladder.K must be non-negative");
  require(c.ladder.amplitude >= 0.0, "ladder.amplitude must be non-negative");
  require(c.ladder.t >= 0.0 && c.ladder.t < c.run.T, "ladder.t must lie in [0, run.T)");
  require(c.ladder.p == 0.0 || c.ladder.p >= 1.0, "ladder.p must be at least 1");
  if (c.ladder.regime == "subcritical")
    require(c.ladder.p == 0.0 || c.ladder.p > 1.5, "ladder.p must exceed 3/2 for the subcritical ladder");
  require(c.barrier.regime == "critical" || c.barrier.regime == "subcritical",
          "barrier.regime must be critical or subcritical");
  require(c.barrier.a >= 0.0, "barrier.a must be non-negative");
  require(c.barrier.k > 0.0, "barrier.k must be positive");
  require(c.barrier.n_weight < -3.0, "barrier.n_weight must be below -3");
  require(c.inequalities.corpus_size >= 4, "inequalities.corpus_size must be at least 4");
  require(c.inequalities.n % 2 == 0 && c.inequalities.n >= 8,
          "inequalities.n must be even and at least 8");
  require(c.inequalities.l > 0.0, "inequalities.l must be positive");
  require(!c.output.dir.empty(), "output.dir must not be empty");
}

} // namespace

ExperimentConfig parse_config(const std::string &text) {
  pt::ptree tree;
  try {
    std::istringstream in(strip_comments(text));
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error &e) {
    throw ConfigError("config: " + e.message() + " at line " + std::to_string(e.line()));
  }
  ExperimentConfig c;
  // the INI reader drops empty sections, so headers are collected separately
  std::set<std::string> sections;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      const std::string t = trim(line);
      if (t.size() > 2 && t.front() == '[' && t.back() == ']')
        sections.insert(trim(t.substr(1, t.size() - 2)));
    }
  }
  for (const auto &[section, body] : tree)
    if (body.empty() && !body.data().empty())
      throw ConfigError("key '" + section + "' must belong to a [section]");
  for (const auto &section : sections) {
    bool known_section = false;
    for (const auto &[key, setter] : setters())
      known_section = known_section || key.rfind(section + ".", 0) == 0;
    if (!known_section)
      throw ConfigError("unknown section [" + section + "]");
    if (section == "eps_regularity")
      c.eps_regularity.enabled = true;
    else if (section == "ladder")
      c.ladder.enabled = true;
    else if (section == "barrier")
      c.barrier.enabled = true;
    else if (section == "inequalities")
      c.inequalities.enabled = true;
  }
  for (const auto &[section, body] : tree)
    for (const auto &[key, value] : body) {
      const std::string full = section + "." + key;
      const auto it = setters().find(full);
      if (it == setters().end())
        throw ConfigError("unknown key " + full);
      it->second(c, full, value.data());
    }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

std::string list_text(const std::vector<double> &v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i)
    s += (i ? "," : "") + fmt_double(v[i]);
  return s;
}

} // namespace

std::string config_to_text(const ExperimentConfig &c) {
  std::ostringstream os;
  const auto b = [](bool x) { return x ? "true" : "false"; };
  os << "grid.n = " << c.grid.n << "\n";
  os << "grid.l = " << fmt_double(c.grid.l) << "\n";
  os << "initial_data.family = " << c.initial_data.family << "\n";
  if (c.initial_data.sigma)
    os << "initial_data.sigma = " << fmt_double(*c.initial_data.sigma) << "\n";
  os << "initial_data.drift = " << fmt_double(c.initial_data.drift) << "\n";
  os << "initial_data.k = " << fmt_double(c.initial_data.k) << "\n";
  os << "initial_data.tail = " << fmt_double(c.initial_data.tail) << "\n";
  os << "initial_data.components = " << c.initial_data.components << "\n";
  os << "initial_data.seed = " << c.initial_data.seed << "\n";
  if (c.initial_data.normalize_energy)
    os << "initial_data.normalize_energy = " << b(*c.initial_data.normalize_energy) << "\n";
  os << "run.T = " << fmt_double(c.run.T) << "\n";
  os << "run.cfl = " << fmt_double(c.run.cfl) << "\n";
  os << "run.dt_min = " << fmt_double(c.run.dt_min) << "\n";
  os << "run.dt_max = " << fmt_double(c.run.dt_max) << "\n";
  os << "run.snapshot_cadence = " << c.run.snapshot_cadence << "\n";
  os << "run.positivity_clip = " << b(c.run.positivity_clip) << "\n";
  if (!c.run.schedule.empty())
    os << "run.schedule = " << list_text(c.run.schedule) << "\n";
  os << "run.snapshots = " << c.run.snapshots << "\n";
  os << "diagnostics.p_list = " << list_text(c.diagnostics.p_list) << "\n";
  os << "diagnostics.m_list = " << list_text(c.diagnostics.m_list) << "\n";
  os << "diagnostics.f_floor = " << fmt_double(c.diagnostics.f_floor) << "\n";
  os << "eps_regularity.enabled = " << b(c.eps_regularity.enabled) << "\n";
  os << "eps_regularity.K = " << fmt_double(c.eps_regularity.K) << "\n";
  os << "ladder.enabled = " << b(c.ladder.enabled) << "\n";
  os << "ladder.regime = " << c.ladder.regime << "\n";
  os << "ladder.K = " << fmt_double(c.ladder.K) << "\n";
  os << "ladder.amplitude = " << fmt_double(c.ladder.amplitude) << "\n";
  os << "ladder.N_levels = " << c.ladder.N_levels << "\n";
  os << "ladder.t = " << fmt_double(c.ladder.t) << "\n";
  os << "ladder.p = " << fmt_double(c.ladder.p) << "\n";
  os << "barrier.enabled = " << b(c.barrier.enabled) << "\n";
  os << "barrier.regime = " << c.barrier.regime << "\n";
  os << "barrier.a = " << fmt_double(c.barrier.a) << "\n";
  os << "barrier.k = " << fmt_double(c.barrier.k) << "\n";
  os << "barrier.n_weight = " << fmt_double(c.barrier.n_weight) << "\n";
  os << "inequalities.enabled = " << b(c.inequalities.enabled) << "\n";
  os << "inequalities.corpus_seed = " << c.inequalities.corpus_seed << "\n";
  os << "inequalities.corpus_size = " << c.inequalities.corpus_size << "\n";
  os << "inequalities.n = " << c.inequalities.n << "\n";
  os << "inequalities.l = " << fmt_double(c.inequalities.l) << "\n";
  os << "output.dir = " << c.output.dir << "\n";
  return os.str();
}

} // namespace landau

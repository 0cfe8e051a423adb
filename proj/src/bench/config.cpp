#include "slideopt/bench/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace slideopt::bench {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void bad_field(const std::string& key, const std::string& why) {
  throw std::invalid_argument("config field '" + key + "': " + why);
}

}  // namespace

KeyValueFile KeyValueFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

KeyValueFile KeyValueFile::parse_string(const std::string& text) {
  KeyValueFile f;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config: malformed section at line " +
                                    std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key = value at line " +
                                  std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    f.entries_[section.empty() ? key : section + "." + key] = value;
  }
  return f;
}

bool KeyValueFile::has(const std::string& key) const {
  return entries_.count(key) > 0;
}

std::string KeyValueFile::get_string(const std::string& key,
                                     const std::string& fallback) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double KeyValueFile::get_double(const std::string& key, double fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  try {
    size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) bad_field(key, "not a number");
    return v;
  } catch (const std::invalid_argument&) {
    bad_field(key, "not a number");
  } catch (const std::out_of_range&) {
    bad_field(key, "out of range");
  }
}

long long KeyValueFile::get_int(const std::string& key, long long fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  try {
    size_t pos = 0;
    const long long v = std::stoll(it->second, &pos);
    if (pos != it->second.size()) bad_field(key, "not an integer");
    return v;
  } catch (const std::invalid_argument&) {
    bad_field(key, "not an integer");
  } catch (const std::out_of_range&) {
    bad_field(key, "out of range");
  }
}

bool KeyValueFile::get_bool(const std::string& key, bool fallback) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  bad_field(key, "expected true/false");
}

std::vector<std::string> KeyValueFile::get_string_list(const std::string& key) const {
  std::vector<std::string> out;
  auto it = entries_.find(key);
  if (it == entries_.end()) return out;
  std::istringstream ss(it->second);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<double> KeyValueFile::get_list(const std::string& key) const {
  std::vector<double> out;
  for (const std::string& s : get_string_list(key)) {
    try {
      out.push_back(std::stod(s));
    } catch (...) {
      bad_field(key, "list entry '" + s + "' is not a number");
    }
  }
  return out;
}

void ExperimentConfig::validate() const {
  static const std::vector<std::string> algos = {
      "gs", "sgs", "msgs", "ssgs", "prox_grad", "accel_prox", "accel_linearized"};
  if (std::find(algos.begin(), algos.end(), algorithm) == algos.end())
    bad_field("algorithm.name", "unknown algorithm '" + algorithm + "'");
  if (policy != "fixed_horizon" && policy != "compact_set")
    bad_field("algorithm.policy", "must be fixed_horizon or compact_set");
  if (n_outer < 1) bad_field("algorithm.N", "must be >= 1");
  if (dtilde < 0) bad_field("algorithm.dtilde", "must be nonnegative");
  if (delta0 < 0) bad_field("algorithm.delta0", "must be nonnegative");
  if (phases < 1) bad_field("algorithm.phases", "must be >= 1");
  if (trials < 1) bad_field("run.trials", "must be >= 1");
  if (jobs < 0) bad_field("run.jobs", "must be nonnegative");
  if (!(ref_tol >= 1e-12)) bad_field("run.ref_tol", "must be >= 1e-12");
  if (accuracies.empty()) bad_field("run.accuracies", "must be nonempty");
  for (size_t i = 0; i < accuracies.size(); ++i) {
    if (!(accuracies[i] > 0)) bad_field("run.accuracies", "must be positive");
    if (i > 0 && accuracies[i] >= accuracies[i - 1])
      bad_field("run.accuracies", "must be strictly decreasing");
  }
  if (checkpoints != "all" && checkpoints != "final")
    bad_field("run.checkpoints", "must be all or final");
  if (problem.n <= 0) bad_field("problem.n", "must be positive");
  if (problem.m <= 0) bad_field("problem.m", "must be positive");
  if (problem.lambda < 0) bad_field("problem.lambda", "must be nonnegative");
  if (problem.sigma < 0) bad_field("problem.sigma", "must be nonnegative");
  for (const std::string& f : formats)
    if (f != "csv" && f != "json" && f != "svg")
      bad_field("output.format", "unknown format '" + f + "'");
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
  KeyValueFile kv = KeyValueFile::parse_string(text);
  ExperimentConfig c;
  c.preset = kv.get_string("problem.preset", "");
  if (!c.preset.empty()) c.problem = slideopt::preset(c.preset);
  c.problem.family = kv.get_string("problem.family", c.problem.family);
  c.problem.n = static_cast<int>(kv.get_int("problem.n", c.problem.n));
  c.problem.m = static_cast<int>(kv.get_int("problem.m", c.problem.m));
  c.problem.rank = static_cast<int>(kv.get_int("problem.rank", c.problem.rank));
  c.problem.lambda = kv.get_double("problem.lambda", c.problem.lambda);
  c.problem.mu = kv.get_double("problem.mu", c.problem.mu);
  c.problem.sigma = kv.get_double("problem.sigma", c.problem.sigma);
  c.problem.pool = static_cast<int>(kv.get_int("problem.pool", c.problem.pool));
  c.problem.radius = kv.get_double("problem.radius", c.problem.radius);
  c.problem.normalize = kv.get_bool("problem.normalize", c.problem.normalize);
  c.problem.signal_norm = kv.get_double("problem.signal_norm", c.problem.signal_norm);
  c.problem.seed = static_cast<std::uint64_t>(kv.get_int("problem.seed", static_cast<long long>(c.problem.seed)));
  c.algorithm = kv.get_string("algorithm.name", c.algorithm);
  c.policy = kv.get_string("algorithm.policy", c.policy);
  c.n_outer = static_cast<int>(kv.get_int("algorithm.N", c.n_outer));
  c.dtilde = kv.get_double("algorithm.dtilde", c.dtilde);
  c.delta0 = kv.get_double("algorithm.delta0", c.delta0);
  c.phases = static_cast<int>(kv.get_int("algorithm.phases", c.phases));
  c.beta = kv.get_double("algorithm.beta", c.beta);
  c.eta = kv.get_double("algorithm.eta", c.eta);
  c.trials = static_cast<int>(kv.get_int("run.trials", c.trials));
  c.seed_start = static_cast<std::uint64_t>(kv.get_int("run.seed_start", static_cast<long long>(c.seed_start)));
  c.jobs = static_cast<int>(kv.get_int("run.jobs", c.jobs));
  if (kv.has("run.accuracies")) c.accuracies = kv.get_list("run.accuracies");
  c.ref_tol = kv.get_double("run.ref_tol", c.ref_tol);
  c.checkpoints = kv.get_string("run.checkpoints", c.checkpoints);
  c.out_dir = kv.get_string("output.dir", c.out_dir);
  if (kv.has("output.format")) c.formats = kv.get_string_list("output.format");
  c.validate();
  return c;
}

}  // namespace slideopt::bench

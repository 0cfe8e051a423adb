#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "slideopt/problems.hpp"

namespace slideopt::bench {

// Flat key/value config with [section] headers, '#' comments, and
// comma-separated lists. Keys are addressed as "section.key".
class KeyValueFile {
 public:
  static KeyValueFile parse_file(const std::string& path);
  static KeyValueFile parse_string(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_list(const std::string& key) const;
  std::vector<std::string> get_string_list(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

struct ExperimentConfig {
  ProblemSpec problem;
  std::string preset;  // when set, wins over the field-wise problem spec

  std::string algorithm = "gs";  // gs|sgs|msgs|ssgs|prox_grad|accel_prox|accel_linearized
  std::string policy = "fixed_horizon";
  int n_outer = 10;
  double dtilde = 0.0;   // 0 = policy default
  double delta0 = 0.0;   // msgs; 0 = derive from a baseline run
  int phases = 6;        // msgs
  double beta = 0.0;     // prox_grad; 0 = L
  double eta = 0.0;      // ssgs; 0 = choose_eta

  int trials = 1;
  std::uint64_t seed_start = 1;
  int jobs = 0;  // 0 = hardware concurrency
  std::vector<double> accuracies = {1e-1, 1e-2, 1e-3, 1e-4};
  double ref_tol = 1e-10;
  std::string checkpoints = "all";  // all | final

  std::string out_dir = "out";
  std::vector<std::string> formats = {"csv", "json"};

  // Validates ranges; error messages name the offending field.
  void validate() const;

  static ExperimentConfig from_file(const std::string& path);
  static ExperimentConfig from_string(const std::string& text);
};

}  // namespace slideopt::bench

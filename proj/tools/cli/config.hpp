#pragma once

#include <boost/property_tree/ptree.hpp>

#include <optional>
#include <string>
#include <vector>

#include "susyinv/construction.hpp"

namespace susyinv::cli {

using Ini = boost::property_tree::ptree;

// Raised for anything wrong with a config file; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  // [system]
  Family family = Family::spin;
  double j = 0.5;
  Index N = 32;
  Index buffer = 0;  // 0 selects the default buffer
  Index padding = 0;
  double b = 1.0;
  // [gauge]
  std::string theta = "0";
  std::string phi = "0";
  // [y]
  std::string f = "0";
  std::string g = "0";
  // [d0]
  std::string d0_named = "default";  // Jplus, adag, zero, default
  std::string d0_file;               // JSON {"real": [[..]], "imag": [[..]]}
  // [grid]
  double T = 10.0;
  double dt = 1e-3;
  // [checks]
  std::vector<std::string> suites;  // empty: all
  // [output]
  std::string out_dir = "out";
  std::vector<std::string> formats = {"csv", "json"};
  Index samples = 101;
  // [verify]
  bool wrong_hamiltonian = false;
  Index solution_levels = 0;  // 0: every positive level (capped for oscillators)
  // [phase]
  Index phase_steps = 2000;
  bool reverse = false;
  // [sweep]
  std::string sweep_key;
  std::vector<std::string> sweep_values;

  std::string source;  // path the config came from
  std::string base_dir;

  bool wants(const std::string& suite) const;
  bool wants_format(const std::string& format) const;
};

Ini read_ini(const std::string& path);
RunConfig parse_config(const Ini& ini, const std::string& source = "<memory>");
RunConfig load_config(const std::string& path);

// Sets "section.key" in the tree; used by sweeps.
void override_value(Ini& ini, const std::string& dotted_key, const std::string& value);

// Everything a command needs, built once from a config.
struct Model {
  RunConfig config;
  std::optional<SpinRep> spin;
  std::optional<OscillatorRep> osc;
  TimeFunction f, g, theta, phi;
  SuperSystem system;
  PartnerOutput partner;
  Index dim = 0;
  Index interior = 0;
};

Model build_model(const RunConfig& config);

}  // namespace susyinv::cli

#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "config.hpp"

namespace susyinv::cli {

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kConfigError = 2 };

struct CommonOptions {
  std::optional<std::string> out_dir;
  std::uint64_t seed = 1;
  double tolerance_scale = 1.0;
  bool wrong_hamiltonian = false;
  std::optional<double> level;
  bool reverse = false;
  unsigned threads = 0;  // 0: SUSYINV_THREADS or hardware concurrency
};

struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  bool gating = true;
  std::string note;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  std::vector<std::string> warnings;
  bool pass() const;
};

VerifyReport run_verify(const Model& model, const CommonOptions& options);

int cmd_build(const RunConfig& config, const CommonOptions& options, std::ostream& log);
int cmd_verify(const RunConfig& config, const CommonOptions& options, std::ostream& log);
int cmd_propagate(const RunConfig& config, const CommonOptions& options, std::ostream& log);
int cmd_phase(const RunConfig& config, const CommonOptions& options, std::ostream& log);
int cmd_sweep(const std::string& config_path, const CommonOptions& options, std::ostream& log);

}  // namespace susyinv::cli

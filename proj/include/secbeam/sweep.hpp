#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "secbeam/optimizer.hpp"

namespace secbeam {

std::string mode_name(SolveMode mode);

/// One experiment point. x is P_T in dB for power sweeps and R0 in bits for
/// rate sweeps; covariances are populated for "ok" rows.
struct SweepRow {
  double x = 0.0;
  int j = 0;
  SolveMode mode = SolveMode::NoAn;
  bool with_common = false;
  std::optional<double> r1;
  std::string status;  // "ok" | "infeasible" | "error"
  double r0_effective = 0.0;
  double power_budget = 0.0;
  CovarianceTriple covariances;
};

/// Either a config file path or the literal "paper:1".."paper:3" / "paper:all"
/// for the built-in reference channels.
class InstanceSelector {
 public:
  static InstanceSelector parse(const std::string& text);

  std::vector<SystemInstance> base_instances() const;
  const std::string& description() const { return text_; }

 private:
  std::string text_;
  std::string path_;
  std::vector<int> paper_js_;
};

/// Secrecy rate vs total power. Rows for each dB point x instance x mode x
/// {common rate at r0, common message absent (r0 = 0)}, deterministically
/// ordered.
std::vector<SweepRow> sweep_power(const InstanceSelector& sel, double r0, double db_from,
                                  double db_to, double db_step,
                                  const std::vector<SolveMode>& modes,
                                  const SolveOptions& opts = {});

/// Secrecy rate vs common-message rate at fixed total power. Rows beyond the
/// maximum common rate report status "infeasible".
std::vector<SweepRow> sweep_r0(const InstanceSelector& sel, double pt_db, double r0_from,
                               double r0_to, double r0_step,
                               const std::vector<SolveMode>& modes,
                               const SolveOptions& opts = {});

/// Fixed schema "x,j,mode,with_common,r1,status", floats at 6 significant
/// digits, '\n' newlines. Byte-stable across runs for identical inputs.
std::string to_csv(const std::vector<SweepRow>& rows);

}  // namespace secbeam

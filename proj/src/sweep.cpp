#include "secbeam/sweep.hpp"

#include <algorithm>
#include <cstdio>

#include "secbeam/channel_io.hpp"
#include "secbeam/errors.hpp"

namespace secbeam {

namespace {

int mode_order(SolveMode m) { return static_cast<int>(m); }

std::optional<SolveResult> run_mode(const SystemInstance& inst, double r0, SolveMode mode,
                                    const SolveOptions& opts, std::string& status) {
  try {
    switch (mode) {
      case SolveMode::NoAn:
        return max_secrecy_no_an(inst, r0, opts);
      case SolveMode::An:
        return max_secrecy_with_an(inst, r0, opts);
      case SolveMode::Rank1: {
        const auto full = max_secrecy_no_an(inst, r0, opts);
        const auto dirs = rank1_directions(full.covariances);
        return max_secrecy_rank1(inst, r0, dirs.phi0, dirs.phi1, opts);
      }
    }
  } catch (const InfeasibleCommonRate&) {
    status = "infeasible";
    return std::nullopt;
  } catch (const NumericalFailure&) {
    status = "error";
    return std::nullopt;
  }
  status = "error";
  return std::nullopt;
}

SweepRow make_row(double x, const SystemInstance& inst, SolveMode mode, bool with_common,
                  double r0_eff, const SolveOptions& opts) {
  SweepRow row;
  row.x = x;
  row.j = inst.j();
  row.mode = mode;
  row.with_common = with_common;
  row.r0_effective = r0_eff;
  row.power_budget = inst.power_budget();
  std::string status = "ok";
  const auto res = run_mode(inst, r0_eff, mode, opts, status);
  row.status = status;
  if (res) {
    row.r1 = res->secrecy_rate;
    row.covariances = res->covariances;
  }
  return row;
}

void sort_rows(std::vector<SweepRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.j != b.j) return a.j < b.j;
    if (mode_order(a.mode) != mode_order(b.mode)) return mode_order(a.mode) < mode_order(b.mode);
    return a.with_common < b.with_common;
  });
}

std::vector<double> grid_values(double from, double to, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("sweep: step must be positive");
  std::vector<double> xs;
  for (double x = from; x <= to + 1e-9; x += step) xs.push_back(x);
  return xs;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string mode_name(SolveMode mode) {
  switch (mode) {
    case SolveMode::NoAn:
      return "no-an";
    case SolveMode::Rank1:
      return "rank1";
    case SolveMode::An:
      return "an";
  }
  return "?";
}

InstanceSelector InstanceSelector::parse(const std::string& text) {
  InstanceSelector sel;
  sel.text_ = text;
  if (text.rfind("paper:", 0) == 0) {
    const std::string arg = text.substr(6);
    if (arg == "all") {
      sel.paper_js_ = {1, 2, 3};
    } else if (arg == "1" || arg == "2" || arg == "3") {
      sel.paper_js_ = {arg[0] - '0'};
    } else {
      throw ParseError("instance selector: expected paper:1, paper:2, paper:3 or paper:all");
    }
  } else {
    sel.path_ = text;
  }
  return sel;
}

std::vector<SystemInstance> InstanceSelector::base_instances() const {
  std::vector<SystemInstance> out;
  if (!paper_js_.empty()) {
    for (int j : paper_js_) out.push_back(paper_instance(j));
  } else {
    out.push_back(load_instance_file(path_));
  }
  return out;
}

std::vector<SweepRow> sweep_power(const InstanceSelector& sel, double r0, double db_from,
                                  double db_to, double db_step,
                                  const std::vector<SolveMode>& modes,
                                  const SolveOptions& opts) {
  opts.validate();
  const auto bases = sel.base_instances();
  std::vector<SweepRow> rows;
  for (double x : grid_values(db_from, db_to, db_step)) {
    const double budget = db_to_linear(x);
    for (const auto& base : bases) {
      const SystemInstance inst = base.with_power_budget(budget);
      for (SolveMode mode : modes) {
        rows.push_back(make_row(x, inst, mode, false, 0.0, opts));
        rows.push_back(make_row(x, inst, mode, true, r0, opts));
      }
    }
  }
  sort_rows(rows);
  return rows;
}

std::vector<SweepRow> sweep_r0(const InstanceSelector& sel, double pt_db, double r0_from,
                               double r0_to, double r0_step,
                               const std::vector<SolveMode>& modes, const SolveOptions& opts) {
  opts.validate();
  const double budget = db_to_linear(pt_db);
  const auto bases = sel.base_instances();
  std::vector<SweepRow> rows;
  for (double x : grid_values(r0_from, r0_to, r0_step)) {
    for (const auto& base : bases) {
      const SystemInstance inst = base.with_power_budget(budget);
      for (SolveMode mode : modes) rows.push_back(make_row(x, inst, mode, true, x, opts));
    }
  }
  sort_rows(rows);
  return rows;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "x,j,mode,with_common,r1,status\n";
  for (const auto& r : rows) {
    out += format_double(r.x);
    out += ',';
    out += std::to_string(r.j);
    out += ',';
    out += mode_name(r.mode);
    out += ',';
    out += r.with_common ? '1' : '0';
    out += ',';
    if (r.r1) out += format_double(*r.r1);
    out += ',';
    out += r.status;
    out += '\n';
  }
  return out;
}

}  // namespace secbeam

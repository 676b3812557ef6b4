#include "secbeam/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "secbeam/channel_io.hpp"
#include "secbeam/oracle.hpp"
#include "secbeam/sweep.hpp"

namespace secbeam {

namespace {

int verbosity() {
  const char* env = std::getenv("SECBEAM_VERBOSE");
  return env ? std::atoi(env) : 0;
}

SolveMode parse_mode(const std::string& name) {
  if (name == "no-an") return SolveMode::NoAn;
  if (name == "an") return SolveMode::An;
  if (name == "rank1") return SolveMode::Rank1;
  throw ParseError("unknown mode '" + name + "' (expected no-an, an or rank1)");
}

std::vector<SolveMode> parse_modes(const std::vector<std::string>& names) {
  std::vector<SolveMode> modes;
  for (const auto& n : names) modes.push_back(parse_mode(n));
  if (modes.empty()) modes.push_back(SolveMode::NoAn);
  return modes;
}

InstanceSelector make_selector(const std::string& config, const std::string& paper_j) {
  if (config.empty() == paper_j.empty())
    throw ParseError("exactly one of --config and --paper-j is required");
  if (!config.empty()) return InstanceSelector::parse(config);
  return InstanceSelector::parse("paper:" + paper_j);
}

nlohmann::json matrix_to_json(const HermitianMatrix& q) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < q.dim(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < q.dim(); ++c)
      row.push_back(nlohmann::json::array({q.mat()(r, c).real(), q.mat()(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open output file: " + path);
  out << text;
}

void print_report(const SystemInstance& inst, const SolveResult& res, std::ostream& os) {
  os << "mode: " << mode_name(res.mode) << "\n";
  os << "r0: " << res.r0 << "\n";
  os << "r1: " << res.secrecy_rate << " bits/channel use\n";
  if (res.mode == SolveMode::An)
    os << "u_opt: " << res.u_opt << "\nv_opt: " << res.v_opt << "\n";
  else
    os << "t_max: " << res.t_max << "\n";
  for (int k = 0; k < inst.k(); ++k)
    os << "common rate D" << (k + 1) << ": " << rate_common_user(inst, k, res.covariances)
       << "\n";
  for (int j = 0; j < inst.j(); ++j)
    os << "common rate E" << (j + 1) << ": " << rate_common_eve(inst, j, res.covariances)
       << "\n";
  os << "trace q0: " << res.covariances.q0.trace() << "\n";
  os << "trace q1: " << res.covariances.q1.trace() << "\n";
  os << "trace q2: " << res.covariances.q2.trace() << "\n";
  os << "trace total: " << res.covariances.trace_sum()
     << " (budget " << inst.power_budget() << ")\n";
  os << "rank1 witness: " << (res.rank1_polished ? "yes" : "no") << "\n";
}

int cmd_solve(const std::string& config, const std::string& paper_j, double r0,
              const std::string& mode_name_arg, bool have_pt_db, double pt_db,
              const std::string& dump_path, const SolveOptions& opts) {
  SystemInstance inst = [&] {
    if (config.empty() == paper_j.empty())
      throw ParseError("exactly one of --config and --paper-j is required");
    if (!config.empty()) {
      SystemInstance base = load_instance_file(config);
      return have_pt_db ? base.with_power_budget(db_to_linear(pt_db)) : base;
    }
    if (paper_j != "1" && paper_j != "2" && paper_j != "3")
      throw ParseError("--paper-j must be 1, 2 or 3 for solve");
    const int j = paper_j[0] - '0';
    return have_pt_db ? paper_instance(j, db_to_linear(pt_db)) : paper_instance(j);
  }();

  const SolveMode mode = parse_mode(mode_name_arg);
  SolveResult res;
  switch (mode) {
    case SolveMode::NoAn:
      res = max_secrecy_no_an(inst, r0, opts);
      break;
    case SolveMode::An:
      res = max_secrecy_with_an(inst, r0, opts);
      break;
    case SolveMode::Rank1: {
      const auto full = max_secrecy_no_an(inst, r0, opts);
      const auto dirs = rank1_directions(full.covariances);
      res = max_secrecy_rank1(inst, r0, dirs.phi0, dirs.phi1, opts);
      break;
    }
  }

  print_report(inst, res, std::cout);
  if (verbosity() > 0)
    std::cerr << "probes: " << res.trace.size() << "\n";

  if (!dump_path.empty()) {
    nlohmann::json dump;
    dump["q0"] = matrix_to_json(res.covariances.q0);
    dump["q1"] = matrix_to_json(res.covariances.q1);
    dump["q2"] = matrix_to_json(res.covariances.q2);
    write_output(dump_path, dump.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Optimum transmit covariances for broadcast channels with a common message, "
               "a secret message and artificial noise"};
  app.require_subcommand(1);

  SolveOptions opts;

  std::string config, paper_j, mode = "no-an", out_path, dump_path;
  std::vector<std::string> mode_list;
  double r0 = 0.0, pt_db = 0.0;
  double db_from = 0.0, db_to = 12.0, db_step = 3.0;
  double r0_from = 0.0, r0_to = 3.0, r0_step = 0.1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "instance config file (JSON)");
    sub->add_option("--zeta", opts.zeta, "bisection gap");
    sub->add_option("--m-steps", opts.m_steps, "grid steps of the noise-assisted search");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve one instance");
  add_common(solve);
  solve->add_option("--paper-j", paper_j, "built-in reference instance (1, 2 or 3)");
  solve->add_option("--r0", r0, "common-message rate");
  auto* pt_opt = solve->add_option("--pt-db", pt_db, "total power budget in dB");
  solve->add_option("--mode", mode, "no-an | an | rank1");
  solve->add_option("--dump", dump_path, "write covariances to this JSON file");

  CLI::App* sweep_p = app.add_subcommand("sweep-power", "secrecy rate vs total power (CSV)");
  add_common(sweep_p);
  sweep_p->add_option("--paper-j", paper_j, "built-in instance: 1, 2, 3 or all");
  sweep_p->add_option("--r0", r0, "common-message rate of the with-common variant")
      ->default_val(1.0);
  sweep_p->add_option("--db-from", db_from, "range start in dB");
  sweep_p->add_option("--db-to", db_to, "range end in dB");
  sweep_p->add_option("--db-step", db_step, "range step in dB");
  sweep_p->add_option("--mode", mode_list, "modes to run (repeatable)");
  sweep_p->add_option("--out", out_path, "output CSV path ('-' for stdout)");

  CLI::App* sweep_c = app.add_subcommand("sweep-r0", "secrecy rate vs common rate (CSV)");
  add_common(sweep_c);
  sweep_c->add_option("--paper-j", paper_j, "built-in instance: 1, 2, 3 or all");
  sweep_c->add_option("--pt-db", pt_db, "total power budget in dB")->default_val(9.0);
  sweep_c->add_option("--r0-from", r0_from, "range start in bits");
  sweep_c->add_option("--r0-to", r0_to, "range end in bits");
  sweep_c->add_option("--r0-step", r0_step, "range step in bits");
  sweep_c->add_option("--mode", mode_list, "modes to run (repeatable)");
  sweep_c->add_option("--out", out_path, "output CSV path ('-' for stdout)");

  std::vector<const char*> argv;
  argv.push_back("secbeam");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve->parsed())
      return cmd_solve(config, paper_j, r0, mode, pt_opt->count() > 0, pt_db, dump_path, opts);
    if (sweep_p->parsed()) {
      const auto rows = sweep_power(make_selector(config, paper_j), r0, db_from, db_to,
                                    db_step, parse_modes(mode_list), opts);
      write_output(out_path, to_csv(rows));
      return 0;
    }
    if (sweep_c->parsed()) {
      const auto rows = sweep_r0(make_selector(config, paper_j), pt_db, r0_from, r0_to,
                                 r0_step, parse_modes(mode_list), opts);
      write_output(out_path, to_csv(rows));
      return 0;
    }
  } catch (const InfeasibleCommonRate& e) {
    std::cerr << "error: " << e.what() << "\n";
    try {
      const auto sel = make_selector(config, paper_j);
      const auto bases = sel.base_instances();
      if (!bases.empty())
        std::cerr << "r0_max for this instance is approximately " << r0_max(bases.front())
                  << " bits\n";
    } catch (...) {
    }
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace secbeam

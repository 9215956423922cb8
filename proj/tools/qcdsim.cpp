#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qcdsim/commands.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string method;
  std::string oracle;
  int threads = -1;
  std::string platform;
  std::string table;
  std::string alpha;
  std::string state;
};

// Config file (or defaults) with command-line flags applied on top.
qcdsim::RunConfig resolve(const Flags& f) {
  using namespace qcdsim;
  RunConfig cfg = f.config.empty() ? parse_run_config("", "defaults") : load_run_config(f.config);
  try {
    if (!f.out.empty()) cfg.output_path = f.out;
    if (!f.method.empty()) cfg.method = solver_method_from_string(f.method);
    if (!f.oracle.empty()) cfg.oracle = oracle_mode_from_string(f.oracle);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!f.table.empty() || !f.alpha.empty() || !f.state.empty()) {
    std::string extra;
    if (!f.table.empty()) extra += "wigner.file = " + f.table + "\n";
    if (!f.alpha.empty()) extra += "wigner.alpha = " + f.alpha + "\n";
    if (!f.state.empty()) extra += "wigner.state = " + f.state + "\n";
    const RunConfig w = parse_run_config(extra, "command line");
    if (!f.table.empty()) cfg.wigner_file = w.wigner_file;
    if (!f.alpha.empty()) cfg.wigner_alpha = w.wigner_alpha;
    if (!f.state.empty()) cfg.wigner_target = w.wigner_target;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Qubit-controlled displacement in a thermal Markovian environment"};
  app.require_subcommand(1);
  Flags f;

  auto add_common = [&f](CLI::App* sub) {
    sub->add_option("--config", f.config, "run configuration file (key = value)");
    sub->add_option("--out", f.out, "output path");
    sub->add_option("--method", f.method, "diagonal solver")->check(CLI::IsMember({"auto", "ode", "perturbative"}));
    sub->add_option("--oracle", f.oracle, "Fock oracle comparison")->check(CLI::IsMember({"off", "check", "full"}));
    sub->add_option("--threads", f.threads, "worker threads (default: QCDSIM_THREADS or 1)")->check(CLI::PositiveNumber);
  };

  CLI::App* simulate = app.add_subcommand("simulate", "solve the C-Matrix and write one table per time");
  add_common(simulate);
  CLI::App* scan = app.add_subcommand("scan", "entanglement witness and Wigner metric over (Na, g0 t)");
  add_common(scan);
  CLI::App* platform = app.add_subcommand("platform", "report a platform preset");
  platform->add_option("name", f.platform, "preset name")->required();
  CLI::App* oracle = app.add_subcommand("oracle-check", "compare the phase-space solution with the Fock oracle");
  add_common(oracle);
  CLI::App* wigner = app.add_subcommand("wigner", "evaluate W(alpha) for a stored C-Matrix table");
  add_common(wigner);
  wigner->add_option("--table", f.table, "C-Matrix table written by simulate");
  wigner->add_option("--alpha", f.alpha, "phase-space point 're, im'");
  wigner->add_option("--state", f.state, "reduced, plus or minus")->check(CLI::IsMember({"reduced", "plus", "minus"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? qcdsim::exit_code::ok : qcdsim::exit_code::usage;
  }

  try {
    if (platform->parsed()) return qcdsim::cmd_platform(f.platform, std::cout, std::cerr);
    const qcdsim::RunConfig cfg = resolve(f);
    const unsigned threads = qcdsim::resolve_threads(f.threads);
    if (simulate->parsed()) return qcdsim::cmd_simulate(cfg, std::cout, std::cerr, threads);
    if (scan->parsed()) return qcdsim::cmd_scan(cfg, std::cout, std::cerr, threads);
    if (oracle->parsed()) return qcdsim::cmd_oracle_check(cfg, std::cout, std::cerr);
    return qcdsim::cmd_wigner(cfg, std::cout, std::cerr);
  } catch (const qcdsim::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return qcdsim::exit_code::usage;
  }
}

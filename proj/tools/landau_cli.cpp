#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "landau/config.hpp"
#include "landau/errors.hpp"
#include "landau/experiment.hpp"
#include "landau/format.hpp"
#include "landau/svg.hpp"

using namespace landau;

namespace {

int finish(const ExperimentOutcome &o) {
  if (o.exit_code != 0) {
    std::cerr << "error: " << o.message << "\n";
    return o.exit_code;
  }
  std::cout << o.summary;
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Landau-Coulomb velocity-space solver and verification toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  auto *run_cmd = app.add_subcommand("run", "run a configured experiment");
  run_cmd->add_option("config", config_path, "INI config file")->required();
  run_cmd->add_option("--out", out_dir, "output directory (overrides output.dir)");

  auto *ladder_cmd = app.add_subcommand("ladder", "run with the De Giorgi ladder enabled");
  ladder_cmd->add_option("config", config_path, "INI config file")->required();
  ladder_cmd->add_option("--out", out_dir, "output directory (overrides output.dir)");

  std::vector<std::string> snapshots;
  std::vector<double> p_list{1.5}, m_list{4.5};
  std::string csv_out;
  auto *diag_cmd = app.add_subcommand("diagnose", "diagnostics.csv rows for snapshot files");
  diag_cmd->add_option("snapshots", snapshots, "snapshot files")->required();
  diag_cmd->add_option("--p", p_list, "L^p exponents");
  diag_cmd->add_option("--m", m_list, "weights, one per exponent or a single one");
  diag_cmd->add_option("--out", csv_out, "write the CSV here instead of stdout");

  InequalitiesConfig ic;
  ic.enabled = true;
  auto *ineq_cmd = app.add_subcommand("verify-inequalities", "run the inequality suite");
  ineq_cmd->add_option("--seed", ic.corpus_seed, "corpus seed");
  ineq_cmd->add_option("--size", ic.corpus_size, "corpus size")->check(CLI::Range(4, 100000));
  ineq_cmd->add_option("--n", ic.n, "grid points per axis");
  ineq_cmd->add_option("--l", ic.l, "grid half-width");
  ineq_cmd->add_option("--out", out_dir, "directory for the per-report CSV files");

  int conv_n = 16;
  double conv_l = 8.0;
  std::uint64_t conv_seed = 1;
  auto *conv_cmd =
      app.add_subcommand("convolve-check", "compare FFT convolution with direct summation");
  conv_cmd->add_option("--n", conv_n, "grid points per axis");
  conv_cmd->add_option("--l", conv_l, "grid half-width");
  conv_cmd->add_option("--seed", conv_seed, "seed of the random field");

  std::string plot_csv_path;
  auto *plot_cmd = app.add_subcommand("plot", "SVG line plots of every CSV column");
  plot_cmd->add_option("csv", plot_csv_path, "CSV file")->required();
  plot_cmd->add_option("--out", out_dir, "output directory (default: next to the CSV)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run_cmd || *ladder_cmd) {
      ExperimentConfig c = load_config(config_path);
      if (!out_dir.empty())
        c.output.dir = out_dir;
      if (*ladder_cmd)
        c.ladder.enabled = true;
      return finish(run_experiment(c));
    }
    if (*diag_cmd) {
      DiagnosticsConfig dc;
      dc.p_list = p_list;
      dc.m_list = m_list;
      if (dc.m_list.size() != 1 && dc.m_list.size() != dc.p_list.size())
        throw ConfigError("--m needs one entry or as many as --p");
      const std::string csv = diagnose_snapshots(snapshots, diagnostics_options(dc));
      if (csv_out.empty())
        std::cout << csv;
      else
        write_text_file(csv_out, csv);
      return 0;
    }
    if (*ineq_cmd) {
      if (ic.n % 2 != 0 || ic.n < 8)
        throw ConfigError("--n must be even and at least 8");
      const InequalitySuite s = run_inequality_suite(ic);
      if (!out_dir.empty())
        for (const auto &r : s.reports)
          write_text_file(out_dir + "/inequality_" + r.name + ".csv", report_csv(r));
      std::cout << inequality_suite_summary(s);
      return s.pass ? 0 : 1;
    }
    if (*conv_cmd) {
      if (conv_n % 2 != 0 || conv_n < 8)
        throw ConfigError("--n must be even and at least 8");
      const ConvolveCheck r = convolve_check(conv_n, conv_l, conv_seed);
      std::cout << "n " << r.n << "\nmax_rel_error " << fmt_double(r.max_rel_error)
                << "\nfft_seconds " << fmt_short(r.fft_seconds) << "\ndirect_seconds "
                << fmt_short(r.direct_seconds) << "\n";
      return r.max_rel_error <= 1e-10 ? 0 : 3;
    }
    if (*plot_cmd) {
      std::string dir = out_dir;
      if (dir.empty()) {
        const auto pos = plot_csv_path.find_last_of('/');
        dir = pos == std::string::npos ? "." : plot_csv_path.substr(0, pos);
      }
      for (const auto &p : plot_csv(plot_csv_path, dir))
        std::cout << p << "\n";
      return 0;
    }
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return 0;
}

// idqa: command-line front end for the interpolated-dynamics simulator.
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "idqa/errors.hpp"
#include "idqa/harness.hpp"
#include "idqa/verify/acceptance.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

// Peak ratio the reference experiment reports for tau = 1+1 us.
constexpr double kReferencePeak = 0.0238;

struct Overrides {
  std::string config;
  std::string model;
  std::string curves;
  std::string out;
  double tau_anneal = std::nan("");
  double tau_pause = std::nan("");
  double s_pause = std::nan("");
  double alpha = std::nan("");
  double temperature = std::nan("");
  double time_scale = std::nan("");
  int workers = 0;
  bool bare = false;
  bool no_timestamp = false;
  bool amplitudes = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--model", o.model, "'signature' or a model JSON file");
  cmd->add_option("--curves", o.curves, "'linear' or an A(s)/B(s) table");
  cmd->add_option("--alpha", o.alpha, "interpolation strength");
  cmd->add_option("--temperature", o.temperature, "bath temperature (energy units)");
  cmd->add_option("--time-scale", o.time_scale, "time units per microsecond");
  cmd->add_flag("--bare-energies", o.bare, "rates from E instead of B(s) E");
  cmd->add_option("--workers", o.workers, "worker threads");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_flag("--no-timestamp", o.no_timestamp, "omit the generated-at preamble");
}

idqa::RunConfig resolve(const Overrides& o) {
  idqa::RunConfig c = o.config.empty() ? idqa::RunConfig{} : idqa::load_config(o.config);
  if (!o.model.empty()) c.model = o.model;
  if (!o.curves.empty()) c.curves = o.curves;
  if (!o.out.empty()) c.output_dir = o.out;
  if (!std::isnan(o.tau_anneal)) c.tau_anneal_us = o.tau_anneal;
  if (!std::isnan(o.tau_pause)) c.tau_pause_us = o.tau_pause;
  if (!std::isnan(o.s_pause)) c.s_pause = o.s_pause;
  if (!std::isnan(o.alpha)) c.dynamics.alpha = o.alpha;
  if (!std::isnan(o.temperature)) c.dynamics.temperature = o.temperature;
  if (!std::isnan(o.time_scale)) c.dynamics.time_scale = o.time_scale;
  if (o.workers > 0) c.workers = o.workers;
  if (o.bare) c.dynamics.bare_energies = true;
  if (o.no_timestamp) c.timestamp = false;
  if (o.amplitudes) c.export_amplitudes = true;
  c.validate();
  return c;
}

void report_peaks(const idqa::RunConfig& c, const std::vector<idqa::SweepRow>& rows) {
  std::map<std::pair<double, double>, const idqa::SweepRow*> peaks;
  for (const auto& r : rows) {
    if (r.s_pause <= 0.0 || r.status != "ok") continue;
    auto& best = peaks[{r.tau_anneal, r.tau_pause}];
    if (best == nullptr || r.ratio > best->ratio) best = &r;
  }
  for (const auto& [tau, row] : peaks) {
    std::cout << "tau " << tau.first << "+" << tau.second
              << " us: peak ratio " << row->ratio << " at s_pause " << row->s_pause;
    if (c.curves != "linear") {
      std::cout << " (" << 100.0 * (row->ratio - kReferencePeak) / kReferencePeak << "% vs " << kReferencePeak << ")";
    }
    std::cout << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interpolated-dynamics quantum annealing simulator"};
  app.require_subcommand(1);
  Overrides o;

  auto* run = app.add_subcommand("run", "integrate one anneal (optionally with a pause)");
  add_common(run, o);
  run->add_option("--tau-anneal", o.tau_anneal, "anneal time (us)");
  run->add_option("--tau-pause", o.tau_pause, "pause duration (us)");
  run->add_option("--s-pause", o.s_pause, "pause location; 0 disables the pause");
  run->add_flag("--amplitudes", o.amplitudes, "also export complex amplitudes");

  auto* sweep = app.add_subcommand("sweep", "ratio P_s/P_c against the pause location");
  add_common(sweep, o);
  std::vector<double> grid;
  std::vector<std::string> taus;
  sweep->add_option("--grid", grid, "pause locations (default 0.02..0.98)");
  sweep->add_option("--tau", taus, "anneal+pause settings in us, e.g. 1+1");

  auto* spectrum = app.add_subcommand("spectrum", "low-lying gaps along the schedule");
  add_common(spectrum, o);
  std::size_t k = 0;
  double s_step = 0.0;
  auto* k_opt = spectrum->add_option("--k", k, "number of gaps");
  auto* step_opt = spectrum->add_option("--s-step", s_step, "spacing in s");

  auto* codegen = app.add_subcommand("codegen", "emit the right-hand side as source");
  add_common(codegen, o);
  std::string target;
  std::string output;
  codegen->add_option("--target", target, "c | exprlist");
  codegen->add_option("-o,--output", output, "output file");

  auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
  std::vector<int> only;
  int verify_workers = 1;
  verify->add_option("--only", only, "criterion numbers to run")->check(CLI::Range(1, 10));
  verify->add_option("--workers", verify_workers, "worker threads for the sweep");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) {
      idqa::verify::AcceptanceOptions opts;
      opts.workers = verify_workers;
      opts.only = only;
      opts.on_result = [](const auto& r) { std::cout << idqa::verify::format_result(r) << std::endl; };
      const auto results = idqa::verify::run_acceptance(opts);
      const bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
      return ok ? kExitOk : kExitNumerical;
    }

    auto config = resolve(o);
    if (*run) {
      const auto res = idqa::run_single(config);
      std::cout << "P_s " << res.final_ratio.ps << "  P_c " << res.final_ratio.pc << "  ratio "
                << res.final_ratio.ratio << "  max norm drift " << res.max_norm_drift << '\n';
    } else if (*sweep) {
      if (!grid.empty()) config.sweep_grid = grid;
      if (!taus.empty()) {
        config.sweep_taus_us.clear();
        for (const auto& t : taus) {
          const auto plus = t.find('+');
          if (plus == std::string::npos) throw idqa::ValidationError("--tau expects anneal+pause, got '" + t + "'");
          config.sweep_taus_us.emplace_back(std::stod(t.substr(0, plus)), std::stod(t.substr(plus + 1)));
        }
      }
      config.validate();
      report_peaks(config, idqa::run_sweep(config));
    } else if (*spectrum) {
      if (k_opt->count() > 0) config.spectrum_k = k;
      if (step_opt->count() > 0) config.spectrum_step = s_step;
      config.validate();
      std::cout << idqa::run_spectrum(config).size() << " rows written\n";
    } else if (*codegen) {
      if (!target.empty()) config.codegen_target = target;
      if (!output.empty()) config.codegen_output = output;
      config.validate();
      idqa::run_codegen(config);
      std::cout << "wrote " << config.codegen_output.string() << '\n';
    }
  } catch (const idqa::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const idqa::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

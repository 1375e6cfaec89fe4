#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "oscrad/amplitudes.hpp"
#include "oscrad/config.hpp"
#include "oscrad/oracle.hpp"
#include "oscrad/parallel.hpp"
#include "oscrad/verify.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace oscrad;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;

void emit(const std::string& path, const std::string& payload, bool quiet) {
  if (path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << payload;
  if (!quiet) std::cerr << "wrote " << path << "\n";
}

json complex_json(cplx v) { return json{{"re", v.real()}, {"im", v.imag()}}; }

int cmd_poles(const RunConfig& cfg, const std::string& out_path, bool quiet) {
  const PhysicalParams& p = cfg.physical;
  const double lam = solve_lambda_e(p);
  const SpectralData sd = derived_constants(p, lam);
  const auto [omega_paper, gamma_paper] = perturbative_resonances(p);

  const double A = p.coupling();
  const double residual =
      std::abs(A * lam * lam * lam - p.m * (p.omega0 * p.omega0 + lam * lam)) / (A * lam * lam * lam);

  json doc;
  doc["params"] = {{"e", p.e}, {"m", p.m}, {"c", p.c}, {"omega0", p.omega0}, {"hbar", p.hbar}};
  doc["lambda_e"] = lam;
  doc["cubic_residual"] = residual;
  doc["z_plus"] = complex_json(sd.z_plus);
  doc["z_minus"] = complex_json(sd.z_minus);
  doc["omega_e"] = sd.omega_e;
  doc["gamma_e"] = sd.gamma_e;
  doc["degenerate"] = sd.degenerate;
  doc["kappa0"] = sd.kappa0;
  doc["kappa1"] = sd.kappa1;
  doc["kappa2"] = sd.kappa2;
  doc["kappa_sq"] = sd.kappa_sq;
  doc["eigvec_norm_sq"] = sd.eigvec_norm_sq;
  doc["kappa_sq_display"] = sd.kappa_sq_display;
  doc["projection_weight"] = sd.kappa2 * lam / sd.kappa_sq;
  doc["perturbative"] = {{"omega_e_paper", omega_paper}, {"gamma_e_paper", gamma_paper}};
  doc["discrepancy"] = {
      {"gamma_ratio_paper_over_exact", gamma_paper / sd.gamma_e},
      {"omega_shift_exact", sd.omega_e - p.omega0},
      {"omega_shift_paper", omega_paper - p.omega0},
      {"note",
       "the truncated expansions overshoot gamma_e by about a factor 2 and give the "
       "opposite sign for the frequency shift; the exact roots of q are authoritative"}};
  emit(out_path, doc.dump(2) + "\n", quiet);
  return kExitOk;
}

int cmd_survival(const RunConfig& cfg, const std::string& out_path, bool with_oracle, bool quiet) {
  const PhysicalParams& p = cfg.physical;
  const SpectralData sd = solve_spectral_data(p);
  const std::vector<double> grid = cfg.grid.build();
  quad::Options qopt;
  qopt.abs_tol = cfg.tolerance_abs;
  qopt.rel_tol = cfg.tolerance_rel;

  struct Row {
    SurvivalBreakdown b;
    double oracle_gap = 0.0;
    bool ok = true;
    std::string note;
  };
  const std::vector<Row> rows = parallel_map<Row>(grid.size(), [&](size_t i) {
    Row row;
    try {
      row.b = survival_terms(grid[i], sd, p, qopt);
      if (with_oracle) {
        const cplx stone = oracle::stone_survival(grid[i], sd, p).value;
        row.oracle_gap = std::abs(row.b.S - stone) / std::abs(row.b.S);
      }
    } catch (const std::exception& ex) {
      row.ok = false;
      row.note = ex.what();
      row.b.t = grid[i];
    }
    return row;
  });

  std::vector<std::string> header{"t",       "re_S",      "im_S",         "abs_S",  "re_S_hat",
                                  "im_S_hat", "re_runaway", "im_runaway",  "re_resonance",
                                  "im_resonance", "re_j1", "im_j1",       "re_j2",  "im_j2",
                                  "j2_gap",  "status"};
  if (with_oracle) header.push_back("oracle_gap");
  CsvWriter csv(header);
  bool any_failed = false;
  for (const Row& row : rows) {
    const SurvivalBreakdown& b = row.b;
    std::vector<std::string> cells{
        format_double(b.t),           format_double(b.S.real()),
        format_double(b.S.imag()),    format_double(std::abs(b.S)),
        format_double(b.S_hat.real()), format_double(b.S_hat.imag()),
        format_double(b.runaway.real()), format_double(b.runaway.imag()),
        format_double(b.resonance.real()), format_double(b.resonance.imag()),
        format_double(b.j1.real()),   format_double(b.j1.imag()),
        format_double(b.j2.real()),   format_double(b.j2.imag()),
        format_double(b.j2_gap),      row.ok ? "ok" : "fail"};
    if (with_oracle) cells.push_back(format_double(row.oracle_gap));
    csv.add_row(cells);
    any_failed = any_failed || !row.ok;
  }
  emit(out_path, csv.to_string(), quiet);
  return any_failed ? kExitNumericalError : kExitOk;
}

int cmd_transition(const RunConfig& cfg, const std::string& out_path, const std::string& sweep,
                   bool quiet) {
  const PhysicalParams& p = cfg.physical;
  const SpectralData sd = solve_spectral_data(p);
  quad::Options qopt;
  qopt.abs_tol = cfg.tolerance_abs;
  qopt.rel_tol = cfg.tolerance_rel;

  if (!sweep.empty()) {
    // --sweep nu:START:STOP:POINTS emits the emission-line table |C3|(nu)
    double lo = 0.0, hi = 0.0;
    int npts = 0;
    if (std::sscanf(sweep.c_str(), "nu:%lf:%lf:%d", &lo, &hi, &npts) != 3 || npts < 2 ||
        !(lo > 0.0) || !(hi > lo))
      throw config_error("bad --sweep argument, expected nu:START:STOP:POINTS");
    CsvWriter csv({"nu", "re_C3", "im_C3", "abs_C3"});
    for (int i = 0; i < npts; ++i) {
      PhotonSpec ph = cfg.photon;
      ph.nu = lo + (hi - lo) * double(i) / (npts - 1);
      const cplx c3 = transition_c3(ph, sd, p);
      csv.add_row({format_double(ph.nu), format_double(c3.real()), format_double(c3.imag()),
                   format_double(std::abs(c3))});
    }
    emit(out_path, csv.to_string(), quiet);
    return kExitOk;
  }

  const std::vector<double> grid = cfg.grid.build();
  const bool limit = cfg.photon.eps == 0.0;
  struct Row {
    TransitionBreakdown b;
    bool ok = true;
    std::string note;
  };
  const std::vector<Row> rows = parallel_map<Row>(grid.size(), [&](size_t i) {
    Row row;
    try {
      row.b = limit ? transition_limit_point(grid[i], cfg.photon, sd, p, qopt)
                    : transition_eps(grid[i], cfg.photon, sd, p, qopt);
    } catch (const std::exception& ex) {
      row.ok = false;
      row.note = ex.what();
      row.b.t = grid[i];
    }
    return row;
  });

  CsvWriter csv({"t",        "re_A",     "im_A",     "abs_A",    "re_A_hat", "im_A_hat",
                 "re_runaway", "im_runaway", "re_resonance", "im_resonance", "re_photon",
                 "im_photon", "re_s1",   "im_s1",    "re_s2",    "im_s2",    "re_cut_c",
                 "im_cut_c",  "re_cut_pm", "im_cut_pm", "s1_dual_gap", "status"});
  bool any_failed = false;
  for (const Row& row : rows) {
    const TransitionBreakdown& b = row.b;
    csv.add_row({format_double(b.t),
                 format_double(b.A.real()), format_double(b.A.imag()), format_double(std::abs(b.A)),
                 format_double(b.A_hat.real()), format_double(b.A_hat.imag()),
                 format_double(b.runaway.real()), format_double(b.runaway.imag()),
                 format_double(b.resonance.real()), format_double(b.resonance.imag()),
                 format_double(b.photon_pole.real()), format_double(b.photon_pole.imag()),
                 format_double(b.s_integral_1.real()), format_double(b.s_integral_1.imag()),
                 format_double(b.s_integral_2.real()), format_double(b.s_integral_2.imag()),
                 format_double(b.cut_c.real()), format_double(b.cut_c.imag()),
                 format_double(b.cut_pm.real()), format_double(b.cut_pm.imag()),
                 format_double(b.s1_dual_gap), row.ok ? "ok" : "fail"});
    any_failed = any_failed || !row.ok;
  }
  emit(out_path, csv.to_string(), quiet);
  return any_failed ? kExitNumericalError : kExitOk;
}

int cmd_verify(const RunConfig& cfg, const std::string& out_path, bool quiet) {
  const auto checks = verify::run_all(cfg.physical, cfg.photon);
  json doc;
  doc["checks"] = json::array();
  for (const auto& c : checks) {
    json item;
    item["name"] = c.name;
    item["pass"] = c.pass;
    item["gap"] = c.gap;
    item["tolerance"] = c.tolerance;
    if (!c.note.empty()) item["note"] = c.note;
    doc["checks"].push_back(item);
    if (!quiet)
      std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name << "  gap=" << c.gap
                << " tol=" << c.tolerance << "\n";
  }
  const bool ok = verify::all_pass(checks);
  doc["all_pass"] = ok;
  emit(out_path, doc.dump(2) + "\n", quiet);
  return ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"point-limit charged-oscillator radiation engine"};
  app.require_subcommand(1);

  std::string config_path, out_path, sweep;
  bool with_oracle = false, quiet = false;
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--out", out_path, "output file (stdout when omitted)");
  app.add_flag("--quiet", quiet, "suppress progress messages");

  auto* poles = app.add_subcommand("poles", "spectral quantities and the discrepancy report");
  auto* survival = app.add_subcommand("survival", "survival amplitude over the time grid");
  survival->add_flag("--verify", with_oracle, "add the per-point Stone-oracle gap column");
  auto* transition = app.add_subcommand("transition", "photon transition amplitude");
  transition->add_option("--sweep", sweep, "nu:START:STOP:POINTS emission-line sweep");
  auto* verify_cmd = app.add_subcommand("verify", "run the oracle suite, exit 0 iff all pass");

  CLI11_PARSE(app, argc, argv);

  RunConfig cfg;
  try {
    cfg = config_path.empty() ? RunConfig::defaults() : RunConfig::from_file(config_path);
    cfg.validate();
    if (out_path.empty()) out_path = cfg.output_path;
  } catch (const std::exception& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return kExitConfigError;
  }

  try {
    if (poles->parsed()) return cmd_poles(cfg, out_path, quiet);
    if (survival->parsed()) return cmd_survival(cfg, out_path, with_oracle, quiet);
    if (transition->parsed()) return cmd_transition(cfg, out_path, sweep, quiet);
    if (verify_cmd->parsed()) return cmd_verify(cfg, out_path, quiet);
  } catch (const config_error& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& ex) {
    std::cerr << "numerical failure: " << ex.what() << "\n";
    return kExitNumericalError;
  }
  return kExitOk;
}

// spinphonon: ground-state toolkit for the two-band spin-motion chain.
//
// Subcommands: wannier, classical, dmrg, sweep, ed.
// Exit codes: 0 success, 2 configuration error, 3 partial sweep failure,
// 4 unconverged result (flagged, output still written).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spinphonon/classical_dimer.hpp"
#include "spinphonon/ed.hpp"
#include "spinphonon/lattice_wannier.hpp"
#include "spinphonon/model_builders.hpp"
#include "spinphonon/sweep.hpp"

using namespace spinphonon;
using nlohmann::json;

namespace {

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << std::endl;
  } else {
    atomic_write(out_path, text);
    std::cerr << "wrote " << out_path << "\n";
  }
}

int cmd_wannier(double vl, double l_over_a, const std::string& out) {
  LatticeSpec spec;
  spec.v_l_over_er = vl;
  spec.l_over_a = l_over_a;
  const auto r = compute_wannier_coefficients(spec);
  emit(coefficient_record_json(spec, r.wp, r.etas), out);
  return 0;
}

int cmd_classical(double j_max, double h_max, double step, const std::string& out) {
  emit(classical_grid_csv(j_max, h_max, step), out);
  return 0;
}

int cmd_dmrg(const SweepConfig& base, double g, double h,
             const std::string& model_file, const std::string& save_mps,
             const std::string& out) {
  SweepConfig cfg = base;
  PointRecord rec;
  if (!model_file.empty()) {
    std::ifstream f(model_file);
    if (!f) throw std::invalid_argument("cannot read " + model_file);
    std::stringstream ss;
    ss << f.rdbuf();
    ModelInstance mi = model_from_descriptor(ss.str());
    cfg.model = mi.model;
    cfg.n = mi.params.n;
    g = mi.params.g;
    h = mi.params.h;
  }
  std::optional<std::string> mps_path;
  if (!save_mps.empty()) mps_path = save_mps;
  rec = run_point(cfg, g, h, mps_path);
  emit(rec.to_json(), out);
  return rec.converged ? 0 : 4;
}

int cmd_sweep(SweepConfig cfg) {
  const SweepResult res = run_sweep(cfg);
  std::cerr << "sweep: " << res.completed << " points completed, " << res.failed
            << " failed\n";
  if (!res.finished) return 3;
  for (const auto& r : res.records)
    if (!r.converged) return 4;
  return 0;
}

int cmd_ed(const std::string& model, int n, double g, double h,
           std::optional<int> sector, const std::string& out) {
  ModelInstance mi = make_model(model, g, h, n);
  DenseModel dm = dense_from_mpo(mi.mpo);
  std::vector<int> charge;
  if (mi.mpo.d == 4)
    charge = {-1, 1, -1, 1};
  else
    charge = {-1, 1};
  GroundState gs = ground_state_exact(dm, sector, charge);
  json j;
  j["params"] = {{"model", model}, {"N", n}, {"g_over_Delta", g}, {"h_over_Delta", h}};
  j["energy"] = gs.energy;
  j["sector"] = sector ? json(*sector) : json(nullptr);
  emit(j.dump(2), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinphonon: ground states of photon-mediated spin-motion chains"};
  app.require_subcommand(1);

  // wannier
  auto* wannier = app.add_subcommand("wannier", "band structure and coupling coefficients");
  double vl = 20.0, l_over_a = 2.0;
  std::string wannier_out;
  wannier->add_option("--vl", vl, "trap depth V_L in recoil energies");
  wannier->add_option("--l-over-a", l_over_a, "interaction range L in units of a");
  wannier->add_option("--out", wannier_out, "write JSON here instead of stdout");

  // classical
  auto* classical = app.add_subcommand("classical", "dimerization grid (CSV)");
  double j_max = 2.0, h_max = 1.0, cstep = 0.02;
  std::string classical_out;
  classical->add_option("--j-max", j_max, "largest J/V_L");
  classical->add_option("--h-max", h_max, "largest h/V_L");
  classical->add_option("--step", cstep, "grid step in V_L units");
  classical->add_option("--out", classical_out, "write CSV here instead of stdout");

  // shared quantum options
  SweepConfig cfg;
  if (const char* env = std::getenv("SPINPHONON_OUT_DIR")) cfg.out_dir = env;
  if (const char* env = std::getenv("SPINPHONON_WORKERS")) cfg.workers = std::atoi(env);

  // dmrg
  auto* dmrg = app.add_subcommand("dmrg", "single-point ground state");
  double g = 0.0, h = 0.0;
  std::string model_file, save_mps, dmrg_out;
  dmrg->add_option("--g", g, "coupling g in units of Delta");
  dmrg->add_option("--h", h, "field h in units of Delta");
  dmrg->add_option("--n", cfg.n, "number of atoms");
  dmrg->add_option("--bond", cfg.dmrg.max_bond, "bond dimension D");
  dmrg->add_option("--tol", cfg.dmrg.rel_energy_tol, "per-sweep relative energy tolerance");
  dmrg->add_option("--sweeps", cfg.dmrg.max_sweeps, "sweep cap before escalation");
  dmrg->add_option("--bond-retry", cfg.dmrg.retry_bond, "escalated bond dimension");
  dmrg->add_option("--seed", cfg.dmrg.seed, "initial-state seed");
  dmrg->add_option("--model", cfg.model, "full | effective | hplus | subchain_xx");
  dmrg->add_option("--model-file", model_file, "JSON model descriptor");
  dmrg->add_option("--save-mps", save_mps, "write the final MPS checkpoint here");
  dmrg->add_option("--out", dmrg_out, "write the point record here");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "parallel (g,h) grid");
  std::string g_range = "0:2:0.02", h_range = "0:2:0.02";
  sweep->add_option("--g", g_range, "g range start:stop:step (units of Delta)");
  sweep->add_option("--h", h_range, "h range start:stop:step (units of Delta)");
  sweep->add_option("--n", cfg.n, "number of atoms");
  sweep->add_option("--bond", cfg.dmrg.max_bond, "bond dimension D");
  sweep->add_option("--tol", cfg.dmrg.rel_energy_tol, "per-sweep relative energy tolerance");
  sweep->add_option("--workers", cfg.workers, "parallel workers");
  sweep->add_option("--out", cfg.out_dir, "output directory");
  sweep->add_option("--seed", cfg.seed, "global seed");
  sweep->add_option("--model", cfg.model, "full | effective | hplus | subchain_xx");
  sweep->add_flag("--resume", cfg.resume, "skip completed points");
  sweep->add_flag("--save-mps", cfg.save_mps, "retain MPS checkpoints");
  sweep->add_option("--max-points", cfg.max_points,
                    "stop after this many new points (testing hook)")
      ->group("");

  // ed
  auto* ed = app.add_subcommand("ed", "exact diagonalization oracle");
  int ed_n = 8;
  double ed_g = 0.5, ed_h = 0.5;
  std::string ed_model = "full", ed_out;
  std::optional<int> ed_sector;
  int ed_sector_val = 0;
  auto* sopt = ed->add_option("--sector", ed_sector_val, "restrict to total sigma^z");
  ed->add_option("--n", ed_n, "number of atoms");
  ed->add_option("--g", ed_g, "coupling g in units of Delta");
  ed->add_option("--h", ed_h, "field h in units of Delta");
  ed->add_option("--model", ed_model, "full | effective | hplus | subchain_xx");
  ed->add_option("--out", ed_out, "write JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (wannier->parsed()) return cmd_wannier(vl, l_over_a, wannier_out);
    if (classical->parsed()) return cmd_classical(j_max, h_max, cstep, classical_out);
    if (dmrg->parsed()) return cmd_dmrg(cfg, g, h, model_file, save_mps, dmrg_out);
    if (sweep->parsed()) {
      cfg.g_range = parse_range(g_range);
      cfg.h_range = parse_range(h_range);
      return cmd_sweep(cfg);
    }
    if (ed->parsed()) {
      if (sopt->count() > 0) ed_sector = ed_sector_val;
      return cmd_ed(ed_model, ed_n, ed_g, ed_h, ed_sector, ed_out);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::length_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

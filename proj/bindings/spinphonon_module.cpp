// Python bindings for the main operations: Wannier coefficients, the
// classical dimerization model, exact diagonalization, DMRG point runs and
// the free-fermion oracle.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "spinphonon/classical_dimer.hpp"
#include "spinphonon/ed.hpp"
#include "spinphonon/lattice_wannier.hpp"
#include "spinphonon/model_builders.hpp"
#include "spinphonon/sweep.hpp"
#include "spinphonon/xx_chain.hpp"

namespace py = pybind11;
using namespace spinphonon;

namespace {

py::dict wannier_coefficients(double vl, double l_over_a) {
  LatticeSpec spec;
  spec.v_l_over_er = vl;
  spec.l_over_a = l_over_a;
  const auto r = compute_wannier_coefficients(spec);
  py::dict d;
  d["V_L_over_ER"] = spec.v_l_over_er;
  d["L_over_a"] = spec.l_over_a;
  d["eta0"] = r.etas.eta0;
  d["eta_a_over_a"] = r.etas.eta_a;
  d["eta_b_over_a"] = r.etas.eta_b;
  d["chi"] = r.etas.chi;
  d["Delta_over_ER"] = r.wp.delta;
  d["t_a_over_ER"] = r.wp.t_a;
  d["t_b_over_ER"] = r.wp.t_b;
  return d;
}

py::dict classical_minimize(double j, double h, double l_over_a) {
  ClassicalParams p;
  p.j = j;
  p.h = h;
  p.l = l_over_a;
  const auto sol = minimize_dimerization(p);
  py::dict d;
  d["delta_star"] = sol.delta_star;
  d["energy_per_atom"] = sol.energy_per_atom;
  d["dimerized"] = sol.dimerized;
  d["T_S"] = sol.t_strong;
  d["T_W"] = sol.t_weak;
  return d;
}

py::tuple classical_triplets(double delta, double h, double l_over_a) {
  ClassicalParams p;
  p.h = h;
  p.l = l_over_a;
  const auto tf = triplet_fractions(delta, p);
  return py::make_tuple(tf.t_strong, tf.t_weak);
}

double ed_ground_energy(const std::string& model, int n, double g, double h,
                        std::optional<int> sector) {
  ModelInstance mi = make_model(model, g, h, n);
  DenseModel dm = dense_from_mpo(mi.mpo);
  const std::vector<int> charge =
      mi.mpo.d == 4 ? std::vector<int>{-1, 1, -1, 1} : std::vector<int>{-1, 1};
  return ground_state_exact(dm, sector, charge).energy;
}

py::dict dmrg_point(const std::string& model, double g, double h, int n,
                    int bond, double tol, std::uint64_t seed) {
  SweepConfig cfg;
  cfg.model = model;
  cfg.n = n;
  cfg.dmrg.max_bond = bond;
  cfg.dmrg.rel_energy_tol = tol;
  cfg.dmrg.seed = seed;
  const PointRecord r = run_point(cfg, g, h);
  py::dict d;
  d["energy"] = r.energy;
  d["converged"] = r.converged;
  d["M_z"] = r.m_z;
  d["Phi"] = r.phi;
  d["D_T"] = r.d_t;
  d["D_x"] = r.d_x;
  d["phase"] = r.phase;
  d["flipped_count"] = r.flipped_count;
  d["D"] = r.bond;
  return d;
}

}  // namespace

PYBIND11_MODULE(_spinphonon, m) {
  m.doc() = "Ground-state toolkit for photon-mediated spin-motion chains";

  m.def("wannier_coefficients", &wannier_coefficients, py::arg("v_l_over_er") = 20.0,
        py::arg("l_over_a") = 2.0,
        "Band, Wannier and interaction coefficients at a working point");

  m.def("classical_minimize", &classical_minimize, py::arg("j"), py::arg("h") = 0.0,
        py::arg("l_over_a") = 2.0,
        "Optimal classical dimerization at coupling J (units of V_L)");
  m.def("classical_critical_coupling",
        [](double h, double l_over_a) {
          ClassicalParams p;
          p.l = l_over_a;
          return critical_coupling(h, p);
        },
        py::arg("h") = 0.0, py::arg("l_over_a") = 2.0);
  m.def("triplet_fractions", &classical_triplets, py::arg("delta"),
        py::arg("h") = 0.0, py::arg("l_over_a") = 2.0);

  m.def("xx_ground_energy",
        [](int n, double g, double h, double delta) {
          return XxChain(n, g, h, delta).ground_energy();
        },
        py::arg("n"), py::arg("g"), py::arg("h"), py::arg("delta") = 1.0,
        "Open-chain free-fermion ground energy of the composite-flip model");
  m.def("hplus_magnetization", &hplus_magnetization, py::arg("n"), py::arg("g"),
        py::arg("h"), py::arg("delta") = 1.0);

  m.def("ed_ground_energy", &ed_ground_energy, py::arg("model"), py::arg("n"),
        py::arg("g"), py::arg("h"), py::arg("sector") = std::nullopt,
        "Exact ground energy on a small chain");

  m.def("dmrg_point", &dmrg_point, py::arg("model"), py::arg("g"), py::arg("h"),
        py::arg("n"), py::arg("bond") = 100, py::arg("tol") = 1e-7,
        py::arg("seed") = 1,
        "DMRG ground state of one (g, h) point with observables");

  m.def("effective_couplings", [](double g, double delta, double chi) {
    const auto ep = effective_params(g, delta, chi);
    return py::make_tuple(ep.j1, ep.j2);
  });
}

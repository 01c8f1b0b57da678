#include "spinphonon/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "spinphonon/classical_dimer.hpp"
#include "spinphonon/model_builders.hpp"

namespace spinphonon {

namespace fs = std::filesystem;
using nlohmann::json;

int Range::count() const {
  if (step <= 0.0) throw std::invalid_argument("range step must be > 0");
  if (stop < start) throw std::invalid_argument("empty range");
  return static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
}

Range parse_range(const std::string& text) {
  Range r;
  const auto p1 = text.find(':');
  if (p1 == std::string::npos) {
    // single value
    r.start = r.stop = std::stod(text);
    r.step = 1.0;
    return r;
  }
  const auto p2 = text.find(':', p1 + 1);
  if (p2 == std::string::npos)
    throw std::invalid_argument("range must be start:stop:step");
  r.start = std::stod(text.substr(0, p1));
  r.stop = std::stod(text.substr(p1 + 1, p2 - p1 - 1));
  r.step = std::stod(text.substr(p2 + 1));
  return r;
}

std::string SweepConfig::canonical() const {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "model=%s g=%.10g:%.10g:%.10g h=%.10g:%.10g:%.10g n=%d D=%d "
                "tol=%.3g sweeps=%d retry=%d extra=%d seed=%llu",
                model.c_str(), g_range.start, g_range.stop, g_range.step,
                h_range.start, h_range.stop, h_range.step, n, dmrg.max_bond,
                dmrg.rel_energy_tol, dmrg.max_sweeps, dmrg.retry_bond,
                dmrg.extra_sweeps, static_cast<unsigned long long>(seed));
  return buf;
}

namespace {

std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 1469598103934665603ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

std::uint64_t SweepConfig::hash() const {
  const std::string c = canonical();
  return fnv1a(c.data(), c.size());
}

std::uint64_t point_seed(std::uint64_t global_seed, int gi, int hi) {
  std::uint64_t h = fnv1a(&global_seed, sizeof(global_seed));
  h = fnv1a(&gi, sizeof(gi), h);
  h = fnv1a(&hi, sizeof(hi), h);
  return h | 1ULL;
}

std::string point_filename(int gi, int hi) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "p_g%04d_h%04d.json", gi, hi);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::trunc | std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + tmp);
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("short write to " + tmp);
  }
  fs::rename(tmp, path);
}

std::string PointRecord::to_json() const {
  json j;
  j["g"] = g;
  j["h"] = h;
  j["N"] = n;
  j["D"] = bond;
  j["energy"] = energy;
  j["converged"] = converged;
  j["M_z"] = m_z;
  j["Phi"] = phi;
  j["D_T"] = d_t;
  j["D_x"] = d_x;
  j["K"] = k_valid ? json(k) : json(nullptr);
  j["K_residual"] = k_valid ? json(k_residual) : json(nullptr);
  j["phase"] = phase;
  j["flipped_count"] = flipped_count;
  j["meta"] = {{"sector", sector},
               {"hplus_profile_dev", hplus_profile_dev},
               {"locking_dev", locking_dev},
               {"period3_err", period3_err},
               {"structure_range", structure_range},
               {"mag_variance", mag_variance},
               {"config_hash", config_hash},
               {"seed", seed}};
  return j.dump(2);
}

PointRecord PointRecord::from_json(const std::string& text) {
  const json j = json::parse(text);
  PointRecord r;
  r.g = j.at("g");
  r.h = j.at("h");
  r.n = j.at("N");
  r.bond = j.at("D");
  r.energy = j.at("energy");
  r.converged = j.at("converged");
  r.m_z = j.at("M_z");
  r.phi = j.at("Phi");
  r.d_t = j.at("D_T");
  r.d_x = j.at("D_x");
  r.k_valid = !j.at("K").is_null();
  if (r.k_valid) {
    r.k = j.at("K");
    r.k_residual = j.at("K_residual");
  }
  r.phase = j.at("phase");
  r.flipped_count = j.at("flipped_count");
  const auto& m = j.at("meta");
  r.sector = m.at("sector");
  r.hplus_profile_dev = m.at("hplus_profile_dev");
  r.locking_dev = m.at("locking_dev");
  r.period3_err = m.at("period3_err");
  r.structure_range = m.at("structure_range");
  r.mag_variance = m.at("mag_variance");
  r.config_hash = m.at("config_hash");
  r.seed = m.at("seed");
  return r;
}

PointRecord run_point(const SweepConfig& cfg, double g, double h,
                      std::optional<std::string> mps_path) {
  PointRecord rec;
  rec.g = g;
  rec.h = h;
  rec.n = cfg.n;
  rec.config_hash = cfg.hash();
  rec.seed = cfg.dmrg.seed;

  ModelInstance mi = make_model(cfg.model, g, h, cfg.n);
  auto [psi, rep] = dmrg_ground_state(mi.mpo, cfg.dmrg);
  rec.energy = rep.final_energy;
  rec.converged = rep.converged;
  rec.bond = rep.bond_dim_used;

  if (psi.d == 4 && cfg.n >= 24) {
    ObservableSet obs = compute_observables(psi, mi.params);
    rec.m_z = obs.m_z;
    rec.phi = obs.phi;
    rec.d_t = obs.d_t;
    rec.d_x = obs.d_x;
    rec.k_valid = obs.k.valid;
    rec.k = obs.k.k;
    rec.k_residual = obs.k.residual;
    rec.flipped_count = obs.flipped_count;
    rec.sector = obs.sector;
    rec.hplus_profile_dev = obs.hplus_profile_dev;
    rec.locking_dev = obs.locking_dev;
    rec.period3_err = obs.period3_err;
    rec.structure_range = obs.structure_range;
    rec.mag_variance = obs.mag_variance;
    if (rec.converged) {
      rec.phase = phase_name(classify_phase(obs, true).phase);
    }
  }
  if (mps_path) save_mps(psi, *mps_path);
  return rec;
}

namespace {

// Scan-context reclassification along each fixed-g column: kink detection in
// dM_z/dh and plateau sectors (>= 3 consecutive h steps in one sector with
// period-3 order).
void reclassify_with_context(const SweepConfig& cfg,
                             std::vector<PointRecord>& recs) {
  const int ng = cfg.g_range.count(), nh = cfg.h_range.count();
  auto at = [&](int gi, int hi) -> PointRecord& { return recs[gi * nh + hi]; };

  for (int gi = 0; gi < ng; ++gi) {
    // plateau runs
    std::vector<std::optional<int>> plateau(nh);
    int run_start = 0;
    for (int hi = 1; hi <= nh; ++hi) {
      const bool same =
          hi < nh && at(gi, hi).sector == at(gi, run_start).sector &&
          at(gi, hi).converged && at(gi, run_start).converged;
      if (!same) {
        if (hi - run_start >= 3) {
          for (int k = run_start; k < hi; ++k)
            plateau[k] = at(gi, run_start).sector;
        }
        run_start = hi;
      }
    }

    // kink flag: backward dM/dh magnitude exceeds forward by 2x
    std::vector<bool> kink(nh, false);
    int kink_at = -1;
    for (int hi = nh - 2; hi >= 1; --hi) {
      const double back = std::abs(at(gi, hi).m_z - at(gi, hi - 1).m_z);
      const double fwd = std::abs(at(gi, hi + 1).m_z - at(gi, hi).m_z);
      if (back > 2.0 * fwd && back > 1e-6) {
        kink_at = hi;
        break;
      }
    }
    if (kink_at >= 0)
      for (int hi = 0; hi < kink_at; ++hi) kink[hi] = true;

    for (int hi = 0; hi < nh; ++hi) {
      PointRecord& r = at(gi, hi);
      if (!r.converged || r.n < 24) continue;
      ObservableSet obs;  // rebuild the classifier inputs from the record
      obs.n = r.n;
      obs.sector = r.sector;
      obs.phi = r.phi;
      obs.d_t = r.d_t;
      obs.period3_err = r.period3_err;
      obs.structure_range = r.structure_range;
      obs.flipped_count = r.flipped_count;
      obs.hplus_profile_dev = r.hplus_profile_dev;
      obs.k.valid = r.k_valid;
      obs.k.k = r.k;
      obs.k.k_err = r.k_residual;
      ClassifyContext ctx;
      ctx.has_scan = true;
      ctx.kink_flagged = kink[hi];
      ctx.plateau_sector = plateau[hi];
      r.phase = phase_name(classify_phase(obs, true, ctx).phase);
    }
  }
}

std::string sweep_csv(const std::vector<PointRecord>& recs) {
  std::ostringstream os;
  os << "g,h,N,D,energy,converged,M_z,Phi,D_T,D_x,K,K_residual,phase,"
        "flipped_count\n";
  for (const auto& r : recs) {
    os << r.g << ',' << r.h << ',' << r.n << ',' << r.bond << ','
       << std::setprecision(12) << r.energy << ',' << (r.converged ? 1 : 0)
       << ',' << r.m_z << ',' << r.phi << ',' << r.d_t << ',' << r.d_x << ',';
    if (r.k_valid)
      os << r.k << ',' << r.k_residual;
    else
      os << ',';
    os << ',' << r.phase << ',' << r.flipped_count << '\n';
  }
  return os.str();
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
  const int ng = cfg.g_range.count(), nh = cfg.h_range.count();
  const std::uint64_t chash = cfg.hash();

  fs::create_directories(fs::path(cfg.out_dir) / "points");
  const std::string manifest_path = (fs::path(cfg.out_dir) / "manifest.json").string();

  if (fs::exists(manifest_path)) {
    std::ifstream f(manifest_path);
    const json m = json::parse(f);
    if (m.at("config_hash").get<std::uint64_t>() != chash) {
      if (!cfg.resume)
        throw std::runtime_error(
            "output directory holds a different sweep; refusing to mix");
      throw std::runtime_error(
          "resume requested but the existing manifest has a different config");
    }
  } else {
    json m;
    m["config"] = cfg.canonical();
    m["config_hash"] = chash;
    m["tool"] = "spinphonon";
    m["points_total"] = ng * nh;
    atomic_write(manifest_path, m.dump(2));
  }

  // Work queue over missing points.
  struct Task {
    int gi, hi;
  };
  std::vector<Task> tasks;
  for (int gi = 0; gi < ng; ++gi)
    for (int hi = 0; hi < nh; ++hi) {
      const fs::path p = fs::path(cfg.out_dir) / "points" / point_filename(gi, hi);
      bool have = false;
      if (fs::exists(p)) {
        try {
          std::ifstream f(p);
          std::stringstream ss;
          ss << f.rdbuf();
          const PointRecord r = PointRecord::from_json(ss.str());
          have = r.config_hash == chash;
        } catch (...) {
          have = false;
        }
      }
      if (!have) tasks.push_back({gi, hi});
    }

  const auto t0 = std::chrono::steady_clock::now();
  std::atomic<std::size_t> next{0};
  std::atomic<int> failed{0};
  std::atomic<int> newly_done{0};
  const int budget = cfg.max_points;

  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= tasks.size()) return;
      if (budget >= 0 && newly_done.load() >= budget) return;
      const auto [gi, hi] = tasks[idx];
      SweepConfig local = cfg;
      local.dmrg.seed = point_seed(cfg.seed, gi, hi);
      try {
        const double g = cfg.g_range.value(gi), h = cfg.h_range.value(hi);
        std::optional<std::string> mps_path;
        if (cfg.save_mps)
          mps_path = (fs::path(cfg.out_dir) / "points" /
                      (point_filename(gi, hi) + ".mps"))
                         .string();
        PointRecord rec = run_point(local, g, h, mps_path);
        rec.config_hash = chash;
        const fs::path p =
            fs::path(cfg.out_dir) / "points" / point_filename(gi, hi);
        atomic_write(p.string(), rec.to_json());
        if (!rec.converged) failed.fetch_add(1);
      } catch (const std::exception& e) {
        std::fprintf(stderr, "sweep: point (%d,%d) failed: %s\n", gi, hi,
                     e.what());
        failed.fetch_add(1);
      }
      newly_done.fetch_add(1);
    }
  };

  std::vector<std::thread> pool;
  const int nw = std::max(1, cfg.workers);
  for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  // Aggregate whatever is present.
  SweepResult result;
  result.records.assign(static_cast<std::size_t>(ng) * nh, {});
  result.finished = true;
  for (int gi = 0; gi < ng; ++gi)
    for (int hi = 0; hi < nh; ++hi) {
      const fs::path p = fs::path(cfg.out_dir) / "points" / point_filename(gi, hi);
      PointRecord& slot = result.records[static_cast<std::size_t>(gi) * nh + hi];
      if (!fs::exists(p)) {
        result.finished = false;
        continue;
      }
      std::ifstream f(p);
      std::stringstream ss;
      ss << f.rdbuf();
      slot = PointRecord::from_json(ss.str());
      if (slot.config_hash != chash)
        throw std::runtime_error("record " + p.string() +
                                 " belongs to a different config");
      ++result.completed;
    }
  result.failed = failed.load();

  if (result.finished) {
    reclassify_with_context(cfg, result.records);
    for (int gi = 0; gi < ng; ++gi)
      for (int hi = 0; hi < nh; ++hi) {
        const fs::path p =
            fs::path(cfg.out_dir) / "points" / point_filename(gi, hi);
        atomic_write(p.string(),
                     result.records[static_cast<std::size_t>(gi) * nh + hi].to_json());
      }
    atomic_write((fs::path(cfg.out_dir) / "sweep.csv").string(),
                 sweep_csv(result.records));
  }

  // Finalize the manifest.
  {
    json m;
    m["config"] = cfg.canonical();
    m["config_hash"] = chash;
    m["tool"] = "spinphonon";
    m["points_total"] = ng * nh;
    m["points_completed"] = result.completed;
    m["failed"] = result.failed;
    m["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    atomic_write(manifest_path, m.dump(2));
  }
  return result;
}

std::string classical_grid_csv(double j_max, double h_max, double step) {
  std::ostringstream os;
  os << "J_over_VL,h_over_VL,delta_star_over_a,E_over_VL,T_S,T_W\n";
  const int nj = static_cast<int>(std::floor(j_max / step + 1e-9)) + 1;
  const int nh = static_cast<int>(std::floor(h_max / step + 1e-9)) + 1;
  for (int ji = 0; ji < nj; ++ji)
    for (int hi = 0; hi < nh; ++hi) {
      ClassicalParams p;
      p.j = ji * step;
      p.h = hi * step;
      const auto sol = minimize_dimerization(p);
      os << p.j << ',' << p.h << ',' << sol.delta_star << ','
         << std::setprecision(10) << sol.energy_per_atom << ',' << sol.t_strong
         << ',' << sol.t_weak << '\n';
    }
  return os.str();
}

}  // namespace spinphonon

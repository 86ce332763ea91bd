// qscram: scrambling and nonlocal-magic metrics for noisy Clifford
// encoding-decoding circuits.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qscram/experiments.hpp"
#include "qscram/moments.hpp"
#include "qscram/nonlocal_magic.hpp"
#include "qscram/scrambling.hpp"
#include "qscram/stabilizer.hpp"
#include "qscram/version.hpp"

using json = nlohmann::json;
using namespace qscram;

namespace {

struct NoiseSpec {
  std::string kind = "rz";  // rz | general-axis | depolarizing | kraus-file
  double theta = 0, gamma = 0, phi = 0, p = 0;
  std::string kraus_file;

  void validate() const {
    if (kind == "depolarizing" && (p < 0 || p > 1))
      throw CLI::ValidationError("--p must lie in [0,1]");
    if (kind != "rz" && kind != "general-axis" && kind != "depolarizing" && kind != "kraus-file")
      throw CLI::ValidationError("unknown noise kind: " + kind);
  }
  bool is_unitary() const { return kind == "rz" || kind == "general-axis"; }
  Mat unitary() const {
    if (kind == "rz") return rz_unitary(theta);
    if (kind == "general-axis") return axis_unitary(theta, gamma, phi);
    throw std::invalid_argument("noise is not unitary");
  }
  QuantumChannel channel() const {
    if (kind == "rz" || kind == "general-axis") return unitary_channel(unitary());
    if (kind == "depolarizing") return depolarizing_channel(p);
    std::ifstream in(kraus_file);
    if (!in) throw std::invalid_argument("cannot open kraus file: " + kraus_file);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return channel_from_json(text);
  }
  json to_json() const {
    return {{"kind", kind}, {"theta", theta}, {"gamma", gamma},
            {"phi", phi},   {"p", p},         {"kraus_file", kraus_file}};
  }
};

void add_noise_options(CLI::App* cmd, NoiseSpec& noise) {
  cmd->add_option("--noise", noise.kind, "noise kind: rz|general-axis|depolarizing|kraus-file");
  cmd->add_option("--theta", noise.theta, "rotation angle (radians)");
  cmd->add_option("--gamma", noise.gamma, "axis polar angle (radians)");
  cmd->add_option("--phi", noise.phi, "axis azimuthal angle (radians)");
  cmd->add_option("--p", noise.p, "depolarization probability");
  cmd->add_option("--kraus-file", noise.kraus_file, "JSON Kraus-set file");
}

std::string out_dir_default() {
  const char* env = std::getenv("QSCRAM_OUTPUT_DIR");
  return env ? env : ".";
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir + "/" + name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + dir + "/" + name);
  out << content;
}

void write_manifest(const std::string& dir, const std::string& command, const json& config,
                    const std::vector<std::string>& outputs, double wall_s) {
  json m;
  m["command"] = command;
  m["config"] = config;
  m["version"] = kVersion;
  m["wall_time_s"] = wall_s;
  m["outputs"] = outputs;
  write_file(dir, "run_manifest.json", m.dump(2) + "\n");
}

void print_value(double v) { std::printf("%.12g\n", v); }

Bipartition make_cut(int L, int na) {
  if (na <= 0) {
    if (L % 2 != 0)
      throw CLI::ValidationError("odd L needs an explicit --cut-a (A-site count)");
    return Bipartition::symmetric(L);
  }
  return Bipartition::first_sites(L, na);
}

Mat named_gate(const std::string& name, const NoiseSpec& noise) {
  if (name == "i" || name == "id") return Mat::Identity(2, 2);
  if (name == "x") return pauli_x();
  if (name == "y") return pauli_y();
  if (name == "z") return pauli_z();
  if (name == "h") return hadamard();
  if (name == "s" || name == "clifford-s") return s_gate();
  if (name == "sdg") return Mat(s_gate().adjoint());
  if (name == "t") return t_gate();
  if (name == "tdg") return Mat(t_gate().adjoint());
  if (name == "rz") return rz_unitary(noise.theta);
  if (name == "axis") return axis_unitary(noise.theta, noise.gamma, noise.phi);
  throw CLI::ValidationError("unknown gate: " + name);
}

CliffordTableau load_or_sample_tableau(const std::string& path, int L, std::uint64_t seed) {
  if (path.empty()) {
    Rng rng(seed);
    return random_clifford(L, rng);
  }
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open tableau file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return CliffordTableau::parse(text);
}

int run_selftest();

// merge a JSON config file into defaults before CLI flags are parsed
void apply_config_file(int argc, char** argv, json& cfg) {
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    std::string path;
    if (arg.rfind("--config=", 0) == 0) path = arg.substr(9);
    else if (arg == "--config" && i + 1 < argc) path = argv[i + 1];
    if (!path.empty()) {
      std::ifstream in(path);
      if (!in) throw CLI::ValidationError("--config", "cannot open config file: " + path);
      in >> cfg;
      return;
    }
  }
}

template <typename T>
void cfg_default(const json& cfg, const char* key, T& target) {
  if (cfg.contains(key)) target = cfg.at(key).get<T>();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scrambling and nonlocal-magic metrics for noisy Clifford circuits"};
  app.require_subcommand(1);

  json cfg;
  try {
    apply_config_file(argc, argv, cfg);
  } catch (const CLI::Error& e) {
    std::cerr << e.get_name() << ": cannot open config file\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "bad config file: " << e.what() << "\n";
    return 2;
  }

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (fields mirror the flags)");

  NoiseSpec noise;
  std::uint64_t seed = 1;
  int L = 4, k = 1, threads = 1, cut_a = 0;
  std::string out_dir = out_dir_default();
  cfg_default(cfg, "seed", seed);
  cfg_default(cfg, "L", L);
  cfg_default(cfg, "k", k);
  cfg_default(cfg, "threads", threads);
  cfg_default(cfg, "out_dir", out_dir);
  cfg_default(cfg, "noise", noise.kind);
  cfg_default(cfg, "theta", noise.theta);
  cfg_default(cfg, "gamma", noise.gamma);
  cfg_default(cfg, "phi", noise.phi);
  cfg_default(cfg, "p", noise.p);

  // ---- aotoc ----
  auto* aotoc_cmd = app.add_subcommand("aotoc", "bipartite A-OTOC of one sampled encoded circuit");
  std::string aotoc_method = "exact";
  int n_samples = 5000;
  std::string tableau_file;
  aotoc_cmd->add_option("--L", L, "number of qubits");
  aotoc_cmd->add_option("--k", k, "noisy sites");
  aotoc_cmd->add_option("--seed", seed, "seed for the sampled Clifford / estimators");
  aotoc_cmd->add_option("--method", aotoc_method, "exact|encoded|mc|state");
  aotoc_cmd->add_option("--samples", n_samples, "Monte Carlo sample count");
  aotoc_cmd->add_option("--cut-a", cut_a, "A-side site count (default symmetric)");
  aotoc_cmd->add_option("--tableau-file", tableau_file, "fixed encoding tableau (text format)");
  aotoc_cmd->add_option("--threads", threads, "worker threads");
  aotoc_cmd->add_option("--out-dir", out_dir, "output directory");
  add_noise_options(aotoc_cmd, noise);

  // ---- apep ----
  auto* apep_cmd = app.add_subcommand("apep", "APEP of one sampled encoded circuit (unitary noise)");
  std::string apep_method = "single-copy";
  apep_cmd->add_option("--L", L, "number of qubits");
  apep_cmd->add_option("--k", k, "noisy sites");
  apep_cmd->add_option("--seed", seed, "seed for the sampled Clifford");
  apep_cmd->add_option("--method", apep_method, "enumeration|four-copy|single-copy");
  apep_cmd->add_option("--cut-a", cut_a, "A-side site count (default symmetric)");
  apep_cmd->add_option("--tableau-file", tableau_file, "fixed encoding tableau (text format)");
  apep_cmd->add_option("--out-dir", out_dir, "output directory");
  add_noise_options(apep_cmd, noise);

  // ---- avg-aotoc / avg-apep / haar-avg ----
  auto* avg_aotoc_cmd = app.add_subcommand("avg-aotoc", "Clifford-ensemble bipartite A-OTOC");
  int finite_L = 0;
  avg_aotoc_cmd->add_option("--k", k, "noisy sites");
  avg_aotoc_cmd->add_option("--L", finite_L, "finite chain length (omit for the infinite limit)");
  avg_aotoc_cmd->add_option("--out-dir", out_dir, "output directory");
  add_noise_options(avg_aotoc_cmd, noise);

  auto* avg_apep_cmd = app.add_subcommand("avg-apep", "Clifford-ensemble APEP (unitary noise)");
  avg_apep_cmd->add_option("--k", k, "noisy sites");
  avg_apep_cmd->add_option("--L", finite_L, "finite chain length (omit for the infinite limit)");
  avg_apep_cmd->add_option("--out-dir", out_dir, "output directory");
  add_noise_options(avg_apep_cmd, noise);

  auto* haar_cmd = app.add_subcommand("haar-avg", "Haar-ensemble infinite-chain A-OTOC baseline");
  haar_cmd->add_option("--k", k, "noisy sites");
  haar_cmd->add_option("--out-dir", out_dir, "output directory");
  add_noise_options(haar_cmd, noise);

  // ---- capacity ----
  auto* cap_cmd = app.add_subcommand("capacity", "magic capacity of a single-qubit operation");
  std::string gate = "t";
  cap_cmd->add_option("--gate", gate, "i|x|y|z|h|s|clifford-s|sdg|t|tdg|rz|axis");
  cap_cmd->add_option("--out-dir", out_dir, "output directory");
  add_noise_options(cap_cmd, noise);

  // ---- sweep-fit ----
  auto* sweep_cmd = app.add_subcommand("sweep-fit", "capacity/APEP sweep with joint fit + bootstrap");
  SweepConfig scfg;
  int resamples = 1000;
  cfg_default(cfg, "n_unitaries", scfg.n_unitaries);
  cfg_default(cfg, "k_max", scfg.k_max);
  cfg_default(cfg, "resamples", resamples);
  cfg_default(cfg, "seed", scfg.seed);
  sweep_cmd->add_option("--n-unitaries", scfg.n_unitaries, "sample count");
  sweep_cmd->add_option("--k-max", scfg.k_max, "largest k");
  sweep_cmd->add_option("--resamples", resamples, "bootstrap resamples");
  sweep_cmd->add_option("--seed", scfg.seed, "master seed");
  sweep_cmd->add_option("--threads", scfg.threads, "worker threads");
  sweep_cmd->add_option("--out-dir", out_dir, "output directory");

  // ---- typicality ----
  auto* typ_cmd = app.add_subcommand("typicality", "variance-vs-L scans over sampled Cliffords");
  std::string which = "both";
  TypicalityApepConfig tap;
  TypicalityAotocConfig tao;
  cfg_default(cfg, "l_min", tap.l_min);
  cfg_default(cfg, "l_max", tap.l_max);
  typ_cmd->add_option("--which", which, "apep|aotoc|both");
  typ_cmd->add_option("--l-min", tap.l_min, "smallest L (APEP scan; A-OTOC uses max(4, l-min))");
  typ_cmd->add_option("--l-max", tap.l_max, "largest L");
  typ_cmd->add_option("--k-max", tap.k_max, "largest k");
  typ_cmd->add_option("--n-unitaries", tap.n_unitaries, "noise unitaries per L (APEP scan)");
  typ_cmd->add_option("--n-cliffords", tap.n_cliffords, "Cliffords per (L, unitary) (APEP scan)");
  typ_cmd->add_option("--aotoc-n-unitaries", tao.n_unitaries, "noise unitaries (A-OTOC scan)");
  typ_cmd->add_option("--aotoc-n-cliffords", tao.n_cliffords, "Cliffords (A-OTOC scan)");
  typ_cmd->add_option("--n-psi", tao.n_psi, "pure states per estimate (A-OTOC scan)");
  typ_cmd->add_option("--seed", seed, "master seed");
  typ_cmd->add_option("--threads", threads, "worker threads");
  typ_cmd->add_option("--out-dir", out_dir, "output directory");

  // ---- selftest ----
  auto* self_cmd = app.add_subcommand("selftest", "run the built-in oracle equivalences");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  try {
    noise.validate();
    json base_cfg = {{"seed", seed}, {"L", L}, {"k", k}, {"threads", threads},
                     {"noise", noise.to_json()}};

    if (*aotoc_cmd) {
      CliffordTableau c = load_or_sample_tableau(tableau_file, L, seed);
      auto cut = make_cut(L, cut_a);
      base_cfg["method"] = aotoc_method;
      if (aotoc_method == "exact") {
        print_value(aotoc_exact(omega_channel(c, noise.channel(), k), cut));
      } else if (aotoc_method == "encoded") {
        print_value(aotoc_exact_encoded(c, noise.channel(), k, cut));
      } else if (aotoc_method == "mc") {
        Rng rng(seed + 1);
        auto r = aotoc_definition_mc(omega_channel(c, noise.channel(), k), cut, n_samples, rng);
        std::printf("%.12g +- %.12g\n", r.mean, r.stderr_);
        base_cfg["samples"] = n_samples;
      } else if (aotoc_method == "state") {
        Rng rng(seed + 1);
        auto r = noise.is_unitary()
                     ? aotoc_state_estimator_encoded(c, noise.unitary(), k, cut, n_samples, rng)
                     : aotoc_state_estimator(omega_channel(c, noise.channel(), k), cut, n_samples, rng);
        std::printf("%.12g +- %.12g\n", r.mean, r.stderr_);
        base_cfg["samples"] = n_samples;
      } else {
        throw CLI::ValidationError("--method", "unknown method: " + aotoc_method);
      }
      write_manifest(out_dir, "aotoc", base_cfg, {}, elapsed());
      return 0;
    }

    if (*apep_cmd) {
      if (!noise.is_unitary())
        throw CLI::ValidationError("--noise", "apep needs unitary noise (rz/general-axis)");
      CliffordTableau c = load_or_sample_tableau(tableau_file, L, seed);
      auto cut = make_cut(L, cut_a);
      base_cfg["method"] = apep_method;
      double value = 0;
      if (apep_method == "single-copy") {
        value = apep_single_copy(c, noise.unitary(), k, cut);
      } else {
        Mat w = Mat::Identity(1, 1);
        Mat u = noise.unitary();
        for (int s = 0; s < L; ++s) w = kron(w, s < k ? u : Mat(Mat::Identity(2, 2)));
        Mat v = w.adjoint() * c.to_dense();
        if (apep_method == "enumeration") value = apep_enumeration(v, cut);
        else if (apep_method == "four-copy") value = apep_four_copy(v, cut);
        else throw CLI::ValidationError("--method", "unknown method: " + apep_method);
      }
      print_value(value);
      write_manifest(out_dir, "apep", base_cfg, {}, elapsed());
      return 0;
    }

    if (*avg_aotoc_cmd) {
      double value = finite_L > 0 ? avg_aotoc_finite_L(noise.channel(), k, finite_L)
                                  : avg_aotoc_infinite(noise.channel(), k);
      print_value(value);
      base_cfg["finite_L"] = finite_L;
      write_manifest(out_dir, "avg-aotoc", base_cfg, {}, elapsed());
      return 0;
    }
    if (*avg_apep_cmd) {
      if (!noise.is_unitary()) throw CLI::ValidationError("--noise", "avg-apep needs unitary noise");
      double value = finite_L > 0 ? avg_apep_finite_L(noise.unitary(), k, finite_L)
                                  : avg_apep_infinite(noise.unitary(), k);
      print_value(value);
      base_cfg["finite_L"] = finite_L;
      write_manifest(out_dir, "avg-apep", base_cfg, {}, elapsed());
      return 0;
    }
    if (*haar_cmd) {
      print_value(haar_avg_aotoc_infinite(natural_representation(noise.channel()), k));
      write_manifest(out_dir, "haar-avg", base_cfg, {}, elapsed());
      return 0;
    }

    if (*cap_cmd) {
      QuantumChannel ch = (noise.kind == "kraus-file") ? noise.channel()
                                                       : unitary_channel(named_gate(gate, noise));
      print_value(magic_capacity(ch));
      base_cfg["gate"] = gate;
      write_manifest(out_dir, "capacity", base_cfg, {}, elapsed());
      return 0;
    }

    if (*sweep_cmd) {
      auto rows = sweep_apep_vs_capacity(scfg);
      auto fit = bootstrap_fit(rows, resamples, scfg.seed + 1, scfg.threads);
      write_file(out_dir, "sweep.csv", sweep_csv(rows));
      write_file(out_dir, "fit.json", fit_json(fit));
      write_file(out_dir, "bootstrap.csv", bootstrap_csv(fit));
      json c2 = {{"n_unitaries", scfg.n_unitaries}, {"k_max", scfg.k_max},
                 {"resamples", resamples},          {"seed", scfg.seed},
                 {"threads", scfg.threads}};
      write_manifest(out_dir, "sweep-fit", c2, {"sweep.csv", "fit.json", "bootstrap.csv"}, elapsed());
      std::printf("a = %.6f  (95%% CI [%.6f, %.6f])\n", fit.a, fit.a_ci_lo, fit.a_ci_hi);
      std::printf("b = %.6f  (95%% CI [%.6f, %.6f])\n", fit.b, fit.b_ci_lo, fit.b_ci_hi);
      return 0;
    }

    if (*typ_cmd) {
      std::vector<std::string> outputs;
      tap.k_min = 1;
      tap.seed = seed;
      tap.threads = threads;
      if (which == "apep" || which == "both") {
        auto recs = typicality_apep(tap);
        write_file(out_dir, "typicality_apep.csv", typicality_csv(recs));
        outputs.push_back("typicality_apep.csv");
      }
      if (which == "aotoc" || which == "both") {
        tao.l_min = std::max(4, tap.l_min);
        tao.l_max = std::max(tao.l_min, tap.l_max);
        tao.k_min = 1;
        tao.k_max = tap.k_max;
        tao.seed = seed;
        tao.threads = threads;
        auto recs = typicality_aotoc(tao);
        write_file(out_dir, "typicality_aotoc.csv", typicality_csv(recs));
        outputs.push_back("typicality_aotoc.csv");
      }
      json c2 = {{"which", which},
                 {"l_min", tap.l_min},
                 {"l_max", tap.l_max},
                 {"k_max", tap.k_max},
                 {"n_unitaries", tap.n_unitaries},
                 {"n_cliffords", tap.n_cliffords},
                 {"aotoc_n_unitaries", tao.n_unitaries},
                 {"aotoc_n_cliffords", tao.n_cliffords},
                 {"n_psi", tao.n_psi},
                 {"seed", seed},
                 {"threads", threads}};
      write_manifest(out_dir, "typicality", c2, outputs, elapsed());
      return 0;
    }

    if (*self_cmd) return run_selftest();
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    std::cerr << "error: " << msg << "\n";
    return msg.find("cap") != std::string::npos ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  }
  return 2;
}

namespace {

int run_selftest() {
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
    if (!ok) ++failures;
  };
  Rng rng(2718);

  {
    auto c = random_clifford(2, rng);
    auto noise = unitary_channel(rz_unitary(1.5707963267948966));
    auto omega = omega_channel(c, noise, 1);
    auto cut = Bipartition::symmetric(2);
    double exact = aotoc_exact(omega, cut);
    Rng mc_rng(3);
    auto mc = aotoc_definition_mc(omega, cut, 4000, mc_rng);
    check("aotoc swap form vs definition Monte Carlo", std::abs(exact - mc.mean) < 3 * mc.stderr_);
    check("aotoc encoded fast path vs dense",
          std::abs(exact - aotoc_exact_encoded(c, noise, 1, cut)) < 1e-9);
  }
  {
    bool ok = true;
    for (int k = 1; k <= 3; ++k)
      for (double th : {0.4, 1.1, 2.7}) {
        ok = ok && std::abs(avg_aotoc_infinite(unitary_channel(rz_unitary(th)), k) -
                            rz_aotoc_closed_form(th, k)) < 1e-10;
        ok = ok && std::abs(avg_apep_infinite(rz_unitary(th), k) - rz_apep_closed_form(th, k)) < 1e-10;
      }
    check("ensemble closed forms (rz)", ok);
  }
  {
    auto c = random_clifford(2, rng);
    Mat u = t_gate();
    auto cut = Bipartition::symmetric(2);
    Mat w = kron(Mat(u.adjoint()), Mat(Mat::Identity(2, 2)));
    Mat v = w * c.to_dense();
    double a = apep_enumeration(v, cut);
    double b = apep_four_copy(v, cut);
    double s = apep_single_copy(c, u, 1, cut);
    check("apep enumeration = four-copy = single-copy",
          std::abs(a - b) < 1e-10 && std::abs(a - s) < 1e-10);
  }
  {
    auto c = random_clifford(4, rng);
    bool ok = std::abs(aotoc_exact_encoded(c, depolarizing_channel(0.7), 2,
                                           Bipartition::symmetric(4))) < 1e-10;
    ok = ok && std::abs(avg_aotoc_finite_L(depolarizing_channel(0.3), 1, 6)) < 1e-10;
    ok = ok && std::abs(haar_avg_aotoc_infinite(natural_representation(depolarizing_channel(1.0)), 1) -
                        0.1875) < 1e-12;
    check("depolarizing: Clifford zero, Haar 0.1875", ok);
  }
  {
    bool ok = std::abs(magic_capacity(unitary_channel(s_gate())) - 1.0) < 1e-6;
    Vec plus(2);
    plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
    Vec tp = t_gate() * plus;
    auto basis = enumerate_stabilizer_states(1);
    ok = ok && std::abs(robustness(Mat(tp * tp.adjoint()), basis).value - std::sqrt(2.0)) < 1e-6;
    check("magic capacity and T-state robustness", ok);
  }
  {
    Mat o(16, 16);
    Rng orng(7);
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) o(i, j) = {orng.gaussian(), orng.gaussian()};
    Mat acc = Mat::Zero(16, 16);
    for (std::uint64_t i = 0; i < clifford_group_order(1); ++i) {
      Mat u = clifford_from_index(1, i).to_dense();
      Mat u4 = kron(kron(u, u), kron(u, u));
      acc += u4.adjoint() * o * u4;
    }
    acc /= static_cast<double>(clifford_group_order(1));
    auto got = phi_clifford_4(DenseOperator(o, std::vector<int>(4, 2)), 1);
    check("fourth-moment projector vs exhaustive average",
          (got.mat - acc).cwiseAbs().maxCoeff() < 1e-8);
  }
  std::printf("%s\n", failures == 0 ? "selftest passed" : "selftest FAILED");
  return failures == 0 ? 0 : 1;
}

}  // namespace

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qscram/channels.hpp"
#include "qscram/rng.hpp"

namespace qscram {

// One sweep row: a sampled unitary, its magic capacity, and the ensemble
// APEP at each k.
struct SweepRow {
  int unitary_index = 0;
  double capacity = 0;
  int k = 0;
  double apep = 0;
};

struct SweepConfig {
  int n_unitaries = 1000;
  int k_max = 20;
  std::uint64_t seed = 1;
  int threads = 1;
};

std::vector<SweepRow> sweep_apep_vs_capacity(const SweepConfig& cfg);

// Joint nonlinear fit of apep = 1 - |cos(a (capacity - 1))|^{b k}.
struct FitResult {
  double a = 0, b = 0;
  double a_stderr = 0, b_stderr = 0;
  double a_ci_lo = 0, a_ci_hi = 0;
  double b_ci_lo = 0, b_ci_hi = 0;
  double rss = 0;
  int iterations = 0;
  bool converged = false;
  std::vector<std::pair<double, double>> bootstrap_samples;
};

double fit_ansatz(double capacity, int k, double a, double b);
FitResult fit_apep_capacity(const std::vector<SweepRow>& data, double a0 = 1.0, double b0 = 1.0);
// Block bootstrap: rows of one unitary resample together. Adds percentile
// CIs and parameter standard errors to the full-data fit.
FitResult bootstrap_fit(const std::vector<SweepRow>& data, int resamples, std::uint64_t seed,
                        int threads = 1);

// Typicality scans: variance over sampled Cliffords, averaged over sampled
// noise unitaries, per (L, k).
struct TypicalityRecord {
  int L = 0;
  int k = 0;
  std::vector<double> variance_per_unitary;
  double mean_variance = 0;
  double stderr_mean_variance = 0;
};

struct TypicalityApepConfig {
  int l_min = 3, l_max = 8;
  int n_unitaries = 4;
  int n_cliffords = 12;
  int k_min = 1, k_max = 3;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct TypicalityAotocConfig {
  int l_min = 4, l_max = 8;
  int n_psi = 8;
  int n_cliffords = 50;
  int n_unitaries = 10;
  int k_min = 1, k_max = 3;
  std::uint64_t seed = 1;
  int threads = 1;
};

std::vector<TypicalityRecord> typicality_apep(const TypicalityApepConfig& cfg);
std::vector<TypicalityRecord> typicality_aotoc(const TypicalityAotocConfig& cfg);

// Haar-random single-qubit unitary for experiment sampling.
Mat haar_random_unitary_2(Rng& rng);

// Spearman rank correlation (used by the trend assertions).
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);
// One-sided p-value for negative trend via the t approximation.
double spearman_negative_trend_pvalue(const std::vector<double>& xs, const std::vector<double>& ys);

// CSV / JSON artifact writers (fixed column order, full precision).
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string fit_json(const FitResult& fit);
std::string bootstrap_csv(const FitResult& fit);
std::string typicality_csv(const std::vector<TypicalityRecord>& recs);

// Deterministic parallel map over [0, n): results land in order.
void parallel_for_indexed(int n, int threads, const std::function<void(int)>& fn);

}  // namespace qscram

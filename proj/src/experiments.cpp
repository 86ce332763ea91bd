#include "qscram/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qscram/moments.hpp"
#include "qscram/nonlocal_magic.hpp"
#include "qscram/scrambling.hpp"
#include "qscram/stabilizer.hpp"
#include "qscram/tableau.hpp"

namespace qscram {

namespace {

std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double sample_variance(const std::vector<double>& v) {
  if (v.size() < 2) return 0;
  double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  double acc = 0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(v.size() - 1);
}

}  // namespace

void parallel_for_indexed(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  for (auto& th : pool) th.join();
}

Mat haar_random_unitary_2(Rng& rng) { return haar_unitary(2, rng); }

std::vector<SweepRow> sweep_apep_vs_capacity(const SweepConfig& cfg) {
  std::vector<SweepRow> rows(static_cast<std::size_t>(cfg.n_unitaries) * cfg.k_max);
  Rng master(cfg.seed);
  parallel_for_indexed(cfg.n_unitaries, cfg.threads, [&](int i) {
    Rng rng = master.split(static_cast<std::uint64_t>(i));
    Mat u = haar_unitary(2, rng);
    double cap = magic_capacity(unitary_channel(u));
    for (int k = 1; k <= cfg.k_max; ++k) {
      SweepRow& r = rows[static_cast<std::size_t>(i) * cfg.k_max + (k - 1)];
      r.unitary_index = i;
      r.capacity = cap;
      r.k = k;
      r.apep = avg_apep_infinite(u, k);
    }
  });
  return rows;
}

double fit_ansatz(double capacity, int k, double a, double b) {
  double g = std::cos(a * (capacity - 1.0));
  double m = std::max(std::abs(g), 1e-300);
  return 1.0 - std::pow(m, b * k);
}

namespace {

struct LmWork {
  const std::vector<SweepRow>& data;
  double rss(double a, double b) const {
    double acc = 0;
    for (const auto& r : data) {
      double e = fit_ansatz(r.capacity, r.k, a, b) - r.apep;
      acc += e * e;
    }
    return acc;
  }
  // J^T J and J^T r at (a, b)
  void normal_equations(double a, double b, Eigen::Matrix2d& jtj, Eigen::Vector2d& jtr) const {
    jtj.setZero();
    jtr.setZero();
    for (const auto& r : data) {
      double t = a * (r.capacity - 1.0);
      double g = std::cos(t);
      double m = std::max(std::abs(g), 1e-300);
      double mk = std::pow(m, b * r.k);
      double f = 1.0 - mk;
      // d m^{bk} / da = bk m^{bk-1} sign(g) (-sin t) (c-1)
      double dfda = b * r.k * std::pow(m, b * r.k - 1) * (g >= 0 ? 1.0 : -1.0) * std::sin(t) *
                    (r.capacity - 1.0);
      double dfdb = -mk * r.k * std::log(m);
      double res = f - r.apep;
      Eigen::Vector2d j(dfda, dfdb);
      jtj += j * j.transpose();
      jtr += j * res;
    }
  }
};

bool lm_minimize(const LmWork& w, double& a, double& b, double& rss, int& iters) {
  rss = w.rss(a, b);
  double lambda = 1e-3;
  for (iters = 0; iters < 500; ++iters) {
    Eigen::Matrix2d jtj;
    Eigen::Vector2d jtr;
    w.normal_equations(a, b, jtj, jtr);
    bool stepped = false;
    for (int attempt = 0; attempt < 60; ++attempt) {
      Eigen::Matrix2d damped = jtj;
      damped(0, 0) += lambda * std::max(jtj(0, 0), 1e-12);
      damped(1, 1) += lambda * std::max(jtj(1, 1), 1e-12);
      Eigen::Vector2d step = damped.ldlt().solve(jtr);
      double na = a - step[0], nb = b - step[1];
      double nrss = w.rss(na, nb);
      if (nrss <= rss) {
        double rel = (rss - nrss) / std::max(rss, 1e-300);
        a = na;
        b = nb;
        rss = nrss;
        lambda = std::max(lambda / 3.0, 1e-12);
        stepped = true;
        if (rel < 1e-10) return true;
        break;
      }
      lambda *= 2.0;
    }
    if (!stepped) return true;  // stuck at a local optimum with tiny gradient
  }
  return false;
}

}  // namespace

FitResult fit_apep_capacity(const std::vector<SweepRow>& data, double a0, double b0) {
  if (data.empty()) throw std::invalid_argument("fit_apep_capacity: empty dataset");
  FitResult out;
  LmWork w{data};
  // the |cos|^bk surface has several basins; descend from the caller's start
  // plus a fixed coarse grid and keep the best optimum
  double a = a0, b = b0, rss = 0;
  int iters = 0;
  out.converged = lm_minimize(w, a, b, rss, iters);
  for (double ga : {0.6, 1.0, 1.26, 1.6, 2.0})
    for (double gb : {0.7, 1.0, 1.5}) {
      double ca = ga, cb = gb, crss = 0;
      int cit = 0;
      bool ok = lm_minimize(w, ca, cb, crss, cit);
      if (ok && crss < rss - 1e-15) {
        a = ca;
        b = cb;
        rss = crss;
        iters = cit;
        out.converged = true;
      }
    }
  out.a = a;
  out.b = b;
  out.rss = rss;
  out.iterations = iters;
  // covariance-based errors at the optimum
  Eigen::Matrix2d jtj;
  Eigen::Vector2d jtr;
  w.normal_equations(a, b, jtj, jtr);
  double dof = std::max<double>(1.0, static_cast<double>(data.size()) - 2.0);
  Eigen::Matrix2d cov = jtj.inverse() * (rss / dof);
  out.a_stderr = std::sqrt(std::max(0.0, cov(0, 0)));
  out.b_stderr = std::sqrt(std::max(0.0, cov(1, 1)));
  out.a_ci_lo = a - 1.96 * out.a_stderr;
  out.a_ci_hi = a + 1.96 * out.a_stderr;
  out.b_ci_lo = b - 1.96 * out.b_stderr;
  out.b_ci_hi = b + 1.96 * out.b_stderr;
  return out;
}

FitResult bootstrap_fit(const std::vector<SweepRow>& data, int resamples, std::uint64_t seed,
                        int threads) {
  FitResult base = fit_apep_capacity(data);
  if (!base.converged) throw std::runtime_error("bootstrap_fit: full-data fit did not converge");

  // group rows by unitary for block resampling
  int max_u = 0;
  for (const auto& r : data) max_u = std::max(max_u, r.unitary_index);
  std::vector<std::vector<SweepRow>> blocks(static_cast<std::size_t>(max_u) + 1);
  for (const auto& r : data) blocks[static_cast<std::size_t>(r.unitary_index)].push_back(r);

  std::vector<std::pair<double, double>> samples(static_cast<std::size_t>(resamples),
                                                 {std::nan(""), std::nan("")});
  Rng master(seed);
  parallel_for_indexed(resamples, threads, [&](int i) {
    Rng rng = master.split(static_cast<std::uint64_t>(i));
    std::vector<SweepRow> re;
    re.reserve(data.size());
    for (std::size_t bidx = 0; bidx < blocks.size(); ++bidx) {
      auto pick = blocks[rng.uniform_below(blocks.size())];
      re.insert(re.end(), pick.begin(), pick.end());
    }
    LmWork w{re};
    double a = base.a, b = base.b, rss = 0;
    int iters = 0;
    if (lm_minimize(w, a, b, rss, iters)) samples[static_cast<std::size_t>(i)] = {a, b};
  });

  std::vector<double> as, bs;
  for (const auto& [a, b] : samples) {
    if (std::isnan(a)) continue;
    as.push_back(a);
    bs.push_back(b);
  }
  if (as.size() < 2) throw std::runtime_error("bootstrap_fit: all resamples failed");
  base.bootstrap_samples.clear();
  for (std::size_t i = 0; i < as.size(); ++i) base.bootstrap_samples.push_back({as[i], bs[i]});
  auto percentile = [](std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    double pos = q * (static_cast<double>(v.size()) - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    std::size_t hi = std::min(lo + 1, v.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return v[lo] * (1 - frac) + v[hi] * frac;
  };
  base.a_ci_lo = percentile(as, 0.025);
  base.a_ci_hi = percentile(as, 0.975);
  base.b_ci_lo = percentile(bs, 0.025);
  base.b_ci_hi = percentile(bs, 0.975);
  base.a_stderr = std::sqrt(sample_variance(as));
  base.b_stderr = std::sqrt(sample_variance(bs));
  return base;
}

std::vector<TypicalityRecord> typicality_apep(const TypicalityApepConfig& cfg) {
  const int n_l = cfg.l_max - cfg.l_min + 1;
  const int n_k = cfg.k_max - cfg.k_min + 1;
  std::vector<TypicalityRecord> recs(static_cast<std::size_t>(n_l) * n_k);
  for (int li = 0; li < n_l; ++li)
    for (int ki = 0; ki < n_k; ++ki) {
      auto& r = recs[static_cast<std::size_t>(li) * n_k + ki];
      r.L = cfg.l_min + li;
      r.k = cfg.k_min + ki;
      r.variance_per_unitary.assign(static_cast<std::size_t>(cfg.n_unitaries), 0.0);
    }
  Rng master(cfg.seed);
  parallel_for_indexed(n_l * cfg.n_unitaries, cfg.threads, [&](int task) {
    int li = task / cfg.n_unitaries;
    int ui = task % cfg.n_unitaries;
    int L = cfg.l_min + li;
    auto cut = Bipartition::first_sites(L, L / 2);
    Rng rng = master.split(static_cast<std::uint64_t>(task));
    Mat u = haar_unitary(2, rng);
    std::vector<CliffordTableau> cs;
    for (int c = 0; c < cfg.n_cliffords; ++c) cs.push_back(random_clifford(L, rng));
    for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
      if (k > L) continue;
      std::vector<double> vals;
      vals.reserve(cs.size());
      for (const auto& c : cs) vals.push_back(apep_single_copy(c, u, k, cut));
      auto& r = recs[static_cast<std::size_t>(li) * n_k + (k - cfg.k_min)];
      r.variance_per_unitary[static_cast<std::size_t>(ui)] = sample_variance(vals);
    }
  });
  for (auto& r : recs) {
    double mean = std::accumulate(r.variance_per_unitary.begin(), r.variance_per_unitary.end(), 0.0) /
                  static_cast<double>(r.variance_per_unitary.size());
    r.mean_variance = mean;
    r.stderr_mean_variance = std::sqrt(sample_variance(r.variance_per_unitary) /
                                       static_cast<double>(r.variance_per_unitary.size()));
  }
  return recs;
}

std::vector<TypicalityRecord> typicality_aotoc(const TypicalityAotocConfig& cfg) {
  const int n_l = cfg.l_max - cfg.l_min + 1;
  const int n_k = cfg.k_max - cfg.k_min + 1;
  std::vector<TypicalityRecord> recs(static_cast<std::size_t>(n_l) * n_k);
  for (int li = 0; li < n_l; ++li)
    for (int ki = 0; ki < n_k; ++ki) {
      auto& r = recs[static_cast<std::size_t>(li) * n_k + ki];
      r.L = cfg.l_min + li;
      r.k = cfg.k_min + ki;
      r.variance_per_unitary.assign(static_cast<std::size_t>(cfg.n_unitaries), 0.0);
    }
  Rng master(cfg.seed);
  parallel_for_indexed(n_l * cfg.n_unitaries, cfg.threads, [&](int task) {
    int li = task / cfg.n_unitaries;
    int ui = task % cfg.n_unitaries;
    int L = cfg.l_min + li;
    auto cut = Bipartition::first_sites(L, L / 2);
    Rng rng = master.split(static_cast<std::uint64_t>(task) + 0x100000);
    Mat u = haar_unitary(2, rng);
    std::vector<CliffordTableau> cs;
    for (int c = 0; c < cfg.n_cliffords; ++c) cs.push_back(random_clifford(L, rng));
    for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
      if (k > L) continue;
      std::vector<double> vals;
      vals.reserve(cs.size());
      for (const auto& c : cs)
        vals.push_back(aotoc_state_estimator_encoded(c, u, k, cut, cfg.n_psi, rng).mean);
      auto& r = recs[static_cast<std::size_t>(li) * n_k + (k - cfg.k_min)];
      r.variance_per_unitary[static_cast<std::size_t>(ui)] = sample_variance(vals);
    }
  });
  for (auto& r : recs) {
    double mean = std::accumulate(r.variance_per_unitary.begin(), r.variance_per_unitary.end(), 0.0) /
                  static_cast<double>(r.variance_per_unitary.size());
    r.mean_variance = mean;
    r.stderr_mean_variance = std::sqrt(sample_variance(r.variance_per_unitary) /
                                       static_cast<double>(r.variance_per_unitary.size()));
  }
  return recs;
}

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    std::size_t i = 0;
    while (i < idx.size()) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t t = i; t <= j; ++t) r[idx[t]] = avg;
      i = j + 1;
    }
    return r;
  };
  auto rx = ranks(xs), ry = ranks(ys);
  double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / static_cast<double>(rx.size());
  double my = std::accumulate(ry.begin(), ry.end(), 0.0) / static_cast<double>(ry.size());
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0;
  return sxy / std::sqrt(sxx * syy);
}

double spearman_negative_trend_pvalue(const std::vector<double>& xs, const std::vector<double>& ys) {
  // exact permutation test for the small sample sizes used here (n <= 8)
  const std::size_t n = xs.size();
  if (n != ys.size() || n < 3 || n > 8)
    throw std::invalid_argument("spearman_negative_trend_pvalue: 3 <= n <= 8 required");
  double observed = spearman(xs, ys);
  std::vector<double> perm(ys);
  std::sort(perm.begin(), perm.end());
  int count = 0, total = 0;
  do {
    if (spearman(xs, perm) <= observed + 1e-12) ++count;
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(count) / static_cast<double>(total);
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "unitary_index,capacity,k,apep\n";
  for (const auto& r : rows)
    os << r.unitary_index << ',' << fmt_full(r.capacity) << ',' << r.k << ',' << fmt_full(r.apep)
       << '\n';
  return os.str();
}

std::string fit_json(const FitResult& fit) {
  std::ostringstream os;
  os << "{\n"
     << "  \"a\": " << fmt_full(fit.a) << ",\n"
     << "  \"b\": " << fmt_full(fit.b) << ",\n"
     << "  \"a_stderr\": " << fmt_full(fit.a_stderr) << ",\n"
     << "  \"b_stderr\": " << fmt_full(fit.b_stderr) << ",\n"
     << "  \"a_ci95\": [" << fmt_full(fit.a_ci_lo) << ", " << fmt_full(fit.a_ci_hi) << "],\n"
     << "  \"b_ci95\": [" << fmt_full(fit.b_ci_lo) << ", " << fmt_full(fit.b_ci_hi) << "],\n"
     << "  \"rss\": " << fmt_full(fit.rss) << ",\n"
     << "  \"iterations\": " << fit.iterations << ",\n"
     << "  \"converged\": " << (fit.converged ? "true" : "false") << ",\n"
     << "  \"bootstrap_resamples\": " << fit.bootstrap_samples.size() << "\n"
     << "}\n";
  return os.str();
}

std::string bootstrap_csv(const FitResult& fit) {
  std::ostringstream os;
  os << "resample_index,a,b\n";
  for (std::size_t i = 0; i < fit.bootstrap_samples.size(); ++i)
    os << i << ',' << fmt_full(fit.bootstrap_samples[i].first) << ','
       << fmt_full(fit.bootstrap_samples[i].second) << '\n';
  return os.str();
}

std::string typicality_csv(const std::vector<TypicalityRecord>& recs) {
  std::ostringstream os;
  os << "L,k,mean_variance,stderr_mean_variance,variances\n";
  for (const auto& r : recs) {
    os << r.L << ',' << r.k << ',' << fmt_full(r.mean_variance) << ','
       << fmt_full(r.stderr_mean_variance) << ',';
    for (std::size_t i = 0; i < r.variance_per_unitary.size(); ++i) {
      if (i) os << ';';
      os << fmt_full(r.variance_per_unitary[i]);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace qscram

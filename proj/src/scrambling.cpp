#include "qscram/scrambling.hpp"

#include <bit>
#include <cmath>
#include <unordered_map>

namespace qscram {

namespace {

// embed a k-site single-qubit Kraus product into L sites (identity elsewhere)
Mat embed_first_sites(const std::vector<Mat>& site_ops, int L) {
  Mat acc = Mat::Identity(1, 1);
  for (int s = 0; s < L; ++s)
    acc = kron(acc, s < static_cast<int>(site_ops.size()) ? site_ops[s] : Mat::Identity(2, 2));
  return acc;
}

// permutation matrix on 2L qubit factors for the two-copy space
Mat two_copy_swap(const Bipartition& cut, bool swap_all) {
  int L = cut.n_sites();
  std::vector<int> perm(2 * L);
  for (int s = 0; s < 2 * L; ++s) perm[s] = s;
  for (int s = 0; s < L; ++s)
    if (swap_all || cut.in_a[s]) std::swap(perm[s], perm[L + s]);
  return permutation_operator(perm, 2);
}

double purity(const Mat& rho) { return (rho * rho).trace().real(); }

}  // namespace

QuantumChannel omega_channel(const CliffordTableau& c, const QuantumChannel& noise_1q, int k,
                             bool prime) {
  if (noise_1q.dim() != 2) throw std::invalid_argument("omega_channel: noise must be single-qubit");
  const int L = c.n;
  if (k < 1 || k > L) throw std::invalid_argument("omega_channel: k out of range");
  if (L > 6) throw std::invalid_argument("omega_channel: dense cap is L <= 6");
  Mat cd = c.to_dense();
  const std::size_t m = noise_1q.kraus.size();
  std::vector<Mat> ks;
  std::vector<std::size_t> idx(static_cast<std::size_t>(k), 0);
  for (;;) {
    std::vector<Mat> site_ops;
    for (int s = 0; s < k; ++s) site_ops.push_back(noise_1q.kraus[idx[static_cast<std::size_t>(s)]]);
    Mat lam = embed_first_sites(site_ops, L);
    ks.push_back(prime ? Mat(lam * cd) : Mat(cd.adjoint() * lam * cd));
    int s = k - 1;
    while (s >= 0 && ++idx[static_cast<std::size_t>(s)] == m) idx[static_cast<std::size_t>(s--)] = 0;
    if (s < 0) break;
  }
  return QuantumChannel(std::move(ks), std::vector<int>(static_cast<std::size_t>(L), 2));
}

Mat omega_kraus_unitary(const CliffordTableau& c, const Mat& u, int k, bool prime) {
  const int L = c.n;
  Mat cd = c.to_dense();
  Mat lam = embed_first_sites(std::vector<Mat>(static_cast<std::size_t>(k), u), L);
  return prime ? Mat(lam * cd) : Mat(cd.adjoint() * lam * cd);
}

double aotoc_exact(const QuantumChannel& e, const Bipartition& cut) {
  const int L = cut.n_sites();
  if (e.dim() != (1ll << L)) throw std::invalid_argument("aotoc_exact: cut does not match channel");
  if (L > 6) throw std::invalid_argument("aotoc_exact: two-copy cap exceeded (L <= 6)");
  const double d = static_cast<double>(e.dim());
  const double db = static_cast<double>(cut.d_b());
  Mat s_all = two_copy_swap(cut, true);
  Mat s_aa = two_copy_swap(cut, false);
  auto heis = e.heisenberg_kraus();
  // the two-copy map factorizes: apply the channel to each copy in turn
  const Eigen::Index dd = s_aa.rows();
  Mat eye = Mat::Identity(e.dim(), e.dim());
  Mat stage1 = Mat::Zero(dd, dd);
  for (const auto& w : heis) {
    Mat k1 = kron(w, eye);
    stage1 += k1 * s_aa * k1.adjoint();
  }
  Mat acc = Mat::Zero(dd, dd);
  for (const auto& w : heis) {
    Mat k2 = kron(eye, w);
    acc += k2 * stage1 * k2.adjoint();
  }
  double g = ((db * s_all - s_aa) * acc).trace().real() / (d * d);
  if (g < -1e-9 || g > 1 + 1e-9) throw std::runtime_error("aotoc_exact: value escaped [0,1]");
  return g;
}

double aotoc_exact_encoded(const CliffordTableau& c, const QuantumChannel& noise_1q, int k,
                           const Bipartition& cut, bool prime) {
  const int L = c.n;
  if (cut.n_sites() != L) throw std::invalid_argument("aotoc_exact_encoded: cut size mismatch");
  if (k < 1 || k > L) throw std::invalid_argument("aotoc_exact_encoded: k out of range");
  if (L > 12) throw std::invalid_argument("aotoc_exact_encoded: cap exceeded (L <= 12)");
  Eigen::Matrix4d t = pauli_transfer_heisenberg(noise_1q);
  CliffordTableau cinv = c.inverse();

  // images under C^dag of the 4^k noise-site strings (R (x) I)
  const std::uint64_t nk = 1ull << (2 * k);
  std::vector<PauliString> img_r;
  img_r.reserve(nk);
  for (std::uint64_t ridx = 0; ridx < nk; ++ridx) {
    std::uint64_t x = 0, z = 0;
    for (int s = 0; s < k; ++s) {
      int code = static_cast<int>((ridx >> (2 * s)) & 3);  // 0=I,1=X,2=Y,3=Z
      if (code == 1 || code == 2) x |= 1ull << s;
      if (code == 2 || code == 3) z |= 1ull << s;
    }
    img_r.push_back(conjugate_pauli(cinv, PauliString(L, x, z, 0)));
  }
  auto site_code = [](const PauliString& p, int s) {
    bool xb = (p.x >> s) & 1, zb = (p.z >> s) & 1;
    return xb ? (zb ? 2 : 1) : (zb ? 3 : 0);
  };

  const double d = static_cast<double>(1ll << L);
  const double da = static_cast<double>(cut.d_a());
  const double db = static_cast<double>(cut.d_b());
  const std::uint64_t mask_k = (k >= 64) ? ~0ull : ((1ull << k) - 1);

  double sum_t2 = 0, sum_tq = 0;
  // iterate over the Hermitian Pauli basis of A
  std::vector<int> a_sites;
  for (int s = 0; s < L; ++s)
    if (cut.in_a[s]) a_sites.push_back(s);
  const std::uint64_t na = a_sites.size();
  std::unordered_map<std::uint64_t, double> amp;  // key = x | z<<L over phaseless strings

  for (std::uint64_t pidx = 0; pidx < (1ull << (2 * na)); ++pidx) {
    std::uint64_t px = 0, pz = 0;
    for (std::uint64_t i = 0; i < na; ++i) {
      int code = static_cast<int>((pidx >> (2 * i)) & 3);
      if (code == 1 || code == 2) px |= 1ull << a_sites[i];
      if (code == 2 || code == 3) pz |= 1ull << a_sites[i];
    }
    PauliString p(L, px, pz, 0);  // Hermitian representative
    PauliString s1 = prime ? p : conjugate_pauli(c, p);
    // split into noise-site part and the rest
    PauliString rest(L, s1.x & ~mask_k, s1.z & ~mask_k, s1.phase);
    PauliString img_rest = conjugate_pauli(cinv, rest);
    amp.clear();
    // expand the first-k part through the transfer matrix
    std::vector<int> a_codes(static_cast<std::size_t>(k));
    for (int s = 0; s < k; ++s) a_codes[static_cast<std::size_t>(s)] = site_code(s1, s);
    std::vector<std::uint64_t> stack_r{0};
    std::vector<double> stack_c{1.0};
    for (int s = 0; s < k; ++s) {
      std::vector<std::uint64_t> nr;
      std::vector<double> nc;
      for (std::size_t i = 0; i < stack_r.size(); ++i)
        for (int b = 0; b < 4; ++b) {
          double coef = t(b, a_codes[static_cast<std::size_t>(s)]);
          if (std::abs(coef) < 1e-15) continue;
          nr.push_back(stack_r[i] | (std::uint64_t(b) << (2 * s)));
          nc.push_back(stack_c[i] * coef);
        }
      stack_r.swap(nr);
      stack_c.swap(nc);
    }
    static const double re_ipow[4] = {1, 0, -1, 0};
    for (std::size_t i = 0; i < stack_r.size(); ++i) {
      PauliString w = pauli_mul(img_r[stack_r[i]], img_rest);
      // M_P is Hermitian: amplitudes in the Hermitian basis are real
      double a = stack_c[i] * re_ipow[w.phase];
      amp[w.x | (w.z << L)] += a;
    }
    for (const auto& [key, a] : amp) {
      sum_t2 += a * a;
      std::uint64_t wx = key & ((1ull << L) - 1), wz = key >> L;
      bool b_identity = true;
      for (int s = 0; s < L && b_identity; ++s)
        if (!cut.in_a[s] && (((wx >> s) & 1) || ((wz >> s) & 1))) b_identity = false;
      if (b_identity) sum_tq += a * a;
    }
  }
  // Tr(M_P^2) = d * sum_key a^2 ; t_QP = d * a_{Q-key}
  double g = (db / da) * d * sum_t2 / (d * d) - (1.0 / (da * da)) * d * d * sum_tq / (d * d);
  if (g < -1e-9 || g > 1 + 1e-9) throw std::runtime_error("aotoc_exact_encoded: value escaped [0,1]");
  return g;
}

MeanWithError aotoc_definition_mc(const QuantumChannel& e, const Bipartition& cut, int n_samples,
                                  Rng& rng) {
  const int L = cut.n_sites();
  if (L > 4) throw std::invalid_argument("aotoc_definition_mc: cap exceeded (L <= 4)");
  const auto da = static_cast<int>(cut.d_a());
  const auto db = static_cast<int>(cut.d_b());
  const double d = static_cast<double>(e.dim());
  double acc = 0, acc2 = 0;
  for (int i = 0; i < n_samples; ++i) {
    Mat xb = kron(Mat::Identity(da, da), haar_unitary(db, rng));
    Mat ya = kron(haar_unitary(da, rng), Mat::Identity(db, db));
    Mat ey = e.apply_heisenberg(ya);
    Mat comm = xb * ey - ey * xb;
    double val = (comm.adjoint() * comm).trace().real() / (2 * d);
    acc += val;
    acc2 += val * val;
  }
  double mean = acc / n_samples;
  double var = std::max(0.0, acc2 / n_samples - mean * mean);
  return {mean, std::sqrt(var / std::max(1, n_samples - 1))};
}

MeanWithError aotoc_state_estimator(const QuantumChannel& omega, const Bipartition& cut, int n_psi,
                                    Rng& rng) {
  const int L = cut.n_sites();
  if (L > 8) throw std::invalid_argument("aotoc_state_estimator: cap exceeded (L <= 8)");
  const auto da = static_cast<int>(cut.d_a());
  const auto db = static_cast<int>(cut.d_b());
  const double na = (da + 1.0) / da;
  const double sl_min = 1.0 - 1.0 / db;
  std::vector<int> keep;
  for (int s = 0; s < L; ++s)
    if (cut.in_a[s]) keep.push_back(s);
  std::vector<int> dims(static_cast<std::size_t>(L), 2);

  double acc = 0, acc2 = 0;
  for (int i = 0; i < n_psi; ++i) {
    Vec psi = haar_state(da, rng);
    Mat proj = psi * psi.adjoint();
    Mat input = kron(proj, Mat::Identity(db, db) / db);
    // reorder so A sites sit in front if the cut is not contiguous
    if (!cut.is_symmetric_halves()) {
      std::vector<int> order;
      for (int s = 0; s < L; ++s)
        if (cut.in_a[s]) order.push_back(s);
      for (int s = 0; s < L; ++s)
        if (!cut.in_a[s]) order.push_back(s);
      // input built A-first; map back to site order
      std::vector<int> inv(order.size());
      for (std::size_t p = 0; p < order.size(); ++p) inv[order[p]] = static_cast<int>(p);
      input = reorder_subsystems(DenseOperator(input, dims), inv).mat;
    }
    Mat rho = omega.apply_heisenberg(input);
    Mat rho_a = partial_trace(DenseOperator(rho, dims), keep).mat;
    double sl = 1.0 - purity(rho);
    double sl_a = 1.0 - purity(rho_a);
    double val = na * (sl_a - db * (sl - sl_min));
    acc += val;
    acc2 += val * val;
  }
  double mean = acc / n_psi;
  double var = std::max(0.0, acc2 / n_psi - mean * mean);
  return {mean, std::sqrt(var / std::max(1, n_psi - 1))};
}

MeanWithError aotoc_state_estimator_encoded(const CliffordTableau& c, const Mat& u, int k,
                                            const Bipartition& cut, int n_psi, Rng& rng) {
  const int L = c.n;
  if (cut.n_sites() != L) throw std::invalid_argument("aotoc_state_estimator_encoded: cut mismatch");
  if (L > 12) throw std::invalid_argument("aotoc_state_estimator_encoded: cap exceeded (L <= 12)");
  if (u.rows() != 2) throw std::invalid_argument("aotoc_state_estimator_encoded: single-qubit unitary");
  // transfer coefficients of X -> u X u^dag
  Mat basis[4] = {Mat::Identity(2, 2), pauli_x(), pauli_y(), pauli_z()};
  Eigen::Matrix4d t;
  for (int a = 0; a < 4; ++a) {
    Mat img = u * basis[a] * u.adjoint();
    for (int b = 0; b < 4; ++b) t(b, a) = ((basis[b] * img).trace() / 2.0).real();
  }
  CliffordTableau cinv = c.inverse();
  const std::uint64_t nk = 1ull << (2 * k);
  std::vector<PauliString> img_r;
  img_r.reserve(nk);
  for (std::uint64_t ridx = 0; ridx < nk; ++ridx) {
    std::uint64_t x = 0, z = 0;
    for (int s = 0; s < k; ++s) {
      int code = static_cast<int>((ridx >> (2 * s)) & 3);
      if (code == 1 || code == 2) x |= 1ull << s;
      if (code == 2 || code == 3) z |= 1ull << s;
    }
    img_r.push_back(conjugate_pauli(cinv, PauliString(L, x, z, 0)));
  }
  auto site_code = [](const PauliString& p, int s) {
    bool xb = (p.x >> s) & 1, zb = (p.z >> s) & 1;
    return xb ? (zb ? 2 : 1) : (zb ? 3 : 0);
  };
  std::vector<int> a_sites;
  for (int s = 0; s < L; ++s)
    if (cut.in_a[s]) a_sites.push_back(s);
  const int na = static_cast<int>(a_sites.size());
  const auto da = static_cast<int>(cut.d_a());
  const std::uint64_t mask_k = (1ull << k) - 1;
  static const double re_ipow[4] = {1, 0, -1, 0};

  // per A-basis Pauli: surviving (B-identity) terms as (amplitude, A-restricted
  // string in index-space bit layout)
  struct Term {
    double amp;
    std::uint64_t xrev, zrev;
    int y_phase;  // number of Y sites mod 4
  };
  std::vector<std::vector<Term>> expansion(static_cast<std::size_t>(da) * da);
  for (std::uint64_t pidx = 0; pidx < (1ull << (2 * na)); ++pidx) {
    std::uint64_t px = 0, pz = 0;
    for (int i = 0; i < na; ++i) {
      int code = static_cast<int>((pidx >> (2 * i)) & 3);
      if (code == 1 || code == 2) px |= 1ull << a_sites[i];
      if (code == 2 || code == 3) pz |= 1ull << a_sites[i];
    }
    PauliString s1 = conjugate_pauli(c, PauliString(L, px, pz, 0));
    PauliString rest(L, s1.x & ~mask_k, s1.z & ~mask_k, s1.phase);
    PauliString img_rest = conjugate_pauli(cinv, rest);
    std::vector<std::uint64_t> stack_r{0};
    std::vector<double> stack_c{1.0};
    for (int s = 0; s < k; ++s) {
      int a = site_code(s1, s);
      std::vector<std::uint64_t> nr;
      std::vector<double> nc;
      for (std::size_t i = 0; i < stack_r.size(); ++i)
        for (int b = 0; b < 4; ++b) {
          double coef = t(b, a);
          if (std::abs(coef) < 1e-15) continue;
          nr.push_back(stack_r[i] | (std::uint64_t(b) << (2 * s)));
          nc.push_back(stack_c[i] * coef);
        }
      stack_r.swap(nr);
      stack_c.swap(nc);
    }
    auto& out = expansion[pidx];
    for (std::size_t i = 0; i < stack_r.size(); ++i) {
      PauliString w = pauli_mul(img_r[stack_r[i]], img_rest);
      bool b_identity = true;
      for (int s = 0; s < L && b_identity; ++s)
        if (!cut.in_a[s] && (((w.x >> s) & 1) || ((w.z >> s) & 1))) b_identity = false;
      if (!b_identity) continue;
      // compress the A part onto na qubits, bit-reversed for direct indexing
      std::uint64_t axr = 0, azr = 0;
      int n_y = 0;
      for (int q = 0; q < na; ++q) {
        bool xb = (w.x >> a_sites[q]) & 1, zb = (w.z >> a_sites[q]) & 1;
        if (xb) axr |= 1ull << (na - 1 - q);
        if (zb) azr |= 1ull << (na - 1 - q);
        if (xb && zb) ++n_y;
      }
      out.push_back({stack_c[i] * re_ipow[w.phase], axr, azr, n_y % 4});
    }
  }

  const double n_a_factor = (da + 1.0) / da;
  static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  double acc = 0, acc2 = 0;
  for (int sample = 0; sample < n_psi; ++sample) {
    Vec psi = haar_state(da, rng);
    double purity_a = 0;
    for (const auto& terms : expansion) {
      double e = 0;
      for (const auto& term : terms) {
        std::complex<double> s = 0;
        for (int i = 0; i < da; ++i) {
          int minus = std::popcount(static_cast<std::uint64_t>(i) & term.zrev) & 1;
          std::complex<double> v = ipow[term.y_phase] * (minus ? -1.0 : 1.0);
          s += std::conj(psi[i ^ static_cast<Eigen::Index>(term.xrev)]) * v * psi[i];
        }
        e += term.amp * s.real();
      }
      purity_a += e * e;
    }
    purity_a /= da;
    double val = n_a_factor * (1.0 - purity_a);
    acc += val;
    acc2 += val * val;
  }
  double mean = acc / n_psi;
  double var = std::max(0.0, acc2 / n_psi - mean * mean);
  return {mean, std::sqrt(var / std::max(1, n_psi - 1))};
}

double haar_avg_aotoc_infinite(const NaturalRep& x, int k) {
  if (x.x.rows() != 4) throw std::invalid_argument("haar_avg_aotoc_infinite: single-qubit reps only");
  double norm2 = (x.x.adjoint() * x.x).trace().real() / 4.0;
  double tr4 = (x.x.trace() / 4.0).real();
  return std::pow(norm2, k) - std::pow(tr4 * tr4, k);
}

}  // namespace qscram

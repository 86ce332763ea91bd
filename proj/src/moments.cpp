#include "qscram/moments.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "qscram/nonlocal_magic.hpp"
#include "qscram/pauli.hpp"
#include "qscram/s4.hpp"
#include "qscram/scrambling.hpp"

namespace qscram {

namespace {

// The per-site sums cancel to relative size ~4^L, so the engine works in
// extended precision; 160 digits keep all dyadic intermediates exact up to
// L = 128.
using hp = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<160>>;

struct hpc {
  hp re{0}, im{0};
  hpc() = default;
  hpc(const hp& r, const hp& i) : re(r), im(i) {}
  explicit hpc(const std::complex<double>& c) : re(c.real()), im(c.imag()) {}
  hpc operator+(const hpc& o) const { return {re + o.re, im + o.im}; }
  hpc operator-(const hpc& o) const { return {re - o.re, im - o.im}; }
  hpc operator*(const hpc& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
  hpc& operator+=(const hpc& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  hpc operator*(const hp& s) const { return {re * s, im * s}; }
};

hpc hpc_pow(const hpc& base, int e) {
  hpc acc(hp(1), hp(0));
  hpc b = base;
  for (int n = e; n > 0; n >>= 1) {
    if (n & 1) acc = acc * b;
    b = b * b;
  }
  return acc;
}

hp hp_pow(const hp& base, int e) {
  hp acc = 1;
  hp b = base;
  for (int n = e; n > 0; n >>= 1) {
    if (n & 1) acc *= b;
    b *= b;
  }
  return acc;
}

using Mat16 = std::array<std::array<hpc, 16>, 16>;

Mat16 to_hp16(const Mat& m) {
  Mat16 out;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) out[i][j] = hpc(m(i, j));
  return out;
}

Mat16 mul16(const Mat16& a, const Mat16& b) {
  Mat16 c;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      hpc acc;
      for (int k = 0; k < 16; ++k) acc += a[i][k] * b[k][j];
      c[i][j] = acc;
    }
  return c;
}

// index maps of the 24 permutation reps on 4 qubit copies:
// perm_apply[p][column] = row of the 1 in that column
const std::array<std::array<int, 16>, 24>& perm_apply_tables() {
  static const auto tables = [] {
    const auto& s4 = S4Data::instance();
    std::array<std::array<int, 16>, 24> t{};
    for (int p = 0; p < 24; ++p)
      for (int c = 0; c < 16; ++c) {
        int out = 0;
        for (int a = 0; a < 4; ++a) {
          int bit = (c >> (3 - a)) & 1;  // slot a = most significant first
          out |= bit << (3 - s4.perms[p][a]);
        }
        t[p][c] = out;
      }
    return t;
  }();
  return tables;
}

hpc trace_with_perm(const Mat16& m, int perm_idx) {
  const auto& ap = perm_apply_tables()[perm_idx];
  hpc acc;
  for (int b = 0; b < 16; ++b) acc += m[b][ap[b]];
  return acc;
}

// exact per-site class data: fq[class] = Tr((Lambda/4) t), ft = Tr(t)
struct SiteClassData {
  std::array<hp, 5> fq, ft;
};
const SiteClassData& site_class_data() {
  static const SiteClassData d = [] {
    SiteClassData out;
    const auto& s4 = S4Data::instance();
    Mat16 lam4 = to_hp16(lambda_16() / 4.0);
    std::array<bool, 5> done{};
    for (int p = 0; p < 24; ++p) {
      int c = s4.class_of[p];
      if (done[c]) continue;
      done[c] = true;
      out.fq[c] = trace_with_perm(lam4, p).re;
      hp tr = 0;
      const auto& ap = perm_apply_tables()[p];
      for (int b = 0; b < 16; ++b)
        if (ap[b] == b) tr += 1;
      out.ft[c] = tr;
    }
    return out;
  }();
  return d;
}

struct Kernels {
  std::array<hp, 5> d_plus{}, d_minus{};
  std::array<hp, 5> w_plus{}, w_minus{};  // by class of the composed permutation
};

Kernels kernels_at(int L) {
  const auto& s4 = S4Data::instance();
  const auto& site = site_class_data();
  Kernels k;
  for (int lam = 0; lam < 5; ++lam) {
    hp sp = 0, sm = 0;
    for (int c = 0; c < 5; ++c) {
      hp gq = hp_pow(site.fq[c], L);
      hp gt = hp_pow(site.ft[c], L);
      sp += s4.class_size[c] * s4.character[lam][c] * gq;
      sm += s4.class_size[c] * s4.character[lam][c] * (gt - gq);
    }
    k.d_plus[lam] = sp / 24;
    k.d_minus[lam] = sm / 24;
  }
  for (int c = 0; c < 5; ++c) {
    hp wp = 0, wm = 0;
    for (int lam = 0; lam < 5; ++lam) {
      hp dd = hp(s4.irrep_dim[lam]) * s4.irrep_dim[lam] / 576;
      if (k.d_plus[lam] != 0) wp += dd * s4.character[lam][c] / k.d_plus[lam];
      if (k.d_minus[lam] != 0) wm += dd * s4.character[lam][c] / k.d_minus[lam];
    }
    k.w_plus[c] = wp;
    k.w_minus[c] = wm;
  }
  return k;
}

// Ensemble trace sum_pi [b+_pi Tr(Bdy Q T_pi) + b-_pi Tr(Bdy (I-Q) T_pi)]
// for per-site boundary permutations bdyA/bdyB and noise-site tables.
// trQ/trT are the per-permutation moment traces of the noise object.
hp engine_contract(const std::array<hpc, 24>& tr_q, const std::array<hpc, 24>& tr_t, int n_a,
                   int n_b, int bdy_a, int bdy_b, const Kernels& ker) {
  const auto& s4 = S4Data::instance();
  const auto& site = site_class_data();
  hpc total;
  for (int ip = 0; ip < 24; ++ip) {
    hpc bp, bm;
    for (int is = 0; is < 24; ++is) {
      int cls = s4.class_of[s4.compose_idx[ip][is]];
      bp += tr_q[is] * ker.w_plus[cls];
      bm += (tr_t[is] - tr_q[is]) * ker.w_minus[cls];
    }
    // boundary site traces compose inside the class functions:
    // Tr(t_b (Lambda/4) t_pi) = fq[class(b o pi)], Tr(t_b t_pi) = ft[class(b o pi)]
    int ca = s4.class_of[s4.compose_idx[bdy_a][ip]];
    int cb = s4.class_of[s4.compose_idx[bdy_b][ip]];
    hp aq = hp_pow(site.fq[ca], n_a) * hp_pow(site.fq[cb], n_b);
    hp at = hp_pow(site.ft[ca], n_a) * hp_pow(site.ft[cb], n_b);
    total += bp * aq + bm * (at - aq);
  }
  return total.re;
}

int perm_index(const std::vector<std::vector<int>>& cycles) {
  auto v = perm_from_cycles(cycles, 4);
  S4Data::Perm p{v[0], v[1], v[2], v[3]};
  return S4Data::instance().index_of(p);
}

struct BoundaryPerms {
  int a_both;    // A sites, both versions
  int b_swap;    // B sites, full-swap version
  int b_local;   // B sites, A-only-swap version
  int apep_a;    // A sites for the APEP boundary
  int identity;
};
const BoundaryPerms& boundary_perms() {
  static const BoundaryPerms b = [] {
    const auto& s4 = S4Data::instance();
    int p12_34 = perm_index({{1, 2}, {3, 4}});
    int p13 = perm_index({{1, 3}});
    int p24 = perm_index({{2, 4}});
    BoundaryPerms out{};
    out.a_both = s4.compose_idx[p12_34][s4.compose_idx[p13][p24]];
    out.b_swap = s4.compose_idx[p12_34][p13];
    out.b_local = p12_34;
    out.apep_a = p12_34;
    out.identity = s4.index_of({0, 1, 2, 3});
    return out;
  }();
  return b;
}

void check_symmetric_args(int k, int L, const char* who) {
  if (L < 2 || L % 2 != 0) throw std::invalid_argument(std::string(who) + ": L must be even and >= 2 (symmetric cut)");
  if (k < 1 || k > L) throw std::invalid_argument(std::string(who) + ": k out of range");
  if (L > 128) throw std::invalid_argument(std::string(who) + ": L cap exceeded (L <= 128)");
}

Mat noise_pair_site(const QuantumChannel& noise_1q) {
  if (noise_1q.dim() != 2) throw std::invalid_argument("ensemble average: noise must be single-qubit");
  Mat x = natural_representation(noise_1q).x;
  return kron(x, x);
}

double aotoc_engine(const QuantumChannel& noise_1q, int k, int L) {
  const auto& s4 = S4Data::instance();
  const auto& site = site_class_data();
  Kernels ker = kernels_at(L);
  Mat16 n16 = to_hp16(noise_pair_site(noise_1q));
  Mat16 nlam = mul16(n16, to_hp16(lambda_16() / 4.0));
  std::array<hpc, 24> tr_q, tr_t;
  for (int p = 0; p < 24; ++p) {
    int cls = s4.class_of[p];
    tr_q[p] = hpc_pow(trace_with_perm(nlam, p), k) * hp_pow(site.fq[cls], L - k);
    tr_t[p] = hpc_pow(trace_with_perm(n16, p), k) * hp_pow(site.ft[cls], L - k);
  }
  const auto& bdy = boundary_perms();
  int na = L / 2, nb = L / 2;
  hp v_swap = engine_contract(tr_q, tr_t, na, nb, bdy.a_both, bdy.b_swap, ker);
  hp v_local = engine_contract(tr_q, tr_t, na, nb, bdy.a_both, bdy.b_local, ker);
  hp db = hp_pow(hp(2), L / 2);
  hp d2 = hp_pow(hp(4), L);
  return static_cast<double>((db * v_swap - v_local) / d2);
}

double apep_engine(const Mat& u, int k, int L) {
  if (u.rows() != 2) throw std::invalid_argument("avg_apep: noise must be a single-qubit unitary");
  const auto& s4 = S4Data::instance();
  const auto& site = site_class_data();
  Kernels ker = kernels_at(L);
  Mat u4 = kron(kron(u, u), kron(u, u));
  Mat m_site = u4.adjoint() * (lambda_16() / 4.0) * u4;
  Mat16 m16 = to_hp16(m_site);
  Mat16 mlam = mul16(m16, to_hp16(lambda_16() / 4.0));
  std::array<hpc, 24> tr_q, tr_t;
  for (int p = 0; p < 24; ++p) {
    int cls = s4.class_of[p];
    tr_q[p] = hpc_pow(trace_with_perm(mlam, p), k) * hp_pow(site.fq[cls], L - k);
    tr_t[p] = hpc_pow(trace_with_perm(m16, p), k) * hp_pow(site.fq[cls], L - k);
  }
  const auto& bdy = boundary_perms();
  hp v = engine_contract(tr_q, tr_t, L / 2, L / 2, bdy.apep_a, bdy.identity, ker);
  hp d2 = hp_pow(hp(4), L);
  return static_cast<double>(1 - v / d2);
}

}  // namespace

WeingartenTable weingarten_table(int L) {
  if (L < 1 || L > 64) throw std::invalid_argument("weingarten_table: L out of range");
  const auto& s4 = S4Data::instance();
  Kernels ker = kernels_at(L);
  WeingartenTable t;
  t.L = L;
  for (int lam = 0; lam < 5; ++lam) {
    t.d_plus[lam] = static_cast<double>(ker.d_plus[lam]);
    t.d_minus[lam] = static_cast<double>(ker.d_minus[lam]);
  }
  for (int p = 0; p < 24; ++p)
    for (int s = 0; s < 24; ++s) {
      int cls = s4.class_of[s4.compose_idx[p][s]];
      t.w_plus[p][s] = static_cast<double>(ker.w_plus[cls]);
      t.w_minus[p][s] = static_cast<double>(ker.w_minus[cls]);
    }
  return t;
}

namespace {

// Tr(O . P^{(x)4} . T_sigma) and dense accumulation of P^{(x)4} T_sigma,
// copy-major layout on d = 2^L.
struct SignedPermAction {
  // per full index j: row index and complex value of column j
  const PauliString& p;
  int L;
  int perm;  // S4 index

  template <typename F>
  void for_each(F&& f) const {
    const auto& s4 = S4Data::instance();
    const Eigen::Index d = Eigen::Index(1) << L;
    const Eigen::Index big = d * d * d * d;
    std::uint64_t xrev = 0, zrev = 0;
    for (int q = 0; q < L; ++q) {
      if ((p.x >> q) & 1) xrev |= 1ull << (L - 1 - q);
      if ((p.z >> q) & 1) zrev |= 1ull << (L - 1 - q);
    }
    static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    const int base_phase = (p.phase + std::popcount(p.x & p.z)) % 4;
    const auto& sp = s4.perms[perm];
    for (Eigen::Index j = 0; j < big; ++j) {
      // copy digits of j (copy 0 most significant)
      Eigen::Index digits[4];
      Eigen::Index rest = j;
      for (int a = 3; a >= 0; --a) { digits[a] = rest % d; rest /= d; }
      Eigen::Index moved[4];
      for (int a = 0; a < 4; ++a) moved[sp[a]] = digits[a];
      std::complex<double> val = 1.0;
      Eigen::Index row = 0;
      for (int a = 0; a < 4; ++a) {
        Eigen::Index c = moved[a];
        int minus = std::popcount(static_cast<std::uint64_t>(c) & zrev) & 1;
        val *= ipow[base_phase] * (minus ? -1.0 : 1.0);
        row = row * d + (c ^ static_cast<Eigen::Index>(xrev));
      }
      f(row, j, val);
    }
  }
};

}  // namespace

MomentDecomposition moment_decomposition(const DenseOperator& o4, int L) {
  if (L > 3) throw std::invalid_argument("moment_decomposition: dense cap is L <= 3");
  const Eigen::Index d = Eigen::Index(1) << L;
  if (o4.dim() != d * d * d * d) throw std::invalid_argument("moment_decomposition: size mismatch");
  WeingartenTable wt = weingarten_table(L);
  const double d2 = static_cast<double>(d) * static_cast<double>(d);

  std::array<std::complex<double>, 24> tr_q{}, tr_t{};
  auto paulis = enumerate_paulis(L);
  for (int s = 0; s < 24; ++s) {
    std::complex<double> q_acc = 0;
    for (const auto& p : paulis) {
      SignedPermAction act{p, L, s};
      std::complex<double> tr = 0;
      act.for_each([&](Eigen::Index row, Eigen::Index col, std::complex<double> v) {
        tr += o4.mat(col, row) * v;
      });
      q_acc += tr;
      if (p.is_identity_bits()) tr_t[s] = tr;  // P = I term is Tr(O T_sigma)
    }
    tr_q[s] = q_acc / d2;
  }

  MomentDecomposition md;
  for (int p = 0; p < 24; ++p) {
    std::complex<double> bp = 0, bm = 0;
    for (int s = 0; s < 24; ++s) {
      bp += wt.w_plus[p][s] * tr_q[s];
      bm += wt.w_minus[p][s] * (tr_t[s] - tr_q[s]);
    }
    md.b_plus[p] = bp;
    md.b_minus[p] = bm;
  }
  return md;
}

DenseOperator phi_clifford_4(const DenseOperator& o4, int L) {
  MomentDecomposition md = moment_decomposition(o4, L);
  const Eigen::Index d = Eigen::Index(1) << L;
  const Eigen::Index big = d * d * d * d;
  const double d2 = static_cast<double>(d) * static_cast<double>(d);
  Mat out = Mat::Zero(big, big);
  auto paulis = enumerate_paulis(L);
  for (int s = 0; s < 24; ++s) {
    // b-_s T_sigma + (b+_s - b-_s) Q T_sigma
    std::complex<double> ct = md.b_minus[s];
    std::complex<double> cq = (md.b_plus[s] - md.b_minus[s]) / d2;
    for (const auto& p : paulis) {
      std::complex<double> coef = p.is_identity_bits() ? (cq + ct) : cq;
      if (std::abs(coef) < 1e-18) continue;
      SignedPermAction act{p, L, s};
      act.for_each([&](Eigen::Index row, Eigen::Index col, std::complex<double> v) {
        out(row, col) += coef * v;
      });
    }
  }
  return DenseOperator(std::move(out), o4.dims);
}

double avg_aotoc_finite_L(const QuantumChannel& noise_1q, int k, int L) {
  check_symmetric_args(k, L, "avg_aotoc_finite_L");
  double g = aotoc_engine(noise_1q, k, L);
  if (g < -1e-9 || g > 1 + 1e-9) throw std::runtime_error("avg_aotoc_finite_L: value escaped [0,1]");
  return g;
}

double avg_aotoc_infinite(const QuantumChannel& noise_1q, int k) {
  // single-site limit: ||X/2||_2^{2k} - [Tr(T_(12)(34) (X (x) X^dag) Lambda)/16]^k;
  // all three (2,2) pairings give the same trace.
  Mat x = natural_representation(noise_1q).x;
  double norm2 = (x.adjoint() * x).trace().real() / 4.0;
  Mat t = permutation_operator(perm_from_cycles({{1, 2}, {3, 4}}, 4), 2);
  double tr = (t * kron(x, x.adjoint()) * lambda_16()).trace().real() / 16.0;
  double g = std::pow(norm2, k) - std::pow(tr, k);
  if (g < -1e-9 || g > 1 + 1e-9) throw std::runtime_error("avg_aotoc_infinite: value escaped [0,1]");
  return g;
}

double avg_apep_finite_L(const Mat& u, int k, int L) {
  check_symmetric_args(k, L, "avg_apep_finite_L");
  double v = apep_engine(u, k, L);
  if (v < -1e-9 || v >= 1.0) throw std::runtime_error("avg_apep_finite_L: value escaped [0,1)");
  return v;
}

double avg_apep_infinite(const Mat& u, int k) {
  if (u.rows() != 2) throw std::invalid_argument("avg_apep_infinite: single-qubit unitaries only");
  Mat u4 = kron(kron(u, u), kron(u, u));
  Mat t = permutation_operator(perm_from_cycles({{1, 2}, {3, 4}}, 4), 2);
  double tr = (t * u4 * lambda_16() * u4.adjoint() * lambda_16()).trace().real() / 64.0;
  double v = 1.0 - std::pow(tr, k);
  if (v < -1e-9 || v >= 1.0) throw std::runtime_error("avg_apep_infinite: value escaped [0,1)");
  return v;
}

double rz_aotoc_closed_form(double theta, int k) {
  return 1.0 - std::pow((3.0 + std::cos(2 * theta)) / 4.0, k);
}

double rz_apep_closed_form(double theta, int k) {
  return 1.0 - std::pow((7.0 + std::cos(4 * theta)) / 8.0, k);
}

HaarCliffordReport haar_vs_clifford_report(const QuantumChannel& noise_1q, int k) {
  HaarCliffordReport r;
  r.clifford_aotoc = avg_aotoc_infinite(noise_1q, k);
  r.haar_aotoc = haar_avg_aotoc_infinite(natural_representation(noise_1q), k);
  if (noise_1q.kraus.size() == 1) {
    r.clifford_apep = avg_apep_infinite(noise_1q.kraus[0], k);
    r.apep_defined = true;
  }
  return r;
}

}  // namespace qscram

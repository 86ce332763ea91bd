#include "qscram/nonlocal_magic.hpp"

#include <cmath>
#include <unordered_map>

#include "qscram/pauli.hpp"

namespace qscram {

namespace {

Mat kron4(const Mat& m) { return kron(kron(m, m), kron(m, m)); }

// T^A for a copy permutation: copy-major factor layout (copy, site), the
// permutation acts on the copies of A sites only.
Mat copy_permutation_on_a(const std::vector<int>& copy_perm, const Bipartition& cut, int copies) {
  const int L = cut.n_sites();
  std::vector<int> perm(static_cast<std::size_t>(copies) * L);
  for (int c = 0; c < copies; ++c)
    for (int s = 0; s < L; ++s) {
      int dst = cut.in_a[s] ? copy_perm[c] : c;
      perm[static_cast<std::size_t>(c) * L + s] = dst * L + s;
    }
  return permutation_operator(perm, 2);
}

// transfer coefficients of X -> u X u^dag in the Hermitian Pauli basis
Eigen::Matrix4d conj_transfer(const Mat& u) {
  Mat basis[4] = {Mat::Identity(2, 2), pauli_x(), pauli_y(), pauli_z()};
  Eigen::Matrix4d t;
  for (int a = 0; a < 4; ++a) {
    Mat img = u * basis[a] * u.adjoint();
    for (int b = 0; b < 4; ++b) t(b, a) = ((basis[b] * img).trace() / 2.0).real();
  }
  return t;
}

}  // namespace

const Mat& lambda_16() {
  static const Mat lam = [] {
    Mat acc = Mat::Zero(16, 16);
    Mat ps[4] = {Mat::Identity(2, 2), pauli_x(), pauli_y(), pauli_z()};
    for (const auto& p : ps) acc += kron4(p);
    return acc;
  }();
  return lam;
}

DenseOperator q_projector(int L) {
  if (L > 3) throw std::invalid_argument("q_projector: dense cap is L <= 3");
  const Eigen::Index d = Eigen::Index(1) << L;
  Mat acc = Mat::Zero(d * d * d * d, d * d * d * d);
  for (const auto& p : enumerate_paulis(L)) acc += kron4(p.to_dense());
  acc /= static_cast<double>(d) * static_cast<double>(d);
  return DenseOperator(std::move(acc), std::vector<int>(static_cast<std::size_t>(4 * L), 2));
}

double e_lin(const DenseOperator& o, const std::vector<bool>& in_a) {
  const double d = static_cast<double>(o.dim());
  double norm2 = o.mat.squaredNorm();
  if (std::abs(norm2 - d) > 1e-8 * d)
    throw std::invalid_argument("e_lin: operator is not unitary-normalized (||O||_2^2 != d)");
  auto lam = operator_schmidt(o, in_a);
  double s2 = 0;
  for (double l : lam) s2 += l * l;
  return 1.0 - s2;
}

double apep_enumeration(const Mat& u, const Bipartition& cut) {
  const int L = cut.n_sites();
  if (L > 6) throw std::invalid_argument("apep_enumeration: cap exceeded (L <= 6)");
  if (u.rows() != (1ll << L)) throw std::invalid_argument("apep_enumeration: size mismatch");
  std::vector<int> dims(static_cast<std::size_t>(L), 2);
  double acc = 0;
  std::size_t count = 0;
  for (const auto& p : enumerate_paulis(L)) {
    Mat m = u.adjoint() * p.to_dense() * u;
    acc += e_lin(DenseOperator(std::move(m), dims), cut.in_a);
    ++count;
  }
  double v = acc / static_cast<double>(count);
  if (v < -1e-9 || v >= 1.0) throw std::runtime_error("apep_enumeration: value escaped [0,1)");
  return v;
}

double apep_four_copy(const Mat& u, const Bipartition& cut) {
  const int L = cut.n_sites();
  if (L > 3) throw std::invalid_argument("apep_four_copy: cap exceeded (L <= 3)");
  const double d = static_cast<double>(1ll << L);
  double tr;
  if (L <= 2) {
    Mat q = q_projector(L).mat;
    Mat ta = copy_permutation_on_a(perm_from_cycles({{1, 2}, {3, 4}}, 4), cut, 4);
    Mat u4 = kron4(u);
    tr = (ta * u4.adjoint() * q * u4).trace().real();
  } else {
    // per-Pauli two-copy contraction of the same trace
    std::vector<int> swap_perm{1, 0};
    Mat ta2 = copy_permutation_on_a(swap_perm, cut, 2);
    double acc = 0;
    for (const auto& p : enumerate_paulis(L)) {
      Mat m = u.adjoint() * p.to_dense() * u;
      double t2 = (ta2 * kron(m, m)).trace().real();
      acc += t2 * t2;
    }
    tr = acc / (d * d);
  }
  double v = 1.0 - tr / (d * d);
  if (v < -1e-9 || v >= 1.0) throw std::runtime_error("apep_four_copy: value escaped [0,1)");
  return v;
}

double apep_single_copy(const CliffordTableau& c, const Mat& u, int k, const Bipartition& cut,
                        bool prime) {
  const int L = c.n;
  if (cut.n_sites() != L) throw std::invalid_argument("apep_single_copy: cut size mismatch");
  if (k < 1 || k > L) throw std::invalid_argument("apep_single_copy: k out of range");
  if (L > 12) throw std::invalid_argument("apep_single_copy: cap exceeded (L <= 12)");
  Eigen::Matrix4d t = conj_transfer(u);
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
  std::uint64_t a_mask = 0;
  for (int s = 0; s < L; ++s)
    if (cut.in_a[s]) a_mask |= 1ull << s;
  const std::uint64_t mask_k = (1ull << k) - 1;
  const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

  double acc = 0;
  const std::uint64_t np = 1ull << (2 * L);
  std::vector<std::uint64_t> term_r;
  std::vector<double> term_c;
  std::unordered_map<std::uint64_t, int> a_ids, b_ids;
  std::vector<std::complex<double>> km;  // class matrix, row-major
  for (std::uint64_t pidx = 0; pidx < np; ++pidx) {
    PauliString p = PauliString::from_index(L, pidx);
    if (!prime) p = conjugate_pauli(c, p);  // initial encoding conjugation
    PauliString rest(L, p.x & ~mask_k, p.z & ~mask_k, p.phase);
    PauliString img_rest = conjugate_pauli(cinv, rest);
    // expand u^{(x)k} (first-k part) u^{dag (x)k} in the Pauli basis
    term_r.assign(1, 0);
    term_c.assign(1, 1.0);
    for (int s = 0; s < k; ++s) {
      int a = site_code(p, s);
      std::vector<std::uint64_t> nr;
      std::vector<double> nc;
      nr.reserve(term_r.size() * 4);
      nc.reserve(term_r.size() * 4);
      for (std::size_t i = 0; i < term_r.size(); ++i)
        for (int b = 0; b < 4; ++b) {
          double coef = t(b, a);
          if (std::abs(coef) < 1e-15) continue;
          nr.push_back(term_r[i] | (std::uint64_t(b) << (2 * s)));
          nc.push_back(term_c[i] * coef);
        }
      term_r.swap(nr);
      term_c.swap(nc);
    }
    a_ids.clear();
    b_ids.clear();
    struct Entry {
      int a, b;
      std::complex<double> v;
    };
    std::vector<Entry> entries;
    entries.reserve(term_r.size());
    for (std::size_t i = 0; i < term_r.size(); ++i) {
      PauliString w = pauli_mul(img_r[term_r[i]], img_rest);
      std::uint64_t ka = (w.x & a_mask) | ((w.z & a_mask) << L);
      std::uint64_t kb = (w.x & ~a_mask) | ((w.z & ~a_mask) << L);
      auto ia = a_ids.emplace(ka, static_cast<int>(a_ids.size())).first->second;
      auto ib = b_ids.emplace(kb, static_cast<int>(b_ids.size())).first->second;
      entries.push_back({ia, ib, term_c[i] * ipow[w.phase]});
    }
    const int ma = static_cast<int>(a_ids.size()), mb = static_cast<int>(b_ids.size());
    km.assign(static_cast<std::size_t>(ma) * mb, 0.0);
    for (const auto& e : entries) km[static_cast<std::size_t>(e.a) * mb + e.b] += e.v;
    // purity of the Schmidt spectrum: Tr((K^dag K)^2) = ||K^dag K||_F^2
    double purity = 0;
    for (int b1 = 0; b1 < mb; ++b1)
      for (int b2 = 0; b2 < mb; ++b2) {
        std::complex<double> g = 0;
        for (int a = 0; a < ma; ++a)
          g += std::conj(km[static_cast<std::size_t>(a) * mb + b1]) *
               km[static_cast<std::size_t>(a) * mb + b2];
        purity += std::norm(g);
      }
    acc += 1.0 - purity;
  }
  double v = acc / static_cast<double>(np);
  if (v < -1e-9 || v >= 1.0) throw std::runtime_error("apep_single_copy: value escaped [0,1)");
  return v;
}

bool clifford_preprocessing_invariance_check(const Mat& u, const CliffordTableau& c,
                                             const Bipartition& cut, double tol) {
  // circuit order: the Clifford runs first, so the composite is C then u,
  // i.e. the matrix product u-after-C; Q absorbs the Clifford four-copy
  // conjugation, which is what makes the value invariant
  Mat cd = c.to_dense();
  double a = apep_enumeration(u, cut);
  double b = apep_enumeration(cd * u, cut);
  return std::abs(a - b) < tol;
}

}  // namespace qscram

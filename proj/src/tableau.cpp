#include "qscram/tableau.hpp"

#include <bit>
#include <complex>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace qscram {

namespace {

// GF(2) symplectic vectors of length 2n, interleaved pairing: components
// (2j, 2j+1) = (x_j, z_j); <u,v> = sum_j u[2j]v[2j+1] + u[2j+1]v[2j].
using SympVec = std::uint64_t;

int symp_inner(SympVec u, SympVec v, int nn) {
  int acc = 0;
  for (int j = 0; j < nn; j += 2) {
    acc ^= ((u >> j) & 1) & ((v >> (j + 1)) & 1);
    acc ^= ((u >> (j + 1)) & 1) & ((v >> j) & 1);
  }
  return acc;
}

SympVec transvect(SympVec h, SympVec v, int nn) {
  if (h == 0) return v;
  return symp_inner(v, h, nn) ? (v ^ h) : v;
}

// h = (h_a, h_b) with y = Z_{h_b}(Z_{h_a}(x)); x, y nonzero.
std::pair<SympVec, SympVec> find_transvection(SympVec x, SympVec y, int nn) {
  if (x == y) return {0, 0};
  if (symp_inner(x, y, nn)) return {x ^ y, 0};
  // choose z with <x,z> = <y,z> = 1
  auto chunk = [](SympVec v, int j) { return (v >> (2 * j)) & 3; };
  auto partner = [](std::uint64_t a) -> std::uint64_t {
    // c != 0 with a x c = 1 for nonzero 2-bit a=(x,z): (1,0)->(0,1) etc.
    switch (a) {
      case 1: return 2;
      case 2: return 1;
      default: return 2;  // a = 3 = (1,1): (1,1)x(0,1) = 1
    }
  };
  SympVec z = 0;
  int half = nn / 2;
  for (int j = 0; j < half; ++j) {
    std::uint64_t a = chunk(x, j), b = chunk(y, j);
    if (a != 0 && b != 0) {
      std::uint64_t c = (a == b) ? partner(a) : (a ^ b);
      z = c << (2 * j);
      return {x ^ z, z ^ y};
    }
  }
  // disjoint support
  for (int j = 0; j < half; ++j) {
    if (chunk(x, j) != 0) { z |= partner(chunk(x, j)) << (2 * j); break; }
  }
  for (int j = 0; j < half; ++j) {
    if (chunk(y, j) != 0) { z |= partner(chunk(y, j)) << (2 * j); break; }
  }
  return {x ^ z, z ^ y};
}

// Uniform symplectic matrix via the transvection construction; rows are the
// images of the interleaved basis vectors. `draw(m)` must return a uniform
// value in [0, m).
std::vector<SympVec> symplectic_rows(int n, const std::function<std::uint64_t(std::uint64_t)>& draw) {
  if (n == 0) return {};
  int nn = 2 * n;
  std::uint64_t k = draw((1ull << nn) - 1) + 1;
  SympVec f1 = k;
  SympVec e1 = 1;
  auto [t0, t1] = find_transvection(e1, f1, nn);
  std::uint64_t bits = draw(1ull << (nn - 1));
  bool b0 = bits & 1;
  SympVec eprime = e1;
  for (int j = 2; j < nn; ++j)
    if ((bits >> (j - 1)) & 1) eprime |= 1ull << j;
  SympVec h0 = transvect(t1, transvect(t0, eprime, nn), nn);

  std::vector<SympVec> inner = symplectic_rows(n - 1, draw);
  std::vector<SympVec> rows(nn);
  rows[0] = 1;       // e1
  rows[1] = 2;       // e2
  for (int r = 0; r < nn - 2; ++r) rows[r + 2] = inner[r] << 2;
  for (auto& r : rows) {
    r = transvect(t0, r, nn);
    r = transvect(t1, r, nn);
    r = transvect(h0, r, nn);
    if (b0) r = transvect(f1, r, nn);
  }
  return rows;
}

PauliString row_to_pauli(SympVec row, int n, int sign_bit) {
  std::uint64_t x = 0, z = 0;
  for (int j = 0; j < n; ++j) {
    if ((row >> (2 * j)) & 1) x |= 1ull << j;
    if ((row >> (2 * j + 1)) & 1) z |= 1ull << j;
  }
  return PauliString(n, x, z, sign_bit ? 2 : 0);
}

CliffordTableau from_rows(int n, const std::vector<SympVec>& rows, std::uint64_t signs) {
  CliffordTableau c;
  c.n = n;
  c.images.resize(2 * n);
  for (int j = 0; j < n; ++j) {
    c.images[j] = row_to_pauli(rows[2 * j], n, (signs >> j) & 1);
    c.images[n + j] = row_to_pauli(rows[2 * j + 1], n, (signs >> (n + j)) & 1);
  }
  return c;
}

}  // namespace

CliffordTableau CliffordTableau::identity(int n_qubits) {
  CliffordTableau c;
  c.n = n_qubits;
  c.images.reserve(2 * n_qubits);
  for (int j = 0; j < n_qubits; ++j) c.images.push_back(PauliString::x_at(n_qubits, j));
  for (int j = 0; j < n_qubits; ++j) c.images.push_back(PauliString::z_at(n_qubits, j));
  return c;
}

bool CliffordTableau::is_symplectic() const {
  for (int r = 0; r < 2 * n; ++r)
    for (int s = r + 1; s < 2 * n; ++s) {
      bool want_anti = (s == r + n);
      if (commutes(images[r], images[s]) == want_anti) return false;
    }
  return true;
}

PauliString conjugate_pauli(const CliffordTableau& c, const PauliString& p) {
  if (c.n != p.n) throw std::invalid_argument("conjugate_pauli: size mismatch");
  PauliString acc = PauliString::identity(c.n);
  for (int j = 0; j < c.n; ++j) {
    if ((p.x >> j) & 1) acc = pauli_mul(acc, c.images[j]);
    if ((p.z >> j) & 1) acc = pauli_mul(acc, c.images[c.n + j]);
  }
  // P = i^{phase + x.z} prod_j X_j^{x_j} Z_j^{z_j}
  acc.phase = (acc.phase + p.phase + std::popcount(p.x & p.z)) % 4;
  return acc;
}

CliffordTableau compose(const CliffordTableau& b, const CliffordTableau& a) {
  if (a.n != b.n) throw std::invalid_argument("compose: size mismatch");
  CliffordTableau c;
  c.n = a.n;
  c.images.reserve(2 * a.n);
  for (const auto& img : a.images) c.images.push_back(conjugate_pauli(b, img));
  return c;
}

CliffordTableau CliffordTableau::inverse() const {
  // phaseless part: M^{-1} = J M^T J over GF(2), interleaved layout
  int nn = 2 * n;
  std::vector<SympVec> rows(nn, 0);
  auto bit = [&](int r, int col) -> int {
    const PauliString& img = images[(r % 2 == 0) ? r / 2 : n + r / 2];
    int q = col / 2;
    return col % 2 == 0 ? (img.x >> q) & 1 : (img.z >> q) & 1;
  };
  // J swaps the two members of each pair; (JM^TJ)[r][c] = M[J c][J r]
  auto flip = [](int i) { return i ^ 1; };
  for (int r = 0; r < nn; ++r)
    for (int col = 0; col < nn; ++col)
      if (bit(flip(col), flip(r))) rows[r] |= 1ull << col;

  CliffordTableau inv = from_rows(n, rows, 0);
  // fix signs: C (C^dag g C) C^dag = g
  for (int r = 0; r < 2 * n; ++r) {
    PauliString back = conjugate_pauli(*this, inv.images[r]);
    inv.images[r].phase = back.phase;  // back = i^s * generator, s in {0,2}
  }
  return inv;
}

std::uint64_t symplectic_group_order(int n) {
  std::uint64_t ord = 1;
  for (int j = 1; j <= n; ++j) ord *= ((1ull << (2 * j)) - 1) << (2 * j - 1);
  return ord;
}

std::uint64_t clifford_group_order(int n) {
  return symplectic_group_order(n) << (2 * n);
}

CliffordTableau random_clifford(int n, Rng& rng) {
  if (n < 1 || n > 16) throw std::invalid_argument("random_clifford: n out of range");
  auto draw = [&rng](std::uint64_t m) { return rng.uniform_below(m); };
  auto rows = symplectic_rows(n, draw);
  std::uint64_t signs = rng.uniform_below(1ull << (2 * n));
  return from_rows(n, rows, signs);
}

CliffordTableau clifford_from_index(int n, std::uint64_t idx) {
  if (idx >= clifford_group_order(n)) throw std::invalid_argument("clifford_from_index: out of range");
  std::uint64_t signs = idx & ((1ull << (2 * n)) - 1);
  std::uint64_t sidx = idx >> (2 * n);
  auto draw = [&sidx](std::uint64_t m) {
    std::uint64_t v = sidx % m;
    sidx /= m;
    return v;
  };
  auto rows = symplectic_rows(n, draw);
  return from_rows(n, rows, signs);
}

std::string CliffordTableau::str() const {
  std::ostringstream os;
  for (int r = 0; r < 2 * n; ++r) os << images[r].str() << "\n";
  return os.str();
}

CliffordTableau CliffordTableau::parse(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<PauliString> imgs;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    imgs.push_back(PauliString::parse(line));
  }
  if (imgs.empty() || imgs.size() % 2 != 0) throw std::invalid_argument("CliffordTableau::parse: bad row count");
  CliffordTableau c;
  c.n = static_cast<int>(imgs.size() / 2);
  c.images = std::move(imgs);
  for (const auto& p : c.images)
    if (p.n != c.n || (p.phase % 2) != 0) throw std::invalid_argument("CliffordTableau::parse: bad row");
  if (!c.is_symplectic()) throw std::invalid_argument("CliffordTableau::parse: not symplectic");
  return c;
}

Mat CliffordTableau::to_dense() const {
  if (n > 6) throw std::invalid_argument("CliffordTableau::to_dense: exceeds dense cap (6 qubits)");
  // Choi-state construction: (C (x) I)|Omega> is stabilized by
  // { image_x(j) (x) X_j , image_z(j) (x) Z_j } on 2n qubits.
  const int m = 2 * n;
  std::vector<PauliString> gens;
  gens.reserve(m);
  for (int j = 0; j < n; ++j) {
    const PauliString& ix = images[j];
    gens.push_back(PauliString(m, ix.x | (1ull << (n + j)), ix.z, ix.phase));
    const PauliString& iz = images[n + j];
    gens.push_back(PauliString(m, iz.x, iz.z | (1ull << (n + j)), iz.phase));
  }
  const std::int64_t D = std::int64_t(1) << m;
  const std::uint64_t count = 1ull << m;  // group size 4^n

  auto rev = [m](std::uint64_t bits) {
    std::uint64_t out = 0;
    for (int q = 0; q < m; ++q)
      if ((bits >> q) & 1) out |= 1ull << (m - 1 - q);
    return out;
  };
  static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

  // Gray-code walk over the 4^n subset products.
  std::vector<double> diag(static_cast<std::size_t>(D), 0.0);
  PauliString cur = PauliString::identity(m);
  std::uint64_t gray = 0;
  for (std::uint64_t it = 0;; ++it) {
    if (cur.x == 0) {
      std::uint64_t zrev = rev(cur.z);
      std::complex<double> ph = ipow[cur.phase];
      for (std::int64_t cidx = 0; cidx < D; ++cidx)
        diag[cidx] += (std::popcount(std::uint64_t(cidx) & zrev) & 1) ? -ph.real() : ph.real();
    }
    if (it + 1 == count) break;
    std::uint64_t next_gray = (it + 1) ^ ((it + 1) >> 1);
    int flip = std::countr_zero(gray ^ next_gray);
    gray = next_gray;
    cur = pauli_mul(cur, gens[flip]);
  }
  std::int64_t cstar = 0;
  for (std::int64_t cidx = 1; cidx < D; ++cidx)
    if (diag[cidx] > diag[cstar]) cstar = cidx;

  // column cstar of the projector (1/4^n) sum_g g
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(D);
  cur = PauliString::identity(m);
  gray = 0;
  for (std::uint64_t it = 0;; ++it) {
    std::uint64_t xrev = rev(cur.x), zrev = rev(cur.z);
    int ip = (cur.phase + std::popcount(cur.x & cur.z)) % 4;
    double sgn = (std::popcount(std::uint64_t(cstar) & zrev) & 1) ? -1.0 : 1.0;
    psi[static_cast<Eigen::Index>(std::uint64_t(cstar) ^ xrev)] += ipow[ip] * sgn;
    if (it + 1 == count) break;
    std::uint64_t next_gray = (it + 1) ^ ((it + 1) >> 1);
    int flip = std::countr_zero(gray ^ next_gray);
    gray = next_gray;
    cur = pauli_mul(cur, gens[flip]);
  }
  psi.normalize();

  const std::int64_t d = std::int64_t(1) << n;
  Mat u(d, d);
  for (std::int64_t i = 0; i < d; ++i)
    for (std::int64_t j = 0; j < d; ++j) u(i, j) = std::sqrt(double(d)) * psi[i * d + j];
  // phase gauge: first entry of largest magnitude becomes real positive
  Eigen::Index bi = 0, bj = 0;
  double best = 0;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if (std::abs(u(i, j)) > best + 1e-12) { best = std::abs(u(i, j)); bi = i; bj = j; }
  u *= std::conj(u(bi, bj)) / std::abs(u(bi, bj));
  return u;
}

}  // namespace qscram

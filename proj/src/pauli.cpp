#include "qscram/pauli.hpp"

#include <bit>
#include <stdexcept>

namespace qscram {

namespace {
std::uint64_t mask_of(int n) { return n >= 64 ? ~0ull : ((1ull << n) - 1); }
}  // namespace

PauliString::PauliString(int n_qubits, std::uint64_t x_bits, std::uint64_t z_bits, int ph)
    : n(n_qubits), x(x_bits & mask_of(n_qubits)), z(z_bits & mask_of(n_qubits)),
      phase(((ph % 4) + 4) % 4) {
  if (n_qubits < 1 || n_qubits > 64) throw std::invalid_argument("PauliString: bad qubit count");
}

PauliString PauliString::x_at(int n_qubits, int q) {
  return PauliString(n_qubits, 1ull << q, 0, 0);
}

PauliString PauliString::z_at(int n_qubits, int q) {
  return PauliString(n_qubits, 0, 1ull << q, 0);
}

PauliString PauliString::from_index(int n_qubits, std::uint64_t idx) {
  // per-site 2-bit code: 0=I, 1=X, 2=Y, 3=Z; site 0 is the most significant pair
  std::uint64_t x = 0, z = 0;
  for (int q = n_qubits - 1; q >= 0; --q) {
    int code = static_cast<int>(idx & 3);
    idx >>= 2;
    if (code == 1 || code == 2) x |= 1ull << q;
    if (code == 2 || code == 3) z |= 1ull << q;
  }
  return PauliString(n_qubits, x, z, 0);
}

int PauliString::weight() const { return std::popcount(x | z); }

PauliString PauliString::adjoint() const {
  // (i^p O)^dag = i^{-p} O for the Hermitian tensor part
  return PauliString(n, x, z, (4 - phase) % 4);
}

PauliString pauli_mul(const PauliString& p, const PauliString& q) {
  if (p.n != q.n) throw std::invalid_argument("pauli_mul: qubit count mismatch");
  // Per-site phase: sigma_a sigma_b = i^eps sigma_{a xor b}, eps = +1 on the
  // cyclic triples (X,Y),(Y,Z),(Z,X) and -1 on the reversed ones.
  std::uint64_t x1 = p.x, z1 = p.z, x2 = q.x, z2 = q.z;
  std::uint64_t isx1 = x1 & ~z1, isy1 = x1 & z1, isz1 = ~x1 & z1;
  std::uint64_t isx2 = x2 & ~z2, isy2 = x2 & z2, isz2 = ~x2 & z2;
  std::uint64_t cyc = (isx1 & isy2) | (isy1 & isz2) | (isz1 & isx2);
  std::uint64_t acy = (isx1 & isz2) | (isy1 & isx2) | (isz1 & isy2);
  int ph = p.phase + q.phase + std::popcount(cyc) + 3 * std::popcount(acy);
  return PauliString(p.n, x1 ^ x2, z1 ^ z2, ph % 4);
}

bool commutes(const PauliString& p, const PauliString& q) {
  if (p.n != q.n) throw std::invalid_argument("commutes: qubit count mismatch");
  int par = std::popcount(p.x & q.z) + std::popcount(p.z & q.x);
  return (par & 1) == 0;
}

std::vector<PauliString> enumerate_paulis(int n, int cap) {
  if (n > cap) throw std::invalid_argument("enumerate_paulis: n exceeds enumeration cap");
  std::vector<PauliString> out;
  out.reserve(std::size_t(1) << (2 * n));
  // lexicographic in (x,z): iterate x outer, z inner
  for (std::uint64_t x = 0; x < (1ull << n); ++x)
    for (std::uint64_t z = 0; z < (1ull << n); ++z)
      out.push_back(PauliString(n, x, z, 0));
  return out;
}

std::string PauliString::str() const {
  static const char* pre[4] = {"+", "+i", "-", "-i"};
  std::string s = pre[phase];
  for (int q = 0; q < n; ++q) {
    bool xb = (x >> q) & 1, zb = (z >> q) & 1;
    s += xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
  }
  return s;
}

PauliString PauliString::parse(const std::string& s) {
  std::size_t i = 0;
  int ph = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
    ph = (s[i] == '-') ? 2 : 0;
    ++i;
  }
  if (i < s.size() && s[i] == 'i') {
    ph += 1;
    ++i;
  }
  std::uint64_t x = 0, z = 0;
  int n = 0;
  for (; i < s.size(); ++i, ++n) {
    switch (s[i]) {
      case 'I': break;
      case 'X': x |= 1ull << n; break;
      case 'Y': x |= 1ull << n; z |= 1ull << n; break;
      case 'Z': z |= 1ull << n; break;
      default: throw std::invalid_argument("PauliString::parse: bad character");
    }
  }
  if (n == 0) throw std::invalid_argument("PauliString::parse: empty string");
  return PauliString(n, x, z, ph);
}

Mat PauliString::to_dense() const {
  if (n > 12) throw std::invalid_argument("PauliString::to_dense: exceeds dense cap (12 qubits)");
  const std::int64_t d = std::int64_t(1) << n;
  Mat m = Mat::Zero(d, d);
  static const std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  // column c maps to row c^xrev with phase i^phase * prod_j [site factors]
  // qubit 0 = leftmost factor = most significant bit of the index
  std::uint64_t xrev = 0, zrev = 0;
  for (int q = 0; q < n; ++q) {
    if ((x >> q) & 1) xrev |= 1ull << (n - 1 - q);
    if ((z >> q) & 1) zrev |= 1ull << (n - 1 - q);
  }
  for (std::int64_t c = 0; c < d; ++c) {
    std::uint64_t r = std::uint64_t(c) ^ xrev;
    // sigma(1,1) = Y = i X Z: each Y site contributes i * (-1)^{bit}
    int ip = phase + std::popcount(xrev & zrev);
    int minus = std::popcount(std::uint64_t(c) & zrev);
    std::complex<double> v = ipow[ip % 4] * ((minus & 1) ? -1.0 : 1.0);
    m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
  }
  return m;
}

}  // namespace qscram

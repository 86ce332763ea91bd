#include "qscram/stabilizer.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>

#include "qscram/pauli.hpp"

namespace qscram {

namespace {

// All abelian subgroups of the phaseless Pauli group of order 2^n whose
// elements square to +I, enumerated by independent commuting generators and
// deduplicated by group content.
std::vector<std::vector<PauliString>> maximal_abelian_groups(int n) {
  auto paulis = enumerate_paulis(n);
  std::vector<PauliString> nontrivial(paulis.begin() + 1, paulis.end());

  std::set<std::vector<std::uint64_t>> seen;
  std::vector<std::vector<PauliString>> groups;

  std::vector<PauliString> gens;
  auto key_of = [n](std::vector<PauliString> group) {
    std::vector<std::uint64_t> key;
    key.reserve(group.size());
    for (const auto& g : group) key.push_back(g.x | (g.z << n));
    std::sort(key.begin(), key.end());
    return key;
  };
  auto close_group = [n](const std::vector<PauliString>& gs) {
    std::vector<PauliString> group{PauliString::identity(n)};
    for (const auto& g : gs) {
      std::size_t sz = group.size();
      for (std::size_t i = 0; i < sz; ++i) {
        auto prod = pauli_mul(group[i], g);
        prod.phase = 0;  // phaseless content
        group.push_back(prod);
      }
    }
    return group;
  };

  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (static_cast<int>(gens.size()) == n) {
      auto group = close_group(gens);
      auto key = key_of(group);
      if (seen.insert(key).second) groups.push_back(group);
      return;
    }
    for (std::size_t i = start; i < nontrivial.size(); ++i) {
      const auto& cand = nontrivial[i];
      bool ok = true;
      for (const auto& g : gens)
        if (!commutes(g, cand)) { ok = false; break; }
      if (!ok) continue;
      // reject dependent candidates (already in the span)
      auto partial = close_group(gens);
      bool dependent = false;
      for (const auto& g : partial)
        if (g.x == cand.x && g.z == cand.z) { dependent = true; break; }
      if (dependent) continue;
      gens.push_back(cand);
      rec(i + 1);
      gens.pop_back();
    }
  };
  rec(0);
  return groups;
}

}  // namespace

StabilizerStateSet enumerate_stabilizer_states(int n) {
  if (n < 1 || n > 3) throw std::invalid_argument("enumerate_stabilizer_states: n must be 1..3");
  const Eigen::Index d = Eigen::Index(1) << n;
  StabilizerStateSet out;
  out.n_qubits = n;
  for (const auto& group : maximal_abelian_groups(n)) {
    // pick the n generators back out of the group (first independent set)
    std::vector<PauliString> gens;
    for (const auto& g : group) {
      if (g.is_identity_bits()) continue;
      // independent of current gens? build span
      bool indep = true;
      std::vector<PauliString> span{PauliString::identity(g.n)};
      for (const auto& h : gens) {
        std::size_t sz = span.size();
        for (std::size_t i = 0; i < sz; ++i) span.push_back(pauli_mul(span[i], h));
      }
      for (const auto& s : span)
        if (s.x == g.x && s.z == g.z) { indep = false; break; }
      if (indep) gens.push_back(g);
      if (static_cast<int>(gens.size()) == n) break;
    }
    // all 2^n sign assignments of the generators
    for (std::uint64_t signs = 0; signs < (1ull << n); ++signs) {
      Mat proj = Mat::Identity(d, d);
      for (int j = 0; j < n; ++j) {
        double s = ((signs >> j) & 1) ? -1.0 : 1.0;
        proj = proj * 0.5 * (Mat::Identity(d, d) + s * gens[static_cast<std::size_t>(j)].to_dense());
      }
      out.states.push_back(proj);
    }
  }
  return out;
}

RobustnessSolution robustness(const Mat& rho, const StabilizerStateSet& basis, double tol) {
  const Eigen::Index d = rho.rows();
  if (d != (Eigen::Index(1) << basis.n_qubits))
    throw std::invalid_argument("robustness: dimension mismatch with basis");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("robustness: state not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-10)
    throw std::invalid_argument("robustness: state not normalized");

  const int n_states = static_cast<int>(basis.states.size());
  const int rows = static_cast<int>(d * d);  // diag + re/im of the upper triangle

  auto fill_column = [&](const Mat& m, Eigen::VectorXd& col) {
    int r = 0;
    for (Eigen::Index i = 0; i < d; ++i) col[r++] = m(i, i).real();
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = i + 1; j < d; ++j) {
        col[r++] = m(i, j).real();
        col[r++] = m(i, j).imag();
      }
  };

  // variables: q = q+ - q-, both nonnegative
  Eigen::MatrixXd a(rows, 2 * n_states);
  Eigen::VectorXd col(rows);
  for (int s = 0; s < n_states; ++s) {
    fill_column(basis.states[static_cast<std::size_t>(s)], col);
    a.col(s) = col;
    a.col(n_states + s) = -col;
  }
  Eigen::VectorXd b(rows);
  fill_column(rho, b);
  Eigen::VectorXd c = Eigen::VectorXd::Ones(2 * n_states);

  LpResult lp = solve_lp(a, b, c);
  if (lp.status != LpResult::Status::optimal)
    throw std::runtime_error("robustness: linear program did not reach an optimum");

  RobustnessSolution sol;
  sol.q = lp.x.head(n_states) - lp.x.tail(n_states);
  sol.value = lp.objective;
  Mat rec = Mat::Zero(d, d);
  for (int s = 0; s < n_states; ++s) rec += sol.q[s] * basis.states[static_cast<std::size_t>(s)];
  sol.residual = (rec - rho).cwiseAbs().maxCoeff();
  sol.duality_gap = lp.duality_gap;
  sol.certified = lp.certified(tol) && sol.residual < tol;
  if (!sol.certified) throw std::runtime_error("robustness: certificate failed");
  return sol;
}

double magic_capacity(const QuantumChannel& m) {
  if (m.dim() != 2) throw std::invalid_argument("magic_capacity: single-qubit channels only");
  static const StabilizerStateSet basis2 = enumerate_stabilizer_states(2);
  double best = 0;
  for (const auto& phi : basis2.states) {
    // (M (x) I) acting on the first tensor factor
    Mat out = Mat::Zero(4, 4);
    for (const auto& k : m.kraus) {
      Mat kk = kron(k, Mat::Identity(2, 2));
      out += kk * phi * kk.adjoint();
    }
    best = std::max(best, robustness(out, basis2).value);
  }
  return best;
}

}  // namespace qscram

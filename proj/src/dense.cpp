#include "qscram/dense.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qscram {

namespace {
Eigen::Index dims_product(const std::vector<int>& dims) {
  Eigen::Index p = 1;
  for (int d : dims) p *= d;
  return p;
}
}  // namespace

DenseOperator::DenseOperator(Mat m, std::vector<int> d) : mat(std::move(m)), dims(std::move(d)) {
  if (mat.rows() != mat.cols()) throw std::invalid_argument("DenseOperator: matrix not square");
  if (dims_product(dims) != mat.rows())
    throw std::invalid_argument("DenseOperator: dims do not match matrix size");
}

DenseOperator DenseOperator::identity(std::vector<int> dims) {
  Eigen::Index d = dims_product(dims);
  return DenseOperator(Mat::Identity(d, d), std::move(dims));
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DenseOperator kron(const DenseOperator& a, const DenseOperator& b) {
  std::vector<int> dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  return DenseOperator(kron(a.mat, b.mat), std::move(dims));
}

DenseOperator partial_trace(const DenseOperator& o, const std::vector<int>& keep) {
  const int k = o.n_subsystems();
  std::vector<bool> kept(k, false);
  for (int idx : keep) {
    if (idx < 0 || idx >= k) throw std::invalid_argument("partial_trace: bad subsystem index");
    if (kept[idx]) throw std::invalid_argument("partial_trace: duplicate subsystem index");
    kept[idx] = true;
  }
  std::vector<int> keep_dims, tr_dims;
  for (int s = 0; s < k; ++s) (kept[s] ? keep_dims : tr_dims).push_back(o.dims[s]);
  Eigen::Index dk = dims_product(keep_dims), dt = dims_product(tr_dims);

  // strides of each subsystem in the full index
  std::vector<Eigen::Index> stride(k, 1);
  for (int s = k - 2; s >= 0; --s) stride[s] = stride[s + 1] * o.dims[s + 1];

  auto full_index = [&](Eigen::Index ik, Eigen::Index it) {
    Eigen::Index idx = 0, rk = ik, rt = it;
    for (int s = k - 1; s >= 0; --s) {
      int d = o.dims[s];
      Eigen::Index digit;
      if (kept[s]) { digit = rk % d; rk /= d; }
      else { digit = rt % d; rt /= d; }
      idx += digit * stride[s];
    }
    return idx;
  };

  Mat out = Mat::Zero(dk, dk);
  for (Eigen::Index i = 0; i < dk; ++i)
    for (Eigen::Index j = 0; j < dk; ++j) {
      std::complex<double> acc = 0;
      for (Eigen::Index t = 0; t < dt; ++t) acc += o.mat(full_index(i, t), full_index(j, t));
      out(i, j) = acc;
    }
  if (keep_dims.empty()) keep_dims = {1};
  return DenseOperator(std::move(out), std::move(keep_dims));
}

DenseOperator reorder_subsystems(const DenseOperator& o, const std::vector<int>& old_of_new) {
  const int k = o.n_subsystems();
  if (static_cast<int>(old_of_new.size()) != k)
    throw std::invalid_argument("reorder_subsystems: permutation size mismatch");
  std::vector<int> new_dims(k);
  for (int p = 0; p < k; ++p) new_dims[p] = o.dims[old_of_new[p]];

  std::vector<Eigen::Index> old_stride(k, 1);
  for (int s = k - 2; s >= 0; --s) old_stride[s] = old_stride[s + 1] * o.dims[s + 1];

  const Eigen::Index d = o.dim();
  std::vector<Eigen::Index> map(static_cast<std::size_t>(d));
  for (Eigen::Index ni = 0; ni < d; ++ni) {
    Eigen::Index rest = ni, oi = 0;
    for (int p = k - 1; p >= 0; --p) {
      Eigen::Index digit = rest % new_dims[p];
      rest /= new_dims[p];
      oi += digit * old_stride[old_of_new[p]];
    }
    map[static_cast<std::size_t>(ni)] = oi;
  }
  Mat out(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) out(i, j) = o.mat(map[i], map[j]);
  return DenseOperator(std::move(out), std::move(new_dims));
}

Mat permutation_operator(const std::vector<int>& sigma, int d) {
  const int m = static_cast<int>(sigma.size());
  Eigen::Index D = 1;
  for (int i = 0; i < m; ++i) D *= d;
  Mat t = Mat::Zero(D, D);
  std::vector<Eigen::Index> digits(m), out(m);
  for (Eigen::Index c = 0; c < D; ++c) {
    Eigen::Index rest = c;
    for (int a = m - 1; a >= 0; --a) { digits[a] = rest % d; rest /= d; }
    for (int a = 0; a < m; ++a) out[sigma[a]] = digits[a];
    Eigen::Index r = 0;
    for (int a = 0; a < m; ++a) r = r * d + out[a];
    t(r, c) = 1.0;
  }
  return t;
}

std::vector<int> perm_from_cycles(const std::vector<std::vector<int>>& cycles, int m) {
  std::vector<int> p(m);
  std::iota(p.begin(), p.end(), 0);
  for (const auto& cyc : cycles) {
    const int r = static_cast<int>(cyc.size());
    for (int j = 0; j < r; ++j) p[cyc[(j + 1) % r] - 1] = cyc[j] - 1;
  }
  return p;
}

Mat realign(const Mat& o, Eigen::Index da, Eigen::Index db) {
  if (o.rows() != da * db) throw std::invalid_argument("realign: dimension mismatch");
  Mat r(da * da, db * db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j)
      for (Eigen::Index k = 0; k < db; ++k)
        for (Eigen::Index l = 0; l < db; ++l)
          r(i * da + j, k * db + l) = o(i * db + k, j * db + l);
  return r;
}

std::vector<double> operator_schmidt(const DenseOperator& o, const std::vector<bool>& in_a) {
  const int k = o.n_subsystems();
  if (static_cast<int>(in_a.size()) != k)
    throw std::invalid_argument("operator_schmidt: cut size mismatch");
  if (o.mat.norm() < 1e-14) throw std::invalid_argument("operator_schmidt: zero operator");
  // bring A subsystems to the front
  std::vector<int> order;
  Eigen::Index da = 1, db = 1;
  for (int s = 0; s < k; ++s)
    if (in_a[s]) { order.push_back(s); da *= o.dims[s]; }
  for (int s = 0; s < k; ++s)
    if (!in_a[s]) { order.push_back(s); db *= o.dims[s]; }
  DenseOperator sorted = reorder_subsystems(o, order);
  Mat r = realign(sorted.mat, da, db);
  Eigen::JacobiSVD<Mat> svd(r);
  const double d = static_cast<double>(o.dim());
  std::vector<double> lam;
  lam.reserve(static_cast<std::size_t>(svd.singularValues().size()));
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    double s = svd.singularValues()[i];
    lam.push_back(s * s / d);
  }
  return lam;
}

std::string dense_to_text(const DenseOperator& o) {
  std::ostringstream os;
  os.precision(17);
  os << "dims";
  for (int d : o.dims) os << ' ' << d;
  os << '\n';
  for (Eigen::Index i = 0; i < o.dim(); ++i) {
    for (Eigen::Index j = 0; j < o.dim(); ++j) {
      if (j) os << ' ';
      os << o.mat(i, j).real() << ' ' << o.mat(i, j).imag();
    }
    os << '\n';
  }
  return os.str();
}

DenseOperator dense_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string tag;
  is >> tag;
  if (tag != "dims") throw std::invalid_argument("dense_from_text: missing dims header");
  std::string rest;
  std::getline(is, rest);
  std::istringstream hs(rest);
  std::vector<int> dims;
  int d;
  while (hs >> d) dims.push_back(d);
  Eigen::Index n = dims_product(dims);
  Mat m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double re, im;
      if (!(is >> re >> im)) throw std::invalid_argument("dense_from_text: truncated data");
      m(i, j) = {re, im};
    }
  return DenseOperator(std::move(m), std::move(dims));
}

Mat pauli_x() { return (Mat(2, 2) << 0, 1, 1, 0).finished(); }
Mat pauli_y() {
  using namespace std::complex_literals;
  return (Mat(2, 2) << 0, -1i, 1i, 0).finished();
}
Mat pauli_z() { return (Mat(2, 2) << 1, 0, 0, -1).finished(); }
Mat hadamard() {
  double s = 1.0 / std::sqrt(2.0);
  return (Mat(2, 2) << s, s, s, -s).finished();
}
Mat s_gate() {
  using namespace std::complex_literals;
  return (Mat(2, 2) << 1, 0, 0, 1i).finished();
}
Mat t_gate() {
  using namespace std::complex_literals;
  return (Mat(2, 2) << 1, 0, 0, std::exp(0.25i * 3.141592653589793238462643383279502884)).finished();
}

}  // namespace qscram

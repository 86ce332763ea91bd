#include "qscram/channels.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qscram {

using json = nlohmann::json;

QuantumChannel::QuantumChannel(std::vector<Mat> ks, std::vector<int> d)
    : kraus(std::move(ks)), dims(std::move(d)) {
  if (kraus.empty()) throw std::invalid_argument("QuantumChannel: empty Kraus set");
  Eigen::Index n = kraus[0].rows();
  for (const auto& k : kraus)
    if (k.rows() != n || k.cols() != n) throw std::invalid_argument("QuantumChannel: Kraus size mismatch");
  Eigen::Index p = 1;
  for (int dd : dims) p *= dd;
  if (p != n) throw std::invalid_argument("QuantumChannel: dims mismatch");
}

bool QuantumChannel::is_trace_preserving(double tol) const {
  Mat acc = Mat::Zero(dim(), dim());
  for (const auto& k : kraus) acc += k.adjoint() * k;
  return (acc - Mat::Identity(dim(), dim())).cwiseAbs().maxCoeff() < tol;
}

Mat QuantumChannel::apply_schrodinger(const Mat& rho) const {
  Mat out = Mat::Zero(dim(), dim());
  for (const auto& k : kraus) out += k * rho * k.adjoint();
  return out;
}

Mat QuantumChannel::apply_heisenberg(const Mat& x) const {
  Mat out = Mat::Zero(dim(), dim());
  for (const auto& k : kraus) out += k.adjoint() * x * k;
  return out;
}

std::vector<Mat> QuantumChannel::heisenberg_kraus() const {
  std::vector<Mat> out;
  out.reserve(kraus.size());
  for (const auto& k : kraus) out.push_back(k.adjoint());
  return out;
}

NaturalRep natural_representation(const QuantumChannel& e) {
  Eigen::Index d = e.dim();
  Mat x = Mat::Zero(d * d, d * d);
  for (const auto& k : e.heisenberg_kraus()) x += kron(k, k.adjoint());
  return NaturalRep{std::move(x)};
}

Mat apply_channel(const QuantumChannel& e, const Mat& o) {
  if (o.rows() != e.dim()) throw std::invalid_argument("apply_channel: dimension mismatch");
  return e.apply_schrodinger(o);
}

Eigen::Matrix4d pauli_transfer_heisenberg(const QuantumChannel& e) {
  if (e.dim() != 2) throw std::invalid_argument("pauli_transfer: single-qubit channels only");
  Mat basis[4] = {Mat::Identity(2, 2), pauli_x(), pauli_y(), pauli_z()};
  Eigen::Matrix4d t;
  for (int p = 0; p < 4; ++p) {
    Mat img = e.apply_heisenberg(basis[p]);
    for (int r = 0; r < 4; ++r) {
      std::complex<double> c = (basis[r] * img).trace() / 2.0;
      t(r, p) = c.real();
    }
  }
  return t;
}

Mat rz_unitary(double theta) {
  using namespace std::complex_literals;
  Mat u = Mat::Zero(2, 2);
  u(0, 0) = std::exp(-0.5i * theta);
  u(1, 1) = std::exp(0.5i * theta);
  return u;
}

Mat axis_unitary(double theta, double gamma, double phi) {
  using namespace std::complex_literals;
  double nx = std::sin(gamma) * std::cos(phi);
  double ny = std::sin(gamma) * std::sin(phi);
  double nz = std::cos(gamma);
  Mat ns = nx * pauli_x() + ny * pauli_y() + nz * pauli_z();
  return std::cos(theta / 2) * Mat::Identity(2, 2) - 1i * std::sin(theta / 2) * ns;
}

QuantumChannel unitary_channel(const Mat& u) {
  std::vector<int> dims;
  Eigen::Index d = u.rows();
  while (d > 1) { dims.push_back(2); d /= 2; }
  if (dims.empty()) dims = {1};
  return QuantumChannel({u}, dims);
}

QuantumChannel depolarizing_channel(double p) {
  if (p < 0 || p > 1) throw std::invalid_argument("depolarizing_channel: p outside [0,1]");
  std::vector<Mat> ks;
  ks.push_back(std::sqrt(1 - 0.75 * p) * Mat::Identity(2, 2));
  ks.push_back(0.5 * std::sqrt(p) * pauli_x());
  ks.push_back(0.5 * std::sqrt(p) * pauli_y());
  ks.push_back(0.5 * std::sqrt(p) * pauli_z());
  return QuantumChannel(std::move(ks), {2});
}

QuantumChannel identity_channel(int dim) {
  std::vector<int> dims;
  int d = dim;
  while (d > 1) { dims.push_back(2); d /= 2; }
  if (dims.empty()) dims = {1};
  return QuantumChannel({Mat::Identity(dim, dim)}, dims);
}

Mat haar_unitary(int dim, Rng& rng) {
  Mat a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = {rng.gaussian(), rng.gaussian()};
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    std::complex<double> rii = r(i, i);
    q.col(i) *= rii / std::abs(rii);
  }
  return q;
}

Vec haar_state(int dim, Rng& rng) {
  Vec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = {rng.gaussian(), rng.gaussian()};
  v.normalize();
  return v;
}

std::string channel_to_json(const QuantumChannel& e) {
  json j;
  j["dims"] = e.dims;
  json ks = json::array();
  for (const auto& k : e.kraus) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < k.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index c = 0; c < k.cols(); ++c) row.push_back({k(i, c).real(), k(i, c).imag()});
      rows.push_back(row);
    }
    ks.push_back(rows);
  }
  j["kraus"] = ks;
  return j.dump(2);
}

QuantumChannel channel_from_json(const std::string& text) {
  json j = json::parse(text);
  std::vector<int> dims = j.at("dims").get<std::vector<int>>();
  std::vector<Mat> ks;
  for (const auto& rows : j.at("kraus")) {
    Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    Mat k(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index c = 0; c < n; ++c) {
        auto pr = rows[i][c];
        k(i, c) = {pr[0].get<double>(), pr[1].get<double>()};
      }
    ks.push_back(std::move(k));
  }
  return QuantumChannel(std::move(ks), std::move(dims));
}

}  // namespace qscram

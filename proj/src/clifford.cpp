#include "nctorus/clifford.hpp"

#include <string>

#include "nctorus/errors.hpp"

namespace nctorus {

using cd = std::complex<double>;

CMatrix CMatrix::identity(int n) {
  CMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("CMatrix product: shape mismatch");
  CMatrix out(a.rows_, b.cols_);
  for (int r = 0; r < a.rows_; ++r)
    for (int k = 0; k < a.cols_; ++k) {
      const cd x = a(r, k);
      if (x == 0.0) continue;
      for (int c = 0; c < b.cols_; ++c) out(r, c) += x * b(k, c);
    }
  return out;
}

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("CMatrix sum: shape mismatch");
  CMatrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] += b.data_[i];
  return out;
}

CMatrix operator*(cd s, const CMatrix& a) {
  CMatrix out = a;
  for (auto& x : out.data_) x *= s;
  return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

namespace {

CMatrix pauli(char which) {
  CMatrix m(2, 2);
  switch (which) {
    case 'x':
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case 'y':
      m(0, 1) = cd(0.0, -1.0);
      m(1, 0) = cd(0.0, 1.0);
      break;
    case 'z':
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    default:
      m = CMatrix::identity(2);
  }
  return m;
}

}  // namespace

CliffordRep gamma_generate(int n) {
  if (n < 2) throw DimensionError("gamma_generate needs n >= 2, got " + std::to_string(n));
  const int qubits = n / 2;
  CliffordRep rep;
  rep.n = n;
  rep.N = 1 << qubits;

  for (int k = 0; k < qubits; ++k) {
    for (char which : {'x', 'y'}) {
      CMatrix g = CMatrix::identity(1);
      for (int slot = 0; slot < qubits; ++slot) {
        char f = slot < k ? 'z' : (slot == k ? which : 'i');
        g = kron(g, pauli(f));
      }
      rep.gammas.push_back(std::move(g));
    }
  }
  if (n % 2 == 1) {
    // gamma_1 ... gamma_{2m} squares to (-1)^m; the factor (-i)^m makes it
    // self-adjoint and involutive. Entries stay in {0, +-1, +-i}.
    CMatrix chi = CMatrix::identity(rep.N);
    for (const auto& g : rep.gammas) chi = chi * g;
    cd phase = 1.0;
    for (int k = 0; k < qubits; ++k) phase *= cd(0.0, -1.0);
    rep.gammas.push_back(phase * chi);
  }
  return rep;
}

cd mat_trace_normalized(const CMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("mat_trace_normalized: matrix is not square");
  cd s = 0.0;
  for (int i = 0; i < m.rows(); ++i) s += m(i, i);
  return s / static_cast<double>(m.rows());
}

}  // namespace nctorus

#pragma once

#include <complex>
#include <vector>

namespace nctorus {

// Dense complex square matrix, row-major. Only used at Clifford sizes
// (N = 2^floor(n/2)), so no BLAS.
class CMatrix {
 public:
  CMatrix() = default;
  explicit CMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols) {}
  static CMatrix identity(int n);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::complex<double>& operator()(int r, int c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
  const std::complex<double>& operator()(int r, int c) const { return data_[static_cast<std::size_t>(r * cols_ + c)]; }

  CMatrix adjoint() const;
  friend CMatrix operator*(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator+(const CMatrix& a, const CMatrix& b);
  friend CMatrix operator*(std::complex<double> s, const CMatrix& a);
  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::complex<double>> data_;
};

CMatrix kron(const CMatrix& a, const CMatrix& b);

struct CliffordRep {
  int n = 0;
  int N = 0;  // 2^floor(n/2)
  std::vector<CMatrix> gammas;
};

// Self-adjoint gamma_1..gamma_n with gamma_r gamma_s + gamma_s gamma_r = 2 delta_rs I.
// Even n = 2m: Jordan-Wigner products of Pauli matrices on m qubits,
//   gamma_{2k+1} = Z^{(x)k} (x) X (x) I...,  gamma_{2k+2} = Z^{(x)k} (x) Y (x) I...
// Odd n appends the chirality product, normalized to be self-adjoint
// (for n = 3 this is diag(1, -1)).
CliffordRep gamma_generate(int n);

// (1/N) Trace(M)
std::complex<double> mat_trace_normalized(const CMatrix& m);

}  // namespace nctorus

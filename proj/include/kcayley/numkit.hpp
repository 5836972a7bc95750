#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kc {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

inline constexpr cplx I{0.0, 1.0};

enum class ErrorKind {
  Structural,
  Singularity,
  Conditioning,
  Capacity,
  Parity,
  Domain,
  Composition,
  Precondition,
  Gapless,
  Refinement,
  Inconsistency,
  Normalization,
  Verification,
  InvalidInput,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, double residual = 0.0)
      : std::runtime_error(what), kind_(kind), residual_(residual) {}
  ErrorKind kind() const { return kind_; }
  double residual() const { return residual_; }

 private:
  ErrorKind kind_;
  double residual_;
};

struct Tolerance {
  double eq_tol = 1e-9;
  double rank_tol = 1e-10;
  double kernel_tol = 1e-8;

  void validate() const;
};

struct Check {
  bool ok = false;
  double residual = 0.0;
  explicit operator bool() const { return ok; }
};

struct HermitianEig {
  RVec values;
  Mat vectors;
};

struct Svd {
  Mat U;
  RVec s;
  Mat V;
};

Mat eye(Eigen::Index n);
double opnorm(const Mat& M);
double maxabs(const Mat& M);
Mat dagger(const Mat& M);
Mat kron(const Mat& A, const Mat& B);
Mat direct_sum(const Mat& A, const Mat& B);
Mat block2(const Mat& a, const Mat& b, const Mat& c, const Mat& d);

Mat sigma1();
Mat sigma2();
Mat sigma3();

Check is_hermitian(const Mat& M, const Tolerance& tol = {});
Check is_unitary(const Mat& M, const Tolerance& tol = {});
Check is_projection(const Mat& M, const Tolerance& tol = {});

HermitianEig eig_hermitian(const Mat& M, const Tolerance& tol = {});

// `poles` lists points where f is singular; an eigenvalue within kernel_tol of one is an error.
Mat mat_func_hermitian(const Mat& M, const std::function<double(double)>& f,
                       const std::vector<double>& poles = {}, const Tolerance& tol = {});
Mat mat_func_hermitian_c(const Mat& M, const std::function<cplx(double)>& f,
                         const std::vector<double>& poles = {}, const Tolerance& tol = {});

Svd svd(const Mat& M);
Mat polar_phase(const Mat& M, const Tolerance& tol = {});
int kernel_dim(const Mat& M, double kernel_tol);
int kernel_dim(const Mat& M, const Tolerance& tol = {});
int numerical_rank(const Mat& M, const Tolerance& tol = {});

// Orthonormal basis of range(M), singular values cut at rank_tol·max(1, largest).
Mat range_basis(const Mat& M, const Tolerance& tol = {});
// Orthonormal basis of ker(M), singular values cut at kernel_tol relative to max(1, |M|).
Mat kernel_basis(const Mat& M, const Tolerance& tol = {});
Mat pinv(const Mat& M, const Tolerance& tol = {});

// Hermitian projection onto the span of the columns of Q (assumed orthonormal).
Mat projector(const Mat& Q);

}  // namespace kc

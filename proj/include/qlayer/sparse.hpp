#pragma once
#include <cstdint>
#include <vector>

namespace qlayer {

struct Triplet {
  int64_t i, j;
  double v;
};

// compressed sparse rows, columns sorted within each row
struct Csr {
  int64_t n = 0;
  std::vector<int64_t> indptr;
  std::vector<int32_t> indices;
  std::vector<double> data;

  static Csr from_triplets(int64_t n, std::vector<Triplet> trips);
  void spmv(const double* x, double* y) const;  // y = A x
  Csr transposed() const;
  double max_asymmetry() const;  // max |A - A^T| over all entries
  double diag_min() const;
};

// number of worker threads for spmv, from QLAYER_THREADS (default 1)
int sparse_threads();

// zero fill-in incomplete Cholesky, returns the lower factor with the
// sparsity of the lower triangle of a. Breakdown retries with a growing
// diagonal shift; running out of attempts is a SolverError.
Csr ic0_lower(const Csr& a, int max_attempts = 8);

void solve_lower(const Csr& lower, const double* b, double* x);  // L x = b
void solve_upper(const Csr& lower, const double* b, double* x);  // L^T x = b

struct PcgResult {
  int iters = 0;
  double relres = 0.0;
};

// conjugate gradients on SPD a, preconditioned by the ic0 factor `lower`;
// exceeding max_iters without reaching rtol is a SolverError
PcgResult pcg(const Csr& a, const Csr& lower, const double* b, double* x,
              double rtol, int max_iters);

// cyclic Jacobi for a dense symmetric matrix (row major n x n, destroyed);
// eigenvalues ascending, eigenvector j in column j of vecs when non-null
void jacobi_eigh(int n, std::vector<double>& a, std::vector<double>& lam,
                 std::vector<double>* vecs);

struct EigResult {
  std::vector<double> values;  // ascending, the k smallest of A
  std::vector<std::vector<double>> vectors;
  std::vector<double> residuals;  // ||A v - lambda v|| / ||v||, post hoc
  int op_applies = 0;
  int cg_iters_total = 0;
  int restarts = 0;
};

// k smallest eigenpairs of SPD-shiftable A via thick restart Lanczos on
// (A - tau I)^{-1} with full reorthogonalization; inner solves by pcg
EigResult lanczos_smallest(const Csr& a, double tau, int k, int subspace,
                           double tol, int max_restarts, double cg_rtol,
                           uint64_t seed);

}  // namespace qlayer

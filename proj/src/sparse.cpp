#include "qlayer/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <thread>

#include "qlayer/errors.hpp"

namespace qlayer {

namespace {

double dot(const double* a, const double* b, int64_t n) {
  double s = 0.0;
  for (int64_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

double nrm2(const double* a, int64_t n) { return std::sqrt(dot(a, a, n)); }

void axpy(double* y, double alpha, const double* x, int64_t n) {
  for (int64_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

Csr Csr::from_triplets(int64_t n, std::vector<Triplet> trips) {
  for (const Triplet& t : trips)
    if (t.i < 0 || t.i >= n || t.j < 0 || t.j >= n)
      throw InvalidParams("triplet index out of range");
  std::sort(trips.begin(), trips.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.i != b.i ? a.i < b.i : a.j < b.j;
            });
  Csr out;
  out.n = n;
  out.indptr.assign(static_cast<size_t>(n) + 1, 0);
  out.indices.reserve(trips.size());
  out.data.reserve(trips.size());
  size_t p = 0;
  for (int64_t row = 0; row < n; ++row) {
    while (p < trips.size() && trips[p].i == row) {
      const int64_t col = trips[p].j;
      double v = trips[p].v;
      ++p;
      while (p < trips.size() && trips[p].i == row && trips[p].j == col) {
        v += trips[p].v;
        ++p;
      }
      out.indices.push_back(static_cast<int32_t>(col));
      out.data.push_back(v);
    }
    out.indptr[row + 1] = static_cast<int64_t>(out.indices.size());
  }
  return out;
}

namespace {
void spmv_rows(const Csr& a, const double* x, double* y, int64_t r0,
               int64_t r1) {
  for (int64_t i = r0; i < r1; ++i) {
    double s = 0.0;
    for (int64_t p = a.indptr[i]; p < a.indptr[i + 1]; ++p)
      s += a.data[p] * x[a.indices[p]];
    y[i] = s;
  }
}
}  // namespace

int sparse_threads() {
  static const int nt = [] {
    const char* env = std::getenv("QLAYER_THREADS");
    if (!env) return 1;
    const int v = std::atoi(env);
    return v > 0 ? std::min(v, 64) : 1;
  }();
  return nt;
}

void Csr::spmv(const double* x, double* y) const {
  const int nt = sparse_threads();
  if (nt <= 1 || n < (int64_t{1} << 15)) {
    spmv_rows(*this, x, y, 0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  const int64_t chunk = (n + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    const int64_t r0 = t * chunk, r1 = std::min(n, r0 + chunk);
    if (r0 >= r1) break;
    pool.emplace_back([this, x, y, r0, r1] { spmv_rows(*this, x, y, r0, r1); });
  }
  for (auto& th : pool) th.join();
}

Csr Csr::transposed() const {
  Csr t;
  t.n = n;
  t.indptr.assign(static_cast<size_t>(n) + 1, 0);
  for (int32_t c : indices) ++t.indptr[static_cast<size_t>(c) + 1];
  for (int64_t i = 0; i < n; ++i) t.indptr[i + 1] += t.indptr[i];
  t.indices.resize(indices.size());
  t.data.resize(data.size());
  std::vector<int64_t> next(t.indptr.begin(), t.indptr.end() - 1);
  for (int64_t i = 0; i < n; ++i)
    for (int64_t p = indptr[i]; p < indptr[i + 1]; ++p) {
      const int64_t q = next[indices[p]]++;
      t.indices[q] = static_cast<int32_t>(i);
      t.data[q] = data[p];
    }
  return t;
}

double Csr::max_asymmetry() const {
  const Csr t = transposed();
  double worst = 0.0;
  for (int64_t i = 0; i < n; ++i) {
    int64_t p = indptr[i], q = t.indptr[i];
    const int64_t pe = indptr[i + 1], qe = t.indptr[i + 1];
    while (p < pe || q < qe) {
      const int32_t cp =
          p < pe ? indices[p] : std::numeric_limits<int32_t>::max();
      const int32_t cq =
          q < qe ? t.indices[q] : std::numeric_limits<int32_t>::max();
      if (cp == cq) {
        worst = std::max(worst, std::abs(data[p] - t.data[q]));
        ++p;
        ++q;
      } else if (cp < cq) {
        worst = std::max(worst, std::abs(data[p]));
        ++p;
      } else {
        worst = std::max(worst, std::abs(t.data[q]));
        ++q;
      }
    }
  }
  return worst;
}

double Csr::diag_min() const {
  double dmin = std::numeric_limits<double>::infinity();
  for (int64_t i = 0; i < n; ++i) {
    double d = 0.0;
    for (int64_t p = indptr[i]; p < indptr[i + 1]; ++p)
      if (indices[p] == i) d = data[p];
    dmin = std::min(dmin, d);
  }
  return dmin;
}

namespace {

// one factorization attempt; the diagonal is scaled by (1 + shift) before
// elimination. Rows come out sorted with the diagonal entry last.
bool try_ic0(const Csr& a, double shift, Csr& l) {
  const int64_t n = a.n;
  l.n = n;
  l.indptr.assign(1, 0);
  l.indices.clear();
  l.data.clear();
  l.indices.reserve(a.indices.size() / 2 + n);
  l.data.reserve(a.indices.size() / 2 + n);
  for (int64_t i = 0; i < n; ++i) {
    const int64_t row_begin = static_cast<int64_t>(l.indices.size());
    double aii = 0.0;
    for (int64_t p = a.indptr[i]; p < a.indptr[i + 1]; ++p) {
      const int32_t j = a.indices[p];
      if (j < i) {
        // strict lower entry: eliminate against row j of the factor
        double s = a.data[p];
        int64_t pi = row_begin, pj = l.indptr[j];
        const int64_t pie = static_cast<int64_t>(l.indices.size());
        const int64_t pje = l.indptr[j + 1] - 1;  // skip row j's diagonal
        while (pi < pie && pj < pje) {
          if (l.indices[pi] == l.indices[pj]) {
            s -= l.data[pi] * l.data[pj];
            ++pi;
            ++pj;
          } else if (l.indices[pi] < l.indices[pj]) {
            ++pi;
          } else {
            ++pj;
          }
        }
        l.indices.push_back(j);
        l.data.push_back(s / l.data[l.indptr[j + 1] - 1]);
      } else if (j == i) {
        aii = a.data[p];
      }
    }
    double d = aii * (1.0 + shift);
    for (int64_t p = row_begin; p < static_cast<int64_t>(l.data.size()); ++p)
      d -= l.data[p] * l.data[p];
    if (!(d > 0.0)) return false;
    l.indices.push_back(static_cast<int32_t>(i));
    l.data.push_back(std::sqrt(d));
    l.indptr.push_back(static_cast<int64_t>(l.indices.size()));
  }
  return true;
}

}  // namespace

Csr ic0_lower(const Csr& a, int max_attempts) {
  double shift = 0.0;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Csr l;
    if (try_ic0(a, shift, l)) return l;
    shift = shift == 0.0 ? 1e-8 : shift * 10.0;
  }
  throw SolverError("incomplete Cholesky broke down despite diagonal shifts");
}

void solve_lower(const Csr& l, const double* b, double* x) {
  for (int64_t i = 0; i < l.n; ++i) {
    double s = b[i];
    const int64_t pe = l.indptr[i + 1] - 1;
    for (int64_t p = l.indptr[i]; p < pe; ++p)
      s -= l.data[p] * x[l.indices[p]];
    x[i] = s / l.data[pe];
  }
}

void solve_upper(const Csr& l, const double* b, double* x) {
  std::copy(b, b + l.n, x);
  for (int64_t i = l.n - 1; i >= 0; --i) {
    const int64_t pe = l.indptr[i + 1] - 1;
    const double xi = x[i] / l.data[pe];
    x[i] = xi;
    for (int64_t p = l.indptr[i]; p < pe; ++p)
      x[l.indices[p]] -= l.data[p] * xi;
  }
}

PcgResult pcg(const Csr& a, const Csr& lower, const double* b, double* x,
              double rtol, int max_iters) {
  const int64_t n = a.n;
  std::fill(x, x + n, 0.0);
  const double bnorm = nrm2(b, n);
  if (bnorm == 0.0) return {0, 0.0};
  std::vector<double> r(b, b + n), z(n), p(n), ap(n), tmp(n);
  auto precond = [&](const double* rr, double* zz) {
    solve_lower(lower, rr, tmp.data());
    solve_upper(lower, tmp.data(), zz);
  };
  precond(r.data(), z.data());
  p = z;
  double rz = dot(r.data(), z.data(), n);
  for (int it = 1; it <= max_iters; ++it) {
    a.spmv(p.data(), ap.data());
    const double pap = dot(p.data(), ap.data(), n);
    if (!(pap > 0.0))
      throw SolverError("pcg: operator is not positive definite");
    const double alpha = rz / pap;
    axpy(x, alpha, p.data(), n);
    axpy(r.data(), -alpha, ap.data(), n);
    const double rn = nrm2(r.data(), n);
    if (rn <= rtol * bnorm) return {it, rn / bnorm};
    precond(r.data(), z.data());
    const double rz_next = dot(r.data(), z.data(), n);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (int64_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  throw SolverError("pcg exceeded the iteration limit");
}

void jacobi_eigh(int n, std::vector<double>& a, std::vector<double>& lam,
                 std::vector<double>* vecs) {
  std::vector<double> v;
  if (vecs) {
    v.assign(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i) * n + i] = 1.0;
  }
  auto at = [&](int i, int j) -> double& {
    return a[static_cast<size_t>(i) * n + j];
  };
  double fro2 = 0.0;
  for (double x : a) fro2 += x * x;
  const double stop = 1e-28 * std::max(fro2, 1e-300);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (off <= stop) break;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
        if (vecs)
          for (int k = 0; k < n; ++k) {
            const double vkp = v[static_cast<size_t>(k) * n + p];
            const double vkq = v[static_cast<size_t>(k) * n + q];
            v[static_cast<size_t>(k) * n + p] = c * vkp - s * vkq;
            v[static_cast<size_t>(k) * n + q] = s * vkp + c * vkq;
          }
      }
  }
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(),
            [&](int i, int j) { return at(i, i) < at(j, j); });
  lam.resize(n);
  for (int i = 0; i < n; ++i) lam[i] = at(idx[i], idx[i]);
  if (vecs) {
    vecs->assign(static_cast<size_t>(n) * n, 0.0);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        (*vecs)[static_cast<size_t>(k) * n + j] =
            v[static_cast<size_t>(k) * n + idx[j]];
  }
}

EigResult lanczos_smallest(const Csr& a, double tau, int k, int subspace,
                           double tol, int max_restarts, double cg_rtol,
                           uint64_t seed) {
  const int64_t n = a.n;
  if (k < 1 || k + 2 > n)
    throw InvalidParams("eigenpair count out of range for this matrix size");
  int m = std::min<int64_t>(std::max(subspace, k + 2), n);

  // shifted operator A - tau I and its preconditioner
  Csr as = a;
  for (int64_t i = 0; i < n; ++i) {
    bool found = false;
    for (int64_t p = as.indptr[i]; p < as.indptr[i + 1]; ++p)
      if (as.indices[p] == i) {
        as.data[p] -= tau;
        found = true;
      }
    if (!found) throw InvalidParams("matrix diagonal entry missing");
  }
  const Csr lower = ic0_lower(as);

  EigResult res;
  auto apply_inv = [&](const double* x, double* y) {
    const PcgResult pr = pcg(as, lower, x, y, cg_rtol, 100000);
    res.op_applies += 1;
    res.cg_iters_total += pr.iters;
  };

  std::vector<double> basis(static_cast<size_t>(m + 1) * n);
  auto row = [&](int i) { return basis.data() + static_cast<size_t>(i) * n; };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  auto randomize = [&](double* x) {
    for (int64_t i = 0; i < n; ++i) x[i] = unif(rng);
  };
  // two-pass Gram-Schmidt of x against rows [0, count)
  auto reortho = [&](double* x, int count, double* coefs) {
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < count; ++i) {
        const double h = dot(row(i), x, n);
        axpy(x, -h, row(i), n);
        if (coefs) coefs[i] += h;
      }
  };

  randomize(row(0));
  {
    const double s = nrm2(row(0), n);
    for (int64_t i = 0; i < n; ++i) row(0)[i] /= s;
  }

  std::vector<double> h(static_cast<size_t>(m) * m, 0.0);
  std::vector<double> work(n), theta, svec;
  std::vector<double> coefs(m);
  int l = 0;  // kept Ritz pairs carried through the last restart
  double beta_end = 0.0;

  // One Krylov sequence meets each eigenspace through a single direction, so
  // a converged ladder can be blind to a degenerate copy.  For k > 1,
  // re-converge from a fresh random direction (keeping only the k candidates)
  // until the ladder stops moving.
  const bool need_probe = k > 1;
  const int probe_cap = k + 3;
  int probes = 0;
  bool probe_restart = false;
  std::vector<double> last_top;

  for (int cycle = 0; cycle <= max_restarts; ++cycle) {
    for (int j = l; j < m; ++j) {
      apply_inv(row(j), work.data());
      std::fill(coefs.begin(), coefs.end(), 0.0);
      reortho(work.data(), j + 1, coefs.data());
      for (int i = 0; i <= j; ++i) {
        h[static_cast<size_t>(i) * m + j] = coefs[i];
        h[static_cast<size_t>(j) * m + i] = coefs[i];
      }
      double beta = nrm2(work.data(), n);
      bool replaced = false;
      if (beta < 1e-13) {
        // invariant subspace hit: continue in a fresh random direction, but
        // record the true (vanishing) coupling in the projected matrix
        replaced = true;
        randomize(work.data());
        reortho(work.data(), j + 1, nullptr);
        beta = nrm2(work.data(), n);
      }
      if (beta < 1e-13) {
        // basis spans the whole space: the frame is exactly invariant
        std::fill(row(j + 1), row(j + 1) + n, 0.0);
        beta = 0.0;
      } else {
        for (int64_t i = 0; i < n; ++i) row(j + 1)[i] = work[i] / beta;
      }
      const double coupling = replaced ? 0.0 : beta;
      if (j + 1 < m) {
        h[static_cast<size_t>(j) * m + (j + 1)] = coupling;
        h[static_cast<size_t>(j + 1) * m + j] = coupling;
      } else {
        beta_end = coupling;
      }
    }

    std::vector<double> hcopy(h);
    jacobi_eigh(m, hcopy, theta, &svec);  // ascending: wanted are the top k

    bool converged = true;
    const double scale = std::max(std::abs(theta[m - 1]), 1e-300);
    for (int t = 0; t < k; ++t) {
      const int col = m - 1 - t;
      const double fr =
          beta_end * std::abs(svec[static_cast<size_t>(m - 1) * m + col]);
      if (fr > tol * scale) converged = false;
    }

    if (converged && need_probe && cycle < max_restarts && probes < probe_cap) {
      bool stable = last_top.size() == static_cast<size_t>(k);
      if (stable)
        for (int t = 0; t < k; ++t)
          if (std::abs(theta[m - 1 - t] - last_top[t]) > 10.0 * tol * scale)
            stable = false;
      if (!stable) {
        last_top.resize(k);
        for (int t = 0; t < k; ++t) last_top[t] = theta[m - 1 - t];
        ++probes;
        probe_restart = true;
        converged = false;
      }
    }

    if (converged || cycle == max_restarts) {
      res.restarts = cycle;
      if (!converged)
        throw SolverError("eigensolver did not converge within restart limit");
      // assemble the k smallest eigenpairs of A, ascending
      res.values.resize(k);
      res.vectors.assign(k, std::vector<double>(n));
      res.residuals.resize(k);
      for (int t = 0; t < k; ++t) {
        const int col = m - 1 - t;
        if (!(theta[col] > 0.0))
          throw SolverError("shift-invert produced a nonpositive Ritz value");
        std::vector<double>& x = res.vectors[t];
        std::fill(x.begin(), x.end(), 0.0);
        for (int i = 0; i < m; ++i)
          axpy(x.data(), svec[static_cast<size_t>(i) * m + col], row(i), n);
        const double xn = nrm2(x.data(), n);
        for (int64_t i = 0; i < n; ++i) x[i] /= xn;
        res.values[t] = tau + 1.0 / theta[col];
      }
      for (int t = 0; t < k; ++t) {
        a.spmv(res.vectors[t].data(), work.data());
        axpy(work.data(), -res.values[t], res.vectors[t].data(), n);
        res.residuals[t] = nrm2(work.data(), n);
      }
      return res;
    }

    // thick restart: keep the top Ritz vectors plus the residual.  A probe
    // keeps only the k candidates so the random direction explores the
    // deflated complement with a full-length Krylov run.
    const int keep = probe_restart ? k : std::min(k + 10, m - 2);
    std::vector<double> fresh(static_cast<size_t>(keep) * n, 0.0);
    for (int t = 0; t < keep; ++t) {
      const int col = m - 1 - t;
      double* y = fresh.data() + static_cast<size_t>(t) * n;
      for (int i = 0; i < m; ++i)
        axpy(y, svec[static_cast<size_t>(i) * m + col], row(i), n);
    }
    std::copy(row(m), row(m) + n, work.begin());
    std::copy(fresh.begin(), fresh.end(), basis.begin());
    if (probe_restart) {
      randomize(row(keep));
      probe_restart = false;
    } else {
      std::copy(work.begin(), work.end(), row(keep));
    }
    reortho(row(keep), keep, nullptr);
    {
      const double s = nrm2(row(keep), n);
      if (s < 1e-13) {
        randomize(row(keep));
        reortho(row(keep), keep, nullptr);
        const double s2 = nrm2(row(keep), n);
        for (int64_t i = 0; i < n; ++i) row(keep)[i] /= s2;
      } else {
        for (int64_t i = 0; i < n; ++i) row(keep)[i] /= s;
      }
    }
    std::fill(h.begin(), h.end(), 0.0);
    for (int t = 0; t < keep; ++t)
      h[static_cast<size_t>(t) * m + t] = theta[m - 1 - t];
    l = keep;
  }
  throw SolverError("eigensolver restart loop exited unexpectedly");
}

}  // namespace qlayer

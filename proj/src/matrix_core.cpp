#include "bmv/matrix_core.hpp"

#include "bmv/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace bmv {

namespace {

void require_square(const Matrix& m, const char* name) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorKind::dimension, std::string(name) + " is " + std::to_string(m.rows()) + "x" +
                                          std::to_string(m.cols()) + ", expected square");
  }
}

// First component of magnitude above `floor` made real positive.
void fix_phase(Matrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    const double floor = 1e-12 * vectors.col(c).cwiseAbs().maxCoeff();
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const double mag = std::abs(vectors(r, c));
      if (mag > floor) {
        vectors.col(c) *= std::conj(vectors(r, c)) / mag;
        vectors(r, c) = mag;
        break;
      }
    }
  }
}

// Separates eigenvalues closer than eps by adding integer multiples of eps.
// Within each chain of close values the offsets are i - floor((g-1)/2), which
// is the smallest total integer perturbation; passes repeat until no two values
// are closer than eps. `order` tracks the permutation applied by re-sorting.
void split_degenerate(std::vector<double>& values, std::vector<double>& offsets,
                      std::vector<Eigen::Index>& order, double eps) {
  const std::size_t n = values.size();
  const double threshold = eps * (1.0 - 1e-9);
  for (int pass = 0; pass < 1000; ++pass) {
    bool changed = false;
    std::size_t start = 0;
    while (start < n) {
      std::size_t end = start + 1;
      while (end < n && values[end] - values[end - 1] < threshold) ++end;
      const std::size_t size = end - start;
      if (size > 1) {
        const auto centre = static_cast<long>((size - 1) / 2);
        for (std::size_t i = 0; i < size; ++i) {
          const double delta = static_cast<double>(static_cast<long>(i) - centre) * eps;
          values[start + i] += delta;
          offsets[start + i] += delta;
        }
        changed = true;
      }
      start = end;
    }
    if (!changed) return;
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](auto l, auto r) { return values[l] < values[r]; });
    std::vector<double> v(n), o(n);
    std::vector<Eigen::Index> ord(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = values[idx[i]];
      o[i] = offsets[idx[i]];
      ord[i] = order[idx[i]];
    }
    values = std::move(v);
    offsets = std::move(o);
    order = std::move(ord);
  }
  throw Error(ErrorKind::parameter, "eigenvalue splitting did not settle; eps_split too large");
}

}  // namespace

HermitianCheck validate_hermitian(const Matrix& m, double tol) {
  require_square(m, "matrix");
  if (m.size() == 0) return {true, 0.0};
  const double deviation = (m - m.adjoint()).cwiseAbs().maxCoeff();
  const double scale = 1.0 + m.cwiseAbs().maxCoeff();
  return {deviation <= tol * scale, deviation};
}

HermitianPair::HermitianPair(Matrix a, Matrix b, double tol) : a_(std::move(a)), b_(std::move(b)) {
  require_square(a_, "A");
  require_square(b_, "B");
  if (a_.rows() == 0) throw Error(ErrorKind::dimension, "n must be at least 1");
  if (a_.rows() != b_.rows()) {
    throw Error(ErrorKind::dimension, "A is " + std::to_string(a_.rows()) + "x" + std::to_string(a_.rows()) +
                                          " but B is " + std::to_string(b_.rows()) + "x" +
                                          std::to_string(b_.rows()));
  }
  if (!a_.allFinite() || !b_.allFinite()) throw Error(ErrorKind::input, "matrix entries must be finite");
  if (auto c = validate_hermitian(a_, tol); !c.hermitian) {
    throw Error(ErrorKind::input, "A is not Hermitian (deviation " + std::to_string(c.deviation) + ")");
  }
  if (auto c = validate_hermitian(b_, tol); !c.hermitian) {
    throw Error(ErrorKind::input, "B is not Hermitian (deviation " + std::to_string(c.deviation) + ")");
  }
}

Matrix ReducedPair::b_perturbed() const {
  Eigen::VectorXcd d(n());
  for (Eigen::Index j = 0; j < n(); ++j) d(j) = b_original[j] + offsets[j];
  return unitary * d.asDiagonal() * unitary.adjoint();
}

ReducedPair ReducedPair::from_diagonal(Matrix a, std::vector<double> b) {
  require_square(a, "A");
  if (a.rows() == 0 || static_cast<std::size_t>(a.rows()) != b.size()) {
    throw Error(ErrorKind::parameter, "diagonal size does not match A");
  }
  if (!validate_hermitian(a).hermitian) throw Error(ErrorKind::parameter, "A is not Hermitian");
  if (b.front() <= 0.0) throw Error(ErrorKind::parameter, "b_1 must be positive");
  for (std::size_t j = 1; j < b.size(); ++j) {
    if (!(b[j] > b[j - 1])) throw Error(ErrorKind::parameter, "b must be strictly increasing");
  }
  ReducedPair r;
  const auto n = a.rows();
  r.a_red = std::move(a);
  r.b_original = b;
  r.b_eigs = std::move(b);
  r.offsets.assign(r.b_eigs.size(), 0.0);
  r.unitary = Matrix::Identity(n, n);
  return r;
}

double default_eps_split(const Matrix& b) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(b, Eigen::EigenvaluesOnly);
  const auto& e = solver.eigenvalues();
  const double diameter = e(e.size() - 1) - e(0);
  return diameter > 0.0 ? 1e-6 * diameter : 1e-6;
}

ReducedPair reduce_pair(const HermitianPair& pair, double eps_split) {
  if (!(eps_split > 0.0) || !std::isfinite(eps_split)) {
    throw Error(ErrorKind::parameter, "eps_split must be positive, got " + std::to_string(eps_split));
  }
  const auto n = pair.n();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(pair.b());
  if (solver.info() != Eigen::Success) throw Error(ErrorKind::numeric, "eigendecomposition of B failed");

  Matrix vectors = solver.eigenvectors();
  fix_phase(vectors);

  std::vector<double> values(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  std::vector<double> offsets(n, 0.0);
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  const std::vector<double> original_sorted = values;
  split_degenerate(values, offsets, order, eps_split);

  ReducedPair r;
  r.eps_split = eps_split;
  r.unitary.resize(n, n);
  r.b_original.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    r.unitary.col(j) = vectors.col(order[j]);
    r.b_original[j] = original_sorted[order[j]];
  }
  r.offsets = offsets;
  r.shift = eps_split + std::max(0.0, -values.front());
  r.b_eigs.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) r.b_eigs[j] = values[j] + r.shift;

  r.a_red = r.unitary.adjoint() * pair.a() * r.unitary;
  // Exact Hermitian symmetry; the diagonal is real.
  r.a_red = 0.5 * (r.a_red + r.a_red.adjoint()).eval();
  return r;
}

ReducedPair reduce_pair(const HermitianPair& pair) { return reduce_pair(pair, default_eps_split(pair.b())); }

double min_gap(std::span<const double> ascending) {
  if (ascending.empty()) return 0.0;
  if (ascending.size() == 1) return ascending.front();
  double gap = ascending[1] - ascending[0];
  for (std::size_t j = 2; j < ascending.size(); ++j) gap = std::min(gap, ascending[j] - ascending[j - 1]);
  return gap;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace bmv

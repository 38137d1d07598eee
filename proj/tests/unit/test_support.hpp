#pragma once

// Shared helpers: a brute-force product-space construction written
// independently of the library's FullSpace, and seeded random draws.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "dfsphoton/state_space.hpp"

namespace dfsphoton::testing {

inline constexpr std::uint64_t kSeed = 20240611;
inline constexpr int kRandomCases = 128;

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// |to><from| on a single three-level atom, levels ordered g, s, e.
inline CMatrix sigma(Level to, Level from) {
  CMatrix s = CMatrix::Zero(3, 3);
  s(static_cast<int>(to), static_cast<int>(from)) = 1.0;
  return s;
}

/// Product space of `sites` atoms; site 0 is the leftmost Kronecker factor.
struct ProductSpace {
  int sites;

  Eigen::Index dimension() const {
    Eigen::Index d = 1;
    for (int i = 0; i < sites; ++i) d *= 3;
    return d;
  }

  CMatrix on_site(int site, const CMatrix& op) const {
    CMatrix out = CMatrix::Identity(1, 1);
    for (int i = 0; i < sites; ++i) out = kron(out, i == site ? op : CMatrix::Identity(3, 3));
    return out;
  }

  CMatrix sum_over(int first, int last, Level to, Level from) const {
    CMatrix out = CMatrix::Zero(dimension(), dimension());
    for (int i = first; i < last; ++i) out += on_site(i, sigma(to, from));
    return out;
  }

  /// Level of every site for a flat index.
  std::vector<int> levels(Eigen::Index index) const {
    std::vector<int> lv(static_cast<std::size_t>(sites));
    for (int i = sites - 1; i >= 0; --i) {
      lv[static_cast<std::size_t>(i)] = static_cast<int>(index % 3);
      index /= 3;
    }
    return lv;
  }
};

/// Register sites 0..N-1 and the ancilla as the last site. Column j is the
/// normalized symmetric state for basis label j.
inline CMatrix symmetric_columns(const SymmetricBasis& basis) {
  const int n = basis.n_atoms();
  const ProductSpace space{n + 1};
  CMatrix v = CMatrix::Zero(space.dimension(), static_cast<Eigen::Index>(basis.dimension()));
  for (Eigen::Index idx = 0; idx < space.dimension(); ++idx) {
    const auto lv = space.levels(idx);
    int m = 0;
    int k = 0;
    for (int i = 0; i < n; ++i) {
      m += lv[static_cast<std::size_t>(i)] == 1;
      k += lv[static_cast<std::size_t>(i)] == 2;
    }
    const auto col = basis.find(m, k, static_cast<Level>(lv.back()));
    if (col) v(idx, static_cast<Eigen::Index>(*col)) = 1.0;
  }
  for (Eigen::Index c = 0; c < v.cols(); ++c) v.col(c).normalize();
  return v;
}

inline CVector random_state(std::mt19937_64& rng, Eigen::Index dim) {
  std::normal_distribution<double> g;
  CVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(g(rng), g(rng));
  return v.normalized();
}

inline Complex random_complex(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> mag(0.0, scale);
  std::uniform_real_distribution<double> ph(-3.141592653589793, 3.141592653589793);
  return std::polar(mag(rng), ph(rng));
}

}  // namespace dfsphoton::testing

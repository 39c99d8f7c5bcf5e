#pragma once

// Finite-dimensional evaluation of object and morphism terms with exact
// rational entries, plus a matrix-unit *-homomorphism check.

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <boost/rational.hpp>

#include "rigcheck/free_bimon.hpp"

namespace rig {

using Rational = boost::rational<long long>;
using CMat = Eigen::MatrixXcd;

// Row-wise sparse rational matrix; entries within a row are sorted by column.
class SparseMat {
 public:
  SparseMat() = default;
  SparseMat(int rows, int cols);
  static SparseMat identity(int n);
  static SparseMat fromDense(const std::vector<std::vector<Rational>>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rational get(int r, int c) const;
  void set(int r, int c, const Rational& v);
  const std::vector<std::pair<int, Rational>>& row(int r) const { return data_[r]; }
  std::size_t nonZeros() const;

  SparseMat operator*(const SparseMat& o) const;
  SparseMat transpose() const;
  friend bool operator==(const SparseMat& a, const SparseMat& b);
  friend bool operator!=(const SparseMat& a, const SparseMat& b) { return !(a == b); }

  // Largest absolute entrywise difference, as a double.
  double maxAbsDiff(const SparseMat& o) const;
  CMat toComplex() const;
  std::string str() const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<std::vector<std::pair<int, Rational>>> data_;
};

SparseMat kron(const SparseMat& a, const SparseMat& b);
SparseMat blockDiag(const SparseMat& a, const SparseMat& b);

struct ModelAssign {
  std::map<std::string, int> genDims;
  std::map<std::string, SparseMat> genMors;
  std::uint64_t seed = 0;
};

long long dimOf(const ObjTerm& t, const ModelAssign& a);
SparseMat evalMor(const MorTerm& f, const ModelAssign& a);

// Exact when tol == 0, else entrywise |difference| <= tol.
bool equalInModel(const MorTerm& f, const MorTerm& g, const ModelAssign& a, double tol = 0.0);

// Dimensions uniform in [1, maxDim]; named generators receive random integer
// matrices in [-3, 3]. Entries of `fixed` override the random choices.
std::vector<ModelAssign> randomModels(const std::vector<std::string>& gens, int count, int maxDim,
                                      std::uint64_t seed, const std::vector<MorTerm>& named = {},
                                      const ModelAssign* fixed = nullptr);

// images[i][j] is the image of the matrix unit e_ij of M_n.
bool checkStarHom(int n, const std::vector<std::vector<CMat>>& images, double tol, std::string* why = nullptr);

}  // namespace rig

#include "rigcheck/matrix_model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

namespace rig {

SparseMat::SparseMat(int rows, int cols) : rows_(rows), cols_(cols), data_(rows) {
  if (rows < 0 || cols < 0) fail(ErrorCode::DimensionMismatch, "negative matrix size");
}

SparseMat SparseMat::identity(int n) {
  SparseMat m(n, n);
  for (int i = 0; i < n; ++i) m.data_[i].push_back({i, Rational(1)});
  return m;
}

SparseMat SparseMat::fromDense(const std::vector<std::vector<Rational>>& rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r ? static_cast<int>(rows[0].size()) : 0;
  SparseMat m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c) fail(ErrorCode::DimensionMismatch, "ragged matrix literal");
    for (int j = 0; j < c; ++j)
      if (rows[i][j].numerator() != 0) m.data_[i].push_back({j, rows[i][j]});
  }
  return m;
}

Rational SparseMat::get(int r, int c) const {
  const auto& row = data_.at(r);
  auto it = std::lower_bound(row.begin(), row.end(), c, [](const auto& e, int col) { return e.first < col; });
  return it != row.end() && it->first == c ? it->second : Rational(0);
}

void SparseMat::set(int r, int c, const Rational& v) {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) fail(ErrorCode::DimensionMismatch, "index out of range");
  auto& row = data_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c, [](const auto& e, int col) { return e.first < col; });
  if (it != row.end() && it->first == c) {
    if (v.numerator() == 0)
      row.erase(it);
    else
      it->second = v;
  } else if (v.numerator() != 0) {
    row.insert(it, {c, v});
  }
}

std::size_t SparseMat::nonZeros() const {
  std::size_t n = 0;
  for (const auto& r : data_) n += r.size();
  return n;
}

SparseMat SparseMat::operator*(const SparseMat& o) const {
  if (cols_ != o.rows_)
    fail(ErrorCode::DimensionMismatch, "product of " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                                           " and " + std::to_string(o.rows_) + "x" + std::to_string(o.cols_));
  SparseMat out(rows_, o.cols_);
  std::map<int, Rational> acc;
  for (int i = 0; i < rows_; ++i) {
    acc.clear();
    for (const auto& [k, v] : data_[i])
      for (const auto& [j, w] : o.data_[k]) acc[j] += v * w;
    for (const auto& [j, v] : acc)
      if (v.numerator() != 0) out.data_[i].push_back({j, v});
  }
  return out;
}

SparseMat SparseMat::transpose() const {
  SparseMat t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (const auto& [j, v] : data_[i]) t.data_[j].push_back({i, v});
  return t;
}

bool operator==(const SparseMat& a, const SparseMat& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

double SparseMat::maxAbsDiff(const SparseMat& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) return INFINITY;
  double m = 0;
  for (int i = 0; i < rows_; ++i) {
    std::map<int, Rational> d;
    for (const auto& [j, v] : data_[i]) d[j] += v;
    for (const auto& [j, v] : o.data_[i]) d[j] -= v;
    for (const auto& [j, v] : d) m = std::max(m, std::abs(boost::rational_cast<double>(v)));
  }
  return m;
}

CMat SparseMat::toComplex() const {
  CMat m = CMat::Zero(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (const auto& [j, v] : data_[i]) m(i, j) = boost::rational_cast<double>(v);
  return m;
}

std::string SparseMat::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rows_; ++i) {
    os << (i ? ",[" : "[");
    for (int j = 0; j < cols_; ++j) os << (j ? "," : "") << get(i, j);
    os << "]";
  }
  os << "]";
  return os.str();
}

SparseMat kron(const SparseMat& a, const SparseMat& b) {
  SparseMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < b.rows(); ++k) {
      const int r = i * b.rows() + k;
      for (const auto& [j, v] : a.row(i))
        for (const auto& [l, w] : b.row(k)) out.set(r, j * b.cols() + l, v * w);
    }
  return out;
}

SparseMat blockDiag(const SparseMat& a, const SparseMat& b) {
  SparseMat out(a.rows() + b.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (const auto& [j, v] : a.row(i)) out.set(i, j, v);
  for (int i = 0; i < b.rows(); ++i)
    for (const auto& [j, v] : b.row(i)) out.set(a.rows() + i, a.cols() + j, v);
  return out;
}

long long dimOf(const ObjTerm& t, const ModelAssign& a) {
  switch (t.kind()) {
    case ObjKind::Gen: {
      auto it = a.genDims.find(t.genId());
      if (it == a.genDims.end()) fail(ErrorCode::UnassignedGenerator, "no dimension for generator " + t.genId());
      return it->second;
    }
    case ObjKind::One: return 1;
    case ObjKind::Zero: return 0;
    case ObjKind::Tensor: return dimOf(t.left(), a) * dimOf(t.right(), a);
    case ObjKind::Oplus: return dimOf(t.left(), a) + dimOf(t.right(), a);
  }
  return 0;
}

namespace {

int idim(const ObjTerm& t, const ModelAssign& a) {
  long long d = dimOf(t, a);
  if (d > 1'000'000) fail(ErrorCode::DimensionMismatch, "model dimension too large: " + std::to_string(d));
  return static_cast<int>(d);
}

SparseMat structForward(StructKind k, const std::vector<ObjTerm>& p, const ModelAssign& a) {
  switch (k) {
    case StructKind::XiT: {
      const int dx = idim(p[0], a), dy = idim(p[1], a);
      SparseMat m(dx * dy, dx * dy);
      for (int i = 0; i < dx; ++i)
        for (int j = 0; j < dy; ++j) m.set(j * dx + i, i * dy + j, 1);
      return m;
    }
    case StructKind::XiP: {
      const int dx = idim(p[0], a), dy = idim(p[1], a);
      SparseMat m(dx + dy, dx + dy);
      for (int i = 0; i < dx; ++i) m.set(dy + i, i, 1);
      for (int j = 0; j < dy; ++j) m.set(j, dx + j, 1);
      return m;
    }
    case StructKind::DeltaL: {
      const int da = idim(p[0], a), db = idim(p[1], a), dc = idim(p[2], a);
      const int n = da * (db + dc);
      SparseMat m(n, n);
      for (int x = 0; x < da; ++x)
        for (int y = 0; y < db + dc; ++y) {
          const int src = x * (db + dc) + y;
          const int tgt = y < db ? x * db + y : da * db + x * dc + (y - db);
          m.set(tgt, src, 1);
        }
      return m;
    }
    case StructKind::Diag: {
      const int d = idim(p[0], a);
      SparseMat m(2 * d, d);
      for (int i = 0; i < d; ++i) {
        m.set(i, i, 1);
        m.set(d + i, i, 1);
      }
      return m;
    }
    case StructKind::Bang: return SparseMat(0, idim(p[0], a));
    case StructKind::LambdaZ:
    case StructKind::RhoZ: return SparseMat(0, 0);
    default: {
      auto [s, t] = structType(k, p);
      return SparseMat::identity(idim(s, a));
    }
  }
}

}  // namespace

SparseMat evalMor(const MorTerm& f, const ModelAssign& a) {
  switch (f.kind()) {
    case MorKind::Id: return SparseMat::identity(idim(f.src(), a));
    case MorKind::Struct: {
      SparseMat m = structForward(f.structKind(), f.params(), a);
      // Structural isomorphisms evaluate to permutations, so the inverse is the transpose.
      return f.dir() == Dir::Fwd ? m : m.transpose();
    }
    case MorKind::Named: {
      auto it = a.genMors.find(f.name());
      if (it == a.genMors.end()) fail(ErrorCode::UnassignedGenerator, "no matrix for morphism " + f.name());
      const int r = idim(f.tgt(), a), c = idim(f.src(), a);
      if (it->second.rows() != r || it->second.cols() != c)
        fail(ErrorCode::DimensionMismatch, "matrix for " + f.name() + " is " + std::to_string(it->second.rows()) +
                                               "x" + std::to_string(it->second.cols()) + ", expected " +
                                               std::to_string(r) + "x" + std::to_string(c));
      return it->second;
    }
    case MorKind::VComp: return evalMor(f.after(), a) * evalMor(f.before(), a);
    case MorKind::TensorM: return kron(evalMor(f.left(), a), evalMor(f.right(), a));
    case MorKind::OplusM: return blockDiag(evalMor(f.left(), a), evalMor(f.right(), a));
  }
  return {};
}

bool equalInModel(const MorTerm& f, const MorTerm& g, const ModelAssign& a, double tol) {
  if (f.src() != g.src() || f.tgt() != g.tgt()) fail(ErrorCode::NotParallel, "equalInModel on non-parallel pair");
  SparseMat x = evalMor(f, a), y = evalMor(g, a);
  if (tol == 0.0) return x == y;
  return x.maxAbsDiff(y) <= tol;
}

std::vector<ModelAssign> randomModels(const std::vector<std::string>& gens, int count, int maxDim,
                                      std::uint64_t seed, const std::vector<MorTerm>& named,
                                      const ModelAssign* fixed) {
  if (maxDim < 1) fail(ErrorCode::InvalidArgument, "maxDim must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dimDist(1, maxDim);
  std::uniform_int_distribution<int> entryDist(-3, 3);
  std::vector<ModelAssign> out;
  for (int k = 0; k < count; ++k) {
    ModelAssign a;
    a.seed = seed;
    for (const auto& g : gens) {
      int d = dimDist(rng);
      if (fixed) {
        auto it = fixed->genDims.find(g);
        if (it != fixed->genDims.end()) d = it->second;
      }
      a.genDims[g] = d;
    }
    if (fixed)
      for (const auto& [g, d] : fixed->genDims) a.genDims.emplace(g, d);
    for (const auto& m : named) {
      if (a.genMors.count(m.name())) continue;
      if (fixed) {
        auto it = fixed->genMors.find(m.name());
        if (it != fixed->genMors.end()) {
          a.genMors[m.name()] = it->second;
          continue;
        }
      }
      const int r = static_cast<int>(dimOf(m.tgt(), a)), c = static_cast<int>(dimOf(m.src(), a));
      SparseMat mat(r, c);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) mat.set(i, j, entryDist(rng));
      a.genMors[m.name()] = std::move(mat);
    }
    out.push_back(std::move(a));
  }
  return out;
}

bool checkStarHom(int n, const std::vector<std::vector<CMat>>& img, double tol, std::string* why) {
  if (n < 1 || static_cast<int>(img.size()) != n) fail(ErrorCode::DimensionMismatch, "expected n x n unit images");
  const Eigen::Index m = img[0].empty() ? 0 : img[0][0].rows();
  for (const auto& row : img) {
    if (static_cast<int>(row.size()) != n) fail(ErrorCode::DimensionMismatch, "expected n x n unit images");
    for (const auto& x : row)
      if (x.rows() != m || x.cols() != m) fail(ErrorCode::DimensionMismatch, "unit images must share a square size");
  }
  auto report = [&](const std::string& s) {
    if (why) *why = s;
    return false;
  };
  const CMat zero = CMat::Zero(m, m);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if ((img[i][j].adjoint() - img[j][i]).cwiseAbs().maxCoeff() > tol)
        return report("adjoint fails at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          CMat prod = img[i][j] * img[k][l];
          const CMat& expect = j == k ? img[i][l] : zero;
          if (m > 0 && (prod - expect).cwiseAbs().maxCoeff() > tol)
            return report("product fails at e" + std::to_string(i) + std::to_string(j) + " e" + std::to_string(k) +
                          std::to_string(l));
        }
    }
  return true;
}

}  // namespace rig

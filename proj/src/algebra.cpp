#include "borno/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "borno/error.hpp"
#include "borno/lp.hpp"

namespace borno {

const char* to_string(NormKind kind) {
  return kind == NormKind::Operator2 ? "op2" : "maxrow";
}

// ---------------------------------------------------------------------------
// Descriptors

AlgebraDescriptor AlgebraDescriptor::matrix(int dim, NormKind norm) {
  if (dim < 1) throw Error(ErrorKind::InvalidInput, "matrix algebra needs dim >= 1");
  AlgebraDescriptor d;
  d.kind_ = Kind::Matrix;
  d.dim_ = dim;
  d.norm_ = norm;
  d.finalize();
  return d;
}

AlgebraDescriptor AlgebraDescriptor::direct_sum(std::vector<AlgebraDescriptor> summands) {
  if (summands.empty()) throw Error(ErrorKind::InvalidInput, "direct sum needs a summand");
  AlgebraDescriptor d;
  d.kind_ = Kind::DirectSum;
  d.children_ = std::move(summands);
  d.finalize();
  return d;
}

AlgebraDescriptor AlgebraDescriptor::grid(std::vector<double> points,
                                          std::vector<double> distances,
                                          AlgebraDescriptor fiber) {
  if (points.empty()) throw Error(ErrorKind::InvalidInput, "grid must be nonempty");
  if (distances.size() != points.size() * points.size())
    throw Error(ErrorKind::InvalidInput, "grid distance table has wrong size");
  AlgebraDescriptor d;
  d.kind_ = Kind::Grid;
  d.points_ = std::move(points);
  d.distances_ = std::move(distances);
  d.children_.push_back(std::move(fiber));
  d.finalize();
  return d;
}

AlgebraDescriptor AlgebraDescriptor::grid(std::vector<double> points, AlgebraDescriptor fiber) {
  std::vector<double> dist(points.size() * points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = 0; j < points.size(); ++j)
      dist[i * points.size() + j] = std::abs(points[i] - points[j]);
  return grid(std::move(points), std::move(dist), std::move(fiber));
}

AlgebraDescriptor AlgebraDescriptor::circle_grid(int m, AlgebraDescriptor fiber) {
  if (m < 1) throw Error(ErrorKind::InvalidInput, "circle grid needs m >= 1");
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> pts(m);
  for (int i = 0; i < m; ++i) pts[i] = two_pi * i / m;
  std::vector<double> dist(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double delta = std::abs(pts[i] - pts[j]);
      dist[static_cast<std::size_t>(i) * m + j] = std::min(delta, two_pi - delta);
    }
  return grid(std::move(pts), std::move(dist), std::move(fiber));
}

double AlgebraDescriptor::distance(std::size_t i, std::size_t j) const {
  return distances_[i * points_.size() + j];
}

void AlgebraDescriptor::finalize() {
  blocks_.clear();
  switch (kind_) {
    case Kind::Matrix:
      blocks_.push_back({dim_, norm_});
      break;
    case Kind::DirectSum:
      for (const auto& c : children_)
        blocks_.insert(blocks_.end(), c.blocks().begin(), c.blocks().end());
      break;
    case Kind::Grid:
      for (std::size_t p = 0; p < points_.size(); ++p)
        blocks_.insert(blocks_.end(), fiber().blocks().begin(), fiber().blocks().end());
      break;
  }
  complex_dim_ = 0;
  for (const auto& b : blocks_) complex_dim_ += static_cast<std::size_t>(b.dim) * b.dim;
}

bool AlgebraDescriptor::operator==(const AlgebraDescriptor& o) const {
  if (kind_ != o.kind_) return false;
  switch (kind_) {
    case Kind::Matrix:
      return dim_ == o.dim_ && norm_ == o.norm_;
    case Kind::DirectSum:
      return children_ == o.children_;
    case Kind::Grid:
      return points_ == o.points_ && distances_ == o.distances_ && children_ == o.children_;
  }
  return false;
}

std::string AlgebraDescriptor::to_string() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Matrix:
      os << "M" << dim_ << "[" << borno::to_string(norm_) << "]";
      break;
    case Kind::DirectSum:
      os << "sum(";
      for (std::size_t i = 0; i < children_.size(); ++i)
        os << (i ? "," : "") << children_[i].to_string();
      os << ")";
      break;
    case Kind::Grid:
      os << "grid" << points_.size() << "(" << fiber().to_string() << ")";
      break;
  }
  return os.str();
}

DescriptorPtr share(AlgebraDescriptor d) {
  return std::make_shared<const AlgebraDescriptor>(std::move(d));
}

// ---------------------------------------------------------------------------
// Elements

namespace {

void require_same(const AlgebraElement& a, const AlgebraElement& b, const char* op) {
  if (!a.same_algebra(b))
    throw Error(ErrorKind::DescriptorMismatch, std::string(op) + ": descriptor mismatch between " +
                                                   a.descriptor().to_string() + " and " +
                                                   b.descriptor().to_string());
}

}  // namespace

AlgebraElement::AlgebraElement(DescriptorPtr descriptor, std::vector<Matrix> blocks)
    : descriptor_(std::move(descriptor)), blocks_(std::move(blocks)) {
  const auto& layout = descriptor_->blocks();
  if (layout.size() != blocks_.size())
    throw Error(ErrorKind::InvalidInput, "element block count does not match descriptor " +
                                             descriptor_->to_string());
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (blocks_[i].rows() != layout[i].dim || blocks_[i].cols() != layout[i].dim)
      throw Error(ErrorKind::InvalidInput, "element block shape does not match descriptor " +
                                               descriptor_->to_string());
    if (!blocks_[i].allFinite())
      throw Error(ErrorKind::InvalidInput, "algebra elements must have finite entries");
  }
}

AlgebraElement AlgebraElement::zero(const DescriptorPtr& d) {
  std::vector<Matrix> blocks;
  blocks.reserve(d->blocks().size());
  for (const auto& b : d->blocks()) blocks.push_back(Matrix::Zero(b.dim, b.dim));
  return AlgebraElement(d, std::move(blocks));
}

AlgebraElement AlgebraElement::identity(const DescriptorPtr& d) {
  std::vector<Matrix> blocks;
  blocks.reserve(d->blocks().size());
  for (const auto& b : d->blocks()) blocks.push_back(Matrix::Identity(b.dim, b.dim));
  return AlgebraElement(d, std::move(blocks));
}

AlgebraElement AlgebraElement::from_matrix(const Matrix& m, NormKind norm) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::InvalidInput, "matrix must be square");
  return AlgebraElement(share(AlgebraDescriptor::matrix(static_cast<int>(m.rows()), norm)), {m});
}

AlgebraElement AlgebraElement::from_coordinates(const DescriptorPtr& d, const CVector& coords) {
  if (static_cast<std::size_t>(coords.size()) != d->complex_dim())
    throw Error(ErrorKind::InvalidInput, "coordinate vector has wrong length for " + d->to_string());
  std::vector<Matrix> blocks;
  std::size_t off = 0;
  for (const auto& b : d->blocks()) {
    Matrix m(b.dim, b.dim);
    for (int r = 0; r < b.dim; ++r)
      for (int c = 0; c < b.dim; ++c) m(r, c) = coords(static_cast<Eigen::Index>(off++));
    blocks.push_back(std::move(m));
  }
  return AlgebraElement(d, std::move(blocks));
}

AlgebraElement AlgebraElement::basis(const DescriptorPtr& d, std::size_t i) {
  CVector e = CVector::Zero(static_cast<Eigen::Index>(d->complex_dim()));
  e(static_cast<Eigen::Index>(i)) = 1.0;
  return from_coordinates(d, e);
}

AlgebraElement AlgebraElement::from_fibers(const DescriptorPtr& grid,
                                           const std::vector<AlgebraElement>& fibers) {
  if (grid->kind() != AlgebraDescriptor::Kind::Grid)
    throw Error(ErrorKind::InvalidInput, "from_fibers needs a grid descriptor");
  if (fibers.size() != grid->grid_size())
    throw Error(ErrorKind::InvalidInput, "one fiber element per grid point required");
  std::vector<Matrix> blocks;
  for (const auto& f : fibers) {
    if (!(f.descriptor() == grid->fiber()))
      throw Error(ErrorKind::DescriptorMismatch,
                  "fiber element " + f.descriptor().to_string() + " does not match " +
                      grid->fiber().to_string());
    blocks.insert(blocks.end(), f.blocks().begin(), f.blocks().end());
  }
  return AlgebraElement(grid, std::move(blocks));
}

CVector AlgebraElement::coordinates() const {
  CVector v(static_cast<Eigen::Index>(descriptor_->complex_dim()));
  Eigen::Index off = 0;
  for (const auto& m : blocks_)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) v(off++) = m(r, c);
  return v;
}

Eigen::VectorXd AlgebraElement::real_coordinates() const {
  const CVector c = coordinates();
  Eigen::VectorXd v(2 * c.size());
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    v(2 * i) = c(i).real();
    v(2 * i + 1) = c(i).imag();
  }
  return v;
}

AlgebraElement AlgebraElement::fiber_at(std::size_t i) const {
  if (descriptor_->kind() != AlgebraDescriptor::Kind::Grid)
    throw Error(ErrorKind::InvalidInput, "fiber_at needs a grid element");
  const auto& fiber = descriptor_->fiber();
  const std::size_t per = fiber.blocks().size();
  std::vector<Matrix> blocks(blocks_.begin() + static_cast<std::ptrdiff_t>(i * per),
                             blocks_.begin() + static_cast<std::ptrdiff_t>((i + 1) * per));
  return AlgebraElement(share(fiber), std::move(blocks));
}

bool AlgebraElement::same_algebra(const AlgebraElement& other) const {
  return descriptor_ == other.descriptor_ || *descriptor_ == *other.descriptor_;
}

bool AlgebraElement::is_zero() const {
  for (const auto& m : blocks_)
    if (!m.isZero(0.0)) return false;
  return true;
}

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
  require_same(a, b, "add");
  std::vector<Matrix> blocks(a.blocks().size());
  for (std::size_t i = 0; i < blocks.size(); ++i) blocks[i] = a.block(i) + b.block(i);
  return AlgebraElement(a.descriptor_ptr(), std::move(blocks));
}

AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
  require_same(a, b, "subtract");
  std::vector<Matrix> blocks(a.blocks().size());
  for (std::size_t i = 0; i < blocks.size(); ++i) blocks[i] = a.block(i) - b.block(i);
  return AlgebraElement(a.descriptor_ptr(), std::move(blocks));
}

AlgebraElement operator*(Complex c, const AlgebraElement& a) {
  std::vector<Matrix> blocks(a.blocks().size());
  for (std::size_t i = 0; i < blocks.size(); ++i) blocks[i] = c * a.block(i);
  return AlgebraElement(a.descriptor_ptr(), std::move(blocks));
}

namespace {

// Size of the smallest top-left corner outside which m vanishes. Kernels work
// on this corner so that corner-embedded copies give bit-identical results.
Eigen::Index active_size(const Matrix& m) {
  Eigen::Index k = m.rows();
  while (k > 1 && m.row(k - 1).isZero(0.0) && m.col(k - 1).isZero(0.0)) --k;
  return k;
}

}  // namespace

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) {
  require_same(a, b, "multiply");
  std::vector<Matrix> blocks(a.blocks().size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Matrix& x = a.block(i);
    const Matrix& y = b.block(i);
    const Eigen::Index n = x.rows();
    if (n == 1) {
      blocks[i] = Matrix::Constant(1, 1, x(0, 0) * y(0, 0));
      continue;
    }
    const Eigen::Index k = std::max(active_size(x), active_size(y));
    if (k == n) {
      blocks[i].noalias() = x * y;
    } else {
      blocks[i] = Matrix::Zero(n, n);
      if (k == 1)
        blocks[i](0, 0) = x(0, 0) * y(0, 0);
      else
        blocks[i].topLeftCorner(k, k).noalias() = x.topLeftCorner(k, k) * y.topLeftCorner(k, k);
    }
  }
  return AlgebraElement(a.descriptor_ptr(), std::move(blocks));
}

// ---------------------------------------------------------------------------
// Norms and spectral radius

namespace {

double operator_two_norm(const Matrix& full) {
  const Eigen::Index n = active_size(full);
  const Matrix m = full.topLeftCorner(n, n);
  if (n == 1) return std::abs(m(0, 0));
  if (n == 2) {
    // Closed form: sigma_max^2 = (F + sqrt(F^2 - 4|det|^2)) / 2.
    const double f = m.squaredNorm();
    const double det = std::abs(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
    const double disc = std::max(0.0, (f - 2.0 * det) * (f + 2.0 * det));
    return std::sqrt(0.5 * (f + std::sqrt(disc)));
  }
  if (m.isZero(0.0)) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double sigma = svd.singularValues()(0);
  // Residual certificate for the leading singular triplet.
  const double res = (m * svd.matrixV().col(0) - sigma * svd.matrixU().col(0)).norm() +
                     (m.adjoint() * svd.matrixU().col(0) - sigma * svd.matrixV().col(0)).norm();
  if (!(res <= kNormTol * sigma * 100.0 + 1e-300)) {
    const double lo = (m * svd.matrixV().col(0)).norm();
    throw NumericalFailure("singular value iteration failed its residual check", lo, m.norm());
  }
  return sigma;
}

double max_row_sum(const Matrix& full) {
  const Eigen::Index n = active_size(full);
  const auto m = full.topLeftCorner(n, n);
  double best = 0.0;
  for (Eigen::Index r = 0; r < m.rows(); ++r) best = std::max(best, m.row(r).cwiseAbs().sum());
  return best;
}

}  // namespace

double block_norm(const Matrix& m, NormKind kind) {
  return kind == NormKind::Operator2 ? operator_two_norm(m) : max_row_sum(m);
}

double norm(const AlgebraElement& a) {
  const auto& layout = a.descriptor().blocks();
  double best = 0.0;
  for (std::size_t i = 0; i < layout.size(); ++i)
    best = std::max(best, block_norm(a.block(i), layout[i].norm));
  return best;
}

double block_spectral_radius(const Matrix& full) {
  const Eigen::Index n = active_size(full);
  const Matrix m = full.topLeftCorner(n, n);
  if (n == 1) return std::abs(m(0, 0));
  if (n == 2) {
    const Complex half_tr = 0.5 * (m(0, 0) + m(1, 1));
    const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const Complex root = std::sqrt(half_tr * half_tr - det);
    return std::max(std::abs(half_tr + root), std::abs(half_tr - root));
  }
  Eigen::ComplexEigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    const double hi = gelfand_upper(AlgebraElement::from_matrix(m));
    throw NumericalFailure("eigenvalue iteration did not converge", 0.0, hi);
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double spectral_radius_single(const AlgebraElement& a) {
  double best = 0.0;
  for (const auto& b : a.blocks()) best = std::max(best, block_spectral_radius(b));
  return best;
}

double gelfand_upper(const AlgebraElement& a, int max_power) {
  double best = norm(a);
  AlgebraElement p = a;
  for (int k = 2; k <= max_power; ++k) {
    p = multiply(p, a);
    const double nk = norm(p);
    if (nk == 0.0) return 0.0;
    best = std::min(best, std::pow(nk, 1.0 / k));
  }
  return best;
}

// ---------------------------------------------------------------------------
// Disks

struct Disk::Node {
  Kind kind;
  double value = 0.0;  // radius or scale factor
  std::vector<AlgebraElement> generators;
  std::vector<Disk> children;
};

Disk Disk::norm_ball(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius))
    throw Error(ErrorKind::InvalidInput, "norm ball radius must be positive and finite");
  auto n = std::make_shared<Node>();
  n->kind = Kind::NormBall;
  n->value = radius;
  return Disk(n);
}

Disk Disk::finite_hull(std::vector<AlgebraElement> generators) {
  if (generators.empty()) throw Error(ErrorKind::InvalidInput, "finite hull needs generators");
  for (const auto& g : generators)
    if (!g.same_algebra(generators.front()))
      throw Error(ErrorKind::DescriptorMismatch, "hull generators live in different algebras");
  auto n = std::make_shared<Node>();
  n->kind = Kind::FiniteHull;
  n->generators = std::move(generators);
  return Disk(n);
}

Disk Disk::scaled(double c, const Disk& d) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw Error(ErrorKind::InvalidInput, "disk scale must be positive and finite");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Scaled;
  n->value = c;
  n->children = {d};
  return Disk(n);
}

Disk Disk::sum(const Disk& a, const Disk& b) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sum;
  n->children = {a, b};
  return Disk(n);
}

Disk::Kind Disk::kind() const { return node_->kind; }
double Disk::radius() const { return node_->value; }
const std::vector<AlgebraElement>& Disk::generators() const { return node_->generators; }
double Disk::factor() const { return node_->value; }
const Disk& Disk::inner() const { return node_->children.front(); }
const Disk& Disk::left() const { return node_->children.front(); }
const Disk& Disk::right() const { return node_->children.back(); }

namespace {

// A disk flattened into a Minkowski sum of norm balls and real-coefficient
// hulls, each with its own scale.
struct Flattened {
  double ball_radius = 0.0;
  std::vector<std::vector<AlgebraElement>> hulls;
};

void flatten(const Disk& d, double scale, Flattened& out) {
  switch (d.kind()) {
    case Disk::Kind::NormBall:
      out.ball_radius += scale * d.radius();
      break;
    case Disk::Kind::FiniteHull: {
      std::vector<AlgebraElement> g;
      g.reserve(d.generators().size());
      for (const auto& e : d.generators()) g.push_back(Complex(scale) * e);
      out.hulls.push_back(std::move(g));
      break;
    }
    case Disk::Kind::Scaled:
      flatten(d.inner(), scale * d.factor(), out);
      break;
    case Disk::Kind::Sum:
      flatten(d.left(), scale, out);
      flatten(d.right(), scale, out);
      break;
  }
}

// min t such that x = sum_h G_h lambda_h with ||lambda_h||_1 <= t for each hull h.
double hull_sum_gauge(const std::vector<std::vector<AlgebraElement>>& hulls,
                      const AlgebraElement& x) {
  std::vector<Eigen::VectorXd> cols;
  std::vector<int> owner;
  for (std::size_t h = 0; h < hulls.size(); ++h)
    for (const auto& g : hulls[h]) {
      if (!g.same_algebra(x))
        throw Error(ErrorKind::DescriptorMismatch, "gauge: descriptor mismatch between " +
                                                       g.descriptor().to_string() + " and " +
                                                       x.descriptor().to_string());
      cols.push_back(g.real_coordinates());
      owner.push_back(static_cast<int>(h));
    }
  const Eigen::VectorXd rhs = x.real_coordinates();
  if (rhs.isZero(0.0)) return 0.0;
  const Eigen::Index dim = rhs.size();
  const Eigen::Index m = static_cast<Eigen::Index>(cols.size());
  Eigen::MatrixXd G(dim, m);
  for (Eigen::Index j = 0; j < m; ++j) G.col(j) = cols[j];

  // Rank test and row reduction onto an orthonormal basis of range(G).
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(G, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > kRankTol * std::max(1.0, smax)) ++rank;
  const Eigen::MatrixXd Q = svd.matrixU().leftCols(rank);
  const Eigen::VectorXd proj = Q.transpose() * rhs;
  const double residual = (rhs - Q * proj).norm();
  if (rank == 0 || residual > kRankTol * std::max(1.0, rhs.norm())) return kInfinity;

  // Variables: lambda+ (m), lambda- (m), t. Minimize t.
  const Eigen::Index nh = static_cast<Eigen::Index>(hulls.size());
  LinearProgram lp;
  lp.cost = Eigen::VectorXd::Zero(2 * m + 1);
  lp.cost(2 * m) = 1.0;
  const Eigen::MatrixXd QG = Q.transpose() * G;
  lp.eq_matrix = Eigen::MatrixXd::Zero(rank, 2 * m + 1);
  lp.eq_matrix.leftCols(m) = QG;
  lp.eq_matrix.middleCols(m, m) = -QG;
  lp.eq_rhs = proj;
  lp.le_matrix = Eigen::MatrixXd::Zero(nh, 2 * m + 1);
  for (Eigen::Index j = 0; j < m; ++j) {
    lp.le_matrix(owner[j], j) = 1.0;
    lp.le_matrix(owner[j], m + j) = 1.0;
  }
  lp.le_matrix.col(2 * m).setConstant(-1.0);
  lp.le_rhs = Eigen::VectorXd::Zero(nh);
  const LpResult res = solve_lp(lp, kLpTol);
  if (res.status == LpResult::Status::Infeasible) return kInfinity;
  if (res.status != LpResult::Status::Optimal)
    throw NumericalFailure("gauge linear program did not reach optimality", 0.0, kInfinity);
  return std::max(0.0, res.value);
}

}  // namespace

double gauge(const Disk& d, const AlgebraElement& x) {
  Flattened f;
  flatten(d, 1.0, f);
  if (f.hulls.empty()) return norm(x) / f.ball_radius;
  if (f.ball_radius > 0.0)
    throw Error(ErrorKind::Unsupported,
                "gauge of a sum mixing norm balls and finite hulls is not an LP");
  return hull_sum_gauge(f.hulls, x);
}

bool contains(const Disk& d, const AlgebraElement& x) { return gauge(d, x) <= 1.0 + kLpTol; }

// ---------------------------------------------------------------------------
// Bounded sets

BoundedSet::BoundedSet(std::vector<AlgebraElement> gens, bool as_hull)
    : generators(std::move(gens)), hull(as_hull) {
  if (generators.empty()) throw Error(ErrorKind::InvalidInput, "bounded set needs generators");
  for (const auto& g : generators)
    if (!g.same_algebra(generators.front()))
      throw Error(ErrorKind::DescriptorMismatch,
                  "bounded set generators live in different algebras: " +
                      g.descriptor().to_string() + " vs " +
                      generators.front().descriptor().to_string());
}

BoundedSet scale(Complex c, const BoundedSet& s) {
  std::vector<AlgebraElement> g;
  g.reserve(s.size());
  for (const auto& e : s.generators) g.push_back(c * e);
  return BoundedSet(std::move(g), s.hull);
}

BoundedSet power(const BoundedSet& s, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidInput, "power needs n >= 1");
  std::vector<AlgebraElement> current = s.generators;
  for (int k = 1; k < n; ++k) {
    std::vector<AlgebraElement> next;
    next.reserve(current.size() * s.size());
    for (const auto& p : current)
      for (const auto& g : s.generators) next.push_back(multiply(p, g));
    current = std::move(next);
  }
  return BoundedSet(std::move(current), s.hull);
}

std::vector<AlgebraElement> hull_probe_generators(const BoundedSet& s) {
  std::vector<AlgebraElement> out = s.generators;
  for (const auto& g : s.generators) out.push_back(Complex(0.0, 1.0) * g);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      out.push_back(Complex(0.5) * (s.generators[i] + s.generators[j]));
  return out;
}

}  // namespace borno

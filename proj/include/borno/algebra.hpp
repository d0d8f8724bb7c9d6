#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace borno {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Relative tolerances shared by the norm, eigenvalue, LP and rank routines.
inline constexpr double kNormTol = 1e-10;
inline constexpr double kEigenTol = 1e-9;
inline constexpr double kLpTol = 1e-9;
inline constexpr double kRankTol = 1e-9;

enum class NormKind { Operator2, MaxRowSum };

const char* to_string(NormKind kind);

/// Structure of a finite-dimensional normed algebra: a matrix algebra, a
/// finite direct sum, or matrix-valued functions on a finite metric grid.
///
/// Every descriptor flattens into an ordered list of square matrix blocks;
/// multiplication is blockwise and the norm is the maximum block norm. A
/// direct sum lists its summands' blocks in order, a grid algebra lists the
/// fiber blocks point by point.
class AlgebraDescriptor {
 public:
  enum class Kind { Matrix, DirectSum, Grid };

  struct Block {
    int dim;
    NormKind norm;
    bool operator==(const Block&) const = default;
  };

  static AlgebraDescriptor matrix(int dim, NormKind norm = NormKind::Operator2);
  static AlgebraDescriptor direct_sum(std::vector<AlgebraDescriptor> summands);
  /// Grid with an explicit distance table (row-major, points.size() squared).
  static AlgebraDescriptor grid(std::vector<double> points,
                                std::vector<double> distances,
                                AlgebraDescriptor fiber);
  /// Grid on the real line, distance |x - y|.
  static AlgebraDescriptor grid(std::vector<double> points, AlgebraDescriptor fiber);
  /// m equally spaced points on the circle [0, 2π), arc-length distance.
  static AlgebraDescriptor circle_grid(int m, AlgebraDescriptor fiber);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  NormKind norm() const { return norm_; }
  const std::vector<AlgebraDescriptor>& summands() const { return children_; }
  const AlgebraDescriptor& fiber() const { return children_.front(); }
  const std::vector<double>& points() const { return points_; }
  double distance(std::size_t i, std::size_t j) const;
  std::size_t grid_size() const { return points_.size(); }

  const std::vector<Block>& blocks() const { return blocks_; }
  /// Number of complex coordinates, the sum of squared block sizes.
  std::size_t complex_dim() const { return complex_dim_; }

  bool operator==(const AlgebraDescriptor& other) const;
  std::string to_string() const;

 private:
  AlgebraDescriptor() = default;
  void finalize();

  Kind kind_ = Kind::Matrix;
  int dim_ = 0;
  NormKind norm_ = NormKind::Operator2;
  std::vector<AlgebraDescriptor> children_;
  std::vector<double> points_;
  std::vector<double> distances_;
  std::vector<Block> blocks_;
  std::size_t complex_dim_ = 0;
};

using DescriptorPtr = std::shared_ptr<const AlgebraDescriptor>;

DescriptorPtr share(AlgebraDescriptor d);

/// Element of a model algebra. Blocks follow the descriptor's flattened layout.
class AlgebraElement {
 public:
  /// Placeholder with no algebra; only assignable.
  AlgebraElement() = default;
  AlgebraElement(DescriptorPtr descriptor, std::vector<Matrix> blocks);

  static AlgebraElement zero(const DescriptorPtr& d);
  static AlgebraElement identity(const DescriptorPtr& d);
  /// Single-block convenience for MatrixAlgebra(n, norm).
  static AlgebraElement from_matrix(const Matrix& m, NormKind norm = NormKind::Operator2);
  static AlgebraElement from_coordinates(const DescriptorPtr& d, const CVector& coords);
  /// i-th matrix unit in the standard basis (block-major, row-major inside a block).
  static AlgebraElement basis(const DescriptorPtr& d, std::size_t i);
  /// Grid element from one fiber element per grid point.
  static AlgebraElement from_fibers(const DescriptorPtr& grid,
                                    const std::vector<AlgebraElement>& fibers);

  const AlgebraDescriptor& descriptor() const { return *descriptor_; }
  const DescriptorPtr& descriptor_ptr() const { return descriptor_; }
  const std::vector<Matrix>& blocks() const { return blocks_; }
  const Matrix& block(std::size_t i) const { return blocks_[i]; }

  CVector coordinates() const;
  /// Real and imaginary parts interleaved per complex coordinate.
  Eigen::VectorXd real_coordinates() const;
  /// The fiber element at grid point i (grid descriptors only).
  AlgebraElement fiber_at(std::size_t i) const;

  bool same_algebra(const AlgebraElement& other) const;
  bool is_zero() const;

 private:
  DescriptorPtr descriptor_;
  std::vector<Matrix> blocks_;
};

AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement operator*(Complex c, const AlgebraElement& a);

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b);

double block_norm(const Matrix& m, NormKind kind);
double norm(const AlgebraElement& a);

double block_spectral_radius(const Matrix& m);
/// Largest eigenvalue modulus, maximized over blocks.
double spectral_radius_single(const AlgebraElement& a);

/// Gelfand bracket min_k ||a^k||^{1/k} for k up to max_power.
double gelfand_upper(const AlgebraElement& a, int max_power = 64);

/// Bounded absolutely convex set with a computable gauge.
class Disk {
 public:
  enum class Kind { NormBall, FiniteHull, Scaled, Sum };

  static Disk norm_ball(double radius);
  static Disk finite_hull(std::vector<AlgebraElement> generators);
  static Disk scaled(double c, const Disk& d);
  static Disk sum(const Disk& a, const Disk& b);

  Kind kind() const;
  double radius() const;                              // NormBall
  const std::vector<AlgebraElement>& generators() const;  // FiniteHull
  double factor() const;                              // Scaled
  const Disk& inner() const;                          // Scaled
  const Disk& left() const;                           // Sum
  const Disk& right() const;                          // Sum

 private:
  struct Node;
  explicit Disk(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Minkowski functional of the disk; +infinity outside its span.
double gauge(const Disk& d, const AlgebraElement& x);
bool contains(const Disk& d, const AlgebraElement& x);

/// Finite generator data for a bounded set, read either as the set itself or
/// as its disked hull.
struct BoundedSet {
  std::vector<AlgebraElement> generators;
  bool hull = false;

  BoundedSet() = default;
  BoundedSet(std::vector<AlgebraElement> gens, bool as_hull = false);

  const AlgebraDescriptor& descriptor() const { return generators.front().descriptor(); }
  const DescriptorPtr& descriptor_ptr() const { return generators.front().descriptor_ptr(); }
  std::size_t size() const { return generators.size(); }
};

/// Scales every generator by c.
BoundedSet scale(Complex c, const BoundedSet& s);
/// All length-n products, lexicographic in generator index.
BoundedSet power(const BoundedSet& s, int n);
/// Generator list whose radius equals the hull's: S, i·S and pairwise midpoints.
std::vector<AlgebraElement> hull_probe_generators(const BoundedSet& s);

}  // namespace borno

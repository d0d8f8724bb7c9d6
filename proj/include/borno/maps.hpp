#pragma once

#include <cstddef>
#include <functional>

#include "borno/algebra.hpp"

namespace borno {

/// Complex-linear map between model algebras, stored as its matrix on the
/// standard bases (target.complex_dim() rows, source.complex_dim() columns).
class LinearMap {
 public:
  LinearMap(DescriptorPtr source, DescriptorPtr target, Matrix action);

  static LinearMap identity(const DescriptorPtr& d);
  static LinearMap zero(const DescriptorPtr& source, const DescriptorPtr& target);
  /// Tabulates a linear function on the source basis.
  static LinearMap from_function(const DescriptorPtr& source, const DescriptorPtr& target,
                                 const std::function<AlgebraElement(const AlgebraElement&)>& f);

  const AlgebraDescriptor& source() const { return *source_; }
  const AlgebraDescriptor& target() const { return *target_; }
  const DescriptorPtr& source_ptr() const { return source_; }
  const DescriptorPtr& target_ptr() const { return target_; }
  const Matrix& action() const { return action_; }

  AlgebraElement operator()(const AlgebraElement& x) const;

 private:
  DescriptorPtr source_;
  DescriptorPtr target_;
  Matrix action_;
};

LinearMap operator+(const LinearMap& a, const LinearMap& b);
LinearMap operator-(const LinearMap& a, const LinearMap& b);
LinearMap operator*(Complex c, const LinearMap& a);
/// after ∘ before
LinearMap compose(const LinearMap& after, const LinearMap& before);

/// Threshold above which a map is not treated as multiplicative.
inline constexpr double kMultDefectTol = 1e-9;

struct DefectReport {
  double mult_defect = 0.0;
  std::size_t worst_i = 0;
  std::size_t worst_j = 0;
  bool flagged = false;  // mult_defect > kMultDefectTol
};

/// max ||f(e_i e_j) - f(e_i) f(e_j)|| over pairs of standard basis elements.
DefectReport check_multiplicative(const LinearMap& f);

/// Linear map with a recorded multiplicativity defect of at most kMultDefectTol.
class Homomorphism {
 public:
  /// Throws InvariantViolation when the map is not multiplicative.
  explicit Homomorphism(LinearMap map);

  const LinearMap& map() const { return map_; }
  double mult_defect() const { return defect_; }
  const AlgebraDescriptor& source() const { return map_.source(); }
  const AlgebraDescriptor& target() const { return map_.target(); }
  AlgebraElement operator()(const AlgebraElement& x) const { return map_(x); }

 private:
  LinearMap map_;
  double defect_ = 0.0;
};

/// Matrix units of M_k into the top-left corner of M_n.
LinearMap corner_embedding(int k, int n, NormKind norm = NormKind::Operator2);
/// Compression of M_n onto its top-left k x k corner.
LinearMap corner_compression(int n, int k, NormKind norm = NormKind::Operator2);
/// a -> a^T on M_n (an anti-homomorphism).
LinearMap transpose_map(int n, NormKind norm = NormKind::Operator2);

}  // namespace borno

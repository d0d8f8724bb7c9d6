#include "borno/maps.hpp"

#include <sstream>
#include <vector>

#include "borno/error.hpp"
#include "borno/parallel.hpp"

namespace borno {

LinearMap::LinearMap(DescriptorPtr source, DescriptorPtr target, Matrix action)
    : source_(std::move(source)), target_(std::move(target)), action_(std::move(action)) {
  if (!source_ || !target_) throw Error(ErrorKind::InvalidInput, "linear map needs descriptors");
  if (static_cast<std::size_t>(action_.rows()) != target_->complex_dim() ||
      static_cast<std::size_t>(action_.cols()) != source_->complex_dim()) {
    std::ostringstream os;
    os << "action matrix is " << action_.rows() << "x" << action_.cols() << ", expected "
       << target_->complex_dim() << "x" << source_->complex_dim();
    throw Error(ErrorKind::InvalidInput, os.str());
  }
  if (!action_.allFinite()) throw Error(ErrorKind::InvalidInput, "action matrix has non-finite entries");
}

LinearMap LinearMap::identity(const DescriptorPtr& d) {
  const auto n = static_cast<Eigen::Index>(d->complex_dim());
  return LinearMap(d, d, Matrix::Identity(n, n));
}

LinearMap LinearMap::zero(const DescriptorPtr& source, const DescriptorPtr& target) {
  return LinearMap(source, target,
                   Matrix::Zero(static_cast<Eigen::Index>(target->complex_dim()),
                                static_cast<Eigen::Index>(source->complex_dim())));
}

LinearMap LinearMap::from_function(const DescriptorPtr& source, const DescriptorPtr& target,
                                   const std::function<AlgebraElement(const AlgebraElement&)>& f) {
  Matrix action(static_cast<Eigen::Index>(target->complex_dim()),
                static_cast<Eigen::Index>(source->complex_dim()));
  for (std::size_t i = 0; i < source->complex_dim(); ++i) {
    const AlgebraElement image = f(AlgebraElement::basis(source, i));
    if (!(image.descriptor() == *target))
      throw Error(ErrorKind::DescriptorMismatch,
                  "function image lies in " + image.descriptor().to_string() + ", expected " +
                      target->to_string());
    action.col(static_cast<Eigen::Index>(i)) = image.coordinates();
  }
  return LinearMap(source, target, std::move(action));
}

AlgebraElement LinearMap::operator()(const AlgebraElement& x) const {
  if (!(x.descriptor() == *source_))
    throw Error(ErrorKind::DescriptorMismatch, "map source is " + source_->to_string() +
                                                   ", argument lies in " + x.descriptor().to_string());
  return AlgebraElement::from_coordinates(target_, action_ * x.coordinates());
}

namespace {

void require_parallel(const LinearMap& a, const LinearMap& b) {
  if (!(a.source() == b.source()) || !(a.target() == b.target()))
    throw Error(ErrorKind::DescriptorMismatch,
                "maps differ: " + a.source().to_string() + " -> " + a.target().to_string() +
                    " vs " + b.source().to_string() + " -> " + b.target().to_string());
}

}  // namespace

LinearMap operator+(const LinearMap& a, const LinearMap& b) {
  require_parallel(a, b);
  return LinearMap(a.source_ptr(), a.target_ptr(), a.action() + b.action());
}

LinearMap operator-(const LinearMap& a, const LinearMap& b) {
  require_parallel(a, b);
  return LinearMap(a.source_ptr(), a.target_ptr(), a.action() - b.action());
}

LinearMap operator*(Complex c, const LinearMap& a) {
  return LinearMap(a.source_ptr(), a.target_ptr(), c * a.action());
}

LinearMap compose(const LinearMap& after, const LinearMap& before) {
  if (!(after.source() == before.target()))
    throw Error(ErrorKind::DescriptorMismatch, "cannot compose: " + before.target().to_string() +
                                                   " vs " + after.source().to_string());
  return LinearMap(before.source_ptr(), after.target_ptr(), after.action() * before.action());
}

DefectReport check_multiplicative(const LinearMap& f) {
  const auto& src = f.source_ptr();
  const std::size_t n = src->complex_dim();
  // Block offsets: basis index -> (block, row, col)
  struct Unit {
    std::size_t block, row, col, offset, dim;
  };
  std::vector<Unit> units;
  units.reserve(n);
  std::size_t offset = 0;
  const auto& layout = src->blocks();
  for (std::size_t b = 0; b < layout.size(); ++b) {
    const auto d = static_cast<std::size_t>(layout[b].dim);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) units.push_back({b, r, c, offset, d});
    offset += d * d;
  }
  std::vector<AlgebraElement> images(n);
  parallel_for(n, [&](std::size_t i) {
    images[i] = AlgebraElement::from_coordinates(f.target_ptr(),
                                                 f.action().col(static_cast<Eigen::Index>(i)));
  });

  std::vector<DefectReport> rows(n);
  parallel_for(n, [&](std::size_t i) {
    DefectReport& row = rows[i];
    row.worst_i = i;
    const Unit& a = units[i];
    for (std::size_t j = 0; j < n; ++j) {
      const Unit& b = units[j];
      // E_ab E_cd = delta_bc E_ad inside one block, zero across blocks.
      AlgebraElement diff = multiply(images[i], images[j]);
      if (a.block == b.block && a.col == b.row) {
        const std::size_t k = a.offset + a.row * a.dim + b.col;
        diff = images[k] - diff;
      }
      const double d = norm(diff);
      if (d > row.mult_defect) {
        row.mult_defect = d;
        row.worst_j = j;
      }
    }
  });
  DefectReport out;
  for (const auto& r : rows)
    if (r.mult_defect > out.mult_defect) out = r;
  out.flagged = out.mult_defect > kMultDefectTol;
  return out;
}

Homomorphism::Homomorphism(LinearMap map) : map_(std::move(map)) {
  const auto rep = check_multiplicative(map_);
  if (rep.flagged) {
    std::ostringstream os;
    os << "map is not multiplicative: defect " << rep.mult_defect << " on basis pair ("
       << rep.worst_i << ", " << rep.worst_j << ")";
    throw Error(ErrorKind::InvariantViolation, os.str());
  }
  defect_ = rep.mult_defect;
}

LinearMap corner_embedding(int k, int n, NormKind norm) {
  if (k < 1 || n < k) throw Error(ErrorKind::InvalidInput, "corner embedding needs 1 <= k <= n");
  const auto src = share(AlgebraDescriptor::matrix(k, norm));
  const auto tgt = share(AlgebraDescriptor::matrix(n, norm));
  Matrix action = Matrix::Zero(n * n, k * k);
  for (int r = 0; r < k; ++r)
    for (int c = 0; c < k; ++c) action(r * n + c, r * k + c) = 1.0;
  return LinearMap(src, tgt, std::move(action));
}

LinearMap corner_compression(int n, int k, NormKind norm) {
  const LinearMap emb = corner_embedding(k, n, norm);
  return LinearMap(emb.target_ptr(), emb.source_ptr(), emb.action().transpose());
}

LinearMap transpose_map(int n, NormKind norm) {
  const auto d = share(AlgebraDescriptor::matrix(n, norm));
  Matrix action = Matrix::Zero(n * n, n * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) action(c * n + r, r * n + c) = 1.0;
  return LinearMap(d, d, std::move(action));
}

}  // namespace borno

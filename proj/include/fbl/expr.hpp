#pragma once

#include <memory>
#include <span>
#include <vector>

#include "fbl/spaces.hpp"

namespace fbl {

// Immutable expression tree over the generators delta_e, evaluated as a
// positively homogeneous function of a dual vector.  Every node carries the
// primal space E; combining expressions over different spaces is a
// construction-time error.
class LatticeExpr {
 public:
  enum class Op { Delta, Scale, Sum, Abs, Max, Min, PSum };

  static LatticeExpr delta(const NormedSpace& space, Vector e);
  static LatticeExpr scale(double c, LatticeExpr f);
  static LatticeExpr sum(std::vector<LatticeExpr> fs);
  static LatticeExpr abs(LatticeExpr f);
  static LatticeExpr max(std::vector<LatticeExpr> fs);
  static LatticeExpr min(std::vector<LatticeExpr> fs);
  // p in [1,inf]; p = inf evaluates as the pointwise max of |children|.
  static LatticeExpr psum(double p, std::vector<LatticeExpr> fs);

  const NormedSpace& space() const;
  Op op() const;
  double scalar() const;                          // Scale factor or PSum exponent
  const Vector& generator() const;                // Delta payload
  const std::vector<LatticeExpr>& children() const;

  double operator()(std::span<const double> xstar) const;

 private:
  struct Node;
  explicit LatticeExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

double evaluate(const LatticeExpr& f, std::span<const double> xstar);

}  // namespace fbl

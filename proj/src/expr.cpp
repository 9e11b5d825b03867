#include "fbl/expr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fbl {

struct LatticeExpr::Node {
  Op op;
  NormedSpace space;
  double scalar = 0.0;  // Scale factor or PSum exponent
  Vector gen;           // Delta payload
  std::vector<LatticeExpr> kids;
};

namespace {

NormedSpace common_space(const std::vector<LatticeExpr>& fs, const char* what) {
  if (fs.empty()) throw ValidationError(std::string(what) + ": needs at least one child");
  const NormedSpace& s = fs.front().space();
  for (const auto& f : fs) {
    if (!(f.space() == s)) {
      throw ValidationError(std::string(what) + ": children live over different spaces");
    }
  }
  return s;
}

}  // namespace

LatticeExpr LatticeExpr::delta(const NormedSpace& space, Vector e) {
  check_dim(e.size(), static_cast<std::size_t>(space.dim), "delta");
  check_finite(e, "delta");
  auto n = std::make_shared<Node>();
  n->op = Op::Delta;
  n->space = space;
  n->gen = std::move(e);
  return LatticeExpr(std::move(n));
}

LatticeExpr LatticeExpr::scale(double c, LatticeExpr f) {
  if (!std::isfinite(c)) throw ValidationError("scale: non-finite factor");
  auto n = std::make_shared<Node>();
  n->op = Op::Scale;
  n->space = f.space();
  n->scalar = c;
  n->kids.push_back(std::move(f));
  return LatticeExpr(std::move(n));
}

LatticeExpr LatticeExpr::sum(std::vector<LatticeExpr> fs) {
  auto n = std::make_shared<Node>();
  n->op = Op::Sum;
  n->space = common_space(fs, "sum");
  n->kids = std::move(fs);
  return LatticeExpr(std::move(n));
}

LatticeExpr LatticeExpr::abs(LatticeExpr f) {
  auto n = std::make_shared<Node>();
  n->op = Op::Abs;
  n->space = f.space();
  n->kids.push_back(std::move(f));
  return LatticeExpr(std::move(n));
}

LatticeExpr LatticeExpr::max(std::vector<LatticeExpr> fs) {
  auto n = std::make_shared<Node>();
  n->op = Op::Max;
  n->space = common_space(fs, "max");
  n->kids = std::move(fs);
  return LatticeExpr(std::move(n));
}

LatticeExpr LatticeExpr::min(std::vector<LatticeExpr> fs) {
  auto n = std::make_shared<Node>();
  n->op = Op::Min;
  n->space = common_space(fs, "min");
  n->kids = std::move(fs);
  return LatticeExpr(std::move(n));
}

LatticeExpr LatticeExpr::psum(double p, std::vector<LatticeExpr> fs) {
  if (!(p >= 1.0) && !std::isinf(p)) throw ValidationError("psum: p must lie in [1,inf]");
  auto n = std::make_shared<Node>();
  n->op = Op::PSum;
  n->space = common_space(fs, "psum");
  n->scalar = p;
  n->kids = std::move(fs);
  return LatticeExpr(std::move(n));
}

const NormedSpace& LatticeExpr::space() const { return node_->space; }
LatticeExpr::Op LatticeExpr::op() const { return node_->op; }
double LatticeExpr::scalar() const { return node_->scalar; }
const Vector& LatticeExpr::generator() const { return node_->gen; }
const std::vector<LatticeExpr>& LatticeExpr::children() const { return node_->kids; }

namespace {

double eval_node(const LatticeExpr& f, std::span<const double> xstar);

double eval_psum(double p, const std::vector<LatticeExpr>& kids, std::span<const double> xstar) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& k : kids) m = std::max(m, std::fabs(eval_node(k, xstar)));
    return m;
  }
  if (p == 1.0) {
    double s = 0.0;
    for (const auto& k : kids) s += std::fabs(eval_node(k, xstar));
    return s;
  }
  double m = 0.0;
  std::vector<double> vals;
  vals.reserve(kids.size());
  for (const auto& k : kids) {
    double v = std::fabs(eval_node(k, xstar));
    vals.push_back(v);
    m = std::max(m, v);
  }
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double v : vals) s += std::pow(v / m, p);
  return m * std::pow(s, 1.0 / p);
}

double eval_node(const LatticeExpr& f, std::span<const double> xstar) {
  using Op = LatticeExpr::Op;
  double r = 0.0;
  switch (f.op()) {
    case Op::Delta:
      r = dot(f.generator(), xstar);
      break;
    case Op::Scale:
      r = f.scalar() * eval_node(f.children()[0], xstar);
      break;
    case Op::Sum:
      for (const auto& k : f.children()) r += eval_node(k, xstar);
      break;
    case Op::Abs:
      r = std::fabs(eval_node(f.children()[0], xstar));
      break;
    case Op::Max: {
      r = -std::numeric_limits<double>::infinity();
      for (const auto& k : f.children()) r = std::max(r, eval_node(k, xstar));
      break;
    }
    case Op::Min: {
      r = std::numeric_limits<double>::infinity();
      for (const auto& k : f.children()) r = std::min(r, eval_node(k, xstar));
      break;
    }
    case Op::PSum:
      r = eval_psum(f.scalar(), f.children(), xstar);
      break;
  }
  if (!std::isfinite(r)) throw NumericalError("evaluate: non-finite intermediate");
  return r;
}

}  // namespace

double LatticeExpr::operator()(std::span<const double> xstar) const {
  return evaluate(*this, xstar);
}

double evaluate(const LatticeExpr& f, std::span<const double> xstar) {
  check_dim(xstar.size(), static_cast<std::size_t>(f.space().dim), "evaluate");
  check_finite(xstar, "evaluate");
  return eval_node(f, xstar);
}

}  // namespace fbl

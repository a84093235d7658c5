#include "encl/forms.hpp"

namespace encl {

TrialForms::TrialForms(SymMatrix m0, SymMatrix m1, SymMatrix m2)
    : m0_(std::move(m0)), m1_(std::move(m1)), m2_(std::move(m2)) {
  if (m1_.size() != m0_.size() || m2_.size() != m0_.size())
    throw std::invalid_argument("TrialForms: M0, M1, M2 must have equal dimensions");
}

TrialForms TrialForms::negated() const { return TrialForms(m0_, -m1_, m2_); }

TrialForms TrialForms::change_basis(const Matrix& t) const {
  return TrialForms(m0_.congruence(t), m1_.congruence(t), m2_.congruence(t));
}

ShiftedForms shift(const TrialForms& forms, double t) {
  return {t, forms.m2() - (2.0 * t) * forms.m1() + (t * t) * forms.m0(),
          forms.m1() - t * forms.m0()};
}

NormalizedForms::NormalizedForms(const TrialForms& forms, double tol)
    : chol_(cholesky_spd(forms.m0(), tol)) {
  const auto lower = chol_.triangularView<Eigen::Lower>();
  auto reduce = [&](const SymMatrix& m) {
    Matrix c = lower.solve(m.dense());
    c = lower.solve(c.transpose().eval());
    return SymMatrix::from_upper(0.5 * (c + c.transpose()));
  };
  k1_ = reduce(forms.m1());
  k2_ = reduce(forms.m2());
}

SymMatrix NormalizedForms::q(double t) const {
  return k2_ - (2.0 * t) * k1_ + (t * t) * SymMatrix::identity(dim());
}

SymMatrix NormalizedForms::l(double t) const { return k1_ - t * SymMatrix::identity(dim()); }

Matrix NormalizedForms::to_original(const Matrix& y) const {
  return chol_.transpose().triangularView<Eigen::Upper>().solve(y);
}

NormalizedForms NormalizedForms::negated() const {
  NormalizedForms out(*this);
  out.k1_ = -k1_;
  return out;
}

}  // namespace encl

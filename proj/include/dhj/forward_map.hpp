#pragma once

#include "dhj/screws.hpp"

namespace dhj {

inline constexpr double kSingularCondition = 1e12;

/// J = (G^T)^-1 = [J_a  J_c]; J_a = [J_a1; J_a2].
struct ForwardJacobian {
  Mat6 j = Mat6::Identity();
  int f = 4;

  MatX ja() const { return j.leftCols(f); }
  MatX jc() const { return j.rightCols(6 - f); }
  MatX ja1() const { return j.topLeftCorner(3, f); }
  MatX ja2() const { return j.bottomLeftCorner(3, f); }
};

inline double condition_2norm(const MatX& m) {
  const Eigen::JacobiSVD<MatX> svd(m);
  const VecX& s = svd.singularValues();
  if (s.size() == 0) return 1.0;
  const double smin = s[s.size() - 1];
  if (smin < 1e-300) return std::numeric_limits<double>::infinity();
  return s[0] / smin;
}

inline ForwardJacobian invert_full(const InverseJacobian& g) {
  const double cond = condition_2norm(g.gt);
  if (!(cond <= kSingularCondition))
    throw Error(ErrorCode::singular_configuration, "cond(G^T) = " + std::to_string(cond));
  ForwardJacobian fj;
  fj.f = g.f;
  fj.j = g.gt.partialPivLu().solve(Mat6::Identity());
  return fj;
}

namespace detail {

/// Moore-Penrose inverse of a full-column-rank matrix; BlockSingular otherwise.
inline MatX left_pinv(const MatX& m, const char* what) {
  const Eigen::JacobiSVD<MatX> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const VecX& s = svd.singularValues();
  if (m.rows() < m.cols() || s.size() == 0 || s[s.size() - 1] <= 1e-12 * s[0])
    throw Error(ErrorCode::block_singular, std::string(what) + " is rank deficient");
  return svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
}

}  // namespace detail

/// Actuated columns of (G^T)^-1 from the block partition
///
///   [A B; C D] [X; Y] = [I_f; 0],   A = G_av^T (f x 3), D = G_cw^T.
///
/// With A+ the left inverse of A and P = I - A A+:
///   Y = K+ [-C A+; P],  K = [D - C A+ B; P B]
///   X = A+ (I - B Y)
/// For square A this is the Schur-complement form
///   X = A^-1 + A^-1 B (D - C A^-1 B)^-1 C A^-1,  Y = -(D - C A^-1 B)^-1 C A^-1.
inline MatX block_ja(const InverseJacobian& g) {
  const int f = g.f;
  const MatX a = g.g_av(), b = g.g_aw(), c = g.g_cv(), d = g.g_cw();
  const MatX a_pinv = detail::left_pinv(a, "G_av^T");
  const MatX p = MatX::Identity(f, f) - a * a_pinv;

  MatX k(d.rows() + f, 3);
  k << d - c * a_pinv * b, p * b;
  MatX rhs(d.rows() + f, f);
  rhs << -c * a_pinv, p;

  const MatX y = detail::left_pinv(k, "Schur complement") * rhs;
  const MatX x = a_pinv * (MatX::Identity(f, f) - b * y);

  MatX ja(6, f);
  ja << x, y;
  return ja;
}

}  // namespace dhj

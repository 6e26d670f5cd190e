#include "pepsim/quon.hpp"

#include <cmath>

#include "pepsim/errors.hpp"

namespace pepsim {

namespace {

Mat3 multiply(const Mat3& a, const Mat3& b) {
  Mat3 out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += a[i][k] * b[k][j];
      out[i][j] = s;
    }
  }
  return out;
}

Mat3 identity() {
  Mat3 m{};
  for (int i = 0; i < 3; ++i) m[i][i] = 1.0;
  return m;
}

// max |m[i][j]| over the leading dim x dim block.
double block_max_abs(const Mat3& m, int dim) {
  double r = 0.0;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) r = std::max(r, std::fabs(m[i][j]));
  }
  return r;
}

}  // namespace

QuonParameter QuonParameter::from_q(double q) {
  if (!(q >= -1.0 && q <= 1.0)) {
    throw ContractError("QuonParameter: q must lie in [-1, 1]");
  }
  return QuonParameter(q, std::sqrt(1.0 + q), 0.5 * (1.0 + q));
}

QuonParameter QuonParameter::from_violation_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ContractError("QuonParameter: violation probability must lie in [0, 1]");
  }
  return QuonParameter(2.0 * p - 1.0, std::sqrt(2.0 * p), p);
}

IkOperatorSet build_ik_operators(double beta) {
  if (!(beta >= 0.0) || !std::isfinite(beta)) {
    throw ContractError("build_ik_operators: beta must be finite and nonnegative");
  }
  IkOperatorSet ops;
  ops.beta = beta;
  // Columns are images of the basis kets.
  ops.creation[1][0] = 1.0;   // |0> -> |1>
  ops.creation[2][1] = beta;  // |1> -> beta |2>
  ops.annihilation[0][1] = 1.0;   // |1> -> |0>
  ops.annihilation[1][2] = beta;  // |2> -> beta |1>
  return ops;
}

QuonResidual check_quon_relation(double q, const IkOperatorSet& ops) {
  if (!(q >= -1.0 && q <= 1.0)) {
    throw ContractError("check_quon_relation: q must lie in [-1, 1]");
  }
  const Mat3 aad = multiply(ops.annihilation, ops.creation);
  const Mat3 ada = multiply(ops.creation, ops.annihilation);
  const Mat3 one = identity();

  // Direct form: a a+ - q a+ a - 1.
  Mat3 direct{};
  // Averaged form: (1+q)/2 [a,a+]- + (1-q)/2 [a,a+]+ - 1; algebraically equal
  // to the direct form, evaluated separately as a floating-point cross-check.
  Mat3 averaged{};
  const double wm = 0.5 * (1.0 + q);
  const double wp = 0.5 * (1.0 - q);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      direct[i][j] = aad[i][j] - q * ada[i][j] - one[i][j];
      const double comm = aad[i][j] - ada[i][j];
      const double anti = aad[i][j] + ada[i][j];
      averaged[i][j] = wm * comm + wp * anti - one[i][j];
    }
  }

  QuonResidual res;
  res.physical = std::max(block_max_abs(direct, 2), block_max_abs(averaged, 2));
  res.full = std::max(block_max_abs(direct, 3), block_max_abs(averaged, 3));
  return res;
}

PairProbabilities mixed_pair_probabilities(const QuonParameter& param) {
  const double p = param.violation_probability();
  return PairProbabilities{1.0 - p, p};
}

}  // namespace pepsim

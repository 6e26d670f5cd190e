#pragma once

#include <array>

namespace pepsim {

using Mat3 = std::array<std::array<double, 3>, 3>;

// Violation strength in the bounded-occupancy oscillator picture. q
// interpolates between Fermi (q = -1) and Bose (q = +1) statistics; a random
// electron pair sits in the anomalous symmetric state with probability
// beta^2/2 = (1+q)/2, with beta = sqrt(1+q).
class QuonParameter {
 public:
  // |q| <= 1.
  static QuonParameter from_q(double q);
  // p = beta^2/2 in [0, 1].
  static QuonParameter from_violation_probability(double p);

  double q() const { return q_; }
  double beta() const { return beta_; }
  double violation_probability() const { return violation_probability_; }

 private:
  QuonParameter(double q, double beta, double p)
      : q_(q), beta_(beta), violation_probability_(p) {}

  double q_;
  double beta_;
  double violation_probability_;
};

// Ladder operators on the occupation basis (|0>, |1>, |2>):
//   creation:     |0> -> |1>,  |1> -> beta |2>,  |2> -> 0
//   annihilation: |0> -> 0,    |1> -> |0>,       |2> -> beta |1>
// annihilation is the transpose of creation.
struct IkOperatorSet {
  Mat3 creation{};
  Mat3 annihilation{};
  double beta = 0.0;
};

// beta >= 0 required.
IkOperatorSet build_ik_operators(double beta);

struct QuonResidual {
  // Max-norm of (a a+ - q a+ a - 1) on the physical span(|0>, |1>), taking the
  // larger of the direct and the Bose/Fermi-averaged commutator forms. Zero up
  // to roundoff when beta^2 = 1 + q.
  double physical = 0.0;
  // Same residual over the full three-state space. The truncation at |2> breaks
  // the relation there, so this is diagnostic only.
  double full = 0.0;
};

// Requires |q| <= 1 and operators built with beta = sqrt(1+q).
QuonResidual check_quon_relation(double q, const IkOperatorSet& ops);

struct PairProbabilities {
  double antisymmetric;  // 1 - beta^2/2
  double symmetric;      // beta^2/2
};

PairProbabilities mixed_pair_probabilities(const QuonParameter& param);

}  // namespace pepsim

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cliquelab/distributions.hpp"
#include "cliquelab/model.hpp"

namespace cliquelab {

enum class PredictorFamily { Degenerate, Bernoulli, Uniform, Beta, Gamma, HalfNormal, LogNormal, ErdosRenyi };

std::string to_string(PredictorFamily family);

struct Prediction {
  PredictorFamily family;
  double value;
  double leading_term;
  std::string note;  // which truncated formula produced value
};

// Asymptotic forms with the o(1) terms dropped. Inner logarithms must be
// positive (DomainError otherwise); Lambert-W arguments outside [-1/e, 0)
// raise RegimeError.
Prediction predict_degenerate(double n, double s);
Prediction predict_bernoulli(double n, double p, double s);
Prediction predict_uniform(double n, double s);
Prediction predict_beta(double n, double s, double alpha, double beta);
Prediction predict_gamma_general(double n, double alpha, double beta, double s);
Prediction predict_halfnormal_general(double n, double sigma, double s);

struct LogNormalBounds {
  double lower;
  double upper;
};
LogNormalBounds predict_lognormal_bounds(double n, double s);
// Midpoint of the two bounds.
Prediction predict_lognormal(double n, double s);

// -k / W_{-1}(-1 / (e (1 + phi)^k)), phi > 0.
double xi(int k, double phi);

// Erdos-Renyi value at the same edge density: predict_degenerate with s / E[W].
Prediction er_comparison(double n, const WeightDistribution& dist, const ScalingSchedule& sched);

// Prediction for (dist, s) when a closed form exists for that family.
Prediction predict_for(const WeightDistribution& dist, double n, double s);

struct TableRow {
  std::string table;  // "1", "2", "3"
  std::string label;
  WeightDistribution dist;
  ScalingSchedule sched;
  bool er_row;  // compares er_comparison against the Degenerate(1) solver at s / E[W]
};

// Rows of the three tables: Table 1 at constant s = 2, Tables 2 and 3 at the
// given phi, each light-tailed row followed by its Erdos-Renyi comparison.
std::vector<TableRow> standard_table_rows(double phi);

struct TableEvaluation {
  double n;
  double prediction;
  double exact;
  double ratio;
  // Log-normal rows only (NaN otherwise): the two bounds and their ratios.
  double bound_lo;
  double bound_hi;
  double ratio_lo;
  double ratio_hi;
};

// Prediction and exact solver value for one row at n (delta as given).
TableEvaluation evaluate_table_row(const TableRow& row, double n, double delta = 0.1);

}  // namespace cliquelab

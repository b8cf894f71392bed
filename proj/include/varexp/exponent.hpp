#pragma once

#include <string>
#include <variant>
#include <vector>

#include "varexp/mesh.hpp"

namespace varexp {

struct ConstantExponent {
  double value;
};
struct AffineExponent {
  double c0;
  double cx;
  double cy = 0.0;
};
struct SinusoidalExponent {
  double c0;
  double amplitude;
  double omega;
};
struct GaussianBumpExponent {
  double c0;
  double amplitude;  // signed: c0 + amplitude * exp(-|x-x0|^2/sigma2)
  double x0;
  double y0 = 0.0;
  double sigma2;
};
struct TabulatedExponent {
  std::vector<double> values;  // one per node, mesh node order
};

using ExponentSpec =
    std::variant<ConstantExponent, AffineExponent, SinusoidalExponent,
                 GaussianBumpExponent, TabulatedExponent>;

/// Variable exponent p(x) sampled at mesh nodes. Construction requires
/// p > 1 everywhere; caches p_minus, p_plus, the discrete log-Holder
/// constant and the cell-center averages used by quadrature.
class ExponentField {
public:
  ExponentField(Mesh mesh, std::vector<double> nodal_values);

  const Mesh& mesh() const { return mesh_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](int node) const { return values_[node]; }

  double p_minus() const { return p_minus_; }
  double p_plus() const { return p_plus_; }
  double logholder_L() const { return logholder_; }

  /// Cell-center exponents (arithmetic average of the cell's nodes).
  const std::vector<double>& cell_values() const { return cell_values_; }

private:
  Mesh mesh_;
  std::vector<double> values_;
  std::vector<double> cell_values_;
  double p_minus_ = 0, p_plus_ = 0, logholder_ = 0;
};

ExponentField build_field(const Mesh& mesh, const ExponentSpec& spec);

struct AdmissibilityReport {
  double p_minus = 0;
  double p_plus = 0;
  double logholder_L = 0;
  int dimension = 1;
  bool p_minus_ok = false;  // p_minus > 1
  bool p_plus_ok = false;   // p_plus < N when N >= 2; waived in 1D
  bool pass = false;
};

AdmissibilityReport validate_admissible(const ExponentField& p);

/// max over nodes of |p_i - q_i|; requires the same mesh.
double uniform_distance(const ExponentField& p, const ExponentField& q);

struct AdditiveRule {
  double delta;  // p_h = p + delta/h
};
struct BlendRule {
  std::vector<double> q_values;  // p_h = p + (q - p)/h, q >= p nodewise
};
using SequenceRule = std::variant<AdditiveRule, BlendRule>;

/// A sequence p_h converging to p uniformly from above, evaluated at the
/// listed h. Construction verifies p_h >= p at every node, monotone
/// non-increasing sup-distance, and the subcritical class bound
/// p_S < N*p_I/(N - p_I) in dimension >= 2 (waived in 1D).
class ExponentSequence {
public:
  ExponentSequence(ExponentField base, SequenceRule rule,
                   std::vector<int> h_list);

  const ExponentField& base() const { return base_; }
  const std::vector<int>& h_list() const { return h_list_; }
  ExponentField field_at(int h) const;

  double p_I() const { return p_I_; }
  double p_S() const { return p_S_; }
  double p_I_star() const { return p_I_star_; }

private:
  ExponentField base_;
  SequenceRule rule_;
  std::vector<int> h_list_;
  double p_I_ = 0, p_S_ = 0, p_I_star_ = 0;
};

ExponentSequence build_sequence(const ExponentField& p, const SequenceRule& rule,
                                std::vector<int> h_list);

/// Reads a tabulated field: CSV rows (node_index, value) in node order.
TabulatedExponent read_tabulated(const std::string& path, int node_count);

}  // namespace varexp

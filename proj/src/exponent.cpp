#include "varexp/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace varexp {

namespace {

std::vector<double> cell_averages_of(const Mesh& mesh,
                                     const std::vector<double>& nodal) {
  std::vector<double> avg(mesh.cell_count());
  for (int c = 0; c < mesh.cell_count(); ++c) {
    const auto n = mesh.cell_nodes(c);
    if (mesh.dimension() == 1) {
      avg[c] = 0.5 * (nodal[n[0]] + nodal[n[1]]);
    } else {
      avg[c] = 0.25 * (nodal[n[0]] + nodal[n[1]] + nodal[n[2]] + nodal[n[3]]);
    }
  }
  return avg;
}

// Smallest L with |p(x)-p(y)| <= L / (-log|x-y|) over node pairs with
// 0 < |x-y| <= 1/2. Brute force; meshes are desk-scale.
double discrete_logholder(const Mesh& mesh, const std::vector<double>& p) {
  const int n = mesh.node_count();
  std::vector<std::array<double, 2>> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = mesh.node(i);
  double L = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double dx = xs[i][0] - xs[j][0];
      const double dy = xs[i][1] - xs[j][1];
      const double d2 = dx * dx + dy * dy;
      if (d2 <= 0.0 || d2 > 0.25) continue;
      const double dp = std::abs(p[i] - p[j]);
      if (dp == 0.0) continue;
      const double cand = dp * (-0.5 * std::log(d2));
      if (cand > L) L = cand;
    }
  }
  return L;
}

}  // namespace

ExponentField::ExponentField(Mesh mesh, std::vector<double> nodal_values)
    : mesh_(std::move(mesh)), values_(std::move(nodal_values)) {
  if (static_cast<int>(values_.size()) != mesh_.node_count()) {
    throw std::invalid_argument("ExponentField: nodal value count does not match mesh");
  }
  for (int i = 0; i < mesh_.node_count(); ++i) {
    if (!std::isfinite(values_[i]) || values_[i] <= 1.0) {
      throw std::invalid_argument("exponent admissibility violated (p <= 1) at node " +
                                  std::to_string(i));
    }
  }
  p_minus_ = *std::min_element(values_.begin(), values_.end());
  p_plus_ = *std::max_element(values_.begin(), values_.end());
  logholder_ = discrete_logholder(mesh_, values_);
  cell_values_ = cell_averages_of(mesh_, values_);
}

ExponentField build_field(const Mesh& mesh, const ExponentSpec& spec) {
  std::vector<double> vals(mesh.node_count());
  for (int i = 0; i < mesh.node_count(); ++i) {
    const auto x = mesh.node(i);
    double v = 0;
    if (const auto* c = std::get_if<ConstantExponent>(&spec)) {
      v = c->value;
    } else if (const auto* a = std::get_if<AffineExponent>(&spec)) {
      v = a->c0 + a->cx * x[0] + a->cy * x[1];
    } else if (const auto* s = std::get_if<SinusoidalExponent>(&spec)) {
      v = s->c0 + s->amplitude * std::sin(s->omega * x[0]);
    } else if (const auto* g = std::get_if<GaussianBumpExponent>(&spec)) {
      const double dx = x[0] - g->x0;
      const double dy = x[1] - g->y0;
      v = g->c0 + g->amplitude * std::exp(-(dx * dx + dy * dy) / g->sigma2);
    } else if (const auto* t = std::get_if<TabulatedExponent>(&spec)) {
      if (static_cast<int>(t->values.size()) != mesh.node_count()) {
        throw std::invalid_argument("tabulated exponent: value count does not match mesh");
      }
      v = t->values[i];
    }
    vals[i] = v;
  }
  return ExponentField(mesh, std::move(vals));
}

AdmissibilityReport validate_admissible(const ExponentField& p) {
  AdmissibilityReport r;
  r.p_minus = p.p_minus();
  r.p_plus = p.p_plus();
  r.logholder_L = p.logholder_L();
  r.dimension = p.mesh().dimension();
  r.p_minus_ok = r.p_minus > 1.0;
  r.p_plus_ok = r.dimension < 2 || r.p_plus < static_cast<double>(r.dimension);
  r.pass = r.p_minus_ok && r.p_plus_ok;
  return r;
}

double uniform_distance(const ExponentField& p, const ExponentField& q) {
  require_same_mesh(p.mesh(), q.mesh(), "uniform_distance");
  double d = 0.0;
  for (size_t i = 0; i < p.values().size(); ++i) {
    d = std::max(d, std::abs(p.values()[i] - q.values()[i]));
  }
  return d;
}

ExponentSequence::ExponentSequence(ExponentField base, SequenceRule rule,
                                   std::vector<int> h_list)
    : base_(std::move(base)), rule_(std::move(rule)), h_list_(std::move(h_list)) {
  if (h_list_.empty()) {
    throw std::invalid_argument("ExponentSequence: empty h list");
  }
  for (size_t i = 0; i < h_list_.size(); ++i) {
    if (h_list_[i] < 1) throw std::invalid_argument("ExponentSequence: h must be >= 1");
    if (i > 0 && h_list_[i] <= h_list_[i - 1]) {
      throw std::invalid_argument("ExponentSequence: h list must be strictly increasing");
    }
  }
  if (const auto* a = std::get_if<AdditiveRule>(&rule_)) {
    if (a->delta < 0) {
      throw std::invalid_argument("additive rule: delta < 0 violates convergence from above");
    }
  } else if (const auto* b = std::get_if<BlendRule>(&rule_)) {
    if (static_cast<int>(b->q_values.size()) != base_.mesh().node_count()) {
      throw std::invalid_argument("blend rule: q value count does not match mesh");
    }
    for (size_t i = 0; i < b->q_values.size(); ++i) {
      if (b->q_values[i] < base_.values()[i]) {
        throw std::invalid_argument("blend rule: q < p at node " + std::to_string(i) +
                                    " violates convergence from above");
      }
    }
  }

  // p_h -> p, so the infimum over the full family is the base infimum;
  // the supremum is attained at the smallest listed h.
  p_I_ = base_.p_minus();
  const ExponentField first = field_at(h_list_.front());
  p_S_ = first.p_plus();
  const int N = base_.mesh().dimension();
  if (N >= 2) {
    p_I_star_ = N * p_I_ / (N - p_I_);
    if (!(p_S_ < p_I_star_)) {
      std::ostringstream msg;
      msg << "exponent sequence violates the subcritical class bound: p_S = " << p_S_
          << " >= p_I* = " << p_I_star_;
      throw std::invalid_argument(msg.str());
    }
  } else {
    p_I_star_ = std::numeric_limits<double>::infinity();
  }

  // sup-distance must be monotone non-increasing along the list
  double prev = std::numeric_limits<double>::infinity();
  for (int h : h_list_) {
    const double d = uniform_distance(field_at(h), base_);
    if (d > prev) {
      throw std::invalid_argument("ExponentSequence: sup-distance not monotone along h list");
    }
    prev = d;
  }
}

ExponentField ExponentSequence::field_at(int h) const {
  if (h < 1) throw std::invalid_argument("field_at: h must be >= 1");
  std::vector<double> vals(base_.values());
  if (const auto* a = std::get_if<AdditiveRule>(&rule_)) {
    for (double& v : vals) v += a->delta / h;
  } else {
    const auto& b = std::get<BlendRule>(rule_);
    for (size_t i = 0; i < vals.size(); ++i) {
      vals[i] += (b.q_values[i] - vals[i]) / h;
    }
  }
  return ExponentField(base_.mesh(), std::move(vals));
}

ExponentSequence build_sequence(const ExponentField& p, const SequenceRule& rule,
                                std::vector<int> h_list) {
  return ExponentSequence(p, rule, std::move(h_list));
}

TabulatedExponent read_tabulated(const std::string& path, int node_count) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open tabulated file: " + path);
  TabulatedExponent t;
  t.values.assign(node_count, 0.0);
  std::vector<bool> seen(node_count, false);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string idx_s, val_s;
    if (!std::getline(ls, idx_s, ',') || !std::getline(ls, val_s)) {
      throw std::invalid_argument("tabulated file: malformed row '" + line + "'");
    }
    if (idx_s == "node_index") continue;  // header
    const int idx = std::stoi(idx_s);
    if (idx < 0 || idx >= node_count) {
      throw std::invalid_argument("tabulated file: node index out of range: " + idx_s);
    }
    t.values[idx] = std::stod(val_s);
    seen[idx] = true;
  }
  for (int i = 0; i < node_count; ++i) {
    if (!seen[i]) {
      throw std::invalid_argument("tabulated file: missing value for node " +
                                  std::to_string(i));
    }
  }
  return t;
}

}  // namespace varexp

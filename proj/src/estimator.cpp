// Copyright 2026 The QAE Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qae/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qae/bias.hpp"
#include "qae/errors.hpp"
#include "qae/metrology.hpp"

namespace qae {

std::size_t outcome_count(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::kComputational:
      return 2;
    case OutcomeKind::kOptimal:
      return 3;
    case OutcomeKind::kPhase:
      return 4;
  }
  return 0;
}

double CountRecord::shots() const {
  double s = 0.0;
  for (double c : counts) s += c;
  return s;
}

void CountRecord::validate() const {
  if (counts.size() != outcome_count(kind)) {
    throw DomainError("CountRecord: wrong number of outcome classes");
  }
  for (double c : counts) {
    if (!(c >= 0.0)) throw DomainError("CountRecord: negative tally");
  }
  if (m < 0) throw DomainError("CountRecord: negative Grover power");
}

CountRecord make_record(int m, OutcomeKind kind, std::span<const std::uint64_t> counts) {
  CountRecord r;
  r.m = m;
  r.kind = kind;
  r.counts.assign(counts.begin(), counts.end());
  r.validate();
  return r;
}

namespace {

inline double safe_log(double p) { return std::log(std::max(p, kProbabilityFloor)); }

// h * log(Pr), with the 0 * log(0) = 0 convention.
inline double term(double h, double p) { return h == 0.0 ? 0.0 : h * safe_log(p); }

}  // namespace

double loglik_comp(double theta, double p, std::span<const CountRecord> records) {
  double ll = 0.0;
  for (const auto& r : records) {
    const double q = std::pow(p, r.m);
    const double x = grover_nq(r.m) * theta;
    const double c = std::cos(x);
    const double s = std::sin(x);
    const double mixed = 0.5 * (1.0 - q);
    ll += term(r.counts[0], q * c * c + mixed) + term(r.counts[1], q * s * s + mixed);
  }
  return ll;
}

double loglik_opt(double theta, double p, std::span<const CountRecord> records,
                  double theta_hat1, int n) {
  const double d = std::ldexp(1.0, n + 1);
  double ll = 0.0;
  for (const auto& r : records) {
    const double q = std::pow(p, r.m);
    const double sn = std::sin(2.0 * grover_nq(r.m) * (theta - theta_hat1));
    const double mixed = (1.0 - q) / d;
    ll += term(r.counts[0], q * (1.0 + sn) / 2.0 + mixed) +
          term(r.counts[1], q * (1.0 - sn) / 2.0 + mixed) + term(r.counts[2], mixed * (d - 2.0));
  }
  return ll;
}

double loglik_4param(double theta, double p, double pc0, double pc1,
                     std::span<const CountRecord> records, double theta_hat1, int n) {
  double ll = 0.0;
  for (const auto& r : records) {
    const auto pr = biased_outcome_probs(NoisyStateModel{theta, p, r.m, n}, theta_hat1, pc0, pc1,
                                         0.0);
    ll += term(r.counts[0], pr[0]) + term(r.counts[1], pr[1]) + term(r.counts[2], pr[2]);
  }
  return ll;
}

void ParamGrid::validate() const {
  if (axes.empty()) throw DomainError("ParamGrid: no axes");
  if (refinement_levels < 0) throw DomainError("ParamGrid: negative refinement_levels");
  for (const auto& a : axes) {
    if (!(a.lower < a.upper)) {
      throw DomainError("ParamGrid: axis '" + a.name + "' needs lower < upper");
    }
    if (a.points < 3 || a.refine_points < 3) {
      throw DomainError("ParamGrid: axis '" + a.name + "' needs at least 3 points");
    }
  }
}

GridAxis theta_axis(int max_nq) {
  const int points = std::max(201, 16 * max_nq + 1);
  return GridAxis{"theta", 0.0, std::numbers::pi / 2.0, points, 201};
}

GridAxis p_axis(double lower, double upper) { return GridAxis{"p", lower, upper, 51, 51}; }

GridAxis pc_axis(const std::string& name, double lower, double upper) {
  return GridAxis{name, lower, upper, 51, 51};
}

namespace {

std::vector<double> linspace(double lo, double hi, int points) {
  if (points <= 1) return {0.5 * (lo + hi)};
  std::vector<double> v(points);
  const double step = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) v[i] = lo + step * i;
  v.back() = hi;
  return v;
}

struct LevelResult {
  std::vector<double> best;
  double value = -std::numeric_limits<double>::infinity();
  std::vector<double> values;  // flattened, axis 0 most significant
  std::vector<std::size_t> best_index;
};

// Evaluates the full tensor grid in lexicographic order. Strict improvement
// keeps the first (smallest) tuple among ties.
LevelResult evaluate_level(const LogLikelihood& loglik,
                           const std::vector<std::vector<double>>& axes, bool keep_values,
                           std::size_t& evaluations) {
  const std::size_t dims = axes.size();
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.size();

  LevelResult out;
  if (keep_values) out.values.resize(total);
  std::vector<std::size_t> idx(dims, 0);
  std::vector<double> point(dims);
  for (std::size_t k = 0; k < dims; ++k) point[k] = axes[k][0];

  for (std::size_t flat = 0; flat < total; ++flat) {
    double v = loglik(point);
    ++evaluations;
    if (!std::isfinite(v)) v = -std::numeric_limits<double>::infinity();
    if (keep_values) out.values[flat] = v;
    if (v > out.value) {
      out.value = v;
      out.best = point;
      out.best_index = idx;
    }
    for (std::size_t k = dims; k-- > 0;) {
      if (++idx[k] < axes[k].size()) {
        point[k] = axes[k][idx[k]];
        break;
      }
      idx[k] = 0;
      point[k] = axes[k][0];
    }
  }
  return out;
}

}  // namespace

SearchResult mle_search(const LogLikelihood& loglik, const ParamGrid& grid) {
  grid.validate();
  const std::size_t dims = grid.axes.size();
  SearchResult res;
  res.flat_axes.assign(dims, false);

  std::vector<std::vector<double>> axes(dims);
  for (std::size_t k = 0; k < dims; ++k) {
    axes[k] = linspace(grid.axes[k].lower, grid.axes[k].upper, grid.axes[k].points);
  }
  LevelResult coarse = evaluate_level(loglik, axes, true, res.evaluations);
  if (!std::isfinite(coarse.value)) {
    throw EstimationFailed("mle_search: log-likelihood is non-finite on the whole grid");
  }

  // Flatness: spread along each axis through the coarse argmax.
  std::vector<std::size_t> strides(dims, 1);
  for (std::size_t k = dims - 1; k-- > 0;) strides[k] = strides[k + 1] * axes[k + 1].size();
  std::size_t base = 0;
  for (std::size_t k = 0; k < dims; ++k) base += coarse.best_index[k] * strides[k];
  for (std::size_t k = 0; k < dims; ++k) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    const std::size_t start = base - coarse.best_index[k] * strides[k];
    for (std::size_t i = 0; i < axes[k].size(); ++i) {
      const double v = coarse.values[start + i * strides[k]];
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    res.flat_axes[k] = (hi - lo) < 1e-9;
  }

  std::vector<double> best = coarse.best;
  double best_value = coarse.value;
  res.level_best.push_back(best_value);

  std::vector<double> cell(dims);
  for (std::size_t k = 0; k < dims; ++k) {
    cell[k] = (grid.axes[k].upper - grid.axes[k].lower) / (grid.axes[k].points - 1);
  }

  for (int level = 0; level < grid.refinement_levels; ++level) {
    for (std::size_t k = 0; k < dims; ++k) {
      const auto& a = grid.axes[k];
      if (res.flat_axes[k]) {
        axes[k] = {best[k]};
        continue;
      }
      const double lo = std::max(a.lower, best[k] - 2.0 * cell[k]);
      const double hi = std::min(a.upper, best[k] + 2.0 * cell[k]);
      axes[k] = linspace(lo, hi, a.refine_points);
      cell[k] = (hi - lo) / (a.refine_points - 1);
    }
    LevelResult lr = evaluate_level(loglik, axes, false, res.evaluations);
    const bool better = lr.value > best_value ||
                        (lr.value == best_value &&
                         std::lexicographical_compare(lr.best.begin(), lr.best.end(),
                                                      best.begin(), best.end()));
    if (better) {
      best = lr.best;
      best_value = lr.value;
    }
    res.level_best.push_back(best_value);
  }

  res.argmax = best;
  res.log_likelihood = best_value;
  res.finest_cell = cell;
  return res;
}

namespace {

void validate_records(std::span<const CountRecord> records, OutcomeKind kind) {
  if (records.empty()) throw DomainError("estimator: no count records");
  for (const auto& r : records) {
    r.validate();
    if (r.kind != kind) throw DomainError("estimator: record outcome kind mismatch");
  }
}

}  // namespace

EstimationResult estimate_comp(std::span<const CountRecord> records, const ParamGrid& grid) {
  validate_records(records, OutcomeKind::kComputational);
  if (grid.axes.size() != 2) throw DomainError("estimate_comp: grid needs (theta, p) axes");
  auto ll = [records](std::span<const double> x) { return loglik_comp(x[0], x[1], records); };
  EstimationResult r;
  r.grid_meta = mle_search(ll, grid);
  r.theta_hat = r.grid_meta.argmax[0];
  r.p_hat = r.grid_meta.argmax[1];
  r.log_likelihood = r.grid_meta.log_likelihood;
  r.p_unidentifiable = r.grid_meta.flat_axes[1];
  return r;
}

EstimationResult estimate_comp_fixed_p(std::span<const CountRecord> records, double p,
                                       const GridAxis& theta) {
  validate_records(records, OutcomeKind::kComputational);
  ParamGrid grid{{theta}, 3};
  auto ll = [records, p](std::span<const double> x) { return loglik_comp(x[0], p, records); };
  EstimationResult r;
  r.grid_meta = mle_search(ll, grid);
  r.theta_hat = r.grid_meta.argmax[0];
  r.p_hat = p;
  r.log_likelihood = r.grid_meta.log_likelihood;
  return r;
}

EstimationResult estimate_opt(std::span<const CountRecord> records, double theta_hat1, int n,
                              const ParamGrid& grid) {
  validate_records(records, OutcomeKind::kOptimal);
  if (grid.axes.size() != 2) throw DomainError("estimate_opt: grid needs (theta, p) axes");
  auto ll = [records, theta_hat1, n](std::span<const double> x) {
    return loglik_opt(x[0], x[1], records, theta_hat1, n);
  };
  EstimationResult r;
  r.grid_meta = mle_search(ll, grid);
  r.theta_hat = r.grid_meta.argmax[0];
  r.p_hat = r.grid_meta.argmax[1];
  r.log_likelihood = r.grid_meta.log_likelihood;
  r.p_unidentifiable = r.grid_meta.flat_axes[1];
  return r;
}

EstimationResult estimate_4param(std::span<const CountRecord> records, double theta_hat1, int n,
                                 const ParamGrid& grid) {
  validate_records(records, OutcomeKind::kOptimal);
  if (grid.axes.size() != 4) {
    throw DomainError("estimate_4param: grid needs (theta, p, pc0, pc1) axes");
  }
  auto ll = [records, theta_hat1, n](std::span<const double> x) {
    return loglik_4param(x[0], x[1], x[2], x[3], records, theta_hat1, n);
  };
  EstimationResult r;
  r.grid_meta = mle_search(ll, grid);
  r.theta_hat = r.grid_meta.argmax[0];
  r.p_hat = r.grid_meta.argmax[1];
  r.pc0_hat = r.grid_meta.argmax[2];
  r.pc1_hat = r.grid_meta.argmax[3];
  r.log_likelihood = r.grid_meta.log_likelihood;
  r.p_unidentifiable = r.grid_meta.flat_axes[1];
  return r;
}

ParamGrid default_2param_grid(const GroverSchedule& schedule) {
  return ParamGrid{{theta_axis(schedule.max_nq()), p_axis()}, 3};
}

ParamGrid default_4param_grid(const GroverSchedule& schedule) {
  GridAxis theta = theta_axis(schedule.max_nq());
  theta.refine_points = 21;
  GridAxis p = p_axis();
  p.points = 11;
  p.refine_points = 21;
  GridAxis pc0 = pc_axis("pc0");
  pc0.points = 11;
  pc0.refine_points = 21;
  GridAxis pc1 = pc_axis("pc1");
  pc1.points = 11;
  pc1.refine_points = 21;
  return ParamGrid{{theta, p, pc0, pc1}, 6};
}

}  // namespace qae

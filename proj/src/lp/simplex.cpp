#include "simplex.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace gridshare::lp::detail {
namespace {

constexpr double kPrimalTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kSingularTol = 1e-11;
constexpr double kPhaseOneTol = 1e-7;
constexpr std::size_t kReinvertEvery = 100;
constexpr std::size_t kStallBeforeBland = 50;

enum class VarState : unsigned char { Basic, AtLower, AtUpper, FreeZero };

struct Entry {
  std::size_t row;
  double value;
};

enum class PhaseOutcome { Optimal, Unbounded, TimeLimit };
enum class DualOutcome { Optimal, Infeasible, TimeLimit, GiveUp };

/// Bounded-variable revised simplex with a dense, column-major basis
/// inverse. Every row gets a slack column so the all-slack basis is the
/// identity; rows whose slack cannot absorb the starting residual get an
/// artificial column for phase one.
class BoundedSimplex {
public:
  BoundedSimplex(const LinearProblem& problem, const std::vector<Bounds>& bounds,
                 Clock::time_point deadline, Pricing pricing)
      : problem_(problem), m_(problem.constraint_count()), n_(problem.variable_count()),
        deadline_(deadline), force_bland_(pricing == Pricing::Bland) {
    build_columns(bounds);
  }

  RelaxationResult run(const WarmBasis* warm) {
    if (warm && !force_bland_ && warm_start(*warm)) {
      const auto outcome = run_dual();
      if (outcome == DualOutcome::TimeLimit) {
        RelaxationResult result;
        result.iterations = iterations_;
        result.status = Status::TimeLimit;
        return result;
      }
      if (outcome == DualOutcome::Infeasible) {
        RelaxationResult result;
        result.iterations = iterations_;
        result.status = Status::Infeasible;
        return result;
      }
      if (outcome == DualOutcome::Optimal) return finish();
      const std::size_t spent = iterations_;
      cold_start();
      iterations_ = spent;
    } else {
      cold_start();
    }

    RelaxationResult result;
    if (artificial_count_ > 0) {
      set_phase_costs(true);
      const auto outcome = iterate();
      result.iterations = iterations_;
      if (outcome == PhaseOutcome::TimeLimit) {
        result.status = Status::TimeLimit;
        return result;
      }
      double infeasibility = 0.0;
      for (std::size_t a = first_artificial(); a < column_count(); ++a) infeasibility += x_[a];
      if (infeasibility > kPhaseOneTol * rhs_scale_) {
        result.status = Status::Infeasible;
        result.infeasible_row = first_violated_row();
        return result;
      }
      for (std::size_t a = first_artificial(); a < column_count(); ++a) {
        upper_[a] = 0.0;
        if (state_[a] != VarState::Basic) {
          state_[a] = VarState::AtLower;
          x_[a] = 0.0;
        }
      }
    }
    return finish();
  }

private:
  RelaxationResult finish() {
    RelaxationResult result;
    set_phase_costs(false);
    const auto outcome = iterate();
    result.iterations = iterations_;
    if (outcome == PhaseOutcome::TimeLimit) {
      result.status = Status::TimeLimit;
      return result;
    }
    if (outcome == PhaseOutcome::Unbounded) {
      result.status = Status::Unbounded;
      return result;
    }
    result.status = Status::Optimal;
    result.values.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
    for (std::size_t j = 0; j < n_; ++j) {
      result.values[j] = std::clamp(result.values[j], lower_[j], upper_[j]);
    }
    result.objective = problem_.evaluate_objective(result.values);
    result.basis.state.resize(n_ + m_);
    for (std::size_t j = 0; j < n_ + m_; ++j)
      result.basis.state[j] = static_cast<unsigned char>(state_[j]);
    return result;
  }

  std::size_t column_count() const { return cols_.size(); }
  std::size_t first_artificial() const { return n_ + m_; }
  double& binv(std::size_t row, std::size_t col) { return binv_[col * m_ + row]; }

  void build_columns(const std::vector<Bounds>& bounds) {
    const auto& rows = problem_.constraints();
    cols_.assign(n_ + m_, {});
    for (std::size_t r = 0; r < m_; ++r) {
      for (const auto& term : rows[r].terms) {
        auto& col = cols_[term.index];
        if (!col.empty() && col.back().row == r)
          col.back().value += term.coefficient;
        else
          col.push_back({r, term.coefficient});
      }
    }
    for (auto& col : cols_)
      std::erase_if(col, [](const Entry& e) { return e.value == 0.0; });

    lower_.resize(n_ + m_);
    upper_.resize(n_ + m_);
    true_cost_.assign(n_ + m_, 0.0);
    const double sign = problem_.sense() == Sense::Maximize ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n_; ++j) {
      lower_[j] = bounds[j].lower;
      upper_[j] = bounds[j].upper;
      true_cost_[j] = sign * problem_.objective()[j];
    }
    rhs_.resize(m_);
    rhs_scale_ = 1.0;
    for (std::size_t r = 0; r < m_; ++r) {
      cols_[n_ + r].push_back({r, 1.0});
      rhs_[r] = rows[r].rhs;
      rhs_scale_ = std::max(rhs_scale_, std::abs(rhs_[r]));
      switch (rows[r].relation) {
      case Relation::LessEqual: lower_[n_ + r] = 0.0; upper_[n_ + r] = kInfinity; break;
      case Relation::GreaterEqual: lower_[n_ + r] = -kInfinity; upper_[n_ + r] = 0.0; break;
      case Relation::Equal: lower_[n_ + r] = 0.0; upper_[n_ + r] = 0.0; break;
      }
    }
  }

  void cold_start() {
    cols_.resize(n_ + m_);
    lower_.resize(n_ + m_);
    upper_.resize(n_ + m_);
    true_cost_.resize(n_ + m_);
    artificial_count_ = 0;
    since_reinvert_ = 0;
    x_.assign(n_ + m_, 0.0);
    state_.assign(n_ + m_, VarState::AtLower);
    for (std::size_t j = 0; j < n_; ++j) place_at_bound(j);

    std::vector<double> residual = rhs_;
    for (std::size_t j = 0; j < n_; ++j) {
      if (x_[j] == 0.0) continue;
      for (const auto& e : cols_[j]) residual[e.row] -= e.value * x_[j];
    }

    basis_.assign(m_, 0);
    std::vector<double> diag(m_, 1.0);
    for (std::size_t r = 0; r < m_; ++r) {
      const std::size_t slack = n_ + r;
      const double clamped = std::clamp(residual[r], lower_[slack], upper_[slack]);
      if (std::abs(residual[r] - clamped) <= kPrimalTol) {
        basis_[r] = slack;
        state_[slack] = VarState::Basic;
        x_[slack] = residual[r];
        continue;
      }
      x_[slack] = clamped;
      state_[slack] = clamped == upper_[slack] && clamped != lower_[slack] ? VarState::AtUpper
                                                                           : VarState::AtLower;
      const double gap = residual[r] - clamped;
      const double sigma = gap > 0.0 ? 1.0 : -1.0;
      cols_.push_back({{r, sigma}});
      lower_.push_back(0.0);
      upper_.push_back(kInfinity);
      true_cost_.push_back(0.0);
      x_.push_back(std::abs(gap));
      state_.push_back(VarState::Basic);
      basis_[r] = cols_.size() - 1;
      diag[r] = sigma;
      ++artificial_count_;
    }

    basic_row_.assign(column_count(), -1);
    for (std::size_t r = 0; r < m_; ++r) basic_row_[basis_[r]] = static_cast<std::ptrdiff_t>(r);
    binv_.assign(m_ * m_, 0.0);
    for (std::size_t r = 0; r < m_; ++r) binv(r, r) = 1.0 / diag[r];
    cost_.assign(column_count(), 0.0);
    y_.assign(m_, 0.0);
  }

  void place_at_bound(std::size_t j) {
    if (std::isfinite(lower_[j])) {
      state_[j] = VarState::AtLower;
      x_[j] = lower_[j];
    } else if (std::isfinite(upper_[j])) {
      state_[j] = VarState::AtUpper;
      x_[j] = upper_[j];
    } else {
      state_[j] = VarState::FreeZero;
      x_[j] = 0.0;
    }
  }

  void set_phase_costs(bool phase_one) {
    cost_.assign(column_count(), 0.0);
    if (phase_one) {
      for (std::size_t a = first_artificial(); a < column_count(); ++a) cost_[a] = 1.0;
    } else {
      std::copy(true_cost_.begin(), true_cost_.end(), cost_.begin());
    }
    double scale = 1.0;
    for (double c : cost_) scale = std::max(scale, std::abs(c));
    dual_tol_ = 1e-9 * scale;
    recompute_duals();
  }

  void recompute_duals() {
    for (std::size_t c = 0; c < m_; ++c) {
      const double* column = &binv_[c * m_];
      double sum = 0.0;
      for (std::size_t i = 0; i < m_; ++i) sum += cost_[basis_[i]] * column[i];
      y_[c] = sum;
    }
  }

  void recompute_primal() {
    std::vector<double> residual = rhs_;
    for (std::size_t j = 0; j < column_count(); ++j) {
      if (state_[j] == VarState::Basic || x_[j] == 0.0) continue;
      for (const auto& e : cols_[j]) residual[e.row] -= e.value * x_[j];
    }
    std::vector<double> xb(m_, 0.0);
    for (std::size_t c = 0; c < m_; ++c) {
      const double rc = residual[c];
      if (rc == 0.0) continue;
      const double* column = &binv_[c * m_];
      for (std::size_t i = 0; i < m_; ++i) xb[i] += column[i] * rc;
    }
    for (std::size_t i = 0; i < m_; ++i) x_[basis_[i]] = xb[i];
  }

  void compute_column(std::size_t q, std::vector<double>& alpha) const {
    alpha.assign(m_, 0.0);
    for (const auto& e : cols_[q]) {
      const double* column = &binv_[e.row * m_];
      for (std::size_t i = 0; i < m_; ++i) alpha[i] += e.value * column[i];
    }
  }

  void pivot_inverse(std::size_t r, const std::vector<double>& alpha) {
    nonzero_.clear();
    for (std::size_t i = 0; i < m_; ++i)
      if (i != r && alpha[i] != 0.0) nonzero_.push_back(i);
    const double pivot = alpha[r];
    for (std::size_t c = 0; c < m_; ++c) {
      double* column = &binv_[c * m_];
      double v = column[r];
      if (v == 0.0) continue;
      v /= pivot;
      column[r] = v;
      for (std::size_t i : nonzero_) column[i] -= alpha[i] * v;
    }
  }

  /// Rebuilds the inverse of the current basis from scratch. Columns that
  /// turn out to be numerically dependent, and rows left without a basic
  /// column (basis_ may list fewer than m), get their row slack.
  void reinvert() {
    std::fill(binv_.begin(), binv_.end(), 0.0);
    for (std::size_t r = 0; r < m_; ++r) binv(r, r) = 1.0;
    std::vector<std::ptrdiff_t> owner(m_, -1);
    std::vector<std::size_t> pending;
    for (const std::size_t j : basis_) {
      const bool unit = j >= n_ && cols_[j].size() == 1;
      if (unit && owner[cols_[j][0].row] < 0) {
        const std::size_t row = cols_[j][0].row;
        binv(row, row) = 1.0 / cols_[j][0].value;
        owner[row] = static_cast<std::ptrdiff_t>(j);
      } else {
        pending.push_back(j);
      }
    }
    std::vector<double> alpha;
    for (std::size_t j : pending) {
      compute_column(j, alpha);
      std::ptrdiff_t best = -1;
      double best_abs = kSingularTol;
      for (std::size_t i = 0; i < m_; ++i) {
        if (owner[i] >= 0) continue;
        if (std::abs(alpha[i]) > best_abs) {
          best_abs = std::abs(alpha[i]);
          best = static_cast<std::ptrdiff_t>(i);
        }
      }
      if (best < 0) {
        basic_row_[j] = -1;
        place_at_bound(j);
        continue;
      }
      pivot_inverse(static_cast<std::size_t>(best), alpha);
      owner[static_cast<std::size_t>(best)] = static_cast<std::ptrdiff_t>(j);
    }
    basis_.resize(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      if (owner[r] < 0) {
        const std::size_t slack = n_ + r;
        owner[r] = static_cast<std::ptrdiff_t>(slack);
        state_[slack] = VarState::Basic;
      }
      basis_[r] = static_cast<std::size_t>(owner[r]);
    }
    std::fill(basic_row_.begin(), basic_row_.end(), -1);
    for (std::size_t r = 0; r < m_; ++r) basic_row_[basis_[r]] = static_cast<std::ptrdiff_t>(r);
    since_reinvert_ = 0;
  }

  void refresh() {
    reinvert();
    recompute_primal();
    recompute_duals();
  }

  double reduced_cost(std::size_t j) const {
    double d = cost_[j];
    for (const auto& e : cols_[j]) d -= y_[e.row] * e.value;
    return d;
  }

  PhaseOutcome iterate() {
    std::vector<double> alpha;
    std::size_t stall = 0;
    bool fresh = false;
    for (;;) {
      if ((iterations_ & 31u) == 0 && Clock::now() > deadline_) return PhaseOutcome::TimeLimit;
      if (since_reinvert_ >= kReinvertEvery) refresh();
      const bool bland = force_bland_ || stall >= kStallBeforeBland;

      std::ptrdiff_t entering = -1;
      double entering_d = 0.0;
      double best_score = 0.0;
      for (std::size_t j = 0; j < column_count(); ++j) {
        const VarState s = state_[j];
        if (s == VarState::Basic || lower_[j] == upper_[j]) continue;
        const double d = reduced_cost(j);
        bool eligible = false;
        switch (s) {
        case VarState::AtLower: eligible = d < -dual_tol_; break;
        case VarState::AtUpper: eligible = d > dual_tol_; break;
        case VarState::FreeZero: eligible = std::abs(d) > dual_tol_; break;
        case VarState::Basic: break;
        }
        if (!eligible) continue;
        if (bland) {
          entering = static_cast<std::ptrdiff_t>(j);
          entering_d = d;
          break;
        }
        if (std::abs(d) > best_score) {
          best_score = std::abs(d);
          entering = static_cast<std::ptrdiff_t>(j);
          entering_d = d;
        }
      }
      if (entering < 0) {
        if (fresh || since_reinvert_ == 0) return PhaseOutcome::Optimal;
        refresh();
        fresh = true;
        continue;
      }
      fresh = false;

      const auto q = static_cast<std::size_t>(entering);
      const double dir = entering_d < 0.0 ? 1.0 : -1.0;
      compute_column(q, alpha);

      const double flip = upper_[q] - lower_[q];
      std::ptrdiff_t leave = -1;
      double theta = kInfinity;
      if (!bland) {
        double theta_max = kInfinity;
        for (std::size_t i = 0; i < m_; ++i) {
          const double a = alpha[i];
          if (std::abs(a) < kPivotTol) continue;
          const double rate = -dir * a;
          const std::size_t j = basis_[i];
          if (rate < 0.0 && std::isfinite(lower_[j]))
            theta_max = std::min(theta_max, (x_[j] - lower_[j] + kPrimalTol) / -rate);
          else if (rate > 0.0 && std::isfinite(upper_[j]))
            theta_max = std::min(theta_max, (upper_[j] - x_[j] + kPrimalTol) / rate);
        }
        if (flip <= theta_max) {
          theta = flip;
        } else if (std::isfinite(theta_max)) {
          double best_alpha = 0.0;
          for (std::size_t i = 0; i < m_; ++i) {
            const double a = alpha[i];
            if (std::abs(a) < kPivotTol) continue;
            const double rate = -dir * a;
            const std::size_t j = basis_[i];
            double ratio = kInfinity;
            if (rate < 0.0 && std::isfinite(lower_[j]))
              ratio = (x_[j] - lower_[j]) / -rate;
            else if (rate > 0.0 && std::isfinite(upper_[j]))
              ratio = (upper_[j] - x_[j]) / rate;
            if (ratio <= theta_max && std::abs(a) > best_alpha) {
              best_alpha = std::abs(a);
              leave = static_cast<std::ptrdiff_t>(i);
              theta = std::max(ratio, 0.0);
            }
          }
        }
      } else {
        for (std::size_t i = 0; i < m_; ++i) {
          const double a = alpha[i];
          if (std::abs(a) < kPivotTol) continue;
          const double rate = -dir * a;
          const std::size_t j = basis_[i];
          double ratio = kInfinity;
          if (rate < 0.0 && std::isfinite(lower_[j]))
            ratio = std::max(0.0, (x_[j] - lower_[j]) / -rate);
          else if (rate > 0.0 && std::isfinite(upper_[j]))
            ratio = std::max(0.0, (upper_[j] - x_[j]) / rate);
          if (!std::isfinite(ratio)) continue;
          if (leave < 0 || ratio < theta - 1e-12 ||
              (ratio <= theta + 1e-12 && j < basis_[static_cast<std::size_t>(leave)])) {
            leave = static_cast<std::ptrdiff_t>(i);
            theta = ratio;
          }
        }
        if (flip <= theta) {
          leave = -1;
          theta = flip;
        }
      }

      if (!std::isfinite(theta)) {
        if (!fresh && since_reinvert_ > 0) {
          refresh();
          fresh = true;
          continue;
        }
        return PhaseOutcome::Unbounded;
      }

      ++iterations_;
      ++since_reinvert_;
      stall = theta <= 1e-12 ? stall + 1 : 0;

      if (theta > 0.0) {
        for (std::size_t i = 0; i < m_; ++i)
          if (alpha[i] != 0.0) x_[basis_[i]] -= dir * alpha[i] * theta;
      }
      x_[q] += dir * theta;

      if (leave < 0) {
        if (dir > 0.0) {
          state_[q] = VarState::AtUpper;
          x_[q] = upper_[q];
        } else {
          state_[q] = VarState::AtLower;
          x_[q] = lower_[q];
        }
        continue;
      }

      const auto r = static_cast<std::size_t>(leave);
      const std::size_t out = basis_[r];
      const double rate = -dir * alpha[r];
      if (rate < 0.0) {
        state_[out] = VarState::AtLower;
        x_[out] = lower_[out];
      } else {
        state_[out] = VarState::AtUpper;
        x_[out] = upper_[out];
      }
      basic_row_[out] = -1;

      const double step = entering_d / alpha[r];
      for (std::size_t c = 0; c < m_; ++c) y_[c] += step * binv_[c * m_ + r];
      pivot_inverse(r, alpha);

      basis_[r] = q;
      basic_row_[q] = static_cast<std::ptrdiff_t>(r);
      state_[q] = VarState::Basic;
    }
  }

  /// Installs a previous basis under the current bounds. Returns false if
  /// the basis does not fit or is not dual feasible for the true costs.
  bool warm_start(const WarmBasis& warm) {
    if (warm.state.size() != n_ + m_) return false;
    state_.assign(n_ + m_, VarState::AtLower);
    x_.assign(n_ + m_, 0.0);
    basis_.clear();
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      const auto s = static_cast<VarState>(warm.state[j]);
      state_[j] = s;
      if (s == VarState::Basic) {
        basis_.push_back(j);
      } else if (s == VarState::AtLower && std::isfinite(lower_[j])) {
        x_[j] = lower_[j];
      } else if (s == VarState::AtUpper && std::isfinite(upper_[j])) {
        x_[j] = upper_[j];
      } else {
        place_at_bound(j);
      }
    }
    if (basis_.size() > m_) return false;
    basic_row_.assign(n_ + m_, -1);
    binv_.assign(m_ * m_, 0.0);
    y_.assign(m_, 0.0);
    reinvert();
    recompute_primal();
    set_phase_costs(false);

    const double tol = 100.0 * dual_tol_;
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (state_[j] == VarState::Basic || lower_[j] == upper_[j]) continue;
      const double d = reduced_cost(j);
      if ((state_[j] == VarState::AtLower && d < -tol) ||
          (state_[j] == VarState::AtUpper && d > tol) ||
          (state_[j] == VarState::FreeZero && std::abs(d) > tol))
        return false;
    }
    return true;
  }

  /// Dual simplex on a dual-feasible basis until primal feasible.
  DualOutcome run_dual() {
    std::vector<double> alpha, rho(m_);
    std::size_t dual_iterations = 0;
    const std::size_t cap = 10 * (n_ + m_) + 1000;
    bool fresh = true;
    for (;;) {
      if ((iterations_ & 31u) == 0 && Clock::now() > deadline_) return DualOutcome::TimeLimit;
      if (since_reinvert_ >= kReinvertEvery) {
        refresh();
        fresh = true;
      }
      if (dual_iterations > cap) return DualOutcome::GiveUp;

      std::ptrdiff_t leave = -1;
      double worst = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const std::size_t j = basis_[i];
        double violation = 0.0;
        if (x_[j] < lower_[j]) violation = lower_[j] - x_[j];
        else if (x_[j] > upper_[j]) violation = x_[j] - upper_[j];
        const double scale = std::max(1.0, std::abs(x_[j]));
        if (violation > kPrimalTol * scale && violation > worst) {
          worst = violation;
          leave = static_cast<std::ptrdiff_t>(i);
        }
      }
      if (leave < 0) {
        if (fresh) return DualOutcome::Optimal;
        refresh();
        fresh = true;
        continue;
      }

      const auto r = static_cast<std::size_t>(leave);
      const std::size_t out = basis_[r];
      const bool raise = x_[out] < lower_[out];
      const double target = raise ? lower_[out] : upper_[out];
      const double s = raise ? 1.0 : -1.0;
      for (std::size_t c = 0; c < m_; ++c) rho[c] = binv_[c * m_ + r];

      // Harris two-pass ratio test on the reduced costs.
      candidates_.clear();
      double theta_max = kInfinity;
      for (std::size_t j = 0; j < column_count(); ++j) {
        const VarState st = state_[j];
        if (st == VarState::Basic || lower_[j] == upper_[j]) continue;
        double a = 0.0;
        for (const auto& e : cols_[j]) a += rho[e.row] * e.value;
        if (std::abs(a) < kPivotTol) continue;
        const double sa = s * a;
        bool eligible = false;
        switch (st) {
        case VarState::AtLower: eligible = sa < 0.0; break;
        case VarState::AtUpper: eligible = sa > 0.0; break;
        case VarState::FreeZero: eligible = true; break;
        case VarState::Basic: break;
        }
        if (!eligible) continue;
        const double d = reduced_cost(j);
        double slack_d = std::abs(d);
        if (st == VarState::AtLower) slack_d = std::max(0.0, d);
        else if (st == VarState::AtUpper) slack_d = std::max(0.0, -d);
        theta_max = std::min(theta_max, (slack_d + dual_tol_) / std::abs(a));
        candidates_.push_back({j, a, slack_d});
      }
      if (candidates_.empty()) {
        if (fresh) return DualOutcome::Infeasible;
        refresh();
        fresh = true;
        continue;
      }
      std::size_t q = candidates_.front().column;
      double best_alpha = 0.0;
      for (const auto& c : candidates_) {
        if (c.slack / std::abs(c.alpha) <= theta_max && std::abs(c.alpha) > best_alpha) {
          best_alpha = std::abs(c.alpha);
          q = c.column;
        }
      }

      compute_column(q, alpha);
      const double pivot = alpha[r];
      double row_alpha = 0.0;
      for (const auto& c : candidates_)
        if (c.column == q) row_alpha = c.alpha;
      if (std::abs(pivot - row_alpha) > 1e-7 * std::max(1.0, std::abs(pivot)) ||
          std::abs(pivot) < kPivotTol) {
        if (fresh) return DualOutcome::GiveUp;
        refresh();
        fresh = true;
        continue;
      }
      fresh = false;

      ++iterations_;
      ++dual_iterations;
      ++since_reinvert_;

      const double delta = (x_[out] - target) / pivot;
      for (std::size_t i = 0; i < m_; ++i)
        if (alpha[i] != 0.0) x_[basis_[i]] -= alpha[i] * delta;
      x_[q] += delta;
      x_[out] = target;
      state_[out] = raise || lower_[out] == upper_[out] ? VarState::AtLower : VarState::AtUpper;
      basic_row_[out] = -1;

      const double dq = reduced_cost(q);
      const double step = dq / pivot;
      for (std::size_t c = 0; c < m_; ++c) y_[c] += step * rho[c];
      pivot_inverse(r, alpha);
      basis_[r] = q;
      basic_row_[q] = static_cast<std::ptrdiff_t>(r);
      state_[q] = VarState::Basic;
    }
  }

  std::size_t first_violated_row() const {
    for (std::size_t a = first_artificial(); a < column_count(); ++a)
      if (x_[a] > kPhaseOneTol) return cols_[a][0].row;
    std::size_t worst = 0;
    double worst_value = -1.0;
    for (std::size_t a = first_artificial(); a < column_count(); ++a) {
      if (x_[a] > worst_value) {
        worst_value = x_[a];
        worst = cols_[a][0].row;
      }
    }
    return worst;
  }

  const LinearProblem& problem_;
  std::size_t m_;
  std::size_t n_;
  Clock::time_point deadline_;
  bool force_bland_;

  std::vector<std::vector<Entry>> cols_;
  std::vector<double> lower_, upper_, true_cost_, cost_, x_, rhs_, y_;
  std::vector<VarState> state_;
  std::vector<std::size_t> basis_;
  std::vector<std::ptrdiff_t> basic_row_;
  std::vector<double> binv_;
  std::vector<std::size_t> nonzero_;
  struct Candidate {
    std::size_t column;
    double alpha;
    double slack;
  };
  std::vector<Candidate> candidates_;
  std::size_t artificial_count_ = 0;
  std::size_t iterations_ = 0;
  std::size_t since_reinvert_ = 0;
  double dual_tol_ = 1e-9;
  double rhs_scale_ = 1.0;
};

} // namespace

RelaxationResult solve_relaxation(const LinearProblem& problem, const std::vector<Bounds>& bounds,
                                  Clock::time_point deadline, Pricing pricing,
                                  const WarmBasis* warm) {
  BoundedSimplex simplex(problem, bounds, deadline, pricing);
  return simplex.run(warm);
}

} // namespace gridshare::lp::detail

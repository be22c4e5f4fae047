#include "holder/pressure.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "holder/error.hpp"
#include "holder/reduce.hpp"

namespace holder {

namespace {

double log_sum_exp(const std::vector<double>& v) {
  const double c = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += std::exp(x - c);
  return c + std::log(s);
}

std::size_t state_count(int alphabet, int depth) {
  std::size_t s = 1;
  for (int i = 1; i < depth; ++i) s *= static_cast<std::size_t>(alphabet);
  return s;
}

Eigen::MatrixXd transfer_matrix(const LocallyConstantPotential& pot, double shift) {
  const auto m = static_cast<std::size_t>(pot.alphabet());
  const std::size_t states = state_count(pot.alphabet(), pot.depth());
  Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(states),
                                              static_cast<Eigen::Index>(states));
  for (std::size_t u = 0; u < states; ++u) {
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t w = u * m + j;
      const std::size_t v = w % states;
      mat(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) =
          std::exp(pot.value(w) - shift);
    }
  }
  return mat;
}

struct LeadingPair {
  double value = 0.0;
  Eigen::VectorXd vector;
};

LeadingPair leading_eigenpair(const Eigen::MatrixXd& mat, bool with_vector) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(mat, with_vector);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::eigensolver, "eigensolver did not converge on the transfer matrix");
  }
  const auto& ev = es.eigenvalues();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < ev.size(); ++i) {
    if (ev[i].real() > ev[best].real()) best = i;
  }
  LeadingPair out;
  out.value = ev[best].real();
  if (!(out.value > 0.0)) {
    throw Error(ErrorKind::eigensolver, "transfer matrix has no positive leading eigenvalue");
  }
  if (with_vector) {
    out.vector = es.eigenvectors().col(best).real();
    if (out.vector.sum() < 0.0) out.vector = -out.vector;
    // Perron vector is strictly positive; clip round-off.
    for (Eigen::Index i = 0; i < out.vector.size(); ++i) {
      out.vector[i] = std::max(out.vector[i], 0.0);
    }
  }
  return out;
}

}  // namespace

PerronData perron(const LocallyConstantPotential& pot, bool with_vectors) {
  PerronData out;
  if (pot.depth() == 1) {
    out.log_lambda = log_sum_exp(pot.values());
    out.left = {1.0};
    out.right = {1.0};
    return out;
  }
  const double shift = pot.max_value();
  const Eigen::MatrixXd mat = transfer_matrix(pot, shift);
  const auto right = leading_eigenpair(mat, with_vectors);
  out.log_lambda = std::log(right.value) + shift;
  if (!with_vectors) return out;
  const Eigen::MatrixXd transposed = mat.transpose();
  const auto left = leading_eigenpair(transposed, true);
  const double dot = left.vector.dot(right.vector);
  if (!(dot > 0.0)) throw Error(ErrorKind::eigensolver, "degenerate Perron vectors");
  const double rn = right.vector.sum();
  out.right.resize(static_cast<std::size_t>(right.vector.size()));
  out.left.resize(out.right.size());
  for (std::size_t i = 0; i < out.right.size(); ++i) {
    const auto ei = static_cast<Eigen::Index>(i);
    out.right[i] = right.vector[ei] / rn;
    out.left[i] = left.vector[ei] * rn / dot;
  }
  return out;
}

double pressure(const LocallyConstantPotential& pot) {
  return perron(pot, false).log_lambda;
}

double pressure(const PotentialCombo& combo) { return pressure(combo.materialize()); }

double log_partition_sum(const LocallyConstantPotential& pot, int n, unsigned workers) {
  const int m = pot.alphabet();
  const std::uint64_t total = checked_word_count(m, n);
  const auto combine = [](double a, double b) { return log_add_exp(a, b); };
  const auto block_fn = [&](std::uint64_t begin, std::uint64_t end) {
    PairwiseAccumulator<double, decltype(combine)> acc(combine);
    Word w = word_at(m, n, begin);
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      acc.push(birkhoff_sum(pot, w));
      for (int i = n - 1; i >= 0; --i) {
        if (++w[i] < m) break;
        w[i] = 0;
      }
    }
    return acc.result(-std::numeric_limits<double>::infinity());
  };
  return deterministic_reduce<double>(total, 4096, workers, block_fn, combine,
                                      -std::numeric_limits<double>::infinity());
}

double pressure(const PressureQuery& query) {
  if (query.method == PressureMethod::spectral) return pressure(query.potential);
  if (query.level < 1) throw Error(ErrorKind::invalid_argument, "pressure level must be >= 1");
  double p[3];
  for (int i = 0; i < 3; ++i) {
    const int n = query.level + i;
    p[i] = log_partition_sum(query.potential, n, query.workers) / n;
  }
  // Aitken delta-squared over n, n+1, n+2.
  const double d1 = p[1] - p[0];
  const double d2 = p[2] - p[1];
  const double denom = d2 - d1;
  if (std::abs(denom) <= 1e-15 * std::max(1.0, std::abs(p[2]))) return p[2];
  return p[2] - d2 * d2 / denom;
}

ThermoSystem::ThermoSystem(LocallyConstantPotential phi, LocallyConstantPotential psi,
                           SolverConfig cfg)
    : phi_(std::move(phi)), psi_(std::move(psi)), cfg_(cfg) {
  if (phi_.alphabet() != psi_.alphabet()) {
    throw Error(ErrorKind::invalid_argument, "phi and psi use different alphabets");
  }
  const int k = std::max(phi_.depth(), psi_.depth());
  const bool geometric = phi_.is_geometric();
  phi_ = phi_.lifted(k);
  phi_.mark_geometric(geometric);
  psi_ = psi_.lifted(k);
  if (!(phi_.max_value() < 0.0)) {
    throw Error(ErrorKind::invalid_map, "geometric potential must be strictly negative");
  }
  const double p_psi = holder::pressure(psi_);
  if (std::abs(p_psi) > 1e-10) {
    std::ostringstream os;
    os << "psi has pressure " << p_psi << "; normalize it first";
    throw Error(ErrorKind::normalization, os.str());
  }
  double mean = 0.0;
  const auto n = static_cast<double>(phi_.table_size());
  for (std::size_t i = 0; i < phi_.table_size(); ++i) mean += psi_.value(i) / phi_.value(i);
  mean /= n;
  double var = 0.0;
  for (std::size_t i = 0; i < phi_.table_size(); ++i) {
    const double d = psi_.value(i) / phi_.value(i) - mean;
    var += d * d;
  }
  ratio_variance_ = n > 1 ? var / (n - 1) : 0.0;
  ahlfors_ = ratio_variance_ < 1e-12;
  delta_ = solve_decreasing([this](double s) { return pressure(s, 0.0); }, 0.5, 0.5, cfg_);
}

double ThermoSystem::pressure(double s, double q) const {
  if (depth() == 1) {
    const std::size_t m = phi_.table_size();
    double c = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) c = std::max(c, s * phi_.value(j) + q * psi_.value(j));
    double sum = 0.0;
    for (std::size_t j = 0; j < m; ++j) sum += std::exp(s * phi_.value(j) + q * psi_.value(j) - c);
    return c + std::log(sum);
  }
  std::vector<double> v(phi_.table_size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = s * phi_.value(i) + q * psi_.value(i);
  return holder::pressure(LocallyConstantPotential(alphabet(), depth(), std::move(v)));
}

double ThermoSystem::solve_s(double q, double shift, double guess, double step) const {
  return solve_decreasing([&](double s) { return pressure(s - shift, q); }, guess, step, cfg_);
}

double ThermoSystem::temperature(double q) const {
  if (q == 0.0) return delta_;
  return solve_s(q, 0.0, delta_ * (1.0 - q), 0.1 * (1.0 + std::abs(q)));
}

double ThermoSystem::beta(double t, double alpha) const {
  if (t == 0.0) return delta_;
  return solve_s(t, alpha * t, delta_ * (1.0 - t) + alpha * t, 0.1 * (1.0 + std::abs(t)));
}

double ThermoSystem::beta(double t, double alpha, double guess) const {
  if (t == 0.0) return delta_;
  return solve_s(t, alpha * t, guess, 1e-3 * (1.0 + std::abs(guess)));
}

std::vector<double> ThermoSystem::equilibrium_weights(double s, double q) const {
  const std::size_t n = phi_.table_size();
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = s * phi_.value(i) + q * psi_.value(i);
  std::vector<double> w(n);
  if (depth() == 1) {
    const double c = *std::max_element(v.begin(), v.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += (w[i] = std::exp(v[i] - c));
    for (double& x : w) x /= sum;
    return w;
  }
  const LocallyConstantPotential pot(alphabet(), depth(), v);
  const auto pd = perron(pot, true);
  const auto m = static_cast<std::size_t>(alphabet());
  const std::size_t states = pd.right.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t u = i / m;
    const std::size_t next = i % states;
    w[i] = pd.left[u] * std::exp(v[i] - pd.log_lambda) * pd.right[next];
  }
  return w;
}

double ThermoSystem::gamma_gibbs(double q) const {
  const auto w = equilibrium_weights(temperature(q), q);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    num += w[i] * psi_.value(i);
    den += w[i] * phi_.value(i);
  }
  return num / den;
}

double ThermoSystem::gamma_fd(double q) const {
  const double h = cfg_.fd_step;
  return -(temperature(q + h) - temperature(q - h)) / (2.0 * h);
}

GammaEstimate ThermoSystem::gamma(double q) const {
  GammaEstimate g{gamma_gibbs(q), gamma_fd(q)};
  if (std::abs(g.gibbs - g.finite_difference) > cfg_.gamma_agreement) {
    std::ostringstream os;
    os.precision(12);
    os << "gamma(" << q << "): Gibbs expectation " << g.gibbs
       << " and finite difference " << g.finite_difference << " disagree";
    throw Error(ErrorKind::numerical_inconsistency, os.str());
  }
  return g;
}

double ThermoSystem::fixed_point_ratio(Symbol i) const {
  return fixed_point_value(psi_, i) / fixed_point_value(phi_, i);
}

GammaRange ThermoSystem::gamma_range() const {
  GammaRange r;
  if (depth() == 1) {
    r.min = std::numeric_limits<double>::infinity();
    r.max = -r.min;
    for (std::size_t j = 0; j < phi_.table_size(); ++j) {
      const double ratio = psi_.value(j) / phi_.value(j);
      r.min = std::min(r.min, ratio);
      r.max = std::max(r.max, ratio);
    }
    r.exact = true;
    return r;
  }
  r.min = gamma_gibbs(cfg_.t_max);
  r.max = gamma_gibbs(-cfg_.t_max);
  r.exact = false;
  return r;
}

double bowen_dimension(const LocallyConstantPotential& phi, const SolverConfig& cfg) {
  if (!(phi.max_value() < 0.0)) {
    throw Error(ErrorKind::invalid_map, "geometric potential must be strictly negative");
  }
  return solve_decreasing(
      [&](double s) {
        std::vector<double> v = phi.values();
        for (double& x : v) x *= s;
        return pressure(LocallyConstantPotential(phi.alphabet(), phi.depth(), std::move(v)));
      },
      0.5, 0.5, cfg);
}

double bowen_dimension(const Ifs& ifs, int depth, const SolverConfig& cfg) {
  return bowen_dimension(geometric_potential(ifs, depth), cfg);
}

}  // namespace holder

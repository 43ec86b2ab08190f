#include "cmkt/leontief.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

#include "cmkt/io.hpp"

namespace cmkt {

namespace {

constexpr double kPowerIterationTol = 1e-8;
constexpr double kProductiveMargin = 1e-9;
constexpr std::size_t kMaxPowerIterations = 100000;

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return m;
}

}  // namespace

LeontiefEconomy::LeontiefEconomy(std::vector<std::vector<double>> input_coefficients,
                                 std::vector<double> direct_labor)
    : inputs_(std::move(input_coefficients)), labor_(std::move(direct_labor)) {
  const std::size_t n = labor_.size();
  if (n == 0) throw std::invalid_argument("economy must have at least one good");
  if (inputs_.size() != n) {
    throw std::invalid_argument("input matrix has " + std::to_string(inputs_.size()) +
                                " rows but the labor vector has " + std::to_string(n) +
                                " entries");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (inputs_[i].size() != n) {
      throw std::invalid_argument("input matrix row " + std::to_string(i) + " has " +
                                  std::to_string(inputs_[i].size()) +
                                  " entries, expected " + std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double a = inputs_[i][j];
      if (!std::isfinite(a) || a < 0.0) {
        throw std::invalid_argument("input coefficient [" + std::to_string(i) + "][" +
                                    std::to_string(j) + "] must be finite and >= 0");
      }
    }
  }
  bool any_labor = false;
  for (std::size_t j = 0; j < n; ++j) {
    if (!std::isfinite(labor_[j]) || labor_[j] < 0.0) {
      throw std::invalid_argument("direct labor [" + std::to_string(j) +
                                  "] must be finite and >= 0");
    }
    if (labor_[j] > 0.0) any_labor = true;
  }
  if (!any_labor) throw std::invalid_argument("at least one good must use direct labor");
}

ProductivityResult productivity_check(const std::vector<std::vector<double>>& inputs) {
  const std::size_t n = inputs.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (inputs[i].size() != n) {
      throw std::invalid_argument("productivity check needs a square matrix");
    }
    for (double a : inputs[i]) {
      if (!std::isfinite(a) || a < 0.0) {
        throw std::invalid_argument("productivity check needs non-negative finite entries");
      }
    }
  }

  // Iterate on A + I: it is non-negative with a positive diagonal, so the
  // iteration cannot cycle between periodic classes, and its Perron root
  // is exactly 1 + rho(A).
  const Eigen::MatrixXd a = to_matrix(inputs);
  Eigen::VectorXd x = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
  x /= x.norm();

  ProductivityResult result;
  double estimate = 0.0;
  for (std::size_t iter = 1; iter <= kMaxPowerIterations; ++iter) {
    Eigen::VectorXd next = a * x + x;
    const double growth = next.norm();
    result.iterations = iter;
    if (growth == 0.0) {
      estimate = 0.0;
      result.converged = true;
      break;
    }
    const double rho = growth - 1.0;
    next /= growth;
    if (iter > 1 && std::fabs(rho - estimate) < kPowerIterationTol) {
      estimate = rho;
      result.converged = true;
      break;
    }
    estimate = rho;
    x = next;
  }
  result.spectral_radius = std::max(estimate, 0.0);
  result.productive = result.spectral_radius < 1.0 - kProductiveMargin;
  return result;
}

std::vector<double> labor_values(const LeontiefEconomy& economy) {
  const auto productivity = productivity_check(economy.inputs());
  if (!productivity.productive) {
    throw NonProductiveEconomyError(
        "economy is not productive: spectral radius estimate " +
            io::format_double(productivity.spectral_radius) + " is not below 1",
        productivity.spectral_radius);
  }

  const auto n = static_cast<Eigen::Index>(economy.size());
  const Eigen::MatrixXd a = to_matrix(economy.inputs());
  const Eigen::VectorXd l =
      Eigen::Map<const Eigen::VectorXd>(economy.labor().data(), n);

  const Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n) - a.transpose();
  const Eigen::VectorXd v = system.partialPivLu().solve(l);

  const double residual = (v - (a.transpose() * v + l)).norm();
  if (!(residual < 1e-10 * (1.0 + v.norm()))) {
    throw std::runtime_error("labor value solve left residual " +
                             io::format_double(residual));
  }

  return std::vector<double>(v.data(), v.data() + n);
}

std::vector<std::vector<double>> relative_prices(const std::vector<double>& values) {
  const std::size_t n = values.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(values[i]) || !(values[i] > 0.0)) {
      throw std::invalid_argument("relative prices need positive values; entry " +
                                  std::to_string(i) + " is not");
    }
  }
  std::vector<std::vector<double>> ratios(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      ratios[i][j] = values[i] / values[j];
    }
  }
  return ratios;
}

}  // namespace cmkt

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

// Embodied-labor values of an input-output economy.  With A[i][j] the
// units of input i consumed per unit of output j and l the direct labor
// per unit, the labor value vector solves v = A^T v + l: the labor in a
// good is its own direct labor plus the labor embodied in its inputs.
// The system has a unique non-negative solution exactly when the economy
// is productive (spectral radius of A below 1).

namespace cmkt {

class LeontiefEconomy {
 public:
  // Throws on a non-square matrix, negative or non-finite entries, a
  // labor vector of the wrong length, or all-zero labor.
  LeontiefEconomy(std::vector<std::vector<double>> input_coefficients,
                  std::vector<double> direct_labor);

  std::size_t size() const { return labor_.size(); }
  const std::vector<std::vector<double>>& inputs() const { return inputs_; }
  const std::vector<double>& labor() const { return labor_; }

 private:
  std::vector<std::vector<double>> inputs_;
  std::vector<double> labor_;
};

struct ProductivityResult {
  bool productive = false;
  double spectral_radius = 0.0;  // power-iteration estimate
  std::size_t iterations = 0;
  bool converged = false;
};

// Power-iteration estimate of the dominant eigenvalue of a non-negative
// matrix, converged to 1e-8.  Productive requires the estimate to clear
// 1 with a strict 1e-9 margin; borderline systems are rejected because
// (I - A^T) is then too close to singular to price anything.
ProductivityResult productivity_check(const std::vector<std::vector<double>>& inputs);

class NonProductiveEconomyError : public std::domain_error {
 public:
  NonProductiveEconomyError(const std::string& message, double estimate)
      : std::domain_error(message), spectral_radius_(estimate) {}
  double spectral_radius() const { return spectral_radius_; }

 private:
  double spectral_radius_;
};

// Unique non-negative solution of v = A^T v + l via a direct LU solve of
// (I - A^T) v = l.  Throws NonProductiveEconomyError when the power
// iteration finds a spectral radius at or above 1.  The returned vector
// satisfies the defining equation with residual below 1e-10 (1 + |v|).
std::vector<double> labor_values(const LeontiefEconomy& economy);

// Pairwise exchange ratios ratio[i][j] = v_i / v_j; all values must be
// positive.
std::vector<std::vector<double>> relative_prices(const std::vector<double>& values);

}  // namespace cmkt

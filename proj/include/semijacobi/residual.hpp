#ifndef SEMIJACOBI_RESIDUAL_HPP
#define SEMIJACOBI_RESIDUAL_HPP

#include <initializer_list>
#include <string>
#include <vector>

#include "semijacobi/real.hpp"

namespace semijacobi {

/// |sum of terms| / max |term|; zero when every term vanishes.
Real scaled_residual(std::initializer_list<Real> terms);
Real scaled_residual(const std::vector<Real>& terms);

struct ResidualPoint {
  Real alpha;
  Real t;
  int n = 0;
};

struct ResidualEntry {
  std::string name;
  Real max_residual;
  ResidualPoint argmax;
  long samples = 0;
};

/// Per-identity maximum scaled residual over an (alpha, t, n) grid.
class ResidualReport {
 public:
  /// Folds one residual sample into the entry `name`, keeping the maximum.
  void record(const std::string& name, const Real& residual, const Real& alpha, const Real& t, int n);
  void merge(const ResidualReport& other);

  const std::vector<ResidualEntry>& entries() const noexcept { return entries_; }
  const ResidualEntry* find(const std::string& name) const;
  /// Largest residual over every entry (0 for an empty report).
  Real worst() const;

  /// Grid metadata: distinct parameter values and the n range covered.
  std::vector<Real> alphas;
  std::vector<Real> ts;
  int n_lo = 0;
  int n_hi = 0;

  /// {name: {max_residual, argmax_n, grid}} with numbers as decimal strings.
  std::string to_json(int digits) const;

 private:
  void note_point(const Real& alpha, const Real& t, int n);
  std::vector<ResidualEntry> entries_;
  bool has_points_ = false;
};

}  // namespace semijacobi

#endif  // SEMIJACOBI_RESIDUAL_HPP

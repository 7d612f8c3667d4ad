#include "semijacobi/residual.hpp"

#include <algorithm>

#include <json.hpp>

namespace semijacobi {

namespace {

template <typename Range>
Real scaled_residual_impl(const Range& terms) {
  mpfr_prec_t bits = working_precision();
  for (const Real& t : terms) bits = std::max(bits, t.precision());
  WorkingPrecision guard(bits);
  Real sum(0);
  Real largest(0);
  for (const Real& t : terms) {
    sum += t;
    Real a = abs(t);
    if (a > largest) largest = std::move(a);
  }
  if (largest.is_zero()) return Real(0);
  return abs(sum) / largest;
}

bool contains(const std::vector<Real>& values, const Real& v) {
  return std::any_of(values.begin(), values.end(), [&](const Real& x) { return x == v; });
}

}  // namespace

Real scaled_residual(std::initializer_list<Real> terms) { return scaled_residual_impl(terms); }
Real scaled_residual(const std::vector<Real>& terms) { return scaled_residual_impl(terms); }

void ResidualReport::note_point(const Real& alpha, const Real& t, int n) {
  if (!contains(alphas, alpha)) alphas.push_back(alpha);
  if (!contains(ts, t)) ts.push_back(t);
  if (!has_points_) {
    n_lo = n_hi = n;
    has_points_ = true;
  } else {
    n_lo = std::min(n_lo, n);
    n_hi = std::max(n_hi, n);
  }
}

void ResidualReport::record(const std::string& name, const Real& residual, const Real& alpha, const Real& t,
                            int n) {
  note_point(alpha, t, n);
  auto it = std::find_if(entries_.begin(), entries_.end(), [&](const ResidualEntry& e) { return e.name == name; });
  if (it == entries_.end()) {
    entries_.push_back({name, residual, {alpha, t, n}, 1});
    return;
  }
  ++it->samples;
  // NaN residuals must not hide behind a comparison.
  if (!residual.is_finite() || residual > it->max_residual) {
    if (it->max_residual.is_finite()) {
      it->max_residual = residual;
      it->argmax = {alpha, t, n};
    }
  }
}

void ResidualReport::merge(const ResidualReport& other) {
  for (const auto& e : other.entries_) {
    auto it = std::find_if(entries_.begin(), entries_.end(), [&](const ResidualEntry& x) { return x.name == e.name; });
    if (it == entries_.end()) {
      entries_.push_back(e);
    } else {
      it->samples += e.samples;
      if (it->max_residual.is_finite() && (!e.max_residual.is_finite() || e.max_residual > it->max_residual)) {
        it->max_residual = e.max_residual;
        it->argmax = e.argmax;
      }
    }
  }
  for (const auto& a : other.alphas) {
    if (!contains(alphas, a)) alphas.push_back(a);
  }
  for (const auto& t : other.ts) {
    if (!contains(ts, t)) ts.push_back(t);
  }
  if (other.has_points_) {
    if (!has_points_) {
      n_lo = other.n_lo;
      n_hi = other.n_hi;
      has_points_ = true;
    } else {
      n_lo = std::min(n_lo, other.n_lo);
      n_hi = std::max(n_hi, other.n_hi);
    }
  }
}

const ResidualEntry* ResidualReport::find(const std::string& name) const {
  auto it = std::find_if(entries_.begin(), entries_.end(), [&](const ResidualEntry& e) { return e.name == name; });
  return it == entries_.end() ? nullptr : &*it;
}

Real ResidualReport::worst() const {
  Real w(0);
  for (const auto& e : entries_) {
    if (!e.max_residual.is_finite()) return e.max_residual;
    if (e.max_residual > w) w = e.max_residual;
  }
  return w;
}

std::string ResidualReport::to_json(int digits) const {
  nlohmann::ordered_json grid;
  grid["alpha"] = nlohmann::json::array();
  for (const auto& a : alphas) grid["alpha"].push_back(a.str(digits));
  grid["t"] = nlohmann::json::array();
  for (const auto& t : ts) grid["t"].push_back(t.str(digits));
  grid["n"] = {n_lo, n_hi};
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& e : entries_) {
    out[e.name] = {{"max_residual", e.max_residual.str(digits)}, {"argmax_n", e.argmax.n}, {"grid", grid}};
  }
  return out.dump(2);
}

}  // namespace semijacobi

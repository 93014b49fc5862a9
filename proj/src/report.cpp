#include "profinite/report.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace profinite {

void Report::record(const std::string& name, double residual, double tolerance) {
  auto it = std::find_if(checks_.begin(), checks_.end(), [&](const Check& c) { return c.name == name; });
  if (it == checks_.end()) {
    checks_.push_back({name, residual, tolerance, 1});
    return;
  }
  if (std::isnan(residual) || residual > it->residual) it->residual = residual;
  it->tolerance = tolerance;
  ++it->samples;
}

void Report::record_verdict(const std::string& name, bool ok) { record(name, ok ? 0.0 : 1.0, 0.0); }

void Report::merge(const Report& other, const std::string& prefix) {
  for (const auto& c : other.checks_) {
    record(prefix + c.name, c.residual, c.tolerance);
  }
  for (const auto& n : other.notes_) notes_.push_back(n);
}

bool Report::has(const std::string& name) const {
  return std::any_of(checks_.begin(), checks_.end(), [&](const Check& c) { return c.name == name; });
}

double Report::residual(const std::string& name) const {
  for (const auto& c : checks_)
    if (c.name == name) return c.residual;
  throw std::out_of_range("no check named " + name);
}

bool Report::passed() const {
  return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.passed(); });
}

std::vector<std::string> Report::failing() const {
  std::vector<std::string> out;
  for (const auto& c : checks_)
    if (!c.passed()) out.push_back(c.name);
  return out;
}

}  // namespace profinite

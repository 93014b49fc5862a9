#pragma once

#include <string>
#include <vector>

namespace profinite {

/// One named audit: the largest residual seen and the tolerance it must meet.
struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;

  bool passed() const { return residual <= tolerance; }  // NaN fails
};

/// Accumulates max residuals per named check.
class Report {
 public:
  /// Folds `residual` into the running max of check `name`.
  void record(const std::string& name, double residual, double tolerance);
  /// Records a boolean verdict as residual 0 (pass) or 1 (fail) against tolerance 0.
  void record_verdict(const std::string& name, bool ok);
  void note(std::string text) { notes_.push_back(std::move(text)); }
  void merge(const Report& other, const std::string& prefix = "");

  bool has(const std::string& name) const;
  /// Max residual of `name`; throws std::out_of_range if never recorded.
  double residual(const std::string& name) const;
  bool passed() const;
  std::vector<std::string> failing() const;

  const std::vector<Check>& checks() const { return checks_; }
  const std::vector<std::string>& notes() const { return notes_; }

 private:
  std::vector<Check> checks_;
  std::vector<std::string> notes_;
};

}  // namespace profinite

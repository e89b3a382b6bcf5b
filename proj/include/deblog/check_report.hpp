#pragma once

#include <string>
#include <vector>

namespace deblog {

/// One measured quantity of a verification and the bound it is held to.
struct Measurement {
  enum class Bound {
    AtMost,       // value <= tolerance
    GreaterThan,  // value > tolerance
    Info,         // reported only
  };

  std::string quantity;
  double value = 0.0;
  double tolerance = 0.0;
  Bound bound = Bound::Info;

  bool ok() const;
};

/// Structured pass/fail record. pass() holds iff every bounded measurement
/// is within its tolerance (and no hard failure was recorded).
class CheckReport {
 public:
  explicit CheckReport(std::string name) : name_(std::move(name)) {}

  const std::string& name() const { return name_; }
  const std::vector<Measurement>& measured() const { return measured_; }
  const std::vector<std::string>& notes() const { return notes_; }

  void at_most(std::string quantity, double value, double tolerance);
  void greater_than(std::string quantity, double value, double threshold);
  void info(std::string quantity, double value);
  /// A condition that failed outright (no numeric tolerance attached).
  void fail(std::string quantity);
  void note(std::string text) { notes_.push_back(std::move(text)); }

  /// Folds another report's measurements in, prefixing quantity names.
  void merge(const CheckReport& other);

  bool pass() const;
  const Measurement* find(const std::string& quantity) const;
  double value(const std::string& quantity) const;

  std::string to_string() const;

 private:
  std::string name_;
  std::vector<Measurement> measured_;
  std::vector<std::string> notes_;
};

}  // namespace deblog

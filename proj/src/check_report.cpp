#include "deblog/check_report.hpp"

#include "deblog/csv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace deblog {

bool Measurement::ok() const {
  if (std::isnan(value)) return bound == Bound::Info;
  switch (bound) {
    case Bound::AtMost: return value <= tolerance;
    case Bound::GreaterThan: return value > tolerance;
    case Bound::Info: return true;
  }
  return false;
}

void CheckReport::at_most(std::string quantity, double value, double tolerance) {
  measured_.push_back({std::move(quantity), value, tolerance, Measurement::Bound::AtMost});
}

void CheckReport::greater_than(std::string quantity, double value, double threshold) {
  measured_.push_back({std::move(quantity), value, threshold, Measurement::Bound::GreaterThan});
}

void CheckReport::info(std::string quantity, double value) {
  measured_.push_back({std::move(quantity), value, 0.0, Measurement::Bound::Info});
}

void CheckReport::fail(std::string quantity) {
  measured_.push_back({std::move(quantity), std::numeric_limits<double>::quiet_NaN(), 0.0,
                       Measurement::Bound::AtMost});
}

void CheckReport::merge(const CheckReport& other) {
  for (Measurement m : other.measured_) {
    m.quantity = other.name_ + "." + m.quantity;
    measured_.push_back(std::move(m));
  }
  for (const auto& n : other.notes_) notes_.push_back(other.name_ + ": " + n);
}

bool CheckReport::pass() const {
  return std::all_of(measured_.begin(), measured_.end(), [](const Measurement& m) { return m.ok(); });
}

const Measurement* CheckReport::find(const std::string& quantity) const {
  auto it = std::find_if(measured_.begin(), measured_.end(),
                         [&](const Measurement& m) { return m.quantity == quantity; });
  return it == measured_.end() ? nullptr : &*it;
}

double CheckReport::value(const std::string& quantity) const {
  const Measurement* m = find(quantity);
  if (!m) throw std::out_of_range("no measurement named " + quantity + " in report " + name_);
  return m->value;
}

std::string CheckReport::to_string() const {
  std::string out = "[" + std::string(pass() ? "PASS" : "FAIL") + "] " + name_ + "\n";
  for (const auto& m : measured_) {
    out += "  " + m.quantity + " = " + format_real(m.value);
    switch (m.bound) {
      case Measurement::Bound::AtMost: out += "  (<= " + format_real(m.tolerance) + ")"; break;
      case Measurement::Bound::GreaterThan: out += "  (> " + format_real(m.tolerance) + ")"; break;
      case Measurement::Bound::Info: break;
    }
    if (m.bound != Measurement::Bound::Info) out += m.ok() ? "  ok" : "  VIOLATED";
    out += "\n";
  }
  for (const auto& n : notes_) out += "  note: " + n + "\n";
  return out;
}

}  // namespace deblog

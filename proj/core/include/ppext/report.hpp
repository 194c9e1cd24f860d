#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ppext/numerics.hpp"

namespace ppext {

// One verified inequality instance; becomes one CSV row.
struct Check {
  std::string label;
  long n = -1;  // -1: not applicable
  long p = -1;
  long q = -1;
  std::string computed;
  std::string bound;
  // log2(bound/computed) oriented so that >= 0 means satisfied; empty when
  // one side is zero.
  std::optional<double> margin_log2;
  bool pass = true;
  // Findings-style rows are recorded but never fail a run.
  bool asserted = true;
};

struct Series {
  std::string name;
  std::vector<std::string> values;
};

struct Report {
  std::string statement;
  std::string title;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  std::vector<Series> series;
  Bits width_bits = 0;
  int grid_depth = -1;

  bool pass() const;
  long failures() const;
  std::string parameter(const std::string& key) const;
  void set_parameter(const std::string& key, std::string value);
  Series& add_series(const std::string& name);
};

// computed <= bound
Check upper_check(std::string label, const BigReal& computed,
                  const BigReal& bound);
// computed >= bound
Check lower_check(std::string label, const BigReal& computed,
                  const BigReal& bound);
// Exponent-domain (base ell1) comparison of pure products: passes iff the
// computed product is <= the bound product. log2_ell1 converts the margin.
Check logmag_upper_check(std::string label, const LogMag& computed,
                         const LogMag& bound, double log2_ell1);

std::string fmt(const BigReal& x);
std::string fmt_double(double x);

// Fixed CSV layout shared by every subcommand.
const std::vector<std::string>& csv_columns();
std::vector<std::vector<std::string>> csv_rows(const Report& r);
std::string csv_escape(const std::string& field);

}  // namespace ppext

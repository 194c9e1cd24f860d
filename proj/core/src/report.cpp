#include "ppext/report.hpp"

#include <cmath>
#include <cstdio>

namespace ppext {

bool Report::pass() const { return failures() == 0; }

long Report::failures() const {
  long n = 0;
  for (const Check& c : checks) {
    if (c.asserted && !c.pass) ++n;
  }
  return n;
}

std::string Report::parameter(const std::string& key) const {
  for (const auto& [k, v] : parameters) {
    if (k == key) return v;
  }
  return "";
}

void Report::set_parameter(const std::string& key, std::string value) {
  for (auto& [k, v] : parameters) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  parameters.emplace_back(key, std::move(value));
}

Series& Report::add_series(const std::string& name) {
  series.push_back({name, {}});
  return series.back();
}

std::string fmt(const BigReal& x) { return x.to_string(20); }

std::string fmt_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

namespace {

std::optional<double> log2_ratio(const BigReal& num, const BigReal& den) {
  if (num.is_zero() || den.is_zero()) return std::nullopt;
  return num.log2_abs() - den.log2_abs();
}

}  // namespace

Check upper_check(std::string label, const BigReal& computed,
                  const BigReal& bound) {
  Check c;
  c.label = std::move(label);
  c.computed = fmt(computed);
  c.bound = fmt(bound);
  c.pass = computed <= bound;
  c.margin_log2 = log2_ratio(bound, computed);
  return c;
}

Check lower_check(std::string label, const BigReal& computed,
                  const BigReal& bound) {
  Check c;
  c.label = std::move(label);
  c.computed = fmt(computed);
  c.bound = fmt(bound);
  c.pass = computed >= bound;
  c.margin_log2 = log2_ratio(computed, bound);
  return c;
}

Check logmag_upper_check(std::string label, const LogMag& computed,
                         const LogMag& bound, double log2_ell1) {
  Check c;
  c.label = std::move(label);
  c.computed = "ell1^" + rational_string(computed.exponent);
  c.bound = "ell1^" + rational_string(bound.exponent);
  c.pass = compare(computed, bound) != std::strong_ordering::greater;
  Rational diff = computed.exponent - bound.exponent;
  c.margin_log2 = diff.get_d() * -log2_ell1;
  return c;
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "statement_id", "alpha", "ell1",  "N",    "p",          "q",
      "computed",     "bound", "margin_log2", "pass", "width_bits", "grid_depth"};
  return cols;
}

std::vector<std::vector<std::string>> csv_rows(const Report& r) {
  auto opt = [](long v) { return v < 0 ? std::string() : std::to_string(v); };
  std::vector<std::vector<std::string>> rows;
  for (const Check& c : r.checks) {
    std::string id = r.statement;
    if (!c.label.empty()) id += ":" + c.label;
    std::string verdict = c.pass ? "true" : "false";
    if (!c.asserted) verdict = c.pass ? "finding:true" : "finding:false";
    rows.push_back({id, r.parameter("alpha"), r.parameter("ell1"), opt(c.n),
                    opt(c.p), opt(c.q), c.computed, c.bound,
                    c.margin_log2 ? fmt_double(*c.margin_log2) : "", verdict,
                    std::to_string(r.width_bits),
                    r.grid_depth < 0 ? "" : std::to_string(r.grid_depth)});
  }
  return rows;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

}  // namespace ppext

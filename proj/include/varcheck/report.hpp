// Deterministic report serialization.
//
// Reports must be byte-identical across reruns with the same options, so
// this writer keeps object keys in insertion order, prints doubles with 17
// significant digits ("%.17g", C locale), and emits LF line endings only.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "varcheck/types.hpp"

namespace varcheck::report {

// Format a double with 17 significant digits (round-trip exact).
std::string format_double(double value);

class JValue {
 public:
  JValue() = default;                       // null
  JValue(bool b);                           // NOLINT(google-explicit-constructor)
  JValue(int i);                            // NOLINT
  JValue(long long i);                      // NOLINT
  JValue(double d);                         // NOLINT
  JValue(const char* s);                    // NOLINT
  JValue(std::string s);                    // NOLINT
  JValue(const Vector& v);                  // NOLINT: array of numbers
  JValue(const Eigen::MatrixXd& m);         // NOLINT: array of row arrays

  static JValue array();
  static JValue object();

  // Append (or replace) a key; insertion order is preserved on output.
  JValue& set(const std::string& key, JValue value);
  // Append an element to an array.
  JValue& push(JValue value);

  bool is_object() const { return kind_ == Kind::object; }
  bool is_array() const { return kind_ == Kind::array; }

  std::string dump(int indent = 2) const;

 private:
  enum class Kind { null_value, boolean, integer, number, string, array, object };
  Kind kind_ = Kind::null_value;
  bool bool_ = false;
  long long int_ = 0;
  double num_ = 0.0;
  std::string str_;
  std::vector<JValue> items_;
  std::vector<std::pair<std::string, JValue>> members_;

  void write(std::string& out, int indent, int depth) const;
};

// CSV with a header row, comma separator, LF endings, '.' decimal point.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header);

  // Cells are preformatted; use cell(double) for numeric columns.
  void add_row(std::vector<std::string> cells);
  static std::string cell(double value) { return format_double(value); }

  std::string dump() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

// Write text to a file (LF endings preserved); throws ConfigError on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace varcheck::report

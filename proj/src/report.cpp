#include "varcheck/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace varcheck::report {

std::string format_double(double value) {
  if (!std::isfinite(value))
    throw NumericalError("report: refusing to serialize a non-finite number");
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

namespace {

void escape_into(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

}  // namespace

JValue::JValue(bool b) : kind_(Kind::boolean), bool_(b) {}
JValue::JValue(int i) : kind_(Kind::integer), int_(i) {}
JValue::JValue(long long i) : kind_(Kind::integer), int_(i) {}
JValue::JValue(double d) : kind_(Kind::number), num_(d) {}
JValue::JValue(const char* s) : kind_(Kind::string), str_(s) {}
JValue::JValue(std::string s) : kind_(Kind::string), str_(std::move(s)) {}

JValue::JValue(const Vector& v) : kind_(Kind::array) {
  for (int i = 0; i < v.size(); ++i) items_.emplace_back(v(i));
}

JValue::JValue(const Eigen::MatrixXd& m) : kind_(Kind::array) {
  for (int r = 0; r < m.rows(); ++r) {
    JValue row = array();
    for (int c = 0; c < m.cols(); ++c) row.push(m(r, c));
    items_.push_back(std::move(row));
  }
}

JValue JValue::array() {
  JValue v;
  v.kind_ = Kind::array;
  return v;
}

JValue JValue::object() {
  JValue v;
  v.kind_ = Kind::object;
  return v;
}

JValue& JValue::set(const std::string& key, JValue value) {
  if (kind_ != Kind::object) throw ConfigError("JValue::set on a non-object");
  for (auto& [k, v] : members_)
    if (k == key) {
      v = std::move(value);
      return *this;
    }
  members_.emplace_back(key, std::move(value));
  return *this;
}

JValue& JValue::push(JValue value) {
  if (kind_ != Kind::array) throw ConfigError("JValue::push on a non-array");
  items_.push_back(std::move(value));
  return *this;
}

void JValue::write(std::string& out, int indent, int depth) const {
  const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent) * depth, ' ');
  switch (kind_) {
    case Kind::null_value: out += "null"; break;
    case Kind::boolean: out += bool_ ? "true" : "false"; break;
    case Kind::integer: out += std::to_string(int_); break;
    case Kind::number: out += format_double(num_); break;
    case Kind::string: escape_into(out, str_); break;
    case Kind::array: {
      if (items_.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (std::size_t i = 0; i < items_.size(); ++i) {
        out += pad;
        items_[i].write(out, indent, depth + 1);
        if (i + 1 < items_.size()) out += ',';
        out += '\n';
      }
      out += close_pad;
      out += ']';
      break;
    }
    case Kind::object: {
      if (members_.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      for (std::size_t i = 0; i < members_.size(); ++i) {
        out += pad;
        escape_into(out, members_[i].first);
        out += ": ";
        members_[i].second.write(out, indent, depth + 1);
        if (i + 1 < members_.size()) out += ',';
        out += '\n';
      }
      out += close_pad;
      out += '}';
      break;
    }
  }
}

std::string JValue::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  out += '\n';
  return out;
}

Csv::Csv(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw ConfigError("Csv: header must not be empty");
}

void Csv::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size())
    throw ConfigError("Csv: row width does not match the header");
  rows_.push_back(std::move(cells));
}

std::string Csv::dump() const {
  std::string out;
  auto append_line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  append_line(header_);
  for (const auto& row : rows_) append_line(row);
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);  // binary: keep LF endings as-is
  if (!out) throw ConfigError("cannot open output file '" + path + "'");
  out << text;
  if (!out) throw ConfigError("failed writing output file '" + path + "'");
}

}  // namespace varcheck::report

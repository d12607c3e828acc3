#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "divstab/model.hpp"

namespace divstab {

/// Input is not well-formed JSON (or not readable at all).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NumericMode { exact, floating };

std::string_view to_string(NumericMode mode);

/// Parses the instance document. Malformed JSON raises ParseError; a
/// well-formed document with schema or semantic problems raises
/// ValidationError with every violation. Plain JSON numbers are converted
/// exactly from their decimal text.
Instance parse_instance(std::string_view json_text);

/// Canonical compact serialization (rationals as "p/q" strings).
std::string serialize_instance(const Instance& inst);

/// Lower-case hex SHA-256 of serialize_instance(inst).
std::string instance_sha256(const Instance& inst);

struct AssignmentDocument {
  std::optional<std::string> instance_sha256;
  NumericMode mode = NumericMode::exact;
  std::map<std::string, Rational> values;
};

AssignmentDocument parse_assignment(std::string_view json_text);

std::string serialize_assignment(const Instance& inst, const Assignment& x);
std::string serialize_float_assignment(const Instance& inst, const std::vector<double>& x);

/// Shortest decimal text that round-trips the double.
std::string format_double(double value);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace divstab

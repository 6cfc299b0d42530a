#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bcd::cli {

/// One output row: key columns, a numeric value (absent for sentinels such
/// as ">500") and optional text columns (exact fraction, rounded value).
struct Entry {
  std::vector<std::string> keys;
  std::optional<double> value;
  std::vector<std::optional<std::string>> texts;

  bool operator==(const Entry&) const = default;
};

struct OutputRecord {
  std::string command;
  std::string mode;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<std::string> key_names;
  std::string value_name = "value";
  std::vector<std::string> text_names;
  std::vector<Entry> values;

  void add(std::vector<std::string> keys, std::optional<double> value,
           std::vector<std::optional<std::string>> texts = {});

  bool operator==(const OutputRecord&) const = default;
};

/// Header row, then one line per entry. Key columns, the value column,
/// then text columns; missing values and texts are empty cells.
void write_csv(std::ostream& out, const OutputRecord& record);

/// Flat JSON object: scalars, the inputs object, the column list, and one
/// object per value/text column keyed by the comma-joined entry keys.
std::string to_json(const OutputRecord& record);
OutputRecord from_json(const std::string& text);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);
/// Fixed-point text with `decimals` digits, rounded from the binary value.
std::string format_fixed(double value, int decimals);

}  // namespace bcd::cli

#include "bcd/output_record.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace bcd::cli {

namespace {

using json = nlohmann::ordered_json;

std::string join_keys(const std::vector<std::string>& keys) {
  std::string out;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i > 0) out += ',';
    out += keys[i];
  }
  return out;
}

std::vector<std::string> split_keys(const std::string& label, std::size_t expected) {
  std::vector<std::string> keys;
  std::string current;
  for (char c : label) {
    if (c == ',') {
      keys.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  keys.push_back(current);
  if (keys.size() != expected) throw std::invalid_argument("entry label '" + label + "' has the wrong key count");
  return keys;
}

std::string csv_cell(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

void OutputRecord::add(std::vector<std::string> keys, std::optional<double> value,
                       std::vector<std::optional<std::string>> texts) {
  if (keys.size() != key_names.size()) throw std::logic_error("entry key count does not match the columns");
  for (const auto& key : keys) {
    if (key.find(',') != std::string::npos) throw std::logic_error("entry keys must not contain commas");
  }
  texts.resize(text_names.size());
  values.push_back({std::move(keys), value, std::move(texts)});
}

std::string format_number(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, result.ptr);
}

std::string format_fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
  return buffer;
}

void write_csv(std::ostream& out, const OutputRecord& record) {
  std::vector<std::string> header = record.key_names;
  header.push_back(record.value_name);
  header.insert(header.end(), record.text_names.begin(), record.text_names.end());
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << csv_cell(header[i]);
  out << '\n';
  for (const Entry& e : record.values) {
    for (std::size_t i = 0; i < e.keys.size(); ++i) out << (i ? "," : "") << csv_cell(e.keys[i]);
    out << (e.keys.empty() ? "" : ",");
    if (e.value) out << format_number(*e.value);
    for (const auto& t : e.texts) out << ',' << (t ? csv_cell(*t) : "");
    out << '\n';
  }
}

std::string to_json(const OutputRecord& record) {
  json j;
  j["command"] = record.command;
  j["mode"] = record.mode;
  json inputs = json::object();
  for (const auto& [name, value] : record.inputs) inputs[name] = value;
  j["inputs"] = inputs;
  j["keys"] = record.key_names;
  j["value_name"] = record.value_name;
  j["text_names"] = record.text_names;
  json values = json::object();
  for (const Entry& e : record.values) {
    values[join_keys(e.keys)] = e.value && std::isfinite(*e.value) ? json(*e.value) : json(nullptr);
  }
  j[record.value_name] = values;
  for (std::size_t t = 0; t < record.text_names.size(); ++t) {
    json texts = json::object();
    for (const Entry& e : record.values) {
      if (e.texts[t]) texts[join_keys(e.keys)] = *e.texts[t];
    }
    j[record.text_names[t]] = texts;
  }
  return j.dump(2);
}

OutputRecord from_json(const std::string& text) {
  const json j = json::parse(text);
  OutputRecord record;
  record.command = j.at("command").get<std::string>();
  record.mode = j.at("mode").get<std::string>();
  for (const auto& [name, value] : j.at("inputs").items()) record.inputs.emplace_back(name, value.get<std::string>());
  record.key_names = j.at("keys").get<std::vector<std::string>>();
  record.value_name = j.at("value_name").get<std::string>();
  record.text_names = j.at("text_names").get<std::vector<std::string>>();
  for (const auto& [label, value] : j.at(record.value_name).items()) {
    Entry e;
    e.keys = split_keys(label, record.key_names.size());
    if (!value.is_null()) e.value = value.get<double>();
    for (const auto& name : record.text_names) {
      const json& texts = j.at(name);
      const auto it = texts.find(label);
      if (it == texts.end()) {
        e.texts.emplace_back();
      } else {
        e.texts.emplace_back(it->get<std::string>());
      }
    }
    record.values.push_back(std::move(e));
  }
  return record;
}

}  // namespace bcd::cli

#include "isolab/report.hpp"

#include <cmath>
#include <cstdio>

namespace isolab {

nlohmann::json rational_json(const Rational& r) {
  return nlohmann::json{{"num", r.num}, {"den", r.den}};
}

nlohmann::json Report::to_json() const {
  nlohmann::json j;
  j["config"] = config;
  j["version"] = version;
  if (timestamp) j["timestamp"] = *timestamp;
  nlohmann::json checks_json = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json cj;
    cj["name"] = c.name;
    cj["asserted"] = c.asserted;
    cj["passed"] = c.passed;
    if (!c.values.is_null()) cj["values"] = c.values;
    checks_json.push_back(cj);
  }
  j["checks"] = checks_json;
  j["payload"] = payload;
  return j;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e9999" : "-1e9999";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

void escape_string(const std::string& s, std::string& out) {
  out.push_back('"');
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
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

void dump(const nlohmann::json& j, std::string& out, int depth) {
  const std::string pad(2 * static_cast<std::size_t>(depth), ' ');
  const std::string pad_in(2 * static_cast<std::size_t>(depth + 1), ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::null: out += "null"; break;
    case nlohmann::json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; break;
    case nlohmann::json::value_t::number_integer:
      out += std::to_string(j.get<long long>());
      break;
    case nlohmann::json::value_t::number_unsigned:
      out += std::to_string(j.get<unsigned long long>());
      break;
    case nlohmann::json::value_t::number_float: out += format_double(j.get<double>()); break;
    case nlohmann::json::value_t::string: escape_string(j.get<std::string>(), out); break;
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      bool first = true;
      for (const auto& item : j) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        dump(item, out, depth + 1);
      }
      out += "\n" + pad + "]";
      break;
    }
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        escape_string(it.key(), out);
        out += ": ";
        dump(it.value(), out, depth + 1);
      }
      out += "\n" + pad + "}";
      break;
    }
    default: out += "null"; break;
  }
}

}  // namespace

std::string dump_json(const nlohmann::json& j) {
  std::string out;
  dump(j, out, 0);
  out.push_back('\n');
  return out;
}

}  // namespace isolab

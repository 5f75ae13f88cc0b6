#include "cstarmod/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace cstarmod {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void Report::add_input(const std::string& name, const std::string& digest) {
  inputs.push_back({name, digest});
}

void Report::add_value(const std::string& name, const std::string& value) {
  values.push_back({name, value});
}

void Report::add_value(const std::string& name, double value) {
  values.push_back({name, format_double(value)});
}

void Report::add_residual(const std::string& name, double value) {
  residuals.push_back({name, value});
}

void Report::add_check(const std::string& name, bool pass) {
  checks.push_back({name, pass});
}

bool Report::ok() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.pass; });
}

std::string Report::render_table() const {
  size_t width = 0;
  for (const Item& it : inputs) width = std::max(width, it.name.size());
  for (const Item& it : values) width = std::max(width, it.name.size());
  for (const Residual& r : residuals) width = std::max(width, r.name.size());
  for (const Check& c : checks) width = std::max(width, c.name.size());

  auto pad = [width](const std::string& s) {
    return s + std::string(width + 2 - s.size(), ' ');
  };

  std::ostringstream out;
  out << command << "\n";
  if (!inputs.empty()) {
    out << "  inputs:\n";
    for (const Item& it : inputs) out << "    " << pad(it.name) << it.value << "\n";
  }
  if (!values.empty()) {
    out << "  values:\n";
    for (const Item& it : values) out << "    " << pad(it.name) << it.value << "\n";
  }
  if (!residuals.empty()) {
    out << "  residuals:\n";
    for (const Residual& r : residuals)
      out << "    " << pad(r.name) << format_double(r.value) << "\n";
  }
  if (!checks.empty()) {
    out << "  checks:\n";
    for (const Check& c : checks)
      out << "    " << pad(c.name) << (c.pass ? "pass" : "FAIL") << "\n";
  }
  if (elapsed_seconds)
    out << "  elapsed_seconds: " << format_double(*elapsed_seconds) << "\n";
  out << "  result: " << (ok() ? "PASS" : "FAIL") << "\n";
  return out.str();
}

std::string Report::render_machine() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  nlohmann::ordered_json in = nlohmann::ordered_json::object();
  for (const Item& it : inputs) in[it.name] = it.value;
  j["inputs"] = std::move(in);
  nlohmann::ordered_json vals = nlohmann::ordered_json::object();
  for (const Item& it : values) vals[it.name] = it.value;
  j["values"] = std::move(vals);
  nlohmann::ordered_json res = nlohmann::ordered_json::object();
  for (const Residual& r : residuals) res[r.name] = r.value;
  j["residuals"] = std::move(res);
  nlohmann::ordered_json chk = nlohmann::ordered_json::object();
  for (const Check& c : checks) chk[c.name] = c.pass;
  j["checks"] = std::move(chk);
  j["pass"] = ok();
  if (elapsed_seconds) j["elapsed_seconds"] = *elapsed_seconds;
  return j.dump(2) + "\n";
}

}  // namespace cstarmod

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cstarmod {

// Uniform result of a tool invocation.  Two renderings share the same data: a
// human table and a canonical machine document.  Timing is attached only when
// the caller opted in, so default output is byte-stable for fixed inputs.
struct Report {
  struct Item {
    std::string name;
    std::string value;
  };
  struct Residual {
    std::string name;
    double value = 0.0;
  };
  struct Check {
    std::string name;
    bool pass = false;
  };

  std::string command;
  std::vector<Item> inputs;    // digests of the documents consumed
  std::vector<Item> values;    // named results, already formatted
  std::vector<Residual> residuals;
  std::vector<Check> checks;
  std::optional<double> elapsed_seconds;

  void add_input(const std::string& name, const std::string& digest);
  void add_value(const std::string& name, const std::string& value);
  void add_value(const std::string& name, double value);
  void add_residual(const std::string& name, double value);
  void add_check(const std::string& name, bool pass);

  bool ok() const;

  std::string render_table() const;
  std::string render_machine() const;
};

std::string format_double(double v);

}  // namespace cstarmod

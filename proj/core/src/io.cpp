#include "cstarmod/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "cstarmod/errors.hpp"

namespace cstarmod::io {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string canonical_dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string resolve(const std::string& base_dir, const std::string& ref) {
  std::filesystem::path p(ref);
  if (p.is_absolute() || base_dir.empty()) return ref;
  return (std::filesystem::path(base_dir) / p).string();
}

const ordered_json& field(const ordered_json& j, const char* key) {
  if (!j.is_object()) throw InputError("document: expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw InputError(std::string("document: missing field ") + key);
  return *it;
}

void expect_type(const ordered_json& j, const std::string& want) {
  const ordered_json& t = field(j, "type");
  if (!t.is_string() || t.get<std::string>() != want)
    throw InputError("document: expected type " + want);
}

int int_field(const ordered_json& j, const char* key) {
  const ordered_json& v = field(j, key);
  if (!v.is_number_integer()) throw InputError(std::string(key) + ": expected an integer");
  return v.get<int>();
}

ordered_json complex_to(const cplx& z) {
  return ordered_json::array({z.real(), z.imag()});
}

cplx complex_from(const ordered_json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InputError("entry: expected a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

ordered_json mat_to(const Mat& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_to(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from(const ordered_json& j, int rows, int cols) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw InputError("matrix: wrong row count");
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const ordered_json& row = j[static_cast<size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw InputError("matrix: wrong column count");
    for (int k = 0; k < cols; ++k) m(i, k) = complex_from(row[static_cast<size_t>(k)]);
  }
  return m;
}

ordered_json element_to(const AlgebraElement& a) {
  ordered_json blocks = ordered_json::array();
  for (int s = 0; s < a.num_blocks(); ++s) blocks.push_back(mat_to(a.block(s)));
  return blocks;
}

AlgebraElement element_from(const ordered_json& j, const AlgebraSpec& spec) {
  if (!j.is_array() || static_cast<int>(j.size()) != spec.num_blocks())
    throw InputError("element: wrong block count");
  AlgebraElement a = AlgebraElement::zero(spec);
  for (int s = 0; s < spec.num_blocks(); ++s)
    a.block(s) = mat_from(j[static_cast<size_t>(s)], spec.block_size(s), spec.block_size(s));
  return a;
}

ordered_json vector_to(const ModuleVector& x) {
  ordered_json entries = ordered_json::array();
  for (int i = 0; i < x.length(); ++i) entries.push_back(element_to(x.entry(i)));
  return entries;
}

ModuleVector vector_from(const ordered_json& j, const AlgebraSpec& spec) {
  if (!j.is_array() || j.empty()) throw InputError("vector: expected a nonempty array");
  std::vector<AlgebraElement> entries;
  entries.reserve(j.size());
  for (const ordered_json& e : j) entries.push_back(element_from(e, spec));
  return ModuleVector(std::move(entries));
}

ordered_json operator_entries_to(const OperatorMatrix& op) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < op.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < op.cols(); ++j) row.push_back(element_to(op.entry(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

OperatorMatrix operator_entries_from(const ordered_json& j, const AlgebraSpec& spec) {
  if (!j.is_array() || j.empty()) throw InputError("operator: expected a nonempty array");
  const int rows = static_cast<int>(j.size());
  const ordered_json& first = j[0];
  if (!first.is_array() || first.empty())
    throw InputError("operator: expected nonempty rows");
  const int cols = static_cast<int>(first.size());
  std::vector<AlgebraElement> entries;
  entries.reserve(static_cast<size_t>(rows) * cols);
  for (const ordered_json& row : j) {
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw InputError("operator: ragged rows");
    for (const ordered_json& e : row) entries.push_back(element_from(e, spec));
  }
  return OperatorMatrix(rows, cols, std::move(entries));
}

ordered_json algebra_to(const AlgebraSpec& spec) {
  ordered_json j;
  j["type"] = "algebra";
  j["block_sizes"] = spec.block_sizes;
  j["trace_weights"] = spec.trace_weights;
  return j;
}

AlgebraSpec algebra_from(const ordered_json& j) {
  expect_type(j, "algebra");
  const ordered_json& sizes = field(j, "block_sizes");
  const ordered_json& weights = field(j, "trace_weights");
  if (!sizes.is_array() || !weights.is_array())
    throw InputError("algebra: block_sizes and trace_weights must be arrays");
  AlgebraSpec spec;
  for (const ordered_json& v : sizes) {
    if (!v.is_number_integer()) throw InputError("algebra: block sizes must be integers");
    spec.block_sizes.push_back(v.get<int>());
  }
  for (const ordered_json& v : weights) {
    if (!v.is_number()) throw InputError("algebra: trace weights must be numbers");
    spec.trace_weights.push_back(v.get<double>());
  }
  spec.validate();
  return spec;
}

// An embedded algebra is either an inline object or a path string.
AlgebraSpec algebra_ref_from(const ordered_json& j, const std::string& base_dir) {
  if (j.is_string()) return load_algebra(resolve(base_dir, j.get<std::string>()));
  return algebra_from(j);
}

ordered_json algebra_ref_to(const AlgebraSpec& spec, const std::string& ref) {
  if (ref.empty()) return algebra_to(spec);
  return ordered_json(ref);
}

ordered_json parse(const std::string& text) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded()) throw InputError("document: not valid JSON");
  return j;
}

ordered_json module_body_to(const ModuleSpec& m) {
  ordered_json j;
  j["ambient_rank"] = m.ambient_rank;
  j["projection"] = operator_entries_to(m.projection);
  if (m.generators) {
    ordered_json gens = ordered_json::array();
    for (const ModuleVector& g : *m.generators) gens.push_back(vector_to(g));
    j["generators"] = std::move(gens);
  }
  return j;
}

ModuleSpec module_body_from(const ordered_json& j, AlgebraSpec spec) {
  ModuleSpec m;
  m.algebra = std::move(spec);
  m.ambient_rank = int_field(j, "ambient_rank");
  if (m.ambient_rank <= 0) throw InputError("module: ambient_rank must be positive");
  const OperatorMatrix p = operator_entries_from(field(j, "projection"), m.algebra);
  if (p.rows() != m.ambient_rank || p.cols() != m.ambient_rank)
    throw InputError("module: projection shape does not match ambient_rank");
  m.projection = p;
  if (j.contains("generators")) {
    const ordered_json& gens = j.at("generators");
    if (!gens.is_array()) throw InputError("module: generators must be an array");
    std::vector<ModuleVector> out;
    for (const ordered_json& g : gens) out.push_back(vector_from(g, m.algebra));
    m.generators = std::move(out);
  }
  m.validate();
  return m;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path);
  out << content;
  if (!out) throw InputError("write failed: " + path);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string digest_hex(const std::string& bytes) {
  static const char* hex = "0123456789abcdef";
  std::uint64_t h = fnv1a64(bytes);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<size_t>(i)] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

std::string algebra_to_json(const AlgebraSpec& spec) {
  return canonical_dump(algebra_to(spec));
}

AlgebraSpec algebra_from_json(const std::string& text) {
  return algebra_from(parse(text));
}

AlgebraSpec load_algebra(const std::string& path) {
  return algebra_from_json(read_text_file(path));
}

void save_algebra(const std::string& path, const AlgebraSpec& spec) {
  write_text_file(path, algebra_to_json(spec));
}

std::string module_to_json(const ModuleSpec& m, const std::string& algebra_ref) {
  ordered_json j;
  j["type"] = "module";
  j["algebra"] = algebra_ref_to(m.algebra, algebra_ref);
  ordered_json body = module_body_to(m);
  for (auto& [key, value] : body.items()) j[key] = std::move(value);
  return canonical_dump(j);
}

ModuleSpec module_from_json(const std::string& text, const std::string& base_dir) {
  const ordered_json j = parse(text);
  expect_type(j, "module");
  return module_body_from(j, algebra_ref_from(field(j, "algebra"), base_dir));
}

ModuleSpec load_module(const std::string& path) {
  return module_from_json(read_text_file(path),
                          std::filesystem::path(path).parent_path().string());
}

void save_module(const std::string& path, const ModuleSpec& m,
                 const std::string& algebra_ref) {
  write_text_file(path, module_to_json(m, algebra_ref));
}

std::string frame_to_json(const FrameSet& f, const std::string& algebra_ref) {
  ordered_json j;
  j["type"] = "frame";
  j["algebra"] = algebra_ref_to(f.module.algebra, algebra_ref);
  j["module"] = module_body_to(f.module);
  ordered_json elems = ordered_json::array();
  for (const ModuleVector& x : f.elements) elems.push_back(vector_to(x));
  j["elements"] = std::move(elems);
  return canonical_dump(j);
}

FrameSet frame_from_json(const std::string& text, const std::string& base_dir) {
  const ordered_json j = parse(text);
  expect_type(j, "frame");
  const AlgebraSpec spec = algebra_ref_from(field(j, "algebra"), base_dir);
  FrameSet f;
  f.module = module_body_from(field(j, "module"), spec);
  const ordered_json& elems = field(j, "elements");
  if (!elems.is_array()) throw InputError("frame: elements must be an array");
  for (const ordered_json& e : elems)
    f.elements.push_back(vector_from(e, f.module.algebra));
  f.validate();
  return f;
}

FrameSet load_frame(const std::string& path) {
  return frame_from_json(read_text_file(path),
                         std::filesystem::path(path).parent_path().string());
}

void save_frame(const std::string& path, const FrameSet& f,
                const std::string& algebra_ref) {
  write_text_file(path, frame_to_json(f, algebra_ref));
}

std::string operator_to_json(const AlgebraSpec& spec, const OperatorMatrix& op,
                             const std::string& algebra_ref) {
  ordered_json j;
  j["type"] = "operator";
  j["algebra"] = algebra_ref_to(spec, algebra_ref);
  j["entries"] = operator_entries_to(op);
  return canonical_dump(j);
}

OperatorMatrix operator_from_json(const std::string& text, AlgebraSpec* spec_out,
                                  const std::string& base_dir) {
  const ordered_json j = parse(text);
  expect_type(j, "operator");
  AlgebraSpec spec = algebra_ref_from(field(j, "algebra"), base_dir);
  OperatorMatrix op = operator_entries_from(field(j, "entries"), spec);
  if (spec_out) *spec_out = std::move(spec);
  return op;
}

OperatorMatrix load_operator(const std::string& path, AlgebraSpec* spec_out) {
  return operator_from_json(read_text_file(path), spec_out,
                            std::filesystem::path(path).parent_path().string());
}

void save_operator(const std::string& path, const AlgebraSpec& spec,
                   const OperatorMatrix& op, const std::string& algebra_ref) {
  write_text_file(path, operator_to_json(spec, op, algebra_ref));
}

std::string complex_to_json(const ChainComplex& c, const std::string& algebra_ref) {
  ordered_json j;
  j["type"] = "complex";
  j["algebra"] = algebra_ref_to(c.algebra(), algebra_ref);
  ordered_json mods = ordered_json::array();
  for (const ModuleSpec& m : c.modules) mods.push_back(module_body_to(m));
  j["modules"] = std::move(mods);
  ordered_json diffs = ordered_json::array();
  for (const OperatorMatrix& d : c.differentials)
    diffs.push_back(operator_entries_to(d));
  j["differentials"] = std::move(diffs);
  return canonical_dump(j);
}

ChainComplex complex_from_json(const std::string& text, const std::string& base_dir) {
  const ordered_json j = parse(text);
  expect_type(j, "complex");
  const AlgebraSpec spec = algebra_ref_from(field(j, "algebra"), base_dir);
  const ordered_json& mods = field(j, "modules");
  const ordered_json& diffs = field(j, "differentials");
  if (!mods.is_array() || mods.empty())
    throw InputError("complex: modules must be a nonempty array");
  if (!diffs.is_array()) throw InputError("complex: differentials must be an array");
  ChainComplex c;
  for (const ordered_json& m : mods) c.modules.push_back(module_body_from(m, spec));
  for (const ordered_json& d : diffs)
    c.differentials.push_back(operator_entries_from(d, spec));
  c.validate();
  return c;
}

ChainComplex load_complex(const std::string& path) {
  return complex_from_json(read_text_file(path),
                           std::filesystem::path(path).parent_path().string());
}

void save_complex(const std::string& path, const ChainComplex& c,
                  const std::string& algebra_ref) {
  write_text_file(path, complex_to_json(c, algebra_ref));
}

}  // namespace cstarmod::io

#pragma once

#include <cstdint>
#include <string>

#include "cstarmod/algebra.hpp"
#include "cstarmod/frames.hpp"
#include "cstarmod/l2.hpp"
#include "cstarmod/module.hpp"

// Canonical JSON documents for every object the tools exchange.  Serialization
// is stable: fixed key order, two-space indent, one trailing newline, complex
// entries as [re, im] pairs.  Loaders validate what they read and throw
// InputError with the offending field.  An embedded algebra may be given
// inline or as a path string resolved against the referencing document.

namespace cstarmod::io {

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// FNV-1a digest of a document's bytes, as 16 hex characters.
std::uint64_t fnv1a64(const std::string& bytes);
std::string digest_hex(const std::string& bytes);

std::string algebra_to_json(const AlgebraSpec& spec);
AlgebraSpec algebra_from_json(const std::string& text);
AlgebraSpec load_algebra(const std::string& path);
void save_algebra(const std::string& path, const AlgebraSpec& spec);

// algebra_ref, when nonempty, is written instead of the inline algebra and is
// interpreted as a path relative to the document's own directory.
std::string module_to_json(const ModuleSpec& m, const std::string& algebra_ref = "");
ModuleSpec module_from_json(const std::string& text, const std::string& base_dir = ".");
ModuleSpec load_module(const std::string& path);
void save_module(const std::string& path, const ModuleSpec& m,
                 const std::string& algebra_ref = "");

std::string frame_to_json(const FrameSet& f, const std::string& algebra_ref = "");
FrameSet frame_from_json(const std::string& text, const std::string& base_dir = ".");
FrameSet load_frame(const std::string& path);
void save_frame(const std::string& path, const FrameSet& f,
                const std::string& algebra_ref = "");

std::string operator_to_json(const AlgebraSpec& spec, const OperatorMatrix& op,
                             const std::string& algebra_ref = "");
OperatorMatrix operator_from_json(const std::string& text, AlgebraSpec* spec_out,
                                  const std::string& base_dir = ".");
OperatorMatrix load_operator(const std::string& path, AlgebraSpec* spec_out);
void save_operator(const std::string& path, const AlgebraSpec& spec,
                   const OperatorMatrix& op, const std::string& algebra_ref = "");

std::string complex_to_json(const ChainComplex& c, const std::string& algebra_ref = "");
ChainComplex complex_from_json(const std::string& text, const std::string& base_dir = ".");
ChainComplex load_complex(const std::string& path);
void save_complex(const std::string& path, const ChainComplex& c,
                  const std::string& algebra_ref = "");

}  // namespace cstarmod::io

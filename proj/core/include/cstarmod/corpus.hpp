#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cstarmod/algebra.hpp"
#include "cstarmod/frames.hpp"
#include "cstarmod/l2.hpp"
#include "cstarmod/module.hpp"
#include "cstarmod/rng.hpp"

// Deterministic random instances for tests, benchmarks, and the generated
// document corpus.  Every generator draws only from the passed Rng, so a fixed
// seed reproduces the corpus byte for byte.

namespace cstarmod::corpus {

struct CorpusConfig {
  std::uint64_t seed = 1;
  int algebra_count = 6;
  int module_count = 12;
  int frame_count = 10;
  int riesz_pair_count = 6;
  int complex_count = 6;
  int max_block_sum = 8;
  int max_ambient = 6;
  int max_frame_len = 8;
  int max_complex_modules = 4;
};

AlgebraSpec random_algebra(Rng& rng, int max_block_sum);

// Sized so every module over it fits the commutant size guard.
AlgebraSpec small_algebra(Rng& rng);

AlgebraElement random_element(Rng& rng, const AlgebraSpec& spec);
AlgebraElement random_hermitian(Rng& rng, const AlgebraSpec& spec);
AlgebraElement random_positive(Rng& rng, const AlgebraSpec& spec);
AlgebraElement random_projection(Rng& rng, const AlgebraSpec& spec);
AlgebraElement random_unitary(Rng& rng, const AlgebraSpec& spec);

ModuleVector random_vector(Rng& rng, const AlgebraSpec& spec, int length);
OperatorMatrix random_operator(Rng& rng, const AlgebraSpec& spec, int rows, int cols);

// Span of a few partially supported random vectors; retried until some block
// has positive rank.
ModuleSpec random_module(Rng& rng, const AlgebraSpec& spec, int ambient_rank);

// Generating set of the requested size, rejection-filtered so the frame bounds
// are not degenerate (lower / upper at least about 1e-3).
FrameSet random_frame(Rng& rng, const ModuleSpec& m, int count);

// Two Riesz bases of the same module: a standard tuple carried over by the
// canonical unitary, and an elementwise invertible twist of it.
std::pair<FrameSet, FrameSet> random_riesz_pair(Rng& rng, const ModuleSpec& m);

// Self-adjoint, compressed, strictly positive on the module.
OperatorMatrix random_positive_form(Rng& rng, const ModuleSpec& m);

// Valid chain complex with module_count modules; differentials are random
// maps compressed through the kernel of the previous one, so d.d = 0 holds by
// construction.
ChainComplex random_complex(Rng& rng, const AlgebraSpec& spec, int module_count,
                            int max_ambient);

struct CorpusFile {
  std::string path;  // relative to the corpus root
  std::string kind;
  std::string digest;
};

// Writes algebras, modules, frames, Riesz pairs, and complexes under out_dir
// together with a manifest listing each file and its digest.  Returns the
// manifest entries.
std::vector<CorpusFile> generate(const CorpusConfig& cfg, const std::string& out_dir);

}  // namespace cstarmod::corpus

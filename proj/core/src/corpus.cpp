#include "cstarmod/corpus.hpp"

#include <algorithm>
#include <filesystem>

#include <Eigen/QR>

#include "json.hpp"

#include "cstarmod/dense.hpp"
#include "cstarmod/errors.hpp"
#include "cstarmod/io.hpp"

namespace cstarmod::corpus {

namespace {

Mat random_complex_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.normal_complex();
  return m;
}

}  // namespace

AlgebraSpec random_algebra(Rng& rng, int max_block_sum) {
  if (max_block_sum < 1) throw InputError("corpus: max_block_sum must be positive");
  const int want_blocks = 1 + rng.uniform_int(0, 2);
  AlgebraSpec spec;
  int used = 0;
  for (int s = 0; s < want_blocks; ++s) {
    const int left = max_block_sum - used - (want_blocks - s - 1);
    if (left < 1) break;
    const int size = 1 + rng.uniform_int(0, std::min(3, left) - 1);
    spec.block_sizes.push_back(size);
    used += size;
  }
  // Positive raw weights, normalized so the identity has trace one.
  std::vector<double> raw;
  double total = 0.0;
  for (size_t s = 0; s < spec.block_sizes.size(); ++s) {
    raw.push_back(0.2 + rng.uniform());
    total += raw.back() * spec.block_sizes[s];
  }
  for (size_t s = 0; s < raw.size(); ++s) spec.trace_weights.push_back(raw[s] / total);
  spec.validate();
  return spec;
}

AlgebraSpec small_algebra(Rng& rng) { return random_algebra(rng, 3); }

AlgebraElement random_element(Rng& rng, const AlgebraSpec& spec) {
  AlgebraElement a = AlgebraElement::zero(spec);
  for (int s = 0; s < spec.num_blocks(); ++s)
    a.block(s) = random_complex_matrix(rng, spec.block_size(s), spec.block_size(s));
  return a;
}

AlgebraElement random_hermitian(Rng& rng, const AlgebraSpec& spec) {
  const AlgebraElement a = random_element(rng, spec);
  return 0.5 * (a + a.adjoint());
}

AlgebraElement random_positive(Rng& rng, const AlgebraSpec& spec) {
  const AlgebraElement a = random_element(rng, spec);
  return a * a.adjoint();
}

AlgebraElement random_projection(Rng& rng, const AlgebraSpec& spec) {
  AlgebraElement p = AlgebraElement::zero(spec);
  for (int s = 0; s < spec.num_blocks(); ++s) {
    const int n = spec.block_size(s);
    const int r = rng.uniform_int(0, n);
    if (r == 0) continue;
    const Mat h = random_complex_matrix(rng, n, n);
    const dense::Eig eig = dense::hermitian_eig(h + h.adjoint());
    const Mat basis = eig.vectors.rightCols(r);
    p.block(s) = basis * basis.adjoint();
  }
  return p;
}

AlgebraElement random_unitary(Rng& rng, const AlgebraSpec& spec) {
  AlgebraElement u = AlgebraElement::zero(spec);
  for (int s = 0; s < spec.num_blocks(); ++s) {
    const int n = spec.block_size(s);
    Eigen::HouseholderQR<Mat> qr(random_complex_matrix(rng, n, n));
    u.block(s) = qr.householderQ() * Mat::Identity(n, n);
  }
  return u;
}

ModuleVector random_vector(Rng& rng, const AlgebraSpec& spec, int length) {
  std::vector<AlgebraElement> entries;
  entries.reserve(static_cast<size_t>(length));
  for (int i = 0; i < length; ++i) entries.push_back(random_element(rng, spec));
  return ModuleVector(std::move(entries));
}

OperatorMatrix random_operator(Rng& rng, const AlgebraSpec& spec, int rows, int cols) {
  std::vector<AlgebraElement> entries;
  entries.reserve(static_cast<size_t>(rows) * cols);
  for (int i = 0; i < rows * cols; ++i) entries.push_back(random_element(rng, spec));
  return OperatorMatrix(rows, cols, std::move(entries));
}

ModuleSpec random_module(Rng& rng, const AlgebraSpec& spec, int ambient_rank) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const int count = 1 + rng.uniform_int(0, ambient_rank);
    std::vector<ModuleVector> gens;
    for (int i = 0; i < count; ++i)
      gens.push_back(random_projection(rng, spec) * random_vector(rng, spec, ambient_rank));
    ModuleSpec m = span_module(spec, ambient_rank, gens);
    const std::vector<int> ranks = rank_vector(m);
    if (std::any_of(ranks.begin(), ranks.end(), [](int r) { return r > 0; })) return m;
  }
  throw Error("corpus: failed to draw a nonzero module");
}

FrameSet random_frame(Rng& rng, const ModuleSpec& m, int count) {
  const CanonicalDecomposition dec = canonical_decomposition(m);
  const int k = static_cast<int>(dec.projections.size());
  if (count < k + 1) count = k + 1;
  const std::vector<int> ranks = rank_vector(m);

  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<ModuleVector> elems;
    // Twisted canonical tuple first so the set generates, then random noise.
    for (int i = 0; i < k; ++i) {
      ModuleVector std_i = ModuleVector::zero(m.algebra, std::max(k, 1));
      std_i.entry(i) = dec.projections[static_cast<size_t>(i)];
      elems.push_back(random_unitary(rng, m.algebra) *
                      apply(std_i, dec.to_standard.adjoint()));
    }
    for (int i = k; i < count; ++i)
      elems.push_back(random_element(rng, m.algebra) *
                      apply(random_vector(rng, m.algebra, m.ambient_rank), m.projection));

    if (rank_vector(span_module(m.algebra, m.ambient_rank, elems)) != ranks) continue;
    FrameSet f{m, elems};
    f.validate();
    const FrameBounds bounds = frame_bounds(f);
    if (bounds.lower < 1e-3 * std::max(bounds.upper, 1.0)) continue;
    return f;
  }
  throw Error("corpus: failed to draw a well conditioned frame");
}

std::pair<FrameSet, FrameSet> random_riesz_pair(Rng& rng, const ModuleSpec& m) {
  const CanonicalDecomposition dec = canonical_decomposition(m);
  const int k = static_cast<int>(dec.projections.size());
  if (k == 0) throw InputError("corpus: riesz pair needs a nonzero module");

  std::vector<ModuleVector> first;
  std::vector<ModuleVector> second;
  for (int i = 0; i < k; ++i) {
    ModuleVector std_i = ModuleVector::zero(m.algebra, k);
    std_i.entry(i) = dec.projections[static_cast<size_t>(i)];
    const ModuleVector x = apply(std_i, dec.to_standard.adjoint());
    first.push_back(x);
    const double scale = 0.5 + 1.5 * rng.uniform();
    second.push_back(scale * (random_unitary(rng, m.algebra) * x));
  }
  FrameSet f{m, std::move(first)};
  FrameSet g{m, std::move(second)};
  f.validate();
  g.validate();
  return {std::move(f), std::move(g)};
}

OperatorMatrix random_positive_form(Rng& rng, const ModuleSpec& m) {
  const int n = m.ambient_rank;
  const OperatorMatrix b = random_operator(rng, m.algebra, n, n);
  const OperatorMatrix bump =
      b * b.adjoint() + 0.5 * OperatorMatrix::identity(m.algebra, n);
  return m.projection * bump * m.projection;
}

ChainComplex random_complex(Rng& rng, const AlgebraSpec& spec, int module_count,
                            int max_ambient) {
  if (module_count < 1) throw InputError("corpus: complex needs at least one module");
  ChainComplex c;
  for (int p = 0; p < module_count; ++p) {
    const int ambient = 1 + rng.uniform_int(0, std::max(1, max_ambient) - 1);
    std::vector<ModuleVector> gens;
    const int count = 1 + rng.uniform_int(0, ambient);
    for (int i = 0; i < count; ++i)
      gens.push_back(random_projection(rng, spec) * random_vector(rng, spec, ambient));
    c.modules.push_back(span_module(spec, ambient, gens));
  }
  // Compress each differential through the kernel of the previous one; the
  // kernel projection is the zero eigenspace of d d^dag + (1 - P).
  OperatorMatrix carrier = c.modules.front().projection;
  for (int p = 1; p < module_count; ++p) {
    const int rows = c.modules[static_cast<size_t>(p)].ambient_rank;
    const int cols = c.modules[static_cast<size_t>(p - 1)].ambient_rank;
    const OperatorMatrix d = c.modules[static_cast<size_t>(p)].projection *
                             random_operator(rng, spec, rows, cols) * carrier;
    c.differentials.push_back(d);

    const OperatorMatrix h =
        d * d.adjoint() +
        (OperatorMatrix::identity(spec, rows) - c.modules[static_cast<size_t>(p)].projection);
    UnfoldedPicture hp = unfold(h);
    for (Mat& blk : hp.blocks) blk = dense::zero_spectral_projection(blk);
    carrier = refold_operator(hp);
  }
  c.validate();
  return c;
}

std::vector<CorpusFile> generate(const CorpusConfig& cfg, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path root(out_dir);
  for (const char* sub : {"algebras", "modules", "frames", "riesz", "complexes"})
    fs::create_directories(root / sub);

  const Rng master(cfg.seed);
  std::vector<CorpusFile> files;
  auto emit = [&](const std::string& rel, const std::string& kind,
                  const std::string& content) {
    io::write_text_file((root / rel).string(), content);
    files.push_back({rel, kind, io::digest_hex(content)});
  };
  auto two = [](int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02d", i);
    return std::string(buf);
  };

  std::vector<AlgebraSpec> algebras;
  {
    Rng rng = master.split(1);
    for (int i = 0; i < cfg.algebra_count; ++i) {
      algebras.push_back(random_algebra(rng, cfg.max_block_sum));
      emit("algebras/algebra_" + two(i) + ".json", "algebra",
           io::algebra_to_json(algebras.back()));
    }
  }
  {
    Rng rng = master.split(2);
    for (int i = 0; i < cfg.module_count; ++i) {
      const int idx = rng.uniform_int(0, static_cast<int>(algebras.size()) - 1);
      const int ambient = 1 + rng.uniform_int(0, cfg.max_ambient - 1);
      const ModuleSpec m = random_module(rng, algebras[static_cast<size_t>(idx)], ambient);
      emit("modules/module_" + two(i) + ".json", "module",
           io::module_to_json(m, "../algebras/algebra_" + two(idx) + ".json"));
    }
  }
  {
    Rng rng = master.split(3);
    for (int i = 0; i < cfg.frame_count; ++i) {
      const int idx = rng.uniform_int(0, static_cast<int>(algebras.size()) - 1);
      const ModuleSpec m =
          random_module(rng, algebras[static_cast<size_t>(idx)], 1 + rng.uniform_int(0, 2));
      const int count = std::min(cfg.max_frame_len,
                                 static_cast<int>(canonical_decomposition(m).projections.size()) +
                                     1 + rng.uniform_int(0, 2));
      emit("frames/frame_" + two(i) + ".json", "frame",
           io::frame_to_json(random_frame(rng, m, count)));
    }
  }
  {
    Rng rng = master.split(4);
    for (int i = 0; i < cfg.riesz_pair_count; ++i) {
      const int idx = rng.uniform_int(0, static_cast<int>(algebras.size()) - 1);
      const ModuleSpec m =
          random_module(rng, algebras[static_cast<size_t>(idx)], 1 + rng.uniform_int(0, 2));
      const auto [f, g] = random_riesz_pair(rng, m);
      emit("riesz/pair_" + two(i) + "_first.json", "frame", io::frame_to_json(f));
      emit("riesz/pair_" + two(i) + "_second.json", "frame", io::frame_to_json(g));
    }
  }
  {
    Rng rng = master.split(5);
    for (int i = 0; i < cfg.complex_count; ++i) {
      const int idx = rng.uniform_int(0, static_cast<int>(algebras.size()) - 1);
      const int count = 2 + rng.uniform_int(0, cfg.max_complex_modules - 2);
      emit("complexes/complex_" + two(i) + ".json", "complex",
           io::complex_to_json(random_complex(rng, algebras[static_cast<size_t>(idx)],
                                              count, 3)));
    }
  }

  nlohmann::ordered_json manifest;
  manifest["type"] = "corpus";
  manifest["seed"] = cfg.seed;
  nlohmann::ordered_json listing = nlohmann::ordered_json::array();
  for (const CorpusFile& f : files) {
    nlohmann::ordered_json row;
    row["path"] = f.path;
    row["kind"] = f.kind;
    row["digest"] = f.digest;
    listing.push_back(std::move(row));
  }
  manifest["files"] = std::move(listing);
  io::write_text_file((root / "manifest.json").string(), manifest.dump(2) + "\n");
  return files;
}

}  // namespace cstarmod::corpus

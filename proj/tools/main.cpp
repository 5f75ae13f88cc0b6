#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "cstarmod/algebra.hpp"
#include "cstarmod/corpus.hpp"
#include "cstarmod/dense.hpp"
#include "cstarmod/equivalence.hpp"
#include "cstarmod/errors.hpp"
#include "cstarmod/frames.hpp"
#include "cstarmod/io.hpp"
#include "cstarmod/l2.hpp"
#include "cstarmod/module.hpp"
#include "cstarmod/report.hpp"

namespace cm = cstarmod;

namespace {

struct Ctx {
  std::string format = "table";
  double tol = cm::kDefaultTol;
  bool timing = false;
  std::chrono::steady_clock::time_point start;
};

std::string parent_dir(const std::string& path) {
  return std::filesystem::path(path).parent_path().string();
}

std::string ints_to_string(const std::vector<int>& v) {
  std::string out = "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(v[i]);
  }
  return out + "]";
}

std::string doubles_to_string(const std::vector<double>& v) {
  std::string out = "[";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += cm::format_double(v[i]);
  }
  return out + "]";
}

std::string center_to_string(const cm::CenterElement& c) {
  std::string out = "[";
  for (size_t i = 0; i < c.scalars.size(); ++i) {
    if (i) out += ", ";
    out += cm::format_double(c.scalars[i].real());
    if (std::abs(c.scalars[i].imag()) > 1e-12) {
      if (c.scalars[i].imag() >= 0) out += "+";
      out += cm::format_double(c.scalars[i].imag()) + "i";
    }
  }
  return out + "]";
}

int finish(const Ctx& ctx, cm::Report rep) {
  if (ctx.timing)
    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.start)
            .count();
  std::cout << (ctx.format == "machine" ? rep.render_machine() : rep.render_table());
  return rep.ok() ? 0 : 1;
}

std::string slurp(const std::string& path, cm::Report& rep, const std::string& name) {
  const std::string text = cm::io::read_text_file(path);
  rep.add_input(name, cm::io::digest_hex(text));
  return text;
}

cm::ModuleSpec load_module_doc(const std::string& path, cm::Report& rep,
                               const std::string& name = "module") {
  return cm::io::module_from_json(slurp(path, rep, name), parent_dir(path));
}

cm::FrameSet load_frame_doc(const std::string& path, cm::Report& rep,
                            const std::string& name = "frame") {
  return cm::io::frame_from_json(slurp(path, rep, name), parent_dir(path));
}

cm::OperatorMatrix load_operator_doc(const std::string& path, cm::Report& rep,
                                     const std::string& name,
                                     cm::AlgebraSpec* spec_out) {
  return cm::io::operator_from_json(slurp(path, rep, name), spec_out, parent_dir(path));
}

cm::ChainComplex load_complex_doc(const std::string& path, cm::Report& rep,
                                  const std::string& name = "complex") {
  return cm::io::complex_from_json(slurp(path, rep, name), parent_dir(path));
}

std::vector<cm::AlgebraElement> support_list(const cm::FrameSet& f) {
  std::vector<cm::AlgebraElement> out;
  out.reserve(f.elements.size());
  for (const cm::ModuleVector& x : f.elements)
    out.push_back(cm::support(cm::inner_product(x, x)));
  return out;
}

int cmd_algebra_check(const Ctx& ctx, const std::string& file) {
  cm::Report rep;
  rep.command = "algebra check";
  const cm::AlgebraSpec spec = cm::io::algebra_from_json(slurp(file, rep, "algebra"));
  rep.add_value("blocks", std::to_string(spec.num_blocks()));
  rep.add_value("block_sizes", ints_to_string(spec.block_sizes));
  rep.add_value("trace_weights", doubles_to_string(spec.trace_weights));
  double unit_trace = 0.0;
  for (int s = 0; s < spec.num_blocks(); ++s)
    unit_trace += spec.weight(s) * spec.block_size(s);
  rep.add_residual("unit_trace_defect", std::abs(unit_trace - 1.0));
  rep.add_check("unit_trace", std::abs(unit_trace - 1.0) <= ctx.tol);
  return finish(ctx, std::move(rep));
}

int cmd_module_dim(const Ctx& ctx, const std::string& file) {
  cm::Report rep;
  rep.command = "module dim";
  const cm::ModuleSpec m = load_module_doc(file, rep);
  rep.add_value("ambient_rank", std::to_string(m.ambient_rank));
  rep.add_value("rank_vector", ints_to_string(cm::rank_vector(m)));
  rep.add_value("center_valued_dimension", center_to_string(cm::center_valued_dimension(m)));
  rep.add_value("scalar_dimension", cm::scalar_dimension(m));
  return finish(ctx, std::move(rep));
}

int cmd_module_isomorphic(const Ctx& ctx, const std::string& file1,
                          const std::string& file2, const std::string& out) {
  cm::Report rep;
  rep.command = "module isomorphic";
  const cm::ModuleSpec m = load_module_doc(file1, rep, "first");
  const cm::ModuleSpec n = load_module_doc(file2, rep, "second");
  const bool iso = cm::is_isomorphic(m, n);
  rep.add_value("rank_vector_first", ints_to_string(cm::rank_vector(m)));
  rep.add_value("rank_vector_second", ints_to_string(cm::rank_vector(n)));
  rep.add_value("isomorphic", iso ? "true" : "false");
  if (iso) {
    const cm::OperatorMatrix v = cm::build_unitary_isomorphism(m, n);
    const double r1 = (v * v.adjoint() - m.projection).norm();
    const double r2 = (v.adjoint() * v - n.projection).norm();
    rep.add_residual("v_vdag_vs_first", r1);
    rep.add_residual("vdag_v_vs_second", r2);
    rep.add_check("unitary_certificate", r1 <= ctx.tol && r2 <= ctx.tol);
    if (!out.empty()) cm::io::save_operator(out, m.algebra, v);
  }
  return finish(ctx, std::move(rep));
}

int cmd_module_decompose(const Ctx& ctx, const std::string& file,
                         const std::string& out_prefix) {
  cm::Report rep;
  rep.command = "module decompose";
  const cm::ModuleSpec m = load_module_doc(file, rep);
  const cm::CanonicalDecomposition dec = cm::canonical_decomposition(m);
  const int k = static_cast<int>(dec.projections.size());
  rep.add_value("summands", std::to_string(k));
  for (int i = 0; i < k; ++i)
    rep.add_value("summand_" + std::to_string(i) + "_ranks",
                  ints_to_string(cm::block_ranks(dec.projections[static_cast<size_t>(i)])));
  const double r1 = (dec.to_standard * dec.to_standard.adjoint() - m.projection).norm();
  const double r2 =
      (dec.to_standard.adjoint() * dec.to_standard - dec.standard.projection).norm();
  rep.add_residual("u_udag_vs_module", r1);
  rep.add_residual("udag_u_vs_standard", r2);
  rep.add_check("unitary_to_standard", r1 <= ctx.tol && r2 <= ctx.tol);
  if (!out_prefix.empty()) {
    cm::io::save_module(out_prefix + "_standard.json", dec.standard);
    cm::io::save_operator(out_prefix + "_unitary.json", m.algebra, dec.to_standard);
  }
  return finish(ctx, std::move(rep));
}

int cmd_frame_analyze(const Ctx& ctx, const std::string& file) {
  cm::Report rep;
  rep.command = "frame analyze";
  const cm::FrameSet f = load_frame_doc(file, rep);
  rep.add_value("elements", std::to_string(f.elements.size()));
  rep.add_value("rank_vector", ints_to_string(cm::rank_vector(f.module)));
  const cm::FrameBounds b = cm::frame_bounds(f);
  rep.add_value("lower_bound", b.lower);
  rep.add_value("upper_bound", b.upper);
  const cm::OperatorMatrix s = cm::frame_operator(f);
  rep.add_residual("tight_defect", (s - f.module.projection).norm());
  rep.add_value("normalized_tight",
                cm::is_normalized_tight(f, ctx.tol) ? "true" : "false");
  rep.add_value("riesz_basis", cm::is_riesz_basis(f) ? "true" : "false");
  return finish(ctx, std::move(rep));
}

int cmd_frame_tighten(const Ctx& ctx, const std::string& file, const std::string& out) {
  cm::Report rep;
  rep.command = "frame tighten";
  const cm::FrameSet f = load_frame_doc(file, rep);
  const cm::FrameSet g = cm::canonical_tight(f);
  const double tight = (cm::frame_operator(g) - g.module.projection).norm();
  double recon = 0.0;
  for (const cm::ModuleVector& x : f.elements)
    recon = std::max(recon, (cm::reconstruct(g, x) - x).norm());
  rep.add_residual("tight_defect", tight);
  rep.add_residual("reconstruction", recon);
  rep.add_check("normalized_tight", tight <= ctx.tol);
  rep.add_check("reconstructs", recon <= ctx.tol);
  if (!out.empty()) cm::io::save_frame(out, g);
  return finish(ctx, std::move(rep));
}

int cmd_frame_retighten(const Ctx& ctx, const std::string& file, const std::string& out) {
  cm::Report rep;
  rep.command = "frame retighten";
  const cm::FrameSet f = load_frame_doc(file, rep);
  const cm::OperatorMatrix g = cm::retightening_form(f);
  std::vector<cm::ModuleVector> probes;
  for (int i = 0; i < f.module.ambient_rank; ++i) {
    std::vector<cm::AlgebraElement> entries;
    for (int j = 0; j < f.module.ambient_rank; ++j)
      entries.push_back(f.module.projection.entry(i, j));
    probes.emplace_back(std::move(entries));
  }
  const double residual = cm::retightening_residual(f, g, probes);
  rep.add_residual("tightness_identity", residual);
  rep.add_check("retightens", residual <= ctx.tol);
  if (!out.empty()) cm::io::save_operator(out, f.module.algebra, g);
  return finish(ctx, std::move(rep));
}

int cmd_frame_unitary(const Ctx& ctx, const std::string& file1, const std::string& file2,
                      const std::string& out) {
  cm::Report rep;
  rep.command = "frame unitary";
  const cm::FrameSet f = load_frame_doc(file1, rep, "first");
  const cm::FrameSet g = load_frame_doc(file2, rep, "second");
  const cm::OperatorMatrix v = cm::unitary_from_matched_frames(f, g, ctx.tol);
  const double r1 = (v * v.adjoint() - f.module.projection).norm();
  const double r2 = (v.adjoint() * v - g.module.projection).norm();
  double carries = 0.0;
  for (size_t i = 0; i < f.elements.size(); ++i)
    carries = std::max(carries,
                       (cm::apply(f.elements[i], v) - g.elements[i]).norm());
  rep.add_residual("v_vdag_vs_first", r1);
  rep.add_residual("vdag_v_vs_second", r2);
  rep.add_residual("carries_elements", carries);
  rep.add_check("unitary", r1 <= ctx.tol && r2 <= ctx.tol);
  rep.add_check("matches_frames", carries <= ctx.tol);
  if (!out.empty()) cm::io::save_operator(out, f.module.algebra, v);
  return finish(ctx, std::move(rep));
}

int cmd_frame_riesz(const Ctx& ctx, const std::string& file) {
  cm::Report rep;
  rep.command = "frame riesz";
  const cm::FrameSet f = load_frame_doc(file, rep);
  rep.add_value("elements", std::to_string(f.elements.size()));
  rep.add_value("riesz_basis", cm::is_riesz_basis(f) ? "true" : "false");
  return finish(ctx, std::move(rep));
}

int cmd_frame_transfer(const Ctx& ctx, const std::string& file1, const std::string& file2,
                       const std::string& out_c, const std::string& out_d) {
  cm::Report rep;
  rep.command = "frame transfer";
  const cm::FrameSet x = load_frame_doc(file1, rep, "first");
  const cm::FrameSet y = load_frame_doc(file2, rep, "second");
  const cm::TransferMatrices tm = cm::transfer_matrices(x, y, ctx.tol);

  const cm::OperatorMatrix cd = tm.c * tm.d;
  const cm::OperatorMatrix dc = tm.d * tm.c;
  const double cd_res = (cd - cm::OperatorMatrix::diagonal(support_list(y))).norm();
  const double dc_res = (dc - cm::OperatorMatrix::diagonal(support_list(x))).norm();
  rep.add_residual("cd_vs_second_supports", cd_res);
  rep.add_residual("dc_vs_first_supports", dc_res);

  const cm::TransferMpReport mp = cm::verify_transfer_mp(tm.c, tm.d, ctx.tol);
  rep.add_residual("d_vs_pinv_c", mp.d_vs_pinv_c);
  rep.add_residual("c_vs_pinv_d", mp.c_vs_pinv_d);
  rep.add_residual("penrose_cdc", mp.penrose_cdc);
  rep.add_residual("penrose_dcd", mp.penrose_dcd);
  rep.add_residual("penrose_cd_selfadjoint", mp.penrose_cd_sa);
  rep.add_residual("penrose_dc_selfadjoint", mp.penrose_dc_sa);
  rep.add_check("products_diagonal", cd_res <= ctx.tol && dc_res <= ctx.tol);
  rep.add_check("pseudoinverse_pair", mp.pass);
  if (!out_c.empty()) cm::io::save_operator(out_c, x.module.algebra, tm.c);
  if (!out_d.empty()) cm::io::save_operator(out_d, x.module.algebra, tm.d);
  return finish(ctx, std::move(rep));
}

int cmd_matrix_pinv(const Ctx& ctx, const std::string& file, const std::string& out) {
  cm::Report rep;
  rep.command = "matrix pinv";
  cm::AlgebraSpec spec;
  const cm::OperatorMatrix a = load_operator_doc(file, rep, "operator", &spec);
  const cm::OperatorMatrix x = cm::moore_penrose_matrix(a);
  const double r1 = (a * x * a - a).norm();
  const double r2 = (x * a * x - x).norm();
  const cm::OperatorMatrix ax = a * x;
  const cm::OperatorMatrix xa = x * a;
  const double r3 = (ax.adjoint() - ax).norm();
  const double r4 = (xa.adjoint() - xa).norm();
  rep.add_residual("axa_vs_a", r1);
  rep.add_residual("xax_vs_x", r2);
  rep.add_residual("ax_selfadjoint", r3);
  rep.add_residual("xa_selfadjoint", r4);
  rep.add_check("penrose_identities",
                r1 <= ctx.tol && r2 <= ctx.tol && r3 <= ctx.tol && r4 <= ctx.tol);
  if (!out.empty()) cm::io::save_operator(out, spec, x);
  return finish(ctx, std::move(rep));
}

int cmd_phi_scalarize(const Ctx& ctx, const std::string& file) {
  cm::Report rep;
  rep.command = "phi scalarize";
  const cm::ModuleSpec m = load_module_doc(file, rep);
  const cm::HilbertianModel h = cm::scalarize(m);
  rep.add_value("complex_dimension", std::to_string(h.complex_dimension));
  rep.add_value("spanning_rank", std::to_string(cm::dense::rank(h.spanning_gram)));
  rep.add_check("spanning_rank_matches",
                cm::dense::rank(h.spanning_gram) == h.complex_dimension);

  // The recorded basis must be orthogonal with squared lengths w_s.
  Eigen::MatrixXcd expected =
      Eigen::MatrixXcd::Zero(h.complex_dimension, h.complex_dimension);
  int pos = 0;
  for (int s = 0; s < m.algebra.num_blocks(); ++s) {
    const int len = m.algebra.block_size(s) *
                    cm::rank_vector(m)[static_cast<size_t>(s)];
    for (int i = 0; i < len; ++i, ++pos) expected(pos, pos) = m.algebra.weight(s);
  }
  const double gram_dev = cm::dense::op_norm(h.basis_gram - expected);
  rep.add_residual("basis_gram_vs_weights", gram_dev);
  rep.add_check("basis_orthogonal", gram_dev <= ctx.tol);
  return finish(ctx, std::move(rep));
}

int cmd_phi_link(const Ctx& ctx, const std::string& module_file,
                 const std::string& form1_file, const std::string& form2_file,
                 const std::string& out) {
  cm::Report rep;
  rep.command = "phi link";
  const cm::ModuleSpec m = load_module_doc(module_file, rep);
  cm::InnerProductForm g1{load_operator_doc(form1_file, rep, "first_form", nullptr)};
  cm::InnerProductForm g2{load_operator_doc(form2_file, rep, "second_form", nullptr)};
  const cm::OperatorMatrix t = cm::link_inner_products(m, g1, g2);
  const double linking = cm::linking_residual(m, t, g1, g2);
  const double sa = (t - t.adjoint()).norm();
  const double compressed = (t - m.projection * t * m.projection).norm();
  rep.add_residual("t_g2_t_vs_g1", linking);
  rep.add_residual("t_selfadjoint", sa);
  rep.add_residual("t_compressed", compressed);
  rep.add_check("links_forms", linking <= ctx.tol);
  rep.add_check("positive_operator", sa <= ctx.tol && compressed <= ctx.tol);
  if (!out.empty()) cm::io::save_operator(out, m.algebra, t);
  return finish(ctx, std::move(rep));
}

int cmd_phi_commutant(const Ctx& ctx, const std::string& file) {
  cm::Report rep;
  rep.command = "phi commutant";
  const cm::ModuleSpec m = load_module_doc(file, rep);
  const cm::CommutantReport cr = cm::commutant_check(m);
  rep.add_value("block_commutant_dims", ints_to_string(cr.block_commutant_dims));
  rep.add_value("block_bicommutant_dims", ints_to_string(cr.block_bicommutant_dims));
  rep.add_value("commutant_dim", std::to_string(cr.commutant_dim));
  rep.add_value("expected_commutant_dim", std::to_string(cr.expected_commutant_dim));
  rep.add_value("bicommutant_dim", std::to_string(cr.bicommutant_dim));
  rep.add_value("expected_bicommutant_dim", std::to_string(cr.expected_bicommutant_dim));
  rep.add_check("commutant_matches", cr.commutant_dim == cr.expected_commutant_dim);
  rep.add_check("bicommutant_matches",
                cr.bicommutant_dim == cr.expected_bicommutant_dim);
  return finish(ctx, std::move(rep));
}

int cmd_phi_invariance(const Ctx& ctx, const std::string& file, int trials,
                       std::uint64_t seed) {
  cm::Report rep;
  rep.command = "phi invariance";
  const cm::ModuleSpec m = load_module_doc(file, rep);
  const cm::InvarianceReport ir = cm::embedding_invariance(m, trials, seed, ctx.tol);
  rep.add_value("trials", std::to_string(ir.trials));
  rep.add_residual("max_scalar_deviation", ir.max_scalar_deviation);
  rep.add_residual("max_center_deviation", ir.max_center_deviation);
  rep.add_check("dimension_invariant", ir.pass);
  return finish(ctx, std::move(rep));
}

int cmd_complex_validate(const Ctx& ctx, const std::string& file) {
  cm::Report rep;
  rep.command = "complex validate";
  const cm::ChainComplex c = load_complex_doc(file, rep);
  rep.add_value("modules", std::to_string(c.modules.size()));
  for (int p = 0; p <= c.length(); ++p)
    rep.add_value("rank_vector_" + std::to_string(p),
                  ints_to_string(cm::rank_vector(c.modules[static_cast<size_t>(p)])));
  return finish(ctx, std::move(rep));
}

int cmd_complex_betti(const Ctx& ctx, const std::string& file, int degree) {
  cm::Report rep;
  rep.command = "complex betti";
  const cm::ChainComplex c = load_complex_doc(file, rep);
  if (degree >= 0 && degree > c.length())
    throw cm::InputError("betti: degree out of range");
  const int lo = degree >= 0 ? degree : 0;
  const int hi = degree >= 0 ? degree : c.length();
  for (int p = lo; p <= hi; ++p) {
    const cm::BettiNumber b = cm::l2_betti(c, p);
    rep.add_value("betti_" + std::to_string(p) + "_center", center_to_string(b.center));
    rep.add_value("betti_" + std::to_string(p) + "_scalar", b.scalar);
  }
  const cm::EulerCharacteristic chi = cm::euler_characteristic(c);
  rep.add_value("euler_from_dimensions", chi.from_dimensions);
  rep.add_value("euler_from_betti", chi.from_betti);
  rep.add_residual("euler_agreement",
                   std::abs(chi.from_dimensions - chi.from_betti));
  rep.add_check("euler_consistent",
                std::abs(chi.from_dimensions - chi.from_betti) <= ctx.tol);
  return finish(ctx, std::move(rep));
}

int cmd_complex_density(const Ctx& ctx, const std::string& file, int degree) {
  cm::Report rep;
  rep.command = "complex density";
  const cm::ChainComplex c = load_complex_doc(file, rep);
  if (degree < 0 || degree > c.length())
    throw cm::InputError("density: degree out of range");
  const std::vector<cm::DensityPoint> steps = cm::spectral_density(c, degree);
  rep.add_value("degree", std::to_string(degree));
  rep.add_value("steps", std::to_string(steps.size()));
  for (size_t i = 0; i < steps.size(); ++i) {
    const std::string tag = std::to_string(i);
    rep.add_value("lambda_" + tag, steps[i].lambda);
    rep.add_value("mass_" + tag, steps[i].mass);
    rep.add_value("cumulative_" + tag, steps[i].cumulative);
  }
  return finish(ctx, std::move(rep));
}

int cmd_complex_ns(const Ctx& ctx, const std::string& file, int degree) {
  cm::Report rep;
  rep.command = "complex ns";
  const cm::ChainComplex c = load_complex_doc(file, rep);
  if (degree < 0 || degree > c.length())
    throw cm::InputError("ns: degree out of range");
  const cm::NovikovShubin ns = cm::novikov_shubin(c, degree);
  rep.add_value("degree", std::to_string(degree));
  rep.add_value("decay_exponent", ns.infinite_exponent ? "infinite" : "finite");
  rep.add_value("spectral_gap", ns.spectral_gap);
  return finish(ctx, std::move(rep));
}

int cmd_operator_fkdet(const Ctx& ctx, const std::string& module_file,
                       const std::string& operator_file) {
  cm::Report rep;
  rep.command = "operator fkdet";
  const cm::ModuleSpec m = load_module_doc(module_file, rep);
  const cm::OperatorMatrix t = load_operator_doc(operator_file, rep, "operator", nullptr);
  rep.add_value("determinant", cm::fk_determinant(m, t, ctx.tol));
  return finish(ctx, std::move(rep));
}

int cmd_corpus_generate(const Ctx& ctx, const std::string& out_dir,
                        const cm::corpus::CorpusConfig& cfg) {
  cm::Report rep;
  rep.command = "corpus generate";
  const std::vector<cm::corpus::CorpusFile> files = cm::corpus::generate(cfg, out_dir);
  rep.add_value("seed", std::to_string(cfg.seed));
  rep.add_value("files", std::to_string(files.size()));
  rep.add_value("manifest_digest",
                cm::io::digest_hex(cm::io::read_text_file(
                    (std::filesystem::path(out_dir) / "manifest.json").string())));
  return finish(ctx, std::move(rep));
}

}  // namespace

int main(int argc, char** argv) {
  Ctx ctx;
  ctx.start = std::chrono::steady_clock::now();
  std::function<int()> run;

  CLI::App app{"Finite-dimensional Hilbert module calculator"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", ctx.format, "Output format")
      ->check(CLI::IsMember({"table", "machine"}));
  app.add_option("--tol", ctx.tol, "Check tolerance");
  app.add_flag("--timing", ctx.timing, "Include elapsed time in the report");

  // algebra
  auto* algebra = app.add_subcommand("algebra", "Algebra documents");
  algebra->require_subcommand(1);
  {
    auto* check = algebra->add_subcommand("check", "Validate an algebra document");
    auto file = std::make_shared<std::string>();
    check->add_option("file", *file, "Algebra document")->required();
    check->callback([&, file] { run = [&, file] { return cmd_algebra_check(ctx, *file); }; });
  }

  // module
  auto* module = app.add_subcommand("module", "Projective modules");
  module->require_subcommand(1);
  {
    auto* dim = module->add_subcommand("dim", "Dimension invariants");
    auto file = std::make_shared<std::string>();
    dim->add_option("file", *file, "Module document")->required();
    dim->callback([&, file] { run = [&, file] { return cmd_module_dim(ctx, *file); }; });
  }
  {
    auto* iso = module->add_subcommand("isomorphic", "Decide unitary isomorphism");
    auto f1 = std::make_shared<std::string>();
    auto f2 = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    iso->add_option("first", *f1, "Module document")->required();
    iso->add_option("second", *f2, "Module document")->required();
    iso->add_option("--out", *out, "Write the unitary certificate here");
    iso->callback([&, f1, f2, out] {
      run = [&, f1, f2, out] { return cmd_module_isomorphic(ctx, *f1, *f2, *out); };
    });
  }
  {
    auto* dec = module->add_subcommand("decompose", "Canonical diagonal form");
    auto file = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    dec->add_option("file", *file, "Module document")->required();
    dec->add_option("--out", *out, "Prefix for the standard module and unitary");
    dec->callback([&, file, out] {
      run = [&, file, out] { return cmd_module_decompose(ctx, *file, *out); };
    });
  }

  // frame
  auto* frame = app.add_subcommand("frame", "Module frames");
  frame->require_subcommand(1);
  {
    auto* an = frame->add_subcommand("analyze", "Bounds and classification");
    auto file = std::make_shared<std::string>();
    an->add_option("file", *file, "Frame document")->required();
    an->callback([&, file] { run = [&, file] { return cmd_frame_analyze(ctx, *file); }; });
  }
  {
    auto* ti = frame->add_subcommand("tighten", "Canonical tight frame");
    auto file = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    ti->add_option("file", *file, "Frame document")->required();
    ti->add_option("--out", *out, "Write the tight frame here");
    ti->callback([&, file, out] {
      run = [&, file, out] { return cmd_frame_tighten(ctx, *file, *out); };
    });
  }
  {
    auto* re = frame->add_subcommand("retighten", "Inner product making the frame tight");
    auto file = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    re->add_option("file", *file, "Frame document")->required();
    re->add_option("--out", *out, "Write the form here");
    re->callback([&, file, out] {
      run = [&, file, out] { return cmd_frame_retighten(ctx, *file, *out); };
    });
  }
  {
    auto* un = frame->add_subcommand("unitary", "Unitary matching two tight frames");
    auto f1 = std::make_shared<std::string>();
    auto f2 = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    un->add_option("first", *f1, "Frame document")->required();
    un->add_option("second", *f2, "Frame document")->required();
    un->add_option("--out", *out, "Write the unitary here");
    un->callback([&, f1, f2, out] {
      run = [&, f1, f2, out] { return cmd_frame_unitary(ctx, *f1, *f2, *out); };
    });
  }
  {
    auto* ri = frame->add_subcommand("riesz", "Riesz basis test");
    auto file = std::make_shared<std::string>();
    ri->add_option("file", *file, "Frame document")->required();
    ri->callback([&, file] { run = [&, file] { return cmd_frame_riesz(ctx, *file); }; });
  }
  {
    auto* tr = frame->add_subcommand("transfer", "Coefficient matrices between Riesz bases");
    auto f1 = std::make_shared<std::string>();
    auto f2 = std::make_shared<std::string>();
    auto out_c = std::make_shared<std::string>();
    auto out_d = std::make_shared<std::string>();
    tr->add_option("first", *f1, "Frame document")->required();
    tr->add_option("second", *f2, "Frame document")->required();
    tr->add_option("--out-c", *out_c, "Write C here");
    tr->add_option("--out-d", *out_d, "Write D here");
    tr->callback([&, f1, f2, out_c, out_d] {
      run = [&, f1, f2, out_c, out_d] {
        return cmd_frame_transfer(ctx, *f1, *f2, *out_c, *out_d);
      };
    });
  }

  // matrix
  auto* matrix = app.add_subcommand("matrix", "Operator matrices");
  matrix->require_subcommand(1);
  {
    auto* pv = matrix->add_subcommand("pinv", "Moore-Penrose inverse");
    auto file = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    pv->add_option("file", *file, "Operator document")->required();
    pv->add_option("--out", *out, "Write the pseudoinverse here");
    pv->callback([&, file, out] {
      run = [&, file, out] { return cmd_matrix_pinv(ctx, *file, *out); };
    });
  }

  // phi
  auto* phi = app.add_subcommand("phi", "Scalarization and equivalence checks");
  phi->require_subcommand(1);
  {
    auto* sc = phi->add_subcommand("scalarize", "Complex form of the module");
    auto file = std::make_shared<std::string>();
    sc->add_option("file", *file, "Module document")->required();
    sc->callback([&, file] { run = [&, file] { return cmd_phi_scalarize(ctx, *file); }; });
  }
  {
    auto* ln = phi->add_subcommand("link", "Operator linking two inner products");
    auto mf = std::make_shared<std::string>();
    auto g1 = std::make_shared<std::string>();
    auto g2 = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    ln->add_option("module", *mf, "Module document")->required();
    ln->add_option("first", *g1, "Form document")->required();
    ln->add_option("second", *g2, "Form document")->required();
    ln->add_option("--out", *out, "Write the linking operator here");
    ln->callback([&, mf, g1, g2, out] {
      run = [&, mf, g1, g2, out] { return cmd_phi_link(ctx, *mf, *g1, *g2, *out); };
    });
  }
  {
    auto* co = phi->add_subcommand("commutant", "Commutant dimension count");
    auto file = std::make_shared<std::string>();
    co->add_option("file", *file, "Module document")->required();
    co->callback([&, file] { run = [&, file] { return cmd_phi_commutant(ctx, *file); }; });
  }
  {
    auto* in = phi->add_subcommand("invariance", "Dimension under re-embedding");
    auto file = std::make_shared<std::string>();
    auto trials = std::make_shared<int>(20);
    auto seed = std::make_shared<std::uint64_t>(1);
    in->add_option("file", *file, "Module document")->required();
    in->add_option("--trials", *trials, "Number of random embeddings");
    in->add_option("--seed", *seed, "Random seed");
    in->callback([&, file, trials, seed] {
      run = [&, file, trials, seed] {
        return cmd_phi_invariance(ctx, *file, *trials, *seed);
      };
    });
  }

  // complex
  auto* cx = app.add_subcommand("complex", "Chain complexes");
  cx->require_subcommand(1);
  {
    auto* va = cx->add_subcommand("validate", "Structural checks");
    auto file = std::make_shared<std::string>();
    va->add_option("file", *file, "Complex document")->required();
    va->callback([&, file] { run = [&, file] { return cmd_complex_validate(ctx, *file); }; });
  }
  {
    auto* be = cx->add_subcommand("betti", "Kernel dimensions of the Laplacians");
    auto file = std::make_shared<std::string>();
    auto degree = std::make_shared<int>(-1);
    be->add_option("file", *file, "Complex document")->required();
    be->add_option("--degree", *degree, "Single degree (default: all)");
    be->callback([&, file, degree] {
      run = [&, file, degree] { return cmd_complex_betti(ctx, *file, *degree); };
    });
  }
  {
    auto* de = cx->add_subcommand("density", "Spectral distribution steps");
    auto file = std::make_shared<std::string>();
    auto degree = std::make_shared<int>(-1);
    de->add_option("file", *file, "Complex document")->required();
    de->add_option("--degree", *degree, "Degree")->required();
    de->callback([&, file, degree] {
      run = [&, file, degree] { return cmd_complex_density(ctx, *file, *degree); };
    });
  }
  {
    auto* ns = cx->add_subcommand("ns", "Spectral decay near zero");
    auto file = std::make_shared<std::string>();
    auto degree = std::make_shared<int>(-1);
    ns->add_option("file", *file, "Complex document")->required();
    ns->add_option("--degree", *degree, "Degree")->required();
    ns->callback([&, file, degree] {
      run = [&, file, degree] { return cmd_complex_ns(ctx, *file, *degree); };
    });
  }

  // operator
  auto* op = app.add_subcommand("operator", "Operators on modules");
  op->require_subcommand(1);
  {
    auto* fk = op->add_subcommand("fkdet", "Trace-weighted determinant");
    auto mf = std::make_shared<std::string>();
    auto tf = std::make_shared<std::string>();
    fk->add_option("module", *mf, "Module document")->required();
    fk->add_option("operator", *tf, "Operator document")->required();
    fk->callback([&, mf, tf] {
      run = [&, mf, tf] { return cmd_operator_fkdet(ctx, *mf, *tf); };
    });
  }

  // corpus
  auto* corpus = app.add_subcommand("corpus", "Deterministic document corpus");
  corpus->require_subcommand(1);
  {
    auto* ge = corpus->add_subcommand("generate", "Write a corpus directory");
    auto out = std::make_shared<std::string>();
    auto cfg = std::make_shared<cm::corpus::CorpusConfig>();
    ge->add_option("--out", *out, "Output directory")->required();
    ge->add_option("--seed", cfg->seed, "Random seed");
    ge->add_option("--algebras", cfg->algebra_count, "Algebra count");
    ge->add_option("--modules", cfg->module_count, "Module count");
    ge->add_option("--frames", cfg->frame_count, "Frame count");
    ge->add_option("--riesz", cfg->riesz_pair_count, "Riesz pair count");
    ge->add_option("--complexes", cfg->complex_count, "Complex count");
    ge->callback([&, out, cfg] {
      run = [&, out, cfg] { return cmd_corpus_generate(ctx, *out, *cfg); };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return run ? run() : 2;
  } catch (const cm::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cm::ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cm::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const cm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

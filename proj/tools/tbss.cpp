// tbss: command-line front end for the tensor blind source separation library.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure. Errors are also
// written to stderr as one JSON object {"error": kind, "message": text}.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "tbss/cumulants.hpp"
#include "tbss/ica.hpp"
#include "tbss/io.hpp"
#include "tbss/parafac.hpp"
#include "tbss/rank1.hpp"
#include "tbss/rankref.hpp"
#include "tbss/sylvester.hpp"
#include "tbss/synth.hpp"

namespace {

using tbss::io::Json;

struct Globals {
  std::uint64_t seed = 0;
  bool verbose = false;
  int indent = 2;
};

void log(const Globals& g, const std::string& msg) {
  if (g.verbose) std::cerr << "tbss: " << msg << "\n";
}

void emit(const Globals& g, const std::string& out, const Json& j) {
  if (out.empty() || out == "-") std::cout << j.dump(g.indent) << "\n";
  else tbss::io::write_json_file(out, j, g.indent);
}

Eigen::MatrixXd load_samples(const std::string& path) {
  if (path == "-") return tbss::io::read_csv(std::cin);
  return tbss::io::read_csv_file(path);
}

Json load_json(const std::string& path) {
  if (path == "-") {
    try {
      return Json::parse(std::cin);
    } catch (const Json::parse_error& e) {
      throw std::invalid_argument(std::string("json: cannot parse stdin: ") + e.what());
    }
  }
  return tbss::io::read_json_file(path);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

// ---- cumulants ------------------------------------------------------------

struct CumulantsArgs {
  std::string in, out;
  int order = 4;
  bool moments = false, serial = false;
  int workers = 0;
};

void run_cumulants(const Globals& g, const CumulantsArgs& a) {
  const Eigen::MatrixXd z = load_samples(a.in);
  log(g, "read " + std::to_string(z.rows()) + " samples of " + std::to_string(z.cols()) + " variables");
  const tbss::EstimatorOptions est{.workers = a.workers, .serial = a.serial};
  const tbss::SymTensor t = a.moments ? tbss::moment_tensor(z, a.order, est) : tbss::cumulant_tensor(z, a.order, est);
  Json j = tbss::io::sym_tensor_to_json(t);
  j["kind"] = a.moments ? "moment" : "cumulant";
  j["nsamples"] = z.rows();
  j["offdiag_ratio"] = tbss::offdiag_ratio(t);
  emit(g, a.out, j);
}

// ---- ica ------------------------------------------------------------------

struct IcaArgs {
  std::string in, out, strategy = "cyclic", update = "tensor";
  int order = 4, alpha = 2, max_sweeps = 0, sources = 0;
  bool detect = false;
};

void run_ica(const Globals& g, const IcaArgs& a) {
  const Eigen::MatrixXd z = load_samples(a.in);
  tbss::ICAOptions opt;
  opt.strategy = a.strategy == "greedy" ? tbss::SweepStrategy::kGreedy : tbss::SweepStrategy::kCyclic;
  opt.update = a.update == "data" ? tbss::UpdateStrategy::kData : tbss::UpdateStrategy::kTensor;
  opt.max_sweeps = a.max_sweeps;
  opt.detect = a.detect;
  if (a.sources > 0) opt.sources = a.sources;
  const auto r = tbss::ica(z, {.alpha = a.alpha, .order = a.order}, opt);
  log(g, std::to_string(r.result.rotations) + " rotations, stationarity " + std::to_string(r.stationarity));
  Json j;
  j["order"] = a.order;
  j["alpha"] = a.alpha;
  j["strategy"] = a.strategy;
  j["update"] = a.update;
  j["sources"] = r.whitener.source_count;
  j["Q"] = tbss::io::matrix_to_json(r.result.Q);
  j["whitener"] = tbss::io::matrix_to_json(r.whitener.transform);
  j["separator"] = tbss::io::matrix_to_json(r.separator);
  j["contrast_trace"] = r.result.trace;
  j["stationarity_residual"] = r.stationarity;
  j["sweeps"] = r.result.sweeps;
  j["rotations"] = r.result.rotations;
  j["converged"] = r.result.converged;
  j["low_confidence"] = r.low_confidence;
  j["confidence_floor"] = r.confidence_floor;
  j["Z"] = tbss::io::sym_tensor_to_json(r.result.Z);
  emit(g, a.out, j);
}

// ---- parafac --------------------------------------------------------------

struct ParafacArgs {
  std::string in, out, init = "svd";
  int rank = 1, max_iters = 500;
  double tol = 1e-10;
  bool symmetric = false;
};

void run_parafac(const Globals& g, const ParafacArgs& a) {
  const tbss::DenseTensor t = tbss::io::tensor_from_json(load_json(a.in));
  tbss::ALSConfig cfg;
  cfg.rank = a.rank;
  cfg.max_iters = a.max_iters;
  cfg.rel_tol = a.tol;
  cfg.init = a.init == "random" ? tbss::ALSInit::kRandom : tbss::ALSInit::kSvd;
  cfg.seed = g.seed;
  cfg.symmetric = a.symmetric;
  const auto r = tbss::als(t, cfg);
  for (const auto& w : r.warnings) std::cerr << "tbss: warning: " << w << "\n";
  Json j = tbss::io::kruskal_to_json(r.factors);
  j["fit"] = r.fit;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["rank_deficient"] = r.rank_deficient;
  j["warnings"] = r.warnings;
  emit(g, a.out, j);
}

// ---- sylvester ------------------------------------------------------------

struct SylvesterArgs {
  std::string in, out;
};

void run_sylvester(const Globals& g, const SylvesterArgs& a) {
  const auto q = tbss::io::quantic_from_json(load_json(a.in));
  const auto w = tbss::cand_binary(q);
  Json j = tbss::io::decomposition_to_json(w);
  j["degree"] = q.degree();
  emit(g, a.out, j);
}

// ---- rank1 ----------------------------------------------------------------

struct Rank1Args {
  std::string in, out, init = "hosvd";
  int restarts = 5, max_iters = 500;
  double tol = 1e-10;
};

void run_rank1(const Globals& g, const Rank1Args& a) {
  const tbss::SymTensor c = tbss::io::sym_tensor_from_json(load_json(a.in));
  tbss::Rank1Config cfg;
  cfg.init = a.init == "random" ? tbss::Rank1Init::kRandom : tbss::Rank1Init::kHosvd;
  cfg.restarts = a.restarts;
  cfg.max_iters = a.max_iters;
  cfg.tol = a.tol;
  cfg.seed = g.seed;
  const auto s = tbss::best_rank1(c, cfg);
  const auto om = tbss::omega_criteria(c, s.best.w, s.best.sigma);
  Json j;
  j["w"] = tbss::io::vector_to_json(s.best.w);
  j["sigma"] = s.best.sigma;
  j["iterations"] = s.best.iterations;
  j["converged"] = s.best.converged;
  j["omega0"] = om.omega0;
  j["omega_d_minus_1"] = om.omega_dm1;
  j["omega_d"] = om.omega_d;
  j["winner"] = s.winner;
  Json runs = Json::array();
  for (const auto& r : s.runs)
    runs.push_back({{"sigma", r.sigma}, {"iterations", r.iterations}, {"converged", r.converged}, {"shifted", r.shifted}});
  j["runs"] = runs;
  emit(g, a.out, j);
}

// ---- tables ---------------------------------------------------------------

struct TablesArgs {
  int d = 0, n = 0;
  bool orbits = false;
  std::string out;
};

void run_tables(const Globals& g, const TablesArgs& a) {
  if (a.orbits) {
    Json list = Json::array();
    for (auto group : {tbss::binary_cubic_orbits(), tbss::ternary_cubic_orbits()}) {
      for (const auto& o : group) {
        Json e;
        e["label"] = o.label;
        e["nvars"] = o.nvars;
        e["rank"] = o.rank;
        e["generic"] = o.generic;
        e["tensor"] = tbss::io::sym_tensor_to_json(tbss::orbit_representative(o.label, o.nvars));
        list.push_back(std::move(e));
      }
    }
    emit(g, a.out, list);
    return;
  }
  if (a.d || a.n) {
    if (!a.d || !a.n) throw std::invalid_argument("tables: give both --d and --n");
    Json j;
    j["d"] = a.d;
    j["n"] = a.n;
    try {
      j["generic_rank"] = tbss::generic_rank(a.d, a.n);
      j["manifold_dim"] = tbss::manifold_dim(a.d, a.n);
    } catch (const std::out_of_range& e) {
      throw std::invalid_argument(e.what());
    }
    j["reznick_bound"] = tbss::reznick_bound(a.n, a.d);
    emit(g, a.out, j);
    return;
  }
  std::cout << tbss::format_rank_tables();
}

// ---- gen / score ----------------------------------------------------------

struct GenArgs {
  int sources = 2, sensors = 0, nsamples = 1000;
  std::string dist = "uniform", mixing = "orthogonal", out, manifest;
  double noise = 0.0;
};

void run_gen(const Globals& g, const GenArgs& a) {
  tbss::GenConfig cfg;
  cfg.sources = a.sources;
  cfg.sensors = a.sensors;
  cfg.nsamples = a.nsamples;
  cfg.noise_variance = a.noise;
  cfg.seed = g.seed;
  cfg.mixing = tbss::parse_mixing(a.mixing);
  if (cfg.mixing == tbss::MixingKind::kGiven) throw std::invalid_argument("gen: --mixing given is library-only");
  cfg.dists.clear();
  for (const auto& d : split_commas(a.dist)) cfg.dists.push_back(tbss::parse_distribution(d));
  const auto data = tbss::generate(cfg);

  if (a.out.empty() || a.out == "-") tbss::io::write_csv(std::cout, data.samples);
  else tbss::io::write_csv_file(a.out, data.samples);

  if (!a.manifest.empty()) {
    Json m;
    m["rng"] = "tbss-rng v1";
    m["seed"] = g.seed;
    m["sources"] = cfg.sources;
    m["sensors"] = data.samples.cols();
    m["nsamples"] = cfg.nsamples;
    Json dists = Json::array();
    for (int i = 0; i < cfg.sources; ++i)
      dists.push_back(tbss::distribution_name(cfg.dists.size() == 1 ? cfg.dists[0] : cfg.dists[static_cast<std::size_t>(i)]));
    m["distributions"] = dists;
    m["mixing_kind"] = tbss::mixing_name(cfg.mixing);
    m["mixing"] = tbss::io::matrix_to_json(data.mixing);
    m["noise_variance"] = cfg.noise_variance;
    tbss::io::write_json_file(a.manifest, m, g.indent);
  }
}

struct ScoreArgs {
  std::string result, manifest, out;
};

void run_score(const Globals& g, const ScoreArgs& a) {
  const Json res = load_json(a.result);
  const Json man = tbss::io::read_json_file(a.manifest);
  if (!res.contains("separator")) throw std::invalid_argument("score: result has no 'separator'");
  if (!man.contains("mixing")) throw std::invalid_argument("score: manifest has no 'mixing'");
  const auto sc = tbss::score(tbss::io::matrix_from_json(res.at("separator")), tbss::io::matrix_from_json(man.at("mixing")));
  Json j;
  j["gain"] = tbss::io::matrix_to_json(sc.gain);
  j["dominance"] = tbss::io::vector_to_json(sc.dominance);
  j["assignment"] = sc.assignment;
  j["angle_error"] = tbss::io::vector_to_json(sc.angle);
  j["min_dominance"] = sc.min_dominance;
  j["mean_dominance"] = sc.mean_dominance;
  j["max_angle_error"] = sc.max_angle;
  emit(g, a.out, j);
}

int fail(const char* kind, const std::string& msg, int code) {
  Json e;
  e["error"] = kind;
  e["message"] = msg;
  std::cerr << e.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tensor tools for blind source separation: cumulants, ICA sweeps, PARAFAC, binary Waring "
               "decompositions, rank-1 approximation."};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Seed for every random draw")->capture_default_str();
  app.add_flag("--verbose", g.verbose, "Progress on stderr");
  app.add_option("--json-indent", g.indent, "JSON indentation; -1 for compact")->capture_default_str();

  CumulantsArgs cu;
  auto* c_cum = app.add_subcommand("cumulants", "Moment or cumulant tensor of CSV samples");
  c_cum->add_option("--in", cu.in, "Samples CSV ('-' for stdin)")->required();
  c_cum->add_option("--out", cu.out, "Output JSON (default stdout)");
  c_cum->add_option("--order", cu.order, "Order 1..4")->check(CLI::Range(1, 4))->capture_default_str();
  c_cum->add_flag("--moments", cu.moments, "Raw moments instead of cumulants");
  c_cum->add_flag("--serial", cu.serial, "Single-pass serial reduction");
  c_cum->add_option("--workers", cu.workers, "Sample chunks for the parallel reduction (0: all threads)");

  IcaArgs ic;
  auto* c_ica = app.add_subcommand("ica", "Standardize, estimate the cumulant tensor, maximize the contrast by sweeps");
  c_ica->add_option("--in", ic.in, "Samples CSV ('-' for stdin)")->required();
  c_ica->add_option("--out", ic.out, "Output JSON (default stdout)");
  c_ica->add_option("--order", ic.order, "Cumulant order")->check(CLI::IsMember({2, 3, 4}))->capture_default_str();
  c_ica->add_option("--alpha", ic.alpha, "Contrast exponent")->check(CLI::IsMember({1, 2}))->capture_default_str();
  c_ica->add_option("--strategy", ic.strategy, "Pair selection")->check(CLI::IsMember({"cyclic", "greedy"}))->capture_default_str();
  c_ica->add_option("--update", ic.update, "Rotate the tensor or the data")->check(CLI::IsMember({"tensor", "data"}))->capture_default_str();
  c_ica->add_option("--max-sweeps", ic.max_sweeps, "Sweep cap (greedy: rotation cap); 0 for the default");
  c_ica->add_option("--sources", ic.sources, "Number of sources to keep (<= sensors)");
  c_ica->add_flag("--detect", ic.detect, "Estimate the number of sources from the covariance spectrum");

  ParafacArgs pa;
  auto* c_par = app.add_subcommand("parafac", "Trilinear decomposition by alternating least squares");
  c_par->add_option("--in", pa.in, "Tensor JSON")->required();
  c_par->add_option("--out", pa.out, "Output JSON (default stdout)");
  c_par->add_option("--rank", pa.rank, "Number of rank-1 terms")->check(CLI::PositiveNumber)->required();
  c_par->add_option("--max-iters", pa.max_iters, "Iteration cap")->capture_default_str();
  c_par->add_option("--tol", pa.tol, "Relative fit-improvement stop")->capture_default_str();
  c_par->add_option("--init", pa.init, "Initialization")->check(CLI::IsMember({"svd", "random"}))->capture_default_str();
  c_par->add_flag("--symmetric", pa.symmetric, "Tie the three factors");

  SylvesterArgs sy;
  auto* c_syl = app.add_subcommand("sylvester", "Waring decomposition of a binary quantic");
  c_syl->add_option("--in", sy.in, "Quantic JSON {\"degree\", \"gamma\"} or a 2-variable poly JSON")->required();
  c_syl->add_option("--out", sy.out, "Output JSON (default stdout)");

  Rank1Args r1;
  auto* c_r1 = app.add_subcommand("rank1", "Best rank-1 approximation of a symmetric tensor");
  c_r1->add_option("--in", r1.in, "Tensor JSON (symmetric or dense symmetric)")->required();
  c_r1->add_option("--out", r1.out, "Output JSON (default stdout)");
  c_r1->add_option("--init", r1.init, "First start")->check(CLI::IsMember({"hosvd", "random"}))->capture_default_str();
  c_r1->add_option("--restarts", r1.restarts, "Extra random starts")->check(CLI::NonNegativeNumber)->capture_default_str();
  c_r1->add_option("--max-iters", r1.max_iters, "Iteration cap per start")->capture_default_str();
  c_r1->add_option("--tol", r1.tol, "Iterate displacement stop")->capture_default_str();

  TablesArgs ta;
  auto* c_tab = app.add_subcommand("tables", "Tabulated generic ranks and cubic orbit classes");
  c_tab->add_option("--d", ta.d, "Order for a single lookup");
  c_tab->add_option("--n", ta.n, "Dimension for a single lookup");
  c_tab->add_flag("--orbits", ta.orbits, "Emit orbit representatives as JSON");
  c_tab->add_option("--out", ta.out, "Output JSON for --orbits or lookups (default stdout)");

  GenArgs ge;
  auto* c_gen = app.add_subcommand("gen", "Seeded synthetic mixture y = A x + v");
  c_gen->add_option("--sources", ge.sources, "Number of sources")->check(CLI::PositiveNumber)->capture_default_str();
  c_gen->add_option("--sensors", ge.sensors, "Number of sensors (0: same as sources)");
  c_gen->add_option("--dist", ge.dist, "bpsk|uniform|gaussian, or a comma list per source")->capture_default_str();
  c_gen->add_option("--mixing", ge.mixing, "orthogonal|general|identity")->capture_default_str();
  c_gen->add_option("--noise", ge.noise, "Noise variance")->capture_default_str();
  c_gen->add_option("--nsamples", ge.nsamples, "Number of samples")->check(CLI::PositiveNumber)->capture_default_str();
  c_gen->add_option("--out", ge.out, "Samples CSV (default stdout)");
  c_gen->add_option("--manifest", ge.manifest, "Ground-truth manifest JSON");

  ScoreArgs sc;
  auto* c_sco = app.add_subcommand("score", "Separation quality of a separator against a manifest");
  c_sco->add_option("--result", sc.result, "ICA result JSON (reads 'separator')")->required();
  c_sco->add_option("--manifest", sc.manifest, "Manifest JSON from gen")->required();
  c_sco->add_option("--out", sc.out, "Output JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*c_cum) run_cumulants(g, cu);
    else if (*c_ica) run_ica(g, ic);
    else if (*c_par) run_parafac(g, pa);
    else if (*c_syl) run_sylvester(g, sy);
    else if (*c_r1) run_rank1(g, r1);
    else if (*c_tab) run_tables(g, ta);
    else if (*c_gen) run_gen(g, ge);
    else if (*c_sco) run_score(g, sc);
  } catch (const tbss::NumericalError& e) {
    return fail("numerical", e.what(), 2);
  } catch (const std::invalid_argument& e) {
    return fail("usage", e.what(), 1);
  } catch (const std::out_of_range& e) {
    return fail("usage", e.what(), 1);
  } catch (const std::exception& e) {
    return fail("numerical", e.what(), 2);
  }
  return 0;
}

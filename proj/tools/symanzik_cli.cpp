// Command-line front end: exact Symanzik polynomials, exchange-graph
// classification, perturbation sweeps, and the corpus property suite.
//
// Exit codes: 0 ok, 2 input error, 3 math failure (an exact identity was
// violated), 4 budget exceeded.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "symanzik/corpus.hpp"
#include "symanzik/exchange.hpp"
#include "symanzik/graph_io.hpp"
#include "symanzik/multigraph.hpp"
#include "symanzik/polynomials.hpp"
#include "symanzik/rational.hpp"
#include "symanzik/variation.hpp"
#include "symanzik/verify.hpp"

namespace fs = std::filesystem;
using namespace symanzik;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitMath = 3;
constexpr int kExitBudget = 4;

void write_file(const fs::path& path, const std::string& body) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
}

void write_json(const fs::path& path, const Json& j) { write_file(path, j.dump(2) + "\n"); }

/// "1e1..1e6:decade" -> 10, 100, ..., 1000000. Plain integers also accepted
/// for the two endpoints.
std::vector<Rat> parse_grid(const std::string& text) {
  auto dots = text.find("..");
  auto colon = text.find(':', dots == std::string::npos ? 0 : dots);
  if (dots == std::string::npos || colon == std::string::npos)
    throw std::invalid_argument("grid must look like 1e1..1e6:decade");
  std::string lo_s = text.substr(0, dots);
  std::string hi_s = text.substr(dots + 2, colon - dots - 2);
  std::string step = text.substr(colon + 1);
  if (step != "decade") throw std::invalid_argument("unsupported grid step: " + step);

  auto parse_point = [](const std::string& s) -> Rat {
    auto e = s.find('e');
    if (e == std::string::npos) return parse_rat(s);
    Rat base = parse_rat(s.substr(0, e));
    long exp = std::stol(s.substr(e + 1));
    Rat p(1);
    for (long i = 0; i < exp; ++i) p *= 10;
    return base * p;
  };
  Rat lo = parse_point(lo_s), hi = parse_point(hi_s);
  if (sgn(lo) <= 0 || hi < lo) throw std::invalid_argument("grid endpoints must satisfy 0 < lo <= hi");
  std::vector<Rat> grid;
  for (Rat t = lo; t <= hi; t *= 10) grid.push_back(t);
  return grid;
}

Json subset_json(const EdgeSubset& s) {
  Json a = Json::array();
  for (int e : s.ids()) a.push_back(e);
  return a;
}

Json partition_json(const VertexPartition& p) {
  Json a = Json::array();
  for (const auto& b : p.blocks()) a.push_back(b);
  return a;
}

struct CommonOpts {
  std::string input;
  std::string out = ".";
};

int run_symanzik(const CommonOpts& common, bool require_phi) {
  LoadedGraph lg = load_graph_file(common.input);
  const Multigraph& g = lg.graph;
  if (!g.is_connected()) throw std::invalid_argument("graph not connected");
  if (require_phi && !lg.momenta) throw std::invalid_argument("phi requested but the document has no momenta");

  std::vector<Rat> y = lg.y ? *lg.y : std::vector<Rat>(g.m(), Rat(1));
  for (const Rat& v : y)
    if (sgn(v) <= 0) throw std::invalid_argument("evaluation weights must be positive");

  Json rep;
  rep["input"] = fs::path(common.input).filename().string();
  rep["n"] = g.n();
  rep["m"] = g.m();
  rep["genus"] = genus(g);
  Json yj = Json::array();
  for (const Rat& v : y) yj.push_back(rat_str(v));
  rep["y"] = yj;

  SymanzikPolynomial psi = psi_enum(g);
  Rat psi_d = psi_det(g, y);
  Rat psi_e = psi.eval(y);
  rep["psi"] = polynomial_to_json(psi);
  rep["psi_eval"] = {{"enumeration", rat_str(psi_e)}, {"determinant", rat_str(psi_d)}, {"agree", psi_d == psi_e}};

  bool agree = (psi_d == psi_e);
  if (lg.momenta) {
    SymanzikPolynomial phi = phi_enum(g, *lg.momenta);
    Rat phi_d = phi_det(g, *lg.momenta, y);
    Rat phi_e = phi.eval(y);
    rep["phi"] = polynomial_to_json(phi);
    rep["phi_eval"] = {{"enumeration", rat_str(phi_e)}, {"determinant", rat_str(phi_d)}, {"agree", phi_d == phi_e}};
    Rat psi_val = psi_d;
    if (sgn(psi_val) != 0) rep["ratio"] = rat_str(phi_d / psi_val);
    agree = agree && (phi_d == phi_e);
  }

  write_json(fs::path(common.out) / "symanzik.json", rep);
  if (!agree) {
    std::cerr << "determinant and enumeration routes disagree\n";
    return kExitMath;
  }
  return kExitOk;
}

int run_exchange(const CommonOpts& common, long budget) {
  LoadedGraph lg = load_graph_file(common.input);
  const Multigraph& g = lg.graph;
  if (!g.is_connected()) throw std::invalid_argument("graph not connected");
  if (g.n() < 2) throw std::invalid_argument("exchange graph needs at least two vertices");

  ThmConnReport rep = verify_thm_conn(g, budget);
  Json j;
  j["input"] = fs::path(common.input).filename().string();
  j["within_budget"] = rep.within_budget;
  if (!rep.within_budget) {
    j["budget"] = budget;
    write_json(fs::path(common.out) / "exchange.json", j);
    std::cerr << "exchange graph exceeds the vertex budget\n";
    return kExitBudget;
  }
  j["vertices"] = rep.vertex_count;
  j["edges"] = rep.edge_count;
  j["components"] = rep.num_components;
  j["vacuous"] = rep.vacuous;
  j["theorem"] = {{"part1_connected", rep.part1_connected},
                  {"part1_cond_i", rep.part1_cond_i},
                  {"part1_cond_ii", rep.part1_cond_ii},
                  {"part1_ok", rep.part1_ok},
                  {"part2_ok", rep.part2_ok},
                  {"equivalences_ok", rep.equiv_ok},
                  {"pivot_blocks_ok", rep.pivot_blocks_ok},
                  {"first_mismatch", rep.first_mismatch}};
  Json comps = Json::array();
  for (size_t c = 0; c < rep.profiles.size(); ++c) {
    const ComponentProfile& p = rep.profiles[c];
    Json pj;
    pj["component"] = static_cast<int>(c);
    pj["g0"] = subset_json(p.g0);
    pj["saturated_blocks"] = partition_json(p.blocks);
    Json trees = Json::array();
    for (const auto& [t1, t2] : p.block_trees) trees.push_back({{"first", subset_json(t1)}, {"second", subset_json(t2)}});
    pj["block_trees"] = trees;
    comps.push_back(std::move(pj));
  }
  j["profiles"] = std::move(comps);
  write_json(fs::path(common.out) / "exchange.json", j);

  ExchangeGraph H = build_exchange_graph(g, budget);
  write_file(fs::path(common.out) / "exchange.dot", to_dot(H));
  return rep.all_ok() ? kExitOk : kExitMath;
}

int run_variation(const CommonOpts& common, std::uint64_t seed, const std::string& bound_s,
                  const std::string& grid_s, long triple_budget) {
  LoadedGraph lg = load_graph_file(common.input);
  const Multigraph& g = lg.graph;
  if (!lg.momenta) throw std::invalid_argument("variation requires momenta in the input document");
  VariationContext ctx = make_variation_context(g, *lg.momenta);

  PerturbationSpec spec;
  spec.bound = parse_rat(bound_s);
  if (sgn(spec.bound) <= 0) throw std::invalid_argument("bound must be positive");
  spec.grid = parse_grid(grid_s);
  spec.y0 = lg.y ? *lg.y : std::vector<Rat>(g.m(), Rat(1));

  Rng rng(seed);
  spec.A = lg.A ? *lg.A : random_perturbation(g.m(), spec.bound, rng);
  spec.validate(g);  // rejects a document-supplied A that exceeds the bound

  SweepReport sweep = boundedness_sweep(ctx, spec);

  bool identities_ok = true;
  Json idj = Json::array();
  for (const Rat& t : {spec.grid.front(), spec.grid.back()}) {
    WeightIdentityReport wi = weight_identities(ctx, spec, t);
    identities_ok = identities_ok && wi.all_ok();
    idj.push_back({{"t", rat_str(t)},
                   {"side1_sum", rat_str(wi.side1_sum)},
                   {"g2f1", rat_str(wi.g2f1)},
                   {"side1_ok", wi.side1_ok},
                   {"side2_sum", rat_str(wi.side2_sum)},
                   {"g1f2", rat_str(wi.g1f2)},
                   {"side2_ok", wi.side2_ok}});
  }

  Json j;
  j["input"] = fs::path(common.input).filename().string();
  j["seed"] = seed;
  j["bound"] = rat_str(spec.bound);
  Json aj = Json::array();
  for (int i = 0; i < spec.A.rows(); ++i) {
    Json row = Json::array();
    for (int k = 0; k < spec.A.cols(); ++k) row.push_back(rat_str(spec.A(i, k)));
    aj.push_back(std::move(row));
  }
  j["A"] = std::move(aj);
  j["sweep"] = sweep_to_json(sweep);
  j["identities"] = std::move(idj);

  bool balance_ok = true;
  try {
    TripleGraph G = build_triple_graph(ctx, triple_budget);
    Rat t = spec.grid.front();
    QBalanceReport qb = q_balance_check(ctx, G, &spec, &t);
    Json bj = Json::array();
    for (const auto& c : qb.components) {
      if (!c.special_free) continue;
      balance_ok = balance_ok && c.balanced;
      Json cj = {{"component", c.component},
                 {"q_side1", rat_str(c.q_side1)},
                 {"q_side2", rat_str(c.q_side2)},
                 {"balanced", c.balanced}};
      if (c.zeta_ratio_known) cj["zeta_over_q_spread_over_f1sq"] = rat_str(c.zeta_ratio_spread);
      bj.push_back(std::move(cj));
    }
    j["q_balance"] = std::move(bj);
  } catch (const BudgetExceeded& ex) {
    j["q_balance"] = {{"skipped", true}, {"reason", ex.what()}};
  }

  write_json(fs::path(common.out) / "variation.json", j);
  write_file(fs::path(common.out) / "variation.csv", sweep_to_csv(sweep));

  if (!identities_ok || !balance_ok) {
    std::cerr << "an exact identity failed\n";
    return kExitMath;
  }
  return kExitOk;  // per-t singularities are recorded in the report, not fatal
}

int run_verify(const std::string& out, const VerifyOptions& opt) {
  std::vector<Multigraph> corpus = generate_corpus(opt.corpus);
  PropertyLedger led;
  Rng rng(opt.seed);

  for (const Multigraph& g : corpus) {
    Rng per_graph = rng.fork();
    verify_multigraph_suite(g, led);
    verify_homology_suite(g, led, per_graph);
    verify_symanzik_suite(g, led, per_graph, opt.y_samples);
    verify_minkowski_suite(g, led, per_graph);
    verify_exchange_suite(g, led, opt.exchange_budget);
  }

  // Seeded section-3 instances over the triple-graph-sized corpus slice.
  {
    Rng inst_rng = rng.fork();
    std::vector<const Multigraph*> small;
    for (const Multigraph& g : corpus) {
      long t = static_cast<long>(spanning_trees(g).size());
      long f = static_cast<long>(spanning_2forests(g).size());
      if (t > 0 && f > 0 && f * f * t + t * t * f <= 20000) small.push_back(&g);
    }
    int made = 0;
    for (size_t i = 0; !small.empty() && made < opt.sec3_instances; ++i, ++made)
      verify_variation_instance(*small[i % small.size()], led, inst_rng, opt.triple_budget);
  }

  verify_matrix_suite(led, rng, opt.matrix_instances);

  Json j;
  j["seed"] = opt.seed;
  j["corpus_size"] = corpus.size();
  j["caps"] = {{"max_n", opt.corpus.max_n}, {"max_m", opt.corpus.max_m}};
  Json props = Json::array();
  for (const PropertyResult& r : led.results()) {
    props.push_back({{"property", r.name},
                     {"checked", r.checked},
                     {"failures", r.failures},
                     {"first_failure", r.first_failure}});
  }
  j["properties"] = std::move(props);
  j["all_ok"] = led.all_ok();
  write_json(fs::path(out) / "verify.json", j);

  for (const PropertyResult& r : led.results())
    std::cout << (r.failures == 0 ? "PASS " : "FAIL ") << r.name << " (" << r.checked << " checks)\n";
  return led.all_ok() ? kExitOk : kExitMath;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Symanzik polynomials, exchange graphs, and ratio variation"};
  app.require_subcommand(1);

  CommonOpts common;
  bool require_phi = false;
  long budget = 200000;
  long triple_budget = 60000;
  std::uint64_t seed = 0;
  std::string bound_s = "1";
  std::string grid_s = "1e1..1e6:decade";

  auto* sym = app.add_subcommand("symanzik", "Compute both Symanzik polynomials by both routes");
  sym->add_option("--input", common.input, "Graph document (JSON)")->required();
  sym->add_option("--out", common.out, "Output directory");
  sym->add_flag("--phi", require_phi, "Fail when the document lacks momenta");

  auto* exc = app.add_subcommand("exchange", "Classify the exchange graph and verify the classification");
  exc->add_option("--input", common.input, "Graph document (JSON)")->required();
  exc->add_option("--out", common.out, "Output directory");
  exc->add_option("--budget-vertices", budget, "Exchange-graph vertex cap");

  auto* var = app.add_subcommand("variation", "Perturbation sweep and section-3 identity checks");
  var->add_option("--input", common.input, "Graph document (JSON)")->required();
  var->add_option("--out", common.out, "Output directory");
  var->add_option("--seed", seed, "RNG seed (mandatory for reproducibility)")->required();
  var->add_option("--bound", bound_s, "Entrywise bound C for the perturbation");
  var->add_option("--grid", grid_s, "Scale grid, e.g. 1e1..1e6:decade");
  var->add_option("--budget-vertices", triple_budget, "Triple-graph vertex cap");

  VerifyOptions vopt;
  auto* ver = app.add_subcommand("verify", "Generate the corpus and run every property suite");
  ver->add_option("--out", common.out, "Output directory");
  ver->add_option("--seed", vopt.seed, "RNG seed");
  ver->add_option("--max-n", vopt.corpus.max_n, "Corpus vertex cap");
  ver->add_option("--max-m", vopt.corpus.max_m, "Corpus edge cap");
  ver->add_option("--budget-vertices", vopt.exchange_budget, "Exchange-graph vertex cap");
  ver->add_option("--y-samples", vopt.y_samples, "Random weight vectors per graph");
  ver->add_option("--sec3-instances", vopt.sec3_instances, "Seeded section-3 instances");
  ver->add_option("--matrix-instances", vopt.matrix_instances, "Random matrix-identity instances");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sym->parsed()) return run_symanzik(common, require_phi);
    if (exc->parsed()) return run_exchange(common, budget);
    if (var->parsed()) return run_variation(common, seed, bound_s, grid_s, triple_budget);
    if (ver->parsed()) {
      vopt.corpus.seed = vopt.seed;
      return run_verify(common.out, vopt);
    }
  } catch (const BudgetExceeded& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitBudget;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitInput;
  } catch (const std::logic_error& ex) {
    std::cerr << "internal identity failure: " << ex.what() << "\n";
    return kExitMath;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitMath;
  }
  return kExitOk;
}

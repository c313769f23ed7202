#include <CLI11.hpp>
#include <json.hpp>

#include "pk/catalogue.hpp"
#include "pk/lie.hpp"
#include "pk/toric.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace pk;
using Json = nlohmann::ordered_json;

namespace {

struct Options {
  std::string format = "text";
  std::uint64_t seed = 0;
  unsigned grid = 5;
  double tol = 1e-9;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mode_error("cannot open input file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const char* verdict_str(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    default: return "not-determined";
  }
}

const char* verdict_str(PoissonVerdict::Kind k) {
  switch (k) {
    case PoissonVerdict::Kind::True: return "holds";
    case PoissonVerdict::Kind::False: return "fails";
    default: return "not-determined";
  }
}

Json coords_json(const std::vector<Rat>& coords) {
  Json a = Json::array();
  for (const auto& c : coords) a.push_back(rational_to_string(c));
  return a;
}

Json multivector_json(const Multivector& m) {
  Json o = Json::object();
  for (const auto& [idx, c] : m.coeffs()) {
    std::ostringstream key;
    key << "[";
    for (std::size_t k = 0; k < idx.size(); ++k)
      key << (k ? "," : "") << idx[k] + 1;
    key << "]";
    o[key.str()] = c.to_string();
  }
  return o;
}

Json report_skeleton(const std::string& command, const std::string& input_text,
                     const Options& opt) {
  Json j;
  j["schema"] = "poisson-kit/1";
  j["command"] = command;
  j["digest"] = input_digest(input_text);
  j["seed"] = opt.seed;
  return j;
}

std::vector<Point> pick_grid(const DslInput& in, const ChartPtr& chart,
                             const Options& opt) {
  if (!in.grid.empty()) return in.grid;
  return rational_grid(chart, opt.grid, opt.seed);
}

// --- subcommands ---

int cmd_check(const std::string& path, const Options& opt) {
  std::string text = read_file(path);
  auto in = parse_dsl(text);
  if (!in.bivector) throw mode_error("check needs a bivector section");
  auto v = is_poisson(*in.bivector);
  bool pass = v.kind != PoissonVerdict::Kind::False &&
              v.sampled_residual <= opt.tol;
  if (opt.format == "json") {
    Json j = report_skeleton("check", text, opt);
    j["verdicts"]["jacobi"] = verdict_str(v.kind);
    j["verdicts"]["sampled_residual"] = v.sampled_residual;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "jacobi: " << verdict_str(v.kind);
    if (v.kind == PoissonVerdict::Kind::NotDetermined)
      std::cout << " (sampled residual " << v.sampled_residual << ")";
    std::cout << "\n";
  }
  return pass ? 0 : 1;
}

int cmd_classify(const std::string& path, const Options& opt) {
  std::string text = read_file(path);
  auto in = parse_dsl(text);
  if (!in.bivector) throw mode_error("classify needs a bivector section");
  if (!in.submanifold) throw mode_error("classify needs a submanifold section");
  SubmanifoldSpec spec{*in.submanifold};
  auto grid = pick_grid(in, in.submanifold->source, opt);
  auto rep = classify(spec, *in.bivector, grid);

  bool all_pd = true;
  for (bool pd : rep.pointwise_pd) all_pd = all_pd && pd;
  bool pass = all_pd && rep.pole_witnesses.empty();

  if (opt.format == "json") {
    Json j = report_skeleton("classify", text, opt);
    Json& v = j["verdicts"];
    v["samples"] = Json::array();
    for (const auto& p : rep.samples) v["samples"].push_back(coords_json(p.coords));
    v["pointwise_pd"] = rep.pointwise_pd;
    v["q_rank"] = rep.q_rank;
    v["coregular"] = verdict_str(rep.coregular);
    v["coregular_witness"] =
        rep.coregular_witness ? coords_json(rep.coregular_witness->coords) : Json();
    v["coisotropic_all"] = rep.coisotropic_all;
    v["poisson_submanifold_all"] = rep.poisson_submanifold_all;
    v["poisson_transversal_all"] = rep.poisson_transversal_all;
    v["split_certificate"] = rep.split_certificate;
    v["induced"] = rep.induced ? multivector_json(*rep.induced) : Json();
    v["pole_witnesses"] = Json::array();
    for (const auto& p : rep.pole_witnesses)
      v["pole_witnesses"].push_back(coords_json(p.coords));
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "samples: " << rep.samples.size() << "\n";
    std::cout << "pointwise Poisson-Dirac: " << (all_pd ? "all" : "not all") << "\n";
    std::cout << "coregular: " << verdict_str(rep.coregular);
    if (rep.coregular_witness) {
      std::cout << " (witness";
      for (const auto& c : rep.coregular_witness->coords)
        std::cout << " " << rational_to_string(c);
      std::cout << ")";
    }
    std::cout << "\n";
    std::cout << "split certificate: " << rep.split_certificate << "\n";
    if (rep.induced) {
      std::cout << "induced bivector:";
      if (rep.induced->coeffs().empty()) std::cout << " 0";
      for (const auto& [idx, c] : rep.induced->coeffs())
        std::cout << " [" << idx[0] + 1 << "," << idx[1] + 1 << "] "
                  << c.to_string();
      std::cout << "\n";
    }
    std::cout << "pole witnesses: " << rep.pole_witnesses.size() << "\n";
  }
  return pass ? 0 : 1;
}

int cmd_submersion(const std::string& path, const Options& opt) {
  std::string text = read_file(path);
  auto in = parse_dsl(text);
  if (!in.bivector) throw mode_error("submersion needs a bivector section");
  if (!in.submersion) throw mode_error("submersion needs a submersion section");
  if (!in.base_bivector) throw mode_error("submersion needs a base_bivector section");
  SubmersionSpec spec{*in.submersion, *in.bivector, *in.base_bivector};
  auto grid = pick_grid(in, in.submersion->source, opt);
  auto rep = fiber_report(spec, grid);
  auto pencil = pencil_decompose(spec, grid);

  if (opt.format == "json") {
    Json j = report_skeleton("submersion", text, opt);
    Json& v = j["verdicts"];
    v["poisson_map"] = rep.poisson_map;
    v["coregular"] = verdict_str(rep.coregular);
    v["points"] = Json::array();
    for (const auto& fp : rep.points) {
      Json p;
      p["at"] = coords_json(fp.at.coords);
      p["fiber_pd"] = fp.fiber_pd;
      p["fiber_rank"] = fp.fiber_rank;
      p["coupling"] = fp.coupling;
      p["fiber_kind"] = fp.fiber_kind;
      v["points"].push_back(p);
    }
    if (auto* dec = std::get_if<PencilDecomposition>(&pencil)) {
      Json d;
      d["pi_v"] = multivector_json(dec->pi_v);
      d["pi_h"] = multivector_json(dec->pi_h);
      d["vertical_ok"] = dec->vertical_ok;
      d["bracket_vv"] = dec->bracket_vv;
      d["bracket_vh"] = dec->bracket_vh;
      d["bracket_hh"] = dec->bracket_hh;
      d["horizontal_clear"] = dec->horizontal_clear;
      v["pencil"] = d;
    } else if (auto* obs = std::get_if<PencilObstruction>(&pencil)) {
      Json d;
      d["witnesses"] = Json::array();
      for (const auto& w : obs->witnesses)
        d["witnesses"].push_back(coords_json(w.coords));
      d["ranks"] = obs->ranks;
      v["pencil_obstruction"] = d;
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "poisson map: " << (rep.poisson_map ? "yes" : "no") << "\n";
    std::cout << "coregular fibres: " << verdict_str(rep.coregular) << "\n";
    if (auto* dec = std::get_if<PencilDecomposition>(&pencil)) {
      std::cout << "pencil: " << (dec->ok() ? "yes" : "incomplete") << "\n";
    } else if (auto* obs = std::get_if<PencilObstruction>(&pencil)) {
      std::cout << "pencil: obstructed (" << obs->witnesses.size()
                << " rank witnesses)\n";
    }
  }
  return rep.poisson_map ? 0 : 1;
}

struct ToricFlags {
  bool leaves = false, strata = false, kernel = false, delzant = false;
  bool any() const { return leaves || strata || kernel || delzant; }
};

int cmd_toric(const std::string& path, const ToricFlags& fl, const Options& opt) {
  std::string text = read_file(path);
  auto dp = polytope_from_json(text);
  ToricFlags f = fl;
  if (!f.any()) f = {true, true, true, true};

  std::size_t leaves = 0;
  std::vector<std::vector<unsigned>> strata;
  if (f.leaves || f.strata) {
    strata = faces(dp);
    leaves = strata.size();
  }
  KernelLattice kl;
  if (f.kernel) kl = kernel_lattice(dp);
  DelzantCheck dc;
  if (f.delzant) dc = is_delzant(dp);

  if (opt.format == "json") {
    Json j = report_skeleton("toric", text, opt);
    Json& v = j["verdicts"];
    if (f.leaves) v["leaves"] = leaves;
    if (f.strata) {
      v["strata"] = Json::array();
      for (const auto& I : strata) v["strata"].push_back(I);
    }
    if (f.kernel) {
      Json k;
      k["surjective"] = kl.surjective;
      k["basis"] = Json::array();
      for (const auto& b : kl.basis) {
        Json row = Json::array();
        for (const auto& x : b) row.push_back(x.str());
        k["basis"].push_back(row);
      }
      v["kernel"] = k;
    }
    if (f.delzant) {
      Json d;
      d["delzant"] = dc.delzant;
      d["failing_vertex"] =
          dc.failing_vertex ? coords_json(*dc.failing_vertex) : Json();
      d["reason"] = dc.reason;
      v["delzant"] = d;
    }
    std::cout << j.dump(2) << "\n";
  } else {
    if (f.leaves) {
      if (!f.strata && !f.kernel && !f.delzant)
        std::cout << leaves << "\n";  // bare count for scripting
      else
        std::cout << "leaves: " << leaves << "\n";
    }
    if (f.strata) {
      for (const auto& I : strata) {
        std::cout << "stratum {";
        for (std::size_t k = 0; k < I.size(); ++k)
          std::cout << (k ? "," : "") << I[k];
        std::cout << "}\n";
      }
    }
    if (f.kernel) {
      std::cout << "kernel surjective: " << (kl.surjective ? "yes" : "no") << "\n";
      for (const auto& b : kl.basis) {
        std::cout << "kernel vector:";
        for (const auto& x : b) std::cout << " " << x.str();
        std::cout << "\n";
      }
    }
    if (f.delzant) {
      std::cout << "delzant: " << (dc.delzant ? "yes" : "no");
      if (dc.failing_vertex) {
        std::cout << " (vertex";
        for (const auto& c : *dc.failing_vertex)
          std::cout << " " << rational_to_string(c);
        std::cout << "; " << dc.reason << ")";
      }
      std::cout << "\n";
    }
  }
  return f.delzant && !dc.delzant ? 1 : 0;
}

int cmd_lie(const std::string& path, const Options& opt) {
  std::string text = read_file(path);
  auto [L, pairing] = algebra_from_json(text);
  auto rep = validate_algebra(L);
  bool pass = rep.valid();
  bool sym = false, inv = false, nondeg = false;
  if (pairing) {
    sym = form_symmetric(*pairing);
    inv = form_invariant(L, *pairing);
    nondeg = form_nondegenerate(*pairing);
    pass = pass && sym && inv && nondeg;
  }
  if (opt.format == "json") {
    Json j = report_skeleton("lie", text, opt);
    Json& v = j["verdicts"];
    v["dim"] = L.dim;
    v["antisymmetric"] = rep.antisymmetric;
    v["jacobi"] = rep.jacobi;
    v["residual"] = rep.residual;
    if (pairing) {
      v["pairing_symmetric"] = sym;
      v["pairing_invariant"] = inv;
      v["pairing_nondegenerate"] = nondeg;
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "dim: " << L.dim << "\n";
    std::cout << "lie algebra: " << (rep.valid() ? "valid" : "invalid");
    if (!rep.residual.empty()) std::cout << " (" << rep.residual << ")";
    std::cout << "\n";
    if (pairing)
      std::cout << "pairing: " << (sym && inv && nondeg ? "ad-invariant metric" : "not an ad-invariant metric")
                << "\n";
  }
  return pass ? 0 : 1;
}

int cmd_leaves(std::size_t base, std::size_t fiber, const std::string& tag,
               const Options& opt) {
  std::size_t n = associated_leaf_count({base, fiber, tag});
  if (opt.format == "json") {
    Json j;
    j["schema"] = "poisson-kit/1";
    j["command"] = "leaves";
    j["seed"] = opt.seed;
    j["verdicts"]["leaves"] = n;
    j["verdicts"]["hypothesis"] = tag;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << n << "\n";
  }
  return 0;
}

int cmd_example_list(const Options& opt) {
  if (opt.format == "json") {
    Json j = Json::array();
    for (const auto& f : catalogue()) j.push_back({{"id", f.id}, {"note", f.note}});
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& f : catalogue())
      std::cout << f.id << "  " << f.note << "\n";
  }
  return 0;
}

int cmd_example_run(const std::string& id, bool all, const Options& opt) {
  std::vector<const Fixture*> todo;
  if (all) {
    for (const auto& f : catalogue()) todo.push_back(&f);
  } else {
    const Fixture* f = find_fixture(id);
    if (!f) throw mode_error("unknown fixture id: " + id);
    todo.push_back(f);
  }
  int failures = 0;
  Json out = Json::array();
  for (const Fixture* f : todo) {
    auto res = f->run();
    if (!res.pass) ++failures;
    if (opt.format == "json") {
      out.push_back({{"id", f->id}, {"pass", res.pass}, {"detail", res.detail}});
    } else {
      std::cout << (res.pass ? "PASS" : "FAIL") << " " << f->id << " — "
                << res.detail << "\n";
    }
  }
  if (opt.format == "json") std::cout << out.dump(2) << "\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"poisson-kit: exact computations in Poisson geometry"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("--seed", opt.seed, "seed for deterministic sample grids");
  app.add_option("--grid", opt.grid, "samples per coordinate for default grids");
  app.add_option("--tol", opt.tol, "numeric tolerance for sampled residuals");

  std::string check_file, classify_file, submersion_file, toric_file, lie_file;
  auto* c_check = app.add_subcommand("check", "Jacobi identity of a DSL bivector");
  c_check->add_option("file", check_file, "DSL input")->required();
  auto* c_classify =
      app.add_subcommand("classify", "submanifold hierarchy of a DSL input");
  c_classify->add_option("file", classify_file, "DSL input")->required();
  auto* c_sub = app.add_subcommand("submersion", "fibre and pencil analysis");
  c_sub->add_option("file", submersion_file, "DSL input")->required();

  ToricFlags tf;
  auto* c_toric = app.add_subcommand("toric", "Delzant polytope analysis");
  c_toric->add_option("file", toric_file, "polytope JSON")->required();
  c_toric->add_flag("--leaves", tf.leaves, "count symplectic leaves");
  c_toric->add_flag("--strata", tf.strata, "list nonempty strata");
  c_toric->add_flag("--kernel", tf.kernel, "kernel lattice of the weight map");
  c_toric->add_flag("--delzant", tf.delzant, "Delzant condition");

  auto* c_lie = app.add_subcommand("lie", "Lie algebra validation");
  c_lie->add_option("file", lie_file, "algebra JSON")->required();

  std::size_t base = 0, fiber = 0;
  std::string tag;
  auto* c_leaves = app.add_subcommand("leaves", "associated-bundle leaf count");
  c_leaves->add_option("--base", base, "leaf count of the base")->required();
  c_leaves->add_option("--fiber", fiber, "leaf count of the fibre")->required();
  c_leaves->add_option("--tag", tag, "hypothesis tag")->required();

  auto* c_example = app.add_subcommand("example", "fixture catalogue");
  c_example->require_subcommand(1);
  auto* c_list = c_example->add_subcommand("list", "list fixture ids");
  auto* c_run = c_example->add_subcommand("run", "run fixtures");
  std::string run_id;
  bool run_all = false;
  c_run->add_option("id", run_id, "fixture id");
  c_run->add_flag("--all", run_all, "run the whole catalogue");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (*c_check) return cmd_check(check_file, opt);
    if (*c_classify) return cmd_classify(classify_file, opt);
    if (*c_sub) return cmd_submersion(submersion_file, opt);
    if (*c_toric) return cmd_toric(toric_file, tf, opt);
    if (*c_lie) return cmd_lie(lie_file, opt);
    if (*c_leaves) return cmd_leaves(base, fiber, tag, opt);
    if (*c_example) {
      if (*c_list) return cmd_example_list(opt);
      if (*c_run) {
        if (!run_all && run_id.empty()) {
          std::cerr << "example run needs a fixture id or --all\n";
          return 2;
        }
        return cmd_example_run(run_id, run_all, opt);
      }
    }
  } catch (const parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const mode_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const eval_error& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

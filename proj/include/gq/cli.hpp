#pragma once

// The gqtool command line. run_cli returns the exit code: 0 on success,
// 1 on a domain error (one "Kind: message" line on err), 2 on usage errors.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gq/action.hpp"
#include "gq/config.hpp"
#include "gq/constructions.hpp"
#include "gq/gq_search.hpp"
#include "gq/incidence.hpp"
#include "gq/invariants.hpp"
#include "gq/isomorphism.hpp"
#include "gq/regular_search.hpp"
#include "gq/report.hpp"

namespace gq {

namespace cli {

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("IOError", what) {}
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Context {
  RunConfig cfg;
  std::ostream& out;

  // Writes to out_dir/path, or to standard output when path is empty.
  void emit(const std::string& path, const std::string& content) const {
    if (path.empty()) {
      out << content;
      return;
    }
    std::filesystem::path p(path);
    if (p.is_relative()) p = std::filesystem::path(cfg.out_dir) / p;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw IoError("cannot write " + p.string());
    f << content;
    if (!f) throw IoError("write failed for " + p.string());
  }

  const FieldSpec& field(std::uint64_t q) const {
    auto it = cfg.moduli.find(q);
    if (it == cfg.moduli.end()) return galois_field(q);
    const std::uint64_t p = prime_of_power(q);
    if (p == 0) throw InvalidField(std::to_string(q) + " is not a prime power");
    int f = 0;
    for (std::uint64_t x = q; x > 1; x /= p) ++f;
    return galois_field(static_cast<int>(p), f, it->second);
  }
};

inline IncidenceGQ load_gq(const std::string& path) { return read_gq(read_file(path), path); }
inline PermGroup load_grp(const std::string& path) { return read_grp(read_file(path)); }

inline ConcreteGroup<Permutation> enumerate_perm(const PermGroup& G, std::uint64_t bound) {
  if (G.order() > bound)
    throw TooLarge("group of order " + std::to_string(G.order()) + " exceeds the enumeration bound " +
                   std::to_string(bound));
  return close_group(Permutation(G.degree()), G.generators(), bound + 1);
}

// A rebuilt geometry with point labels must match the file it stands for.
inline void require_same(const IncidenceGQ& built, const std::optional<std::string>& file) {
  if (!file) return;
  if (!(load_gq(*file) == built))
    throw NotCompatible(*file + " is not the geometry this group acts on (" + built.provenance() + ")");
}

// Regularity on the derived points of W(3,q) when the file is that geometry.
inline std::optional<int> derived_q(const IncidenceGQ& gq) {
  const int n = gq.npoints();
  for (std::uint64_t q = 2; q * q * q <= static_cast<std::uint64_t>(n); ++q)
    if (q * q * q == static_cast<std::uint64_t>(n) && prime_of_power(q)) return static_cast<int>(q);
  return std::nullopt;
}

inline std::string key_values(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + ": " + v + "\n";
  return out;
}

inline const char* yes(bool b) { return b ? "true" : "false"; }

}  // namespace cli

inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr,
                   const std::map<std::string, std::string>* env = nullptr) {
  CLI::App app{"Generalised quadrangles and their point-regular groups", "gqtool"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::optional<int> workers;
  std::optional<double> budget;
  std::optional<std::uint64_t> seed, enum_bound;
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--workers", workers, "worker count");
  app.add_option("--budget", budget, "search budget in seconds");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--enum-bound", enum_bound, "largest group listed element by element");
  app.add_option("--out-dir", out_dir, "directory for relative output paths");
  std::vector<std::string> moduli;
  app.add_option("--modulus", moduli, "modulus override q:c0,c1,... (low degree first)");

  std::string out_path;
  auto add_out = [&](CLI::App* s) { s->add_option("--out,-o", out_path, "output file (default: standard output)"); };

  // build-gq
  auto* build = app.add_subcommand("build-gq", "construct a quadrangle");
  std::string gq_type;
  std::uint64_t q = 0;
  build->add_option("--type", gq_type, "w3 | qminus5 | derived | grid | qminus5-block")
      ->required()
      ->check(CLI::IsMember({"w3", "qminus5", "derived", "grid", "qminus5-block"}));
  build->add_option("--q", q, "field order (grid size for grid)");
  add_out(build);

  // payne
  auto* payne = app.add_subcommand("payne", "Payne derivation at a point");
  std::string gq_path;
  int point = 0;
  payne->add_option("--gq", gq_path, "input geometry")->required();
  payne->add_option("--point", point, "base point id")->required();
  add_out(payne);

  // verify
  auto* verify = app.add_subcommand("verify", "check the quadrangle axioms");
  verify->add_option("--gq", gq_path, "input geometry")->required();
  add_out(verify);

  // construct-group
  auto* construct = app.add_subcommand("construct-group", "a named group as permutations of points");
  std::string name;
  int dim_u = 1;
  std::size_t decomposition = 0;
  std::optional<std::string> gq_opt;
  construct->add_option("--name", name, "E | P | R | Z | S | ambient | ambient-sylow | exp3 | exp9")
      ->required()
      ->check(CLI::IsMember({"E", "P", "R", "Z", "S", "ambient", "ambient-sylow", "exp3", "exp9"}));
  construct->add_option("--q", q, "field order");
  construct->add_option("--dim-u", dim_u, "dim U for S");
  construct->add_option("--decomposition", decomposition, "index into the decompositions with this dim U");
  construct->add_option("--gq", gq_opt, "geometry file the group must act on");
  add_out(construct);

  // check-regular
  auto* check = app.add_subcommand("check-regular", "regularity of a group on the points");
  std::string grp_path;
  check->add_option("--gq", gq_path, "geometry")->required();
  check->add_option("--group", grp_path, "GRP file")->required();
  add_out(check);

  // invariants
  auto* invariants = app.add_subcommand("invariants", "invariant report of a group");
  invariants->add_option("--group", grp_path, "GRP file")->required();
  add_out(invariants);

  // iso
  auto* iso = app.add_subcommand("iso", "isomorphism of two groups (GRP) or two geometries (GQ)");
  std::vector<std::string> iso_files;
  std::uint64_t iso_nodes = 1000000;
  iso->add_option("files", iso_files, "two GRP or two GQ files")->required()->expected(2);
  iso->add_option("--nodes", iso_nodes, "search node limit");
  add_out(iso);

  // enumerate-regular
  auto* enumerate = app.add_subcommand("enumerate-regular", "regular subgroups up to conjugacy");
  std::uint64_t max_nodes = 0;
  enumerate->add_option("--gq", gq_path, "geometry (derived W(3,q) files use the ambient of that q)");
  enumerate->add_option("--q", q, "derived W(3,q) without a file");
  enumerate->add_option("--nodes", max_nodes, "node budget (0 = none)");
  enumerate->add_option("--budget", budget, "search budget in seconds");
  add_out(enumerate);

  // report
  auto* report = app.add_subcommand("report", "table of class counts per q");
  std::string qlist, format;
  std::vector<std::string> inputs;
  bool allow_partial = false;
  report->add_option("--q", qlist, "comma-separated q values to enumerate");
  report->add_option("inputs", inputs, "JSON files from enumerate-regular");
  report->add_option("--format", format, "md | csv | json")->check(CLI::IsMember({"md", "csv", "json"}));
  report->add_flag("--allow-partial", allow_partial, "accept incomplete enumerations");
  report->add_option("--budget", budget, "search budget in seconds per q");
  add_out(report);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "UsageError: " << e.what() << "\n";
    return 2;
  }

  try {
    cli::Context ctx{RunConfig{}, out};
    RunConfig& cfg = ctx.cfg;
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    apply_environment(cfg, env);
    if (workers) cfg.workers = *workers;
    if (budget) cfg.budget_seconds = *budget;
    if (seed) cfg.seed = *seed;
    if (enum_bound) cfg.enum_bound = *enum_bound;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    for (const auto& m : moduli) {
      const auto colon = m.find(':');
      if (colon == std::string::npos) throw ParseError("--modulus expects q:c0,c1,...");
      apply_setting(cfg, "modulus." + m.substr(0, colon), m.substr(colon + 1));
    }
    if (!format.empty()) cfg.formats = {format};
    cfg.validate();

    auto need_q = [&](const CLI::App* s) {
      if (q == 0) throw CLI::RequiredError(s->get_name() + " needs --q");
    };

    if (*build) {
      need_q(build);
      IncidenceGQ g = [&] {
        if (gq_type == "grid") return grid_gq(static_cast<int>(q));
        if (gq_type == "qminus5-block") return build_quadric_gq(block_form27(), "Q-(5,2) block form");
        const FieldSpec& F = ctx.field(q);
        if (gq_type == "w3") return build_w3(F);
        if (gq_type == "qminus5") return build_qminus5(F);
        return derived_w3(F);
      }();
      ctx.emit(out_path, write_gq(g));
    } else if (*payne) {
      ctx.emit(out_path, write_gq(payne_derive(cli::load_gq(gq_path), point)));
    } else if (*verify) {
      const auto g = cli::load_gq(gq_path);
      const auto r = verify_gq(g);
      nlohmann::ordered_json j;
      j["points"] = g.npoints();
      j["lines"] = g.nlines();
      j["gq"] = r.ok;
      if (r.ok) {
        j["s"] = r.s;
        j["t"] = r.t;
      } else {
        j["violation"] = r.violation;
      }
      ctx.emit(out_path, j.dump(2) + "\n");
      if (!r.ok) throw SpecMismatch("not a generalised quadrangle: " + r.violation);
    } else if (*construct) {
      if (name == "exp3" || name == "exp9") {
        const auto geo = build_quadric_gq(block_form27(), "Q-(5,2) block form");
        cli::require_same(geo, gq_opt);
        const auto g = build_extraspecial27(name == "exp3" ? Extraspecial27::Exp3 : Extraspecial27::Exp9);
        ctx.emit(out_path, write_grp(action_from_linear(g.gens, geo)));
      } else {
        need_q(construct);
        const FieldSpec& F = ctx.field(q);
        const auto geo = derived_w3(F);
        cli::require_same(geo, gq_opt);
        ConstructedGroup g;
        if (name == "E") g = build_E(F);
        else if (name == "P") g = build_P(F);
        else if (name == "R") g = build_R(F);
        else if (name == "Z") g = build_Z(F);
        else if (name == "ambient") g = build_ambient(F);
        else if (name == "ambient-sylow") g = build_ambient_sylow(F);
        else {
          const auto ds = all_decompositions(F, dim_u);
          if (decomposition >= ds.size())
            throw BadDecomposition("decomposition index " + std::to_string(decomposition) + " out of range; " +
                                   std::to_string(ds.size()) + " exist with dim U = " + std::to_string(dim_u));
          g = build_SUW(F, ds[decomposition]);
        }
        ctx.emit(out_path, write_grp(action_from_linear(g.gens, geo)));
      }
    } else if (*check) {
      const auto g = cli::load_gq(gq_path);
      const auto G = cli::load_grp(grp_path);
      if (G.degree() != g.npoints()) throw DimensionMismatch("group degree differs from the point count");
      for (const auto& x : G.generators())
        if (!preserves_lines(x, g)) throw NotAnAutomorphism("a generator does not map lines to lines");
      const auto r = regularity(G);
      ctx.emit(out_path, cli::key_values({{"regular", cli::yes(r.regular)},
                                          {"transitive", cli::yes(r.transitive)},
                                          {"semiregular", cli::yes(r.semiregular)},
                                          {"order", std::to_string(r.order)},
                                          {"points", std::to_string(g.npoints())},
                                          {"orbits", std::to_string(r.orbits)}}));
    } else if (*invariants) {
      const auto C = cli::enumerate_perm(cli::load_grp(grp_path), cfg.enum_bound);
      auto j = invariant_report(C.group).to_json();
      ctx.emit(out_path, j.dump(2) + "\n");
    } else if (*iso) {
      const std::string a = cli::read_file(iso_files[0]), b = cli::read_file(iso_files[1]);
      auto kind = [](const std::string& text) { return text.substr(0, text.find_first_of(" \n")); };
      if (kind(a) != kind(b)) throw NotCompatible("iso needs two files of the same kind");
      if (kind(a) == "GRP") {
        const auto A = cli::enumerate_perm(read_grp(a), std::min<std::uint64_t>(cfg.enum_bound, kIsoMaxOrder));
        const auto B = cli::enumerate_perm(read_grp(b), std::min<std::uint64_t>(cfg.enum_bound, kIsoMaxOrder));
        const auto r = is_isomorphic_small(A.group, B.group, iso_nodes);
        ctx.emit(out_path, cli::key_values({{"verdict", to_string(r.verdict)}, {"reason", r.reason}}));
      } else {
        const auto A = read_gq(a, iso_files[0]), B = read_gq(b, iso_files[1]);
        const auto m = gq_isomorphic(A, B, iso_nodes);
        std::string map;
        if (m)
          for (int i = 0; i < m->degree(); ++i) map += (i ? " " : "") + std::to_string((*m)[i]);
        ctx.emit(out_path, cli::key_values({{"isomorphic", cli::yes(m.has_value())}, {"map", map}}));
      }
    } else if (*enumerate) {
      SearchLimits limits{max_nodes, cfg.budget_seconds, cfg.seed};
      RegularClassTable t;
      if (gq_path.empty()) {
        need_q(enumerate);
        t = enumerate_derived(ctx.field(q), limits);
      } else {
        const auto g = cli::load_gq(gq_path);
        const auto dq = cli::derived_q(g);
        if (dq && derived_w3(ctx.field(*dq)) == g) {
          t = enumerate_derived(ctx.field(*dq), limits);
          t.gq_provenance = gq_path;
        } else {
          t = enumerate_regular(g, aut_incidence(g), {}, limits, {}, "automorphism group of the geometry");
        }
      }
      ctx.emit(out_path, t.to_json().dump(2) + "\n");
    } else if (*report) {
      std::vector<Table3Row> rows;
      for (const auto& tok : detail::split(qlist, ',')) {
        const auto qq = detail::parse_number<std::uint64_t>("--q", tok);
        rows.push_back(table3_row(enumerate_derived(ctx.field(qq), {0, cfg.budget_seconds, cfg.seed})));
      }
      for (const auto& path : inputs) {
        nlohmann::ordered_json j;
        try {
          j = nlohmann::ordered_json::parse(cli::read_file(path));
        } catch (const nlohmann::json::parse_error& e) {
          throw ParseError(path + ": " + e.what());
        }
        rows.push_back(table3_row(j));
      }
      const std::string& fmt = cfg.formats.front();
      const std::string text = fmt == "csv"    ? table3_csv(rows, allow_partial)
                               : fmt == "json" ? table3_json(rows, allow_partial)
                                               : table3_markdown(rows, allow_partial);
      ctx.emit(out_path, text);
    }
    return 0;
  } catch (const CLI::Error& e) {
    err << "UsageError: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.kind() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "IOError: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace gq

// Command-line front end: catalog lookups, discriminant forms, genera,
// verification suites, towers and the even-set search.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "k3lat/catalog.hpp"
#include "k3lat/ns_geometry.hpp"
#include "k3lat/towers.hpp"
#include "k3lat/verify.hpp"

using json = nlohmann::json;
using namespace k3lat;

namespace {

json int_json(const Int& x) {
  if (x.fits_slong_p()) return json(static_cast<std::int64_t>(x.get_si()));
  return json(x.get_str());
}

json rat_json(const Rat& x) { return json(Rat(x).get_str()); }

json matrix_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(int_json(m(i, j)));
    rows.push_back(r);
  }
  return rows;
}

json vector_json(const IntVector& v) {
  json r = json::array();
  for (const auto& x : v) r.push_back(int_json(x));
  return r;
}

json lattice_json(const IntegralLattice& l) {
  GramInvariants inv = gram_invariants(l);
  return {{"name", l.label()},
          {"gram", matrix_json(l.gram())},
          {"rank", inv.rank},
          {"det", int_json(inv.determinant)},
          {"sig", {inv.sig_plus, inv.sig_minus}}};
}

json form_json(const FiniteQuadraticForm& q) {
  json gram = json::array();
  for (std::size_t i = 0; i < q.generator_count(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < q.generator_count(); ++j) r.push_back(rat_json(q.q_gram()(i, j)));
    gram.push_back(r);
  }
  return {{"orders", q.orders()},
          {"invariant_factors", q.invariant_factors()},
          {"length", q.length()},
          {"size", q.size()},
          {"q_gram", gram},
          {"milgram", milgram_signature(q)}};
}

json genus_json(const GenusDescriptor& g) {
  return {{"sig", {g.sig_plus, g.sig_minus}}, {"form", form_json(g.disc)}};
}

json report_json(const Report& r) {
  json j = {{"check", r.check}, {"status", status_name(r.status)}, {"detail", r.detail}};
  if (r.witness) j["witness"] = matrix_json(*r.witness);
  return j;
}

void emit(const json& j) { std::cout << j.dump() << '\n'; }

Int parse_int(const std::string& s, const std::string& flag) {
  Int x;
  if (s.empty() || x.set_str(s, 10) != 0) throw Error("--" + flag + " expects an integer: " + s);
  return x;
}

// A path to a JSON file ({"gram": [[...]]} or a bare matrix) or a catalog name.
IntegralLattice read_lattice(const std::string& arg) {
  if (!std::filesystem::is_regular_file(arg)) return catalog_lattice(arg);
  std::ifstream in(arg);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error("malformed JSON in " + arg + ": " + e.what());
  }
  const json& g = j.is_object() ? j.at("gram") : j;
  if (!g.is_array()) throw Error("gram must be an array of rows: " + arg);
  IntMatrix m(g.size(), g.empty() ? 0 : g[0].size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!g[i].is_array() || g[i].size() != m.cols()) throw Error("ragged gram in " + arg);
    for (std::size_t k = 0; k < m.cols(); ++k) {
      const json& x = g[i][k];
      if (x.is_number_integer())
        m(i, k) = static_cast<long>(x.get<std::int64_t>());
      else if (x.is_string())
        m(i, k) = parse_int(x.get<std::string>(), "gram");
      else
        throw Error("gram entries must be integers: " + arg);
    }
  }
  std::string label = j.is_object() && j.contains("name") ? j["name"].get<std::string>() : arg;
  return IntegralLattice(m, label);
}

std::string pad(const std::string& s, std::size_t w) {
  return s.size() >= w ? s : s + std::string(w - s.size(), ' ');
}

int exit_code(const ReportList& r) {
  if (any_fail(r)) return 1;
  for (const auto& x : r)
    if (x.status == Status::Inconclusive) return 2;
  return 0;
}

struct Options {
  bool json = false;
  std::string golden;
  std::uint64_t budget = kDefaultBudget;
  long bound = 5;
  int depth = 5;
  std::string n, d, e, m;
  std::string fibre = "E1";
};

std::string golden_name(const std::string& suite, const Options& o) {
  std::string name = suite;
  for (const auto& [k, v] : {std::pair<std::string, std::string>{"n", o.n}, {"d", o.d},
                             {"e", o.e}, {"m", o.m}})
    if (!v.empty()) name += "_" + k + v;
  return name + ".json";
}

int cmd_verify(const std::string& suite, const Options& o) {
  SuiteParams p;
  if (!o.n.empty()) p.n = static_cast<int>(parse_int(o.n, "n").get_si());
  if (!o.d.empty()) p.d = parse_int(o.d, "d");
  if (!o.e.empty()) p.e = parse_int(o.e, "e");
  if (!o.m.empty()) p.m = static_cast<int>(parse_int(o.m, "m").get_si());
  p.bound = o.bound;
  p.depth = o.depth;
  p.budget = o.budget;

  auto t0 = std::chrono::steady_clock::now();
  ReportList reports = run_suite(suite, p);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  json all = json::array();
  for (const auto& r : reports) all.push_back(report_json(r));
  if (!o.golden.empty()) {
    std::filesystem::create_directories(o.golden);
    std::filesystem::path file = std::filesystem::path(o.golden) / golden_name(suite, o);
    const std::string text = all.dump(1) + "\n";
    if (std::filesystem::exists(file)) {
      std::ifstream in(file);
      std::stringstream ss;
      ss << in.rdbuf();
      bool same = ss.str() == text;
      reports.push_back(check("golden." + file.filename().string(), same,
                              same ? "matches" : "differs from " + file.string()));
      all.push_back(report_json(reports.back()));
    } else {
      std::ofstream(file) << text;
      std::cerr << "wrote " << file.string() << '\n';
    }
  }

  if (o.json) {
    emit(all);
  } else {
    std::map<Status, std::size_t> counts;
    for (const auto& r : reports) {
      ++counts[r.status];
      std::cout << pad(status_name(r.status), 13) << r.check;
      if (!r.detail.empty()) std::cout << "  [" << r.detail << "]";
      std::cout << '\n';
    }
    std::cout << reports.size() << " checks: " << counts[Status::Pass] << " pass, "
              << counts[Status::Fail] << " fail, " << counts[Status::Discrepancy]
              << " discrepancy, " << counts[Status::Inconclusive] << " inconclusive ("
              << std::fixed << std::setprecision(2) << secs << " s)\n";
  }
  return exit_code(reports);
}

int cmd_evenset(const Options& o) {
  LabeledLattice x = build_X2();
  EvenSetSearch r = find_even_sets(x, o.fibre, o.bound);
  std::vector<IntVector> first, second;
  for (int i = 1; i <= 7; ++i) {
    first.push_back(x.at("N" + std::to_string(i)));
    second.push_back(x.at("N" + std::to_string(i)));
  }
  first.push_back(x.at("N8"));
  second.push_back(x.at("N8''"));
  std::sort(first.begin(), first.end());
  std::sort(second.begin(), second.end());
  auto position = [&](const std::vector<IntVector>& s) -> json {
    auto it = std::lower_bound(r.sets.begin(), r.sets.end(), s);
    if (it == r.sets.end() || *it != s) return nullptr;
    return it - r.sets.begin();
  };
  json named = {{"N1..N8", position(first)}, {"N1..N7,N8''", position(second)}};
  if (o.json) {
    json sets = json::array();
    for (const auto& s : r.sets) {
      json js = json::array();
      for (const auto& v : s) js.push_back(vector_json(v));
      sets.push_back(js);
    }
    emit({{"bound", o.bound},
          {"fibre", o.fibre},
          {"sections", r.vectors},
          {"orthogonal_sets", r.cliques},
          {"even_sets", r.sets.size()},
          {"named", named},
          {"sets", sets}});
  } else {
    std::cout << "fibre " << o.fibre << ", bound " << o.bound << ": " << r.vectors << " sections, " << r.cliques
              << " orthogonal 8-sets, " << r.sets.size() << " even\n";
    for (const auto& [k, v] : named.items())
      std::cout << k << ": " << (v.is_null() ? "not found" : "index " + v.dump()) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice computations for K3 surfaces with symplectic automorphisms"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_flag("--json", o.json, "Canonical JSON output");

  std::string name, name2, suite;
  auto* catalog = app.add_subcommand("catalog", "Gram matrix of a catalog lattice");
  catalog->add_option("name", name, "Catalog name, e.g. U(2), N, M(4,2), Lp(4,2)")->required();

  auto* disc = app.add_subcommand("disc", "Discriminant form of a lattice");
  disc->add_option("lattice", name, "Catalog name or JSON file")->required();

  auto* genus = app.add_subcommand("genus", "Genus of a lattice, or compare two");
  genus->add_option("lattice", name, "Catalog name or JSON file")->required();
  genus->add_option("other", name2, "Second lattice to compare against");
  genus->add_option("--budget", o.budget, "Node budget for form isomorphism");

  auto* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", suite, "Suite name")
      ->required()
      ->check(CLI::IsMember(suite_names()));
  verify->add_option("--n", o.n, "Order n of the automorphism (2..8)");
  verify->add_option("--d", o.d, "Polarization parameter d");
  verify->add_option("--e", o.e, "Parameter e");
  verify->add_option("--m", o.m, "Tower exponent m");
  verify->add_option("--bound", o.bound, "Coefficient bound for the even-set search")
      ->capture_default_str();
  verify->add_option("--depth", o.depth, "Tower depth")->capture_default_str();
  verify->add_option("--budget", o.budget, "Node budget for isomorphism searches")
      ->capture_default_str();
  verify->add_option("--golden", o.golden, "Directory of golden JSON files to write or compare");

  std::string tower_d = "1";
  int tower_depth = 3;
  auto* tw = app.add_subcommand("tower", "Isogeny tower M(2^m d, 2)");
  tw->add_option("--d", tower_d, "Starting parameter")->capture_default_str();
  tw->add_option("--depth", tower_depth, "Number of steps")->capture_default_str();

  std::string rel_d, rel_e;
  auto* related = app.add_subcommand("related", "Whether M(d,2) and M(e,2) lie on one tower");
  related->add_option("--d", rel_d)->required();
  related->add_option("--e", rel_e)->required();

  auto* evenset = app.add_subcommand("evenset", "Even sets of sections on the double plane model");
  evenset->add_option("--bound", o.bound, "Coefficient bound")->capture_default_str();
  evenset->add_option("--fibre", o.fibre, "Elliptic fibre class")
      ->check(CLI::IsMember({"E1", "E2"}))
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (catalog->parsed()) {
      IntegralLattice l = catalog_lattice(name);
      if (o.json)
        emit(lattice_json(l));
      else
        std::cout << l.label() << "\n" << to_string(l.gram()) << '\n';
      return 0;
    }
    if (disc->parsed()) {
      FiniteQuadraticForm q = discriminant_form(read_lattice(name));
      json j = form_json(q);
      if (o.json) {
        emit(j);
      } else {
        std::cout << "orders " << j["orders"].dump() << "\nlength " << q.length() << "\nq_gram "
                  << j["q_gram"].dump() << "\nmilgram " << j["milgram"] << '\n';
      }
      return 0;
    }
    if (genus->parsed()) {
      GenusDescriptor g = genus_of(read_lattice(name));
      if (name2.empty()) {
        json j = genus_json(g);
        if (o.json)
          emit(j);
        else
          std::cout << "sig " << j["sig"].dump() << "\nform " << j["form"].dump() << '\n';
        return 0;
      }
      GenusDescriptor g2 = genus_of(read_lattice(name2));
      bool eq = genus_equal(g, g2, o.budget);
      if (o.json)
        emit({{"equal", eq}, {"first", genus_json(g)}, {"second", genus_json(g2)}});
      else
        std::cout << (eq ? "equal" : "different") << '\n';
      return 0;
    }
    if (verify->parsed()) return cmd_verify(suite, o);
    if (tw->parsed()) {
      std::vector<TowerNode> nodes = tower(parse_int(tower_d, "d"), tower_depth);
      json out = json::array();
      for (const auto& n : nodes)
        out.push_back({{"m", n.depth},
                       {"ns", to_string(n.ns)},
                       {"T", lattice_json(n.transcendental)}});
      if (o.json) {
        emit(out);
      } else {
        for (const auto& n : nodes)
          std::cout << "m=" << n.depth << "  NS " << to_string(n.ns) << "  T "
                    << n.transcendental.label() << '\n';
      }
      return 0;
    }
    if (related->parsed()) {
      TowerRelation r = tower_related(parse_int(rel_d, "d"), parse_int(rel_e, "e"));
      json j;
      if (r.related)
        j = {{"m", r.m}, {"degree", int_json(r.degree)}};
      else if (r.identical)
        j = {{"m", 0}, {"degree", 1}, {"identical", true}};
      else
        j = {{"m", nullptr}};
      if (o.json) {
        emit(j);
      } else if (r.related) {
        std::cout << "related: m=" << r.m << ", isogeny degree " << r.degree.get_str() << '\n';
      } else {
        std::cout << (r.identical ? "same family\n" : "not related\n");
      }
      return 0;
    }
    if (evenset->parsed()) return cmd_evenset(o);
  } catch (const BudgetExceeded& e) {
    std::cerr << "inconclusive: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

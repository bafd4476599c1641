#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <ostream>

#include "dbisim/abstraction.hpp"
#include "dbisim/bisim.hpp"
#include "dbisim/ct_models.hpp"
#include "dbisim/io.hpp"
#include "dbisim/pomdp.hpp"
#include "dbisim/tableau.hpp"
#include "dbisim/version.hpp"

namespace dbisim::cli {

namespace {

struct Options {
  std::string model;
  std::string mu;
  std::string nu;
  std::string left;
  std::string right;
  std::string variant = "full";
  std::string out;
  std::string tableau;
  std::vector<std::string> locations;
  std::size_t max_choices = 1'000'000;
  unsigned jobs = 1;
  bool verify = false;
};

std::string provenance_line(const Options& o) {
  return std::string("dbisim ") + kVersion + " (variant " + o.variant + ", max-choices " +
         std::to_string(o.max_choices) + ", schedule: label sets by size then lexicographic, snapshot sweeps)";
}

void emit(const Json& j, const Options& o, std::ostream& out) {
  if (o.out.empty()) {
    out << j.dump(2) << '\n';
  } else {
    save_json(o.out, j);
  }
}

void write_if(const std::string& path, const Json& j) {
  if (!path.empty()) save_json(path, j);
}

EngineOptions engine(const Options& o) { return {o.max_choices, std::max(1u, o.jobs)}; }

// Independent re-check of a matrix witness: the matrix must be a valid
// bisimulation matrix and the column must separate the pair.
bool verify_matrix_witness(const PA& pa, const BisimMatrix& e, const Dist& mu, const Dist& nu, const Witness& w,
                           std::ostream& err) {
  std::string why;
  if (!verify_bisimulation_matrix(pa, e, &why) || !replay_provenance(pa, e, &why)) {
    err << "witness check failed: " << why << '\n';
    return false;
  }
  const Rational dot = (mu.vector() - nu.vector()).dot(e.basis.column(w.column));
  if (dot == 0 || dot != w.value) {
    err << "witness check failed: column does not separate the pair\n";
    return false;
  }
  return true;
}

int report_equivalence(const PA& pa, const BisimMatrix& e, const Dist& mu, const Dist& nu, const Options& o,
                       std::ostream& out, std::ostream& err) {
  const Equivalence eq = equivalent(e, mu, nu);
  Json j;
  j["equivalent"] = eq.equivalent;
  j["variant"] = to_string(e.variant);
  Json ws = Json::array();
  for (const auto& w : eq.witnesses) {
    Json col = Json::array();
    for (Index i = 0; i < e.rows(); ++i) col.push_back(rational_json(e.basis.column(w.column)(i)));
    ws.push_back({{"column", w.column}, {"value", rational_json(w.value)}, {"vector", std::move(col)}});
  }
  j["witnesses"] = std::move(ws);
  j["matrix"] = matrix_json(pa, e);
  write_if(o.out, j);

  if (eq.equivalent) {
    out << "EQUIVALENT\n";
    return 0;
  }
  const Witness& w = eq.witnesses.front();
  out << "NOT-EQUIVALENT: witness column " << w.column << " gives (mu - nu) . e = " << format_rational(w.value) << '\n';
  out << "column:";
  for (Index i = 0; i < e.rows(); ++i) {
    out << ' ' << pa.states()[static_cast<std::size_t>(i)] << '=' << format_rational(e.basis.column(w.column)(i));
  }
  out << '\n';
  if (o.verify) {
    if (!verify_matrix_witness(pa, e, mu, nu, w, err)) return 2;
    out << "witness verified\n";
  }
  return 1;
}

int report_verdict(const FinitePA& fpa, const Verdict& v, const Options& o, std::ostream& out, std::ostream& err) {
  write_if(o.tableau, tableau_json(fpa, v));
  write_if(o.out, tableau_json(fpa, v));
  out << v.summary() << '\n';
  if (o.verify) {
    const std::string problem = audit_tableau(fpa, v);
    if (!problem.empty()) {
      err << "tableau audit failed: " << problem << '\n';
      return 2;
    }
    out << (v.bisimilar ? "tableau verified\n" : "failure path verified\n");
  }
  return v.bisimilar ? 0 : 1;
}

int check_pa(const Options& o, std::ostream& out, std::ostream& err) {
  const PA pa = read_pa(load_json(o.model));
  const Dist mu = parse_inline_dist(o.mu, pa.states());
  const Dist nu = parse_inline_dist(o.nu, pa.states());
  const BisimMatrix e = minimal_bisim_matrix(pa, parse_variant(o.variant), engine(o));
  return report_equivalence(pa, e, mu, nu, o, out, err);
}

int bisim_matrix(const Options& o, std::ostream& out) {
  const PA pa = read_pa(load_json(o.model));
  const BisimMatrix e = minimal_bisim_matrix(pa, parse_variant(o.variant), engine(o));
  if (o.out.empty()) {
    out << matrix_json(pa, e).dump(2) << '\n';
  } else {
    save_json(o.out, matrix_json(pa, e));
    out << "rank " << e.rank() << '\n';
  }
  return 0;
}

int check_sa(const Options& o, std::ostream& out, std::ostream& err) {
  const SA sa = read_sa(load_json(o.model));
  const FinitePA fpa = abstract(sa, {sa.location_index(o.left), sa.location_index(o.right)});
  const Verdict v = decide(fpa, fpa.dirac(fpa.initials[0]), fpa.dirac(fpa.initials[1]));
  return report_verdict(fpa, v, o, out, err);
}

int abstract_sa(const Options& o, std::ostream& out) {
  const SA sa = read_sa(load_json(o.model));
  std::vector<std::size_t> initials;
  for (const auto& l : o.locations) initials.push_back(sa.location_index(l));
  if (initials.empty()) initials.push_back(sa.initial());
  emit(fpa_json(abstract(sa, initials)), o, out);
  return 0;
}

int check_commute_cmd(const Options& o, std::ostream& out, std::ostream& err) {
  const CTMC c1 = read_ctmc(load_json(o.left));
  const CTMC c2 = read_ctmc(load_json(o.right));
  const CommuteResult r = check_commute(c1, c2);
  return report_verdict(r.abstraction, r.verdict, o, out, err);
}

int belief_check(const Options& o, std::ostream& out, std::ostream& err) {
  const POMDP m = read_pomdp(load_json(o.model));
  const PA pa = pomdp_to_pa(m);
  const Dist b1 = parse_inline_dist(o.mu, pa.states());
  const Dist b2 = parse_inline_dist(o.nu, pa.states());
  const BisimMatrix e = minimal_bisim_matrix(pa, Variant::Full, engine(o));
  return report_equivalence(pa, e, b1, b2, o, out, err);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Distribution bisimulation for probabilistic and stochastic automata", "dbisim"};
  app.require_subcommand(1);
  app.set_version_flag("--version", [&o] { return provenance_line(o); });

  auto engine_flags = [&o](CLI::App* sub) {
    sub->add_option("--variant", o.variant, "full | singleton | exact-label")
        ->check(CLI::IsMember({"full", "singleton", "exact-label"}));
    sub->add_option("--max-choices", o.max_choices, "cap on pure choice tuples per label set");
    sub->add_option("--jobs", o.jobs, "worker threads for stability candidates");
  };

  auto* pa_check = app.add_subcommand("check-pa", "are two distributions of a PA bisimilar");
  pa_check->add_option("--model", o.model, "PA JSON")->required();
  pa_check->add_option("--mu", o.mu, "distribution, e.g. {t:1}")->required();
  pa_check->add_option("--nu", o.nu, "distribution")->required();
  pa_check->add_option("--out", o.out, "JSON report");
  pa_check->add_flag("--verify-witness", o.verify, "re-check a separating column independently");
  engine_flags(pa_check);

  auto* matrix = app.add_subcommand("bisim-matrix", "minimal bisimulation matrix of a PA");
  matrix->add_option("--model", o.model, "PA JSON")->required();
  matrix->add_option("--out", o.out, "matrix dump (stdout if omitted)");
  engine_flags(matrix);

  auto* sa_check = app.add_subcommand("check-sa", "are two SA locations bisimilar");
  sa_check->add_option("--model", o.model, "SA JSON")->required();
  sa_check->add_option("--left", o.left, "location")->required();
  sa_check->add_option("--right", o.right, "location")->required();
  sa_check->add_option("--tableau", o.tableau, "tableau dump");
  sa_check->add_option("--out", o.out, "tableau dump");
  sa_check->add_flag("--verify-witness", o.verify, "audit the tableau or failure path");

  auto* sa_abs = app.add_subcommand("abstract-sa", "finite abstraction of an exponential SA");
  sa_abs->add_option("--model", o.model, "SA JSON")->required();
  sa_abs->add_option("--locations", o.locations, "start locations (default: initial)");
  sa_abs->add_option("--out", o.out, "abstraction dump (stdout if omitted)");

  auto* compose = app.add_subcommand("ctmc-compose", "interleaving product of two CTMCs");
  compose->add_option("--left", o.left, "CTMC JSON")->required();
  compose->add_option("--right", o.right, "CTMC JSON")->required();
  compose->add_option("--out", o.out, "CTMC JSON (stdout if omitted)");

  auto* embed = app.add_subcommand("ctmc-embed", "CTMC as a stochastic automaton");
  embed->add_option("--model", o.model, "CTMC JSON")->required();
  embed->add_option("--out", o.out, "SA JSON (stdout if omitted)");

  auto* sa_comp = app.add_subcommand("sa-compose", "interleaving composition of two SA");
  sa_comp->add_option("--left", o.left, "SA JSON")->required();
  sa_comp->add_option("--right", o.right, "SA JSON")->required();
  sa_comp->add_option("--out", o.out, "SA JSON (stdout if omitted)");

  auto* commute = app.add_subcommand("check-commute", "SA(c1) || SA(c2) against SA(c1 || c2)");
  commute->add_option("--left", o.left, "CTMC JSON")->required();
  commute->add_option("--right", o.right, "CTMC JSON")->required();
  commute->add_option("--tableau", o.tableau, "tableau dump");
  commute->add_option("--out", o.out, "tableau dump");
  commute->add_flag("--verify-witness", o.verify, "audit the tableau or failure path");

  auto* to_pa_cmd = app.add_subcommand("pomdp-to-pa", "observation-labelled PA of a POMDP");
  to_pa_cmd->add_option("--model", o.model, "POMDP JSON")->required();
  to_pa_cmd->add_option("--out", o.out, "PA JSON (stdout if omitted)");

  auto* belief = app.add_subcommand("belief-check", "are two beliefs of a POMDP equivalent");
  belief->add_option("--model", o.model, "POMDP JSON")->required();
  belief->add_option("--mu", o.mu, "belief")->required();
  belief->add_option("--nu", o.nu, "belief")->required();
  belief->add_option("--out", o.out, "JSON report");
  belief->add_flag("--verify-witness", o.verify, "re-check a separating column independently");
  engine_flags(belief);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (pa_check->parsed()) return check_pa(o, out, err);
    if (matrix->parsed()) return bisim_matrix(o, out);
    if (sa_check->parsed()) return check_sa(o, out, err);
    if (sa_abs->parsed()) return abstract_sa(o, out);
    if (compose->parsed()) {
      emit(ctmc_json(ctmc_parallel(read_ctmc(load_json(o.left)), read_ctmc(load_json(o.right)))), o, out);
      return 0;
    }
    if (embed->parsed()) {
      emit(sa_json(ctmc_to_sa(read_ctmc(load_json(o.model)))), o, out);
      return 0;
    }
    if (sa_comp->parsed()) {
      emit(sa_json(sa_parallel(read_sa(load_json(o.left)), read_sa(load_json(o.right)))), o, out);
      return 0;
    }
    if (commute->parsed()) return check_commute_cmd(o, out, err);
    if (to_pa_cmd->parsed()) {
      emit(pa_json(pomdp_to_pa(read_pomdp(load_json(o.model)))), o, out);
      return 0;
    }
    if (belief->parsed()) return belief_check(o, out, err);
  } catch (const DeterminismViolation& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ZenoLoop& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ChoiceExplosion& e) {
    err << "error: " << e.what() << " (raise --max-choices)\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace dbisim::cli

// vertex-expand: command-line front end of the library.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "vertex_expand/coulomb.hpp"
#include "vertex_expand/dimer_pfaffian.hpp"
#include "vertex_expand/errors.hpp"
#include "vertex_expand/output.hpp"
#include "vertex_expand/series.hpp"
#include "vertex_expand/thermo.hpp"
#include "vertex_expand/transfer_matrix.hpp"
#include "vertex_expand/verify.hpp"
#include "vertex_expand/vertex_model.hpp"

namespace {

namespace ve = vertex_expand;
using ve::output::OutputRecord;
using ve::output::Scalar;

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct Globals {
  std::string format = "json";
  double tol = 1e-10;
  long long seed = 0;  // reserved
  bool quiet = false;
  bool format_given = false;
};

int exit_code_for(const ve::Error& e) {
  const std::string& k = e.kind();
  if (k == "VerificationFailed") return kExitVerification;
  if (k == "NonConvergence" || k == "SingularMatrix" || k == "ToleranceNotMet" ||
      k == "IdentityMismatch" || k == "OrientationFailure") {
    return kExitNumerical;
  }
  return kExitUsage;
}

std::vector<double> parse_sweep(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ve::InvalidArgument("malformed sweep '" + text + "'");
    }
  }
  if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
    throw ve::InvalidArgument("sweep must be a:b:step with a <= b and step > 0");
  }
  const long long count = (long long)std::floor((parts[1] - parts[0]) / parts[2] + 1e-9) + 1;
  if (count > 1000000) throw ve::TooLarge("sweep has more than 10^6 points");
  std::vector<double> grid;
  for (long long i = 0; i < count; ++i) grid.push_back(parts[0] + double(i) * parts[2]);
  return grid;
}

std::vector<std::string> to_strings(const std::vector<ve::series::Rational>& v) {
  std::vector<std::string> out;
  for (const auto& q : v) out.push_back(ve::series::to_string(q));
  return out;
}

void emit(const Globals& g, const std::vector<OutputRecord>& records) {
  ve::output::write_records(std::cout, records, ve::output::parse_format(g.format));
}

// ---------------------------------------------------------------------------

struct FreeEnergyArgs {
  std::optional<double> beta_s;
  std::string method = "quad";
  int size = 8;
  double u = 0.0;
  std::string sweep;
};

int run_free_energy(const Globals& g, const FreeEnergyArgs& a) {
  std::vector<double> grid;
  if (!a.sweep.empty()) {
    grid = parse_sweep(a.sweep);
  } else if (a.beta_s) {
    grid = {*a.beta_s};
  } else {
    throw ve::InvalidArgument("free-energy needs --beta-s or --sweep");
  }
  if (a.method != "finite" && a.u != 0.0) {
    throw ve::InvalidArgument("--u is only used with --method finite");
  }
  ve::thermo::QuadratureSpec spec;
  spec.tolerance = g.tol;
  std::vector<OutputRecord> records;
  for (double bs : grid) {
    OutputRecord r{"F0", {{"beta_s", bs}, {"method", a.method}}, 0.0, ""};
    if (a.method == "quad") {
      r.value = ve::thermo::baxter_free_energy(bs, spec).value;
      r.provenance = "quadrature";
    } else if (a.method == "series") {
      r.value = ve::thermo::baxter_series_converged(bs).value;
      r.provenance = "series";
    } else if (a.method == "finite") {
      const auto params = ve::model::ModelParams::from_u(a.u, bs, a.size, 2,
                                                         ve::model::Boundary::Periodic);
      r.value = ve::model::transfer_matrix_free_energy(params).free_energy;
      r.params["size"] = (long long)a.size;
      r.params["u"] = a.u;
      r.provenance = "transfer-matrix";
    } else {
      throw ve::InvalidArgument("unknown method '" + a.method + "'");
    }
    records.push_back(std::move(r));
  }
  Globals out = g;
  if (!a.sweep.empty() && !g.format_given) out.format = "csv";
  emit(out, records);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct PartitionArgs {
  int rows = 2;
  int cols = 2;
  double beta_s = 0.0;
  double u = 0.0;
  std::string boundary = "fixed";
  std::string oracle = "both";
};

int run_partition(const Globals& g, const PartitionArgs& a) {
  if (a.oracle != "enumerate" && a.oracle != "pfaffian" && a.oracle != "both") {
    throw ve::InvalidArgument("unknown oracle '" + a.oracle + "'");
  }
  const auto params = ve::model::ModelParams::from_u(a.u, a.beta_s, a.rows, a.cols,
                                                     ve::model::parse_boundary(a.boundary));
  const std::map<std::string, Scalar> p = {{"beta_s", a.beta_s},
                                           {"boundary", a.boundary},
                                           {"cols", (long long)a.cols},
                                           {"rows", (long long)a.rows},
                                           {"u", a.u}};
  std::vector<OutputRecord> records;
  std::optional<double> enumerated, pfaffian;
  if (a.oracle != "pfaffian") {
    enumerated = std::log(ve::model::enumerate_partition(params, false).partition_function);
    records.push_back({"ln_Z", p, *enumerated, "enumeration"});
  }
  if (a.oracle != "enumerate") {
    if (params.boundary() != ve::model::Boundary::FixedGroundState) {
      throw ve::InvalidArgument("the pfaffian oracle needs --boundary fixed");
    }
    const auto lattice = ve::dimer::build_decorated(params);
    pfaffian = ve::dimer::partition_dimer(ve::dimer::kasteleyn_orientation(lattice));
    records.push_back({"ln_Z", p, *pfaffian, "pfaffian"});
  }
  int code = kExitOk;
  if (enumerated && pfaffian) {
    const double diff = std::abs(std::expm1(*pfaffian - *enumerated));
    records.push_back({"relative_difference", p, diff, "pfaffian"});
    if (diff > 1e-9) code = kExitNumerical;
  }
  emit(g, records);
  if (code != kExitOk && !g.quiet) std::cerr << "oracles disagree beyond 1e-9\n";
  return code;
}

// ---------------------------------------------------------------------------

struct ConstrainedArgs {
  int rows = 2;
  int cols = 2;
  double beta_s = 0.0;
  std::vector<std::string> edges;  // "index:0|1"
  std::vector<int> site;           // row, col
  int state = 0;
  bool check = false;
};

int run_constrained(const Globals& g, const ConstrainedArgs& a) {
  const auto params = ve::model::ModelParams::free_fermion(a.beta_s, a.rows, a.cols,
                                                           ve::model::Boundary::FixedGroundState);
  const auto lattice = ve::dimer::build_decorated(params);
  const auto kasteleyn = ve::dimer::kasteleyn_orientation(lattice);
  std::map<std::string, Scalar> p = {
      {"beta_s", a.beta_s}, {"cols", (long long)a.cols}, {"rows", (long long)a.rows}};

  std::vector<ve::dimer::EdgeConstraint> constraints;
  for (const auto& text : a.edges) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ve::InvalidArgument("edge must be index:0|1");
    const std::string state = text.substr(colon + 1);
    if (state != "0" && state != "1") throw ve::InvalidArgument("edge state must be 0 or 1");
    try {
      constraints.push_back({std::stoi(text.substr(0, colon)), state == "1"});
    } catch (const std::logic_error&) {
      throw ve::InvalidArgument("malformed edge '" + text + "'");
    }
  }

  ve::dimer::ConstrainedPartition result{};
  if (!a.site.empty()) {
    if (a.site.size() != 2 || !constraints.empty()) {
      throw ve::InvalidArgument("use either --site r c with --state, or --edge");
    }
    result = ve::dimer::vertex_constrained_partition(lattice, kasteleyn, a.site[0], a.site[1],
                                                     ve::model::VertexState(a.state));
    p["site"] = std::to_string(a.site[0]) + "," + std::to_string(a.site[1]);
    p["state"] = (long long)a.state;
  } else {
    if (constraints.empty()) throw ve::InvalidArgument("no constraints given");
    result = ve::dimer::constrained_partition(kasteleyn, constraints);
    std::string spec;
    for (const auto& t : a.edges) spec += (spec.empty() ? "" : " ") + t;
    p["edges"] = spec;
  }
  std::vector<OutputRecord> records = {{"ratio", p, result.ratio, "pfaffian"},
                                       {"ln_Z_cons", p, result.log_value(), "pfaffian"}};
  int code = kExitOk;
  if (a.check) {
    if (!a.site.empty()) {
      const auto lines = ve::model::lines_of(ve::model::VertexState(a.state),
                                             ve::model::sublattice_of(a.site[0], a.site[1]));
      const std::array<bool, 4> wanted = {lines.left, lines.top, lines.right, lines.bottom};
      const auto site = lattice.site_edges(a.site[0], a.site[1]);
      constraints.clear();
      bool impossible = false;
      for (int k = 0; k < 4; ++k) {
        if (site[k]) constraints.push_back({*site[k], wanted[k]});
        else if (wanted[k]) impossible = true;
      }
      if (impossible) constraints.clear();
      const double z0 = ve::dimer::enumerate_matchings(lattice.graph());
      const double direct =
          impossible ? 0.0 : ve::dimer::enumerate_matchings(lattice.graph(), constraints) / z0;
      records.push_back({"ratio", p, direct, "enumeration"});
      if (std::abs(direct - result.ratio) > 1e-9) code = kExitNumerical;
    } else {
      const double z0 = ve::dimer::enumerate_matchings(lattice.graph());
      const double direct = ve::dimer::enumerate_matchings(lattice.graph(), constraints) / z0;
      records.push_back({"ratio", p, direct, "enumeration"});
      if (std::abs(direct - result.ratio) > 1e-9) code = kExitNumerical;
    }
  }
  emit(g, records);
  return code;
}

// ---------------------------------------------------------------------------

struct PerturbArgs {
  double beta_s = 0.0;
  double u = 0.0;
};

int run_perturb(const Globals& g, const PerturbArgs& a) {
  ve::thermo::QuadratureSpec spec;
  spec.tolerance = g.tol;
  const auto fo = ve::thermo::first_order_free_energy(a.beta_s, a.u, spec);
  const double za = ve::thermo::za_ratio(a.beta_s, spec).value;
  const double zb = ve::thermo::zb_ratio(a.beta_s, spec).value;
  const std::map<std::string, Scalar> p = {{"beta_s", a.beta_s}, {"u", a.u}};
  const std::vector<OutputRecord> records = {
      {"F0", p, fo.f0, "quadrature"},
      {"za_ratio", p, za, "quadrature"},
      {"zb_ratio", p, zb, "quadrature"},
      {"coefficient_from_constraints", p, fo.coefficient_from_constraints, "quadrature"},
      {"coefficient_from_derivative", p, fo.coefficient_from_derivative, "quadrature"},
      {"F", p, fo.free_energy, "quadrature"}};
  emit(g, records);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct SeriesArgs {
  std::string target;
  int order = 4;
};

int run_series(const Globals& g, const SeriesArgs& a) {
  namespace s = ve::series;
  std::vector<s::Rational> coefficients, bracket;
  s::PiRational prefactor(1, 0);
  std::string variable;
  if (a.target == "stirling") {
    const auto r = s::stirling_correction(a.order);
    coefficients = bracket = r.coefficients();
    variable = "1/n";
  } else if (a.target == "fst") {
    const auto r = s::singular_t_series(a.order);
    coefficients = r.series.coefficients();
    bracket = r.bracket(a.order);
    prefactor = r.scale;
    variable = "t";
  } else if (a.target == "sng") {
    const auto r = s::singular_betas_series(a.order);
    coefficients = r.series.coefficients();
    bracket = r.bracket(a.order, 2);
    prefactor = r.scale;
    variable = "beta_s";
  } else if (a.target == "b2") {
    const auto r = s::b2_series(a.order);
    coefficients = r.series.coefficients();
    bracket = r.bracket(a.order, 2);
    prefactor = r.scale;
    variable = "beta_s";
  } else if (a.target == "t-map") {
    const auto r = s::t_of_betas(a.order);
    coefficients = r.coefficients();
    bracket = s::LogSeries{r, s::PiRational(1, 0), 0}.bracket(a.order, 2);
    variable = "beta_s";
  } else {
    throw ve::InvalidArgument("unknown series target '" + a.target + "'");
  }
  if (g.format == "csv") {
    std::vector<OutputRecord> records;
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
      records.push_back({"coefficient",
                         {{"degree", (long long)k},
                          {"prefactor", prefactor.to_string()},
                          {"target", a.target}},
                         s::to_string(coefficients[k]),
                         "exact-series"});
    }
    emit(g, records);
  } else {
    nlohmann::json j;  // std::map-backed: keys sorted
    j["target"] = a.target;
    j["order"] = a.order;
    j["variable"] = variable;
    j["coefficients"] = to_strings(coefficients);
    j["bracket"] = to_strings(bracket);
    j["prefactor"] = prefactor.to_string();
    j["provenance"] = "exact-series";
    std::cout << j.dump() << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CoulombArgs {
  std::optional<double> beta_eps;
  std::optional<double> u;
  int expansion = -1;
  bool verify = false;
};

int run_coulomb(const Globals& g, const CoulombArgs& a) {
  if (a.verify) {
    try {
      const auto report = ve::coulomb::verify_first_order();
      std::cout << report.to_json() << '\n';
      return kExitOk;
    } catch (const ve::VerificationFailed& e) {
      if (!g.quiet) std::cerr << e.what() << '\n';
      return kExitVerification;
    }
  }
  std::vector<OutputRecord> records;
  if (a.beta_eps || a.u) {
    if (a.beta_eps && a.u) throw ve::InvalidArgument("give --beta-eps or --u, not both");
    const double j = a.u ? ve::coulomb::j_of_u(*a.u) : ve::coulomb::j_of_betaeps(*a.beta_eps);
    const auto e = a.u ? ve::coulomb::singular_exponent_u(*a.u)
                       : ve::coulomb::singular_exponent(*a.beta_eps);
    std::map<std::string, Scalar> p;
    if (a.u) p["u"] = *a.u;
    else p["beta_eps"] = *a.beta_eps;
    records.push_back({"j", p, j, "exact-series"});
    records.push_back({"exponent", p, e.divergent ? Scalar(std::string("divergent")) : Scalar(e.value),
                       "exact-series"});
  }
  if (a.expansion >= 0) {
    const auto coeffs = ve::coulomb::exponent_u_expansion(a.expansion);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      std::string text;
      for (const auto& [power, q] : coeffs[k].terms()) {
        if (!text.empty()) text += " + ";
        text += ve::series::PiRational(q, power).to_string();
      }
      records.push_back({"exponent_coefficient",
                         {{"order", (long long)k}},
                         text.empty() ? std::string("{0, 0}") : text,
                         "exact-series"});
    }
  }
  if (records.empty()) throw ve::InvalidArgument("coulomb needs --beta-eps, --u, --expansion or --verify");
  emit(g, records);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string suite = "all";
  std::string fault;
};

int run_verify(const Globals& g, const VerifyArgs& a) {
  ve::verify::VerifyOptions options;
  if (a.fault == "kasteleyn-sign") {
    options.flip_kasteleyn_sign = true;
  } else if (!a.fault.empty()) {
    throw ve::InvalidArgument("unknown fault '" + a.fault + "'");
  }
  const auto results = ve::verify::run_suite(a.suite, options);
  std::cout << ve::verify::report_json(a.suite, results) << '\n';
  if (ve::verify::all_passed(results)) return kExitOk;
  if (!g.quiet) {
    for (const auto& r : results) {
      if (!r.passed) std::cerr << "FAILED criterion " << r.id << " (" << r.name << ")\n";
    }
  }
  return kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free-fermion expansion tools for staggered six-vertex models"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->each([&](const std::string&) { g.format_given = true; });
  app.add_option("--tol", g.tol, "Quadrature tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Reserved");
  app.add_flag("--quiet", g.quiet, "Suppress diagnostics on stderr");

  FreeEnergyArgs fe;
  auto* fe_cmd = app.add_subcommand("free-energy", "Reduced free energy per vertex F0(beta s)");
  fe_cmd->add_option("--beta-s", fe.beta_s, "Staggered field beta*s");
  fe_cmd->add_option("--method", fe.method, "quad, series or finite")
      ->check(CLI::IsMember({"quad", "series", "finite"}));
  fe_cmd->add_option("--size", fe.size, "Transfer-matrix width (finite)");
  fe_cmd->add_option("--u", fe.u, "U = beta eps - ln2/2 (finite)");
  fe_cmd->add_option("--sweep", fe.sweep, "a:b:step grid in beta s, endpoints included");

  PartitionArgs pa;
  auto* pa_cmd = app.add_subcommand("partition", "Finite-lattice partition function");
  pa_cmd->add_option("--rows", pa.rows)->required();
  pa_cmd->add_option("--cols", pa.cols)->required();
  pa_cmd->add_option("--beta-s", pa.beta_s);
  pa_cmd->add_option("--u", pa.u, "U = beta eps - ln2/2");
  pa_cmd->add_option("--boundary", pa.boundary, "fixed or periodic");
  pa_cmd->add_option("--oracle", pa.oracle, "enumerate, pfaffian or both");

  ConstrainedArgs ca;
  auto* ca_cmd = app.add_subcommand("constrained", "Constrained dimer partition function");
  ca_cmd->add_option("--rows", ca.rows);
  ca_cmd->add_option("--cols", ca.cols);
  ca_cmd->add_option("--beta-s", ca.beta_s);
  ca_cmd->add_option("--edge", ca.edges, "Edge constraint index:0|1 (repeatable)");
  ca_cmd->add_option("--site", ca.site, "Vertex row and column")->expected(2);
  ca_cmd->add_option("--state", ca.state, "Vertex state 1-6")->check(CLI::Range(1, 6));
  ca_cmd->add_flag("--check", ca.check, "Also enumerate constrained matchings");

  PerturbArgs pe;
  auto* pe_cmd = app.add_subcommand("perturb", "Free energy to first order in U");
  pe_cmd->add_option("--beta-s", pe.beta_s);
  pe_cmd->add_option("--u", pe.u);

  SeriesArgs se;
  auto* se_cmd = app.add_subcommand("series", "Exact rational series");
  se_cmd->add_option("--target", se.target, "stirling, fst, sng, b2 or t-map")->required();
  se_cmd->add_option("--order", se.order);

  CoulombArgs co;
  auto* co_cmd = app.add_subcommand("coulomb", "Coulomb-gas exponent and first-order check");
  co_cmd->add_option("--beta-eps", co.beta_eps);
  co_cmd->add_option("--u", co.u);
  co_cmd->add_option("--expansion", co.expansion, "Expansion order in U (<= 4)");
  co_cmd->add_flag("--verify", co.verify);

  VerifyArgs ve_args;
  auto* ve_cmd = app.add_subcommand("verify", "Run the acceptance checks");
  ve_cmd->add_option("--suite", ve_args.suite)
      ->check(CLI::IsMember({"all", "kasteleyn", "identity", "series", "coulomb"}));
  ve_cmd->add_option("--inject-fault", ve_args.fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*fe_cmd) return run_free_energy(g, fe);
    if (*pa_cmd) return run_partition(g, pa);
    if (*ca_cmd) return run_constrained(g, ca);
    if (*pe_cmd) return run_perturb(g, pe);
    if (*se_cmd) return run_series(g, se);
    if (*co_cmd) return run_coulomb(g, co);
    if (*ve_cmd) return run_verify(g, ve_args);
  } catch (const ve::Error& e) {
    if (!g.quiet) std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitUsage;
}

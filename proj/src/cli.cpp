#include "latrule/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "latrule/diophantine.hpp"
#include "latrule/dyadic.hpp"
#include "latrule/error_model.hpp"
#include "latrule/lattice.hpp"
#include "latrule/parallel.hpp"
#include "latrule/quadrature.hpp"
#include "latrule/zaremba.hpp"

namespace latrule::cli {

namespace mp = boost::multiprecision;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

struct LatticeFlags {
  std::string family = "rank1";
  std::int64_t n = 0;
  std::string alpha;
  std::string gen;
  int dim = 0;
  std::string a;
};

void add_lattice_flags(CLI::App* cmd, LatticeFlags& f, bool with_frolov) {
  std::vector<std::string> families{"kronecker", "rank1"};
  if (with_frolov) families.push_back("frolov");
  cmd->add_option("--family", f.family, "Lattice family")->check(CLI::IsMember(families));
  cmd->add_option("--n", f.n, "Number of points N");
  cmd->add_option("--alpha", f.alpha, "Kronecker vector: golden, sqrt2, sqrtprimes:2,3, exp:1, or 1/3,0.25");
  cmd->add_option("--gen", f.gen, "Rank-1 generator g_1,...,g_{d-1}");
  cmd->add_option("--dim", f.dim, "Dimension d");
  if (with_frolov) cmd->add_option("--a", f.a, "Frolov shrinking factor");
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    Rational q = parse_rational(item);
    if (mp::denominator(q) != 1) throw InvalidArgument("expected an integer, got '" + item + "'");
    out.push_back(static_cast<std::int64_t>(mp::numerator(q)));
  }
  if (out.empty()) throw InvalidArgument("empty integer list");
  return out;
}

std::vector<std::int64_t> first_primes(std::size_t count) {
  std::vector<std::int64_t> p;
  for (std::int64_t n = 2; p.size() < count; ++n)
    if (is_prime(n)) p.push_back(n);
  return p;
}

LatticeSpec build_spec(const LatticeFlags& f) {
  if (f.family == "frolov") {
    const int d = f.dim > 0 ? f.dim : 2;
    if (f.a.empty()) throw InvalidArgument("--a is required for the Frolov family");
    return LatticeSpec::frolov(d, to_real(parse_rational(f.a)));
  }
  if (f.n < 1) throw InvalidArgument("--n must be a positive integer");
  if (f.family == "rank1") {
    if (f.gen.empty()) throw InvalidArgument("--gen is required for the rank1 family");
    auto g = parse_int_list(f.gen);
    if (f.dim > 0 && static_cast<std::size_t>(f.dim) != g.size() + 1)
      throw InvalidArgument("--gen needs d-1 = " + std::to_string(f.dim - 1) + " components");
    return LatticeSpec::rank1(f.n, g);
  }
  AlphaKind kind;
  if (!f.alpha.empty())
    kind = parse_alpha_kind(f.alpha);
  else if (f.dim <= 2)
    kind = alpha::GoldenRatio{};
  else
    kind = alpha::SqrtPrimes{first_primes(static_cast<std::size_t>(f.dim - 1))};
  const int d = f.dim > 0 ? f.dim : static_cast<int>(alpha_component_count(kind)) + 1;
  if (std::holds_alternative<alpha::GoldenRatio>(kind) && d != 2)
    throw InvalidArgument("the golden ratio supplies one component; use --dim 2");
  return LatticeSpec::kronecker(f.n, named_alpha(kind, d).values);
}

json number(const Real& x) {
  if (mp::isfinite(x) && x == mp::floor(x) && mp::abs(x) < Real(9007199254740992.0))
    return static_cast<std::int64_t>(x);
  return static_cast<double>(x);
}

json number(double x) { return number(Real(x)); }

std::string spec_summary(const LatticeSpec& spec) {
  std::ostringstream s;
  s << "family=" << spec.family_name() << " d=" << spec.dim();
  if (spec.structured()) s << " N=" << spec.point_count();
  if (const auto* r = spec.rank1_params()) {
    s << " g=";
    for (std::size_t j = 0; j < r->g.size(); ++j) s << (j ? "," : "") << r->g[j];
  }
  if (const auto* f = spec.frolov_params()) s << " a=" << format_sig17(f->a);
  return s.str();
}

json zaremba_json(const LatticeSpec& spec, const ZarembaResult& z) {
  json j;
  j["family"] = spec.family_name();
  j["d"] = spec.dim();
  if (spec.structured()) j["N"] = spec.point_count();
  j["rho"] = number(z.rho);
  j["rho_exact"] = z.rho_exact ? json(rational_string(*z.rho_exact)) : json(nullptr);
  json w = json::array();
  for (const auto& x : z.witness) w.push_back(number(x));
  j["witness"] = w;
  j["coefficients"] = z.coefficients;
  j["exact"] = z.exact;
  j["complete"] = z.complete;
  j["near_tie"] = z.near_tie;
  return j;
}

double parse_extended(const std::string& text) {
  if (text == "inf" || text == "infinity") return kInfinity;
  return static_cast<double>(to_real(parse_rational(text)));
}

struct Sink {
  std::ofstream file;
  std::ostream* out;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lattice rules: construction, Zaremba index, dyadic counts, error bounds, QMC studies", "latrule"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  unsigned threads = 0;
  std::string output;
  std::string format;
  app.add_option("--threads", threads, "Cap on worker threads (0: all cores)");
  app.add_option("--output", output, "Write data to this file instead of standard output");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  LatticeFlags pf, zf, df, bf;

  auto* points = app.add_subcommand("points", "Enumerate the lattice point set");
  add_lattice_flags(points, pf, true);

  auto* zaremba = app.add_subcommand("zaremba", "Zaremba index with a witness dual point");
  add_lattice_flags(zaremba, zf, true);
  bool brute = false;
  std::int64_t box = 0;
  zaremba->add_flag("--brute", brute, "Scan all coefficient vectors in a box");
  zaremba->add_option("--box", box, "Coefficient box half-width");

  auto* cfrac = app.add_subcommand("cfrac", "Continued fraction expansions");
  std::string rational_text, real_name;
  std::size_t depth = 8;
  auto* rat_opt = cfrac->add_option("--rational", rational_text, "Exact rational p/q");
  auto* real_opt = cfrac->add_option("--real", real_name, "Named real: golden, sqrt2, sqrtprimes:3, exp:1");
  cfrac->add_option("--depth", depth, "Number of partial quotients");
  rat_opt->excludes(real_opt);

  auto* census = app.add_subcommand("dyadic-census", "Dual-point counts on dyadic annuli");
  add_lattice_flags(census, df, true);
  int census_mmax = 12;
  census->add_option("--mmax", census_mmax, "Largest |m|_1");

  auto* bound = app.add_subcommand("bound", "Worst-case error bounds");
  add_lattice_flags(bound, bf, true);
  std::string s_text = "2", p_text = "2", theta_text = "2";
  int bound_mmax = 0;
  bound->add_option("--s", s_text, "Smoothness s");
  bound->add_option("--p", p_text, "Integrability p (number or inf)");
  bound->add_option("--theta", theta_text, "Fine index theta (number or inf)");
  bound->add_option("--mmax", bound_mmax, "Truncation level (default ceil(2 log2 N) + 8)");

  auto* converge = app.add_subcommand("converge", "Empirical QMC convergence study");
  std::string rule = "fibonacci", integrand = "bump:2";
  std::int64_t nmin = 10, nmax = 20;
  int conv_dim = 2;
  std::string conv_s, conv_theta = "2";
  bool conv_sum = false;
  converge->add_option("--rule", rule, "fibonacci | korobov | kronecker")
      ->check(CLI::IsMember({"fibonacci", "korobov", "kronecker"}));
  converge->add_option("--integrand", integrand, "bump:a");
  converge->add_option("--nmin", nmin, "Fibonacci index, or smallest N");
  converge->add_option("--nmax", nmax, "Fibonacci index, or largest N");
  converge->add_option("--dim", conv_dim, "Dimension (korobov, kronecker)");
  converge->add_option("--s", conv_s, "Smoothness for the bound (default: hint - 0.6)");
  converge->add_option("--theta", conv_theta, "theta for the bound");
  converge->add_flag("--bound-sum", conv_sum, "Also evaluate the truncated dyadic sum");

  auto* search = app.add_subcommand("search-gen", "Generator maximizing the Zaremba index");
  std::int64_t search_n = 0;
  int search_dim = 2;
  std::string mode = "full";
  search->add_option("--n", search_n, "Number of points N")->required();
  search->add_option("--dim", search_dim, "Dimension d");
  search->add_option("--mode", mode, "full | korobov")->check(CLI::IsMember({"full", "korobov"}));

  std::vector<const char*> argv{"latrule"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalidArgument;
  }

  Sink sink{{}, &out};
  try {
    set_thread_limit(threads);
    if (!output.empty()) {
      sink.file.open(output);
      if (!sink.file) throw InvalidArgument("cannot open output file '" + output + "'");
      sink.out = &sink.file;
    }
    std::ostream& o = *sink.out;
    auto want = [&](const char* fallback) { return format.empty() ? std::string(fallback) : format; };

    if (*points) {
      LatticeSpec spec = build_spec(pf);
      PointSet ps = enumerate_points(spec);
      if (want("csv") == "csv") {
        o << "# " << spec_summary(spec) << " points=" << ps.size() << " weight=" << format_sig17(ps.weight()) << "\n";
        write_points_csv(o, ps);
      } else {
        json j;
        j["family"] = spec.family_name();
        j["weight"] = number(ps.weight());
        json rows = json::array();
        for (std::size_t i = 0; i < ps.size(); ++i) rows.push_back(ps.point(i));
        j["points"] = rows;
        o << j.dump(2) << "\n";
      }
    } else if (*zaremba) {
      LatticeSpec spec = build_spec(zf);
      ZarembaResult z;
      if (brute) {
        std::int64_t b = box > 0 ? box : (spec.structured() ? spec.point_count() : 0);
        if (b <= 0) throw InvalidArgument("--box is required for brute force on this family");
        z = zaremba_brute(spec, b);
      } else {
        ZarembaOptions opt;
        opt.box = box;
        z = zaremba_index(spec, opt);
      }
      json j = zaremba_json(spec, z);
      j["method"] = brute ? "brute" : "index";
      if (want("json") == "json") {
        o << j.dump(2) << "\n";
      } else {
        o << "rho,exact,complete";
        for (std::size_t i = 0; i < z.witness.size(); ++i) o << ",z" << (i + 1);
        o << "\n" << format_sig17(z.rho) << "," << z.exact << "," << z.complete;
        for (const auto& x : z.witness) o << "," << format_sig17(x);
        o << "\n";
      }
    } else if (*cfrac) {
      json j;
      if (!rational_text.empty()) {
        Rational q = parse_rational(rational_text);
        CFExpansion c = cfrac_rational(mp::numerator(q), mp::denominator(q));
        CFExpansion v = c.variant_form();
        auto k_of = [](const CFExpansion& e) { return e.quotients.empty() ? json(nullptr) : json(K_value(e).str()); };
        j["input"] = rational_string(q);
        j["canonical"] = {{"expansion", c.str()}, {"K", k_of(c)}};
        j["variant"] = {{"expansion", v.str()}, {"K", k_of(v)}};
        json conv = json::array();
        for (const auto& cv : convergents(c)) conv.push_back({{"p", cv.p.str()}, {"q", cv.q.str()}});
        j["convergents"] = conv;
      } else if (!real_name.empty()) {
        if (depth < 1) throw InvalidArgument("--depth must be at least 1");
        AlphaKind kind = parse_alpha_kind(real_name);
        CertifiedReal x = named_alpha(kind, 2).values.front();
        auto conv = convergents(x, depth);
        CFExpansion e = certified_cfrac(x, depth).expansion;
        j["input"] = real_name;
        j["expansion"] = e.str();
        j["K"] = e.quotients.empty() ? json(nullptr) : json(K_value(e).str());
        json arr = json::array();
        for (std::size_t k = 0; k < conv.size(); ++k)
          arr.push_back({{"k", k + 1}, {"p", conv[k].p.str()}, {"q", conv[k].q.str()}});
        j["convergents"] = arr;
      } else {
        throw InvalidArgument("cfrac needs --rational or --real");
      }
      o << j.dump(2) << "\n";
    } else if (*census) {
      LatticeSpec spec = build_spec(df);
      ZarembaResult z = zaremba_index(spec);
      auto rows = dyadic_census(spec, census_mmax, static_cast<double>(z.rho));
      if (want("csv") == "csv") {
        o << "# " << spec_summary(spec) << " rho=" << format_sig17(z.rho) << "\n";
        write_census_csv(o, rows);
      } else {
        json arr = json::array();
        for (const auto& r : rows)
          arr.push_back({{"m", r.m.m}, {"l1", r.l1}, {"count", r.count}, {"bound", number(r.bound)}});
        o << json{{"rho", number(z.rho)}, {"rows", arr}}.dump(2) << "\n";
      }
    } else if (*bound) {
      LatticeSpec spec = build_spec(bf);
      BoundParams params;
      params.s = parse_extended(s_text);
      params.p = parse_extended(p_text);
      params.theta = parse_extended(theta_text);
      params.Mmax = bound_mmax;
      params.validate();
      ZarembaResult z = zaremba_index(spec);
      const double rho = static_cast<double>(z.rho);
      BoundSum bs = wce_bound_sum(spec, params, rho);
      const double dT = spec.structured() ? static_cast<double>(spec.point_count())
                                          : static_cast<double>(mp::abs(1 / generator_matrix(spec).determinant()));
      const double closed = wce_bound_closed(rho, dT, static_cast<int>(spec.dim()), params);
      if (want("json") == "json") {
        json j{{"family", spec.family_name()}, {"rho", number(rho)},      {"d_T", number(dT)},
               {"Mmax", bs.Mmax},              {"bound_sum", bs.value},   {"tail_estimate", bs.tail_estimate},
               {"bound_closed", closed}};
        j["warning"] = bs.warning ? json(*bs.warning) : json(nullptr);
        o << j.dump(2) << "\n";
      } else {
        BoundRow row{spec.structured() ? spec.point_count() : static_cast<std::int64_t>(std::llround(dT)), rho, bs,
                     closed};
        write_bound_csv(o, {row});
      }
      if (bs.warning) err << "warning: " << *bs.warning << "\n";
    } else if (*converge) {
      if (integrand.rfind("bump:", 0) != 0) throw InvalidArgument("--integrand must be bump:a");
      auto a = parse_int_list(integrand.substr(5));
      if (a.size() != 1) throw InvalidArgument("--integrand must be bump:a");
      std::vector<LatticeSpec> family;
      int d = rule == "fibonacci" ? 2 : conv_dim;
      if (d < 2) throw InvalidArgument("--dim must be at least 2");
      if (nmin > nmax) throw InvalidArgument("--nmin exceeds --nmax");
      if (rule == "fibonacci") {
        for (std::int64_t n = nmin; n <= nmax; ++n) {
          auto fr = fibonacci_rule(static_cast<int>(n));
          family.push_back(LatticeSpec::rank1(fr.N, {fr.g}));
        }
      } else {
        if (nmin < 2) throw InvalidArgument("--nmin must be at least 2");
        for (std::int64_t N = nmin; N <= nmax; N *= 2) {
          if (rule == "korobov") {
            family.push_back(LatticeSpec::rank1(N, search_best_gen(N, d, SearchMode::Korobov).g));
          } else {
            AlphaKind kind = d == 2 ? AlphaKind(alpha::GoldenRatio{})
                                    : AlphaKind(alpha::SqrtPrimes{first_primes(static_cast<std::size_t>(d - 1))});
            family.push_back(LatticeSpec::kronecker(N, named_alpha(kind, d).values));
          }
        }
      }
      Integrand f(Bump{static_cast<int>(a[0]), d});
      BoundParams params;
      params.s = conv_s.empty() ? f.smoothness_hint() - 0.6 : parse_extended(conv_s);
      params.theta = parse_extended(conv_theta);
      params.p = 2;
      params.validate();
      StudyOptions so;
      so.with_bound_sum = conv_sum;
      ConvergenceStudy study = convergence_study(family, f, params, so);
      if (want("csv") == "csv") {
        o << "# rule=" << rule << " integrand=" << integrand << " d=" << d << " s=" << format_sig17(params.s)
          << " theta=" << format_sig17(params.theta) << "\n";
        write_convergence_csv(o, study);
      } else {
        json arr = json::array();
        for (const auto& r : study.rows)
          arr.push_back({{"N", r.N},
                         {"error", r.abs_error},
                         {"bound_closed", r.bound_closed},
                         {"bound_sum", r.bound_sum ? json(*r.bound_sum) : json(nullptr)}});
        o << json{{"rows", arr}, {"slope", study.fit.slope}, {"residual", study.fit.residual}}.dump(2) << "\n";
      }
    } else if (*search) {
      SearchResult r = search_best_gen(search_n, search_dim, mode == "full" ? SearchMode::Full : SearchMode::Korobov);
      if (want("csv") == "csv") {
        o << "# N=" << search_n << " d=" << search_dim << " mode=" << mode << " candidates=" << r.candidates << "\n";
        for (int j = 1; j < search_dim; ++j) o << "g" << j << ",";
        o << "rho";
        for (int j = 1; j <= search_dim; ++j) o << ",witness" << j;
        o << "\n";
        for (auto g : r.g) o << g << ",";
        o << format_sig17(r.result.rho);
        for (const auto& x : r.result.witness) o << "," << format_sig17(x);
        o << "\n";
      } else {
        json j = zaremba_json(LatticeSpec::rank1(search_n, r.g), r.result);
        j["g"] = r.g;
        j["mode"] = mode;
        j["candidates"] = r.candidates;
        if (mode == "korobov") j["korobov_g"] = r.korobov_g;
        o << j.dump(2) << "\n";
      }
    }
    o.flush();
    return kOk;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidArgument;
  } catch (const PrecisionError& e) {
    err << "error: " << e.what() << " (last certain index " << e.last_certain_index() << ")\n";
    return kInvalidArgument;
  } catch (const InsufficientData& e) {
    err << "error: " << e.what() << "\n";
    return kInvalidArgument;
  } catch (const ResourceLimit& e) {
    err << "error: " << e.what() << "\n";
    return kResourceLimit;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace latrule::cli

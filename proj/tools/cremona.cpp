// Command-line front end: one subcommand per computation.
//
// Exit status: 0 on success or a "true" answer, 1 on a "false" answer (word
// not trivial, words differ, maps not inverse, Følner bounds violated), 2 on
// any input error.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "cremona/cremona.hpp"
#include "cremona/report.hpp"

namespace {

using namespace cremona;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The text currently being parsed, for error locations.
struct Source {
  std::string name;
  std::string text;
};
Source g_source;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string& load(const std::string& name, std::string text) {
  g_source = {name, std::move(text)};
  return g_source.text;
}

void print_parse_error(const ParseError& e) {
  const auto& text = g_source.text;
  const std::size_t offset = std::min(e.span().offset, text.size());
  const std::size_t line_start = text.rfind('\n', offset == 0 ? 0 : offset - 1);
  const std::size_t begin = line_start == std::string::npos || offset == 0 ? 0 : line_start + 1;
  const std::size_t end = std::min(text.find('\n', offset), text.size());
  const std::size_t line_no = static_cast<std::size_t>(std::count(text.begin(), text.begin() + begin, '\n')) + 1;
  std::cerr << g_source.name << ":" << line_no << ":" << offset - begin + 1 << ": " << e.what() << "\n";
  std::cerr << "  " << text.substr(begin, end - begin) << "\n";
  std::cerr << "  " << std::string(offset - begin, ' ') << std::string(std::max<std::size_t>(e.span().length, 1), '^')
            << "\n";
}

std::vector<GeneratorSpec> load_specs(const std::string& path) {
  return parse_generator_file(load(path, read_file(path)));
}

std::vector<CremonaElement> load_generators(const std::string& path) { return certify_generators(load_specs(path)); }

Rational parse_rational(const std::string& text, const char* what) {
  Rational q;
  if (text.empty() || q.set_str(text, 10) != 0 || q.get_den() == 0) {
    throw InputError(std::string("--") + what + " expects an integer or a fraction a/b, got '" + text + "'");
  }
  q.canonicalize();
  return q;
}

std::vector<unsigned> parse_m_range(const std::string& text) {
  auto number = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
      throw InputError("--m expects A or A..B with positive integers, got '" + text + "'");
    }
    const unsigned long v = std::stoul(s);
    if (v == 0 || v > 64) throw InputError("--m values must lie in 1..64");
    return static_cast<unsigned>(v);
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) return {number(text)};
  const unsigned a = number(text.substr(0, dots)), b = number(text.substr(dots + 2));
  if (a > b) throw InputError("--m range must be ascending");
  std::vector<unsigned> out;
  for (unsigned m = a; m <= b; ++m) out.push_back(m);
  return out;
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

std::string slope_text(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << v;
  return out.str();
}

// Each generator, its inverse, and the identity, without repetitions.
std::vector<CremonaElement> symmetric_set(const std::vector<CremonaElement>& gens) {
  std::vector<CremonaElement> out{CremonaElement::identity(gens.front().dimension(), gens.front().field()).renamed("id")};
  auto add = [&](const CremonaElement& e) {
    for (const auto& f : out) {
      if (tuple_eq(f.forward(), e.forward())) return;
    }
    out.push_back(e);
  };
  for (const auto& g : gens) add(g);
  for (const auto& g : gens) add(g.inverted());
  return out;
}

int run_check(const std::string& gens, const std::vector<std::string>& maps) {
  if (gens.empty() && maps.empty()) throw InputError("check needs --gens or --map");
  for (const auto& m : maps) std::cout << render(parse_map_expr(load("--map", m))) << "\n";
  if (!gens.empty()) {
    for (const auto& e : load_generators(gens)) std::cout << render(e) << "\n";
    std::cout << "certified: true\n";
  }
  return 0;
}

int run_compose(const std::string& gens, const std::string& word, const std::vector<std::string>& maps) {
  if (!gens.empty()) {
    const GeneratorSystem sys(load_generators(gens));
    const auto w = parse_word(load("--word", word), sys.names());
    std::cout << render(evaluate_word(sys, w).renamed("w")) << "\n";
    return 0;
  }
  if (maps.empty()) throw InputError("compose needs --gens with --word, or one or more --map");
  std::vector<BirationalTuple> tuples;
  for (const auto& m : maps) tuples.push_back(parse_map_expr(load("--map", m)));
  BirationalTuple value = tuples.back();
  for (std::size_t k = tuples.size() - 1; k-- > 0;) value = compose(tuples[k], value);
  std::cout << render(value) << "\n";
  return 0;
}

int run_word(const std::string& gens, const std::string& word) {
  const GeneratorSystem sys(load_generators(gens));
  const auto w = parse_word(load("--word", word), sys.names());
  const bool trivial = is_identity_word(sys, w);
  std::cout << "identity: " << bool_text(trivial) << "\n";
  return trivial ? 0 : 1;
}

int run_semigroup(const std::string& gens, const std::string& word, const std::string& word2) {
  const auto specs = load_specs(gens);
  std::vector<BirationalTuple> sys;
  std::vector<std::string> names;
  for (const auto& s : specs) {
    sys.push_back(s.forward);
    names.push_back(s.name);
  }
  const auto w = parse_semigroup_word(load("--word", word), names);
  const auto w2 = parse_semigroup_word(load("--word2", word2), names);
  const bool equal = semigroup_words_equal(sys, w, w2);
  std::cout << "equal: " << bool_text(equal) << "\n";
  return equal ? 0 : 1;
}

int run_specialize(const std::string& gens, std::uint64_t p0, const std::string& format) {
  const auto W = symmetric_set(load_generators(gens));
  const auto plan = make_plan(W, p0);
  const auto reduced = specialize_chunk(plan, plan.chosen_prime);
  if (format == "json") {
    Json out = to_json(plan);
    Json elems = Json::array();
    for (const auto& e : reduced) elems.push_back(render(e));
    out["elements"] = elems;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "c1: " << rational_text(plan.c1) << "\nc2: " << rational_text(plan.c2) << "\nbadPrimes:";
    for (const auto& p : plan.bad_primes) std::cout << " " << p;
    std::cout << "\nchosenPrime: " << plan.chosen_prime << "\n";
    for (const auto& e : reduced) std::cout << render(e) << "\n";
  }
  return 0;
}

struct SoficArgs {
  std::string gens;
  std::uint64_t p = 0;
  std::string m = "1";
  std::uint64_t cap = PointTable::kDefaultCap;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::size_t limit = 64;
  bool no_close = false;
};

int run_sofic(const SoficArgs& a) {
  auto gens = load_generators(a.gens);
  if (gens.front().field().is_rational()) {
    const auto plan = make_plan(symmetric_set(gens), a.p == 0 ? 2 : a.p);
    const std::uint64_t p = a.p == 0 ? plan.chosen_prime : a.p;
    auto reduced = specialize_chunk(plan, p);
    gens.clear();
    for (const auto& e : reduced) {
      if (e.name() != "id" && e.name().find("^-1") == std::string::npos) gens.push_back(e);
    }
  } else if (a.p != 0 && gens.front().field().characteristic() != a.p) {
    throw InputError("--p " + std::to_string(a.p) + " does not match " + gens.front().field().tag());
  }
  const auto closure = a.no_close ? Closure{symmetric_set(gens), true} : close_under_products(gens, a.limit);
  ReportOptions opts;
  opts.cap = a.cap;
  if (a.seed) opts.extension = {Extension::Mode::random, *a.seed};
  const auto prof = profile_points(closure.elements, parse_m_range(a.m), opts);

  if (a.format == "csv") {
    std::cout << to_csv(prof);
  } else if (a.format == "json") {
    Json out{{"field", closure.elements.front().field().tag()}, {"closed", closure.closed}};
    Json labels = Json::array();
    for (const auto& e : closure.elements) labels.push_back(e.name());
    out["elements"] = labels;
    const Json body = to_json(prof);
    for (const auto& [k, v] : body.items()) out[k] = v;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "field: " << closure.elements.front().field().tag() << "\nelements:";
    for (const auto& e : closure.elements) std::cout << " " << e.name();
    std::cout << (closure.closed ? "" : " (truncated)") << "\n";
    for (const auto& pt : prof.points) {
      std::cout << "m=" << pt.m << " n=" << pt.n << " epsilon=" << rational_text(pt.epsilon)
                << " r=" << (pt.r ? rational_text(*pt.r) : pt.epsilon == 0 ? "inf" : "none");
      if (pt.slope) std::cout << " slope=" << slope_text(*pt.slope);
      std::cout << "\n";
    }
    if (prof.fitted_slope) std::cout << "fitted slope: " << slope_text(*prof.fitted_slope) << "\n";
  }
  return 0;
}

int run_chunk_sigma(const std::string& path, const std::string& r_text, std::size_t n_max, std::uint64_t cap,
                    const std::string& format) {
  const Chunk chunk = parse_chunk_text(load(path, read_file(path)));
  const Rational r = parse_rational(r_text, "r");
  const Integer search_cap(static_cast<unsigned long>(cap));
  const auto found = sofic_search(chunk, r, n_max, search_cap);
  const auto rep = injective_rep_search(chunk, n_max, search_cap);
  std::optional<FiniteMap> regular;
  if (rep) regular = regular_extension(*rep);
  const bool dichotomy = !found || dichotomy_consistent(*found, chunk, r);

  if (format == "json") {
    Json out{{"r", rational_text(r)}, {"nMax", n_max}};
    out["sigmaUpper"] = found ? Json(found->n) : Json(nullptr);
    out["map"] = found ? to_json(*found, chunk) : Json(nullptr);
    out["injectiveRep"] = rep ? to_json(*rep, chunk) : Json(nullptr);
    out["regularBound"] = regular ? Json(regular->n) : Json(nullptr);
    out["dichotomy"] = dichotomy;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "sigma_upper: " << (found ? std::to_string(found->n) : "none (n <= " + std::to_string(n_max) + ")")
              << "\n";
    if (found) {
      for (std::size_t i = 0; i < chunk.size(); ++i) {
        std::cout << "  " << chunk.label(i) << " ->";
        for (auto v : (*found)[i].images()) std::cout << " " << v;
        std::cout << "\n";
      }
    }
    std::cout << "injective representation: " << (rep ? "Sym_" + std::to_string(rep->n) : std::string("none")) << "\n";
    if (regular) std::cout << "bounded profile: sigma(r) <= " << regular->n << " for all r\n";
    std::cout << "dichotomy: " << (dichotomy ? "consistent" : "VIOLATED") << "\n";
  }
  return dichotomy ? 0 : 1;
}

int run_folner(std::size_t dim, long side, const std::string& r_text, const std::string& format) {
  const Rational r = parse_rational(r_text, "r");
  const auto witness = lattice_box_witness(dim, side, lattice_cross(dim));
  const auto result = folner_to_sofic(witness, r);
  const auto& rec = result.record;
  if (format == "json") {
    std::cout << to_json(rec).dump(2) << "\n";
  } else {
    std::cout << "n: " << rec.n << "\nboundary: " << rec.boundary << "\nr: " << rational_text(rec.r)
              << "\nmin agreement: " << rational_text(rec.min_agreement) << " (> 1 - 1/r: " << bool_text(rec.agreement_ok)
              << ")\nmin separation: " << rational_text(rec.min_separation)
              << " (> 1 - 2/r: " << bool_text(rec.separation_ok) << ")\nmax defect: " << rational_text(rec.max_defect)
              << " (< 3/r: " << bool_text(rec.defect_ok) << ")\n";
  }
  return rec.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact computations with Cremona transformations over QQ and finite fields"};
  app.require_subcommand(1);
  const std::vector<std::string> formats = {"json", "csv", "text"};

  std::string gens, word, word2, format = "text";
  std::vector<std::string> maps;

  auto* check = app.add_subcommand("check", "Parse and certify a generator file or maps");
  check->add_option("--gens", gens, "Generator file")->check(CLI::ExistingFile);
  check->add_option("--map", maps, "A tuple such as '[1/x, 1/y] over GF(5)'");

  auto* comp = app.add_subcommand("compose", "Evaluate a word, or compose maps (first acts last)");
  comp->add_option("--gens", gens, "Generator file")->check(CLI::ExistingFile);
  comp->add_option("--word", word, "Group word in the generator names");
  comp->add_option("--map", maps, "Tuples; the product is map1∘map2∘...");

  auto* wordcmd = app.add_subcommand("word", "Decide whether a group word is the identity");
  wordcmd->add_option("--gens", gens, "Generator file")->required()->check(CLI::ExistingFile);
  wordcmd->add_option("--word", word, "Group word")->required();

  auto* semi = app.add_subcommand("semigroup-eq", "Decide equality of two positive words");
  semi->add_option("--gens", gens, "Generator file; inverses optional")->required()->check(CLI::ExistingFile);
  semi->add_option("--word", word, "First word")->required();
  semi->add_option("--word2", word2, "Second word")->required();

  std::uint64_t p0 = 2;
  auto* spec = app.add_subcommand("specialize", "Reduce a set over QQ modulo a good prime");
  spec->add_option("--gens", gens, "Generator file over QQ")->required()->check(CLI::ExistingFile);
  spec->add_option("--p0", p0, "Smallest prime to consider")->check(CLI::Range(2, 1 << 30));
  spec->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));

  SoficArgs sa;
  std::uint64_t seed = 0;
  auto* sofic = app.add_subcommand("sofic", "Defect reports and profile certificates over GF(p^m)");
  sofic->add_option("--gens", sa.gens, "Generator file over GF(p) or QQ")->required()->check(CLI::ExistingFile);
  sofic->add_option("--p", sa.p, "Prime (QQ input is reduced modulo p)");
  sofic->add_option("--m", sa.m, "Extension degree A or range A..B")->required();
  sofic->add_option("--cap", sa.cap, "Largest number of points")->check(CLI::PositiveNumber);
  sofic->add_option("--format", sa.format, "json, csv or text")->check(CLI::IsMember(formats));
  auto* seed_opt = sofic->add_option("--seed", seed, "Seed for the random extension of the singular points");
  sofic->add_option("--limit", sa.limit, "Largest closure under products")->check(CLI::PositiveNumber);
  sofic->add_flag("--no-close", sa.no_close, "Use generators, inverses and id only");

  std::string chunk_path, r_text = "3";
  std::size_t n_max = 5;
  std::uint64_t cap = 100000000;
  auto* cs = app.add_subcommand("chunk-sigma", "Brute-force sofic profile of a small chunk");
  cs->add_option("--chunk", chunk_path, "Chunk file")->required()->check(CLI::ExistingFile);
  cs->add_option("--r", r_text, "r > 1, integer or fraction");
  cs->add_option("--n-max", n_max, "Largest n to try")->check(CLI::Range(1, 12));
  cs->add_option("--cap", cap, "Largest search space (n!)^(|E|-1)")->check(CLI::PositiveNumber);
  cs->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));

  std::size_t dim = 1;
  long side = 64;
  auto* fol = app.add_subcommand("folner", "Sofic maps from a box in Z^d");
  fol->add_option("--dim", dim, "Dimension d")->check(CLI::Range(1, 4));
  fol->add_option("--side", side, "Box side length")->check(CLI::Range(1, 1000));
  fol->add_option("--r", r_text, "r > 0, integer or fraction");
  fol->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*check) return run_check(gens, maps);
    if (*comp) return run_compose(gens, word, maps);
    if (*wordcmd) return run_word(gens, word);
    if (*semi) return run_semigroup(gens, word, word2);
    if (*spec) return run_specialize(gens, p0, format);
    if (*sofic) {
      if (*seed_opt) sa.seed = seed;
      return run_sofic(sa);
    }
    if (*cs) return run_chunk_sigma(chunk_path, r_text, n_max, cap, format);
    if (*fol) return run_folner(dim, side, r_text, format);
  } catch (const ParseError& e) {
    print_parse_error(e);
    return 2;
  } catch (const NotInverse& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

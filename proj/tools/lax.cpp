#include "lax/dsl.hpp"
#include "lax/lax.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kInputError = 2;

/// Bad input: a missing file, a parse error, an unknown name.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Range {
  int lo = 0;
  int hi = 0;
};

Range parse_range(const std::string& text, const char* flag) {
  static const std::regex pattern(R"(^\s*(-?\d{1,6})\s*\.\.\s*(-?\d{1,6})\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern))
    throw InputError(std::string(flag) + " expects LO..HI, got '" + text + "'");
  Range r{std::stoi(m[1]), std::stoi(m[2])};
  if (r.lo > r.hi)
    throw InputError(std::string(flag) + " range is empty: " + text);
  return r;
}

lax::ComplexKind parse_kind(const std::string& k) { return k == "dr" ? lax::ComplexKind::dr : lax::ComplexKind::def; }

struct Loaded {
  std::string source;
  lax::dsl::SpecDocument document;
};

/// Reads and parses FILE; diagnostics go to stderr, errors abort.
Loaded load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw InputError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  Loaded out{buf.str(), {}};
  lax::dsl::ParseResult r = lax::dsl::parse(out.source);
  for (const auto& d : r.diagnostics)
    std::cerr << lax::dsl::render(d, out.source, path);
  if (!r.ok())
    throw InputError("'" + path + "' has errors");
  out.document = std::move(r.document);
  return out;
}

/// The named algebroid, checked for weights and structure equations. A
/// failure of the structure equations is a mathematical failure.
lax::AlgebroidPresentation checked_algebroid(const Loaded& in, const std::string& name, bool& ok) {
  if (!in.document.contains(name))
    throw InputError("no algebroid named '" + name + "'");
  lax::AlgebroidPresentation p = in.document.presentation(name);
  lax::check_weights(p);
  const lax::ValidationReport v = lax::validate(p);
  for (const auto& [gen, residual] : v.failures)
    std::cerr << "structure equations of '" << name << "' fail on generator '" << gen << "'\n";
  ok = v.passed;
  return p;
}

void print(const lax::dsl::Report& r, const std::string& format) {
  if (format == "json")
    std::cout << lax::dsl::to_json(r).dump(2) << '\n';
  else if (format == "csv")
    std::cout << lax::dsl::to_csv(r);
  else
    std::cout << lax::dsl::to_table(r);
}

const std::vector<std::string> kFormats{"table", "json", "csv"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lax: Lie algebroid presentations, cohomology and Morita checks"};
  app.require_subcommand(1);

  std::string file, name, kind = "dr", deg = "0..2", weight = "0..2", format, submersion, out_path, cochain, check;
  std::string fiber;
  int max_deg = 2;
  unsigned threads = 1;

  auto* validate = app.add_subcommand("validate", "Parse a file and check every item");
  validate->add_option("FILE", file, "Input .lax file")->required();

  auto* cohomology = app.add_subcommand("cohomology", "Betti numbers of the de Rham or deformation complex");
  cohomology->add_option("FILE", file, "Input .lax file")->required();
  cohomology->add_option("--name", name, "Algebroid or foliation")->required();
  cohomology->add_option("--kind", kind, "dr or def")->check(CLI::IsMember({"dr", "def"}));
  cohomology->add_option("--deg", deg, "Degree range LO..HI");
  cohomology->add_option("--weight", weight, "Weight range LO..HI");
  cohomology->add_option("--format", format, "table, json or csv")->check(CLI::IsMember(kFormats));
  cohomology->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1U, 256U));

  auto* pullback = app.add_subcommand("pullback", "Pull an algebroid back along a submersion");
  pullback->add_option("FILE", file, "Input .lax file")->required();
  pullback->add_option("--name", name, "Algebroid")->required();
  pullback->add_option("--submersion", submersion, "Submersion over the algebroid")->required();
  pullback->add_option("--out", out_path, "Output .lax file (stdout when omitted)");

  auto* morita = app.add_subcommand("morita", "Compare an algebroid with its pull-back");
  morita->add_option("FILE", file, "Input .lax file")->required();
  morita->add_option("--name", name, "Algebroid")->required();
  morita->add_option("--submersion", submersion, "Submersion over the algebroid")->required();
  morita->add_option("--kind", kind, "dr or def")->check(CLI::IsMember({"dr", "def"}));
  morita->add_option("--max-deg", max_deg, "Highest degree compared")->check(CLI::Range(0, 16));
  morita->add_option("--weight", weight, "Weight range LO..HI");
  morita->add_option("--format", format, "table, json or csv")->check(CLI::IsMember(kFormats));
  morita->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1U, 256U));

  auto* mc = app.add_subcommand("mc", "Maurer-Cartan test for an arity-2 cochain");
  mc->add_option("FILE", file, "Input .lax file")->required();
  mc->add_option("--name", name, "Algebroid")->required();
  mc->add_option("--cochain", cochain, "Cochain on the algebroid")->required();

  auto* foliation = app.add_subcommand("foliation", "Foliation checks");
  foliation->add_option("FILE", file, "Input .lax file")->required();
  foliation->add_option("--check", check, "def-vs-bott or flag")
      ->required()
      ->check(CLI::IsMember({"def-vs-bott", "flag"}));
  foliation->add_option("--name", name, "Foliation")->required();
  foliation->add_option("--deg", deg, "Degree range LO..HI (def-vs-bott)");
  foliation->add_option("--weight", weight, "Weight range LO..HI");
  foliation->add_option("--max-deg", max_deg, "Highest degree compared (flag)")->check(CLI::Range(0, 16));
  foliation->add_option("--fiber", fiber, "Comma-separated vertical coordinates (flag)");
  foliation->add_option("--format", format, "table, json or csv")->check(CLI::IsMember(kFormats));
  foliation->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1U, 256U));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0)
      return app.exit(e);
    std::cerr << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    std::cerr << (subs.empty() ? app.help() : subs.front()->help());
    return kInputError;
  }

  try {
    const Loaded in = load(file);

    if (*validate) {
      const lax::dsl::DocumentCheck c = lax::dsl::check_document(in.document);
      for (const auto& d : c.diagnostics)
        std::cerr << lax::dsl::render(d, in.source, file);
      for (const auto& n : c.passed)
        std::cout << "ok " << n << '\n';
      if (c.input_error)
        return kInputError;
      return c.math_failure ? kFail : kPass;
    }

    if (*cohomology) {
      bool ok = false;
      const lax::AlgebroidPresentation p = checked_algebroid(in, name, ok);
      if (!ok)
        return kFail;
      const Range d = parse_range(deg, "--deg"), w = parse_range(weight, "--weight");
      const lax::Window window{d.lo, d.hi, w.lo, w.hi};
      const lax::CohomologyReport rep = kind == "dr" ? lax::betti(lax::de_rham_complex(p), window, threads)
                                                     : lax::betti(lax::deformation_complex(p), window, threads);
      print(lax::dsl::cohomology_report(rep), format.empty() ? "table" : format);
      return kPass;
    }

    if (*pullback || *morita) {
      bool ok = false;
      const lax::AlgebroidPresentation p = checked_algebroid(in, name, ok);
      if (!ok)
        return kFail;
      if (in.document.kind_of(submersion) != lax::dsl::ItemKind::submersion)
        throw InputError("no submersion named '" + submersion + "'");
      const lax::dsl::SubmersionItem& s = in.document.submersion(submersion);
      if (s.over != name)
        throw InputError("submersion '" + submersion + "' is over '" + s.over + "', not '" + name + "'");
      const lax::PullbackPresentation pp = lax::pullback_algebroid(p, s.spec);

      if (*pullback) {
        const std::string text = lax::dsl::emit(pp.presentation) + "\n";
        const bool sound = lax::validate(pp.presentation).passed && lax::ses_check(pp).passed;
        if (out_path.empty()) {
          std::cout << text;
        } else {
          std::ofstream o(out_path, std::ios::binary);
          if (!(o << text))
            throw InputError("cannot write '" + out_path + "'");
          std::cout << "wrote " << pp.presentation.name() << " to " << out_path << '\n';
        }
        return sound ? kPass : kFail;
      }

      const Range w = parse_range(weight, "--weight");
      const lax::MoritaReport rep = lax::morita_check(pp, parse_kind(kind), max_deg, w.lo, w.hi, threads);
      print(lax::dsl::morita_report(rep), format.empty() ? "json" : format);
      return rep.passed ? kPass : kFail;
    }

    if (*mc) {
      bool ok = false;
      const lax::AlgebroidPresentation p = checked_algebroid(in, name, ok);
      if (!ok)
        return kFail;
      if (in.document.kind_of(cochain) != lax::dsl::ItemKind::cochain)
        throw InputError("no cochain named '" + cochain + "'");
      const lax::dsl::CochainItem& c = in.document.cochain(cochain);
      if (c.on != name)
        throw InputError("cochain '" + cochain + "' is on '" + c.on + "', not '" + name + "'");
      if (c.cochain.arity() != 2)
        throw InputError("cochain '" + cochain + "' has arity " + std::to_string(c.cochain.arity()) + ", expected 2");
      const lax::McDefectReport rep = lax::mc_defect(c.cochain, p);
      if (!rep.is_mc)
        std::cerr << "'" << cochain << "' is not a Maurer-Cartan element of '" << name << "'\n";
      print(lax::dsl::Report{"mc", {}, rep.is_mc}, "json");
      return rep.is_mc ? kPass : kFail;
    }

    if (*foliation) {
      if (in.document.kind_of(name) != lax::dsl::ItemKind::foliation)
        throw InputError("no foliation named '" + name + "'");
      const lax::FoliationSpec& f = in.document.foliation(name).spec;
      const Range w = parse_range(weight, "--weight");
      const std::string fmt = format.empty() ? "json" : format;

      if (check == "def-vs-bott") {
        const Range d = parse_range(foliation->count("--deg") ? deg : "0..1", "--deg");
        const lax::BottComparison c = lax::def_vs_bott(f, lax::Window{d.lo, d.hi, w.lo, w.hi}, threads);
        print(lax::dsl::bott_report(c), fmt);
        return c.equal() ? kPass : kFail;
      }

      // Flag: the listed ambient coordinates span the vertical foliation; the
      // rest form the base, and fields are reordered base-first.
      std::vector<std::string> vertical;
      std::stringstream ss(fiber);
      for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty())
          vertical.push_back(item);
      if (vertical.empty())
        throw InputError("--check flag needs --fiber with at least one coordinate");
      lax::SubmersionSpec v{"V", {}, {}};
      std::vector<std::size_t> order;
      for (std::size_t a = 0; a < f.ambient.size(); ++a)
        if (std::find(vertical.begin(), vertical.end(), f.ambient[a].name) == vertical.end()) {
          v.base.push_back(f.ambient[a]);
          order.push_back(a);
        }
      for (const auto& u : vertical) {
        auto it = std::find_if(f.ambient.begin(), f.ambient.end(), [&](const auto& g) { return g.name == u; });
        if (it == f.ambient.end())
          throw InputError("'" + u + "' is not a coordinate of '" + name + "'");
        if (std::find(order.begin(), order.end(), static_cast<std::size_t>(it - f.ambient.begin())) != order.end() ||
            std::count(vertical.begin(), vertical.end(), u) > 1)
          throw InputError("coordinate '" + u + "' listed twice");
        v.fiber.push_back(*it);
        order.push_back(static_cast<std::size_t>(it - f.ambient.begin()));
      }
      std::vector<std::vector<lax::Rational>> fields;
      for (const auto& field : f.fields) {
        std::vector<lax::Rational> reordered;
        for (auto a : order)
          reordered.push_back(field[a]);
        fields.push_back(std::move(reordered));
      }
      const lax::FlagReport rep = lax::flag_check(v, f.field_names, fields, max_deg, w.lo, w.hi, threads);
      if (!rep.tables_isomorphic)
        std::cerr << "'" << name << "' is not the pull-back of its quotient foliation\n";
      lax::dsl::Report r = lax::dsl::morita_report(rep.morita, "foliation");
      r.pass = rep.passed;
      print(r, fmt);
      return rep.passed ? kPass : kFail;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const lax::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

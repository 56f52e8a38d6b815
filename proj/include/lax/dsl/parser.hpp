#pragma once

#include "lax/dsl/document.hpp"
#include "lax/dsl/lexer.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace lax::dsl {

struct ParseResult {
  SpecDocument document;  ///< items that parsed cleanly
  std::vector<Diagnostic> diagnostics;
  [[nodiscard]] bool ok() const { return !has_errors(diagnostics); }
};

namespace detail {

inline Span join(const Span& a, const Span& b) {
  Span s = a;
  s.length = b.offset + b.length > a.offset ? b.offset + b.length - a.offset : a.length;
  return s;
}

inline bool is_item_keyword(const Token& t) {
  return t.kind == TokenKind::identifier &&
         (t.text == "algebroid" || t.text == "submersion" || t.text == "cochain" || t.text == "foliation");
}

inline std::string describe(const Token& t) {
  if (t.kind == TokenKind::identifier)
    return "'" + t.text + "'";
  if (t.kind == TokenKind::number)
    return "number " + t.text;
  return token_kind_name(t.kind);
}

inline std::string tuple_text(const std::vector<std::string>& names) {
  std::string s = "[";
  for (std::size_t i = 0; i < names.size(); ++i)
    s += (i ? "," : "") + names[i];
  return s + "]";
}

/// What the distinguished factor of each polynomial term is.
enum class TermTarget { section, derivative, none };

/// Sum of terms keyed by target index (frame section or coordinate).
using TargetSum = std::map<std::size_t, Element>;

class Parser {
public:
  explicit Parser(std::string_view source) {
    LexResult lex = tokenize(source);
    tokens_ = std::move(lex.tokens);
    result_.diagnostics = std::move(lex.diagnostics);
  }

  ParseResult run() {
    while (peek().kind != TokenKind::end) {
      const std::size_t start = pos_;
      item_ok_ = true;
      try {
        parse_item();
      } catch (const Abort&) {
        recover(start);
      } catch (const std::exception& e) {
        error(peek().span, e.what(), "invalid");
        recover(start);
      }
    }
    return std::move(result_);
  }

private:
  struct Abort {};

  // Token access.
  [[nodiscard]] const Token& peek(std::size_t k = 0) const { return tokens_[std::min(pos_ + k, tokens_.size() - 1)]; }
  const Token& next() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size())
      ++pos_;
    return t;
  }
  bool accept(TokenKind k) {
    if (peek().kind != k)
      return false;
    next();
    return true;
  }
  const Token& expect(TokenKind k, const std::string& what) {
    if (peek().kind != k)
      fail(peek().span, "expected " + what + ", found " + describe(peek()));
    return next();
  }
  const Token& expect_keyword(const std::string& kw) {
    if (peek().kind != TokenKind::identifier || peek().text != kw)
      fail(peek().span, "expected '" + kw + "', found " + describe(peek()));
    return next();
  }

  // Diagnostics. error() marks the current item as unusable; fail() also
  // abandons it.
  void error(const Span& s, std::string msg, std::string code) {
    result_.diagnostics.push_back({Severity::error, s, std::move(msg), std::move(code)});
    item_ok_ = false;
  }
  void warning(const Span& s, std::string msg, std::string code) {
    result_.diagnostics.push_back({Severity::warning, s, std::move(msg), std::move(code)});
  }
  [[noreturn]] void fail(const Span& s, std::string msg, std::string code = "syntax") {
    error(s, std::move(msg), std::move(code));
    throw Abort{};
  }

  /// Skips the rest of a broken item: past its closing brace, or up to the
  /// next item keyword at the top level.
  void recover(std::size_t start) {
    int depth = 0;
    std::size_t i = start;
    for (; tokens_[i].kind != TokenKind::end; ++i) {
      const Token& t = tokens_[i];
      if (t.kind == TokenKind::lbrace) {
        ++depth;
      } else if (t.kind == TokenKind::rbrace) {
        if (--depth <= 0) {
          ++i;
          break;
        }
      } else if (i > start && depth == 0 && is_item_keyword(t)) {
        break;
      }
    }
    pos_ = std::min(std::max(i, start + 1), tokens_.size() - 1);
  }

  // Literals.
  int parse_int(const std::string& what) {
    const Token& t = expect(TokenKind::number, what);
    int v = 0;
    const char* b = t.text.data();
    const char* e = b + t.text.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) {
      error(t.span, what + " must be an integer in range, found '" + t.text + "'", "syntax");
      return 0;
    }
    return v;
  }
  Rational parse_rational(const Token& t) {
    const auto slash = t.text.find('/');
    if (slash != std::string::npos && t.text.find_first_not_of('0', slash + 1) == std::string::npos) {
      error(t.span, "rational literal '" + t.text + "' has a zero denominator", "syntax");
      return Rational(0);
    }
    return Rational::parse(t.text);
  }

  // Shared pieces.
  struct Named {
    std::string name;
    int weight;
    Span span;
  };

  /// KEYWORD "{" [NAME ":" INT ("," NAME ":" INT)*] "}"
  std::vector<Named> parse_weighted_list(const std::string& keyword, int min_weight) {
    expect_keyword(keyword);
    expect(TokenKind::lbrace, "'{'");
    std::vector<Named> out;
    if (accept(TokenKind::rbrace))
      return out;
    do {
      const Token& n = expect(TokenKind::identifier, "a name");
      expect(TokenKind::colon, "':'");
      const Span ws = peek().span;
      const int w = parse_int("weight");
      if (w < min_weight)
        error(ws, "weight of '" + n.text + "' must be >= " + std::to_string(min_weight), "weight");
      out.push_back({n.text, w, n.span});
    } while (accept(TokenKind::comma));
    expect(TokenKind::rbrace, "'}'");
    return out;
  }

  void check_unique(const std::vector<Named>& names, std::set<std::string>& seen) {
    for (const auto& n : names)
      if (!seen.insert(n.name).second)
        error(n.span, "name '" + n.name + "' is declared twice", "duplicate-name");
  }

  const Token& item_name() {
    const Token& t = expect(TokenKind::identifier, "a name");
    if (result_.document.contains(t.text))
      error(t.span, "an item named '" + t.text + "' already exists", "duplicate-name");
    return t;
  }

  /// sum := ["+"|"-"] term (("+"|"-") term)*; term := factor ("*" factor)*;
  /// factor := NUMBER | COORD ["^" INT] | SECTION | d/dCOORD. Every nonzero
  /// term carries exactly one target factor (a section or a derivative).
  TargetSum parse_sum(const GeneratorSetPtr& gens, TermTarget target, const std::vector<std::string>& sections) {
    TargetSum out;
    int sign = 1;
    if (accept(TokenKind::minus))
      sign = -1;
    else
      accept(TokenKind::plus);
    while (true) {
      parse_term(gens, target, sections, sign, out);
      if (accept(TokenKind::plus))
        sign = 1;
      else if (accept(TokenKind::minus))
        sign = -1;
      else
        break;
    }
    for (auto it = out.begin(); it != out.end();)
      it = it->second.is_zero() ? out.erase(it) : std::next(it);
    return out;
  }

  void parse_term(const GeneratorSetPtr& gens, TermTarget target, const std::vector<std::string>& sections, int sign,
                  TargetSum& out) {
    const GeneratorSet& g = *gens;
    Rational coef(sign);
    Monomial m = g.unit();
    std::optional<std::size_t> tgt;
    const Span first = peek().span;
    Span last = first;
    bool usable = true;
    auto set_target = [&](std::size_t idx, const Span& s) {
      if (tgt) {
        error(s, target == TermTarget::section ? "term has more than one frame section"
                                               : "term has more than one derivative",
              "syntax");
        usable = false;
      }
      tgt = idx;
    };
    do {
      const Token& t = next();
      last = t.span;
      switch (t.kind) {
        case TokenKind::number:
          coef *= parse_rational(t);
          break;
        case TokenKind::identifier: {
          auto ref = g.find(t.text);
          if (ref && !ref->odd) {
            int e = 1;
            if (accept(TokenKind::caret)) {
              last = peek().span;
              e = parse_int("exponent");
              if (e < 0 || e > 1000) {
                error(last, "exponent must lie in 0..1000", "syntax");
                e = 0;
              }
            }
            m.exponents[ref->index] += e;
            break;
          }
          auto sec = std::find(sections.begin(), sections.end(), t.text);
          if (target == TermTarget::section && sec != sections.end()) {
            set_target(static_cast<std::size_t>(sec - sections.begin()), t.span);
            break;
          }
          if (ref || sec != sections.end())
            error(t.span, "'" + t.text + "' is a frame section, not a coordinate", "unknown-identifier");
          else
            error(t.span, "unknown identifier '" + t.text + "'", "unknown-identifier");
          usable = false;
          break;
        }
        case TokenKind::derivative: {
          if (target != TermTarget::derivative) {
            error(t.span, "a derivative is not allowed here", "syntax");
            usable = false;
            break;
          }
          auto ref = g.find(t.text);
          if (!ref || ref->odd) {
            error(t.span, "unknown coordinate '" + t.text + "' in derivative", "unknown-identifier");
            usable = false;
            break;
          }
          set_target(ref->index, t.span);
          break;
        }
        default:
          fail(t.span, "expected a coefficient, coordinate or " +
                           std::string(target == TermTarget::derivative ? "derivative" : "frame section") +
                           ", found " + describe(t));
      }
    } while (accept(TokenKind::star));
    if (!usable)
      return;
    if (!tgt) {
      if (!coef.is_zero() && target != TermTarget::none)
        error(join(first, last),
              target == TermTarget::section ? "term has no frame section" : "term has no derivative 'd/d...'",
              "syntax");
      return;
    }
    auto [it, inserted] = out.try_emplace(*tgt, Element(gens));
    it->second.add_term(m, coef);
  }

  /// Records a table row keyed by an argument tuple, reporting repeats.
  /// Returns false when the row must not be stored.
  struct TupleRow {
    std::vector<std::size_t> args;
    TargetSum value;
  };
  bool register_row(std::map<std::vector<std::size_t>, TupleRow>& seen, const std::vector<std::size_t>& args,
                    const TargetSum& value, const std::vector<std::string>& names, const Span& span,
                    const std::string& what, const std::string& dup_code) {
    std::vector<std::size_t> sorted = args;
    int sign = 1;
    for (std::size_t i = 0; i < sorted.size(); ++i)
      for (std::size_t j = 0; j + 1 < sorted.size() - i; ++j)
        if (sorted[j] > sorted[j + 1]) {
          std::swap(sorted[j], sorted[j + 1]);
          sign = -sign;
        }
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      if (!value.empty()) {
        error(span,
              what == "bracket" ? "bracket of a generator with itself must be zero"
                                : "entry on repeated arguments " + tuple_text(names) + " must be zero",
              "self-bracket");
        return false;
      }
      return false;
    }
    TargetSum oriented;
    for (const auto& [k, v] : value)
      oriented.emplace(k, sign > 0 ? v : -v);
    auto [it, inserted] = seen.try_emplace(sorted, TupleRow{args, oriented});
    if (inserted)
      return true;
    if (it->second.args == args) {
      error(span, "duplicate " + what + " " + tuple_text(names), dup_code);
      return false;
    }
    if (it->second.value != oriented) {
      error(span, what + " " + tuple_text(names) + " is not antisymmetric to an earlier entry", "non-antisymmetric");
      return false;
    }
    warning(span, what + " " + tuple_text(names) + " repeats an earlier entry up to sign", "redundant");
    return false;
  }

  /// "[" [NAME ("," NAME)*] "]" over the frame sections; unknown names are
  /// reported and leave `ok` false.
  std::vector<std::size_t> parse_tuple(const std::vector<std::string>& frame, std::vector<std::string>& names,
                                       bool& ok) {
    expect(TokenKind::lbracket, "'['");
    std::vector<std::size_t> out;
    if (accept(TokenKind::rbracket))
      return out;
    do {
      const Token& t = expect(TokenKind::identifier, "a frame section");
      names.push_back(t.text);
      auto it = std::find(frame.begin(), frame.end(), t.text);
      if (it == frame.end()) {
        error(t.span, "unknown frame section '" + t.text + "'", "unknown-identifier");
        ok = false;
        out.push_back(0);
      } else {
        out.push_back(static_cast<std::size_t>(it - frame.begin()));
      }
    } while (accept(TokenKind::comma));
    expect(TokenKind::rbracket, "']'");
    return out;
  }

  // Items.
  void parse_item() {
    const Token& kw = peek();
    if (!is_item_keyword(kw))
      fail(kw.span, "expected 'algebroid', 'submersion', 'cochain' or 'foliation', found " + describe(kw));
    next();
    if (kw.text == "algebroid")
      parse_algebroid();
    else if (kw.text == "submersion")
      parse_submersion();
    else if (kw.text == "cochain")
      parse_cochain();
    else
      parse_foliation();
  }

  void parse_algebroid() {
    const Token name = item_name();
    expect(TokenKind::lbrace, "'{'");
    const auto base = parse_weighted_list("base", 1);
    const auto fiber = parse_weighted_list("fiber", 0);
    std::set<std::string> seen;
    check_unique(base, seen);
    check_unique(fiber, seen);
    if (fiber.size() > kMaxOddGenerators)
      error(name.span, "at most 64 frame sections are supported", "invalid");
    if (!item_ok_)
      throw Abort{};
    std::vector<EvenGenerator> evens;
    std::vector<OddGenerator> odds;
    std::vector<std::string> frame;
    for (const auto& b : base)
      evens.push_back({b.name, b.weight});
    for (const auto& f : fiber) {
      odds.push_back({f.name, f.weight, OddOrigin::fiber_dual});
      frame.push_back(f.name);
    }
    AlgebroidItem item{AlgebroidPresentation(name.text, evens, odds), name.span, {}};
    AlgebroidPresentation& pres = item.presentation;
    const GeneratorSetPtr& gens = pres.generators();

    expect_keyword("anchor");
    expect(TokenKind::lbrace, "'{'");
    std::set<std::size_t> anchored;
    while (!accept(TokenKind::rbrace)) {
      const Token& row = expect(TokenKind::identifier, "a frame section");
      std::optional<std::size_t> i;
      if (auto it = std::find(frame.begin(), frame.end(), row.text); it != frame.end())
        i = static_cast<std::size_t>(it - frame.begin());
      else
        error(row.span, "unknown frame section '" + row.text + "'", "unknown-identifier");
      expect(TokenKind::arrow, "'->'");
      const TargetSum value = parse_sum(gens, TermTarget::derivative, {});
      const Span span = join(row.span, expect(TokenKind::semicolon, "';'").span);
      if (!i)
        continue;
      if (!anchored.insert(*i).second) {
        error(span, "duplicate anchor row for '" + row.text + "'", "duplicate-anchor");
        continue;
      }
      for (std::size_t a = 0; a < pres.base_dimension(); ++a) {
        item.entry_spans.push_back({TableEntry{TableEntry::Kind::anchor, *i, 0, a}, span});
        if (auto it = value.find(a); it != value.end())
          pres.set_anchor(*i, a, it->second);
      }
    }

    expect_keyword("bracket");
    expect(TokenKind::lbrace, "'{'");
    std::map<std::vector<std::size_t>, TupleRow> rows;
    while (!accept(TokenKind::rbrace)) {
      const Span start = peek().span;
      std::vector<std::string> names;
      bool ok = true;
      const auto args = parse_tuple(frame, names, ok);
      if (args.size() != 2) {
        error(join(start, peek().span), "a bracket entry takes exactly two frame sections", "syntax");
        ok = false;
      }
      expect(TokenKind::equals, "'='");
      const TargetSum value = parse_sum(gens, TermTarget::section, frame);
      const Span span = join(start, expect(TokenKind::semicolon, "';'").span);
      if (!ok || !register_row(rows, args, value, names, span, "bracket", "duplicate-bracket"))
        continue;
      const std::size_t i = std::min(args[0], args[1]), j = std::max(args[0], args[1]);
      for (std::size_t k = 0; k < pres.rank(); ++k) {
        item.entry_spans.push_back({TableEntry{TableEntry::Kind::bracket, i, j, k}, span});
        if (auto it = value.find(k); it != value.end())
          pres.set_bracket(args[0], args[1], k, it->second);
      }
    }
    expect(TokenKind::rbrace, "'}'");
    if (item_ok_)
      result_.document.add(std::move(item));
  }

  void parse_submersion() {
    const Token name = item_name();
    expect(TokenKind::lbrace, "'{'");
    expect_keyword("over");
    const Token over = expect(TokenKind::identifier, "an algebroid or foliation name");
    expect(TokenKind::semicolon, "';'");
    const auto fiber = parse_weighted_list("fiber", 1);
    expect(TokenKind::rbrace, "'}'");

    const auto kind = result_.document.kind_of(over.text);
    if (!kind || (*kind != ItemKind::algebroid && *kind != ItemKind::foliation)) {
      error(over.span, "unknown algebroid or foliation '" + over.text + "'", "unknown-identifier");
      return;
    }
    const AlgebroidPresentation target = result_.document.presentation(over.text);
    std::set<std::string> seen;
    for (std::size_t i = 0; i < target.generators()->size(); ++i)
      seen.insert(target.generators()->name(target.generators()->from_global(i)));
    check_unique(fiber, seen);
    if (fiber.empty())
      error(name.span, "a submersion needs at least one fiber coordinate", "invalid");
    if (!item_ok_)
      return;
    SubmersionItem item{{name.text, target.generators()->evens(), {}}, over.text, name.span};
    for (const auto& f : fiber)
      item.spec.fiber.push_back({f.name, f.weight});
    result_.document.add(std::move(item));
  }

  void parse_cochain() {
    const Token name = item_name();
    expect_keyword("on");
    const Token on = expect(TokenKind::identifier, "an algebroid name");
    expect(TokenKind::lbrace, "'{'");
    expect_keyword("arity");
    const Span arity_span = peek().span;
    const int arity = parse_int("arity");
    expect(TokenKind::semicolon, "';'");
    if (arity < 1 || arity > 64)
      fail(arity_span, "arity must lie in 1..64", "invalid");
    const auto kind = result_.document.kind_of(on.text);
    if (!kind || (*kind != ItemKind::algebroid && *kind != ItemKind::foliation))
      fail(on.span, "unknown algebroid '" + on.text + "'", "unknown-identifier");
    const AlgebroidPresentation pres = result_.document.presentation(on.text);
    const GeneratorSetPtr& gens = pres.generators();
    std::vector<std::string> frame;
    for (const auto& o : gens->odds())
      frame.push_back(o.name);
    CochainItem item{name.text, on.text, Multiderivation(pres, static_cast<std::size_t>(arity)), name.span};

    auto parse_table = [&](const std::string& keyword, std::size_t slots, TermTarget target, TokenKind sep) {
      expect_keyword(keyword);
      expect(TokenKind::lbrace, "'{'");
      std::map<std::vector<std::size_t>, TupleRow> rows;
      while (!accept(TokenKind::rbrace)) {
        const Span start = peek().span;
        std::vector<std::string> names;
        bool ok = true;
        const auto args = parse_tuple(frame, names, ok);
        if (args.size() != slots) {
          error(join(start, peek().span),
                keyword + " entries take " + std::to_string(slots) + " frame section(s)", "syntax");
          ok = false;
        }
        expect(sep, sep == TokenKind::equals ? "'='" : "'->'");
        const TargetSum value = parse_sum(gens, target, target == TermTarget::section ? frame : std::vector<std::string>{});
        const Span span = join(start, expect(TokenKind::semicolon, "';'").span);
        if (!ok || !register_row(rows, args, value, names, span, keyword + " entry", "duplicate-entry"))
          continue;
        for (const auto& [k, v] : value) {
          if (target == TermTarget::section)
            item.cochain.set_value(args, k, v);
          else
            item.cochain.set_symbol(args, k, v);
        }
      }
    };
    parse_table("values", static_cast<std::size_t>(arity), TermTarget::section, TokenKind::equals);
    parse_table("symbol", static_cast<std::size_t>(arity - 1), TermTarget::derivative, TokenKind::arrow);
    expect(TokenKind::rbrace, "'}'");
    if (item_ok_)
      result_.document.add(std::move(item));
  }

  void parse_foliation() {
    const Token name = item_name();
    expect(TokenKind::lbrace, "'{'");
    const auto ambient = parse_weighted_list("ambient", 1);
    std::set<std::string> seen;
    check_unique(ambient, seen);
    if (!item_ok_)
      throw Abort{};
    FoliationSpec spec{name.text, {}, {}, {}};
    for (const auto& a : ambient)
      spec.ambient.push_back({a.name, a.weight});
    const GeneratorSetPtr gens = make_generators(spec.ambient, {});

    expect_keyword("spanning");
    expect(TokenKind::lbrace, "'{'");
    while (!accept(TokenKind::rbrace)) {
      const Token& row = expect(TokenKind::identifier, "a field name");
      if (!seen.insert(row.text).second)
        error(row.span, "name '" + row.text + "' is declared twice", "duplicate-name");
      expect(TokenKind::arrow, "'->'");
      const TargetSum value = parse_sum(gens, TermTarget::derivative, {});
      const Span span = join(row.span, expect(TokenKind::semicolon, "';'").span);
      std::vector<Rational> field(spec.ambient.size(), Rational(0));
      for (const auto& [a, v] : value) {
        if (!v.is_zero() && (v.size() != 1 || !(v.terms().begin()->first == gens->unit()))) {
          error(span, "spanning fields must have constant coefficients", "invalid");
          break;
        }
        field[a] = v.coefficient(gens->unit());
      }
      spec.field_names.push_back(row.text);
      spec.fields.push_back(std::move(field));
    }
    expect(TokenKind::rbrace, "'}'");
    if (!item_ok_)
      return;
    try {
      (void)foliation_algebroid(spec);
    } catch (const Error& e) {
      error(name.span, e.what(), "invalid");
      return;
    }
    result_.document.add(FoliationItem{std::move(spec), name.span});
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  bool item_ok_ = true;
  ParseResult result_;
};

}  // namespace detail

/// Parses a whole document. Never throws; every problem becomes a diagnostic
/// with a span into `text`.
inline ParseResult parse(std::string_view text) {
  try {
    return detail::Parser(text).run();
  } catch (const std::exception& e) {
    ParseResult r;
    r.diagnostics.push_back({Severity::error, Span{}, std::string("internal parser failure: ") + e.what(), "internal"});
    return r;
  }
}

}  // namespace lax::dsl

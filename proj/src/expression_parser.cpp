#include "cmr/error.hpp"
#include "cmr/system.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>

namespace cmr {

namespace {

enum class Tok { LBracket, RBracket, Name, Integer, Slash, Prime, Equals, Plus, Minus, Star, Caret, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

const char* describe(Tok kind) {
  switch (kind) {
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Name: return "name";
    case Tok::Integer: return "integer";
    case Tok::Slash: return "'/'";
    case Tok::Prime: return "'''";
    case Tok::Equals: return "'='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Caret: return "'^'";
    case Tok::End: break;
  }
  return "end of input";
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t s = 0; s < k; ++s, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    const std::size_t l0 = line, c0 = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      out.push_back({Tok::Name, std::string(text.substr(i, j - i)), l0, c0});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({Tok::Integer, std::string(text.substr(i, j - i)), l0, c0});
      advance(j - i);
      continue;
    }
    static const std::map<char, Tok> punct = {{'[', Tok::LBracket}, {']', Tok::RBracket}, {'/', Tok::Slash},
                                              {'\'', Tok::Prime},   {'=', Tok::Equals},   {'+', Tok::Plus},
                                              {'-', Tok::Minus},    {'*', Tok::Star},     {'^', Tok::Caret}};
    const auto it = punct.find(c);
    if (it == punct.end()) throw ParseError(std::string("unexpected character '") + c + "'", l0, c0);
    out.push_back({it->second, std::string(1, c), l0, c0});
    advance(1);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

// A term before names are resolved: coefficient times named powers.
struct RawFactor {
  Token name;
  unsigned power;
};
struct RawTerm {
  Rational coeff{1};
  std::vector<RawFactor> factors;
};
using RawExpr = std::vector<RawTerm>;

class Parser {
public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool at(Tok kind) const { return peek().kind == kind; }

  const Token& expect(Tok kind, const char* context) {
    const Token& t = peek();
    if (t.kind != kind)
      throw ParseError(std::string("expected ") + describe(kind) + " " + context + ", found " + describe(t.kind) +
                           (t.text.empty() ? "" : " '" + t.text + "'"),
                       t.line, t.column);
    ++pos_;
    return toks_[pos_ - 1];
  }

  // expr := ["-"] term (("+"|"-") term)*
  RawExpr expr() {
    RawExpr out;
    bool negate = false;
    if (at(Tok::Minus)) {
      ++pos_;
      negate = true;
    }
    while (true) {
      RawTerm t = term();
      if (negate) t.coeff = -t.coeff;
      out.push_back(std::move(t));
      if (at(Tok::Plus) || at(Tok::Minus)) {
        negate = at(Tok::Minus);
        ++pos_;
        continue;
      }
      return out;
    }
  }

  // term := factor ("*" factor)*
  RawTerm term() {
    RawTerm out;
    factor(out);
    while (at(Tok::Star)) {
      ++pos_;
      factor(out);
    }
    return out;
  }

  // factor := rational | name ("^" natural)?
  void factor(RawTerm& into) {
    if (at(Tok::Integer)) {
      mpz_class num(expect(Tok::Integer, "").text);
      mpz_class den(1);
      if (at(Tok::Slash)) {
        ++pos_;
        const Token& d = expect(Tok::Integer, "as denominator");
        den = mpz_class(d.text);
        if (den == 0) throw ParseError("zero denominator", d.line, d.column);
      }
      Rational r(num, den);
      r.canonicalize();
      into.coeff *= r;
      return;
    }
    if (at(Tok::Name)) {
      const Token name = expect(Tok::Name, "");
      unsigned power = 1;
      if (at(Tok::Caret)) {
        ++pos_;
        const Token& e = expect(Tok::Integer, "as exponent");
        if (e.text.size() > 6) throw ParseError("exponent too large", e.line, e.column);
        power = static_cast<unsigned>(std::stoul(e.text));
      }
      into.factors.push_back({name, power});
      return;
    }
    const Token& t = peek();
    throw ParseError(std::string("expected a number or a variable, found ") + describe(t.kind), t.line, t.column);
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

Polynomial resolve(const RawExpr& raw, const VariableLayout& names) {
  const Layout dims = names.dims();
  Polynomial out(dims);
  for (const auto& t : raw) {
    Monomial mono = Monomial::one(dims);
    for (const auto& f : t.factors) {
      VarRef v{};
      if (!names.find(f.name.text, v))
        throw ParseError("undeclared variable '" + f.name.text + "'", f.name.line, f.name.column);
      auto& block = v.block == Block::Centre ? mono.x : v.block == Block::Stable ? mono.y : mono.eps;
      block[v.index] += f.power;
    }
    out.add_term(mono, t.coeff);
  }
  return out;
}

struct RawEquation {
  Token lhs;
  RawExpr rhs;
};

}  // namespace

Polynomial parse_expression(std::string_view text, const VariableLayout& names) {
  Parser parser(lex(text));
  RawExpr raw = parser.expr();
  parser.expect(Tok::End, "after expression");
  return resolve(raw, names);
}

CentreSystem parse_system(std::string_view text) {
  Parser parser(lex(text));
  std::optional<std::vector<RawEquation>> centre, stable;
  std::optional<std::vector<Token>> params;

  if (parser.at(Tok::End)) throw ParseError("empty system", 1, 1);
  while (!parser.at(Tok::End)) {
    parser.expect(Tok::LBracket, "to open a section");
    const Token header = parser.expect(Tok::Name, "as section name");
    parser.expect(Tok::RBracket, "to close the section name");

    if (header.text == "params") {
      if (params) throw ParseError("duplicate [params] section", header.line, header.column);
      params.emplace();
      while (parser.at(Tok::Name)) params->push_back(parser.expect(Tok::Name, ""));
      continue;
    }
    auto* target = header.text == "centre" ? &centre : header.text == "stable" ? &stable : nullptr;
    if (!target) throw ParseError("unknown section [" + header.text + "]", header.line, header.column);
    if (*target) throw ParseError("duplicate [" + header.text + "] section", header.line, header.column);
    target->emplace();
    do {
      const Token lhs = parser.expect(Tok::Name, "as equation variable");
      parser.expect(Tok::Prime, "after equation variable");
      parser.expect(Tok::Equals, "after derivative");
      (*target)->push_back({lhs, parser.expr()});
    } while (parser.at(Tok::Name));
  }
  if (!centre) throw ParseError("missing [centre] section", 1, 1);
  if (!stable) throw ParseError("missing [stable] section", 1, 1);

  VariableLayout names;
  std::map<std::string, const Token*> declared;
  auto declare = [&](const Token& t, std::vector<std::string>& group) {
    if (!declared.emplace(t.text, &t).second)
      throw ParseError("variable '" + t.text + "' declared twice", t.line, t.column);
    group.push_back(t.text);
  };
  for (const auto& eq : *centre) declare(eq.lhs, names.centre);
  for (const auto& eq : *stable) declare(eq.lhs, names.stable);
  if (params)
    for (const auto& t : *params) declare(t, names.params);
  names.validate();

  const Layout dims = names.dims();
  CentreSystem sys{names, RationalMatrix(dims.m, dims.m), RationalMatrix(dims.n, dims.n), {}, {}};

  // Split each right side into its linear part (into A or B) and the rest.
  auto split = [&](const RawEquation& eq, Block own, std::size_t row, RationalMatrix& linear) {
    const Polynomial rhs = resolve(eq.rhs, names);
    Polynomial nonlinear(dims);
    for (const auto& [mono, c] : rhs.terms()) {
      const unsigned deg = mono.total_degree();
      if (deg == 0)
        throw ValidationError("constant term in the equation for " + eq.lhs.text + "' (line " +
                              std::to_string(eq.lhs.line) + "); the origin must be an equilibrium");
      if (deg >= 2) {
        nonlinear.add_term(mono, c);
        continue;
      }
      const auto& own_block = own == Block::Centre ? mono.x : mono.y;
      const auto& other_block = own == Block::Centre ? mono.y : mono.x;
      if (mono.eps_degree() == 1)
        throw ValidationError("linear parameter term in the equation for " + eq.lhs.text +
                              "'; f and g must have vanishing first derivatives at the origin");
      if (std::find(other_block.begin(), other_block.end(), 1u) != other_block.end())
        throw ValidationError("system not in standard split form — diagonalize the linear part first (equation for " +
                              eq.lhs.text + "')");
      for (std::size_t k = 0; k < own_block.size(); ++k)
        if (own_block[k] == 1) linear(row, k) += c;
    }
    return nonlinear;
  };
  for (std::size_t i = 0; i < dims.m; ++i) sys.f.push_back(split((*centre)[i], Block::Centre, i, sys.A));
  for (std::size_t j = 0; j < dims.n; ++j) sys.g.push_back(split((*stable)[j], Block::Stable, j, sys.B));
  sys.validate();
  return sys;
}

std::string serialize_system(const CentreSystem& sys) {
  std::ostringstream os;
  os << "[centre]\n";
  for (std::size_t i = 0; i < sys.dims().m; ++i)
    os << sys.names.centre[i] << "' = " << to_string(sys.centre_rhs(i), sys.names) << "\n";
  os << "[stable]\n";
  for (std::size_t j = 0; j < sys.dims().n; ++j)
    os << sys.names.stable[j] << "' = " << to_string(sys.stable_rhs(j), sys.names) << "\n";
  if (!sys.names.params.empty()) {
    os << "[params]\n";
    for (std::size_t k = 0; k < sys.names.params.size(); ++k) os << (k ? " " : "") << sys.names.params[k];
    os << "\n";
  }
  return os.str();
}

}  // namespace cmr

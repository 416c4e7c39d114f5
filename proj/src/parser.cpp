#include "realize/parser.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace realize {

namespace {

enum class Tok {
  Ident,
  PrimedIdent,
  IntLit,
  RealLit,
  KwContract,
  KwEnd,
  KwInputs,
  KwState,
  KwAssumptions,
  KwInitial,
  KwTransitions,
  KwBool,
  KwInt,
  KwReal,
  KwTrue,
  KwFalse,
  KwNot,
  KwAnd,
  KwOr,
  KwDiv,
  KwMod,
  KwIf,
  KwThen,
  KwElse,
  LParen,
  RParen,
  Colon,
  Semi,
  Arrow,  // =>
  Eq,
  Ne,  // <>
  Lt,
  Le,
  Gt,
  Ge,
  Plus,
  Minus,
  Star,
  Eof,
};

struct Token {
  Tok kind;
  std::string text;
  SourceSpan span;
};

const std::map<std::string, Tok>& keywords() {
  static const std::map<std::string, Tok> kw = {
      {"contract", Tok::KwContract}, {"end", Tok::KwEnd},
      {"inputs", Tok::KwInputs},     {"state", Tok::KwState},
      {"assumptions", Tok::KwAssumptions}, {"initial", Tok::KwInitial},
      {"transitions", Tok::KwTransitions}, {"bool", Tok::KwBool},
      {"int", Tok::KwInt},           {"real", Tok::KwReal},
      {"true", Tok::KwTrue},         {"false", Tok::KwFalse},
      {"not", Tok::KwNot},           {"and", Tok::KwAnd},
      {"or", Tok::KwOr},             {"div", Tok::KwDiv},
      {"mod", Tok::KwMod},           {"if", Tok::KwIf},
      {"then", Tok::KwThen},         {"else", Tok::KwElse},
  };
  return kw;
}

class Lexer {
 public:
  Lexer(const std::string& text, std::vector<Diagnostic>& diags)
      : text_(text), diags_(diags) {}

  std::vector<Token> run() {
    std::vector<Token> tokens;
    while (true) {
      skip_trivia();
      if (at_end()) break;
      if (auto t = next_token()) tokens.push_back(*t);
    }
    tokens.push_back({Tok::Eof, "<eof>", here(1)});
    return tokens;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t off = 0) const {
    return pos_ + off < text_.size() ? text_[pos_ + off] : '\0';
  }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  SourceSpan here(int len) const { return SourceSpan{line_, col_, len}; }

  void skip_trivia() {
    while (!at_end()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '-' && peek(1) == '-') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::optional<Token> next_token() {
    SourceSpan start = here(1);
    char c = peek();

    if (std::isdigit(static_cast<unsigned char>(c))) return lex_number(start);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_word(start);

    advance();
    switch (c) {
      case '(': return Token{Tok::LParen, "(", start};
      case ')': return Token{Tok::RParen, ")", start};
      case ':': return Token{Tok::Colon, ":", start};
      case ';': return Token{Tok::Semi, ";", start};
      case '+': return Token{Tok::Plus, "+", start};
      case '*': return Token{Tok::Star, "*", start};
      case '-': return Token{Tok::Minus, "-", start};
      case '=':
        if (peek() == '>') {
          advance();
          return Token{Tok::Arrow, "=>", span2(start)};
        }
        return Token{Tok::Eq, "=", start};
      case '<':
        if (peek() == '>') {
          advance();
          return Token{Tok::Ne, "<>", span2(start)};
        }
        if (peek() == '=') {
          advance();
          return Token{Tok::Le, "<=", span2(start)};
        }
        return Token{Tok::Lt, "<", start};
      case '>':
        if (peek() == '=') {
          advance();
          return Token{Tok::Ge, ">=", span2(start)};
        }
        return Token{Tok::Gt, ">", start};
      default:
        diags_.push_back(Diagnostic{DiagCode::LexError,
                                    std::string("unexpected character '") + c + "'", start});
        return std::nullopt;
    }
  }

  static SourceSpan span2(SourceSpan s) {
    s.length = 2;
    return s;
  }

  Token lex_number(SourceSpan start) {
    std::string digits;
    while (std::isdigit(static_cast<unsigned char>(peek()))) digits += advance();
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      digits += advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) digits += advance();
      start.length = static_cast<int>(digits.size());
      return {Tok::RealLit, digits, start};
    }
    start.length = static_cast<int>(digits.size());
    return {Tok::IntLit, digits, start};
  }

  Token lex_word(SourceSpan start) {
    std::string word;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') word += advance();
    start.length = static_cast<int>(word.size());
    auto it = keywords().find(word);
    if (it != keywords().end()) return {it->second, word, start};
    if (peek() == '\'') {
      advance();
      start.length += 1;
      return {Tok::PrimedIdent, word, start};
    }
    return {Tok::Ident, word, start};
  }

  const std::string& text_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct ParseAbort {};  // thrown to unwind to the nearest recovery point

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<Diagnostic>& diags)
      : tokens_(std::move(tokens)), diags_(diags) {}

  std::optional<Contract> run() {
    Contract c;
    try {
      expect(Tok::KwContract, "expected 'contract'");
      c.name = expect(Tok::Ident, "expected contract name").text;
    } catch (const ParseAbort&) {
      return std::nullopt;
    }

    bool seen[5] = {false, false, false, false, false};
    while (!at(Tok::KwEnd) && !at(Tok::Eof)) {
      Token section = peek();
      int idx = section_index(section.kind);
      if (idx < 0) {
        error(section.span, "expected a section keyword or 'end', found '" + section.text + "'");
        skip_to_section_start();
        continue;
      }
      advance();
      if (seen[idx])
        diags_.push_back(Diagnostic{DiagCode::DuplicateSection,
                                    "section '" + section.text + "' appears twice",
                                    section.span});
      seen[idx] = true;
      try {
        expect(Tok::Colon, "expected ':' after section keyword");
      } catch (const ParseAbort&) {
        skip_to_section_start();
        continue;
      }
      switch (section.kind) {
        case Tok::KwInputs: parse_decls(c.inputs); break;
        case Tok::KwState: parse_decls(c.states); break;
        case Tok::KwAssumptions: parse_exprs(c.assumptions); break;
        case Tok::KwInitial: parse_exprs(c.initial_guarantees); break;
        case Tok::KwTransitions: parse_exprs(c.transitional_guarantees); break;
        default: break;
      }
    }
    if (at(Tok::KwEnd)) {
      advance();
      if (!at(Tok::Eof)) error(peek().span, "unexpected text after 'end'");
    } else {
      error(peek().span, "expected 'end'");
    }

    check_duplicate_vars(c);
    if (has_errors()) return std::nullopt;
    return c;
  }

 private:
  static int section_index(Tok t) {
    switch (t) {
      case Tok::KwInputs: return 0;
      case Tok::KwState: return 1;
      case Tok::KwAssumptions: return 2;
      case Tok::KwInitial: return 3;
      case Tok::KwTransitions: return 4;
      default: return -1;
    }
  }

  bool at_section_boundary() const {
    return section_index(peek().kind) >= 0 || at(Tok::KwEnd) || at(Tok::Eof);
  }

  void parse_decls(std::vector<VarDecl>& out) {
    while (!at_section_boundary()) {
      try {
        Token name = expect(Tok::Ident, "expected variable name");
        expect(Tok::Colon, "expected ':' in declaration");
        Sort sort;
        if (at(Tok::KwBool)) sort = Sort::Bool;
        else if (at(Tok::KwInt)) sort = Sort::Int;
        else if (at(Tok::KwReal)) sort = Sort::Real;
        else {
          error(peek().span, "expected a sort (bool, int or real)");
          throw ParseAbort{};
        }
        advance();
        expect(Tok::Semi, "expected ';' after declaration");
        out.push_back(VarDecl{name.text, sort, name.span});
      } catch (const ParseAbort&) {
        skip_past_semi();
      }
    }
  }

  void parse_exprs(std::vector<ExprPtr>& out) {
    while (!at_section_boundary()) {
      try {
        ExprPtr e = parse_expr();
        expect(Tok::Semi, "expected ';' after expression");
        out.push_back(std::move(e));
      } catch (const ParseAbort&) {
        skip_past_semi();
      }
    }
  }

  // Precedence, loosest first: => | or | and | not | cmp | + - | * div mod | unary -
  ExprPtr parse_expr() { return parse_implies(); }

  ExprPtr parse_implies() {
    ExprPtr lhs = parse_or();
    if (at(Tok::Arrow)) {
      Token op = advance();
      ExprPtr rhs = parse_implies();  // right-associative
      return mk::implies(std::move(lhs), std::move(rhs), op.span);
    }
    return lhs;
  }

  ExprPtr parse_or() {
    ExprPtr first = parse_and();
    if (!at(Tok::KwOr)) return first;
    std::vector<ExprPtr> args{std::move(first)};
    SourceSpan span = peek().span;
    while (at(Tok::KwOr)) {
      advance();
      args.push_back(parse_and());
    }
    return mk::or_(std::move(args), span);
  }

  ExprPtr parse_and() {
    ExprPtr first = parse_not();
    if (!at(Tok::KwAnd)) return first;
    std::vector<ExprPtr> args{std::move(first)};
    SourceSpan span = peek().span;
    while (at(Tok::KwAnd)) {
      advance();
      args.push_back(parse_not());
    }
    return mk::and_(std::move(args), span);
  }

  ExprPtr parse_not() {
    if (at(Tok::KwNot)) {
      Token op = advance();
      return mk::not_(parse_not(), op.span);
    }
    return parse_cmp();
  }

  ExprPtr parse_cmp() {
    ExprPtr lhs = parse_addsub();
    std::optional<CmpOp> op = cmp_op(peek().kind);
    if (!op) return lhs;
    Token tok = advance();
    ExprPtr rhs = parse_addsub();
    if (cmp_op(peek().kind))
      error(peek().span, "comparisons are non-associative; use parentheses");
    return mk::cmp(*op, std::move(lhs), std::move(rhs), tok.span);
  }

  static std::optional<CmpOp> cmp_op(Tok t) {
    switch (t) {
      case Tok::Eq: return CmpOp::Eq;
      case Tok::Ne: return CmpOp::Ne;
      case Tok::Lt: return CmpOp::Lt;
      case Tok::Le: return CmpOp::Le;
      case Tok::Gt: return CmpOp::Gt;
      case Tok::Ge: return CmpOp::Ge;
      default: return std::nullopt;
    }
  }

  ExprPtr parse_addsub() {
    ExprPtr lhs = parse_mul();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      Token op = advance();
      ExprPtr rhs = parse_mul();
      ArithOp a = op.kind == Tok::Plus ? ArithOp::Add : ArithOp::Sub;
      lhs = mk::arith(a, {std::move(lhs), std::move(rhs)}, op.span);
    }
    return lhs;
  }

  ExprPtr parse_mul() {
    ExprPtr lhs = parse_unary_minus();
    while (at(Tok::Star) || at(Tok::KwDiv) || at(Tok::KwMod)) {
      Token op = advance();
      ExprPtr rhs = parse_unary_minus();
      ArithOp a = op.kind == Tok::Star ? ArithOp::Mul
                  : op.kind == Tok::KwDiv ? ArithOp::Div
                                          : ArithOp::Mod;
      lhs = mk::arith(a, {std::move(lhs), std::move(rhs)}, op.span);
    }
    return lhs;
  }

  ExprPtr parse_unary_minus() {
    if (at(Tok::Minus)) {
      Token op = advance();
      return mk::arith(ArithOp::Neg, {parse_unary_minus()}, op.span);
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    Token t = peek();
    switch (t.kind) {
      case Tok::KwTrue: advance(); return mk::bool_lit(true, t.span);
      case Tok::KwFalse: advance(); return mk::bool_lit(false, t.span);
      case Tok::IntLit: {
        advance();
        return mk::int_lit(parse_int(t), t.span);
      }
      case Tok::RealLit: {
        advance();
        auto dot = t.text.find('.');
        std::string whole = t.text.substr(0, dot);
        std::string frac = t.text.substr(dot + 1);
        std::int64_t num = 0;
        try {
          num = std::stoll(whole + frac);  // throws before den can overflow
        } catch (const std::exception&) {
          error(t.span, "real literal out of range");
          throw ParseAbort{};
        }
        std::int64_t den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        return mk::real_lit(num, den, t.span);
      }
      case Tok::Ident: advance(); return mk::var(t.text, false, t.span);
      case Tok::PrimedIdent: advance(); return mk::var(t.text, true, t.span);
      case Tok::LParen: {
        advance();
        ExprPtr e = parse_expr();
        expect(Tok::RParen, "expected ')'");
        return e;
      }
      case Tok::KwIf: {
        advance();
        ExprPtr c = parse_expr();
        expect(Tok::KwThen, "expected 'then'");
        ExprPtr a = parse_expr();
        expect(Tok::KwElse, "expected 'else'");
        ExprPtr b = parse_expr();
        return mk::ite(std::move(c), std::move(a), std::move(b), t.span);
      }
      default:
        error(t.span, "expected an expression, found '" + t.text + "'");
        throw ParseAbort{};
    }
  }

  std::int64_t parse_int(const Token& t) {
    try {
      return std::stoll(t.text);
    } catch (const std::exception&) {
      error(t.span, "integer literal out of range");
      throw ParseAbort{};
    }
  }

  void check_duplicate_vars(const Contract& c) {
    std::map<std::string, SourceSpan> seen;
    auto visit = [&](const std::vector<VarDecl>& decls) {
      for (const auto& d : decls) {
        auto [it, inserted] = seen.emplace(d.name, d.span);
        if (!inserted)
          diags_.push_back(Diagnostic{DiagCode::DuplicateVariable,
                                      "variable '" + d.name + "' declared more than once",
                                      d.span});
      }
    };
    visit(c.inputs);
    visit(c.states);
  }

  bool at(Tok t) const { return peek().kind == t; }
  const Token& peek() const { return tokens_[pos_]; }

  Token advance() {
    Token t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  Token expect(Tok t, const std::string& msg) {
    if (!at(t)) {
      error(peek().span, msg + ", found '" + peek().text + "'");
      throw ParseAbort{};
    }
    return advance();
  }

  void skip_past_semi() {
    while (!at(Tok::Semi) && !at_section_boundary()) advance();
    if (at(Tok::Semi)) advance();
  }

  void skip_to_section_start() {
    while (!at_section_boundary()) advance();
  }

  void error(SourceSpan span, std::string msg) {
    diags_.push_back(Diagnostic{DiagCode::SyntaxError, std::move(msg), span});
  }

  bool has_errors() const { return !diags_.empty(); }

  std::vector<Token> tokens_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Rendering

constexpr int kPrecImplies = 1;
constexpr int kPrecOr = 2;
constexpr int kPrecAnd = 3;
constexpr int kPrecNot = 4;
constexpr int kPrecCmp = 5;
constexpr int kPrecAdd = 6;
constexpr int kPrecMul = 7;
constexpr int kPrecNeg = 8;
constexpr int kPrecPrimary = 9;

int precedence(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Implies: return kPrecImplies;
    case ExprKind::Or: return kPrecOr;
    case ExprKind::And: return kPrecAnd;
    case ExprKind::Not: return kPrecNot;
    case ExprKind::Cmp: return kPrecCmp;
    case ExprKind::Arith:
      switch (e->arith_op) {
        case ArithOp::Add:
        case ArithOp::Sub: return kPrecAdd;
        case ArithOp::Neg: return kPrecNeg;
        default: return kPrecMul;
      }
    case ExprKind::IntLit:
      // Negative literals print with a leading minus sign.
      return e->int_value < 0 ? kPrecNeg : kPrecPrimary;
    case ExprKind::RealLit:
      return e->real_value.num < 0 ? kPrecNeg : kPrecPrimary;
    default: return kPrecPrimary;
  }
}

void render(const ExprPtr& e, int min_prec, std::ostringstream& os);

void render_nary(const ExprPtr& e, const char* op, int child_min, std::ostringstream& os) {
  for (std::size_t i = 0; i < e->args.size(); ++i) {
    if (i > 0) os << " " << op << " ";
    render(e->args[i], child_min, os);
  }
}

void render(const ExprPtr& e, int min_prec, std::ostringstream& os) {
  int prec = precedence(e);
  bool parens = prec < min_prec;
  if (parens) os << "(";

  switch (e->kind) {
    case ExprKind::BoolLit: os << (e->bool_value ? "true" : "false"); break;
    case ExprKind::IntLit:
      if (e->int_value < 0) {
        // Negative literals have no token form; print as a negation.
        os << "-" << -(e->int_value);
      } else {
        os << e->int_value;
      }
      break;
    case ExprKind::RealLit: {
      if (!e->real_value.is_decimal_representable())
        throw std::invalid_argument("rational literal " + e->real_value.to_string() +
                                    " has no decimal rendering");
      Rational r = e->real_value;
      if (r.num < 0) {
        os << "-" << (-r).to_string();
      } else {
        os << r.to_string();
      }
      break;
    }
    case ExprKind::VarRef: os << e->var_name << (e->var_primed ? "'" : ""); break;
    case ExprKind::Not:
      os << "not ";
      render(e->args[0], kPrecNot, os);
      break;
    case ExprKind::And:
      if (e->args.empty()) { os << "true"; break; }
      if (e->args.size() == 1) { render(e->args[0], min_prec, os); break; }
      render_nary(e, "and", kPrecAnd + 1, os);
      break;
    case ExprKind::Or:
      if (e->args.empty()) { os << "false"; break; }
      if (e->args.size() == 1) { render(e->args[0], min_prec, os); break; }
      render_nary(e, "or", kPrecOr + 1, os);
      break;
    case ExprKind::Implies:
      render(e->args[0], kPrecImplies + 1, os);
      os << " => ";
      render(e->args[1], kPrecImplies, os);  // right-associative
      break;
    case ExprKind::Ite:
      os << "(if ";
      render(e->args[0], kPrecImplies, os);
      os << " then ";
      render(e->args[1], kPrecImplies, os);
      os << " else ";
      render(e->args[2], kPrecImplies, os);
      os << ")";
      break;
    case ExprKind::Cmp:
      render(e->args[0], kPrecCmp + 1, os);
      os << " " << to_string(e->cmp_op) << " ";
      render(e->args[1], kPrecCmp + 1, os);
      break;
    case ExprKind::Arith:
      if (e->arith_op == ArithOp::Neg) {
        os << "-";
        render(e->args[0], kPrecPrimary, os);
      } else {
        int p = precedence(e);
        render(e->args[0], p, os);
        os << " " << to_string(e->arith_op) << " ";
        render(e->args[1], p + 1, os);
      }
      break;
  }
  if (parens) os << ")";
}

void render_section(std::ostringstream& os, const char* name,
                    const std::vector<ExprPtr>& exprs) {
  os << "  " << name << ":\n";
  if (exprs.empty()) {
    os << "    true;\n";
    return;
  }
  for (const auto& e : exprs) os << "    " << render_expr(e) << ";\n";
}

}  // namespace

ParseResult parse_contract(const std::string& text) {
  ParseResult result;
  Lexer lexer(text, result.diagnostics);
  std::vector<Token> tokens = lexer.run();
  if (!result.diagnostics.empty()) return result;
  Parser parser(std::move(tokens), result.diagnostics);
  result.contract = parser.run();
  if (!result.diagnostics.empty()) result.contract.reset();
  return result;
}

std::string render_expr(const ExprPtr& e) {
  std::ostringstream os;
  render(e, kPrecImplies, os);
  return os.str();
}

std::string render_contract(const Contract& c) {
  std::ostringstream os;
  os << "contract " << c.name << "\n";
  if (!c.inputs.empty()) {
    os << "  inputs:\n";
    for (const auto& d : c.inputs) os << "    " << d.name << " : " << to_string(d.sort) << ";\n";
  }
  if (!c.states.empty()) {
    os << "  state:\n";
    for (const auto& d : c.states) os << "    " << d.name << " : " << to_string(d.sort) << ";\n";
  }
  render_section(os, "assumptions", c.assumptions);
  render_section(os, "initial", c.initial_guarantees);
  render_section(os, "transitions", c.transitional_guarantees);
  os << "end\n";
  return os.str();
}

}  // namespace realize

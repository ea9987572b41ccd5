#include "pgfcheck/syntax/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <limits>
#include <set>

#include "pgfcheck/cas/parse.hpp"

namespace pgfcheck::syntax {

namespace {

// ------------------------------------------------------------------ lexer

enum class Tok { Ident, Int, Decimal, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  SourceLoc loc;
};

constexpr std::array<std::string_view, 11> kTwoCharPuncts = {":=", "+=", "-=", "--", "++", "<=",
                                                              ">=", "==", "!=", "&&", "||"};
constexpr std::string_view kOneCharPuncts = ";,{}()[]+-*/^<>=!&|@:";

std::vector<Token> lex(std::string_view src, std::size_t first_line) {
  std::vector<Token> out;
  std::size_t line = first_line;
  std::size_t col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (src.substr(i, 2) == "//") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (src.substr(i, 2) == "/*") {
      SourceLoc start{line, col};
      advance(2);
      while (i < src.size() && src.substr(i, 2) != "*/") advance(1);
      if (i >= src.size()) throw Error(ErrorKind::ParseError, "unterminated comment", start);
      advance(2);
      continue;
    }
    SourceLoc loc{line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), loc});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      Tok kind = Tok::Int;
      if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        kind = Tok::Decimal;
      }
      out.push_back({kind, std::string(src.substr(i, j - i)), loc});
      advance(j - i);
      continue;
    }
    if (i + 1 < src.size()) {
      auto two = src.substr(i, 2);
      if (std::find(kTwoCharPuncts.begin(), kTwoCharPuncts.end(), two) != kTwoCharPuncts.end()) {
        out.push_back({Tok::Punct, std::string(two), loc});
        advance(2);
        continue;
      }
    }
    if (kOneCharPuncts.find(c) != std::string_view::npos) {
      out.push_back({Tok::Punct, std::string(1, c), loc});
      advance(1);
      continue;
    }
    throw Error(ErrorKind::ParseError, "unexpected character '" + std::string(1, c) + "'", loc);
  }
  out.push_back({Tok::End, "", SourceLoc{line, col}});
  return out;
}

const std::set<std::string, std::less<>>& keywords() {
  static const std::set<std::string, std::less<>> k = {
      "params", "vars",  "locals", "if",   "else", "while", "skip", "switch", "case",
      "default", "repeat", "times", "iid", "true", "false", "and",  "or",     "not"};
  return k;
}

const std::set<std::string, std::less<>>& dist_names() {
  static const std::set<std::string, std::less<>> d = {"dirac",    "bernoulli", "uniform",  "unif",
                                                       "geometric", "binomial", "nbinomial", "catalan"};
  return d;
}

// ----------------------------------------------------------- declarations

enum class DeclKind { Param, Var, Local };

void check_new_name(const Program& p, const std::string& name, SourceLoc loc) {
  if (keywords().count(name) || dist_names().count(name)) {
    throw Error(ErrorKind::ParseError, "'" + name + "' is a reserved word", loc);
  }
  if (name.front() == '_') {
    throw Error(ErrorKind::FreshVariableClash, "names starting with '_' are reserved for temporaries", loc);
  }
  if (name == "T") throw Error(ErrorKind::DuplicateName, "'T' is reserved for distribution PGFs", loc);
  if (p.declares_param(name) || p.declares_var(name)) {
    throw Error(ErrorKind::DuplicateName, "'" + name + "' is declared twice", loc);
  }
}

void declare(Program& p, DeclKind kind, const std::string& name, SourceLoc loc) {
  check_new_name(p, name, loc);
  if (kind == DeclKind::Param) {
    for (const auto& v : p.all_vars()) {
      if (indet_name(v) == name) {
        throw Error(ErrorKind::DuplicateName, "parameter '" + name + "' clashes with variable '" + v + "'", loc);
      }
    }
    p.params.push_back(name);
    return;
  }
  std::string up = indet_name(name);
  for (const auto& v : p.all_vars()) {
    if (indet_name(v) == up) {
      throw Error(ErrorKind::DuplicateName, "variables '" + v + "' and '" + name + "' share indeterminate " + up,
                  loc);
    }
  }
  if (p.declares_param(up)) {
    throw Error(ErrorKind::DuplicateName, "variable '" + name + "' clashes with parameter '" + up + "'", loc);
  }
  (kind == DeclKind::Var ? p.vars : p.locals).push_back(name);
}

// ----------------------------------------------------------------- parser

class Parser {
 public:
  Parser(std::vector<Token> toks, Program& prog) : toks_(std::move(toks)), prog_(prog) {}

  void headers(bool allow_redeclare) {
    while (peek().kind == Tok::Ident &&
           (peek().text == "params" || peek().text == "vars" || peek().text == "locals")) {
      std::string which = next().text;
      DeclKind kind = which == "params" ? DeclKind::Param : which == "vars" ? DeclKind::Var : DeclKind::Local;
      do {
        const Token& t = expect_ident("a name");
        bool known = kind == DeclKind::Param ? prog_.declares_param(t.text) : prog_.declares_var(t.text);
        if (!(allow_redeclare && known)) declare(prog_, kind, t.text, t.loc);
      } while (accept(","));
      expect(";");
    }
  }

  Stmt all_statements() {
    if (peek().kind == Tok::End) throw Error(ErrorKind::ParseError, "empty program", peek().loc);
    Stmt s = stmt_list([this] { return peek().kind == Tok::End; });
    return s;
  }

  Guard guard_only() {
    Guard g = guard();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "' after guard");
    return g;
  }

 private:
  // token helpers
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  bool is_punct(std::string_view p, std::size_t k = 0) const {
    return peek(k).kind == Tok::Punct && peek(k).text == p;
  }
  bool is_word(std::string_view w, std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && peek(k).text == w;
  }
  bool accept(std::string_view p) {
    if (!is_punct(p)) return false;
    ++pos_;
    return true;
  }
  bool accept_word(std::string_view w) {
    if (!is_word(w)) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw Error(ErrorKind::ParseError, msg, peek().loc); }
  [[noreturn]] void fail_at(ErrorKind k, const std::string& msg, SourceLoc loc) const { throw Error(k, msg, loc); }
  std::string describe(const Token& t) const { return t.kind == Tok::End ? "end of input" : "'" + t.text + "'"; }
  void expect(std::string_view p) {
    if (!accept(p)) fail("expected '" + std::string(p) + "' but found " + describe(peek()));
  }
  void expect_word(std::string_view w) {
    if (!accept_word(w)) fail("expected '" + std::string(w) + "' but found " + describe(peek()));
  }
  const Token& expect_ident(const std::string& what) {
    if (peek().kind != Tok::Ident) fail("expected " + what + " but found " + describe(peek()));
    return next();
  }
  std::uint32_t expect_natural(const std::string& what) {
    if (peek().kind != Tok::Int) fail("expected " + what + " but found " + describe(peek()));
    const Token& t = next();
    if (t.text.size() > 9) fail_at(ErrorKind::ParseError, "constant " + t.text + " is too large", t.loc);
    return static_cast<std::uint32_t>(std::stoul(t.text));
  }

  const std::string& expect_var() {
    const Token& t = expect_ident("a variable");
    if (!prog_.declares_var(t.text)) {
      std::string extra = prog_.declares_param(t.text) ? " (it is a parameter)" : "";
      fail_at(ErrorKind::UndeclaredVariable, "undeclared variable '" + t.text + "'" + extra, t.loc);
    }
    return t.text;
  }

  // statements
  Stmt stmt_list(const std::function<bool()>& at_end) {
    std::vector<Stmt> items;
    while (!at_end()) {
      if (peek().kind == Tok::End) fail("unexpected end of input");
      items.push_back(statement());
      bool closed_by_brace = pos_ > 0 && toks_[pos_ - 1].kind == Tok::Punct && toks_[pos_ - 1].text == "}";
      if (accept(";")) continue;
      if (at_end() || closed_by_brace) continue;
      fail("expected ';' but found " + describe(peek()));
    }
    return Stmt::seq(std::move(items));
  }

  Stmt block() {
    expect("{");
    Stmt s = stmt_list([this] { return is_punct("}"); });
    expect("}");
    return s;
  }

  Stmt statement() {
    SourceLoc loc = peek().loc;
    Stmt s = statement_inner();
    s.loc = loc;
    return s;
  }

  Stmt statement_inner() {
    if (accept_word("skip")) return Stmt::skip();
    if (is_word("if")) return if_stmt();
    if (is_word("while")) return while_stmt(nullptr);
    if (accept("@")) {
      const Token& t = expect_ident("'invariant'");
      if (t.text != "invariant") fail_at(ErrorKind::ParseError, "unknown annotation '" + t.text + "'", t.loc);
      SourceLoc at = peek().loc;
      Stmt inv = block();
      inv.loc = at;
      if (!is_word("while")) fail("an invariant annotation must precede a while loop");
      return while_stmt(std::make_shared<const Stmt>(std::move(inv)));
    }
    if (accept_word("switch")) return switch_stmt();
    if (accept_word("repeat")) {
      std::uint32_t n = expect_natural("a repetition count");
      accept_word("times");
      Stmt s;
      s.kind = StmtKind::Repeat;
      s.n = n;
      s.kids.push_back(block());
      return s;
    }
    if (is_punct("{")) {
      Stmt left = block();
      if (!accept("[")) return left;
      ParamExpr p = probability();
      expect("]");
      Stmt right = block();
      return Stmt::pchoice(std::move(p), std::move(left), std::move(right));
    }
    if (peek().kind == Tok::Ident) return assignment();
    fail("expected a statement but found " + describe(peek()));
  }

  Stmt if_stmt() {
    expect_word("if");
    expect("(");
    Guard g = guard();
    expect(")");
    Stmt then_branch = block();
    Stmt else_branch = Stmt::skip();
    if (accept_word("else")) {
      if (is_word("if")) {
        SourceLoc loc = peek().loc;
        else_branch = if_stmt();
        else_branch.loc = loc;
      } else {
        else_branch = block();
      }
    }
    return Stmt::if_else(std::move(g), std::move(then_branch), std::move(else_branch));
  }

  Stmt while_stmt(std::shared_ptr<const Stmt> inv) {
    expect_word("while");
    expect("(");
    Guard g = guard();
    expect(")");
    Stmt s = Stmt::while_loop(std::move(g), block());
    s.invariant = std::move(inv);
    return s;
  }

  Stmt switch_stmt() {
    bool paren = accept("(");
    std::string x = expect_var();
    if (paren) expect(")");
    expect("{");
    Stmt s;
    s.kind = StmtKind::Switch;
    s.x = x;
    auto case_end = [this] { return is_word("case") || is_word("default") || is_punct("}"); };
    while (is_word("case")) {
      SourceLoc loc = next().loc;
      std::uint32_t label = expect_natural("a case label");
      if (std::find(s.labels.begin(), s.labels.end(), label) != s.labels.end()) {
        fail_at(ErrorKind::ParseError, "duplicate case " + std::to_string(label), loc);
      }
      expect(":");
      s.labels.push_back(label);
      s.kids.push_back(stmt_list(case_end));
    }
    Stmt fallback = Stmt::skip();
    if (accept_word("default")) {
      expect(":");
      fallback = stmt_list([this] { return is_punct("}"); });
    }
    expect("}");
    s.kids.push_back(std::move(fallback));
    return s;
  }

  struct DistCall {
    Dist dist;
    std::optional<std::string> source;  // iid source variable
    std::uint32_t mult = 1;
  };

  bool at_dist_call() const {
    return peek().kind == Tok::Ident && is_punct("(", 1) &&
           (dist_names().count(peek().text) > 0 || peek().text == "iid");
  }

  void check_probability(const ParamExpr& p, bool allow_one, SourceLoc loc) const {
    if (!p.is_number()) return;
    if (p.value < 0 || p.value > 1 || (!allow_one && p.value == 1)) {
      fail_at(ErrorKind::InvalidParameter,
              "probability " + cas::coeff_to_string(p.value) + " is outside " + (allow_one ? "[0, 1]" : "[0, 1)"),
              loc);
    }
  }

  // iid(D, k*y) or iid(D, y)
  void iid_source(DistCall& call) {
    std::uint32_t mult = 1;
    if (peek().kind == Tok::Int) {
      mult = expect_natural("a multiplier");
      accept("*");
    }
    call.source = expect_var();
    if (mult == 0) fail("iid multiplier must be positive");
    call.mult = mult;
  }

  DistCall dist_call() {
    const Token& name_tok = next();
    std::string name = name_tok.text;
    SourceLoc loc = name_tok.loc;
    expect("(");
    DistCall call;
    Dist& d = call.dist;
    if (name == "catalan") {
      fail_at(ErrorKind::AlgebraicPGFUnsupported,
              "algebraic PGF unsupported: catalan has no rational generating function", loc);
    }
    if (name == "iid") {
      if (!at_dist_call() || peek().text == "iid") fail("expected a distribution inside iid");
      DistCall inner = dist_call();
      if (inner.source) fail_at(ErrorKind::ParseError, "nested iid is not supported", loc);
      expect(",");
      call.dist = inner.dist;
      iid_source(call);
      expect(")");
      return call;
    }
    if (name == "dirac") {
      d.kind = Dist::Kind::Dirac;
      d.a = expect_natural("a natural number");
    } else if (name == "bernoulli") {
      d.kind = Dist::Kind::Bernoulli;
      SourceLoc at = peek().loc;
      d.p = probability();
      check_probability(d.p, true, at);
    } else if (name == "geometric") {
      d.kind = Dist::Kind::Geometric;
      SourceLoc at = peek().loc;
      d.p = probability();
      check_probability(d.p, false, at);
    } else if (name == "uniform" || name == "unif") {
      std::uint32_t a = expect_natural("a natural number");
      if (accept(",")) {
        std::uint32_t b = expect_natural("a natural number");
        if (a > b) fail_at(ErrorKind::InvalidParameter, "empty range unif(" + std::to_string(a) + ", " + std::to_string(b) + ")", loc);
        d.kind = Dist::Kind::UniformRange;
        d.a = a;
        d.b = b;
      } else {
        if (a == 0) fail_at(ErrorKind::InvalidParameter, "uniform(0) has empty support", loc);
        d.kind = Dist::Kind::Uniform;
        d.a = a;
      }
    } else if (name == "binomial" || name == "nbinomial") {
      bool neg = name == "nbinomial";
      SourceLoc at = peek().loc;
      d.p = probability();
      check_probability(d.p, !neg, at);
      expect(",");
      if (peek().kind == Tok::Ident) {
        // binomial(p, y) abbreviates iid(bernoulli(p), y)
        d.kind = neg ? Dist::Kind::Geometric : Dist::Kind::Bernoulli;
        iid_source(call);
      } else {
        d.kind = neg ? Dist::Kind::NBinomial : Dist::Kind::Binomial;
        d.a = expect_natural("a natural number");
      }
    }
    expect(")");
    return call;
  }

  Stmt assignment() {
    const Token& target_tok = peek();
    std::string x = expect_var();
    SourceLoc loc = target_tok.loc;
    if (accept("--")) return Stmt::decr(x, 1);
    if (accept("++")) return classify(x, Affine{{{x, 1}}, 1}, loc);
    std::string op;
    if (accept(":=")) op = ":=";
    else if (accept("+=")) op = "+=";
    else if (accept("-=")) op = "-=";
    else fail("expected ':=', '+=' or '-=' but found " + describe(peek()));

    if (at_dist_call()) {
      SourceLoc at = peek().loc;
      DistCall call = dist_call();
      if (op == "-=") fail_at(ErrorKind::UnsupportedAffine, "cannot subtract a random quantity", at);
      if (is_punct("+") || is_punct("-") || is_punct("*")) {
        fail_at(ErrorKind::UnsupportedAffine, "arithmetic on distributions is not supported", peek().loc);
      }
      Stmt s;
      s.x = x;
      s.dist = call.dist;
      if (call.source) {
        if (*call.source == x) {
          fail_at(ErrorKind::SameVariableIid, "iid source and target are both '" + x + "'", at);
        }
        s.kind = op == ":=" ? StmtKind::AssignIid : StmtKind::IidIncr;
        s.y = *call.source;
        s.n = call.mult;
      } else {
        s.kind = op == ":=" ? StmtKind::AssignDist : StmtKind::IncrDist;
      }
      return s;
    }
    Affine rhs = affine();
    Affine f;
    if (op == ":=") {
      f = rhs;
    } else {
      long sign = op == "+=" ? 1 : -1;
      f.coef[x] = 1;
      for (const auto& [v, k] : rhs.coef) f.coef[v] += sign * k;
      f.constant = sign * rhs.constant;
    }
    std::erase_if(f.coef, [](const auto& e) { return e.second == 0; });
    return classify(x, std::move(f), loc);
  }

  Affine affine() {
    Affine f;
    long sign = 1;
    if (accept("-")) sign = -1;
    else accept("+");
    while (true) {
      affine_term(f, sign);
      if (accept("+")) sign = 1;
      else if (accept("-")) sign = -1;
      else break;
    }
    return f;
  }

  void affine_term(Affine& f, long sign) {
    if (peek().kind == Tok::Int) {
      long k = expect_natural("a constant");
      if (accept("*") || peek().kind == Tok::Ident) {
        reject_dist_in_arith();
        f.coef[expect_var()] += sign * k;
      } else {
        f.constant += sign * k;
      }
      return;
    }
    if (peek().kind == Tok::Ident) {
      reject_dist_in_arith();
      std::string v = expect_var();
      long k = 1;
      if (accept("*")) {
        if (peek().kind == Tok::Ident) {
          fail_at(ErrorKind::UnsupportedAffine, "nonlinear update of '" + v + "'", peek().loc);
        }
        k = expect_natural("a constant");
      }
      f.coef[v] += sign * k;
      return;
    }
    if (peek().kind == Tok::Decimal) fail_at(ErrorKind::UnsupportedAffine, "variables hold natural numbers", peek().loc);
    fail("expected an expression but found " + describe(peek()));
  }

  void reject_dist_in_arith() {
    if (peek().kind != Tok::Ident) return;
    if (peek().text == "catalan") {
      fail_at(ErrorKind::AlgebraicPGFUnsupported,
              "algebraic PGF unsupported: catalan has no rational generating function", peek().loc);
    }
    if (dist_names().count(peek().text) || peek().text == "iid") {
      fail_at(ErrorKind::UnsupportedAffine, "arithmetic on distributions is not supported", peek().loc);
    }
  }

  static Stmt classify(const std::string& x, Affine f, SourceLoc loc) {
    Stmt s;
    s.x = x;
    auto self = f.coef.find(x);
    long a = self == f.coef.end() ? 0 : self->second;
    std::size_t others = f.coef.size() - (a != 0 ? 1 : 0);
    auto fits = [](long v) { return v >= 0 && v <= std::numeric_limits<std::uint32_t>::max(); };
    if (f.coef.empty()) {
      if (f.constant < 0) throw Error(ErrorKind::UnsupportedAffine, "negative constant assigned to '" + x + "'", loc);
      if (!fits(f.constant)) throw Error(ErrorKind::ParseError, "constant is too large", loc);
      return Stmt::assign_const(x, static_cast<std::uint32_t>(f.constant));
    }
    if (a == 1 && others == 0) {
      if (f.constant == 0) return Stmt::skip();
      if (f.constant > 0) {
        s.kind = StmtKind::IncrConst;
        s.n = static_cast<std::uint32_t>(f.constant);
        return s;
      }
      return Stmt::decr(x, static_cast<std::uint32_t>(-f.constant));
    }
    if (f.constant == 0 && others == 1) {
      const auto& [y, k] = *std::find_if(f.coef.begin(), f.coef.end(), [&](const auto& e) { return e.first != x; });
      if (a == 0 && k == 1) {
        s.kind = StmtKind::AssignVar;
        s.y = y;
        return s;
      }
      if (a == 1 && k == 1) {
        s.kind = StmtKind::IncrVar;
        s.y = y;
        return s;
      }
      if (a == 1 && k < 0) return Stmt::sub_var(x, y, static_cast<std::uint32_t>(-k));
    }
    s.kind = StmtKind::Affine;
    s.affine = std::move(f);
    return s;
  }

  // probabilities
  ParamExpr probability() {
    ParamExpr e = p_term();
    while (true) {
      if (accept("+")) e = ParamExpr::binary(ParamExpr::Kind::Add, std::move(e), p_term());
      else if (accept("-")) e = ParamExpr::binary(ParamExpr::Kind::Sub, std::move(e), p_term());
      else return e;
    }
  }

  ParamExpr p_term() {
    ParamExpr e = p_unary();
    while (true) {
      if (accept("*")) {
        e = ParamExpr::binary(ParamExpr::Kind::Mul, std::move(e), p_unary());
      } else if (is_punct("/")) {
        SourceLoc loc = next().loc;
        ParamExpr d = p_unary();
        if (d.is_number() && d.value == 0) fail_at(ErrorKind::InvalidParameter, "division by zero", loc);
        e = ParamExpr::binary(ParamExpr::Kind::Div, std::move(e), std::move(d));
      } else {
        return e;
      }
    }
  }

  ParamExpr p_unary() {
    if (accept("-")) return ParamExpr::negate(p_unary());
    if (accept("(")) {
      ParamExpr e = probability();
      expect(")");
      return e;
    }
    const Token& t = peek();
    if (t.kind == Tok::Int || t.kind == Tok::Decimal) {
      next();
      return ParamExpr::number(*cas::parse_rational(t.text));
    }
    if (t.kind == Tok::Ident) {
      next();
      if (!prog_.declares_param(t.text)) {
        std::string why = prog_.declares_var(t.text) ? " (variables cannot appear in probabilities)" : "";
        fail_at(ErrorKind::UndeclaredVariable, "undeclared parameter '" + t.text + "'" + why, t.loc);
      }
      return ParamExpr::param(t.text);
    }
    fail("expected a probability but found " + describe(t));
  }

  // guards
  Guard guard() {
    Guard g = guard_and();
    while (accept("|") || accept("||") || accept_word("or")) g = Guard::disj(std::move(g), guard_and());
    return g;
  }

  Guard guard_and() {
    Guard g = guard_not();
    while (accept("&") || accept("&&") || accept_word("and")) g = Guard::conj(std::move(g), guard_not());
    return g;
  }

  Guard guard_not() {
    if (accept("!") || accept_word("not")) return Guard::negate(guard_not());
    if (accept("(")) {
      Guard g = guard();
      expect(")");
      return g;
    }
    if (accept_word("true")) return Guard::truth(true);
    if (accept_word("false")) return Guard::truth(false);
    return comparison();
  }

  struct Operand {
    bool is_var;
    std::string var;
    std::uint32_t value;
    SourceLoc loc;
  };

  Operand operand() {
    const Token& t = peek();
    if (t.kind == Tok::Int) return {false, "", expect_natural("a constant"), t.loc};
    if (t.kind == Tok::Ident) {
      next();
      if (prog_.declares_param(t.text)) {
        fail_at(ErrorKind::NonRectangularGuard, "guard compares against parameter '" + t.text + "'", t.loc);
      }
      if (!prog_.declares_var(t.text)) {
        fail_at(ErrorKind::UndeclaredVariable, "undeclared variable '" + t.text + "'", t.loc);
      }
      return {true, t.text, 0, t.loc};
    }
    fail("expected a variable or constant but found " + describe(t));
  }

  Guard comparison() {
    SourceLoc loc = peek().loc;
    Operand lhs = operand();
    if (is_punct("+") || is_punct("-") || is_punct("*")) {
      fail_at(ErrorKind::NonRectangularGuard, "guards compare a single variable with a constant", peek().loc);
    }
    std::string rel;
    for (std::string_view r : {"<=", ">=", "==", "!=", "<", ">", "="}) {
      if (accept(r)) {
        rel = std::string(r);
        break;
      }
    }
    if (rel.empty()) fail("expected a comparison but found " + describe(peek()));
    Operand rhs = operand();
    if (is_punct("+") || is_punct("-") || is_punct("*")) {
      fail_at(ErrorKind::NonRectangularGuard, "guards compare a single variable with a constant", peek().loc);
    }
    if (lhs.is_var && rhs.is_var) {
      fail_at(ErrorKind::NonRectangularGuard,
              "non-rectangular guard: '" + lhs.var + " " + rel + " " + rhs.var + "' compares two variables", loc);
    }
    if (!lhs.is_var && !rhs.is_var) {
      std::uint32_t a = lhs.value, b = rhs.value;
      bool v = rel == "<" ? a < b : rel == "<=" ? a <= b : rel == ">" ? a > b : rel == ">=" ? a >= b
             : rel == "!=" ? a != b : a == b;
      return Guard::truth(v);
    }
    if (!lhs.is_var) {
      // n rel x  ==>  x rel' n
      std::swap(lhs, rhs);
      if (rel == "<") rel = ">";
      else if (rel == ">") rel = "<";
      else if (rel == "<=") rel = ">=";
      else if (rel == ">=") rel = "<=";
    }
    Rel r = rel == "<" ? Rel::Lt : rel == "<=" ? Rel::Le : rel == ">" ? Rel::Gt : rel == ">=" ? Rel::Ge : Rel::Eq;
    Guard g = Guard::atom(lhs.var, r, rhs.value);
    return rel == "!=" ? Guard::negate(std::move(g)) : g;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Program& prog_;
};

struct Sections {
  std::string_view main;
  std::optional<std::string_view> spec;
  std::size_t spec_line = 1;
};

Sections split_sections(std::string_view src) {
  Sections out{src, std::nullopt, 1};
  std::size_t line = 1;
  std::size_t start = 0;
  while (start <= src.size()) {
    std::size_t end = src.find('\n', start);
    if (end == std::string_view::npos) end = src.size();
    std::string_view text = src.substr(start, end - start);
    auto b = text.find_first_not_of(" \t\r");
    auto e = text.find_last_not_of(" \t\r");
    if (b != std::string_view::npos && text.substr(b, e - b + 1) == "#invariant") {
      out.main = src.substr(0, start);
      out.spec = end < src.size() ? src.substr(end + 1) : std::string_view{};
      out.spec_line = line + 1;
      return out;
    }
    if (end == src.size()) break;
    start = end + 1;
    ++line;
  }
  return out;
}

// ------------------------------------------------------------- validation

void validate_param_expr(const Program& p, const ParamExpr& e, SourceLoc loc) {
  std::vector<std::string> names;
  e.collect_params(names);
  for (const auto& n : names) {
    if (!p.declares_param(n)) throw Error(ErrorKind::UndeclaredVariable, "undeclared parameter '" + n + "'", loc);
  }
}

void validate_stmt(const Program& p, const Stmt& s, bool in_spec) {
  auto need_var = [&](const std::string& v) {
    if (!p.declares_var(v)) throw Error(ErrorKind::UndeclaredVariable, "undeclared variable '" + v + "'", s.loc);
  };
  switch (s.kind) {
    case StmtKind::Skip: break;
    case StmtKind::AssignConst:
    case StmtKind::Decr:
    case StmtKind::IncrConst: need_var(s.x); break;
    case StmtKind::AssignVar:
    case StmtKind::IncrVar:
      need_var(s.x);
      need_var(s.y);
      break;
    case StmtKind::SubVar:
    case StmtKind::IidIncr:
    case StmtKind::AssignIid:
      need_var(s.x);
      need_var(s.y);
      if (s.x == s.y) {
        throw Error(s.kind == StmtKind::SubVar ? ErrorKind::UnsupportedAffine : ErrorKind::SameVariableIid,
                    "source and target are both '" + s.x + "'", s.loc);
      }
      if (s.kind != StmtKind::SubVar) validate_param_expr(p, s.dist.p, s.loc);
      break;
    case StmtKind::AssignDist:
    case StmtKind::IncrDist:
      need_var(s.x);
      validate_param_expr(p, s.dist.p, s.loc);
      break;
    case StmtKind::Affine:
      need_var(s.x);
      for (const auto& [v, k] : s.affine.coef) need_var(v);
      break;
    case StmtKind::IfElse:
    case StmtKind::While: {
      std::vector<std::string> vs;
      s.guard.collect_vars(vs);
      for (const auto& v : vs) need_var(v);
      if (s.kind == StmtKind::While && in_spec) {
        throw Error(ErrorKind::NotLoopFree, "specifications must be loop-free", s.loc);
      }
      if (s.invariant) validate_stmt(p, *s.invariant, true);
      break;
    }
    case StmtKind::PChoice: validate_param_expr(p, s.prob, s.loc); break;
    case StmtKind::Switch: need_var(s.x); break;
    case StmtKind::Seq:
    case StmtKind::Repeat: break;
  }
  for (const auto& k : s.kids) validate_stmt(p, k, in_spec);
}

Stmt parse_spec_at(std::string_view source, Program& decls, std::size_t first_line) {
  Parser parser(lex(source, first_line), decls);
  parser.headers(true);
  Stmt s = parser.all_statements();
  validate_stmt(decls, s, true);
  return s;
}

}  // namespace

void validate(const Program& p) {
  Program fresh;
  for (const auto& n : p.params) declare(fresh, DeclKind::Param, n, {});
  for (const auto& n : p.vars) declare(fresh, DeclKind::Var, n, {});
  for (const auto& n : p.locals) declare(fresh, DeclKind::Local, n, {});
  validate_stmt(p, p.body, false);
  if (p.spec) validate_stmt(p, *p.spec, true);
}

Program parse_program(std::string_view source) {
  Sections sec = split_sections(source);
  Program prog;
  Parser main(lex(sec.main, 1), prog);
  main.headers(false);
  prog.body = main.all_statements();
  if (sec.spec) prog.spec = parse_spec_at(*sec.spec, prog, sec.spec_line);
  validate(prog);
  return prog;
}

Stmt parse_spec(std::string_view source, Program& decls) { return parse_spec_at(source, decls, 1); }

Guard parse_guard(std::string_view source, const Program& decls) {
  Program copy = decls;
  Parser parser(lex(source, 1), copy);
  return parser.guard_only();
}

}  // namespace pgfcheck::syntax

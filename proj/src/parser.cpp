#include "mlp/parser.hpp"

#include <cctype>
#include <cstring>
#include <map>
#include <optional>

namespace mlp {

namespace {

enum class Tok {
  Atom, Var, Num, Punct, QAtom, End,
};

struct Token {
  Tok kind;
  std::string text;
  long long num = 0;
  Location loc;
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& s) : src(s) {}

  Location here() const { return {line, col}; }

  void advance(size_t n = 1) {
    for (size_t i = 0; i < n && pos < src.size(); ++i, ++pos) {
      if (src[pos] == '\n') {
        line++;
        col = 1;
      } else {
        col++;
      }
    }
  }

  void skip_ws() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '%') {
        while (pos < src.size() && src[pos] != '\n') advance();
      } else if (isspace((unsigned char)c)) {
        advance();
      } else {
        break;
      }
    }
  }

  Token next() {
    skip_ws();
    Token t;
    t.loc = here();
    if (pos >= src.size()) {
      t.kind = Tok::End;
      return t;
    }
    char c = src[pos];
    if (isdigit((unsigned char)c)) {
      size_t start = pos;
      while (pos < src.size() && isdigit((unsigned char)src[pos])) advance();
      t.kind = Tok::Num;
      t.num = std::stoll(src.substr(start, pos - start));
      return t;
    }
    if (c == '_' || isupper((unsigned char)c)) {
      size_t start = pos;
      while (pos < src.size() && (isalnum((unsigned char)src[pos]) || src[pos] == '_')) advance();
      t.kind = Tok::Var;
      t.text = src.substr(start, pos - start);
      return t;
    }
    if (islower((unsigned char)c)) {
      size_t start = pos;
      while (pos < src.size() && (isalnum((unsigned char)src[pos]) || src[pos] == '_')) advance();
      t.kind = Tok::Atom;
      t.text = src.substr(start, pos - start);
      return t;
    }
    if (c == '\'') {
      advance();
      size_t start = pos;
      while (pos < src.size() && src[pos] != '\'') advance();
      if (pos >= src.size()) throw ParseError(t.loc, "unterminated quoted atom");
      t.kind = Tok::QAtom;
      t.text = src.substr(start, pos - start);
      advance();
      return t;
    }
    // symbolic tokens, longest match first
    static const char* syms[] = {":-", "=..", "=:=", "=\\=", "\\==", "==", "=<", ">=",
                                 "=>", "\\=", "**", "//", "->", "[]", "imp_unused"};
    for (const char* s : {":-", "=..", "=:=", "=\\=", "\\==", "==", "=<", ">=", "=>",
                          "\\=", "**", "//"}) {
      size_t n = strlen(s);
      if (src.compare(pos, n, s) == 0) {
        t.kind = Tok::Punct;
        t.text = s;
        advance(n);
        return t;
      }
    }
    (void)syms;
    t.kind = Tok::Punct;
    t.text = std::string(1, c);
    advance();
    return t;
  }
};

struct VarScope {
  std::map<std::string, int> named;
  int count = 0;
  int fresh(const std::string& name) {
    int id = count++;
    if (name != "_") named[name] = id;
    return id;
  }
  int lookup(const std::string& name) {
    if (name == "_") return count++;
    auto it = named.find(name);
    if (it != named.end()) return it->second;
    return fresh(name);
  }
};

struct OpEntry {
  int prec;
  bool right_assoc_y;  // yfx if true at left
};

int infix_prec(const std::string& op) {
  static const std::map<std::string, int> t = {
      {"=", 700},   {"is", 700},  {"<", 700},  {">", 700},   {"=<", 700}, {">=", 700},
      {"=:=", 700}, {"=\\=", 700}, {"==", 700}, {"\\==", 700}, {"\\=", 700}, {"+", 500},
      {"-", 500},   {"*", 400},   {"//", 400}, {"mod", 400}, {"**", 200}};
  auto it = t.find(op);
  return it == t.end() ? -1 : it->second;
}

bool is_xfx(const std::string& op) { return infix_prec(op) == 700 || op == "**"; }

struct Parser {
  Lexer lex;
  Token cur;
  VarScope* scope = nullptr;
  bool in_modedef = false;

  explicit Parser(const std::string& s) : lex(s) { cur = lex.next(); }

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(cur.loc, msg); }

  void bump() { cur = lex.next(); }

  bool at_punct(const std::string& p) const { return cur.kind == Tok::Punct && cur.text == p; }

  void expect_punct(const std::string& p, const char* what) {
    if (!at_punct(p)) fail(std::string("expected '") + p + "' (" + what + ")");
    bump();
  }

  bool at_atom(const std::string& a) const { return cur.kind == Tok::Atom && cur.text == a; }

  // --- terms ---

  TermPtr parse_term(int maxprec) {
    TermPtr left = parse_primary(maxprec);
    for (;;) {
      std::string op;
      if (cur.kind == Tok::Punct && infix_prec(cur.text) >= 0)
        op = cur.text;
      else if (cur.kind == Tok::Atom && (cur.text == "is" || cur.text == "mod"))
        op = cur.text;
      else
        break;
      int prec = infix_prec(op);
      if (prec > maxprec) break;
      bump();
      int rmax = is_xfx(op) ? prec - 1 : prec - 1;
      TermPtr right = parse_term(rmax);
      left = Term::mk_comp(op, {left, right});
      if (is_xfx(op)) {
        // xfx: left arg of another same-level op not allowed; stop here
        if ((cur.kind == Tok::Punct && infix_prec(cur.text) == prec) ||
            (cur.kind == Tok::Atom && infix_prec(cur.text) == prec))
          fail("operator is not associative");
      }
    }
    return left;
  }

  TermPtr parse_primary(int maxprec) {
    Location loc = cur.loc;
    switch (cur.kind) {
      case Tok::Num: {
        long long v = cur.num;
        bump();
        return Term::mk_num(v);
      }
      case Tok::Var: {
        std::string name = cur.text;
        bump();
        int id = scope->lookup(name);
        TermPtr v = Term::mk_var(id, name);
        if (at_punct("(") && in_modedef) {
          // property-parameter application P(A) inside modedef bodies
          bump();
          std::vector<TermPtr> args{v};
          args.push_back(parse_term(999));
          while (at_punct(",")) {
            bump();
            args.push_back(parse_term(999));
          }
          expect_punct(")", "argument list");
          // stored as $apply(P, Args...)
          return Term::mk_comp("$apply", std::move(args));
        }
        return v;
      }
      case Tok::QAtom:
      case Tok::Atom: {
        std::string name = cur.text;
        bool quoted = cur.kind == Tok::QAtom;
        bump();
        if (at_punct("(") && !lexed_space_before()) {
          bump();
          std::vector<TermPtr> args;
          args.push_back(parse_term(999));
          while (at_punct(",")) {
            bump();
            args.push_back(parse_term(999));
          }
          expect_punct(")", "argument list");
          return Term::mk_comp(name, std::move(args));
        }
        (void)quoted;
        return Term::mk_atom(name);
      }
      case Tok::Punct: {
        if (cur.text == "(") {
          bump();
          TermPtr t = parse_term(999);
          expect_punct(")", "parenthesized term");
          return t;
        }
        if (cur.text == "[") {
          bump();
          return parse_list();
        }
        if (cur.text == "!") {
          bump();
          return Term::mk_atom("!");
        }
        if ((cur.text == "-" || cur.text == "+") && 200 <= maxprec) {
          std::string op = cur.text;
          bump();
          if (op == "-" && cur.kind == Tok::Num) {
            long long v = cur.num;
            bump();
            return Term::mk_num(-v);
          }
          if (at_punct("(")) {
            // functor form: +(A,P), -(3+4)
            bump();
            std::vector<TermPtr> args;
            args.push_back(parse_term(999));
            while (at_punct(",")) {
              bump();
              args.push_back(parse_term(999));
            }
            expect_punct(")", "argument list");
            return Term::mk_comp(op, std::move(args));
          }
          // prefix mode/sign: `+list`, `-int`
          if (cur.kind == Tok::Atom || cur.kind == Tok::QAtom || cur.kind == Tok::Var) {
            TermPtr arg = parse_primary(0);
            return Term::mk_comp(op, {arg});
          }
          return Term::mk_atom(op);
        }
        if (cur.text == "-" || cur.text == "+" || cur.text == "?") {
          std::string op = cur.text;
          bump();
          return Term::mk_atom(op);
        }
        fail("unexpected token '" + cur.text + "'");
      }
      case Tok::End: fail("unexpected end of input");
    }
    fail("unexpected token");
  }

  bool lexed_space_before() const {
    // '(' directly after an atom means an argument list; our lexer does not
    // track spacing, treat every following '(' as an argument list.
    return false;
  }

  TermPtr parse_list() {
    if (at_punct("]")) {
      bump();
      return Term::nil();
    }
    std::vector<TermPtr> items;
    items.push_back(parse_term(999));
    while (at_punct(",")) {
      bump();
      items.push_back(parse_term(999));
    }
    TermPtr tail = Term::nil();
    if (at_punct("|")) {
      bump();
      tail = parse_term(999);
    }
    expect_punct("]", "list");
    TermPtr t = tail;
    for (auto it = items.rbegin(); it != items.rend(); ++it) t = Term::cons(*it, t);
    return t;
  }

  std::vector<TermPtr> parse_conjunction() {
    // one conjunction: either (p1, p2, ...) or a single property. The bare
    // form parses below the infix `+` so the Comp field separator stays a
    // separator.
    std::vector<TermPtr> out;
    if (at_punct("(")) {
      bump();
      out.push_back(parse_term(999));
      while (at_punct(",")) {
        bump();
        out.push_back(parse_term(999));
      }
      expect_punct(")", "conjunction");
    } else {
      out.push_back(parse_term(199));
    }
    return out;
  }

  // --- program structure ---

  Program parse() {
    Program prog;
    std::map<std::pair<std::string, int>, size_t> pred_index;
    while (cur.kind != Tok::End) {
      if (at_punct(":-")) {
        bump();
        parse_directive(prog);
      } else {
        parse_clause(prog, pred_index);
      }
    }
    return prog;
  }

  void parse_directive(Program& prog) {
    Location loc = cur.loc;
    VarScope sc;
    scope = &sc;
    if (cur.kind != Tok::Atom) fail("expected directive name");
    std::string head_word = cur.text;

    if (head_word == "modedef") {
      bump();
      in_modedef = true;
      ModeDef md;
      TermPtr head = parse_term(699);
      if (!head->is_comp()) fail("modedef head must have parameters");
      md.name = head->name;
      md.nparams = (int)head->args.size();
      if (md.nparams < 1 || md.nparams > 2 || !head->args[0]->is_var())
        fail("modedef head must be m(A) or m(A,P)");
      // normalize template var ids: A -> 0, P -> 1
      std::vector<TermPtr> ren(sc.count);
      ren[head->args[0]->var] = Term::mk_var(0, "A");
      if (md.nparams == 2) {
        if (!head->args[1]->is_var()) fail("modedef property parameter must be a variable");
        ren[head->args[1]->var] = Term::mk_var(1, "P");
      }
      if (at_punct(":")) {
        bump();
        for (auto& c : parse_conjunction()) md.calls.push_back(subst_vars(c, ren));
      }
      if (at_punct("=>")) {
        bump();
        for (auto& s : parse_conjunction()) md.success.push_back(subst_vars(s, ren));
      }
      in_modedef = false;
      expect_punct(".", "directive");
      prog.modedefs.push_back(std::move(md));
      scope = nullptr;
      return;
    }

    AStatus status;
    bool is_entry = false;
    if (head_word == "entry") {
      status = AStatus::Entry;
      is_entry = true;
      bump();
    } else if (head_word == "pred") {
      status = AStatus::Check;  // default status
      bump();
    } else if (head_word == "true" || head_word == "check" || head_word == "trust") {
      status = head_word == "true" ? AStatus::True
               : head_word == "check" ? AStatus::Check
                                      : AStatus::Trust;
      bump();
      if (!at_atom("pred")) fail("expected 'pred' after assertion status");
      bump();
    } else {
      throw ParseError(loc, "unknown assertion status '" + head_word + "'");
    }

    Assertion a;
    a.status = status;
    a.loc = loc;
    a.head = parse_term(699);
    if (a.head->is_var() || a.head->is_num()) fail("assertion head must be atom or compound");
    if (!is_entry) {
      if (at_punct(":")) {
        bump();
        a.calls = parse_conjunction();
      }
      if (at_punct("=>")) {
        bump();
        a.success = parse_conjunction();
      }
      if (at_punct("+")) {
        bump();
        a.comp = parse_conjunction();
      }
    } else {
      if (at_punct(":")) {
        bump();
        a.calls = parse_conjunction();
      }
    }
    expect_punct(".", "directive");
    a.num_vars = sc.count;
    prog.assertions.push_back(std::move(a));
    scope = nullptr;
  }

  void parse_clause(Program& prog, std::map<std::pair<std::string, int>, size_t>& index) {
    Location loc = cur.loc;
    VarScope sc;
    scope = &sc;
    Clause cl;
    cl.loc = loc;
    cl.head = parse_term(699);
    if (cl.head->is_var() || cl.head->is_num())
      throw ParseError(loc, "clause head must be an atom or compound term");
    if (at_punct(":-")) {
      bump();
      for (;;) {
        Location lloc = cur.loc;
        TermPtr g = parse_term(999);
        cl.body.push_back(make_literal(g, lloc));
        if (at_punct(",")) {
          bump();
          continue;
        }
        break;
      }
    }
    expect_punct(".", "clause");
    cl.num_vars = sc.count;
    scope = nullptr;

    auto key = std::make_pair(cl.head->name, cl.head->arity());
    auto it = index.find(key);
    if (it == index.end()) {
      index[key] = prog.preds.size();
      prog.preds.push_back({cl.head->name, cl.head->arity(), {}});
      it = index.find(key);
    }
    prog.preds[it->second].clauses.push_back(std::move(cl));
  }

  Literal make_literal(const TermPtr& g, Location loc) {
    if (g->is_atom() && g->name == "!") return Literal::mk_cut(loc);
    if (g->is_comp() &&
        (g->name == "true" || g->name == "check" || g->name == "trust") && g->arity() >= 1) {
      AStatus st = g->name == "true" ? AStatus::True
                   : g->name == "check" ? AStatus::Check
                                        : AStatus::Trust;
      return Literal::mk_pp(st, g->args, loc);
    }
    return Literal::mk_goal(g, loc);
  }
};

}  // namespace

Program parse_program(const std::string& source) {
  Parser p(source);
  return p.parse();
}

TermPtr parse_goal(const std::string& text, int* num_vars_out) {
  Parser p(text);
  VarScope sc;
  p.scope = &sc;
  TermPtr t = p.parse_term(999);
  if (p.cur.kind != Tok::End && !p.at_punct(".")) p.fail("trailing input after goal");
  if (num_vars_out) *num_vars_out = sc.count;
  return t;
}

}  // namespace mlp

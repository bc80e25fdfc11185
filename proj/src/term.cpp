#include "mlp/term.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace mlp {

TermPtr Term::mk_var(int id, std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Var;
  t->var = id;
  t->name = name.empty() ? ("_" + std::to_string(id)) : std::move(name);
  return t;
}

TermPtr Term::mk_atom(std::string name) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Atom;
  t->name = std::move(name);
  return t;
}

TermPtr Term::mk_num(long long v) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Num;
  t->num = v;
  return t;
}

TermPtr Term::mk_comp(std::string functor, std::vector<TermPtr> args) {
  if (args.empty()) return mk_atom(std::move(functor));
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Comp;
  t->name = std::move(functor);
  t->args = std::move(args);
  return t;
}

const TermPtr& Term::nil() {
  static TermPtr n = Term::mk_atom("[]");
  return n;
}

TermPtr Term::cons(TermPtr head, TermPtr tail) {
  return mk_comp(".", {std::move(head), std::move(tail)});
}

bool struct_eq(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::Var: return a->var == b->var;
    case TermKind::Atom: return a->name == b->name;
    case TermKind::Num: return a->num == b->num;
    case TermKind::Comp:
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!struct_eq(a->args[i], b->args[i])) return false;
      return true;
  }
  return false;
}

namespace {
bool alpha_eq_rec(const TermPtr& a, const TermPtr& b, std::map<int, int>& fwd,
                  std::map<int, int>& bwd) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case TermKind::Var: {
      auto f = fwd.find(a->var);
      auto g = bwd.find(b->var);
      if (f == fwd.end() && g == bwd.end()) {
        fwd[a->var] = b->var;
        bwd[b->var] = a->var;
        return true;
      }
      return f != fwd.end() && g != bwd.end() && f->second == b->var && g->second == a->var;
    }
    case TermKind::Atom: return a->name == b->name;
    case TermKind::Num: return a->num == b->num;
    case TermKind::Comp:
      if (a->name != b->name || a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!alpha_eq_rec(a->args[i], b->args[i], fwd, bwd)) return false;
      return true;
  }
  return false;
}
}  // namespace

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  std::map<int, int> fwd, bwd;
  return alpha_eq_rec(a, b, fwd, bwd);
}

void collect_vars(const TermPtr& t, std::vector<int>& out) {
  switch (t->kind) {
    case TermKind::Var:
      if (std::find(out.begin(), out.end(), t->var) == out.end()) out.push_back(t->var);
      break;
    case TermKind::Comp:
      for (auto& a : t->args) collect_vars(a, out);
      break;
    default: break;
  }
}

std::vector<int> term_vars(const TermPtr& t) {
  std::vector<int> out;
  collect_vars(t, out);
  return out;
}

bool term_has_var(const TermPtr& t, int var) {
  switch (t->kind) {
    case TermKind::Var: return t->var == var;
    case TermKind::Comp:
      for (auto& a : t->args)
        if (term_has_var(a, var)) return true;
      return false;
    default: return false;
  }
}

bool is_ground_term(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Var: return false;
    case TermKind::Comp:
      for (auto& a : t->args)
        if (!is_ground_term(a)) return false;
      return true;
    default: return true;
  }
}

namespace {
void count_var_occurrences(const TermPtr& t, std::map<int, int>& counts) {
  if (t->is_var())
    counts[t->var]++;
  else if (t->is_comp())
    for (auto& a : t->args) count_var_occurrences(a, counts);
}
}  // namespace

bool is_linear_term(const TermPtr& t) {
  std::map<int, int> counts;
  count_var_occurrences(t, counts);
  for (auto& [v, n] : counts)
    if (n > 1) return false;
  return true;
}

bool is_proper_list(const TermPtr& t) {
  const Term* cur = t.get();
  while (true) {
    if (cur->is_atom() && cur->name == "[]") return true;
    if (cur->is_comp() && cur->name == "." && cur->args.size() == 2)
      cur = cur->args[1].get();
    else
      return false;
  }
}

bool list_elements(const TermPtr& t, std::vector<TermPtr>& out) {
  TermPtr cur = t;
  while (true) {
    if (cur->is_atom() && cur->name == "[]") return true;
    if (cur->is_comp() && cur->name == "." && cur->args.size() == 2) {
      out.push_back(cur->args[0]);
      cur = cur->args[1];
    } else {
      return false;
    }
  }
}

TermPtr subst_vars(const TermPtr& t, const std::vector<TermPtr>& map) {
  switch (t->kind) {
    case TermKind::Var:
      if (t->var >= 0 && t->var < (int)map.size() && map[t->var]) return map[t->var];
      return t;
    case TermKind::Comp: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      bool changed = false;
      for (auto& a : t->args) {
        args.push_back(subst_vars(a, map));
        changed = changed || args.back().get() != a.get();
      }
      return changed ? Term::mk_comp(t->name, std::move(args)) : t;
    }
    default: return t;
  }
}

namespace {
TermPtr canon_rec(const TermPtr& t, std::map<int, int>& ren) {
  switch (t->kind) {
    case TermKind::Var: {
      auto it = ren.find(t->var);
      int id;
      if (it == ren.end()) {
        id = (int)ren.size();
        ren[t->var] = id;
      } else {
        id = it->second;
      }
      return Term::mk_var(id, "_" + std::to_string(id));
    }
    case TermKind::Comp: {
      std::vector<TermPtr> args;
      args.reserve(t->args.size());
      for (auto& a : t->args) args.push_back(canon_rec(a, ren));
      return Term::mk_comp(t->name, std::move(args));
    }
    default: return t;
  }
}
}  // namespace

TermPtr canonical_term(const TermPtr& t) {
  std::map<int, int> ren;
  return canon_rec(t, ren);
}

std::vector<TermPtr> canonical_terms(const std::vector<TermPtr>& ts) {
  std::map<int, int> ren;
  std::vector<TermPtr> out;
  out.reserve(ts.size());
  for (auto& t : ts) out.push_back(canon_rec(t, ren));
  return out;
}

namespace {

bool atom_needs_quotes(const std::string& s) {
  if (s.empty()) return true;
  if (s == "[]" || s == "!" || s == ".") return false;
  static const std::string sym = "+-*/\\^<>=~:.?@#&";
  bool all_sym = true;
  for (char c : s)
    if (sym.find(c) == std::string::npos) all_sym = false;
  if (all_sym) return false;
  if (!(s[0] >= 'a' && s[0] <= 'z')) return true;
  for (char c : s)
    if (!(isalnum((unsigned char)c) || c == '_')) return true;
  return false;
}

// prec, left-max, right-max; xfx = (p, p-1, p-1), yfx = (p, p, p-1)
struct OpInfo {
  int prec, lmax, rmax;
};

const OpInfo* infix_op(const std::string& f) {
  static const std::map<std::string, OpInfo> ops = {
      {"=", {700, 699, 699}},    {"is", {700, 699, 699}},  {"<", {700, 699, 699}},
      {">", {700, 699, 699}},    {"=<", {700, 699, 699}},  {">=", {700, 699, 699}},
      {"=:=", {700, 699, 699}},  {"=\\=", {700, 699, 699}}, {"==", {700, 699, 699}},
      {"\\==", {700, 699, 699}}, {"\\=", {700, 699, 699}}, {"+", {500, 500, 499}},
      {"-", {500, 500, 499}},    {"*", {400, 400, 399}},   {"//", {400, 400, 399}},
      {"mod", {400, 400, 399}},  {"**", {200, 199, 199}}};
  auto it = ops.find(f);
  return it == ops.end() ? nullptr : &it->second;
}

void term_str(const TermPtr& t, std::ostringstream& os, int maxprec) {
  switch (t->kind) {
    case TermKind::Var: os << t->name; return;
    case TermKind::Num: os << t->num; return;
    case TermKind::Atom:
      if (atom_needs_quotes(t->name))
        os << '\'' << t->name << '\'';
      else
        os << t->name;
      return;
    case TermKind::Comp: {
      if (t->name == "." && t->args.size() == 2) {
        os << '[';
        term_str(t->args[0], os, 999);
        TermPtr cur = t->args[1];
        while (cur->is_comp() && cur->name == "." && cur->args.size() == 2) {
          os << ',';
          term_str(cur->args[0], os, 999);
          cur = cur->args[1];
        }
        if (!(cur->is_atom() && cur->name == "[]")) {
          os << '|';
          term_str(cur, os, 999);
        }
        os << ']';
        return;
      }
      if (t->args.size() == 2) {
        if (const OpInfo* op = infix_op(t->name)) {
          bool parens = op->prec > maxprec;
          if (parens) os << '(';
          term_str(t->args[0], os, op->lmax);
          if (t->name == "is" || t->name == "mod")
            os << ' ' << t->name << ' ';
          else
            os << t->name;
          term_str(t->args[1], os, op->rmax);
          if (parens) os << ')';
          return;
        }
      }
      if (t->args.size() == 1 && (t->name == "+" || t->name == "-")) {
        bool parens = 200 > maxprec;
        if (parens) os << '(';
        os << t->name;
        term_str(t->args[0], os, 200);
        if (parens) os << ')';
        return;
      }
      if (atom_needs_quotes(t->name))
        os << '\'' << t->name << '\'';
      else
        os << t->name;
      os << '(';
      for (size_t i = 0; i < t->args.size(); ++i) {
        if (i) os << ',';
        term_str(t->args[i], os, 999);
      }
      os << ')';
      return;
    }
  }
}

}  // namespace

std::string term_to_string(const TermPtr& t) {
  std::ostringstream os;
  term_str(t, os, 999);
  return os.str();
}

std::string terms_to_string(const std::vector<TermPtr>& ts, const char* sep) {
  std::ostringstream os;
  for (size_t i = 0; i < ts.size(); ++i) {
    if (i) os << sep;
    term_str(ts[i], os, 999);
  }
  return os.str();
}

}  // namespace mlp

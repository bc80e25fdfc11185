#include "mlp/printer.hpp"

#include <sstream>

namespace mlp {

namespace {

std::string conj_str(const std::vector<TermPtr>& conj) {
  if (conj.size() == 1) return term_to_string(conj[0]);
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < conj.size(); ++i) {
    if (i) os << ", ";
    os << term_to_string(conj[i]);
  }
  os << ')';
  return os.str();
}

std::string modedef_str(const ModeDef& md) {
  std::ostringstream os;
  os << ":- modedef " << md.name << "(A";
  if (md.nparams == 2) os << ",P";
  os << ")";
  auto tmpl = [](const TermPtr& t) {
    if (t->is_comp() && t->name == "$apply") {
      std::ostringstream o;
      o << term_to_string(t->args[0]) << '(';
      for (size_t i = 1; i < t->args.size(); ++i) {
        if (i > 1) o << ',';
        o << term_to_string(t->args[i]);
      }
      o << ')';
      return o.str();
    }
    return term_to_string(t);
  };
  if (!md.calls.empty()) {
    os << " : ";
    if (md.calls.size() > 1) os << '(';
    for (size_t i = 0; i < md.calls.size(); ++i) {
      if (i) os << ", ";
      os << tmpl(md.calls[i]);
    }
    if (md.calls.size() > 1) os << ')';
  }
  if (!md.success.empty()) {
    os << " => ";
    if (md.success.size() > 1) os << '(';
    for (size_t i = 0; i < md.success.size(); ++i) {
      if (i) os << ", ";
      os << tmpl(md.success[i]);
    }
    if (md.success.size() > 1) os << ')';
  }
  os << ".";
  return os.str();
}

}  // namespace

std::string print_assertion(const Assertion& a) {
  std::ostringstream os;
  os << ":- ";
  if (a.status == AStatus::Entry) {
    os << "entry " << term_to_string(a.head);
    if (!a.calls.empty()) os << " : " << conj_str(a.calls);
  } else {
    os << status_name(a.status) << " pred " << term_to_string(a.head);
    if (!a.calls.empty()) os << " : " << conj_str(a.calls);
    if (!a.success.empty()) os << " => " << conj_str(a.success);
    if (!a.comp.empty()) os << " + " << conj_str(a.comp);
  }
  os << ".";
  return os.str();
}

std::string print_clause(const Clause& c) {
  std::ostringstream os;
  os << term_to_string(c.head);
  if (!c.body.empty()) {
    os << " :-";
    for (size_t i = 0; i < c.body.size(); ++i) {
      os << "\n    ";
      const Literal& lit = c.body[i];
      switch (lit.kind) {
        case Literal::Kind::Goal: os << term_to_string(lit.goal); break;
        case Literal::Kind::Cut: os << "!"; break;
        case Literal::Kind::PP: {
          os << status_name(lit.pp_status) << '(';
          for (size_t j = 0; j < lit.pp_conj.size(); ++j) {
            if (j) os << ", ";
            os << term_to_string(lit.pp_conj[j]);
          }
          os << ')';
          break;
        }
      }
      if (i + 1 < c.body.size()) os << ",";
    }
  }
  os << ".";
  return os.str();
}

std::string print_program(const Program& prog) {
  std::ostringstream os;
  bool first = true;
  auto sep = [&]() {
    if (!first) os << "\n";
    first = false;
  };
  for (auto& md : prog.modedefs) {
    sep();
    os << modedef_str(md) << "\n";
  }
  for (auto& a : prog.assertions) {
    sep();
    os << print_assertion(a) << "\n";
  }
  for (auto& p : prog.preds) {
    sep();
    for (auto& c : p.clauses) os << print_clause(c) << "\n";
  }
  return os.str();
}

}  // namespace mlp

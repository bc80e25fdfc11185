#include "mlp/progen.hpp"

#include <sstream>
#include <vector>

namespace mlp {

namespace {

struct Gen {
  Rng rng;
  std::ostringstream out;
  explicit Gen(uint64_t seed) : rng(seed) {}

  std::string var(int i) { return std::string(1, (char)('A' + i)); }

  std::string small_term(int vars, int depth) {
    switch (rng.below(depth >= 2 ? 4 : 6)) {
      case 0: return var((int)rng.below(vars));
      case 1: return std::to_string((long long)rng.range(-2, 3));
      case 2: return rng.chance(0.5) ? "a" : "b";
      case 3: return "[]";
      case 4: return "f(" + small_term(vars, depth + 1) + ")";
      default:
        return "[" + small_term(vars, depth + 1) + "|" + small_term(vars, depth + 1) + "]";
    }
  }

  std::string head_pattern(int vars, int arity, const std::string& name) {
    std::string s = name + "(";
    for (int i = 0; i < arity; ++i) {
      if (i) s += ",";
      switch (rng.below(5)) {
        case 0: s += "[]"; break;
        case 1: s += "[" + var((int)rng.below(vars)) + "|" + var((int)rng.below(vars)) + "]"; break;
        case 2: s += std::to_string((long long)rng.range(0, 2)); break;
        default: s += var((int)rng.below(vars)); break;
      }
    }
    return s + ")";
  }

  std::string body_literal(int vars, const std::vector<std::pair<std::string, int>>& callees) {
    switch (rng.below(callees.empty() ? 5 : 7)) {
      case 0: return var((int)rng.below(vars)) + "=" + small_term(vars, 0);
      case 1: return var((int)rng.below(vars)) + " is " + std::to_string(rng.range(0, 3)) + "+" +
                     std::to_string(rng.range(0, 3));
      case 2: {
        const char* ops[] = {"<", ">=", "=<"};
        return std::to_string(rng.range(-2, 2)) + ops[rng.below(3)] + var((int)rng.below(vars));
      }
      case 3: return "nonvar(" + var((int)rng.below(vars)) + ")";
      case 4: return var((int)rng.below(vars)) + "=" + var((int)rng.below(vars));
      default: {
        auto& [name, arity] = callees[rng.below(callees.size())];
        std::string s = name + "(";
        for (int i = 0; i < arity; ++i) {
          if (i) s += ",";
          s += rng.chance(0.7) ? var((int)rng.below(vars)) : small_term(vars, 1);
        }
        return s + ")";
      }
    }
  }

  std::string generate() {
    int npreds = 1 + (int)rng.below(3);
    std::vector<std::pair<std::string, int>> preds;
    for (int i = 0; i < npreds; ++i)
      preds.push_back({"p" + std::to_string(i + 1), 1 + (int)rng.below(3)});

    // entry for p1
    out << ":- entry " << preds[0].first << "(";
    for (int i = 0; i < preds[0].second; ++i) {
      if (i) out << ",";
      const char* modes[] = {"+num", "+list(num)", "+list", "-", "_", "+atom"};
      out << modes[rng.below(6)];
    }
    out << ").\n\n";

    bool used_walker = false;
    for (int i = 0; i < npreds; ++i) {
      auto [name, arity] = preds[i];
      std::vector<std::pair<std::string, int>> callees(preds.begin() + i + 1, preds.end());
      // occasionally a structurally terminating list walker
      if (!used_walker && arity >= 1 && rng.chance(0.3)) {
        used_walker = true;
        std::string extra;
        for (int k = 1; k < arity; ++k) extra += std::string(",") + var(k + 1);
        out << name << "([]" << extra << ").\n";
        out << name << "([" << var(0) << "|" << var(1) << "]" << extra << ") :-\n";
        int vars = 2 + arity;
        int nlits = (int)rng.below(2);
        for (int l = 0; l < nlits; ++l) out << "    " << body_literal(vars, {}) << ",\n";
        out << "    " << name << "(" << var(1) << extra << ").\n";
        continue;
      }
      int nclauses = 1 + (int)rng.below(3);
      for (int c = 0; c < nclauses; ++c) {
        int vars = 3 + (int)rng.below(2);
        out << head_pattern(vars, arity, name);
        int nlits = (int)rng.below(4);
        if (nlits == 0) {
          out << ".\n";
          continue;
        }
        out << " :-\n";
        for (int l = 0; l < nlits; ++l) {
          out << "    " << body_literal(vars, callees);
          out << (l + 1 < nlits ? ",\n" : ".\n");
        }
      }
      out << "\n";
    }
    return out.str();
  }
};

}  // namespace

std::string random_program(uint64_t seed) { return Gen(seed).generate(); }

}  // namespace mlp

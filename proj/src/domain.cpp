#include "mlp/domain.hpp"

namespace mlp {

const Domain* modes_domain();
const Domain* sharing_domain();
const Domain* shfr_domain();
const Domain* share_clique_domain();
const Domain* depthk_domain();
const Domain* concrete_domain();

namespace {

// join caller with n fresh vars, unify fresh position vars against terms,
// then project. Domains with freeness-sensitive precision override the
// callers of this instead.
AsubPtr via_unify(const Domain& d, const Asub& left, int left_n,
                  const std::vector<TermPtr>& left_terms, const Asub& right, int right_n,
                  const std::vector<TermPtr>& right_terms, bool keep_left) {
  AsubPtr joined = d.join_disjoint(left, right);
  // right var j appears as left_n + j
  std::vector<TermPtr> shift(right_n);
  for (int j = 0; j < right_n; ++j) shift[j] = Term::mk_var(left_n + j);
  AsubPtr cur = joined;
  for (size_t i = 0; i < left_terms.size(); ++i) {
    TermPtr rt = subst_vars(right_terms[i], shift);
    cur = d.abstract_unify(left_terms[i], rt, *cur);
    if (d.is_bottom(*cur)) break;
  }
  std::vector<int> keep;
  if (keep_left)
    for (int v = 0; v < left_n; ++v) keep.push_back(v);
  else
    for (int v = 0; v < right_n; ++v) keep.push_back(left_n + v);
  return d.project(*cur, keep);
}

std::vector<TermPtr> position_vars(int n) {
  std::vector<TermPtr> out;
  for (int i = 0; i < n; ++i) out.push_back(Term::mk_var(i, "P" + std::to_string(i + 1)));
  return out;
}

}  // namespace

AsubPtr Domain::restrict_call(const std::vector<TermPtr>& args, const Asub& caller) const {
  int n = (int)args.size();
  int k = num_vars(caller);
  AsubPtr fresh_pos = fresh(n);
  // unify arg_i (caller space) against position var i (shifted)
  return via_unify(*this, caller, k, args, *fresh_pos, n, position_vars(n), false);
}

AsubPtr Domain::entry_from_call(const Asub& call_pat, const std::vector<TermPtr>& head_args,
                                int callee_nvars) const {
  int n = num_vars(call_pat);
  AsubPtr callee = fresh(callee_nvars);
  return via_unify(*this, call_pat, n, position_vars(n), *callee, callee_nvars, head_args,
                   false);
}

AsubPtr Domain::exit_to_head(const Asub& exit, const std::vector<TermPtr>& head_args) const {
  int n = (int)head_args.size();
  int k = num_vars(exit);
  AsubPtr fresh_pos = fresh(n);
  return via_unify(*this, exit, k, head_args, *fresh_pos, n, position_vars(n), false);
}

AsubPtr Domain::apply_success(const std::vector<TermPtr>& args, const Asub& caller,
                              const Asub& succ_pat) const {
  int k = num_vars(caller);
  int n = (int)args.size();
  return via_unify(*this, caller, k, args, succ_pat, n, position_vars(n), true);
}

const Domain* get_domain(const std::string& name) {
  if (name == "modes") return modes_domain();
  if (name == "sharing") return sharing_domain();
  if (name == "shfr") return shfr_domain();
  if (name == "share_clique") return share_clique_domain();
  if (name == "depthk") return depthk_domain();
  if (name == "concrete") return concrete_domain();
  return nullptr;
}

std::vector<std::string> domain_names() {
  return {"modes", "sharing", "shfr", "share_clique", "depthk", "concrete"};
}

}  // namespace mlp

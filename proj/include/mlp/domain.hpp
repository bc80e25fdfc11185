#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlp/ast.hpp"

namespace mlp {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Abstract substitution over clause variables 0..n-1. Concrete subtype per
/// domain; values are immutable once built.
struct Asub {
  virtual ~Asub() = default;
  virtual std::string to_string() const = 0;
};
using AsubPtr = std::shared_ptr<const Asub>;

enum class Entail { Yes, No, Maybe };

/// Lattice operations, abstract unification, builtin transfer, PLAI
/// projections, and the property translation for one abstract domain.
class Domain {
 public:
  virtual ~Domain() = default;
  virtual std::string name() const = 0;

  virtual AsubPtr bottom(int nvars) const = 0;
  virtual AsubPtr top(int nvars) const = 0;
  /// All vars fresh, free and unaliased (rename-apart state of locals).
  virtual AsubPtr fresh(int nvars) const = 0;
  virtual int num_vars(const Asub& a) const = 0;
  virtual bool is_bottom(const Asub& a) const = 0;

  virtual bool leq(const Asub& a, const Asub& b) const = 0;
  virtual AsubPtr lub(const Asub& a, const Asub& b) const = 0;
  virtual AsubPtr glb(const Asub& a, const Asub& b) const = 0;
  bool equal(const Asub& a, const Asub& b) const { return leq(a, b) && leq(b, a); }

  virtual AsubPtr abstract_unify(const TermPtr& t1, const TermPtr& t2, const Asub& a) const = 0;
  virtual AsubPtr transfer_builtin(const std::string& name, const std::vector<TermPtr>& args,
                                   const Asub& a) const = 0;

  /// Projection onto keep[i] -> i (result over keep.size() vars).
  virtual AsubPtr project(const Asub& a, const std::vector<int>& keep) const = 0;
  /// Disjoint union: b's var j becomes num_vars(a)+j.
  virtual AsubPtr join_disjoint(const Asub& a, const Asub& b) const = 0;

  // PLAI call plumbing. Defaults go through join_disjoint + abstract_unify +
  // project; domains override where that route loses precision.
  virtual AsubPtr restrict_call(const std::vector<TermPtr>& args, const Asub& caller) const;
  virtual AsubPtr entry_from_call(const Asub& call_pat, const std::vector<TermPtr>& head_args,
                                  int callee_nvars) const;
  virtual AsubPtr exit_to_head(const Asub& exit, const std::vector<TermPtr>& head_args) const;
  virtual AsubPtr apply_success(const std::vector<TermPtr>& args, const Asub& caller,
                                const Asub& succ_pat) const;

  virtual std::vector<TermPtr> to_properties(const Asub& a,
                                             const std::vector<TermPtr>& var_terms) const = 0;
  /// Exact membership test of a concrete binding (resolved term per var) in
  /// the concretization. Independent of to_properties and eval_check.
  virtual bool gamma_member(const std::vector<TermPtr>& binding, const Asub& a) const = 0;
  /// Abstraction of a property conjunction (entry and trust assertions).
  virtual AsubPtr abstract_props(const std::vector<TermPtr>& props, int nvars) const = 0;
  virtual Entail entails(const TermPtr& prop, const Asub& a) const = 0;

  /// Widening hook; the default is plain lub (all bundled domains are finite
  /// per clause-variable set).
  virtual AsubPtr widen(const Asub& prev, const Asub& next) const { return lub(prev, next); }
};

/// "modes", "sharing", "shfr", "share_clique", "depthk", "concrete".
const Domain* get_domain(const std::string& name);
std::vector<std::string> domain_names();

/// The binding tuples of a concrete-domain element (canonical form); throws
/// DomainError for any other domain's element.
std::vector<std::vector<TermPtr>> concrete_asub_tuples(const Asub& a);

}  // namespace mlp

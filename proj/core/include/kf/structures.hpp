#pragma once
// Curved type-D structures, DA action tables, DD bimodules, path-described
// A-infinity modules, their validators, and box tensor products.
//
// Generators are indexed by position; ids are kept for reporting.  Gradings
// are not stored: validators recover relative (Delta, Alexander) gradings by
// integrating the arrow-label grading laws over the arrow graph and fail on
// inconsistency.

#include "kf/algebra.hpp"
#include "kf/dual_algebra.hpp"
#include "kf/rational.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace kf {

struct Report {
  bool pass = true;
  std::vector<std::string> failures;
  void fail(const std::string& msg) {
    pass = false;
    failures.push_back(msg);
  }
  std::string summary() const;
};

// ---------------------------------------------------------------- type D --

struct TypeD {
  int m = 0, k = 0;
  Matching matching; // curvature matching (may be empty for curvature-free use)
  std::vector<std::string> gen_ids;
  std::vector<Idem> idems;
  std::map<std::pair<int, int>, Elem> arrows; // (src,dst) -> nonzero label

  int add_gen(const std::string& id, Idem idem);
  void add_arrow(int src, int dst, const Elem& label); // xor-accumulates
  const Elem* arrow(int src, int dst) const;
  int gen_index(const std::string& id) const; // -1 if absent
  bool reduced() const; // no arrow term with zero weight (idempotent label)
};

// structure relation: for each x,  sum over x->y->z of label1*label2
// plus I_x * mu0  must vanish; also checks arrow well-formedness and
// relative-grading consistency
Report validate_type_d(const TypeD& D);

// relative gradings by integration (gen 0 anchored at 0); nullopt on
// inconsistency or if the arrow graph is disconnected across components
// (each component is anchored at its smallest generator)
std::optional<std::vector<Rat>> relative_delta(const TypeD& D);
std::optional<std::vector<std::vector<Rat>>> relative_alex(const TypeD& D);

// ----------------------------------------------------------------- DD -----

using DDTermPair = std::pair<Term, DualMono>;
using DDLabel = std::set<DDTermPair>; // F2 set of (B-term, dual-term) pairs

struct DD {
  int mB = 0, kB = 0;
  Matching matchB;  // curvature matching on the B side
  int nDual = 0;    // dual algebra on 2*nDual strands, idempotent size nDual+1
  Matching matchDual;
  std::vector<std::string> gen_ids;
  std::vector<Idem> idemB, idemDual;
  std::map<std::pair<int, int>, DDLabel> arrows;

  int add_gen(const std::string& id, Idem ib, Idem idual);
  void add_arrow(int src, int dst, const Elem& b, const DualElem& d);
  void add_arrow_terms(int src, int dst, const DDLabel& terms);
  int gen_index(const std::string& id) const;
};

// curved DD relation: compositions + d(dual factor) + I_x mu0^{matchB} (x) 1
Report validate_dd(const DD& K);

bool dd_equal(const DD& a, const DD& b); // equality as labeled graphs (by id)

// ----------------------------------------------------------------- DA -----

// A pure-term pattern with non-negative integer parameters: doubled weight
// is base.dw + sum_p a_p * coefs[p].
struct Pattern {
  Term base;
  std::vector<std::vector<int>> coefs;
  Pattern() = default;
  Pattern(const Term& t) : base(t) {}
  int params() const { return (int)coefs.size(); }
  bool concrete() const;
  Term instantiate(const std::vector<int>& vals) const;
  auto operator<=>(const Pattern&) const = default;
};

struct DAAction {
  int src = 0;
  std::vector<Pattern> inputs; // possibly empty (delta^1_1)
  Pattern output;
  int dst = 0;
  int params = 0; // number of shared parameters
  auto operator<=>(const DAAction&) const = default;
};

struct DATable {
  int mOut = 0, kOut = 0;
  Matching matchOut;
  int mIn = 0, kIn = 0;
  Matching matchIn;
  std::vector<std::string> gen_ids;
  std::vector<Idem> out_idems, in_idems;
  std::vector<DAAction> actions;

  int add_gen(const std::string& id, Idem out, Idem in);
  int gen_index(const std::string& id) const;
};

// match a pattern against a concrete term, extending the partial parameter
// binding; returns false if impossible
bool pattern_match(const Pattern& p, const Term& t,
                   std::vector<std::optional<int>>& binding);

// instantiate every action for all parameter values such that each input's
// total weight stays <= 2*wcutoff (doubled); returns concrete actions
std::vector<DAAction> instantiate_actions(const DATable& T, int wcutoff);

// curved DA structure relations checked on all input sequences of total
// doubled weight <= 2*wcutoff (contribution-driven)
Report validate_da(const DATable& T, int wcutoff);

// the nonzero relation buckets behind validate_da, keyed by (source
// generator, input sequence); value terms are (output, target generator)
using DAResidues =
    std::map<std::pair<int, std::vector<Term>>, std::set<std::pair<Term, int>>>;
DAResidues da_residues(const DATable& T, int wcutoff);

// all factorizations of a pure term into two non-idempotent pure factors
std::vector<std::pair<Term, Term>> term_factorizations(const Term& u, int m,
                                                       int k);

// ------------------------------------------------------------- box -------

struct BoxOptions {
  int delta_drop_cap = 40;  // guard for path-module pairing
  int param_cap = 64;       // guard for parameter instantiation
  bool reverse_dual_order = false; // bring-up flag for the DD letter order
};

struct GuardExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

TypeD box_da_d(const DATable& T, const TypeD& D, const BoxOptions& opt = {});
DD box_da_dd(const DATable& T, const DD& K, const BoxOptions& opt = {});

// ------------------------------------------------------- path modules ----

// Graph-described A-infinity module over the algebra B(m,k) (or its
// C-restriction), with scalars in F2[U,V]/(UV) or F2[U].  Module actions are
// the directed paths between module generators whose interior nodes are all
// auxiliary; each edge consumes one algebra input and multiplies the output
// monomial.
struct UVMono {
  std::vector<int> u_coefs; // exponent of U = u_base + sum a_p * u_coefs[p]
  std::vector<int> v_coefs;
  int u_base = 0, v_base = 0;
};

struct PathModule {
  enum class Base { UV, U, F2 };
  Base base = Base::UV;
  int m = 0, k = 0;
  struct Node {
    std::string id;
    Idem idem;
    bool module_gen = false;
  };
  struct Edge {
    int src = 0, dst = 0;
    Pattern input;  // one algebra input per edge
    UVMono output;  // shares the edge's parameters
    int params = 0;
  };
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  int add_node(const std::string& id, Idem idem, bool module_gen);
};

// Bigraded complex of free modules over F2[U,V]/(UV), F2[U] or F2; entries
// are F2 sums of monomials U^aV^b.
struct FreeComplex {
  enum class Base { UV, U, F2 };
  Base base = Base::UV;
  std::vector<std::string> gen_ids;
  // differential entry from src to dst: set of (u,v) exponent pairs
  std::map<std::pair<int, int>, std::set<std::pair<int, int>>> diff;
  void add_entry(int src, int dst, int u, int v);
};

FreeComplex pair_path_module(const PathModule& P, const TypeD& D,
                             const BoxOptions& opt = {});

} // namespace kf

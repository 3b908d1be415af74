#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rcplan/formula.hpp"

namespace rcplan {

class CompileError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Deterministic complete automaton over the alphabet 2^AP.  States carry the
// canonical residual formula they were built from (kept for debugging and
// DOT output).  Accepting states are absorbing, so a word is accepted as
// soon as its run touches an accepting state.
struct Fsa {
    std::vector<std::string> ap_names;
    int num_states = 0;
    int initial = 0;
    std::vector<bool> accepting;
    std::vector<std::vector<int>> delta;  // delta[q][sigma]
    std::vector<std::string> state_labels;

    std::uint32_t num_symbols() const { return 1u << ap_names.size(); }
    int step(int q, std::uint32_t sigma) const { return delta[q][sigma]; }

    // Set of successor states of q.
    std::vector<int> post(int q) const;

    // True iff the run over word touches an accepting state (the initial
    // state counts when it is itself accepting).
    bool accepts(const std::vector<std::uint32_t>& word) const;
};

// Residual-expansion translation: a state is a canonical residual formula,
// the successor under sigma is its one-step derivative.  The True residual
// is the unique accepting (absorbing) state, the False residual the
// rejecting sink; either is materialized only when reachable.
Fsa compile(const FormulaPtr& formula, const ApSet& aps, int state_cap = 4096);

// All symbols sigma with delta(q, sigma) == q2; empty when q2 is not a
// successor of q.
std::vector<std::uint32_t> en_set(const Fsa& fsa, int q, int q2);

void write_dot(const Fsa& fsa, std::ostream& os);
void write_json(const Fsa& fsa, std::ostream& os);

}  // namespace rcplan

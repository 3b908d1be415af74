#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcplan {

// Mission formulas: negation is restricted to atoms, so satisfaction of a
// formula is always witnessed by a finite good prefix.  The tree is kept in
// a canonical form (sorted commutative operands, constants folded) so that
// structurally different but trivially equivalent formulas share one
// representation string.
enum class FormulaKind {
    True,
    False,   // internal only, produced by folding; not parseable surface syntax
    Exists,  // internal only: "at least one position exists"; residual of X true
    Atom,
    NegAtom,
    And,
    Or,
    Next,
    Until,
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    FormulaKind kind;
    std::string atom;                // Atom / NegAtom
    std::vector<FormulaPtr> kids;    // And/Or: n-ary sorted; Next: 1; Until: 2
    std::string repr;                // canonical printable form, used as identity

    bool is(FormulaKind k) const { return kind == k; }
};

// Canonicalizing constructors.
FormulaPtr make_true();
FormulaPtr make_false();
FormulaPtr make_exists();
FormulaPtr make_atom(const std::string& name);
FormulaPtr make_neg_atom(const std::string& name);
FormulaPtr make_and(std::vector<FormulaPtr> kids);
FormulaPtr make_or(std::vector<FormulaPtr> kids);
FormulaPtr make_next(FormulaPtr sub);
FormulaPtr make_until(FormulaPtr lhs, FormulaPtr rhs);

class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"),
          position(pos) {}
    std::size_t position;
};

// Ordered set of atomic propositions; the ordering fixes the bit layout of
// alphabet symbols (bit i <-> aps[i]).
class ApSet {
  public:
    explicit ApSet(std::vector<std::string> names);

    int size() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(int i) const { return names_.at(i); }
    int index(const std::string& name) const;   // -1 when absent
    std::uint32_t num_symbols() const { return 1u << names_.size(); }

    std::string symbol_to_string(std::uint32_t sigma) const;

  private:
    std::vector<std::string> names_;
};

// Surface syntax: true, identifiers, ! (atoms only), &, |, X, U, F, parens.
// Precedence, tightest first: {!, X, F} > U (right assoc) > & > |.
FormulaPtr parse_formula(const std::string& text, const ApSet& aps);

// One-step residual of f after reading symbol sigma (bitmask over aps).
FormulaPtr derivative(const FormulaPtr& f, std::uint32_t sigma, const ApSet& aps);

// Direct finite-trace evaluation under strong semantics: an atom needs its
// position to exist, Next needs the following position, Until needs a
// witness inside the word.  Returns whether f holds at position 0 of word.
// Kept free of any automaton code so it can serve as a conformance oracle.
bool good_prefix_oracle(const FormulaPtr& f, const std::vector<std::uint32_t>& word,
                        const ApSet& aps);

}  // namespace rcplan

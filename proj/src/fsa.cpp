#include "rcplan/fsa.hpp"

#include <algorithm>
#include <deque>
#include <iterator>
#include <ostream>
#include <unordered_map>

#include <json.hpp>

namespace rcplan {

std::vector<int> Fsa::post(int q) const {
    std::vector<int> out;
    for (std::uint32_t sigma = 0; sigma < num_symbols(); ++sigma) {
        int q2 = delta[q][sigma];
        if (std::find(out.begin(), out.end(), q2) == out.end()) out.push_back(q2);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool Fsa::accepts(const std::vector<std::uint32_t>& word) const {
    int q = initial;
    if (accepting[q]) return true;
    for (std::uint32_t sigma : word) {
        q = delta[q][sigma];
        if (accepting[q]) return true;
    }
    return false;
}

namespace {

// Residuals are monotone boolean combinations of opaque literals (atoms,
// negated atoms, X-, U- and Exists-subterms).  Alternating And/Or layers can
// otherwise deepen with every derivative step, so each residual is put into
// its minimal monotone disjunctive normal form before interning: the literal
// closure is finite, so this bounds both state count and label size, and the
// rewrite (distribution + absorption + deduplication) is sound position-wise
// under the finite-trace semantics.
using Term = std::vector<FormulaPtr>;  // literals sorted by repr, unique

bool repr_less(const FormulaPtr& a, const FormulaPtr& b) { return a->repr < b->repr; }

std::vector<Term> dnf_terms(const FormulaPtr& f, int term_cap) {
    switch (f->kind) {
        case FormulaKind::True:
            return {Term{}};
        case FormulaKind::False:
            return {};
        case FormulaKind::Or: {
            std::vector<Term> out;
            for (const auto& k : f->kids) {
                auto sub = dnf_terms(k, term_cap);
                out.insert(out.end(), sub.begin(), sub.end());
                if (static_cast<int>(out.size()) > term_cap)
                    throw CompileError("residual normal form exceeds term cap");
            }
            return out;
        }
        case FormulaKind::And: {
            std::vector<Term> acc{Term{}};
            for (const auto& k : f->kids) {
                auto sub = dnf_terms(k, term_cap);
                std::vector<Term> next;
                for (const auto& a : acc) {
                    for (const auto& b : sub) {
                        Term t;
                        std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                                       std::back_inserter(t), repr_less);
                        next.push_back(std::move(t));
                    }
                }
                if (static_cast<int>(next.size()) > term_cap)
                    throw CompileError("residual normal form exceeds term cap");
                acc = std::move(next);
            }
            return acc;
        }
        default:
            return {Term{f}};
    }
}

FormulaPtr normalize_residual(const FormulaPtr& f) {
    if (!f->is(FormulaKind::And) && !f->is(FormulaKind::Or)) return f;
    auto terms = dnf_terms(f, 4096);
    // Keep the minimal antichain: drop every term that contains a kept term
    // (absorption); equal terms collapse to one.  Smallest terms first so a
    // single pass suffices.
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
        return a.size() < b.size();
    });
    std::vector<Term> kept;
    for (auto& t : terms) {
        bool redundant = std::any_of(kept.begin(), kept.end(), [&](const Term& k) {
            return std::includes(t.begin(), t.end(), k.begin(), k.end(), repr_less);
        });
        if (!redundant) kept.push_back(std::move(t));
    }
    std::vector<FormulaPtr> disjuncts;
    disjuncts.reserve(kept.size());
    for (auto& t : kept) disjuncts.push_back(make_and(std::move(t)));
    return make_or(std::move(disjuncts));
}

}  // namespace

Fsa compile(const FormulaPtr& formula, const ApSet& aps, int state_cap) {
    Fsa fsa;
    fsa.ap_names = aps.names();
    const std::uint32_t nsym = fsa.num_symbols();

    std::unordered_map<std::string, int> ids;
    std::vector<FormulaPtr> residuals;
    std::deque<int> queue;

    auto intern = [&](const FormulaPtr& f) {
        auto it = ids.find(f->repr);
        if (it != ids.end()) return it->second;
        int id = static_cast<int>(residuals.size());
        if (id >= state_cap)
            throw CompileError("automaton state count exceeds cap of " +
                               std::to_string(state_cap));
        ids.emplace(f->repr, id);
        residuals.push_back(f);
        queue.push_back(id);
        return id;
    };

    intern(normalize_residual(formula));
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop_front();
        FormulaPtr f = residuals[q];
        std::vector<int> row(nsym);
        for (std::uint32_t sigma = 0; sigma < nsym; ++sigma)
            row[sigma] = intern(normalize_residual(derivative(f, sigma, aps)));
        // states are dequeued in interning order, so q == delta.size()
        fsa.delta.push_back(std::move(row));
    }

    fsa.num_states = static_cast<int>(residuals.size());
    fsa.initial = 0;
    fsa.accepting.resize(fsa.num_states, false);
    fsa.state_labels.resize(fsa.num_states);
    for (int q = 0; q < fsa.num_states; ++q) {
        fsa.state_labels[q] = residuals[q]->repr;
        fsa.accepting[q] = residuals[q]->is(FormulaKind::True);
    }
    return fsa;
}

std::vector<std::uint32_t> en_set(const Fsa& fsa, int q, int q2) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t sigma = 0; sigma < fsa.num_symbols(); ++sigma)
        if (fsa.delta[q][sigma] == q2) out.push_back(sigma);
    return out;
}

void write_dot(const Fsa& fsa, std::ostream& os) {
    ApSet aps(fsa.ap_names);
    os << "digraph fsa {\n  rankdir=LR;\n  init [shape=point];\n";
    for (int q = 0; q < fsa.num_states; ++q) {
        os << "  q" << q << " [shape=" << (fsa.accepting[q] ? "doublecircle" : "circle")
           << ", label=\"q" << q << "\"];\n";
    }
    os << "  init -> q" << fsa.initial << ";\n";
    for (int q = 0; q < fsa.num_states; ++q) {
        for (int q2 : fsa.post(q)) {
            std::string label;
            for (std::uint32_t sigma : en_set(fsa, q, q2)) {
                if (!label.empty()) label += " ";
                label += aps.symbol_to_string(sigma);
            }
            os << "  q" << q << " -> q" << q2 << " [label=\"" << label << "\"];\n";
        }
    }
    os << "}\n";
}

void write_json(const Fsa& fsa, std::ostream& os) {
    nlohmann::json j;
    j["atomic_props"] = fsa.ap_names;
    j["num_states"] = fsa.num_states;
    j["initial"] = fsa.initial;
    std::vector<int> acc;
    for (int q = 0; q < fsa.num_states; ++q)
        if (fsa.accepting[q]) acc.push_back(q);
    j["accepting"] = acc;
    nlohmann::json trans = nlohmann::json::array();
    for (int q = 0; q < fsa.num_states; ++q)
        for (std::uint32_t sigma = 0; sigma < fsa.num_symbols(); ++sigma)
            trans.push_back({{"from", q}, {"symbol", sigma}, {"to", fsa.delta[q][sigma]}});
    j["transitions"] = std::move(trans);
    os << j.dump(2) << "\n";
}

}  // namespace rcplan

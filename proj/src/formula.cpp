#include "rcplan/formula.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

namespace rcplan {

namespace {

FormulaPtr node(FormulaKind kind, std::string atom, std::vector<FormulaPtr> kids,
                std::string repr) {
    auto f = std::make_shared<Formula>();
    f->kind = kind;
    f->atom = std::move(atom);
    f->kids = std::move(kids);
    f->repr = std::move(repr);
    return f;
}

const FormulaPtr& true_node() {
    static FormulaPtr t = node(FormulaKind::True, "", {}, "true");
    return t;
}

const FormulaPtr& false_node() {
    static FormulaPtr f = node(FormulaKind::False, "", {}, "false");
    return f;
}

const FormulaPtr& exists_node() {
    static FormulaPtr e = node(FormulaKind::Exists, "", {}, "@");
    return e;
}

std::string join_reprs(const char* op, const std::vector<FormulaPtr>& kids) {
    std::string out = "(";
    for (std::size_t i = 0; i < kids.size(); ++i) {
        if (i) out += op;
        out += kids[i]->repr;
    }
    out += ")";
    return out;
}

// Flatten same-kind children, sort by repr, drop duplicates.
void normalize_operands(FormulaKind kind, std::vector<FormulaPtr>& kids) {
    std::vector<FormulaPtr> flat;
    for (auto& k : kids) {
        if (k->kind == kind)
            flat.insert(flat.end(), k->kids.begin(), k->kids.end());
        else
            flat.push_back(k);
    }
    std::sort(flat.begin(), flat.end(),
              [](const FormulaPtr& a, const FormulaPtr& b) { return a->repr < b->repr; });
    flat.erase(std::unique(flat.begin(), flat.end(),
                           [](const FormulaPtr& a, const FormulaPtr& b) {
                               return a->repr == b->repr;
                           }),
               flat.end());
    kids = std::move(flat);
}

bool contains_repr(const std::vector<FormulaPtr>& kids, const std::string& repr) {
    return std::any_of(kids.begin(), kids.end(),
                       [&](const FormulaPtr& k) { return k->repr == repr; });
}

}  // namespace

FormulaPtr make_true() { return true_node(); }
FormulaPtr make_false() { return false_node(); }
FormulaPtr make_exists() { return exists_node(); }

FormulaPtr make_atom(const std::string& name) {
    return node(FormulaKind::Atom, name, {}, name);
}

FormulaPtr make_neg_atom(const std::string& name) {
    return node(FormulaKind::NegAtom, name, {}, "!" + name);
}

FormulaPtr make_and(std::vector<FormulaPtr> kids) {
    std::vector<FormulaPtr> kept;
    for (auto& k : kids) {
        if (k->is(FormulaKind::False)) return false_node();
        if (!k->is(FormulaKind::True)) kept.push_back(std::move(k));
    }
    normalize_operands(FormulaKind::And, kept);
    // absorption: A & (A | B)  ==  A
    std::vector<FormulaPtr> out;
    for (auto& k : kept) {
        if (k->is(FormulaKind::Or)) {
            bool absorbed = std::any_of(
                k->kids.begin(), k->kids.end(),
                [&](const FormulaPtr& d) { return contains_repr(kept, d->repr); });
            if (absorbed) continue;
        }
        out.push_back(k);
    }
    if (out.empty()) return true_node();
    if (out.size() == 1) return out[0];
    std::string repr = join_reprs("&", out);
    return node(FormulaKind::And, "", std::move(out), std::move(repr));
}

FormulaPtr make_or(std::vector<FormulaPtr> kids) {
    std::vector<FormulaPtr> kept;
    for (auto& k : kids) {
        if (k->is(FormulaKind::True)) return true_node();
        if (!k->is(FormulaKind::False)) kept.push_back(std::move(k));
    }
    normalize_operands(FormulaKind::Or, kept);
    // absorption: A | (A & B)  ==  A
    std::vector<FormulaPtr> out;
    for (auto& k : kept) {
        if (k->is(FormulaKind::And)) {
            bool absorbed = std::any_of(
                k->kids.begin(), k->kids.end(),
                [&](const FormulaPtr& c) { return contains_repr(kept, c->repr); });
            if (absorbed) continue;
        }
        out.push_back(k);
    }
    if (out.empty()) return false_node();
    if (out.size() == 1) return out[0];
    std::string repr = join_reprs("|", out);
    return node(FormulaKind::Or, "", std::move(out), std::move(repr));
}

FormulaPtr make_next(FormulaPtr sub) {
    // X false can never be discharged; X true is NOT true (the next position
    // must exist under finite-trace semantics).
    if (sub->is(FormulaKind::False)) return false_node();
    std::string repr = "X" + sub->repr;
    return node(FormulaKind::Next, "", {std::move(sub)}, std::move(repr));
}

FormulaPtr make_until(FormulaPtr lhs, FormulaPtr rhs) {
    if (rhs->is(FormulaKind::True)) return true_node();
    if (rhs->is(FormulaKind::False)) return false_node();
    if (lhs->is(FormulaKind::False)) return rhs;  // witness must be immediate
    if (lhs->repr == rhs->repr) return rhs;
    std::string repr = "(" + lhs->repr + " U " + rhs->repr + ")";
    return node(FormulaKind::Until, "", {std::move(lhs), std::move(rhs)}, std::move(repr));
}

// ---------------------------------------------------------------------------
// ApSet

ApSet::ApSet(std::vector<std::string> names) : names_(std::move(names)) {
    if (names_.empty()) throw std::invalid_argument("atomic proposition set is empty");
    if (names_.size() > 20)
        throw std::invalid_argument("too many atomic propositions (max 20)");
    for (std::size_t i = 0; i < names_.size(); ++i)
        for (std::size_t j = i + 1; j < names_.size(); ++j)
            if (names_[i] == names_[j])
                throw std::invalid_argument("duplicate atomic proposition: " + names_[i]);
}

int ApSet::index(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    return -1;
}

std::string ApSet::symbol_to_string(std::uint32_t sigma) const {
    std::string out = "{";
    bool first = true;
    for (int i = 0; i < size(); ++i) {
        if (sigma & (1u << i)) {
            if (!first) out += ",";
            out += names_[i];
            first = false;
        }
    }
    out += "}";
    return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Parser {
    const std::string& text;
    const ApSet& aps;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }

    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool is_ident_char(char c) const {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }

    // Peeks a keyword/identifier without consuming.
    std::string peek_word() {
        skip_ws();
        std::size_t p = pos;
        std::string w;
        while (p < text.size() && is_ident_char(text[p])) w += text[p++];
        return w;
    }

    std::string take_word() {
        std::string w = peek_word();
        pos += w.size();
        return w;
    }

    FormulaPtr parse_or() {
        FormulaPtr f = parse_and();
        while (peek() == '|') {
            ++pos;
            std::vector<FormulaPtr> kids{f, parse_and()};
            f = make_or(std::move(kids));
        }
        return f;
    }

    FormulaPtr parse_and() {
        FormulaPtr f = parse_until();
        while (peek() == '&') {
            ++pos;
            std::vector<FormulaPtr> kids{f, parse_until()};
            f = make_and(std::move(kids));
        }
        return f;
    }

    FormulaPtr parse_until() {
        FormulaPtr f = parse_unary();
        if (peek_word() == "U") {
            take_word();
            FormulaPtr rhs = parse_until();  // right associative
            f = make_until(f, rhs);
        }
        return f;
    }

    FormulaPtr parse_unary() {
        skip_ws();
        std::size_t here = pos;
        if (peek() == '!') {
            ++pos;
            FormulaPtr sub = parse_unary();
            if (sub->is(FormulaKind::Atom)) return make_neg_atom(sub->atom);
            throw ParseError("negation is only allowed on atomic propositions", here);
        }
        std::string w = peek_word();
        if (w == "X") {
            take_word();
            return make_next(parse_unary());
        }
        if (w == "F") {
            take_word();
            // F phi desugars to true U phi
            return make_until(make_true(), parse_unary());
        }
        return parse_primary();
    }

    FormulaPtr parse_primary() {
        skip_ws();
        std::size_t here = pos;
        if (peek() == '(') {
            ++pos;
            FormulaPtr f = parse_or();
            if (peek() != ')') throw ParseError("expected ')'", pos);
            ++pos;
            return f;
        }
        std::string w = take_word();
        if (w.empty()) throw ParseError("expected formula", here);
        if (w == "true") return make_true();
        if (w == "U" || w == "X" || w == "F")
            throw ParseError("unexpected operator '" + w + "'", here);
        if (aps.index(w) < 0)
            throw ParseError("unknown atomic proposition '" + w + "'", here);
        return make_atom(w);
    }
};

}  // namespace

FormulaPtr parse_formula(const std::string& text, const ApSet& aps) {
    if (text.empty()) throw ParseError("empty formula", 0);
    Parser p{text, aps};
    FormulaPtr f = p.parse_or();
    if (!p.at_end()) throw ParseError("trailing input", p.pos);
    return f;
}

// ---------------------------------------------------------------------------
// Derivatives and the semantic oracle

FormulaPtr derivative(const FormulaPtr& f, std::uint32_t sigma, const ApSet& aps) {
    switch (f->kind) {
        case FormulaKind::True:
            return make_true();
        case FormulaKind::False:
            return make_false();
        case FormulaKind::Exists:
            // a symbol was just read, so a position exists
            return make_true();
        case FormulaKind::Atom: {
            int i = aps.index(f->atom);
            return (sigma >> i) & 1u ? make_true() : make_false();
        }
        case FormulaKind::NegAtom: {
            int i = aps.index(f->atom);
            return (sigma >> i) & 1u ? make_false() : make_true();
        }
        case FormulaKind::And: {
            std::vector<FormulaPtr> kids;
            kids.reserve(f->kids.size());
            for (auto& k : f->kids) kids.push_back(derivative(k, sigma, aps));
            return make_and(std::move(kids));
        }
        case FormulaKind::Or: {
            std::vector<FormulaPtr> kids;
            kids.reserve(f->kids.size());
            for (auto& k : f->kids) kids.push_back(derivative(k, sigma, aps));
            return make_or(std::move(kids));
        }
        case FormulaKind::Next:
            // X true cannot discharge to plain true: "true" holds even on the
            // empty remainder, but X g demands that the next position exist.
            if (f->kids[0]->is(FormulaKind::True)) return make_exists();
            return f->kids[0];
        case FormulaKind::Until: {
            // p U q  ==  q | (p & X(p U q))
            FormulaPtr dq = derivative(f->kids[1], sigma, aps);
            FormulaPtr dp = derivative(f->kids[0], sigma, aps);
            return make_or({dq, make_and({dp, f})});
        }
    }
    return make_false();  // unreachable
}

namespace {

// Holds-at masks, bit i = formula holds at position i.  Computed bottom-up
// over subformulas; Until is resolved right to left.
std::uint64_t holds_mask(const FormulaPtr& f, const std::vector<std::uint32_t>& word,
                         const ApSet& aps) {
    const int n = static_cast<int>(word.size());
    const std::uint64_t all = n >= 64 ? ~0ull : ((1ull << n) - 1);
    switch (f->kind) {
        case FormulaKind::True:
            return all;
        case FormulaKind::False:
            return 0;
        case FormulaKind::Exists:
            return all;  // holds at every position that exists
        case FormulaKind::Atom: {
            int i = aps.index(f->atom);
            std::uint64_t m = 0;
            for (int p = 0; p < n; ++p)
                if ((word[p] >> i) & 1u) m |= 1ull << p;
            return m;
        }
        case FormulaKind::NegAtom: {
            int i = aps.index(f->atom);
            std::uint64_t m = 0;
            for (int p = 0; p < n; ++p)
                if (!((word[p] >> i) & 1u)) m |= 1ull << p;
            return m;
        }
        case FormulaKind::And: {
            std::uint64_t m = all;
            for (auto& k : f->kids) m &= holds_mask(k, word, aps);
            return m;
        }
        case FormulaKind::Or: {
            std::uint64_t m = 0;
            for (auto& k : f->kids) m |= holds_mask(k, word, aps);
            return m;
        }
        case FormulaKind::Next:
            // holds at i iff position i+1 exists and sub holds there
            return (holds_mask(f->kids[0], word, aps) >> 1) & all;
        case FormulaKind::Until: {
            std::uint64_t lhs = holds_mask(f->kids[0], word, aps);
            std::uint64_t rhs = holds_mask(f->kids[1], word, aps);
            std::uint64_t m = 0;
            bool later = false;  // does the until hold at position p+1?
            for (int p = n - 1; p >= 0; --p) {
                bool here = ((rhs >> p) & 1) || (((lhs >> p) & 1) && later);
                if (here) m |= 1ull << p;
                later = here;
            }
            return m;
        }
    }
    return 0;  // unreachable
}

}  // namespace

bool good_prefix_oracle(const FormulaPtr& f, const std::vector<std::uint32_t>& word,
                        const ApSet& aps) {
    if (word.size() >= 64) throw std::invalid_argument("oracle word too long");
    if (word.empty()) return f->is(FormulaKind::True);
    return (holds_mask(f, word, aps) & 1ull) != 0;
}

}  // namespace rcplan

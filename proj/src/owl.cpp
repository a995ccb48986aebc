#include "macmin/owl.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include "macmin/corpus.hpp"

namespace macmin {

const std::vector<std::pair<std::string, SymbolKind>>& owl_constructor_table() {
    static const std::vector<std::pair<std::string, SymbolKind>> table = {
        {"SubClassOf", SymbolKind::ordered(2)},
        {"ObjectSomeValuesFrom", SymbolKind::ordered(2)},
        {"ObjectAllValuesFrom", SymbolKind::ordered(2)},
        {"ObjectComplementOf", SymbolKind::ordered(1)},
        {"ObjectIntersectionOf", SymbolKind::unordered()},
        {"ObjectUnionOf", SymbolKind::unordered()},
        {"EquivalentClasses", SymbolKind::unordered()},
        {"DisjointClasses", SymbolKind::unordered()},
        {"DisjointUnion", SymbolKind::mixed(1)},
    };
    return table;
}

namespace {

struct Sexp {
    std::string atom;       // set when leaf
    std::vector<Sexp> kids; // set when list; kids[0] is the head atom
    bool list = false;
    size_t line = 1;

    const std::string& head() const { return kids.front().atom; }
};

class OwlTokenizer {
public:
    explicit OwlTokenizer(std::string_view text) : text_(text) {}

    struct Token {
        enum Kind { LParen, RParen, Atom, End } kind = End;
        std::string text;
        size_t line = 1;
    };

    Token next() {
        skip_ws();
        Token tok;
        tok.line = line_;
        if (pos_ >= text_.size()) return tok;
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            tok.kind = Token::LParen;
            return tok;
        }
        if (c == ')') {
            ++pos_;
            tok.kind = Token::RParen;
            return tok;
        }
        tok.kind = Token::Atom;
        if (c == '"') {
            size_t start = pos_++;
            while (pos_ < text_.size() && text_[pos_] != '"') {
                if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
                if (text_[pos_] == '\n') ++line_;
                ++pos_;
            }
            if (pos_ >= text_.size())
                throw Error(ErrorKind::Syntax,
                            "line " + std::to_string(tok.line) + ": unterminated string");
            ++pos_;
            consume_literal_suffix();
            tok.text = std::string(text_.substr(start, pos_ - start));
            return tok;
        }
        if (c == '<') {
            size_t start = pos_;
            while (pos_ < text_.size() && text_[pos_] != '>') ++pos_;
            if (pos_ >= text_.size())
                throw Error(ErrorKind::Syntax,
                            "line " + std::to_string(tok.line) + ": unterminated IRI");
            ++pos_;
            tok.text = std::string(text_.substr(start, pos_ - start));
            return tok;
        }
        size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
               text_[pos_] != '(' && text_[pos_] != ')' && text_[pos_] != '"')
            ++pos_;
        tok.text = std::string(text_.substr(start, pos_ - start));
        return tok;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    void consume_literal_suffix() {
        // ^^<datatype> | ^^pname | @lang
        if (pos_ + 1 < text_.size() && text_[pos_] == '^' && text_[pos_ + 1] == '^') {
            pos_ += 2;
            if (pos_ < text_.size() && text_[pos_] == '<') {
                while (pos_ < text_.size() && text_[pos_] != '>') ++pos_;
                if (pos_ < text_.size()) ++pos_;
                return;
            }
        } else if (pos_ < text_.size() && text_[pos_] == '@') {
            ++pos_;
        } else {
            return;
        }
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
               text_[pos_] != '(' && text_[pos_] != ')')
            ++pos_;
    }

    std::string_view text_;
    size_t pos_ = 0;
    size_t line_ = 1;
};

std::vector<Sexp> parse_sexps(std::string_view text) {
    OwlTokenizer tz(text);
    std::vector<Sexp> roots;
    std::vector<Sexp> stack;
    while (true) {
        auto tok = tz.next();
        if (tok.kind == OwlTokenizer::Token::End) break;
        if (tok.kind == OwlTokenizer::Token::Atom) {
            Sexp leaf;
            leaf.atom = tok.text;
            leaf.line = tok.line;
            if (stack.empty())
                roots.push_back(std::move(leaf));
            else
                stack.back().kids.push_back(std::move(leaf));
        } else if (tok.kind == OwlTokenizer::Token::LParen) {
            // functional syntax: the preceding atom is the list head
            Sexp node;
            node.list = true;
            node.line = tok.line;
            std::vector<Sexp>* owner_kids = stack.empty() ? &roots : &stack.back().kids;
            if (!owner_kids->empty() && !owner_kids->back().list) {
                node.kids.push_back(std::move(owner_kids->back()));
                owner_kids->pop_back();
            } else {
                Sexp head;
                head.line = tok.line;
                node.kids.push_back(std::move(head));
            }
            stack.push_back(std::move(node));
        } else {
            if (stack.empty())
                throw Error(ErrorKind::Syntax,
                            "line " + std::to_string(tok.line) + ": unbalanced ')'");
            Sexp done = std::move(stack.back());
            stack.pop_back();
            if (stack.empty())
                roots.push_back(std::move(done));
            else
                stack.back().kids.push_back(std::move(done));
        }
    }
    if (!stack.empty()) throw Error(ErrorKind::Syntax, "unbalanced '(' at end of input");
    return roots;
}

struct SkipAxiom {
    std::string why;
};

class OwlIngester {
public:
    explicit OwlIngester(bool lenient) : lenient_(lenient) {
        for (const auto& [name, kind] : owl_constructor_table()) doc_.alphabet.declare(name, kind);
        supported_exprs_ = {"ObjectIntersectionOf", "ObjectUnionOf", "ObjectSomeValuesFrom",
                            "ObjectAllValuesFrom", "ObjectComplementOf"};
        axiom_heads_ = {"SubClassOf", "EquivalentClasses", "DisjointClasses", "DisjointUnion"};
    }

    OwlDocument run(const std::vector<Sexp>& roots) {
        for (const Sexp& root : roots) visit_toplevel(root);
        return std::move(doc_);
    }

private:
    void visit_toplevel(const Sexp& node) {
        if (!node.list) return;
        const std::string& head = node.head();
        if (head == "Prefix") {
            register_prefix(node);
        } else if (head == "Ontology") {
            for (size_t i = 1; i < node.kids.size(); ++i)
                if (node.kids[i].list) visit_axiom(node.kids[i]);
        } else if (head == "Import" || head == "Declaration" || head == "Annotation") {
            // not class-expression axioms
        } else {
            visit_axiom(node);
        }
    }

    void visit_axiom(const Sexp& node) {
        const std::string& head = node.head();
        if (!axiom_heads_.count(head)) {
            skip(head.empty() ? "(anonymous)" : head);
            return;
        }
        try {
            std::vector<Term> args;
            for (size_t i = 1; i < node.kids.size(); ++i) {
                const Sexp& kid = node.kids[i];
                if (kid.list && kid.head() == "Annotation") continue; // annotations disregarded
                args.push_back(expression(kid));
            }
            doc_.axioms.push_back(make_term(doc_.alphabet, head, std::move(args)));
        } catch (const SkipAxiom& s) {
            skip(s.why);
        } catch (const Error& e) {
            throw Error(e.kind(), "line " + std::to_string(node.line) + ": " + e.what());
        }
    }

    Term expression(const Sexp& node) {
        if (!node.list) return constant(node.atom);
        const std::string& head = node.head();
        std::vector<Term> args;
        auto build_args = [&] {
            for (size_t i = 1; i < node.kids.size(); ++i) args.push_back(expression(node.kids[i]));
        };
        if (supported_exprs_.count(head)) {
            build_args();
            if (head == "ObjectIntersectionOf" || head == "ObjectUnionOf")
                dedupe(args); // the arguments are a set in OWL
            return make_term(doc_.alphabet, head, std::move(args));
        }
        if (!lenient_) throw SkipAxiom{head.empty() ? "(anonymous)" : head};
        // opaque ingestion: one ordered symbol per constructor, first observed arity
        build_args();
        std::string name = sanitize(head.empty() ? "anon" : head);
        auto kind = doc_.alphabet.find(name);
        if (!kind)
            doc_.alphabet.declare(name, SymbolKind::ordered(static_cast<uint32_t>(args.size())));
        else if (!(kind->family == SymbolFamily::Ordered && kind->arity == args.size()))
            throw SkipAxiom{head + " (conflicting arity)"};
        return make_term(doc_.alphabet, name, std::move(args));
    }

    Term constant(const std::string& atom) {
        std::string name = iri_name(atom);
        if (!doc_.alphabet.has(name)) doc_.alphabet.declare(name, SymbolKind::ordered(0));
        return make_term(doc_.alphabet, name, {});
    }

    void register_prefix(const Sexp& node) {
        std::string text;
        for (size_t i = 1; i < node.kids.size(); ++i)
            if (!node.kids[i].list) text += node.kids[i].atom;
        size_t eq = text.find(":=");
        if (eq == std::string::npos) return;
        std::string prefix = text.substr(0, eq);
        std::string iri = text.substr(eq + 2);
        if (!prefix.empty() && prefix.back() == ':') prefix.pop_back();
        if (iri.size() >= 2 && iri.front() == '<') iri = iri.substr(1, iri.size() - 2);
        prefixes_[prefix] = iri;
    }

    // IRI or prefixed name -> corpus-safe symbol name: local fragment,
    // sanitized, deterministically uniqued per distinct source IRI.
    std::string iri_name(const std::string& atom) {
        auto it = iri_names_.find(atom);
        if (it != iri_names_.end()) return it->second;

        std::string full = atom;
        if (atom.size() >= 2 && atom.front() == '<') {
            full = atom.substr(1, atom.size() - 2);
        } else if (size_t colon = atom.find(':'); colon != std::string::npos) {
            auto p = prefixes_.find(atom.substr(0, colon));
            if (p != prefixes_.end()) full = p->second + atom.substr(colon + 1);
        }
        std::string local = full;
        if (size_t cut = full.find_last_of("#/"); cut != std::string::npos && cut + 1 < full.size())
            local = full.substr(cut + 1);
        if (size_t colon = local.find_last_of(':');
            colon != std::string::npos && colon + 1 < local.size())
            local = local.substr(colon + 1);
        std::string name = unique_name(sanitize(local));
        iri_names_.emplace(atom, name);
        claimed_.insert(name);
        return name;
    }

    std::string sanitize(const std::string& raw) {
        std::string out;
        out.reserve(raw.size());
        for (char c : raw) out += name_char_ok(c) ? c : '_';
        if (out.empty() || !(std::isalpha(static_cast<unsigned char>(out[0])) || out[0] == '_'))
            out = "n_" + out;
        while (out.rfind("__", 0) == 0) out = out.substr(1); // '__' prefix is reserved
        return out;
    }

    static bool name_char_ok(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.' ||
               c == '-';
    }

    std::string unique_name(const std::string& base) {
        if (!claimed_.count(base) && !doc_.alphabet.has(base)) return base;
        for (uint64_t k = 2;; ++k) {
            std::string candidate = base + "_" + std::to_string(k);
            if (!claimed_.count(candidate) && !doc_.alphabet.has(candidate)) return candidate;
        }
    }

    static void dedupe(std::vector<Term>& args) {
        std::vector<Term> out;
        for (const Term& a : args) {
            bool seen = false;
            for (const Term& b : out) seen = seen || a == b;
            if (!seen) out.push_back(a);
        }
        args = std::move(out);
    }

    void skip(const std::string& why) {
        ++doc_.skipped_axioms;
        ++doc_.skip_reasons[why];
    }

    bool lenient_;
    OwlDocument doc_;
    std::unordered_set<std::string> supported_exprs_;
    std::unordered_set<std::string> axiom_heads_;
    std::unordered_map<std::string, std::string> prefixes_;
    std::unordered_map<std::string, std::string> iri_names_;
    std::unordered_set<std::string> claimed_;
};

// Strongly connected components, iterative Tarjan. Returns component ids.
std::vector<size_t> scc(const std::vector<std::vector<size_t>>& graph, size_t& component_count) {
    const size_t n = graph.size();
    std::vector<size_t> comp(n, SIZE_MAX), index(n, SIZE_MAX), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<size_t> tstack;
    size_t next_index = 0;
    component_count = 0;

    struct Frame {
        size_t v;
        size_t edge = 0;
    };
    for (size_t root = 0; root < n; ++root) {
        if (index[root] != SIZE_MAX) continue;
        std::vector<Frame> frames{{root}};
        index[root] = low[root] = next_index++;
        tstack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.edge < graph[f.v].size()) {
                size_t w = graph[f.v][f.edge++];
                if (index[w] == SIZE_MAX) {
                    index[w] = low[w] = next_index++;
                    tstack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                if (low[f.v] == index[f.v]) {
                    while (true) {
                        size_t w = tstack.back();
                        tstack.pop_back();
                        on_stack[w] = false;
                        comp[w] = component_count;
                        if (w == f.v) break;
                    }
                    ++component_count;
                }
                size_t v = f.v;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
            }
        }
    }
    return comp;
}

void collect_candidate_uses(const Term& t, const std::unordered_map<std::string, size_t>& idx,
                            std::unordered_set<size_t>& out) {
    if (t.is_constant()) {
        auto it = idx.find(t.label());
        if (it != idx.end()) out.insert(it->second);
        return;
    }
    for (size_t i = 0; i < t.child_count(); ++i) collect_candidate_uses(t.child(i), idx, out);
}

Term remap_macro_leaves(const Term& t, const std::unordered_set<std::string>& macro_names) {
    if (t.is_constant()) {
        if (macro_names.count(t.label())) return make_macro_leaf(t.label());
        return t;
    }
    std::vector<Term> children;
    children.reserve(t.child_count());
    bool changed = false;
    for (size_t i = 0; i < t.child_count(); ++i) {
        Term c = remap_macro_leaves(t.child(i), macro_names);
        changed = changed || !(c == t.child(i));
        children.push_back(std::move(c));
    }
    if (!changed) return t;
    return make_node(t.label(), t.star_begin(), std::move(children), false);
}

bool uses_unary(const Term& t, const Alphabet& alphabet) {
    if (!t.is_macro() && alphabet.kind_of(t.label()).is_unary()) return true;
    for (size_t i = 0; i < t.child_count(); ++i)
        if (uses_unary(t.child(i), alphabet)) return true;
    return false;
}

} // namespace

OwlDocument parse_owl_functional(std::string_view text, const OwlParseOptions& options) {
    OwlIngester ingester(options.lenient);
    return ingester.run(parse_sexps(text));
}

Language axioms_as_language(const std::vector<Term>& axioms) {
    return Language(axioms);
}

OntologyCorpus prepare_experiment(const OwlDocument& document) {
    OntologyCorpus corpus;
    corpus.axioms = axioms_as_language(document.axioms);
    corpus.alphabet_p3 = document.alphabet;
    for (const auto& [what, count] : document.skip_reasons)
        corpus.dropped.push_back(
            {"unsupported-constructor", what + " x" + std::to_string(count)});

    // Candidate definitions: EquivalentClasses(N, C), N named, C complex.
    struct Candidate {
        Term axiom;
        std::string name;
        Term body;
    };
    std::vector<Candidate> all;
    std::unordered_map<std::string, uint64_t> times_defined;
    for (const Term& axiom : corpus.axioms.terms()) {
        if (axiom.label() != "EquivalentClasses" || axiom.child_count() != 2) continue;
        const Term& a = axiom.child(0);
        const Term& b = axiom.child(1);
        const Term* named = a.is_constant() && !b.is_constant()   ? &a
                            : b.is_constant() && !a.is_constant() ? &b
                                                                  : nullptr;
        if (!named) continue;
        const Term& body = named == &a ? b : a;
        all.push_back(Candidate{axiom, named->label(), body});
        ++times_defined[named->label()];
    }

    std::vector<Candidate> kept;
    for (Candidate& c : all) {
        if (times_defined.at(c.name) > 1)
            corpus.dropped.push_back({"duplicate-definition", c.name});
        else
            kept.push_back(std::move(c));
    }

    // Drop candidates on `uses` cycles.
    {
        std::unordered_map<std::string, size_t> idx;
        for (size_t i = 0; i < kept.size(); ++i) idx.emplace(kept[i].name, i);
        std::vector<std::vector<size_t>> graph(kept.size());
        std::vector<bool> self_loop(kept.size(), false);
        for (size_t i = 0; i < kept.size(); ++i) {
            std::unordered_set<size_t> uses;
            collect_candidate_uses(kept[i].body, idx, uses);
            for (size_t j : uses) {
                if (j == i) self_loop[i] = true;
                graph[i].push_back(j);
            }
            std::sort(graph[i].begin(), graph[i].end());
        }
        size_t ncomp = 0;
        std::vector<size_t> comp = scc(graph, ncomp);
        std::vector<size_t> comp_size(ncomp, 0);
        for (size_t c : comp) ++comp_size[c];
        std::vector<Candidate> acyclic;
        for (size_t i = 0; i < kept.size(); ++i) {
            if (comp_size[comp[i]] > 1 || self_loop[i])
                corpus.dropped.push_back({"cycle", kept[i].name});
            else
                acyclic.push_back(std::move(kept[i]));
        }
        kept = std::move(acyclic);
    }

    // Alphabet for problems 1-2: candidate names become macro symbols.
    std::unordered_set<std::string> macro_names;
    for (const Candidate& c : kept) macro_names.insert(c.name);
    for (const std::string& name : document.alphabet.sorted_names())
        if (!macro_names.count(name))
            corpus.alphabet_p12.declare(name, document.alphabet.kind_of(name));

    std::vector<std::pair<std::string, Term>> defs;
    defs.reserve(kept.size());
    for (const Candidate& c : kept)
        defs.emplace_back(c.name, remap_macro_leaves(c.body, macro_names));
    corpus.candidate_defs = MacroDefinitions::validate(corpus.alphabet_p12, std::move(defs));

    // Problems 1-2: expand candidates away in the remaining axioms.
    {
        std::vector<Term> def_axioms;
        def_axioms.reserve(kept.size());
        for (const Candidate& c : kept) def_axioms.push_back(c.axiom);
        Language def_language(std::move(def_axioms));
        std::vector<Term> rest;
        for (const Term& axiom : corpus.axioms.terms())
            if (!def_language.contains(axiom))
                rest.push_back(remap_macro_leaves(axiom, macro_names));
        corpus.language_p12 = expand_fixedpoint(Language(std::move(rest)), corpus.candidate_defs);
    }

    // Problem 3: the full axiom set minus axioms involving unary symbols.
    {
        std::vector<Term> p3;
        for (const Term& axiom : corpus.axioms.terms()) {
            if (uses_unary(axiom, document.alphabet))
                corpus.dropped.push_back({"unary", render_term(axiom)});
            else
                p3.push_back(axiom);
        }
        corpus.language_p3 = Language(std::move(p3));
    }
    return corpus;
}

} // namespace macmin

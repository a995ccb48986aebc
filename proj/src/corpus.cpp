#include "macmin/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

namespace macmin {

namespace {

bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.' ||
           c == '-';
}

struct RawNode {
    std::string name;
    std::vector<RawNode> children;
    size_t line = 0;
};

[[noreturn]] void syntax_error(size_t line, const std::string& what) {
    throw Error(ErrorKind::Syntax, "line " + std::to_string(line) + ": " + what);
}

class LineScanner {
public:
    LineScanner(std::string_view text, size_t line) : text_(text), line_(line) {}

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    }

    bool at_end() {
        skip_ws();
        return pos_ >= text_.size();
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    bool consume(char c) {
        skip_ws();
        if (peek() != c) return false;
        ++pos_;
        return true;
    }

    bool consume_arrow() {
        skip_ws();
        if (pos_ + 1 < text_.size() && text_[pos_] == '-' && text_[pos_ + 1] == '>') {
            pos_ += 2;
            return true;
        }
        return false;
    }

    std::string name() {
        skip_ws();
        if (pos_ >= text_.size() || !name_start(text_[pos_]))
            syntax_error(line_, "expected a name");
        size_t start = pos_;
        while (pos_ < text_.size() && name_char(text_[pos_])) {
            // keep '->' available as the macro arrow
            if (text_[pos_] == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') break;
            ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    RawNode term_expr() {
        RawNode node;
        node.line = line_;
        node.name = name();
        if (consume('(')) {
            while (true) {
                node.children.push_back(term_expr());
                if (consume(',')) continue;
                if (consume(')')) break;
                syntax_error(line_, "expected ',' or ')' in term");
            }
        }
        return node;
    }

    size_t line() const { return line_; }

private:
    std::string_view text_;
    size_t pos_ = 0;
    size_t line_;
};

SymbolKind parse_kind(LineScanner& sc) {
    std::string word = sc.name();
    if (word == "unordered") return SymbolKind::unordered();
    if (word == "ordered" || word == "mixed") {
        if (!sc.consume('/')) syntax_error(sc.line(), "expected '/<arity>' after '" + word + "'");
        sc.skip_ws();
        std::string digits;
        while (std::isdigit(static_cast<unsigned char>(sc.peek()))) {
            digits += sc.peek();
            sc.consume(sc.peek());
        }
        if (digits.empty()) syntax_error(sc.line(), "expected an arity");
        unsigned long value = std::stoul(digits);
        if (word == "ordered") return SymbolKind::ordered(static_cast<uint32_t>(value));
        if (value < 1) syntax_error(sc.line(), "mixed symbols need a ranked prefix of at least 1");
        return SymbolKind::mixed(static_cast<uint32_t>(value));
    }
    syntax_error(sc.line(), "unknown symbol kind '" + word + "'");
}

class TermBuilder {
public:
    TermBuilder(Alphabet& alphabet, const std::unordered_set<std::string>& macro_names,
                bool infer)
        : alphabet_(alphabet), macro_names_(macro_names), infer_(infer) {}

    Term build(const RawNode& node) {
        bool is_macro = macro_names_.count(node.name) || node.name.rfind("__", 0) == 0;
        if (is_macro) {
            if (!node.children.empty())
                throw Error(ErrorKind::ArityMismatch,
                            "line " + std::to_string(node.line) + ": macro symbol '" + node.name +
                                "' cannot take children");
            return make_macro_leaf(node.name);
        }
        std::vector<Term> children;
        children.reserve(node.children.size());
        for (const RawNode& c : node.children) children.push_back(build(c));
        if (!alphabet_.has(node.name)) {
            if (!infer_)
                throw Error(ErrorKind::UndeclaredSymbol,
                            "line " + std::to_string(node.line) + ": symbol '" + node.name +
                                "' is not declared");
            alphabet_.declare(node.name,
                              SymbolKind::ordered(static_cast<uint32_t>(children.size())));
        }
        try {
            return make_term(alphabet_, node.name, std::move(children));
        } catch (const Error& e) {
            throw Error(e.kind(), "line " + std::to_string(node.line) + ": " + e.what());
        }
    }

private:
    Alphabet& alphabet_;
    const std::unordered_set<std::string>& macro_names_;
    bool infer_;
};

} // namespace

CorpusDocument parse_corpus(std::string_view text, const ParseOptions& options) {
    struct PendingTerm {
        RawNode raw;
    };
    struct PendingMacro {
        std::string name;
        RawNode raw;
        size_t line;
    };

    CorpusDocument doc;
    std::vector<RawNode> term_nodes;
    std::vector<PendingMacro> macro_nodes;
    std::unordered_set<std::string> macro_names;

    size_t line_no = 0;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        start = end + 1;

        if (size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);

        LineScanner sc(line, line_no);
        if (sc.at_end()) {
            if (end == text.size()) break;
            continue;
        }
        std::string directive = sc.name();
        if (directive == "symbol") {
            std::string name = sc.name();
            if (name.rfind("__", 0) == 0)
                throw Error(ErrorKind::SymbolClash,
                            "line " + std::to_string(line_no) +
                                ": the '__' prefix is reserved for macro symbols");
            if (!sc.consume(':')) syntax_error(line_no, "expected ':' after symbol name");
            SymbolKind kind = parse_kind(sc);
            if (!sc.at_end()) syntax_error(line_no, "trailing input after symbol declaration");
            try {
                doc.alphabet.declare(name, kind);
            } catch (const Error& e) {
                throw Error(e.kind(), "line " + std::to_string(line_no) + ": " + e.what());
            }
        } else if (directive == "term") {
            RawNode node = sc.term_expr();
            if (!sc.at_end()) syntax_error(line_no, "trailing input after term");
            term_nodes.push_back(std::move(node));
        } else if (directive == "macro") {
            std::string name = sc.name();
            if (!sc.consume_arrow()) syntax_error(line_no, "expected '->' in macro definition");
            RawNode node = sc.term_expr();
            if (!sc.at_end()) syntax_error(line_no, "trailing input after macro definition");
            macro_names.insert(name);
            macro_nodes.push_back(PendingMacro{std::move(name), std::move(node), line_no});
        } else {
            syntax_error(line_no, "unknown directive '" + directive + "'");
        }
        if (end == text.size()) break;
    }

    for (const std::string& m : macro_names)
        if (doc.alphabet.has(m))
            throw Error(ErrorKind::SymbolClash,
                        "'" + m + "' is declared both as a symbol and as a macro");

    TermBuilder builder(doc.alphabet, macro_names, options.infer_alphabet);
    std::vector<Term> terms;
    terms.reserve(term_nodes.size());
    for (const RawNode& node : term_nodes) terms.push_back(builder.build(node));
    doc.terms = Language(std::move(terms));
    for (const PendingMacro& pm : macro_nodes)
        doc.macros.emplace_back(pm.name, builder.build(pm.raw));
    return doc;
}

std::string render_term(const Term& t) {
    std::string out = t.label();
    if (t.child_count()) {
        out += '(';
        for (size_t i = 0; i < t.child_count(); ++i) {
            if (i) out += ',';
            out += render_term(t.child(i));
        }
        out += ')';
    }
    return out;
}

namespace {

std::string write_symbols(const Alphabet& alphabet) {
    std::string out;
    for (const std::string& name : alphabet.sorted_names())
        out += "symbol " + name + " : " + to_string(alphabet.kind_of(name)) + "\n";
    return out;
}

} // namespace

std::string write_corpus(const Alphabet& alphabet, const Language& language) {
    std::string out = write_symbols(alphabet);
    out += "\n";
    for (const Term& t : language.terms()) out += "term " + render_term(t) + "\n";
    return out;
}

std::string write_encoding(const Alphabet& alphabet, const Encoding& encoding) {
    std::string out = write_symbols(alphabet);
    out += "\n";
    std::vector<std::string> names = encoding.defs.names();
    std::sort(names.begin(), names.end(), [&](const std::string& a, const std::string& b) {
        int c = Term::compare(encoding.defs.rhs(a), encoding.defs.rhs(b));
        if (c != 0) return c < 0;
        return a < b;
    });
    for (const std::string& name : names)
        out += "macro " + name + " -> " + render_term(encoding.defs.rhs(name)) + "\n";
    out += "\n";
    for (const Term& t : encoding.macrofied.terms()) out += "term " + render_term(t) + "\n";
    return out;
}

std::string write_stats(const MinimizationReport& report) {
    nlohmann::ordered_json j;
    j["size_input"] = report.input_size;
    j["size_language"] = report.language_size;
    j["size_definitions"] = report.definitions_size;
    j["size_output"] = report.output_size;
    j["proportional_reduction_percent"] = report.reduction_percent();
    j["proportional_reduction"] = {{"numerator", report.reduction_num},
                                   {"denominator", report.reduction_den}};
    j["num_terms"] = report.term_count;
    j["num_changed_terms"] = report.changed_term_count;
    j["num_macro_definitions"] = report.macro_count;
    j["num_instantiations"] = report.instantiation_count;
    j["problem"] = report.problem;
    return j.dump(2) + "\n";
}

} // namespace macmin

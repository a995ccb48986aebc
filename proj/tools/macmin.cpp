#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "macmin/containment.hpp"
#include "macmin/corpus.hpp"
#include "macmin/generate.hpp"
#include "macmin/oracle.hpp"
#include "macmin/owl.hpp"

namespace {

using namespace macmin;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path + "'");
    out << content;
}

struct LoadedProblem {
    Alphabet alphabet;
    Language language;
    MacroDefinitions defs;
    uint64_t input_size_override = 0; // nonzero for OWL inputs: size of the axiom set
    std::vector<OntologyCorpus::Dropped> dropped;
};

MacroDefinitions corpus_defs(const CorpusDocument& doc) {
    return MacroDefinitions::validate(doc.alphabet, doc.macros);
}

LoadedProblem load_problem(int problem, const std::string& path, const std::string& kind,
                           bool infer_alphabet, bool lenient_owl) {
    LoadedProblem loaded;
    bool owl = kind == "owl" || (kind == "auto" && path.size() > 4 &&
                                 path.substr(path.size() - 4) == ".ofn");
    if (owl) {
        OwlDocument doc = parse_owl_functional(read_file(path), OwlParseOptions{lenient_owl});
        OntologyCorpus corpus = prepare_experiment(doc);
        loaded.dropped = corpus.dropped;
        loaded.input_size_override = corpus.axioms.total_size();
        if (problem == 3) {
            loaded.alphabet = corpus.alphabet_p3;
            loaded.language = corpus.language_p3;
        } else {
            loaded.alphabet = corpus.alphabet_p12;
            loaded.language = corpus.language_p12;
            loaded.defs = corpus.candidate_defs;
            if (problem == 2) {
                std::vector<std::string> dropped_names;
                loaded.defs = reduce_definitions(loaded.alphabet, loaded.defs, &dropped_names);
                for (const std::string& name : dropped_names)
                    loaded.dropped.push_back({"duplicate-expansion", name});
            }
        }
        return loaded;
    }
    CorpusDocument doc = parse_corpus(read_file(path), ParseOptions{infer_alphabet});
    if (problem == 3 && !doc.macros.empty())
        throw Error(ErrorKind::Config,
                    "problem 3 chooses its own macros; remove the macro lines from the input");
    loaded.alphabet = doc.alphabet;
    loaded.language = doc.terms;
    if (problem != 3) loaded.defs = corpus_defs(doc);
    return loaded;
}

void override_input_size(MinimizationReport& report, uint64_t input_size) {
    if (input_size == 0) return;
    report.input_size = input_size;
    report.reduction_den = input_size;
    report.reduction_num =
        report.output_size <= input_size ? input_size - report.output_size : 0;
}

int cmd_minimize(int problem, const std::string& input, const std::string& kind,
                 const std::string& output, const std::string& stats_path, bool infer_alphabet,
                 bool lenient_owl, bool no_prune, const std::string& dot_path, unsigned jobs) {
    LoadedProblem loaded = load_problem(problem, input, kind, infer_alphabet, lenient_owl);
    MinimizeOptions options;
    options.jobs = jobs ? jobs : std::max(1u, std::thread::hardware_concurrency());
    options.prune = !no_prune;

    MinimizationReport report;
    switch (problem) {
        case 1: report = minimize_p1(loaded.language, loaded.defs, options); break;
        case 2: report = minimize_p2(loaded.language, loaded.defs, options); break;
        case 3: report = minimize_p3(loaded.language, loaded.alphabet, options); break;
        default: throw Error(ErrorKind::Config, "problem must be 1, 2 or 3");
    }
    override_input_size(report, loaded.input_size_override);

    write_output(output, write_encoding(loaded.alphabet, report.encoding));
    if (!stats_path.empty()) write_output(stats_path, write_stats(report));
    if (!dot_path.empty()) write_output(dot_path, hasse_to_dot(build_hasse(report.encoding.defs)));
    for (const auto& drop : loaded.dropped)
        std::cerr << "dropped (" << drop.reason << "): " << drop.what << "\n";
    return 0;
}

int cmd_verify(const std::string& encoding_path, const std::string& source_path,
               const std::string& stats_path) {
    CorpusDocument enc = parse_corpus(read_file(encoding_path));
    CorpusDocument src = parse_corpus(read_file(source_path));
    MacroDefinitions defs = corpus_defs(enc);
    if (!is_encoding(enc.terms, defs, src.terms)) {
        std::cerr << "verification failed: expansion does not reproduce the source language\n";
        Language expanded = expand_fixedpoint(enc.terms, defs);
        for (const Term& t : expanded.terms())
            if (!src.terms.contains(t)) std::cerr << "  extra: " << render_term(t) << "\n";
        for (const Term& t : src.terms.terms())
            if (!expanded.contains(t)) std::cerr << "  missing: " << render_term(t) << "\n";
        throw Error(ErrorKind::VerifyMismatch, "not an encoding of the source");
    }
    Encoding encoding{enc.terms, defs, src.terms};
    EncodingSize size = encoding_size(encoding);
    if (!stats_path.empty()) {
        auto stats = nlohmann::json::parse(read_file(stats_path));
        auto check = [&](const char* key, uint64_t actual) {
            if (stats.contains(key) && stats[key].get<uint64_t>() != actual)
                throw Error(ErrorKind::VerifyMismatch,
                            std::string(key) + " is " + std::to_string(actual) +
                                ", stats say " + stats[key].dump());
        };
        check("size_language", size.language);
        check("size_definitions", size.definitions);
        check("size_output", size.total);
    }
    std::cout << "ok: encoding of " << source_path << " (size " << size.total << " = "
              << size.language << " + " << size.definitions << ")\n";
    return 0;
}

int cmd_expand(const std::string& input, const std::string& output) {
    CorpusDocument doc = parse_corpus(read_file(input));
    MacroDefinitions defs = corpus_defs(doc);
    Language expanded = expand_fixedpoint(doc.terms, defs);
    write_output(output, write_corpus(doc.alphabet, expanded));
    return 0;
}

int cmd_oracle(int problem, const std::string& input, uint64_t max_states, double max_seconds,
               size_t p3_max_macros) {
    CorpusDocument doc = parse_corpus(read_file(input));
    SearchBudget budget{max_states, max_seconds};
    OracleResult result;
    switch (problem) {
        case 1: result = oracle_p1(doc.terms, corpus_defs(doc), budget); break;
        case 2: result = oracle_p2(doc.terms, corpus_defs(doc), budget); break;
        case 3:
            if (!doc.macros.empty())
                throw Error(ErrorKind::Config,
                            "problem 3 chooses its own macros; remove the macro lines");
            result = oracle_p3(doc.terms, doc.alphabet, OracleP3Options{budget, p3_max_macros});
            break;
        default: throw Error(ErrorKind::Config, "problem must be 1, 2 or 3");
    }
    std::cout << "minimum " << result.min_size << " (" << result.states_explored
              << " states)\n";
    std::cout << write_encoding(doc.alphabet, result.witness);
    return 0;
}

int cmd_gen(uint64_t seed, size_t terms, uint64_t max_size, size_t symbols, size_t macros,
            bool allow_unary, bool no_unordered, const std::string& output) {
    GenOptions options;
    options.seed = seed;
    options.term_count = terms;
    options.max_term_size = max_size;
    options.symbol_count = symbols;
    options.macro_count = macros;
    options.allow_unary = allow_unary;
    options.include_unordered = !no_unordered;
    GeneratedInstance instance = generate_instance(options);

    std::string out = write_corpus(instance.alphabet, instance.language);
    if (!instance.macros.empty()) {
        out += "\n";
        for (const auto& [name, rhs] : instance.macros)
            out += "macro " + name + " -> " + render_term(rhs) + "\n";
    }
    write_output(output, out);
    return 0;
}

int cmd_owl_import(const std::string& input, bool lenient, int problem,
                   const std::string& output, const std::string& report_path) {
    OwlDocument doc = parse_owl_functional(read_file(input), OwlParseOptions{lenient});
    OntologyCorpus corpus = prepare_experiment(doc);

    std::string out;
    if (problem == 3) {
        out = write_corpus(corpus.alphabet_p3, corpus.language_p3);
    } else {
        out = write_corpus(corpus.alphabet_p12, corpus.language_p12);
        out += "\n";
        for (const std::string& name : corpus.candidate_defs.names())
            out += "macro " + name + " -> " + render_term(corpus.candidate_defs.rhs(name)) + "\n";
    }
    write_output(output, out);

    if (!report_path.empty()) {
        nlohmann::ordered_json j;
        j["size_input"] = corpus.axioms.total_size();
        j["num_axioms"] = corpus.axioms.count();
        j["num_candidate_definitions"] = corpus.candidate_defs.count();
        j["num_terms_p12"] = corpus.language_p12.count();
        j["size_p12"] = corpus.language_p12.total_size();
        j["num_terms_p3"] = corpus.language_p3.count();
        j["size_p3"] = corpus.language_p3.total_size();
        j["skipped_axioms"] = doc.skipped_axioms;
        nlohmann::ordered_json drops = nlohmann::ordered_json::object();
        for (const auto& d : corpus.dropped) {
            if (!drops.contains(d.reason)) drops[d.reason] = 0;
            drops[d.reason] = drops[d.reason].get<uint64_t>() + 1;
        }
        j["dropped"] = drops;
        write_output(report_path, j.dump(2) + "\n");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"size-minimal macro encodings of finite term languages"};
    app.require_subcommand(1);

    int problem = 1;
    std::string input, output = "-", stats, kind = "auto", dot, encoding_path, source_path;
    bool infer = false, lenient = false, no_prune = false, allow_unary = false,
         no_unordered = false;
    unsigned jobs = 0;
    uint64_t max_states = 2'000'000, seed = 1, max_size = 12;
    double max_seconds = 120.0;
    size_t p3_max_macros = 4, terms = 5, symbols = 6, macros = 0;
    std::string report_path;

    auto* minimize = app.add_subcommand("minimize", "compute a size-minimal encoding");
    minimize->add_option("--problem,-p", problem, "1, 2 or 3")->required();
    minimize->add_option("--input,-i", input)->required();
    minimize->add_option("--input-kind", kind, "corpus|owl|auto");
    minimize->add_option("--output,-o", output, "encoding document path or '-'");
    minimize->add_option("--stats", stats, "statistics JSON path");
    minimize->add_flag("--infer-alphabet", infer, "infer undeclared symbols");
    minimize->add_flag("--lenient-owl", lenient, "opaque ingestion of unsupported constructors");
    minimize->add_flag("--no-prune", no_prune, "problem 3: keep the full selected macro set");
    minimize->add_option("--emit-dot", dot, "write the containment diagram (graphviz)");
    minimize->add_option("--jobs,-j", jobs, "worker threads (0 = auto)");

    auto* verify = app.add_subcommand("verify", "check an encoding against its source");
    verify->add_option("--encoding,-e", encoding_path)->required();
    verify->add_option("--source,-s", source_path)->required();
    verify->add_option("--stats", stats, "statistics JSON to cross-check");

    auto* expand = app.add_subcommand("expand", "expand an encoding to a macro-free corpus");
    expand->add_option("--input,-i", input)->required();
    expand->add_option("--output,-o", output);

    auto* oracle = app.add_subcommand("oracle", "exhaustive-search minimum for small corpora");
    oracle->add_option("--problem,-p", problem)->required();
    oracle->add_option("--input,-i", input)->required();
    oracle->add_option("--max-states", max_states);
    oracle->add_option("--max-seconds", max_seconds);
    oracle->add_option("--p3-max-macros", p3_max_macros);

    auto* gen = app.add_subcommand("gen", "generate a seeded random corpus");
    gen->add_option("--seed", seed);
    gen->add_option("--terms", terms);
    gen->add_option("--max-size", max_size);
    gen->add_option("--symbols", symbols);
    gen->add_option("--macros", macros);
    gen->add_flag("--allow-unary", allow_unary);
    gen->add_flag("--no-unordered", no_unordered);
    gen->add_option("--output,-o", output);

    auto* owl_import = app.add_subcommand("owl-import", "ingest a functional-syntax ontology");
    owl_import->add_option("--input,-i", input)->required();
    owl_import->add_flag("--lenient-owl", lenient);
    owl_import->add_option("--problem,-p", problem, "emit the problem-1/2 or problem-3 corpus");
    owl_import->add_option("--output,-o", output);
    owl_import->add_option("--report", report_path, "import report JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        if (minimize->parsed())
            return cmd_minimize(problem, input, kind, output, stats, infer, lenient, no_prune,
                                dot, jobs);
        if (verify->parsed()) return cmd_verify(encoding_path, source_path, stats);
        if (expand->parsed()) return cmd_expand(input, output);
        if (oracle->parsed())
            return cmd_oracle(problem, input, max_states, max_seconds, p3_max_macros);
        if (gen->parsed())
            return cmd_gen(seed, terms, max_size, symbols, macros, allow_unary, no_unordered,
                           output);
        if (owl_import->parsed())
            return cmd_owl_import(input, lenient, problem, output, report_path);
    } catch (const macmin::Error& e) {
        nlohmann::ordered_json j;
        j["error"] = macmin::to_string(e.kind());
        j["message"] = e.what();
        std::cerr << j.dump() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        nlohmann::ordered_json j;
        j["error"] = "InternalError";
        j["message"] = e.what();
        std::cerr << j.dump() << "\n";
        return 1;
    }
    return 0;
}

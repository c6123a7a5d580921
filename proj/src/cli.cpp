#include "csmgen/cli.hpp"

#include "csmgen/analyzer.hpp"
#include "csmgen/checker.hpp"
#include "csmgen/expander.hpp"
#include "csmgen/exporters.hpp"
#include "csmgen/parser.hpp"
#include "csmgen/stdlib.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

namespace csm {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Diagnostics were found and already reported.
struct Reported {};

struct Options {
    std::vector<std::string> files;
    std::vector<std::string> libs;
    std::string module;
    std::vector<std::string> binds;
    std::string instance;
    std::string signals;
    std::string format = "flat";
    std::string output;
    std::string system;
    std::string trace;
    int depth = 0;
    std::size_t budget = default_node_budget;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageError("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string extension(const std::string& path) {
    return std::filesystem::path(path).extension().string();
}

class Session {
public:
    Session(const Options& opt, std::ostream& out, std::ostream& err) : opt_(opt), out_(out), err_(err) {}

    int check() {
        bool failed = false;
        for (const auto& file : opt_.files) {
            Diagnostics diags;
            std::string text = read_file(file);
            auto ext = extension(file);
            if (ext == ".csms") {
                auto parsed = parse_system(text);
                diags = parsed.diagnostics;
                if (parsed.ok()) {
                    auto library = user_library(diags);
                    try {
                        auto sys = expand_system(parsed.system, library);
                        append(diags, sys.warnings);
                    } catch (const DiagnosticError& e) {
                        append(diags, e.diagnostics());
                    }
                }
            } else if (ext == ".csmf") {
                auto parsed = parse_flat(text);
                diags = parsed.diagnostics;
                if (parsed.ok()) {
                    try {
                        flat_to_system(parsed.flat);
                    } catch (const DiagnosticError& e) {
                        append(diags, e.diagnostics());
                    }
                }
            } else {
                auto parsed = parse_library(text);
                diags = parsed.diagnostics;
                for (const auto& m : parsed.modules)
                    append(diags, check_module(m));
            }
            for (const auto& d : diags)
                out_ << d.render(file) << "\n";
            failed = failed || has_errors(diags);
        }
        return failed ? 1 : 0;
    }

    int expand() {
        auto sys = target();
        std::string text;
        if (opt_.format == "flat")
            text = emit_flat(sys);
        else
            text = sys.automata.size() == 1 ? emit_dot(sys.automata.front()) : emit_dot(sys);
        if (opt_.output.empty()) {
            out_ << text;
        } else {
            std::ofstream f(opt_.output, std::ios::binary);
            if (!f)
                throw UsageError("cannot write file '" + opt_.output + "'");
            f << text;
        }
        return 0;
    }

    int simulate() {
        auto sys = target();
        auto trace = read_trace(opt_.trace);
        std::vector<StepResult> steps;
        try {
            steps = csm::simulate(sys, trace);
        } catch (const DiagnosticError& e) {
            report(opt_.trace, e.diagnostics());
            throw Reported{};
        }
        out_ << "INIT " << render_system_state(initial_state(sys)) << "\n";
        for (std::size_t i = 0; i < steps.size(); ++i)
            out_ << "STEP " << i + 1 << " " << render_valuation(trace[i]) << " "
                 << render_system_state(steps[i].next) << " " << render_valuation(steps[i].emitted) << "\n";
        return 0;
    }

    int explore() {
        auto sys = target();
        try {
            out_ << render_reach_graph(csm::explore(sys, sys.externals, opt_.depth, opt_.budget));
        } catch (const DiagnosticError& e) {
            report(source_name(), e.diagnostics());
            throw Reported{};
        }
        return 0;
    }

    int determinism() {
        auto sys = target();
        bool overlaps = false;
        for (const auto& a : sys.automata) {
            OverlapReport report;
            try {
                report = check_determinism(a);
            } catch (const DiagnosticError& e) {
                for (const auto& d : e.diagnostics())
                    out_ << d.render(source_name()) << "\n";
                overlaps = true;
                continue;
            }
            if (report.empty()) {
                out_ << a.name << ": deterministic\n";
                continue;
            }
            overlaps = true;
            for (const auto& o : report) {
                const auto& t1 = a.transitions[o.first];
                const auto& t2 = a.transitions[o.second];
                out_ << a.name << ": overlap at " << o.state << " between " << t1.source << " --{ "
                     << t1.guard.str() << " }--> " << t1.target << " and " << t2.source << " --{ "
                     << t2.guard.str() << " }--> " << t2.target << " witness " << render_valuation(o.witness)
                     << "\n";
            }
        }
        return overlaps ? 1 : 0;
    }

private:
    static void append(Diagnostics& to, const Diagnostics& from) { to.insert(to.end(), from.begin(), from.end()); }

    void report(const std::string& file, const Diagnostics& diags) {
        for (const auto& d : diags)
            err_ << d.render(file) << "\n";
    }

    std::string source_name() const {
        if (!opt_.system.empty())
            return opt_.system;
        return opt_.files.empty() ? "<builtin>" : opt_.files.front();
    }

    std::vector<ModuleAst> parse_modules(const std::string& file) {
        auto parsed = parse_library(read_file(file));
        if (!parsed.ok()) {
            report(file, parsed.diagnostics);
            throw Reported{};
        }
        return parsed.modules;
    }

    // User modules first so they shadow builtins of the same name.
    std::vector<ModuleAst> user_library(Diagnostics&) {
        std::vector<ModuleAst> library;
        for (const auto& file : opt_.libs)
            for (auto& m : parse_modules(file))
                library.push_back(std::move(m));
        for (auto& m : builtin_library())
            library.push_back(std::move(m));
        return library;
    }

    IndexEnv bindings() const {
        IndexEnv env;
        for (const auto& b : opt_.binds) {
            auto eq = b.find('=');
            std::string name = b.substr(0, eq);
            std::string value = eq == std::string::npos ? "" : b.substr(eq + 1);
            bool numeric = !value.empty() && std::all_of(value.begin(), value.end(), ::isdigit) &&
                           value.size() < 18;
            if (eq == std::string::npos || !is_identifier(name) || !numeric)
                throw UsageError("--bind expects NAME=INTEGER, got '" + b + "'");
            env[name] = std::stoll(value);
        }
        return env;
    }

    std::vector<std::string> signal_list() const {
        std::vector<std::string> out;
        std::stringstream ss(opt_.signals);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item.erase(0, item.find_first_not_of(" \t"));
            item.erase(item.find_last_not_of(" \t") + 1);
            out.push_back(item);
        }
        return out;
    }

    SystemConfig target() {
        if (!opt_.system.empty())
            return system_target();
        if (opt_.module.empty()) {
            if (opt_.files.size() == 1 && extension(opt_.files.front()) == ".csmf")
                return flat_target(opt_.files.front());
            throw UsageError("--module or --system is required");
        }
        if (opt_.files.size() > 1)
            throw UsageError("expected at most one library file");
        auto numeric = bindings();
        std::vector<ModuleAst> library;
        if (!opt_.files.empty())
            library = parse_modules(opt_.files.front());
        const ModuleAst* m = find_module(library, opt_.module);
        std::string file = opt_.files.empty() ? "<builtin>" : opt_.files.front();
        if (!m) {
            try {
                library.push_back(load_builtin(opt_.module));
            } catch (const DiagnosticError&) {
                throw UsageError("--module: no module named '" + opt_.module + "'");
            }
            m = &library.back();
            file = "<builtin>";
        }
        auto diags = check_module(*m);
        if (has_errors(diags)) {
            report(file, diags);
            throw Reported{};
        }
        try {
            auto sys = expand_module(*m, numeric, opt_.instance, signal_list());
            report(file, sys.warnings);
            return sys;
        } catch (const DiagnosticError& e) {
            report(file, e.diagnostics());
            throw Reported{};
        }
    }

    SystemConfig system_target() {
        auto parsed = parse_system(read_file(opt_.system));
        if (!parsed.ok()) {
            report(opt_.system, parsed.diagnostics);
            throw Reported{};
        }
        Diagnostics unused;
        auto library = user_library(unused);
        for (const auto& file : opt_.files)
            for (auto& m : parse_modules(file))
                library.insert(library.begin(), std::move(m));
        try {
            auto sys = expand_system(parsed.system, library);
            report(opt_.system, sys.warnings);
            return sys;
        } catch (const DiagnosticError& e) {
            report(opt_.system, e.diagnostics());
            throw Reported{};
        }
    }

    SystemConfig flat_target(const std::string& file) {
        auto parsed = parse_flat(read_file(file));
        if (!parsed.ok()) {
            report(file, parsed.diagnostics);
            throw Reported{};
        }
        try {
            return flat_to_system(parsed.flat);
        } catch (const DiagnosticError& e) {
            report(file, e.diagnostics());
            throw Reported{};
        }
    }

    std::vector<Valuation> read_trace(const std::string& file) {
        std::vector<Valuation> trace;
        std::istringstream in(read_file(file));
        std::string line;
        Diagnostics diags;
        for (int line_no = 1; std::getline(in, line); ++line_no) {
            Valuation v;
            std::stringstream ss(line);
            std::string item;
            while (std::getline(ss, item, ',')) {
                auto first = item.find_first_not_of(" \t\r");
                if (first == std::string::npos)
                    continue;
                item = item.substr(first, item.find_last_not_of(" \t\r") - first + 1);
                if (auto id = parse_signal_id(item))
                    v.insert(*id);
                else
                    diags.push_back(make_error(codes::parse, "malformed signal '" + item + "' in trace",
                                               {line_no, 1}, item));
            }
            trace.push_back(std::move(v));
        }
        if (!diags.empty()) {
            report(file, diags);
            throw Reported{};
        }
        return trace;
    }

    const Options& opt_;
    std::ostream& out_;
    std::ostream& err_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options opt;
    CLI::App app{"Macro-generation compiler and analyzer for concurrent state machine modules", "csmgen"};
    app.require_subcommand(1);

    auto add_target = [&](CLI::App* sub, bool with_format) {
        sub->add_option("file", opt.files, "Module library (.csml) or flat listing (.csmf)");
        sub->add_option("--module", opt.module, "Module to expand");
        sub->add_option("--bind", opt.binds, "Module parameter binding NAME=INTEGER (repeatable)");
        sub->add_option("--as", opt.instance, "Instance name");
        sub->add_option("--signals", opt.signals, "Comma-separated actual signals");
        sub->add_option("--system", opt.system, "System file (.csms)");
        sub->add_option("--lib", opt.libs, "Additional module library (repeatable)");
        if (with_format) {
            sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"flat", "dot"}));
            sub->add_option("-o,--output", opt.output, "Output path");
        }
    };

    auto* check = app.add_subcommand("check", "Parse and check library, system or flat files");
    check->add_option("files", opt.files, "Files to check")->required();
    check->add_option("--lib", opt.libs, "Additional module library (repeatable)");

    auto* expand = app.add_subcommand("expand", "Expand a module or system");
    add_target(expand, true);

    auto* dot = app.add_subcommand("dot", "Export a module or system as a DOT graph");
    add_target(dot, false);
    dot->add_option("-o,--output", opt.output, "Output path");

    auto* simulate = app.add_subcommand("simulate", "Run a deterministic simulation over a trace");
    add_target(simulate, false);
    simulate->add_option("--trace", opt.trace, "Trace file")->required();

    auto* explore = app.add_subcommand("explore", "Bounded breadth-first exploration");
    add_target(explore, false);
    explore->add_option("--depth", opt.depth, "Depth bound")->required()->check(CLI::NonNegativeNumber);
    explore->add_option("--budget", opt.budget, "Node budget")->check(CLI::PositiveNumber);

    auto* determinism = app.add_subcommand("determinism", "Report overlapping guards");
    add_target(determinism, false);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "csmgen: " << e.what() << "\n";
        return 2;
    }

    Session session(opt, out, err);
    try {
        if (*check)
            return session.check();
        if (*dot) {
            opt.format = "dot";
            return session.expand();
        }
        if (*expand)
            return session.expand();
        if (*simulate)
            return session.simulate();
        if (*explore)
            return session.explore();
        if (*determinism)
            return session.determinism();
    } catch (const UsageError& e) {
        err << "csmgen: " << e.what() << "\n";
        return 2;
    } catch (const Reported&) {
        return 1;
    } catch (const DiagnosticError& e) {
        for (const auto& d : e.diagnostics())
            err << d.render("<input>") << "\n";
        return 1;
    }
    return 2;
}

}  // namespace csm

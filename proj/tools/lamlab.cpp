#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "lamspace/bench.hpp"
#include "lamspace/readback.hpp"

using namespace lamspace;

namespace {

enum Exit : int { Ok = 0, Failed = 1, BadInput = 2, OutOfFuel = 3, Invariant = 4, Disagreement = 5 };

struct TermSource {
    std::string expr;
    std::string file;
};

void add_source(CLI::App* cmd, TermSource& src) {
    auto* g = cmd->add_option_group("term");
    g->add_option("--expr", src.expr, "term text; library combinators may be used by name");
    g->add_option("--file", src.file, "file holding the term text");
    g->require_option(1);
}

Term load_term(const TermSource& src) {
    std::string text = src.expr;
    if (!src.file.empty()) {
        std::ifstream f(src.file);
        if (!f) throw std::invalid_argument("cannot open " + src.file);
        std::stringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }
    return library().parse(text);
}

void print_profile(const RunProfile& p) {
    std::cout << "machine: " << p.machine << '\n';
    std::cout << "beta_steps: " << p.beta_steps << '\n';
    std::cout << "transitions: " << p.transitions << '\n';
    std::cout << "max_bit_space: " << p.max_bit_space << '\n';
    if (p.has_abstract_space) std::cout << "max_abstract_space: " << p.max_abstract_space << '\n';
    std::cout << "heap_cells: " << p.max_heap_cells << '\n';
}

int cmd_eval(const std::string& machine, const TermSource& src, std::uint64_t fuel, bool trace,
             const std::string& csv) {
    MachineKind mk = parse_machine(machine);
    Term t = load_term(src);
    RunOptions opt;
    opt.trace = trace;
    RunProfile p = run(mk, t, fuel, opt);
    for (const auto& l : p.trace)
        std::cout << l.step << ' ' << transition_name(l.kind) << ' ' << l.bit_space << ' ' << l.abstract_space << ' '
                  << l.heap_cells << '\n';
    if (p.completed) std::cout << "result: " << render(*p.result) << '\n';
    else std::cout << "result: normal form not reached within " << fuel << " transitions\n";
    print_profile(p);
    if (!csv.empty()) {
        std::ofstream o(csv);
        if (!o) throw std::runtime_error("cannot write " + csv);
        write_csv(o, {ExperimentRow{"eval", p.machine, 0, p.beta_steps, p.transitions, p.max_bit_space,
                                    p.max_abstract_space, p.max_heap_cells, p.completed}});
    }
    return p.completed ? Ok : OutOfFuel;
}

int cmd_experiment(const std::string& kind, std::uint64_t min, std::uint64_t max, std::uint64_t step,
                   const std::vector<std::string>& machines, std::uint64_t fuel, const std::string& csv) {
    ExperimentSpec spec;
    spec.kind = parse_experiment(kind);
    spec.min = min;
    spec.max = max;
    spec.step = step;
    spec.fuel = fuel;
    for (const auto& m : machines) spec.machines.push_back(parse_machine(m));
    ExperimentReport rep = run_experiment(spec);
    std::ofstream o(csv);
    if (!o) throw std::runtime_error("cannot write " + csv);
    write_csv(o, rep.rows);
    std::size_t incomplete = 0;
    for (const auto& r : rep.rows) incomplete += r.completed ? 0 : 1;
    std::cout << rep.rows.size() << " rows written to " << csv;
    if (incomplete) std::cout << " (" << incomplete << " out of fuel)";
    std::cout << '\n';
    for (const auto& v : rep.verdicts)
        std::cout << (v.ok() ? "ok   " : "FAIL ") << v.experiment << ' ' << machine_name(v.machine) << ' '
                  << metric_name(v.metric) << ": " << growth_name(v.growth) << " (expected "
                  << growth_name(v.expected) << ")\n";
    return rep.ok() ? Ok : Failed;
}

int cmd_tm(const std::string& desc, const std::string& input, const std::string& via, std::uint64_t fuel) {
    if (via != "direct" && via != "space-kam" && via != "both") throw std::invalid_argument("--via must be direct, space-kam or both");
    TMDesc m = load_tm(desc);
    initial_config(m, input);  // validates the input alphabet

    std::optional<bool> direct;
    bool direct_stuck = false;
    if (via != "space-kam") {
        TMOutcome out = simulate_tm(m, input, fuel);
        if (auto* r = std::get_if<TMResult>(&out)) {
            direct = r->accept;
            std::cout << "direct: " << (r->accept ? "accept" : "reject") << " steps " << r->steps << " work_cells "
                      << r->work_cells << '\n';
        } else if (auto* s = std::get_if<TMStuck>(&out)) {
            direct_stuck = true;
            std::cout << "direct: stuck after " << s->steps << " steps (no transition)\n";
        } else {
            std::cout << "direct: out of fuel\n";
            if (via == "direct") return OutOfFuel;
        }
    }
    if (via == "direct") return direct ? Ok : OutOfFuel;

    RunOptions opt;
    RunProfile p = run(MachineKind::Space, encode_run(m, input), fuel, opt);
    std::optional<bool> encoded;
    if (p.completed) {
        if (term_equal(*p.result, church_true())) encoded = true;
        else if (term_equal(*p.result, church_false())) encoded = false;
    }
    if (p.completed && !encoded) {
        std::cout << "space-kam: unexpected result " << render(*p.result) << '\n';
        return Disagreement;
    }
    if (encoded)
        std::cout << "space-kam: " << (*encoded ? "accept" : "reject") << " beta_steps " << p.beta_steps
                  << " max_bit_space " << p.max_bit_space << " max_abstract_space " << p.max_abstract_space << '\n';
    else std::cout << "space-kam: no result within " << fuel << " transitions\n";

    if (via == "both") {
        if (direct && encoded && *direct != *encoded) {
            std::cout << "disagreement between the direct run and the encoding\n";
            return Disagreement;
        }
        if ((direct_stuck || !direct) && encoded) {
            std::cout << "disagreement: the encoding halted where the machine does not\n";
            return Disagreement;
        }
        if (direct && encoded) std::cout << "agree: " << (*direct ? "accept" : "reject") << '\n';
    }
    return encoded ? Ok : OutOfFuel;
}

int cmd_addr(const TermSource& src, const std::string& address, std::uint64_t fuel) {
    Term t = load_term(src);
    if (!is_closed(t)) throw std::invalid_argument("the term must be closed");
    TreeAddress a = parse_address(address);
    SpaceKam m(compile(t));
    RunOptions opt;
    opt.decode = false;
    auto out = drive(m, m.initial(), fuel, opt);
    if (!out.profile.completed) {
        std::cout << "no final state within " << fuel << " transitions\n";
        return OutOfFuel;
    }
    std::cout << to_string(constructor_at(m.code(), out.state, a)) << '\n';
    return Ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lamlab: space and time of abstract machines for the lambda-calculus"};
    app.require_subcommand(1);

    std::string machine = "space", csv, kind, desc, input, via = "both", address;
    TermSource src;
    std::uint64_t fuel = 1'000'000, min = 2, max = 8, step = 1;
    bool trace = false;
    std::vector<std::string> machines;

    auto* eval = app.add_subcommand("eval", "run a term on one machine");
    eval->add_option("--machine", machine, "naive, space, time or lam")->capture_default_str();
    add_source(eval, src);
    eval->add_option("--fuel", fuel, "maximum number of transitions")->required();
    eval->add_flag("--trace", trace, "print one line per transition");
    eval->add_option("--csv", csv, "write the profile as a CSV row");

    auto* exp = app.add_subcommand("experiment", "measure a family of terms and classify the growth");
    exp->add_option("kind", kind, "toy, locpy, glcpy, eta, counter or tm")->required();
    exp->add_option("--min", min)->required();
    exp->add_option("--max", max)->required();
    exp->add_option("--step", step)->capture_default_str();
    exp->add_option("--machine", machines, "machines to run (repeatable, comma separated)")->delimiter(',');
    exp->add_option("--fuel", fuel)->required();
    exp->add_option("--csv", csv, "output path")->required();

    auto* tm = app.add_subcommand("tm", "run a Turing machine directly and through its encoding");
    tm->add_option("--desc", desc, "machine description file")->required();
    tm->add_option("--input", input, "input over {0,1}")->required();
    tm->add_option("--via", via, "direct, space-kam or both")->capture_default_str();
    tm->add_option("--fuel", fuel)->required();

    auto* addr = app.add_subcommand("addr", "label of the final result at a tree address");
    add_source(addr, src);
    addr->add_option("--address", address, "bit string, empty for the root")->required();
    addr->add_option("--fuel", fuel)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? Ok : BadInput;
    }

    try {
        if (*eval) return cmd_eval(machine, src, fuel, trace, csv);
        if (*exp) return cmd_experiment(kind, min, max, step, machines, fuel, csv);
        if (*tm) return cmd_tm(desc, input, via, fuel);
        if (*addr) return cmd_addr(src, address, fuel);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return BadInput;
    } catch (const TMParseError& e) {
        std::cerr << "machine description error: " << e.what() << '\n';
        return BadInput;
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return Invariant;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return BadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return Failed;
    }
    return Ok;
}

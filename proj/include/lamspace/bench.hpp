#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <ostream>
#include <sstream>

#include "encodings.hpp"
#include "growth.hpp"
#include "machines.hpp"
#include "tm.hpp"

namespace lamspace {

enum class ExperimentKind : std::uint8_t { Toy, LoCpy, GlCpy, Eta, Counter, Tm };

inline std::string_view experiment_name(ExperimentKind k) {
    switch (k) {
    case ExperimentKind::Toy: return "toy";
    case ExperimentKind::LoCpy: return "locpy";
    case ExperimentKind::GlCpy: return "glcpy";
    case ExperimentKind::Eta: return "eta";
    case ExperimentKind::Counter: return "counter";
    case ExperimentKind::Tm: return "tm";
    }
    return "?";
}

inline ExperimentKind parse_experiment(std::string_view s) {
    for (auto k : {ExperimentKind::Toy, ExperimentKind::LoCpy, ExperimentKind::GlCpy, ExperimentKind::Eta,
                   ExperimentKind::Counter, ExperimentKind::Tm})
        if (experiment_name(k) == s) return k;
    throw std::invalid_argument("unknown experiment '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// the families measured by the experiments

// Thue-Morse prefix: deterministic and not periodic
inline std::string sample_string(std::size_t n) {
    std::string s;
    for (std::size_t k = 0; k < n; ++k) s += (std::popcount(k) % 2) ? '1' : '0';
    return s;
}

// C0[C1[...Cn[\y. I]...]] I with C0 = \x0. [.](x0 x0) and Ck = \xk. [.](x0 .. xk)
inline Term counter_term(std::uint32_t n) {
    auto args = [](std::uint32_t k) {
        // x0 .. xk seen from inside \xk, where xj has index k - j + 1
        if (k == 0) return app(var(1), var(1));
        Term t = var(k + 1);
        for (std::uint32_t j = 1; j <= k; ++j) t = app(t, var(k - j + 1));
        return t;
    };
    Term t = lam(lam(var(1), "x"), "y");
    for (std::uint32_t k = n + 1; k-- > 0;) t = lam(app(t, args(k)), "x" + std::to_string(k));
    return app(t, identity());
}

// Corpus terms that need an argument: abstractions whose application to I
// terminates after at least one beta step.
inline const std::vector<Term>& eta_bases() {
    static const std::vector<Term> bases = [] {
        std::vector<Term> out;
        for (std::uint64_t seed = 1; out.size() < 5; ++seed) {
            Term t = generate_closed_term(seed, 24);
            if (t->kind != Kind::Lam) continue;
            try {
                auto r = reference_whnf(app(t, identity()), 2000);
                if (r.steps >= 2) out.push_back(t);
            } catch (const FuelExhausted&) {
            }
        }
        return out;
    }();
    return bases;
}

// eta^n(t) in the context [.] I
inline Term eta_instance(std::size_t base, std::uint32_t n) { return app(eta_expand(eta_bases().at(base), n), identity()); }

inline const TMDesc& builtin_parity_tm() {
    static const TMDesc m = parse_tm(R"(states: q0 qT qF
init: q0
accept: qT
reject: qF
t: q0 L _ -> q0 _ R S
t: q0 0 _ -> q0 _ R S
t: q0 0 0 -> q0 0 R S
t: q0 0 1 -> q0 1 R S
t: q0 1 _ -> q0 1 R S
t: q0 1 0 -> q0 1 R S
t: q0 1 1 -> q0 0 R S
t: q0 R _ -> qT _ S S
t: q0 R 0 -> qT 0 S S
t: q0 R 1 -> qF 1 S S
)");
    return m;
}

// ---------------------------------------------------------------------------
// runs and rows

struct ExperimentRow {
    std::string experiment;
    std::string machine;
    std::uint64_t n = 0;
    std::uint64_t beta_steps = 0;
    std::uint64_t transitions = 0;
    std::uint64_t max_bit_space = 0;
    std::uint64_t max_abstract_space = 0;
    std::uint64_t heap_cells = 0;
    bool completed = false;
};

inline constexpr std::string_view csv_header =
    "experiment,machine,n,beta_steps,transitions,max_bit_space,max_abstract_space,heap_cells,completed";

inline std::string csv_line(const ExperimentRow& r) {
    std::ostringstream o;
    o << r.experiment << ',' << r.machine << ',' << r.n << ',' << r.beta_steps << ',' << r.transitions << ','
      << r.max_bit_space << ',' << r.max_abstract_space << ',' << r.heap_cells << ',' << (r.completed ? 1 : 0);
    return o.str();
}

enum class Metric : std::uint8_t { Bits, Abstract, Heap };

inline std::string_view metric_name(Metric m) {
    switch (m) {
    case Metric::Bits: return "max_bit_space";
    case Metric::Abstract: return "max_abstract_space";
    case Metric::Heap: return "heap_cells";
    }
    return "?";
}

inline double metric_value(const ExperimentRow& r, Metric m) {
    switch (m) {
    case Metric::Bits: return static_cast<double>(r.max_bit_space);
    case Metric::Abstract: return static_cast<double>(r.max_abstract_space);
    case Metric::Heap: return static_cast<double>(r.heap_cells);
    }
    return 0;
}

struct Expectation {
    MachineKind machine;
    Metric metric;
    Growth growth;
};

inline std::vector<Expectation> expectations(ExperimentKind k) {
    using M = MachineKind;
    switch (k) {
    case ExperimentKind::Toy:
        return {{M::Naive, Metric::Bits, Growth::Exponential},
                {M::Space, Metric::Bits, Growth::Logarithmic},
                {M::Space, Metric::Abstract, Growth::Constant}};
    case ExperimentKind::LoCpy: return {{M::Space, Metric::Bits, Growth::Linear}};
    case ExperimentKind::GlCpy:
        return {{M::Space, Metric::Bits, Growth::Logarithmic}, {M::Space, Metric::Abstract, Growth::Constant}};
    case ExperimentKind::Eta: return {{M::Space, Metric::Abstract, Growth::Constant}};
    case ExperimentKind::Counter:
        return {{M::Space, Metric::Bits, Growth::Exponential}, {M::Time, Metric::Heap, Growth::Linear}};
    case ExperimentKind::Tm: return {{M::Space, Metric::Bits, Growth::Logarithmic}};
    }
    return {};
}

inline std::vector<MachineKind> default_machines(ExperimentKind k) {
    switch (k) {
    case ExperimentKind::Toy: return {MachineKind::Naive, MachineKind::Space};
    case ExperimentKind::Counter: return {MachineKind::Space, MachineKind::Time};
    default: return {MachineKind::Space};
    }
}

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::Toy;
    std::uint64_t min = 2;
    std::uint64_t max = 8;
    std::uint64_t step = 1;
    std::vector<MachineKind> machines;  // empty: the experiment's defaults
    std::uint64_t fuel = 10'000'000;
};

// the series measured by one experiment; eta has one per base term
inline std::vector<std::string> experiment_series(ExperimentKind k) {
    if (k != ExperimentKind::Eta) return {std::string(experiment_name(k))};
    std::vector<std::string> out;
    for (std::size_t b = 0; b < eta_bases().size(); ++b) out.push_back("eta-" + std::to_string(b + 1));
    return out;
}

inline Term experiment_term(ExperimentKind k, std::size_t series, std::uint64_t n) {
    const auto& B = bool_alphabet();
    switch (k) {
    case ExperimentKind::Toy: return app(scroller(ScrollerKind::Toy), scott_string(B, sample_string(n)));
    case ExperimentKind::LoCpy: return app(scroller(ScrollerKind::LoCpy), scott_string(B, sample_string(n)));
    case ExperimentKind::GlCpy: return app(scroller(ScrollerKind::GlCpy), scott_string(B, sample_string(n)));
    case ExperimentKind::Eta: return eta_instance(series, static_cast<std::uint32_t>(n));
    case ExperimentKind::Counter: return counter_term(static_cast<std::uint32_t>(n));
    case ExperimentKind::Tm: return encode_run(builtin_parity_tm(), sample_string(n));
    }
    throw std::invalid_argument("unknown experiment");
}

inline ExperimentRow measure(const std::string& experiment, MachineKind mk, std::uint64_t n, const Term& t,
                             std::uint64_t fuel) {
    RunOptions opt;
    opt.decode = false;
    RunProfile p = run(mk, t, fuel, opt);
    return {experiment,    std::string(machine_name(mk)), n, p.beta_steps, p.transitions, p.max_bit_space,
            p.max_abstract_space, p.max_heap_cells, p.completed};
}

struct SeriesVerdict {
    std::string experiment;
    MachineKind machine;
    Metric metric;
    Growth growth;
    Growth expected;
    bool ok() const { return growth == expected; }
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;  // ordered by series, machine, n
    std::vector<SeriesVerdict> verdicts;
    bool ok() const {
        return std::all_of(verdicts.begin(), verdicts.end(), [](const SeriesVerdict& v) { return v.ok(); });
    }
};

inline std::vector<GrowthPoint> series_points(const std::vector<ExperimentRow>& rows, const std::string& experiment,
                                              std::string_view machine, Metric m) {
    std::vector<GrowthPoint> pts;
    for (const auto& r : rows)
        if (r.experiment == experiment && r.machine == machine && r.completed) pts.push_back({r.n, metric_value(r, m)});
    return pts;
}

// Points run in parallel; rows are assembled in parameter order afterwards.
// Invariant violations propagate to the caller.
inline ExperimentReport run_experiment(const ExperimentSpec& spec) {
    if (spec.min > spec.max || spec.step == 0) throw std::invalid_argument("experiment range needs min <= max and step >= 1");
    auto machines = spec.machines.empty() ? default_machines(spec.kind) : spec.machines;
    auto series = experiment_series(spec.kind);

    struct Job {
        std::size_t series;
        MachineKind machine;
        std::uint64_t n;
    };
    std::vector<Job> jobs;
    for (std::size_t s = 0; s < series.size(); ++s)
        for (MachineKind mk : machines)
            for (std::uint64_t n = spec.min; n <= spec.max; n += spec.step) jobs.push_back({s, mk, n});

    ExperimentReport rep;
    rep.rows.resize(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_lock;
    auto worker = [&] {
        for (std::size_t k; (k = next++) < jobs.size();) {
            const Job& j = jobs[k];
            try {
                rep.rows[k] = measure(series[j.series], j.machine, j.n, experiment_term(spec.kind, j.series, j.n), spec.fuel);
            } catch (...) {
                std::lock_guard g(failure_lock);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    unsigned width = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 8));
    for (unsigned w = 0; w < width; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    for (const auto& name : series)
        for (const auto& e : expectations(spec.kind)) {
            if (std::find(machines.begin(), machines.end(), e.machine) == machines.end()) continue;
            auto pts = series_points(rep.rows, name, machine_name(e.machine), e.metric);
            rep.verdicts.push_back({name, e.machine, e.metric, growth_classify(pts), e.growth});
        }
    return rep;
}

inline void write_csv(std::ostream& o, const std::vector<ExperimentRow>& rows) {
    o << csv_header << '\n';
    for (const auto& r : rows) o << csv_line(r) << '\n';
}

}  // namespace lamspace

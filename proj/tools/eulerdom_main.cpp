#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eulerdom/convergence.hpp"
#include "eulerdom/problems.hpp"

namespace ed = eulerdom;

namespace {

struct RunOutcome {
    int depth = 0;
    ed::Method method = ed::Method::E2;
    ed::SolutionEnclosure sol;
    ed::StepTrace trace;
    double wall_ms = 0.0;
};

long default_bits_from_env() {
    const char* env = std::getenv("EULERDOM_BITS");
    if (!env || !*env) return 128;
    char* end = nullptr;
    long bits = std::strtol(env, &end, 10);
    if (!end || *end != '\0' || bits < 16)
        throw ed::ConfigError("EULERDOM_BITS must be an integer >= 16");
    return bits;
}

ed::ProblemSpec load_problem(const std::string& ivp) {
    if (ed::is_builtin_problem(ivp)) return ed::builtin_problem(ivp);
    std::ifstream in(ivp);
    if (!in) throw ed::ConfigError("cannot open problem file '" + ivp + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    std::string id = ivp;
    if (auto slash = id.find_last_of('/'); slash != std::string::npos) id = id.substr(slash + 1);
    if (auto dot = id.find_last_of('.'); dot != std::string::npos) id = id.substr(0, dot);
    return ed::problem_from_json(buf.str(), id);
}

RunOutcome run_once(const ed::ProblemSpec& spec, const ed::FieldExtension& ext, ed::Method m,
                    int depth, ed::Precision p) {
    ed::Partition q = ed::Partition::equidistant(spec.a, depth);
    auto t0 = std::chrono::steady_clock::now();
    auto [sol, trace] = ed::solve(m, spec, ext, q, p);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return RunOutcome{depth, m, std::move(sol), std::move(trace), ms};
}

std::string bound_column(ed::Method m, const ed::ConvergenceReport& report) {
    switch (m) {
        case ed::Method::E2: return report.bound_e2.sci_str();
        case ed::Method::E1: return report.bound_e1.sci_str();
        case ed::Method::RK: return "inf";  // no closed-form width bound is emitted for rk
    }
    return "inf";
}

nlohmann::json box_json(const ed::Box& b) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& c : b)
        out.push_back({ed::decimal_from_mpfr(c.lo()), ed::decimal_from_mpfr(c.hi())});
    return out;
}

std::string wall_str(double ms) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", ms);
    return buf;
}

int cmd_solve(const std::string& ivp, const std::string& method, int depth, long bits,
              const std::string& out_path) {
    ed::Precision p(bits);
    ed::ProblemSpec spec = load_problem(ivp);
    ed::Method m = ed::method_from_name(method);
    ed::FieldExtension ext = ed::make_extension(spec);
    RunOutcome run = run_once(spec, ext, m, depth, p);
    ed::ConvergenceReport report =
        ed::analyze_run(spec, run.sol.partition, run.trace, ed::enclosure_width(run.sol, p), p);

    nlohmann::json j;
    j["ivp"] = spec.id;
    j["method"] = ed::method_name(m);
    j["depth"] = depth;
    j["precision_bits"] = bits;
    j["n"] = spec.n;
    j["a"] = spec.a.get_str();
    j["K"] = run.sol.K.get_str();
    j["M"] = spec.M.get_str();
    j["M1"] = spec.M1.get_str();
    if (spec.M2) j["M2"] = spec.M2->get_str();
    j["width"] = report.measured_width.sci_str();
    j["wall_ms"] = run.wall_ms;
    j["bound"] = bound_column(m, report);
    j["order"] = nullptr;  // single run: no depth sweep to estimate from
    j["partition"] = nlohmann::json::array();
    for (const auto& q : run.sol.partition.points) j["partition"].push_back(q.get_str());
    j["segments"] = nlohmann::json::array();
    for (const auto& seg : run.sol.segments) {
        nlohmann::json s;
        s["q"] = seg.q.get_str();
        s["value"] = box_json(seg.value);
        s["c1"] = box_json(seg.c1);
        s["c2"] = box_json(seg.c2);
        s["c3"] = {ed::decimal_from_mpfr(seg.c3.lo()), ed::decimal_from_mpfr(seg.c3.hi())};
        j["segments"].push_back(std::move(s));
    }
    j["widths"] = nlohmann::json::array();
    auto profile = ed::width_profile(run.sol, p);
    for (const auto& [t, w] : profile) j["widths"].push_back(w.sci_str());
    j["knots"] = nlohmann::json::parse(ed::stepfun_json(ed::knots_stepfun(run.sol, p)));

    std::ofstream jf(out_path);
    if (!jf) throw ed::ConfigError("cannot write '" + out_path + "'");
    jf << j.dump(2) << "\n";

    std::string csv_path = out_path;
    if (csv_path.size() > 5 && csv_path.substr(csv_path.size() - 5) == ".json")
        csv_path = csv_path.substr(0, csv_path.size() - 5) + ".csv";
    else
        csv_path += ".csv";
    std::ofstream cf(csv_path);
    if (!cf) throw ed::ConfigError("cannot write '" + csv_path + "'");
    cf << "t";
    for (std::size_t i = 1; i <= spec.n; ++i) cf << ",lo_" << i << ",hi_" << i;
    cf << "\n";
    for (std::size_t k = 1; k < run.sol.partition.points.size(); ++k) {
        const mpq_class& t = run.sol.partition.points[k];
        ed::Box v = ed::enclosure_eval(run.sol, t, p);
        cf << t.get_str();
        for (const auto& c : v) {
            ed::Real lo(p), hi(p);
            mpfr_set(lo.raw(), c.lo(), MPFR_RNDD);
            mpfr_set(hi.raw(), c.hi(), MPFR_RNDU);
            cf << "," << lo.sci_str() << "," << hi.sci_str();
        }
        cf << "\n";
    }
    std::cerr << "wrote " << out_path << " and " << csv_path << "\n";
    return 0;
}

// Runs every (method, depth) task on a small worker pool and emits rows
// sorted by method order then depth. The order column is the running mean of
// consecutive-depth log2 width ratios within a method, present once three
// widths have accumulated.
int cmd_table(const std::string& ivp, const std::vector<std::string>& methods, int from, int to,
              long bits, const std::string& out_path) {
    if (from > to) throw ed::ConfigError("--from exceeds --to");
    ed::Precision p(bits);
    ed::ProblemSpec spec = load_problem(ivp);
    std::vector<ed::Method> ms;
    for (const auto& name : methods) {
        ed::Method m = ed::method_from_name(name);
        if (m == ed::Method::RK && spec.n != 1)
            throw ed::ConfigError("method rk is inapplicable: problem dimension is " +
                                  std::to_string(spec.n));
        if (m == ed::Method::RK && !spec.M2)
            throw ed::ConfigError("method rk needs the bound M2");
        ms.push_back(m);
    }
    ed::FieldExtension ext = ed::make_extension(spec);

    struct Task {
        ed::Method m;
        int depth;
    };
    std::vector<Task> tasks;
    for (ed::Method m : ms)
        for (int d = from; d <= to; ++d) tasks.push_back({m, d});

    std::vector<std::optional<RunOutcome>> results(tasks.size());
    std::vector<std::exception_ptr> failures(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                results[i] = run_once(spec, ext, tasks[i].m, tasks[i].depth, p);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    unsigned pool = std::max(1u, std::thread::hardware_concurrency());
    pool = std::min<unsigned>(pool, static_cast<unsigned>(tasks.size()));
    std::vector<std::thread> threads;
    for (unsigned i = 0; i < pool; ++i) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);

    std::ostringstream csv;
    csv << "depth,method,ivp,width,wall_ms,bound,order\n";
    std::size_t idx = 0;
    for (ed::Method m : ms) {
        std::vector<std::pair<int, ed::Real>> widths;
        for (int d = from; d <= to; ++d, ++idx) {
            const RunOutcome& run = *results[idx];
            ed::Real w = ed::enclosure_width(run.sol, p);
            ed::ConvergenceReport report = ed::analyze_run(spec, run.sol.partition, run.trace, w, p);
            widths.emplace_back(d, w);
            std::string order;
            if (widths.size() >= 3) {
                bool positive = true;
                for (const auto& [dd, ww] : widths) positive = positive && ww.sign() > 0;
                if (positive) order = ed::empirical_order(widths, p).sci_str();
            }
            csv << d << "," << ed::method_name(m) << "," << spec.id << "," << w.sci_str() << ","
                << wall_str(run.wall_ms) << "," << bound_column(m, report) << "," << order << "\n";
        }
    }

    if (out_path.empty() || out_path == "-") {
        std::cout << csv.str();
    } else {
        std::ofstream out(out_path);
        if (!out) throw ed::ConfigError("cannot write '" + out_path + "'");
        out << csv.str();
        std::cerr << "wrote " << out_path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Validated IVP enclosures: first-order, second-order, and Runge-Kutta "
                 "interval Euler operators over arbitrary-precision interval arithmetic"};
    app.require_subcommand(1);

    std::string ivp, method = "e2";
    std::string solve_out = "run.json", table_out;
    std::vector<std::string> methods;
    int depth = 4, from = 2, to = 10;
    long bits = 0;  // 0 = use EULERDOM_BITS or 128

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--ivp", ivp, "builtin problem id (A|B|C|D) or path to a problem JSON")
            ->required();
        cmd->add_option("--bits", bits, "working precision in bits (>= 16; default from EULERDOM_BITS or 128)");
    };

    CLI::App* solve = app.add_subcommand("solve", "run one enclosure and write run JSON + knots CSV");
    add_common(solve);
    solve->add_option("--method", method, "e1 | e2 | rk")->required();
    solve->add_option("--depth", depth, "bisection depth: 2^depth equal steps")
        ->required()
        ->check(CLI::Range(0, 26));
    solve->add_option("--out", solve_out, "output JSON path (knots CSV lands next to it)");

    CLI::App* sweep = app.add_subcommand("sweep", "run one method over a depth range, emit CSV");
    add_common(sweep);
    sweep->add_option("--method", method, "e1 | e2 | rk")->required();
    sweep->add_option("--from", from, "first depth")->required()->check(CLI::Range(0, 26));
    sweep->add_option("--to", to, "last depth")->required()->check(CLI::Range(0, 26));
    sweep->add_option("--out", table_out, "CSV path ('-' or empty: stdout)");

    CLI::App* compare = app.add_subcommand("compare", "run several methods over a depth range, emit CSV");
    add_common(compare);
    compare->add_option("--methods", methods, "comma-separated subset of e1,e2,rk")
        ->required()
        ->delimiter(',');
    compare->add_option("--from", from, "first depth")->required()->check(CLI::Range(0, 26));
    compare->add_option("--to", to, "last depth")->required()->check(CLI::Range(0, 26));
    compare->add_option("--out", table_out, "CSV path ('-' or empty: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (bits == 0) bits = default_bits_from_env();
        if (solve->parsed()) return cmd_solve(ivp, method, depth, bits, solve_out);
        if (sweep->parsed()) return cmd_table(ivp, {method}, from, to, bits, table_out);
        return cmd_table(ivp, methods, from, to, bits, table_out);
    } catch (const ed::EmptyIntersection& e) {
        std::cerr << "error: truncation produced an empty enclosure (component " << e.component;
        if (e.step != static_cast<std::size_t>(-1)) std::cerr << ", step " << e.step;
        std::cerr << "); the state bound K is too small for the supplied M\n";
        return 2;
    } catch (const ed::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

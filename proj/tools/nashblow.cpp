// Command-line front end. Exit codes: 0 success, 1 failed expectation, 2 input or usage error.
#include <CLI11.hpp>

#include <nashblow/scenario.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace nashblow;

namespace {

struct Options {
    std::string input;
    std::string point;
    std::string curve;
    std::string chart;
    int chart_index = -1;
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool as_json = false;
    bool timing = false;
};

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
}

/// "p/q,p/q,..." as a JSON array of rational strings.
json parse_point_arg(const std::string& text) {
    json out = json::array();
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw InputError("empty coordinate in --point");
        item = item.substr(b, e - b + 1);
        Rational::parse(item);
        out.push_back(item);
    }
    if (out.empty()) throw InputError("--point needs comma-separated rationals");
    return out;
}

int emit(const Report& rep, const Options& o, const std::string& command) {
    if (command == "run-scenario") {
        if (o.as_json)
            std::cout << report_json(rep, o.timing).dump(2) << "\n";
        else
            std::cout << report_text(rep, o.timing);
        return rep.passed() ? 0 : 1;
    }
    const StepResult& st = rep.steps.at(0);
    if (o.as_json) {
        json out = {{"command", command}, {"input", o.input}, {"seed", rep.seed}, {"result", st.detail}};
        if (!st.checks.empty()) out["passed"] = st.passed();
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "command: " << command << "\ninput: " << o.input << "\nseed: " << rep.seed << "\n";
        for (const auto& l : st.lines) std::cout << l << "\n";
        for (const auto& c : st.checks)
            if (!c.pass) std::cout << "failed: " << c.key << ": expected " << c.expected << ", got " << c.actual << "\n";
    }
    return st.passed() ? 0 : 1;
}

int run(const std::string& command, const Options& o) {
    json doc = read_json_file(o.input);
    if (command == "run-scenario") {
        Scenario s = scenario_from_json(doc);
        if (o.seed_given) s.seed = o.seed;
        return emit(run_scenario(s), o, command);
    }
    Scenario s;
    s.name = command;
    s.seed = o.seed;
    // a scenario document works as input too: its structure block is used
    if (doc.is_object() && (doc.contains("algebroid") || doc.contains("bivector")))
        s.structure = scenario_from_json(doc).structure;
    else
        s.structure = structure_from_json(doc);
    json step = {{"op", command}};
    std::replace(step["op"].get_ref<std::string&>().begin(), step["op"].get_ref<std::string&>().end(), '-', '_');
    auto need = [&](bool have, const char* flag) {
        if (!have) throw CLI::ValidationError(command, std::string(flag) + " is required");
    };
    if (command == "kernel-at" || command == "isotropy" || command == "nash-fiber") {
        need(!o.point.empty(), "--point");
        step["point"] = parse_point_arg(o.point);
    }
    if (command == "nash-limit") {
        need(!o.curve.empty(), "--curve");
        step["curve"] = read_json_file(o.curve);
    }
    if (command == "pullback-chart" || command == "nash-chart-report" || command == "poisson-pullback") {
        need(!o.chart.empty() || o.chart_index >= 0, "--chart or --chart-index");
        step["chart"] = o.chart.empty() ? json{{"standard", o.chart_index}} : read_json_file(o.chart);
    }
    if (command == "validate") {
        json expect = {{"anchor_morphism", true}};
        if (s.structure->algebroid) expect["jacobi"] = true;
        step["expect"] = expect;
    }
    s.steps.push_back(step);
    return emit(run_scenario(s), o, command);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nash blow-ups of singular foliations: exact symbolic checks"};
    app.require_subcommand(1);
    Options o;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"validate", "check the anchor-morphism and Jacobi identities"},
        {"rank", "generic rank of the anchor"},
        {"singular-locus", "maximal minors of the anchor"},
        {"kernel-at", "kernel of the anchor at --point"},
        {"isotropy", "isotropy Lie algebra ker/Sker at --point"},
        {"nash-limit", "limit of kernels along --curve"},
        {"nash-fiber", "distinct limits along seeded arcs through --point"},
        {"pullback-chart", "pulled-back generators and their relations on --chart"},
        {"nash-chart-report", "frame, ideal and Debord checks on --chart"},
        {"poisson-pullback", "pulled-back bivector and its pole on --chart"},
        {"run-scenario", "run a scenario document and compare its expectations"},
    };
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--input", o.input, "structure (or scenario) JSON file")->required();
        sub->add_flag("--json", o.as_json, "emit JSON instead of text");
        sub->add_option("--seed", o.seed, "seed for random arcs and samples (default 0)")
            ->each([&](const std::string&) { o.seed_given = true; });
        if (name == "kernel-at" || name == "isotropy" || name == "nash-fiber")
            sub->add_option("--point", o.point, "comma-separated rationals p/q")->required();
        if (name == "nash-limit") sub->add_option("--curve", o.curve, "curve JSON file")->required();
        if (name == "pullback-chart" || name == "nash-chart-report" || name == "poisson-pullback") {
            auto* c = sub->add_option("--chart", o.chart, "chart JSON file");
            auto* ci = sub->add_option("--chart-index", o.chart_index, "standard blow-up chart i of the origin");
            c->excludes(ci);
        }
        if (name == "run-scenario") sub->add_flag("--timing", o.timing, "include per-step timings");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    std::string command = app.get_subcommands().front()->get_name();
    try {
        return run(command, o);
    } catch (const CLI::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << error_kind(e) << ": " << e.what() << "\n";
        return 2;
    }
}

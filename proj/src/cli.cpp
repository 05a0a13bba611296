#include "bratteli/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bratteli/infinitesimal.hpp"
#include "bratteli/json_io.hpp"
#include "bratteli/verify.hpp"

namespace bratteli::cli {

namespace {

constexpr int kPass = 0;
constexpr int kNegative = 1;
constexpr int kInconclusive = 2;
constexpr int kInputError = 3;

struct Common {
    std::string diagram_path;
    std::string order_path;
    std::string skeleton_path;
    std::string out_dir;
    int depth = -1;
    int horizon = -1;
    long long budget = 100000;
    bool dot = false;
    bool no_timestamp = false;
};

json make_report(const Common& opt, const std::string& subcommand) {
    json report;
    report["schema_version"] = 1;
    report["subcommand"] = subcommand;
    if (!opt.no_timestamp) {
        auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[64];
        std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&now));
        report["generated_at"] = buf;
    }
    return report;
}

void emit(const Common& opt, const json& report, const std::string& filename) {
    if (opt.out_dir.empty()) {
        std::cout << report.dump(2) << "\n";
        return;
    }
    std::filesystem::create_directories(opt.out_dir);
    std::string path = opt.out_dir + "/" + filename;
    std::ofstream out(path);
    out << report.dump(2) << "\n";
    std::cout << path << "\n";
}

void write_text(const Common& opt, const std::string& text, const std::string& filename) {
    if (opt.out_dir.empty()) {
        std::cout << text;
        return;
    }
    std::filesystem::create_directories(opt.out_dir);
    std::ofstream out(opt.out_dir + "/" + filename);
    out << text;
}

BratteliDiagram load_diagram(const Common& opt) {
    if (opt.diagram_path.empty()) throw input_error("--diagram is required");
    return diagram_from_json(load_json_file(opt.diagram_path), opt.depth);
}

json verdict_json(const PerfectVerdict& v, const BratteliDiagram& b) {
    json j;
    j["status"] = to_string(v.status);
    j["horizon"] = v.horizon;
    j["stationary_certificate"] = v.stationary_certificate;
    j["max_paths"] = v.max_path_count;
    j["min_paths"] = v.min_path_count;
    if (!v.pairing.empty()) {
        json pairing = json::array();
        for (auto [vt, vb] : v.pairing)
            pairing.push_back(json::array({b.vertex_name(1, vt), b.vertex_name(1, vb)}));
        j["pairing"] = std::move(pairing);
    }
    if (!v.witness.empty()) j["witness"] = v.witness;
    return j;
}

int cmd_validate(const Common& opt) {
    BratteliDiagram b = load_diagram(opt);
    json report = make_report(opt, "validate");
    report["diagram"] = diagram_to_json(b);
    DiagramClass cls = classify(b);
    json cj;
    cj["simple_verified"] = cls.simple_verified;
    cj["rank"] = cls.rank;
    cj["constant_vertex_counts"] = cls.constant_vertex_counts;
    cj["stationary"] = cls.stationary;
    cj["candidate_periodic"] = cls.candidate_periodic;
    cj["regularity"] = "assumed, not checked";
    if (cls.class_a) {
        cj["block_structure"] = {{"components", cls.class_a->k},
                                 {"connector_size", cls.class_a->c_size},
                                 {"connector_all_ones", cls.class_a->c_all_ones}};
    }
    report["classification"] = std::move(cj);

    ObstructionReport obstruction = class_A_obstruction(b);
    report["obstruction"] = {{"verdict", obstruction.verdict == ObstructionVerdict::NoPerfectOrder
                                             ? "NO_PERFECT_ORDER"
                                             : obstruction.verdict == ObstructionVerdict::NotBlocked
                                                   ? "NOT_BLOCKED"
                                                   : "NOT_APPLICABLE"},
                             {"reason", obstruction.reason}};

    int status = kPass;
    if (!opt.order_path.empty()) {
        DiagramOrder o = order_from_json(b, load_json_file(opt.order_path));
        report["order"] = {{"valid", true}, {"levels", b.depth()}};
    }
    if (!opt.skeleton_path.empty()) {
        SkeletonData sd = skeleton_from_json(b, load_json_file(opt.skeleton_path));
        validate_skeleton(b, sd.skeleton);
        CorrespondenceReport cr = validate_correspondence(b, sd.skeleton, sd.sigma);
        report["correspondence"] = {{"covering_ok", cr.covering_ok},
                                    {"composition_ok", cr.composition_ok},
                                    {"threads_ok", cr.threads_ok},
                                    {"threads_unique_up_to_depth", cr.threads_unique},
                                    {"point_map_from_level", cr.point_map_from_level},
                                    {"checked_depth", cr.checked_depth},
                                    {"assumed", cr.assumed}};
        if (!cr.witness.empty()) report["correspondence"]["witness"] = cr.witness;
        if (!cr.valid()) status = kNegative;
    }
    if (obstruction.verdict == ObstructionVerdict::NoPerfectOrder) status = kNegative;
    emit(opt, report, "validate.json");
    return status;
}

int cmd_telescope(const Common& opt, const std::string& levels_arg) {
    BratteliDiagram b = load_diagram(opt);
    std::vector<int> levels;
    std::string tok;
    for (char ch : levels_arg + ",") {
        if (ch == ',') {
            if (!tok.empty()) levels.push_back(std::stoi(tok));
            tok.clear();
        } else {
            tok += ch;
        }
    }
    TelescopeResult tel = telescope(b, levels);
    json report = make_report(opt, "telescope");
    report["levels"] = tel.levels;
    report["diagram"] = diagram_to_json(tel.diagram);
    if (!opt.order_path.empty()) {
        DiagramOrder o = order_from_json(b, load_json_file(opt.order_path));
        report["order"] = order_to_json(tel.diagram, telescope_order(b, o, tel))["levels"];
    }
    emit(opt, report, "telescope.json");
    return kPass;
}

int cmd_words(const Common& opt, int vertex, int from, int to) {
    BratteliDiagram b = load_diagram(opt);
    if (opt.order_path.empty()) throw input_error("--order is required");
    DiagramOrder o = order_from_json(b, load_json_file(opt.order_path));
    json report = make_report(opt, "words");
    int hi = to > 0 ? to : b.depth();
    std::vector<int> w = word(b, o, vertex, from, hi);
    report["vertex"] = b.vertex_name(hi, vertex);
    report["from_level"] = from;
    report["to_level"] = hi;
    report["length"] = w.size();
    json letters = json::array();
    for (int x : w) letters.push_back(b.vertex_name(from, x));
    report["word"] = std::move(letters);
    emit(opt, report, "words.json");
    return kPass;
}

int cmd_language(const Common& opt, int level) {
    BratteliDiagram b = load_diagram(opt);
    if (opt.order_path.empty()) throw input_error("--order is required");
    DiagramOrder o = order_from_json(b, load_json_file(opt.order_path));
    int horizon = opt.horizon > 0 ? opt.horizon : std::min(b.depth(), level + 2);
    LevelLanguage lang = level_language(b, o, level, horizon);
    json report = make_report(opt, "language");
    report["level"] = level;
    report["horizon"] = lang.horizon;
    json two = json::array();
    for (auto [x, y] : lang.two_letter)
        two.push_back(b.vertex_name(level, x) + b.vertex_name(level, y));
    report["two_letter_factors"] = std::move(two);
    json gens = json::array();
    for (const auto& g : lang.generators) {
        std::string s;
        for (int x : g) s += b.vertex_name(level, x);
        gens.push_back(s);
    }
    report["generators"] = std::move(gens);
    emit(opt, report, "language.json");
    return kPass;
}

int cmd_hgraph(const Common& opt, int level) {
    BratteliDiagram b = load_diagram(opt);
    if (opt.skeleton_path.empty()) throw input_error("--skeleton is required");
    SkeletonData sd = skeleton_from_json(b, load_json_file(opt.skeleton_path));
    validate_skeleton(b, sd.skeleton);
    json report = make_report(opt, "hgraph");
    report["graphs"] = json::array();
    int lo = level > 0 ? level : 2;
    int hi = level > 0 ? level : b.depth() - 1;
    bool all_ok = true;
    for (int n = lo; n <= hi; ++n) {
        AssociatedGraph g = build_graph(b, sd.skeleton, sd.sigma, n);
        json gj;
        gj["level"] = n;
        gj["cells"] = json::array();
        for (int i = 0; i < static_cast<int>(g.cells.size()); ++i) {
            json cj;
            cj["label"] = g.label(b, i);
            json members = json::array();
            for (int v : g.cells[i].members) members.push_back(b.vertex_name(n, v));
            cj["members"] = std::move(members);
            cj["successors"] = g.adj[i];
            gj["cells"].push_back(std::move(cj));
        }
        Connectivity base = connectivity(b, g);
        gj["strongly_connected"] = base.strong;
        gj["weakly_connected"] = base.weak;
        gj["targets"] = json::array();
        for (int u = 0; u < b.vertex_count(n + 1); ++u) {
            CrossingNumbers cross = crossing_numbers(b, sd.skeleton, g, u);
            Connectivity conn = connectivity(b, g, &cross);
            json tj;
            tj["target"] = b.vertex_name(n + 1, u);
            tj["crossings"] = cross.per_cell;
            tj["terminal_cell"] = g.label(b, cross.terminal_cell);
            tj["positively_strong"] = *conn.positively_strong;
            if (!conn.witness.empty()) tj["witness"] = conn.witness;
            if (!*conn.positively_strong) all_ok = false;
            gj["targets"].push_back(std::move(tj));
            if (opt.dot) {
                write_text(opt, export_dot(b, g, &cross, "H" + std::to_string(n)),
                           "hgraph_" + std::to_string(n) + "_" + b.vertex_name(n + 1, u) + ".dot");
            }
        }
        if (opt.dot && opt.out_dir.empty()) {
        } else if (opt.dot) {
            write_text(opt, export_dot(b, g, nullptr, "H" + std::to_string(n)),
                       "hgraph_" + std::to_string(n) + ".dot");
        }
        report["graphs"].push_back(std::move(gj));
    }
    emit(opt, report, "hgraph.json");
    return all_ok ? kPass : kNegative;
}

int cmd_balance(const Common& opt, int level, int target) {
    BratteliDiagram b = load_diagram(opt);
    if (opt.skeleton_path.empty()) throw input_error("--skeleton is required");
    SkeletonData sd = skeleton_from_json(b, load_json_file(opt.skeleton_path));
    validate_skeleton(b, sd.skeleton);
    json report = make_report(opt, "balance");
    report["targets"] = json::array();
    bool all_ok = true;
    int lo = level > 0 ? level : 2;
    int hi = level > 0 ? level : b.depth() - 1;
    for (int n = lo; n <= hi; ++n) {
        for (int u = 0; u < b.vertex_count(n + 1); ++u) {
            if (target >= 0 && u != target) continue;
            json tj;
            tj["level"] = n;
            tj["target"] = b.vertex_name(n + 1, u);
            auto dec = solve_decomposition(b, sd.skeleton, sd.sigma, n, u);
            if (!dec) {
                tj["status"] = "INFEASIBLE";
                all_ok = false;
            } else {
                tj["status"] = "FEASIBLE";
                tj["decomposition"] = dec->counts;
                BalanceReport check = check_balance(b, sd.skeleton, sd.sigma, n, u, *dec);
                tj["check"] = check.ok;
            }
            report["targets"].push_back(std::move(tj));
        }
    }
    emit(opt, report, "balance.json");
    return all_ok ? kPass : kNegative;
}

int cmd_synthesize(const Common& opt) {
    BratteliDiagram b = load_diagram(opt);
    if (opt.skeleton_path.empty()) throw input_error("--skeleton is required");
    SkeletonData sd = skeleton_from_json(b, load_json_file(opt.skeleton_path));
    validate_skeleton(b, sd.skeleton);
    CorrespondenceReport cr = validate_correspondence(b, sd.skeleton, sd.sigma);
    json report = make_report(opt, "synthesize");
    if (!cr.valid()) {
        report["status"] = "REFUSED";
        report["reason"] = "correspondence invalid: " + cr.witness;
        emit(opt, report, "synthesize.json");
        return kNegative;
    }
    SynthResult result = synthesize_order(b, sd.skeleton, sd.sigma);
    if (!result.ok) {
        report["status"] = "REFUSED";
        report["failures"] = json::array();
        for (const auto& f : result.failures)
            report["failures"].push_back({{"level", f.level},
                                          {"target", b.vertex_name(f.level + 1, f.target)},
                                          {"reason", f.reason}});
        emit(opt, report, "synthesize.json");
        return kNegative;
    }
    report["status"] = "OK";
    report["order"] = order_to_json(b, result.order);
    json traces = json::array();
    for (const auto& so : result.traces) {
        json tj;
        tj["level"] = so.level;
        tj["target"] = b.vertex_name(so.level + 1, so.target);
        std::string w;
        for (int x : so.word) w += b.vertex_name(so.level, x);
        tj["word"] = w;
        tj["cell_walk"] = so.cell_walk;
        traces.push_back(std::move(tj));
    }
    report["traces"] = std::move(traces);
    emit(opt, report, "synthesize.json");
    return kPass;
}

int cmd_verify(const Common& opt) {
    BratteliDiagram b = load_diagram(opt);
    if (opt.order_path.empty()) throw input_error("--order is required");
    DiagramOrder o = order_from_json(b, load_json_file(opt.order_path));
    PerfectVerdict verdict = check_perfect_finite_rank(b, o, opt.horizon);
    json report = make_report(opt, "verify");
    report["verdict"] = verdict_json(verdict, b);
    if (!opt.skeleton_path.empty()) {
        SkeletonData sd = skeleton_from_json(b, load_json_file(opt.skeleton_path));
        validate_skeleton(b, sd.skeleton);
        json checks = json::array();
        for (int n = 2; n < b.depth(); ++n) {
            WordsFollowGraph wf = check_words_follow_graph(b, o, sd.skeleton, sd.sigma, n,
                                                           std::min(b.depth(), n + 2));
            json cj;
            cj["level"] = n;
            cj["ok"] = wf.ok;
            if (!wf.ok)
                cj["offending_factor"] = b.vertex_name(n, wf.offending_factor.first) +
                                         b.vertex_name(n, wf.offending_factor.second);
            checks.push_back(std::move(cj));
        }
        report["words_follow_graph"] = std::move(checks);
    }
    emit(opt, report, "verify.json");
    switch (verdict.status) {
        case PerfectStatus::PerfectUpToDepth: return kPass;
        case PerfectStatus::NotPerfect: return kNegative;
        case PerfectStatus::Inconclusive: return kInconclusive;
    }
    return kInconclusive;
}

int cmd_census(const Common& opt, const std::string& mode) {
    BratteliDiagram b = load_diagram(opt);
    Census census = brute_force_orders(
        b, mode == "per_level" ? CensusMode::PerLevel : CensusMode::Stationary, opt.budget);
    // One order per line for stream processing.
    std::ostringstream lines;
    for (const auto& entry : census.entries) {
        json line;
        line["words"] = entry.words;
        line["status"] = to_string(entry.verdict.status);
        if (entry.verdict.status == PerfectStatus::PerfectUpToDepth) {
            line["balance_ok"] = entry.balance_ok;
            line["positively_strong"] = entry.positively_strong;
        }
        lines << line.dump() << "\n";
    }
    write_text(opt, lines.str(), "census.jsonl");
    json report = make_report(opt, "census");
    report["orders"] = census.order_count;
    report["perfect"] = census.perfect_count;
    emit(opt, report, "census.json");
    return kPass;
}

int cmd_infinitesimal(const Common& opt) {
    BratteliDiagram b = load_diagram(opt);
    if (opt.skeleton_path.empty()) throw input_error("--skeleton is required");
    SkeletonData sd = skeleton_from_json(b, load_json_file(opt.skeleton_path));
    validate_skeleton(b, sd.skeleton);
    json report = make_report(opt, "infinitesimal");
    int n = 2;
    report["base_level"] = n;
    report["vectors"] = json::array();
    std::vector<std::vector<long long>> vectors;
    for (int vt : sd.skeleton.max_vertex_list(n - 1)) {
        json vj;
        vj["base_vertex"] = b.vertex_name(n - 1, vt);
        try {
            InfinitesimalVector eps = epsilon_vector(b, sd.skeleton, sd.sigma, n, vt, 1);
            vj["entries"] = eps.entries;
            PropagateReport prop =
                propagate_check(b, sd.skeleton, sd.sigma, n, vt, b.depth() - n);
            vj["propagates"] = prop.ok;
            vectors.push_back(eps.entries);
            PairingReport pairing = perron_pairing_check(b, eps.entries);
            if (pairing.ok || pairing.reason == "pairing exceeds tolerance") {
                vj["pairing"] = pairing.pairing;
                vj["pairing_ok"] = pairing.ok;
            }
        } catch (const input_error& e) {
            vj["error"] = e.what();
        }
        report["vectors"].push_back(std::move(vj));
    }
    RankReport rank = independence_rank(vectors);
    report["rank"] = rank.rank;
    if (rank.dependency) report["dependency"] = *rank.dependency;
    emit(opt, report, "infinitesimal.json");
    return kPass;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"orderings on Bratteli diagrams: synthesis and verification"};
    app.require_subcommand(1);

    Common opt;
    std::string levels_arg = "0,1,2";
    std::string mode = "stationary";
    int level = -1, target = -1, vertex = 0, from = 0, to = -1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--diagram", opt.diagram_path, "diagram JSON file");
        sub->add_option("--order", opt.order_path, "order JSON file");
        sub->add_option("--skeleton", opt.skeleton_path, "skeleton/sigma JSON file");
        sub->add_option("--depth", opt.depth, "materialize stationary diagrams to this depth");
        sub->add_option("--horizon", opt.horizon, "language horizon");
        sub->add_option("--budget", opt.budget, "census budget");
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_flag("--dot", opt.dot, "emit DOT files");
        sub->add_flag("--no-timestamp", opt.no_timestamp, "omit the timestamp field");
    };

    CLI::App* validate = app.add_subcommand("validate", "validate inputs and classify");
    add_common(validate);
    CLI::App* tele = app.add_subcommand("telescope", "telescope a diagram (and order)");
    add_common(tele);
    tele->add_option("--levels", levels_arg, "comma-separated retained levels");
    CLI::App* words = app.add_subcommand("words", "emit a source word");
    add_common(words);
    words->add_option("--vertex", vertex, "vertex index");
    words->add_option("--from", from, "lower level");
    words->add_option("--to", to, "upper level");
    CLI::App* language = app.add_subcommand("language", "emit level language data");
    add_common(language);
    language->add_option("--level", level, "language level");
    CLI::App* hgraph = app.add_subcommand("hgraph", "build associated graphs");
    add_common(hgraph);
    hgraph->add_option("--level", level, "single level (default: all)");
    CLI::App* balance = app.add_subcommand("balance", "solve balance decompositions");
    add_common(balance);
    balance->add_option("--level", level, "single level (default: all)");
    balance->add_option("--target", target, "single target vertex");
    CLI::App* synthesize = app.add_subcommand("synthesize", "synthesize a perfect order");
    add_common(synthesize);
    CLI::App* verify = app.add_subcommand("verify", "perfectness verdict for an order");
    add_common(verify);
    CLI::App* census = app.add_subcommand("census", "brute-force order census");
    add_common(census);
    census->add_option("--mode", mode, "stationary or per_level");
    CLI::App* infin = app.add_subcommand("infinitesimal", "infinitesimal vectors and ranks");
    add_common(infin);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kPass : kInputError;
    }

    try {
        if (validate->parsed()) return cmd_validate(opt);
        if (tele->parsed()) return cmd_telescope(opt, levels_arg);
        if (words->parsed()) return cmd_words(opt, vertex, from, to);
        if (language->parsed()) return cmd_language(opt, level < 0 ? 1 : level);
        if (hgraph->parsed()) return cmd_hgraph(opt, level);
        if (balance->parsed()) return cmd_balance(opt, level, target);
        if (synthesize->parsed()) return cmd_synthesize(opt);
        if (verify->parsed()) return cmd_verify(opt);
        if (census->parsed()) return cmd_census(opt, mode);
        if (infin->parsed()) return cmd_infinitesimal(opt);
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}

}  // namespace bratteli::cli
